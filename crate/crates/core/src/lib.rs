//! Binary coherent-state discrimination with postselection: closed-form
//! receiver models, performance bounds, Gaussian-measurement optimality
//! scans, Monte Carlo simulation and detector mode-overlap analysis.

pub mod alphabet;
pub mod cli;
pub mod error;
pub mod gaussian;
pub mod homodyne;
pub mod mode_overlap;
pub mod montecarlo;
pub mod optimize;
pub mod pnr;
pub mod receiver;
pub mod special;

pub use error::{Error, Result};
