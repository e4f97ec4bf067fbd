//! The binary coherent-state alphabet `{|−α⟩, |+α⟩}` and the performance
//! bounds every receiver is measured against.
//!
//! For real `α` the overlap of the two states is `σ = |⟨−α|α⟩| = exp(−2α²)`.
//! The minimum-error (Helstrom) rate, the error-free (USD) inconclusive rate
//! and the intermediate bound interpolating between them all follow from `σ`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Radicands down to this value are treated as floating-point zero.
const RADICAND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignalAlphabet {
    alpha: f64,
    p_minus: f64,
}

impl SignalAlphabet {
    /// Equal priors.
    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_priors(alpha, 0.5)
    }

    /// `p_minus` is the prior of `|−α⟩`; `|+α⟩` gets the complement.
    pub fn with_priors(alpha: f64, p_minus: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::domain(
                "alpha",
                format!("need finite α ≥ 0, got {alpha}"),
            ));
        }
        if !(0.0..=1.0).contains(&p_minus) {
            return Err(Error::domain(
                "p1",
                format!("prior must lie in [0, 1], got {p_minus}"),
            ));
        }
        Ok(Self { alpha, p_minus })
    }

    /// Builds the alphabet from the mean photon number `|α|²`.
    pub fn from_mean_photon_number(alpha_sq: f64) -> Result<Self> {
        if !(alpha_sq.is_finite() && alpha_sq >= 0.0) {
            return Err(Error::domain(
                "alpha_sq",
                format!("need finite |α|² ≥ 0, got {alpha_sq}"),
            ));
        }
        Self::new(alpha_sq.sqrt())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.alpha * self.alpha
    }

    /// Prior of `|−α⟩`.
    pub fn p1(&self) -> f64 {
        self.p_minus
    }

    /// Prior of `|+α⟩`.
    pub fn p2(&self) -> f64 {
        1.0 - self.p_minus
    }

    pub fn has_equal_priors(&self) -> bool {
        self.p_minus == 0.5
    }

    /// Same priors, amplitude scaled by `√η` (beam-splitter loss).
    pub fn attenuated(&self, efficiency: f64) -> Self {
        Self {
            alpha: self.alpha * efficiency.sqrt(),
            p_minus: self.p_minus,
        }
    }

    pub(crate) fn require_equal_priors(&self) -> Result<()> {
        if self.has_equal_priors() {
            Ok(())
        } else {
            Err(Error::domain(
                "p1",
                "this quantity is defined for equal priors only",
            ))
        }
    }
}

/// A receiver's `(p_error, p_inconclusive)` pair. `p_error` is conditioned
/// on acceptance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPoint {
    pub p_error: f64,
    pub p_inconclusive: f64,
}

impl OperatingPoint {
    pub fn new(p_error: f64, p_inconclusive: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_error) {
            return Err(Error::domain(
                "p_error",
                format!("{p_error} is not a probability"),
            ));
        }
        if !(0.0..=1.0).contains(&p_inconclusive) {
            return Err(Error::domain(
                "p_inconclusive",
                format!("{p_inconclusive} is not a probability"),
            ));
        }
        Ok(Self {
            p_error,
            p_inconclusive,
        })
    }

    /// From per-state probabilities: `wrong` is the prior-weighted
    /// probability of a wrong verdict, `accepted` that of any verdict.
    pub(crate) fn from_weighted(wrong: f64, accepted: f64) -> Result<Self> {
        if accepted <= 0.0 {
            return Err(Error::FullyInconclusive);
        }
        Ok(Self {
            p_error: (wrong / accepted).clamp(0.0, 1.0),
            p_inconclusive: (1.0 - accepted).clamp(0.0, 1.0),
        })
    }
}

/// `σ = exp(−2α²)`.
pub fn overlap(alphabet: &SignalAlphabet) -> f64 {
    (-2.0 * alphabet.mean_photon_number()).exp()
}

/// Minimum error probability of a deterministic measurement.
pub fn helstrom_error(alphabet: &SignalAlphabet) -> f64 {
    let sigma = overlap(alphabet);
    let radicand = 1.0 - 4.0 * alphabet.p1() * alphabet.p2() * sigma * sigma;
    0.5 * (1.0 - radicand.max(0.0).sqrt())
}

/// Inconclusive rate of optimal unambiguous discrimination (equal priors).
pub fn usd_inconclusive(alphabet: &SignalAlphabet) -> Result<f64> {
    alphabet.require_equal_priors()?;
    Ok(overlap(alphabet))
}

/// Value of the intermediate-measurement bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheflesBound {
    pub p_error: f64,
    /// `p_inc` exceeded `σ`: error-free discrimination is already possible
    /// and the bound was clamped to zero.
    pub beyond_usd: bool,
}

/// Least achievable error rate when a fraction `p_inc` of the outcomes may
/// be discarded (equal priors):
///
/// `p_E ≥ ½ (1 − √(1 − 2 p_inc (1−σ) − σ²) / (1 − p_inc))`.
pub fn chefles_min_error(alphabet: &SignalAlphabet, p_inc: f64) -> Result<CheflesBound> {
    alphabet.require_equal_priors()?;
    if !(0.0..=1.0).contains(&p_inc) {
        return Err(Error::domain(
            "p_inc",
            format!("{p_inc} is not a probability"),
        ));
    }
    let sigma = overlap(alphabet);
    if p_inc >= sigma {
        return Ok(CheflesBound {
            p_error: 0.0,
            beyond_usd: p_inc > sigma,
        });
    }
    let radicand = 1.0 - 2.0 * p_inc * (1.0 - sigma) - sigma * sigma;
    let radicand = if (-RADICAND_SLACK..0.0).contains(&radicand) {
        0.0
    } else {
        radicand
    };
    let p_error = 0.5 * (1.0 - radicand.sqrt() / (1.0 - p_inc));
    Ok(CheflesBound {
        p_error: p_error.max(0.0),
        beyond_usd: false,
    })
}
