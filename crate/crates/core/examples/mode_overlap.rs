//! Overlap between the detected temporal mode and the ideal rectangular
//! window, for a Chebyshev-filtered detector and for a measured response
//! read from a file.
//!
//! ```text
//! cargo run --example mode_overlap [response.csv]
//! ```

use std::fs::File;
use std::io::BufReader;

use cohdisc::mode_overlap::{
    best_alignment, chebyshev_g12, chebyshev_impulse, effective_response, ImpulseResponse,
    Truncation, WindowSpec, DEFAULT_DT, DEFAULT_SAMPLES,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let window = WindowSpec::new(800e-9, 20e6)?;

    for ripple in [0.1, 0.5, 1.0] {
        println!(
            "7-pole, 10 MHz, {ripple} dB: g12 = {:.4}",
            chebyshev_g12(7, 10e6, ripple, &window)?
        );
    }
    for cutoff in [1e6, 3e6, 30e6, 100e6] {
        println!(
            "7-pole, {:>5.0} MHz, 0.5 dB: g12 = {:.4}",
            cutoff / 1e6,
            chebyshev_g12(7, cutoff, 0.5, &window)?
        );
    }

    let g = match std::env::args().nth(1) {
        Some(path) => ImpulseResponse::read_from(BufReader::new(File::open(path)?))?,
        None => chebyshev_impulse(
            7,
            10e6,
            0.5,
            DEFAULT_DT,
            DEFAULT_SAMPLES,
            Truncation::Extend,
        )?,
    };
    let g_eff = effective_response(&g, &window)?;
    let alignment = best_alignment(&g_eff, &window)?;
    println!(
        "\nresponse of {} samples: g12 = {:.4}, best delay {:.1} ns",
        g.len(),
        alignment.g12,
        alignment.delay * 1e9
    );
    Ok(())
}
