//! Overlap, minimum-error and error-free limits over a range of amplitudes,
//! plus the intermediate-measurement bound traced between them.

use cohdisc::alphabet::{chefles_min_error, helstrom_error, overlap, SignalAlphabet};

fn main() -> cohdisc::Result<()> {
    println!("alpha_sq  sigma     helstrom  usd_pinc");
    for alpha_sq in [0.05, 0.24, 0.47, 1.0, 2.0] {
        let a = SignalAlphabet::from_mean_photon_number(alpha_sq)?;
        println!(
            "{alpha_sq:<8}  {:.6}  {:.6}  {:.6}",
            overlap(&a),
            helstrom_error(&a),
            cohdisc::alphabet::usd_inconclusive(&a)?
        );
    }

    let a = SignalAlphabet::from_mean_photon_number(0.24)?;
    let sigma = overlap(&a);
    println!("\nbound at alpha_sq = 0.24");
    for k in 0..=10 {
        let p_inc = sigma * k as f64 / 10.0;
        let b = chefles_min_error(&a, p_inc)?;
        println!("  p_inc = {p_inc:.4}  p_err >= {:.6e}", b.p_error);
    }
    Ok(())
}
