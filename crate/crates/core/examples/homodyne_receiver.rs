//! Postselected homodyne detection: closed-form operating points, threshold
//! inversion and a short simulated run.

use cohdisc::alphabet::{chefles_min_error, SignalAlphabet};
use cohdisc::homodyne::{threshold_for_inconclusive, HomodyneConfig};
use cohdisc::montecarlo::simulate;
use cohdisc::receiver::Receiver;

fn main() -> cohdisc::Result<()> {
    let a = SignalAlphabet::from_mean_photon_number(0.24)?;

    println!("B     p_inc     p_err     bound");
    for b in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let op = HomodyneConfig::new(b)?.operating_point(&a)?;
        let bound = chefles_min_error(&a, op.p_inconclusive)?.p_error;
        println!(
            "{b:<4}  {:.6}  {:.6}  {:.6}",
            op.p_inconclusive, op.p_error, bound
        );
    }

    // discard half of the outcomes
    let b = threshold_for_inconclusive(&a, 0.5, 1.0)?;
    println!("\nB for p_inc = 0.5: {b:.8}");

    // 85.8% detector efficiency, electronic noise 23 dB below shot noise
    let cfg =
        HomodyneConfig::with_efficiency(b, 0.858)?.with_electronic_noise(0.5 * 10f64.powf(-2.3))?;
    let closed = cfg.operating_point(&a)?;
    let sim = simulate(&a, &cfg, 200_000, 7, None)?;
    println!(
        "lossy: closed p_err {:.5} p_inc {:.5}; simulated p_err {:.5} p_inc {:.5}",
        closed.p_error,
        closed.p_inconclusive,
        sim.p_error_hat.unwrap_or(f64::NAN),
        sim.p_inconclusive_hat
    );
    Ok(())
}
