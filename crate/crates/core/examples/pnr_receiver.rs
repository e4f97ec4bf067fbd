//! Displacement receiver with a photon-number-resolving detector.

use cohdisc::alphabet::SignalAlphabet;
use cohdisc::pnr::{optimize_displacement, PnrConfig};
use cohdisc::receiver::Receiver;

fn main() -> cohdisc::Result<()> {
    let a = SignalAlphabet::from_mean_photon_number(0.24)?;

    let kennedy = PnrConfig::kennedy(&a).operating_point(&a)?;
    println!(
        "Kennedy: p_err = {:.6}, p_inc = {}",
        kennedy.p_error, kennedy.p_inconclusive
    );

    for m in 0..=3 {
        let opt = optimize_displacement(&a, m)?;
        println!(
            "m = {m}: beta_opt = {:.6}  p_err = {:.6e}  p_inc = {:.6}{}",
            opt.beta,
            opt.operating_point.p_error,
            opt.operating_point.p_inconclusive,
            if opt.multimodal { "  (multimodal)" } else { "" }
        );
    }

    let noisy = PnrConfig::new(0.0, 1)?.with_imperfections(0.6, 1e-3, 0.98)?;
    let opt = cohdisc::pnr::optimize_displacement_for(&a, &noisy)?;
    println!(
        "m = 1, eta 0.6, dark 1e-3, visibility 0.98: beta_opt = {:.4}, p_err = {:.4e}",
        opt.beta, opt.operating_point.p_error
    );

    let ratio = {
        let a = SignalAlphabet::from_mean_photon_number(0.47)?;
        optimize_displacement(&a, 0)?.operating_point.p_error
            / optimize_displacement(&a, 2)?.operating_point.p_error
    };
    println!("error ratio m=0 / m=2 at alpha_sq = 0.47: {ratio:.3}");
    Ok(())
}
