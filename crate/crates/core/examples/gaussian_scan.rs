//! Scans the family of single-mode Gaussian measurements followed by a
//! likelihood-ratio decision and checks that homodyne detection is the best
//! of them. Also runs the heterodyne-then-homodyne spot check.

use cohdisc::alphabet::SignalAlphabet;
use cohdisc::gaussian::{
    conditional_rates, scan_optimality, standard_phi_grid, standard_r_grid, two_step_spot_check,
    GaussianPovmParams,
};

fn main() -> cohdisc::Result<()> {
    let a = SignalAlphabet::from_mean_photon_number(0.24)?;
    let (r_grid, phi_grid) = (standard_r_grid(), standard_phi_grid());

    for lambda_b in [1.0, 2.0, 8.0] {
        let report = scan_optimality(&a, lambda_b, &r_grid, &phi_grid)?;
        let e = report.argmin_error;
        let i = report.argmin_inconclusive;
        println!(
            "lambda_B = {lambda_b}: {} points, min error at (r={}, phi={:.3}), min inconclusive at (r={}, phi={:.3}), violations {}",
            report.points.len(),
            e.r,
            e.phi,
            i.r,
            i.phi,
            report.violations.len()
        );
    }

    let heterodyne = GaussianPovmParams::new(0.0, 0.0, 2.0)?;
    let rates = conditional_rates(&a, &heterodyne)?.operating_point(&a)?;
    println!(
        "heterodyne, lambda_B = 2: p_err {:.5}, p_inc {:.5}",
        rates.p_error, rates.p_inconclusive
    );

    let splits = [0.0, 0.25, 0.5, 0.75, 1.0];
    for check in two_step_spot_check(&a, &splits, 4.0, 100_000, 11, None)? {
        println!(
            "T = {:.2}: two-step p_err {:.5} vs direct homodyne {:.5} (beats: {})",
            check.transmissivity,
            check.closed.p_error,
            check.direct_homodyne.p_error,
            check.beats_direct_homodyne()
        );
    }
    Ok(())
}
