//! Seeded simulation of both receivers over a parameter sweep. The result
//! does not depend on the number of worker threads.

use cohdisc::montecarlo::{sweep_operating_curve, SweepFamily};
use cohdisc::pnr::PnrConfig;

fn main() -> cohdisc::Result<()> {
    let alphas = [0.24, 0.47];
    let seed = 42;
    let n = 200_000;

    let hd = SweepFamily::Homodyne {
        efficiency: 1.0,
        electronic_noise: 0.0,
    };
    let pnr = SweepFamily::Pnr {
        template: PnrConfig::new(0.0, 1)?,
    };

    for (family, params) in [(hd, vec![0.0, 0.5, 1.0]), (pnr, vec![0.5, 0.7, 0.9])] {
        for row in sweep_operating_curve(&alphas, &family, &params, n, seed, None)? {
            let closed = row.closed.expect("conclusive configuration");
            let e = row.empirical;
            println!(
                "{:<8} alpha_sq {:.2} param {:.2}: p_err {:.5} +- {:.5} (exact {:.5}), p_inc {:.5} (exact {:.5}){}",
                row.receiver,
                row.alpha_sq,
                row.parameter,
                e.p_error_hat.unwrap_or(f64::NAN),
                e.se_error.unwrap_or(f64::NAN),
                closed.p_error,
                e.p_inconclusive_hat,
                closed.p_inconclusive,
                if e.agrees_with(&closed, 3.0) { "" } else { "  <- outside 3 SE" }
            );
        }
    }

    let one = sweep_operating_curve(&[0.24], &hd, &[0.5], n, seed, Some(1))?;
    let many = sweep_operating_curve(&[0.24], &hd, &[0.5], n, seed, Some(8))?;
    println!(
        "\n1 vs 8 workers identical: {}",
        one[0].empirical == many[0].empirical
    );
    Ok(())
}
