//! Photon counting against homodyne detection at equal inconclusive rates.

use cohdisc::alphabet::SignalAlphabet;
use cohdisc::montecarlo::matched_inc_comparison;

fn main() -> cohdisc::Result<()> {
    let m = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    println!("m = {m}");
    println!("alpha_sq  p_inc     p_err_pnr    p_err_hd     bound");
    for k in 0..8 {
        let alpha_sq = 0.05 + 0.25 * k as f64;
        let a = SignalAlphabet::from_mean_photon_number(alpha_sq)?;
        let row = matched_inc_comparison(&a, m, 1.0, 0, 0, None)?;
        println!(
            "{alpha_sq:<8.2}  {:.6}  {:.6e}  {:.6e}  {:.6e}",
            row.p_inconclusive, row.pnr.p_error, row.homodyne.p_error, row.chefles
        );
    }

    let a = SignalAlphabet::from_mean_photon_number(0.24)?;
    let row = matched_inc_comparison(&a, m, 1.0, 500_000, 2024, None)?;
    let (pnr, hd) = (row.pnr_empirical.unwrap(), row.homodyne_empirical.unwrap());
    println!(
        "\nsimulated at 0.24: pnr {:.5} +- {:.5}, homodyne {:.5} +- {:.5}",
        pnr.p_error_hat.unwrap_or(f64::NAN),
        pnr.se_error.unwrap_or(f64::NAN),
        hd.p_error_hat.unwrap_or(f64::NAN),
        hd.se_error.unwrap_or(f64::NAN)
    );
    Ok(())
}
