//! Spot check of a measurement with conditional dynamics: part of the
//! signal is split off and heterodyned, and the rest is homodyned with the
//! decision informed by the first outcome.
//!
//! Conditioned on the heterodyne result the remaining signal is again a
//! mixture of the two coherent states, only with reweighted priors. The
//! combined log-likelihood ratio is Gaussian with the statistics of a single
//! homodyne measurement at `α_h² = α²(1 + T)/2`, where `T` is the fraction
//! sent to the homodyne detector. Since `α_h ≤ α` the two-step scheme can
//! never beat direct homodyne detection of the full signal.

use std::f64::consts::SQRT_2;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{conditional_rates, GaussianPovmParams, HOMODYNE_PROXY_R};
use crate::alphabet::{OperatingPoint, SignalAlphabet};
use crate::error::{Error, Result};
use crate::homodyne::{self, HomodyneConfig};
use crate::montecarlo::{row_seed, tally_trials, EmpiricalRates};
use crate::receiver::{Decision, Receiver, Sign};

fn check_transmissivity(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::domain(
            "transmissivity",
            format!("{t} is outside [0, 1]"),
        ))
    }
}

/// Alphabet whose direct homodyne statistics equal those of the two-step
/// scheme with homodyne fraction `transmissivity`.
pub fn equivalent_homodyne_alphabet(
    alphabet: &SignalAlphabet,
    transmissivity: f64,
) -> Result<SignalAlphabet> {
    check_transmissivity(transmissivity)?;
    SignalAlphabet::with_priors(
        alphabet.alpha() * (0.5 * (1.0 + transmissivity)).sqrt(),
        alphabet.p1(),
    )
}

/// Closed-form operating point of the two-step scheme with likelihood
/// threshold `lambda_b`.
pub fn two_step_operating_point(
    alphabet: &SignalAlphabet,
    transmissivity: f64,
    lambda_b: f64,
) -> Result<OperatingPoint> {
    let equivalent = equivalent_homodyne_alphabet(alphabet, transmissivity)?;
    let params = GaussianPovmParams::new(HOMODYNE_PROXY_R, 0.0, lambda_b)?;
    conditional_rates(&equivalent, &params)?.operating_point(&equivalent)
}

/// Simulates the two detectors outcome by outcome.
pub fn simulate_two_step(
    alphabet: &SignalAlphabet,
    transmissivity: f64,
    lambda_b: f64,
    n_trials: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<EmpiricalRates> {
    check_transmissivity(transmissivity)?;
    GaussianPovmParams::new(0.0, 0.0, lambda_b)?;
    if !(alphabet.p1() > 0.0 && alphabet.p2() > 0.0) {
        return Err(Error::domain("p1", "both priors must be positive"));
    }
    if n_trials == 0 {
        return Err(Error::domain("n_trials", "need at least one trial"));
    }
    let het_mean = SQRT_2 * alphabet.alpha() * (1.0 - transmissivity).sqrt();
    let hd_mean = SQRT_2 * alphabet.alpha() * transmissivity.sqrt();
    let prior_log_odds = (alphabet.p1() / alphabet.p2()).ln();
    let ln_threshold = lambda_b.ln();
    let p_minus = alphabet.p1();

    let tally = tally_trials(n_trials, seed, workers, |rng| {
        let sent = if rng.random::<f64>() < p_minus {
            Sign::Minus
        } else {
            Sign::Plus
        };
        // heterodyne: unit variance per quadrature, only the signal quadrature is informative
        let u = sent.value() * het_mean + rng.sample::<f64, _>(StandardNormal);
        let posterior_log_odds = prior_log_odds - 2.0 * het_mean * u;
        let x = sent.value() * hd_mean
            + rng.sample::<f64, _>(StandardNormal) * homodyne::SHOT_NOISE_VARIANCE.sqrt();
        let ln_lambda = posterior_log_odds - 4.0 * hd_mean * x;
        let decision = if ln_lambda >= ln_threshold {
            Decision::GuessMinus
        } else if -ln_lambda >= ln_threshold {
            Decision::GuessPlus
        } else {
            Decision::Inconclusive
        };
        (sent, decision)
    })?;
    Ok(tally.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoStepCheck {
    pub transmissivity: f64,
    pub lambda_b: f64,
    pub equivalent_alpha_sq: f64,
    pub closed: OperatingPoint,
    pub empirical: EmpiricalRates,
    /// Direct homodyne of the full signal at the same inconclusive rate.
    pub direct_homodyne: OperatingPoint,
}

impl TwoStepCheck {
    /// Ties within the threshold-inversion tolerance do not count.
    pub fn beats_direct_homodyne(&self) -> bool {
        self.closed.p_error < self.direct_homodyne.p_error - 1e-9
    }
}

/// Sweeps the heterodyne split and compares each two-step operating point
/// with direct homodyne detection at the matched inconclusive rate
/// (equal priors).
pub fn two_step_spot_check(
    alphabet: &SignalAlphabet,
    transmissivities: &[f64],
    lambda_b: f64,
    n_trials: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<Vec<TwoStepCheck>> {
    alphabet.require_equal_priors()?;
    transmissivities
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let closed = two_step_operating_point(alphabet, t, lambda_b)?;
            let empirical =
                simulate_two_step(alphabet, t, lambda_b, n_trials, row_seed(seed, i), workers)?;
            let threshold =
                homodyne::threshold_for_inconclusive(alphabet, closed.p_inconclusive, 1.0)?;
            let direct_homodyne = HomodyneConfig::new(threshold)?.operating_point(alphabet)?;
            Ok(TwoStepCheck {
                transmissivity: t,
                lambda_b,
                equivalent_alpha_sq: equivalent_homodyne_alphabet(alphabet, t)?
                    .mean_photon_number(),
                closed,
                empirical,
                direct_homodyne,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphabet(alpha_sq: f64) -> SignalAlphabet {
        SignalAlphabet::from_mean_photon_number(alpha_sq).unwrap()
    }

    #[test]
    fn full_transmission_is_plain_homodyne() {
        let a = alphabet(0.47);
        let b = 0.4;
        let op = two_step_operating_point(&a, 1.0, (8.0 * a.alpha() * b).exp()).unwrap();
        let hd = HomodyneConfig::new(b).unwrap().operating_point(&a).unwrap();
        assert!((op.p_error - hd.p_error).abs() < 1e-12);
        assert!((op.p_inconclusive - hd.p_inconclusive).abs() < 1e-12);
    }

    #[test]
    fn pure_heterodyne_halves_the_photon_number() {
        let a = alphabet(0.8);
        assert!(
            (equivalent_homodyne_alphabet(&a, 0.0)
                .unwrap()
                .mean_photon_number()
                - 0.4)
                .abs()
                < 1e-15
        );
        assert!(equivalent_homodyne_alphabet(&a, 1.5).is_err());
    }

    #[test]
    fn simulation_matches_the_equivalent_homodyne() {
        let a = alphabet(0.6);
        for (i, &t) in [0.0, 0.3, 0.8].iter().enumerate() {
            let closed = two_step_operating_point(&a, t, 4.0).unwrap();
            let rates = simulate_two_step(&a, t, 4.0, 1_000_000, 100 + i as u64, None).unwrap();
            assert!(
                rates.agrees_with(&closed, 3.0),
                "T={t}: {rates:?} vs {closed:?}"
            );
        }
    }

    #[test]
    fn unequal_priors_simulation_matches() {
        let a = SignalAlphabet::with_priors(0.9, 0.3).unwrap();
        let closed = two_step_operating_point(&a, 0.5, 3.0).unwrap();
        let rates = simulate_two_step(&a, 0.5, 3.0, 1_000_000, 9, None).unwrap();
        assert!(rates.agrees_with(&closed, 3.0));
    }

    #[test]
    fn never_beats_direct_homodyne() {
        let a = alphabet(0.24);
        let grid: Vec<f64> = (0..=10).map(|k| 0.1 * k as f64).collect();
        for &lambda_b in &[1.0, 2.0, 8.0] {
            for check in two_step_spot_check(&a, &grid, lambda_b, 1000, 1, None).unwrap() {
                assert!(!check.beats_direct_homodyne(), "{check:?}");
                assert!(check.closed.p_error >= check.direct_homodyne.p_error - 1e-12);
            }
        }
    }
}
