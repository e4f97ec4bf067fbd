//! Postselected homodyne receiver.
//!
//! Quadratures are normalized as `x̂ = (â + â†)/√2`, so `|±α⟩` produces a
//! Gaussian marginal with mean `±√2·α` and variance `1/2`. Outcomes above
//! `√2·B` are read as `|+α⟩`, below `−√2·B` as `|−α⟩`, and the window in
//! between is discarded. Loss enters as `α → √η·α` with the vacuum
//! variance unchanged.

use std::f64::consts::SQRT_2;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::alphabet::{OperatingPoint, SignalAlphabet};
use crate::error::{Error, Result};
use crate::optimize::bisect_increasing;
use crate::receiver::{Decision, OutcomeSampler, Receiver, Sign, VerdictProbabilities};
use crate::special::{erf, erfc};

/// Vacuum quadrature variance.
pub const SHOT_NOISE_VARIANCE: f64 = 0.5;

/// Tolerance on the inconclusive rate when inverting for the threshold.
pub const THRESHOLD_PINC_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomodyneConfig {
    threshold: f64,
    efficiency: f64,
    electronic_noise: f64,
}

impl HomodyneConfig {
    /// Ideal detector with postselection threshold `B`.
    pub fn new(threshold: f64) -> Result<Self> {
        Self::with_efficiency(threshold, 1.0)
    }

    pub fn with_efficiency(threshold: f64, efficiency: f64) -> Result<Self> {
        if !(threshold.is_finite() && threshold >= 0.0) {
            return Err(Error::domain(
                "threshold_b",
                format!("need finite B ≥ 0, got {threshold}"),
            ));
        }
        if !(efficiency > 0.0 && efficiency <= 1.0) {
            return Err(Error::domain(
                "efficiency_eta",
                format!("need 0 < η ≤ 1, got {efficiency}"),
            ));
        }
        Ok(Self {
            threshold,
            efficiency,
            electronic_noise: 0.0,
        })
    }

    /// Additive electronic noise variance on top of the vacuum's `1/2`.
    pub fn with_electronic_noise(mut self, variance: f64) -> Result<Self> {
        if !(variance.is_finite() && variance >= 0.0) {
            return Err(Error::domain(
                "electronic_noise",
                format!("need variance ≥ 0, got {variance}"),
            ));
        }
        self.electronic_noise = variance;
        Ok(self)
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    pub fn electronic_noise(&self) -> f64 {
        self.electronic_noise
    }

    fn effective_alpha(&self, alphabet: &SignalAlphabet) -> f64 {
        self.efficiency.sqrt() * alphabet.alpha()
    }

    /// Rescales erf arguments when extra noise widens the marginal.
    fn noise_scale(&self) -> f64 {
        1.0 / (1.0 + 2.0 * self.electronic_noise).sqrt()
    }

    fn outcome_std(&self) -> f64 {
        (SHOT_NOISE_VARIANCE + self.electronic_noise).sqrt()
    }
}

impl Receiver for HomodyneConfig {
    type Outcome = f64;
    type Sampler = QuadratureSampler;

    fn verdict_probabilities(&self, alphabet: &SignalAlphabet, sent: Sign) -> VerdictProbabilities {
        let alpha = self.effective_alpha(alphabet);
        let s = self.noise_scale();
        let far = SQRT_2 * (self.threshold + alpha) * s;
        let near = SQRT_2 * (self.threshold - alpha) * s;
        let wrong = 0.5 * erfc(far);
        let right = 0.5 * erfc(near);
        let inconclusive = 0.5 * (erf(far) + erf(near));
        match sent {
            Sign::Minus => VerdictProbabilities {
                guess_minus: right,
                guess_plus: wrong,
                inconclusive,
            },
            Sign::Plus => VerdictProbabilities {
                guess_minus: wrong,
                guess_plus: right,
                inconclusive,
            },
        }
    }

    fn decide(&self, x: f64) -> Decision {
        decide(x, self)
    }

    fn sampler(&self, alphabet: &SignalAlphabet) -> Result<QuadratureSampler> {
        QuadratureSampler::new(alphabet, self)
    }
}

/// `p_E,HD = (1 − erf(√2(B + α)))/(2(1 − p_inc,HD))`. Both states are
/// misread with the same probability, so this holds for any priors.
pub fn error_probability(alphabet: &SignalAlphabet, cfg: &HomodyneConfig) -> Result<f64> {
    Ok(cfg.operating_point(alphabet)?.p_error)
}

/// `p_inc,HD = ½(erf(√2(B + α)) + erf(√2(B − α)))`.
pub fn inconclusive_probability(alphabet: &SignalAlphabet, cfg: &HomodyneConfig) -> f64 {
    cfg.verdict_probabilities(alphabet, Sign::Plus).inconclusive
}

pub fn operating_point(alphabet: &SignalAlphabet, cfg: &HomodyneConfig) -> Result<OperatingPoint> {
    cfg.operating_point(alphabet)
}

/// Threshold `B ≥ 0` at which the receiver discards `target` of the
/// outcomes. The inconclusive rate is strictly increasing in `B`, so the
/// root is unique; it is bracketed by geometric growth and bisected to
/// `|p_inc(B) − target| ≤ 1e−10`.
pub fn threshold_for_inconclusive(
    alphabet: &SignalAlphabet,
    target: f64,
    efficiency: f64,
) -> Result<f64> {
    if !(0.0..1.0).contains(&target) {
        return Err(Error::domain(
            "target_p_inc",
            format!("reachable inconclusive rates are [0, 1), got {target}"),
        ));
    }
    let template = HomodyneConfig::with_efficiency(0.0, efficiency)?;
    let p_inc = |b: f64| {
        let cfg = HomodyneConfig {
            threshold: b,
            ..template
        };
        inconclusive_probability(alphabet, &cfg)
    };
    if target <= THRESHOLD_PINC_TOL {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while p_inc(hi) < target {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::domain(
                "target_p_inc",
                format!("{target} not bracketed"),
            ));
        }
    }
    Ok(bisect_increasing(
        p_inc,
        target,
        0.0,
        hi,
        THRESHOLD_PINC_TOL,
    ))
}

/// Three-way decision on a quadrature sample.
pub fn decide(x: f64, cfg: &HomodyneConfig) -> Decision {
    let edge = SQRT_2 * cfg.threshold;
    if x > edge {
        Decision::GuessPlus
    } else if x < -edge {
        Decision::GuessMinus
    } else {
        Decision::Inconclusive
    }
}

/// Gaussian quadrature outcomes for both alphabet states.
#[derive(Debug, Clone)]
pub struct QuadratureSampler {
    minus: Normal<f64>,
    plus: Normal<f64>,
}

impl QuadratureSampler {
    pub fn new(alphabet: &SignalAlphabet, cfg: &HomodyneConfig) -> Result<Self> {
        let mean = SQRT_2 * cfg.effective_alpha(alphabet);
        let std = cfg.outcome_std();
        let normal = |m: f64| {
            Normal::new(m, std).map_err(|e| Error::domain("electronic_noise", e.to_string()))
        };
        Ok(Self {
            minus: normal(-mean)?,
            plus: normal(mean)?,
        })
    }
}

impl OutcomeSampler for QuadratureSampler {
    type Outcome = f64;

    fn sample<R: Rng + ?Sized>(&self, sent: Sign, rng: &mut R) -> f64 {
        match sent {
            Sign::Minus => self.minus.sample(rng),
            Sign::Plus => self.plus.sample(rng),
        }
    }
}

/// One quadrature draw for the state `sent`.
pub fn sample<R: Rng + ?Sized>(
    sent: Sign,
    alphabet: &SignalAlphabet,
    cfg: &HomodyneConfig,
    rng: &mut R,
) -> f64 {
    let mean = sent.value() * SQRT_2 * cfg.effective_alpha(alphabet);
    let z: f64 = rng.sample(rand_distr::StandardNormal);
    mean + cfg.outcome_std() * z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::chefles_min_error;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alphabet(alpha_sq: f64) -> SignalAlphabet {
        SignalAlphabet::from_mean_photon_number(alpha_sq).unwrap()
    }

    /// Tail of N(μ, ½) beyond `edge`, written via the Gaussian CDF.
    fn gaussian_upper_tail(mu: f64, edge: f64) -> f64 {
        0.5 * erfc((edge - mu) / (2.0 * SHOT_NOISE_VARIANCE).sqrt())
    }

    #[test]
    fn zero_threshold_is_deterministic_homodyne() {
        for k in 0..30 {
            let a = alphabet(0.1 * k as f64);
            let cfg = HomodyneConfig::new(0.0).unwrap();
            assert_eq!(inconclusive_probability(&a, &cfg), 0.0);
            let want = 0.5 * erfc(SQRT_2 * a.alpha());
            assert!((error_probability(&a, &cfg).unwrap() - want).abs() < 1e-15);
        }
    }

    #[test]
    fn vacuum_is_a_coin_flip() {
        let a = alphabet(0.0);
        for &b in &[0.0, 0.3, 1.0, 2.0] {
            let cfg = HomodyneConfig::new(b).unwrap();
            assert!((error_probability(&a, &cfg).unwrap() - 0.5).abs() < 1e-14);
            assert!((inconclusive_probability(&a, &cfg) - erf(SQRT_2 * b)).abs() < 1e-15);
        }
    }

    #[test]
    fn quadrature_frozen_values() {
        // adaptive quadrature of the N(√2α, ½) marginal, 30 digits
        let a = alphabet(0.24);
        let cfg = HomodyneConfig::new(0.5).unwrap();
        let p_inc = inconclusive_probability(&a, &cfg);
        assert!((p_inc - 0.484_196_488_737_560_15).abs() < 1e-14, "{p_inc}");
        assert!((error_probability(&a, &cfg).unwrap() - 0.046_264_194_173_194_466).abs() < 1e-14);
    }

    #[test]
    fn tails_reproduce_the_closed_form_numerator() {
        for i in 0..20 {
            for j in 0..20 {
                let a = alphabet(0.1 * i as f64);
                let b = 0.1 * j as f64;
                let mu = SQRT_2 * a.alpha();
                let misread = 1.0 - gaussian_upper_tail(mu, -SQRT_2 * b);
                let formula = 0.5 * (1.0 - erf(SQRT_2 * (b + a.alpha())));
                assert!((misread - formula).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn monotone_in_threshold() {
        for &alpha_sq in &[0.05, 0.24, 1.0] {
            let a = alphabet(alpha_sq);
            let pts: Vec<OperatingPoint> = (0..300)
                .map(|k| {
                    operating_point(&a, &HomodyneConfig::new(0.01 * k as f64).unwrap()).unwrap()
                })
                .collect();
            assert!(pts.windows(2).all(|w| w[1].p_error <= w[0].p_error));
            assert!(pts
                .windows(2)
                .all(|w| w[1].p_inconclusive > w[0].p_inconclusive));
            assert!(pts.iter().all(|p| p.p_inconclusive < 1.0));
        }
    }

    #[test]
    fn threshold_inversion() {
        let a = alphabet(0.24);
        assert_eq!(threshold_for_inconclusive(&a, 0.0, 1.0).unwrap(), 0.0);
        let sigma = crate::alphabet::overlap(&a);
        let b = threshold_for_inconclusive(&a, sigma, 1.0).unwrap();
        let cfg = HomodyneConfig::new(b).unwrap();
        assert!((inconclusive_probability(&a, &cfg) - sigma).abs() <= 1e-10);

        // erfinv(0.5)/√2, 30 digits
        let b0 = threshold_for_inconclusive(&alphabet(0.0), 0.5, 1.0).unwrap();
        assert!((b0 - 0.337_244_875_098_040_87).abs() < 1e-9);

        assert!(threshold_for_inconclusive(&a, -0.1, 1.0).is_err());
        assert!(threshold_for_inconclusive(&a, 1.0, 1.0).is_err());
    }

    #[test]
    fn decision_regions() {
        let cfg = HomodyneConfig::new(1.0).unwrap();
        assert_eq!(decide(3.0, &cfg), Decision::GuessPlus);
        assert_eq!(decide(-3.0, &cfg), Decision::GuessMinus);
        assert_eq!(decide(0.0, &cfg), Decision::Inconclusive);
        assert_eq!(decide(SQRT_2, &cfg), Decision::Inconclusive);
    }

    #[test]
    fn verdicts_partition_unity() {
        for i in 0..15 {
            for j in 0..15 {
                let a = alphabet(0.15 * i as f64);
                let cfg = HomodyneConfig::with_efficiency(0.12 * j as f64, 0.858).unwrap();
                for sent in [Sign::Minus, Sign::Plus] {
                    let v = cfg.verdict_probabilities(&a, sent);
                    assert!((v.guess_minus + v.guess_plus + v.inconclusive - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn dominates_chefles_bound() {
        for i in 1..40 {
            for j in 0..40 {
                let a = alphabet(0.05 * i as f64);
                let op =
                    operating_point(&a, &HomodyneConfig::new(0.05 * j as f64).unwrap()).unwrap();
                if op.p_inconclusive < crate::alphabet::overlap(&a) {
                    let bound = chefles_min_error(&a, op.p_inconclusive).unwrap().p_error;
                    assert!(op.p_error >= bound - 1e-12);
                }
            }
        }
    }

    #[test]
    fn efficiency_is_amplitude_attenuation() {
        let a = alphabet(0.5);
        let lossy = HomodyneConfig::with_efficiency(0.4, 0.5).unwrap();
        let ideal = HomodyneConfig::new(0.4).unwrap();
        let pa = operating_point(&a, &lossy).unwrap();
        let pb = operating_point(&a.attenuated(0.5), &ideal).unwrap();
        assert!((pa.p_error - pb.p_error).abs() < 1e-15);
    }

    #[test]
    fn electronic_noise_worsens_error() {
        let a = alphabet(0.5);
        let quiet = HomodyneConfig::new(0.2).unwrap();
        let noisy = quiet.with_electronic_noise(0.05).unwrap();
        assert!(error_probability(&a, &noisy).unwrap() > error_probability(&a, &quiet).unwrap());
    }

    #[test]
    fn fully_inconclusive_is_reported() {
        let a = alphabet(0.0);
        let cfg = HomodyneConfig::new(40.0).unwrap();
        assert_eq!(error_probability(&a, &cfg), Err(Error::FullyInconclusive));
    }

    #[test]
    fn vacuum_samples_center_on_zero() {
        let a = alphabet(0.0);
        let cfg = HomodyneConfig::new(0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 200_000;
        let mean = (0..n)
            .map(|_| sample(Sign::Plus, &a, &cfg, &mut rng))
            .sum::<f64>()
            / n as f64;
        assert!(mean.abs() < 3.0 / (2.0 * n as f64).sqrt());
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let a = alphabet(0.24);
        let cfg = HomodyneConfig::new(0.5).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..64)
                .map(|_| sample(Sign::Minus, &a, &cfg, &mut rng))
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(5), draw(5));
        assert_ne!(draw(5), draw(6));
    }
}
