//! Displacement-controlled photon-number-resolving receiver.
//!
//! The signal is displaced by `β` and its photons counted: `n = 0` reads
//! as `|−α⟩`, `n > m` as `|+α⟩`, and `1 ≤ n ≤ m` is discarded. In the ideal
//! case the displaced states carry Poisson counts with means `(α − β)²` and
//! `(α + β)²`; `β = α, m = 0` is the Kennedy receiver.
//!
//! Imperfections keep the counts Poisson. With detection efficiency `η`,
//! interference visibility `V` and dark-count mean `d`:
//!
//! `λ∓ = η·[(α ∓ Vβ)² + (1 − V²)β²] + d`
//!
//! where the second term is the mismatched part of the displacement field
//! reaching the detector as incoherent background.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::Serialize;

use crate::alphabet::{OperatingPoint, SignalAlphabet};
use crate::error::{Error, Result};
use crate::optimize::golden_section;
use crate::receiver::{Decision, OutcomeSampler, Receiver, Sign, VerdictProbabilities};
use crate::special::{poisson_band_unchecked, poisson_sf};

/// Displacements searched are `[0, α + BETA_MARGIN]`.
pub const BETA_MARGIN: f64 = 5.0;
/// Golden-section refinement tolerance on `β`.
pub const BETA_TOL: f64 = 1e-8;
const MAX_GRID_POINTS: f64 = 20_000.0;
const MULTIMODAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PnrConfig {
    displacement: f64,
    threshold_m: u32,
    efficiency: f64,
    dark_count_mean: f64,
    visibility: f64,
}

impl PnrConfig {
    /// Ideal detector: unit efficiency and visibility, no dark counts.
    pub fn new(displacement: f64, threshold_m: u32) -> Result<Self> {
        Self {
            displacement,
            threshold_m,
            efficiency: 1.0,
            dark_count_mean: 0.0,
            visibility: 1.0,
        }
        .validated()
    }

    /// The Kennedy receiver for `alphabet`: `β = α`, `m = 0`.
    pub fn kennedy(alphabet: &SignalAlphabet) -> Self {
        Self::new(alphabet.alpha(), 0).expect("α is a valid displacement")
    }

    pub fn with_imperfections(
        self,
        efficiency: f64,
        dark_count_mean: f64,
        visibility: f64,
    ) -> Result<Self> {
        Self {
            efficiency,
            dark_count_mean,
            visibility,
            ..self
        }
        .validated()
    }

    pub fn with_displacement(self, displacement: f64) -> Result<Self> {
        Self {
            displacement,
            ..self
        }
        .validated()
    }

    pub fn with_threshold(self, threshold_m: u32) -> Self {
        Self {
            threshold_m,
            ..self
        }
    }

    fn validated(self) -> Result<Self> {
        if !(self.displacement.is_finite() && self.displacement >= 0.0) {
            return Err(Error::domain(
                "displacement_beta",
                format!("need finite β ≥ 0, got {}", self.displacement),
            ));
        }
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::domain(
                "efficiency_eta",
                format!("need 0 < η ≤ 1, got {}", self.efficiency),
            ));
        }
        if !(self.dark_count_mean.is_finite() && self.dark_count_mean >= 0.0) {
            return Err(Error::domain(
                "dark_count_mean",
                format!("need ≥ 0, got {}", self.dark_count_mean),
            ));
        }
        if !(self.visibility > 0.0 && self.visibility <= 1.0) {
            return Err(Error::domain(
                "visibility",
                format!("need 0 < V ≤ 1, got {}", self.visibility),
            ));
        }
        Ok(self)
    }

    pub fn displacement(&self) -> f64 {
        self.displacement
    }

    pub fn threshold_m(&self) -> u32 {
        self.threshold_m
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    pub fn dark_count_mean(&self) -> f64 {
        self.dark_count_mean
    }

    pub fn visibility(&self) -> f64 {
        self.visibility
    }
}

/// Mean count after displacement for the state `sent`.
pub fn displaced_mean_photon(sent: Sign, alphabet: &SignalAlphabet, cfg: &PnrConfig) -> f64 {
    let alpha = alphabet.alpha();
    let beta = cfg.displacement;
    let v = cfg.visibility;
    let coherent = (alpha + sent.value() * v * beta).powi(2);
    let mismatch = (1.0 - v * v) * beta * beta;
    cfg.efficiency * (coherent + mismatch) + cfg.dark_count_mean
}

/// `P(1 ≤ N ≤ m)` for `N ~ Poisson(λ)`, i.e. `Γ(m+1, λ)/Γ(m+1) − e^(−λ)`.
pub fn poisson_band(m: u32, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::domain(
            "lambda",
            format!("need finite λ ≥ 0, got {lambda}"),
        ));
    }
    Ok(poisson_band_unchecked(m, lambda))
}

impl Receiver for PnrConfig {
    type Outcome = u64;
    type Sampler = CountSampler;

    fn verdict_probabilities(&self, alphabet: &SignalAlphabet, sent: Sign) -> VerdictProbabilities {
        let lambda = displaced_mean_photon(sent, alphabet, self);
        VerdictProbabilities {
            guess_minus: (-lambda).exp(),
            guess_plus: poisson_sf(self.threshold_m, lambda),
            inconclusive: poisson_band_unchecked(self.threshold_m, lambda),
        }
    }

    fn decide(&self, n: u64) -> Decision {
        decide(n, self.threshold_m)
    }

    fn sampler(&self, alphabet: &SignalAlphabet) -> Result<CountSampler> {
        CountSampler::new(alphabet, self)
    }
}

/// `[1 − Γ(m+1,(α−β)²)/Γ(m+1) + e^(−(α+β)²)] / [2(1 − p_inc)]` for equal
/// priors; the prior-weighted analogue otherwise.
pub fn error_probability(alphabet: &SignalAlphabet, cfg: &PnrConfig) -> Result<f64> {
    Ok(cfg.operating_point(alphabet)?.p_error)
}

/// Prior-weighted probability of a count in `1..=m`.
pub fn inconclusive_probability(alphabet: &SignalAlphabet, cfg: &PnrConfig) -> f64 {
    alphabet.p1()
        * cfg
            .verdict_probabilities(alphabet, Sign::Minus)
            .inconclusive
        + alphabet.p2() * cfg.verdict_probabilities(alphabet, Sign::Plus).inconclusive
}

pub fn operating_point(alphabet: &SignalAlphabet, cfg: &PnrConfig) -> Result<OperatingPoint> {
    cfg.operating_point(alphabet)
}

pub fn decide(n: u64, m: u32) -> Decision {
    if n == 0 {
        Decision::GuessMinus
    } else if n > u64::from(m) {
        Decision::GuessPlus
    } else {
        Decision::Inconclusive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisplacementOptimum {
    pub beta: f64,
    pub operating_point: OperatingPoint,
    /// The grid showed more than one distinct local minimum.
    pub multimodal: bool,
}

/// Error-minimizing displacement for the ideal receiver with threshold `m`.
pub fn optimize_displacement(alphabet: &SignalAlphabet, m: u32) -> Result<DisplacementOptimum> {
    optimize_displacement_for(alphabet, &PnrConfig::new(0.0, m)?)
}

/// Error-minimizing displacement keeping every other setting of `template`.
///
/// A coarse grid over `[0, α + 5]` (step `α/50`) locates every local
/// minimum; each is refined by golden section to `|Δβ| ≤ 1e−8`.
pub fn optimize_displacement_for(
    alphabet: &SignalAlphabet,
    template: &PnrConfig,
) -> Result<DisplacementOptimum> {
    let alpha = alphabet.alpha();
    if alpha <= 0.0 {
        return Err(Error::domain(
            "alpha",
            "displacement optimization needs α > 0",
        ));
    }
    let beta_max = alpha + BETA_MARGIN;
    let step = (alpha / 50.0).max(beta_max / MAX_GRID_POINTS);
    let n = (beta_max / step).ceil() as usize;
    let error_at = |beta: f64| {
        let cfg = PnrConfig {
            displacement: beta.clamp(0.0, beta_max),
            ..*template
        };
        cfg.operating_point(alphabet)
            .map_or(f64::INFINITY, |p| p.p_error)
    };

    let betas: Vec<f64> = (0..=n).map(|i| (i as f64 * step).min(beta_max)).collect();
    let values: Vec<f64> = betas.iter().map(|&b| error_at(b)).collect();

    let mut minima: Vec<(f64, f64)> = Vec::new();
    for i in 0..values.len() {
        let left_higher = i == 0 || values[i] < values[i - 1];
        let right_not_lower = i + 1 == values.len() || values[i] <= values[i + 1];
        if left_higher && right_not_lower {
            let lo = betas[i.saturating_sub(1)];
            let hi = betas[(i + 1).min(betas.len() - 1)];
            let refined = golden_section(error_at, lo, hi, BETA_TOL);
            minima.push(if refined.1 <= values[i] {
                refined
            } else {
                (betas[i], values[i])
            });
        }
    }
    // the Kennedy point is always a candidate
    minima.push((alpha, error_at(alpha)));

    let best = minima
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one candidate");
    let multimodal = minima[..minima.len() - 1]
        .iter()
        .filter(|(b, _)| (b - best.0).abs() > 2.0 * step)
        .any(|(_, e)| *e > best.1 + MULTIMODAL_TOL);

    let cfg = PnrConfig {
        displacement: best.0,
        ..*template
    };
    Ok(DisplacementOptimum {
        beta: best.0,
        operating_point: cfg.operating_point(alphabet)?,
        multimodal,
    })
}

/// Poisson counts for both alphabet states.
#[derive(Debug, Clone)]
pub struct CountSampler {
    minus: Option<Poisson<f64>>,
    plus: Option<Poisson<f64>>,
}

impl CountSampler {
    pub fn new(alphabet: &SignalAlphabet, cfg: &PnrConfig) -> Result<Self> {
        let make = |sent| {
            let lambda = displaced_mean_photon(sent, alphabet, cfg);
            if lambda == 0.0 {
                Ok(None)
            } else {
                Poisson::new(lambda)
                    .map(Some)
                    .map_err(|e| Error::domain("lambda", e.to_string()))
            }
        };
        Ok(Self {
            minus: make(Sign::Minus)?,
            plus: make(Sign::Plus)?,
        })
    }
}

impl OutcomeSampler for CountSampler {
    type Outcome = u64;

    fn sample<R: Rng + ?Sized>(&self, sent: Sign, rng: &mut R) -> u64 {
        let dist = match sent {
            Sign::Minus => &self.minus,
            Sign::Plus => &self.plus,
        };
        dist.as_ref().map_or(0, |d| d.sample(rng) as u64)
    }
}

/// One photon count for the state `sent`.
pub fn sample<R: Rng + ?Sized>(
    sent: Sign,
    alphabet: &SignalAlphabet,
    cfg: &PnrConfig,
    rng: &mut R,
) -> Result<u64> {
    Ok(CountSampler::new(alphabet, cfg)?.sample(sent, rng))
}
