//! Single-mode Gaussian measurements of the signal and their three-way
//! likelihood-ratio decision.
//!
//! A noise-free Gaussian POVM is fixed by a squeezing magnitude `r` and
//! phase `φ`; its covariance is
//!
//! ```text
//! Γ = [[cosh2r − sinh2r·cosφ, sinh2r·sinφ],
//!      [sinh2r·sinφ,          cosh2r + sinh2r·cosφ]]
//! ```
//!
//! `r = 0` is heterodyne detection and `φ = 0, r → ∞` homodyne detection of
//! the quadrature that carries the signal. The outcome `(u, v)` for state
//! `|±α⟩` is Gaussian with mean `(±√2α, 0)` and covariance `(Γ + I)/2`; its
//! information about the sign enters only through `t = a·u + c·v`, where
//! `[[a, c], [c, b]] = (Γ + I)⁻¹`.

mod scan;
mod two_step;

pub use scan::{
    scan_optimality, standard_phi_grid, standard_r_grid, ScanPoint, ScanReport, ScanViolation,
    ViolationKind, HOMODYNE_PROXY_R,
};
pub use two_step::{
    equivalent_homodyne_alphabet, simulate_two_step, two_step_operating_point, two_step_spot_check,
    TwoStepCheck,
};

use std::f64::consts::{PI, SQRT_2, TAU};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::alphabet::{OperatingPoint, SignalAlphabet};
use crate::error::{Error, Result};
use crate::receiver::{Decision, OutcomeSampler, Receiver, Sign, VerdictProbabilities};
use crate::special::erfc;

/// Slack on the uncertainty bound `det Γ ≥ 1`, relative to the size of the
/// diagonal product.
const DET_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianPovmParams {
    squeeze_r: f64,
    squeeze_phi: f64,
    lambda_b: f64,
}

impl GaussianPovmParams {
    /// `phi` is reduced to `[0, 2π)`.
    pub fn new(squeeze_r: f64, squeeze_phi: f64, lambda_b: f64) -> Result<Self> {
        if !(squeeze_r.is_finite() && squeeze_r >= 0.0) {
            return Err(Error::domain(
                "r",
                format!("need finite r ≥ 0, got {squeeze_r}"),
            ));
        }
        if !squeeze_phi.is_finite() {
            return Err(Error::domain(
                "phi",
                format!("need finite φ, got {squeeze_phi}"),
            ));
        }
        if !(1.0..f64::INFINITY).contains(&lambda_b) {
            return Err(Error::domain(
                "lambda_B",
                format!("need finite Λ_B ≥ 1, got {lambda_b}"),
            ));
        }
        Ok(Self {
            squeeze_r,
            squeeze_phi: squeeze_phi.rem_euclid(TAU),
            lambda_b,
        })
    }

    pub fn squeeze_r(&self) -> f64 {
        self.squeeze_r
    }

    pub fn squeeze_phi(&self) -> f64 {
        self.squeeze_phi
    }

    pub fn lambda_b(&self) -> f64 {
        self.lambda_b
    }

    /// Unit vector of the anti-squeezed axis; `Γ + I` is
    /// `(e^{2r}+1)·wwᵀ + (e^{−2r}+1)·w⊥w⊥ᵀ`.
    fn principal_axes(&self) -> ((f64, f64), (f64, f64)) {
        let (s, c) = (0.5 * self.squeeze_phi).sin_cos();
        ((s, c), (c, -s))
    }
}

/// Symmetric 2×2 covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovMatrix2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl CovMatrix2 {
    /// Accepts positive-definite matrices obeying `det ≥ 1`, which admits
    /// noisy measurements as well as the pure family.
    pub fn new(xx: f64, xy: f64, yy: f64) -> Result<Self> {
        let m = Self { xx, xy, yy };
        if !(xx > 0.0 && yy > 0.0 && m.det() > 0.0) {
            return Err(Error::domain(
                "covariance",
                "matrix is not positive definite",
            ));
        }
        if m.det() < 1.0 - DET_SLACK * (xx * yy).max(1.0) {
            return Err(Error::domain(
                "covariance",
                format!("det = {} violates the uncertainty bound", m.det()),
            ));
        }
        Ok(m)
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn add_identity(&self) -> Self {
        Self {
            xx: self.xx + 1.0,
            xy: self.xy,
            yy: self.yy + 1.0,
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if !(det.is_finite() && det > 0.0) {
            return Err(Error::domain("covariance", "matrix is singular"));
        }
        Ok(Self {
            xx: self.yy / det,
            xy: -self.xy / det,
            yy: self.xx / det,
        })
    }
}

/// Covariance of the noise-free POVM. Written through half-angle factors
/// so that no entry is a difference of large numbers.
pub fn gaussian_cov(params: &GaussianPovmParams) -> CovMatrix2 {
    let r2 = 2.0 * params.squeeze_r;
    let (grow, shrink) = (r2.exp(), (-r2).exp());
    let (s, c) = (0.5 * params.squeeze_phi).sin_cos();
    CovMatrix2 {
        xx: grow * s * s + shrink * c * c,
        xy: r2.sinh() * params.squeeze_phi.sin(),
        yy: grow * c * c + shrink * s * s,
    }
}

/// Entries of `(Γ + I)⁻¹ = [[a, c], [c, b]]`.
///
/// With `q = e^{−2r}`: `a = (q + cos²(φ/2) + q²sin²(φ/2))/(1+q)²`,
/// `b` the same with sine and cosine exchanged, `c = −½·tanh r·sinφ`.
pub fn abc_coeffs(params: &GaussianPovmParams) -> (f64, f64, f64) {
    let q = (-2.0 * params.squeeze_r).exp();
    let (s, c) = (0.5 * params.squeeze_phi).sin_cos();
    let norm = (1.0 + q) * (1.0 + q);
    let a = (q + c * c + q * q * s * s) / norm;
    let b = (q + s * s + q * q * c * c) / norm;
    let cc = -0.5 * params.squeeze_r.tanh() * params.squeeze_phi.sin();
    (a, b, cc)
}

/// `√det(Γ + I) = e^r (1 + e^{−2r})`.
fn sqrt_det_plus_identity(params: &GaussianPovmParams) -> f64 {
    params.squeeze_r.exp() * (1.0 + (-2.0 * params.squeeze_r).exp())
}

/// Density of the outcome `(u, v)` given the state `sent`.
pub fn outcome_pdf(
    u: f64,
    v: f64,
    sent: Sign,
    alphabet: &SignalAlphabet,
    params: &GaussianPovmParams,
) -> f64 {
    let (a, b, c) = abc_coeffs(params);
    let d = sent.value() * SQRT_2 * alphabet.alpha() - u;
    let exponent = d * d * a - 2.0 * d * v * c + v * v * b;
    (-exponent).exp() / (PI * sqrt_det_plus_identity(params))
}

/// `ln Λ₁ = ln(p1/p2) − 4√2α·(a·u + c·v)`.
fn log_likelihood_ratio(
    u: f64,
    v: f64,
    alphabet: &SignalAlphabet,
    params: &GaussianPovmParams,
) -> f64 {
    let (a, _, c) = abc_coeffs(params);
    (alphabet.p1() / alphabet.p2()).ln() - 4.0 * SQRT_2 * alphabet.alpha() * (a * u + c * v)
}

/// `Λ₁ = p1·P(u,v | −α) / (p2·P(u,v | +α))`; `Λ₂ = 1/Λ₁`.
pub fn likelihood_ratio(
    u: f64,
    v: f64,
    alphabet: &SignalAlphabet,
    params: &GaussianPovmParams,
) -> Result<f64> {
    if alphabet.p2() <= 0.0 {
        return Err(Error::domain("p1", "the likelihood ratio needs p2 > 0"));
    }
    Ok(log_likelihood_ratio(u, v, alphabet, params).exp())
}

/// Guess `−α` when `Λ₁ ≥ Λ_B`, `+α` when `Λ₂ ≥ Λ_B`, otherwise discard.
pub fn decide(u: f64, v: f64, alphabet: &SignalAlphabet, params: &GaussianPovmParams) -> Decision {
    let ln_lambda = log_likelihood_ratio(u, v, alphabet, params);
    let ln_threshold = params.lambda_b.ln();
    if ln_lambda >= ln_threshold {
        Decision::GuessMinus
    } else if -ln_lambda >= ln_threshold {
        Decision::GuessPlus
    } else {
        Decision::Inconclusive
    }
}

/// Per-state verdict probabilities. `p_s` is the probability of *not*
/// guessing the sent state (the complement of a correct verdict), `p_e`
/// that of guessing the other one, so `p_i = p_s − p_e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalRates {
    pub p_s_minus: f64,
    pub p_s_plus: f64,
    pub p_e_minus: f64,
    pub p_e_plus: f64,
    pub p_i_minus: f64,
    pub p_i_plus: f64,
    /// Correct-verdict probabilities, `1 − p_s` without cancellation.
    pub p_c_minus: f64,
    pub p_c_plus: f64,
}

impl ConditionalRates {
    pub fn operating_point(&self, alphabet: &SignalAlphabet) -> Result<OperatingPoint> {
        let (p1, p2) = (alphabet.p1(), alphabet.p2());
        let wrong = p1 * self.p_e_minus + p2 * self.p_e_plus;
        let accepted =
            p1 * (self.p_c_minus + self.p_e_minus) + p2 * (self.p_e_plus + self.p_c_plus);
        let mut op = OperatingPoint::from_weighted(wrong, accepted)?;
        // the direct sum keeps an exact zero when the two decision edges coincide
        op.p_inconclusive = (p1 * self.p_i_minus + p2 * self.p_i_plus).min(1.0);
        Ok(op)
    }
}

/// Closed-form verdict probabilities of the likelihood-ratio rule.
///
/// `t = a·u + c·v` is Gaussian with mean `±√2α·a` and variance `a/2`, so
/// with `y = √(2a)·α`, `k = 4√2·α·√a` and `ℓ = ln(p1/p2)`:
///
/// ```text
/// p_s(±) = ½ erfc[y − (ln Λ_B ± ℓ)/k]
/// p_e(±) = ½ erfc[y + (ln Λ_B ∓ ℓ)/k]
/// ```
pub fn conditional_rates(
    alphabet: &SignalAlphabet,
    params: &GaussianPovmParams,
) -> Result<ConditionalRates> {
    let alpha = alphabet.alpha();
    if alpha <= 0.0 {
        return Err(Error::domain(
            "alpha",
            "conditional rates are singular at α = 0",
        ));
    }
    if !(alphabet.p1() > 0.0 && alphabet.p2() > 0.0) {
        return Err(Error::domain("p1", "both priors must be positive"));
    }
    let (a, _, _) = abc_coeffs(params);
    let y = (2.0 * a).sqrt() * alpha;
    let k = 4.0 * SQRT_2 * alpha * a.sqrt();
    let ln_b = params.lambda_b.ln();
    let ell = (alphabet.p1() / alphabet.p2()).ln();

    // offsets of the two decision edges in units of the statistic's spread
    let edge_plus = (ln_b + ell) / k;
    let edge_minus = (ln_b - ell) / k;
    let p_s_plus = 0.5 * erfc(y - edge_plus);
    let p_s_minus = 0.5 * erfc(y - edge_minus);
    let p_e_plus = 0.5 * erfc(y + edge_minus);
    let p_e_minus = 0.5 * erfc(y + edge_plus);
    Ok(ConditionalRates {
        p_s_minus,
        p_s_plus,
        p_e_minus,
        p_e_plus,
        p_i_minus: (p_s_minus - p_e_minus).max(0.0),
        p_i_plus: (p_s_plus - p_e_plus).max(0.0),
        p_c_minus: 0.5 * erfc(edge_minus - y),
        p_c_plus: 0.5 * erfc(edge_plus - y),
    })
}

/// One outcome `(u, v)` for the state `sent`.
pub fn sample_outcome<R: Rng + ?Sized>(
    sent: Sign,
    alphabet: &SignalAlphabet,
    params: &GaussianPovmParams,
    rng: &mut R,
) -> (f64, f64) {
    let (w, w_perp) = params.principal_axes();
    let r2 = 2.0 * params.squeeze_r;
    let wide = (0.5 * (r2.exp() + 1.0)).sqrt() * rng.sample::<f64, _>(StandardNormal);
    let narrow = (0.5 * ((-r2).exp() + 1.0)).sqrt() * rng.sample::<f64, _>(StandardNormal);
    let mean = sent.value() * SQRT_2 * alphabet.alpha();
    (
        mean + wide * w.0 + narrow * w_perp.0,
        wide * w.1 + narrow * w_perp.1,
    )
}

/// A Gaussian POVM with its likelihood-ratio decision, usable wherever a
/// [`Receiver`] is expected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianReceiver {
    pub params: GaussianPovmParams,
    alphabet: SignalAlphabet,
}

impl GaussianReceiver {
    /// The decision rule depends on the alphabet through `α` and the priors.
    pub fn new(alphabet: &SignalAlphabet, params: GaussianPovmParams) -> Result<Self> {
        if alphabet.p2() <= 0.0 || alphabet.p1() <= 0.0 {
            return Err(Error::domain("p1", "both priors must be positive"));
        }
        Ok(Self {
            params,
            alphabet: *alphabet,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GaussianSampler {
    alphabet: SignalAlphabet,
    params: GaussianPovmParams,
}

impl OutcomeSampler for GaussianSampler {
    type Outcome = (f64, f64);

    fn sample<R: Rng + ?Sized>(&self, sent: Sign, rng: &mut R) -> (f64, f64) {
        sample_outcome(sent, &self.alphabet, &self.params, rng)
    }
}

impl Receiver for GaussianReceiver {
    type Outcome = (f64, f64);
    type Sampler = GaussianSampler;

    fn verdict_probabilities(&self, alphabet: &SignalAlphabet, sent: Sign) -> VerdictProbabilities {
        match conditional_rates(alphabet, &self.params) {
            Ok(r) => match sent {
                Sign::Minus => VerdictProbabilities {
                    guess_minus: r.p_c_minus,
                    guess_plus: r.p_e_minus,
                    inconclusive: r.p_i_minus,
                },
                Sign::Plus => VerdictProbabilities {
                    guess_minus: r.p_e_plus,
                    guess_plus: r.p_c_plus,
                    inconclusive: r.p_i_plus,
                },
            },
            // α = 0: the outcome carries no information and the prior ratio alone decides
            Err(_) => {
                let verdict = decide(0.0, 0.0, alphabet, &self.params);
                VerdictProbabilities {
                    guess_minus: f64::from(u8::from(verdict == Decision::GuessMinus)),
                    guess_plus: f64::from(u8::from(verdict == Decision::GuessPlus)),
                    inconclusive: f64::from(u8::from(verdict == Decision::Inconclusive)),
                }
            }
        }
    }

    fn operating_point(&self, alphabet: &SignalAlphabet) -> Result<OperatingPoint> {
        match conditional_rates(alphabet, &self.params) {
            Ok(rates) => rates.operating_point(alphabet),
            Err(_) => {
                let minus = self.verdict_probabilities(alphabet, Sign::Minus);
                OperatingPoint::from_weighted(minus.guess_plus, minus.accepted())
            }
        }
    }

    fn decide(&self, (u, v): (f64, f64)) -> Decision {
        decide(u, v, &self.alphabet, &self.params)
    }

    fn sampler(&self, alphabet: &SignalAlphabet) -> Result<GaussianSampler> {
        Ok(GaussianSampler {
            alphabet: *alphabet,
            params: self.params,
        })
    }
}
