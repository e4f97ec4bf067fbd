//! Trial-by-trial simulation of the discrimination experiment.
//!
//! Each trial draws the sent state from the priors, samples the receiver
//! outcome, applies the decision rule and tallies. Trials are cut into
//! fixed-size partitions; partition `k` draws from the ChaCha8 stream `k`
//! of the run seed, and partition tallies are merged by integer addition.
//! Results therefore do not depend on the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{Beta, ContinuousCDF};

use crate::alphabet::{chefles_min_error, OperatingPoint, SignalAlphabet};
use crate::error::{Error, Result};
use crate::homodyne::{self, HomodyneConfig};
use crate::pnr::{self, PnrConfig};
use crate::receiver::{Decision, OutcomeSampler, Receiver, Sign};
use crate::special::erf;

/// Trials per seeded partition.
pub const PARTITION_SIZE: u64 = 1 << 16;

/// Seed offset between consecutive rows of a sweep.
const ROW_SEED_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Integer tallies of a batch of trials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub trials: u64,
    pub accepted: u64,
    pub errors: u64,
}

impl Tally {
    pub fn record(&mut self, sent: Sign, decision: Decision) {
        self.trials += 1;
        if decision.is_conclusive() {
            self.accepted += 1;
            if decision.is_wrong_for(sent) {
                self.errors += 1;
            }
        }
    }

    pub fn merge(self, other: Tally) -> Tally {
        Tally {
            trials: self.trials + other.trials,
            accepted: self.accepted + other.accepted,
            errors: self.errors + other.errors,
        }
    }
}

/// Seeded stream for partition `index` of a run.
pub fn partition_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Derived seed for row `index` of a sweep; row 0 keeps the run seed.
pub fn row_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64).wrapping_mul(ROW_SEED_STRIDE))
}

/// Runs `n_trials` independent trials under the partitioning contract.
/// `workers = None` uses the global thread pool.
pub fn tally_trials<F>(n_trials: u64, seed: u64, workers: Option<usize>, trial: F) -> Result<Tally>
where
    F: Fn(&mut ChaCha8Rng) -> (Sign, Decision) + Sync,
{
    let partitions = n_trials.div_ceil(PARTITION_SIZE);
    let run = || {
        (0..partitions)
            .into_par_iter()
            .map(|k| {
                let mut rng = partition_rng(seed, k);
                let len = PARTITION_SIZE.min(n_trials - k * PARTITION_SIZE);
                let mut tally = Tally::default();
                for _ in 0..len {
                    let (sent, decision) = trial(&mut rng);
                    tally.record(sent, decision);
                }
                tally
            })
            .reduce(Tally::default, Tally::merge)
    };
    match workers {
        None => Ok(run()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::domain("workers", e.to_string()))?;
            Ok(pool.install(run))
        }
    }
}

/// Empirical operating point with binomial standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalRates {
    pub n_trials: u64,
    pub n_accepted: u64,
    pub n_errors: u64,
    /// `n_errors / n_accepted`; `None` when nothing was accepted.
    pub p_error_hat: Option<f64>,
    pub se_error: Option<f64>,
    /// `1 − n_accepted / n_trials`.
    pub p_inconclusive_hat: f64,
    pub se_inconclusive: f64,
}

impl From<Tally> for EmpiricalRates {
    fn from(t: Tally) -> Self {
        let binomial_se = |p: f64, n: u64| (p * (1.0 - p) / n as f64).sqrt();
        let p_error_hat = (t.accepted > 0).then(|| t.errors as f64 / t.accepted as f64);
        let p_inc = 1.0 - t.accepted as f64 / t.trials as f64;
        EmpiricalRates {
            n_trials: t.trials,
            n_accepted: t.accepted,
            n_errors: t.errors,
            p_error_hat,
            se_error: p_error_hat.map(|p| binomial_se(p, t.accepted)),
            p_inconclusive_hat: p_inc,
            se_inconclusive: binomial_se(p_inc, t.trials),
        }
    }
}

impl EmpiricalRates {
    /// Two-sided interval on the error rate at `z` standard deviations.
    /// Cells with fewer than 10 errors use the exact Clopper-Pearson
    /// interval at the matching confidence level.
    pub fn error_interval(&self, z: f64) -> Option<(f64, f64)> {
        let p = self.p_error_hat?;
        if self.n_errors >= 10 {
            let half = z * self.se_error.unwrap_or(0.0);
            return Some(((p - half).max(0.0), (p + half).min(1.0)));
        }
        let tail = 0.5 * (1.0 - erf(z / std::f64::consts::SQRT_2));
        let k = self.n_errors as f64;
        let n = self.n_accepted as f64;
        let lo = if self.n_errors == 0 {
            0.0
        } else {
            Beta::new(k, n - k + 1.0).ok()?.inverse_cdf(tail)
        };
        let hi = if self.n_errors == self.n_accepted {
            1.0
        } else {
            Beta::new(k + 1.0, n - k).ok()?.inverse_cdf(1.0 - tail)
        };
        Some((lo, hi))
    }

    /// Both rates within `k` binomial standard errors of `reference`. The
    /// standard errors are evaluated at the reference probabilities so
    /// that cells with zero observed errors are still judged.
    pub fn agrees_with(&self, reference: &OperatingPoint, k: f64) -> bool {
        let within = |observed: f64, p: f64, n: u64| {
            let se = (p * (1.0 - p) / n as f64).sqrt();
            (observed - p).abs() <= k * se + 1e-15
        };
        let inc_ok = within(
            self.p_inconclusive_hat,
            reference.p_inconclusive,
            self.n_trials,
        );
        let err_ok = match self.p_error_hat {
            Some(p) => within(p, reference.p_error, self.n_accepted),
            None => false,
        };
        inc_ok && err_ok
    }
}

/// Either receiver, as configured for a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ReceiverSpec {
    Homodyne(HomodyneConfig),
    Pnr(PnrConfig),
}

impl ReceiverSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ReceiverSpec::Homodyne(_) => "homodyne",
            ReceiverSpec::Pnr(_) => "pnr",
        }
    }

    /// Threshold `B` or displacement `β`.
    pub fn parameter(&self) -> f64 {
        match self {
            ReceiverSpec::Homodyne(c) => c.threshold(),
            ReceiverSpec::Pnr(c) => c.displacement(),
        }
    }

    pub fn operating_point(&self, alphabet: &SignalAlphabet) -> Result<OperatingPoint> {
        match self {
            ReceiverSpec::Homodyne(c) => c.operating_point(alphabet),
            ReceiverSpec::Pnr(c) => c.operating_point(alphabet),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialConfig {
    pub alphabet: SignalAlphabet,
    pub receiver: ReceiverSpec,
    pub n_trials: u64,
    pub seed: u64,
}

/// Simulates `n_trials` uses of `receiver`.
pub fn simulate<R>(
    alphabet: &SignalAlphabet,
    receiver: &R,
    n_trials: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<EmpiricalRates>
where
    R: Receiver + Sync,
{
    if n_trials == 0 {
        return Err(Error::domain("n_trials", "need at least one trial"));
    }
    let sampler = receiver.sampler(alphabet)?;
    let p_minus = alphabet.p1();
    let tally = tally_trials(n_trials, seed, workers, |rng| {
        let sent = if rng.random::<f64>() < p_minus {
            Sign::Minus
        } else {
            Sign::Plus
        };
        let outcome = sampler.sample(sent, rng);
        (sent, receiver.decide(outcome))
    })?;
    Ok(tally.into())
}

pub fn run_trials(cfg: &TrialConfig) -> Result<EmpiricalRates> {
    run_trials_with_workers(cfg, None)
}

pub fn run_trials_with_workers(
    cfg: &TrialConfig,
    workers: Option<usize>,
) -> Result<EmpiricalRates> {
    match &cfg.receiver {
        ReceiverSpec::Homodyne(c) => simulate(&cfg.alphabet, c, cfg.n_trials, cfg.seed, workers),
        ReceiverSpec::Pnr(c) => simulate(&cfg.alphabet, c, cfg.n_trials, cfg.seed, workers),
    }
}

/// What a sweep varies: the homodyne threshold `B` or the displacement `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SweepFamily {
    Homodyne {
        efficiency: f64,
        electronic_noise: f64,
    },
    Pnr {
        template: PnrConfig,
    },
}

impl SweepFamily {
    pub fn receiver(&self, parameter: f64) -> Result<ReceiverSpec> {
        Ok(match self {
            SweepFamily::Homodyne {
                efficiency,
                electronic_noise,
            } => ReceiverSpec::Homodyne(
                HomodyneConfig::with_efficiency(parameter, *efficiency)?
                    .with_electronic_noise(*electronic_noise)?,
            ),
            SweepFamily::Pnr { template } => {
                ReceiverSpec::Pnr(template.with_displacement(parameter)?)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub receiver: &'static str,
    pub alpha_sq: f64,
    pub parameter: f64,
    pub empirical: EmpiricalRates,
    /// `None` for a fully inconclusive configuration.
    pub closed: Option<OperatingPoint>,
    /// Intermediate-measurement bound at the closed-form inconclusive rate.
    pub chefles: Option<f64>,
}

/// One simulated row per `(alpha_sq, parameter)` pair, amplitude-major.
/// Row `i` uses [`row_seed`]`(seed, i)`.
pub fn sweep_operating_curve(
    alphas_sq: &[f64],
    family: &SweepFamily,
    parameters: &[f64],
    n_trials: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<Vec<SweepRow>> {
    if alphas_sq.is_empty() || parameters.is_empty() {
        return Err(Error::domain("grid", "sweep grid is empty"));
    }
    let mut rows = Vec::with_capacity(alphas_sq.len() * parameters.len());
    for &alpha_sq in alphas_sq {
        let alphabet = SignalAlphabet::from_mean_photon_number(alpha_sq)?;
        for &parameter in parameters {
            let receiver = family.receiver(parameter)?;
            let cfg = TrialConfig {
                alphabet,
                receiver,
                n_trials,
                seed: row_seed(seed, rows.len()),
            };
            let empirical = run_trials_with_workers(&cfg, workers)?;
            let closed = receiver.operating_point(&alphabet).ok();
            let chefles = closed
                .and_then(|op| chefles_min_error(&alphabet, op.p_inconclusive).ok())
                .map(|b| b.p_error);
            rows.push(SweepRow {
                receiver: receiver.name(),
                alpha_sq,
                parameter,
                empirical,
                closed,
                chefles,
            });
        }
    }
    Ok(rows)
}

/// PNR and homodyne receivers compared at the same inconclusive rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub alpha_sq: f64,
    pub m: u32,
    pub efficiency: f64,
    pub beta_opt: f64,
    pub threshold_b: f64,
    pub p_inconclusive: f64,
    pub pnr: OperatingPoint,
    pub homodyne: OperatingPoint,
    /// Bound for the states as they reach the detectors (amplitude `√η·α`).
    pub chefles: f64,
    pub pnr_empirical: Option<EmpiricalRates>,
    pub homodyne_empirical: Option<EmpiricalRates>,
}

/// Optimizes `β` for threshold `m`, then picks the homodyne threshold that
/// discards the same fraction of outcomes. `n_trials = 0` skips the
/// simulation.
pub fn matched_inc_comparison(
    alphabet: &SignalAlphabet,
    m: u32,
    efficiency: f64,
    n_trials: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<ComparisonRow> {
    let template = PnrConfig::new(0.0, m)?.with_imperfections(efficiency, 0.0, 1.0)?;
    let opt = pnr::optimize_displacement_for(alphabet, &template)?;
    let p_inc = opt.operating_point.p_inconclusive;
    let threshold_b = homodyne::threshold_for_inconclusive(alphabet, p_inc, efficiency)?;
    let hd = HomodyneConfig::with_efficiency(threshold_b, efficiency)?;
    let pnr_cfg = template.with_displacement(opt.beta)?;
    let chefles = chefles_min_error(&alphabet.attenuated(efficiency), p_inc)?.p_error;

    let (pnr_empirical, homodyne_empirical) = if n_trials > 0 {
        (
            Some(simulate(alphabet, &pnr_cfg, n_trials, seed, workers)?),
            Some(simulate(
                alphabet,
                &hd,
                n_trials,
                row_seed(seed, 1),
                workers,
            )?),
        )
    } else {
        (None, None)
    };

    Ok(ComparisonRow {
        alpha_sq: alphabet.mean_photon_number(),
        m,
        efficiency,
        beta_opt: opt.beta,
        threshold_b,
        p_inconclusive: p_inc,
        pnr: opt.operating_point,
        homodyne: hd.operating_point(alphabet)?,
        chefles,
        pnr_empirical,
        homodyne_empirical,
    })
}
