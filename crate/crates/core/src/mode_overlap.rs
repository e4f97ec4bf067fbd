//! Temporal mode seen by a band-limited detector whose output is averaged
//! over a measurement window, and its overlap with the ideal square mode.
//!
//! The detector output is `X_det(t) = ∫ G(t − τ) X(τ) dτ` and the recorded
//! value the window average `X_av = (1/T) ∫ rect((t − t_m)/T) X_det(t) dt`,
//! so the measured mode is the moving average of `G` over `T`:
//!
//! ```text
//! G_eff(x) = (1/T) ∫_{x − T/2}^{x + T/2} G(s) ds
//! ```
//!
//! reported at times `t_m + x`. Its normalized overlap with `(1/T)·rect`,
//! maximized over a relative delay, is `g₁₂`.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Grid step used when none is given: well below any cutoff period of
/// interest.
pub const DEFAULT_DT: f64 = 1e-9;
/// Response length used when none is given.
pub const DEFAULT_SAMPLES: usize = 4000;
pub const DEFAULT_RIPPLE_DB: f64 = 0.5;
/// Share of the response energy a truncated response must keep.
pub const ENERGY_CAPTURE: f64 = 0.999;

const MAX_SAMPLES: usize = 1 << 26;
const GRID_RTOL: f64 = 1e-9;

/// Real samples on a uniform grid starting at `t0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpulseResponse {
    samples: Vec<f64>,
    dt: f64,
    t0: f64,
}

impl ImpulseResponse {
    pub fn new(samples: Vec<f64>, dt: f64) -> Result<Self> {
        Self::with_start(samples, dt, 0.0)
    }

    pub fn with_start(samples: Vec<f64>, dt: f64, t0: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::domain(
                "dt",
                format!("need a positive time step, got {dt}"),
            ));
        }
        if !t0.is_finite() {
            return Err(Error::domain("t0", "start time must be finite"));
        }
        let r = Self { samples, dt, t0 };
        let energy = r.energy();
        if !(energy.is_finite() && energy > 0.0) {
            return Err(Error::domain(
                "samples",
                "response must have finite, nonzero energy",
            ));
        }
        Ok(r)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    /// `Σ g² · dt`.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|x| x * x).sum::<f64>() * self.dt
    }

    /// `Σ g · dt`.
    pub fn dc_gain(&self) -> f64 {
        self.samples.iter().sum::<f64>() * self.dt
    }

    /// Rescaled to unit DC gain.
    pub fn normalized(&self) -> Result<Self> {
        let gain = self.dc_gain();
        if gain == 0.0 || !gain.is_finite() {
            return Err(Error::domain(
                "samples",
                "response has no DC gain to normalize",
            ));
        }
        Ok(Self {
            samples: self.samples.iter().map(|x| x / gain).collect(),
            dt: self.dt,
            t0: self.t0,
        })
    }

    /// Linear interpolation onto the step `dt`, starting at the same time
    /// and covering the same span. Outside the span the response is zero.
    pub fn resampled(&self, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::domain(
                "dt",
                format!("need a positive time step, got {dt}"),
            ));
        }
        let span = (self.len() - 1) as f64 * self.dt;
        let n = (span / dt).floor() as usize + 1;
        let samples = (0..n)
            .map(|k| {
                let pos = k as f64 * dt / self.dt;
                let i = pos.floor() as usize;
                let frac = pos - i as f64;
                let lo = self.samples[i.min(self.len() - 1)];
                let hi = self.samples.get(i + 1).copied().unwrap_or(0.0);
                lo + frac * (hi - lo)
            })
            .collect();
        Self::with_start(samples, dt, self.t0)
    }

    /// Two columns, `time_s` and `amplitude`, separated by a comma or
    /// whitespace. Blank lines, `#` comments and a leading non-numeric
    /// header are skipped. Times must form a uniform grid.
    pub fn read_from(reader: impl BufRead) -> Result<Self> {
        let mut times = Vec::new();
        let mut values = Vec::new();
        let mut seen_data = false;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.map_err(|e| Error::Parse {
                line: line_no,
                reason: e.to_string(),
            })?;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let fields: Vec<&str> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|f| !f.is_empty())
                .collect();
            let parsed: std::result::Result<Vec<f64>, _> =
                fields.iter().map(|f| f.parse::<f64>()).collect();
            match parsed {
                Ok(v) if v.len() == 2 => {
                    times.push(v[0]);
                    values.push(v[1]);
                    seen_data = true;
                }
                Err(_) if !seen_data => {}
                _ => {
                    return Err(Error::Parse {
                        line: line_no,
                        reason: format!("expected two numeric columns, got `{body}`"),
                    })
                }
            }
        }
        if times.len() < 2 {
            return Err(Error::Parse {
                line: 0,
                reason: "need at least two samples".into(),
            });
        }
        let dt = times[1] - times[0];
        for (k, t) in times.iter().enumerate() {
            let want = times[0] + k as f64 * dt;
            if dt.is_nan() || dt <= 0.0 || (t - want).abs() > 1e-6 * dt {
                return Err(Error::Parse {
                    line: 0,
                    reason: format!("sample {k} at {t} breaks the uniform time grid"),
                });
            }
        }
        Self::with_start(values, dt, times[0])
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::read_from(text.as_bytes())
    }

    pub fn write_to(&self, mut writer: impl Write) -> std::io::Result<()> {
        writeln!(writer, "time_s,amplitude")?;
        for (k, x) in self.samples.iter().enumerate() {
            writeln!(writer, "{:e},{:e}", self.time(k), x)?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = Vec::new();
        self.write_to(&mut out).expect("writing to memory");
        String::from_utf8(out).expect("ascii output")
    }
}

/// How the window average is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum Averaging {
    /// Continuous average over the whole window.
    #[default]
    Continuous,
    /// Mean of the `T · sample_rate` digitizer samples inside the window.
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowSpec {
    duration: f64,
    sample_rate: f64,
    center: f64,
    averaging: Averaging,
}

impl WindowSpec {
    pub fn new(duration: f64, sample_rate: f64) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::domain(
                "window",
                format!("need T > 0, got {duration}"),
            ));
        }
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::domain(
                "sample_rate",
                format!("need a positive rate, got {sample_rate}"),
            ));
        }
        if sample_rate * duration < 1.0 - GRID_RTOL {
            return Err(Error::domain(
                "sample_rate",
                "the window must hold at least one digitizer sample",
            ));
        }
        Ok(Self {
            duration,
            sample_rate,
            center: 0.0,
            averaging: Averaging::Continuous,
        })
    }

    pub fn with_center(self, center: f64) -> Self {
        Self { center, ..self }
    }

    pub fn with_averaging(self, averaging: Averaging) -> Self {
        Self { averaging, ..self }
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn averaging(&self) -> Averaging {
        self.averaging
    }

    /// Digitizer samples inside one window.
    pub fn samples_per_window(&self) -> usize {
        (self.duration * self.sample_rate + GRID_RTOL).floor() as usize
    }
}

/// `span / dt` as an integer, if it is one to within the grid tolerance.
fn whole_steps(span: f64, dt: f64) -> Option<usize> {
    let ratio = span / dt;
    let n = ratio.round();
    ((ratio - n).abs() <= GRID_RTOL * ratio.max(1.0) && n >= 1.0).then_some(n as usize)
}

/// Puts `g` on a grid where `span` is a whole number of steps, refining the
/// step by linear interpolation when it is not.
fn commensurate(g: &ImpulseResponse, span: f64) -> Result<(ImpulseResponse, usize)> {
    if let Some(n) = whole_steps(span, g.dt) {
        return Ok((g.clone(), n));
    }
    let n = (span / g.dt).ceil().max(1.0) as usize;
    Ok((g.resampled(span / n as f64)?, n))
}

/// `G_eff`, the window average of `g`. Under [`Averaging::Continuous`] this
/// is the moving average over `T` (rectangle rule on the grid); under
/// [`Averaging::Sampled`] the mean of the digitizer taps. If the window does
/// not span a whole number of grid steps, `g` is first linearly
/// interpolated onto the next finer grid that fits.
pub fn effective_response(g: &ImpulseResponse, w: &WindowSpec) -> Result<ImpulseResponse> {
    let (taps, stride, g) = match w.averaging {
        Averaging::Continuous => {
            let (g, width) = commensurate(g, w.duration)?;
            (width, 1, g)
        }
        Averaging::Sampled => {
            let (g, stride) = commensurate(g, 1.0 / w.sample_rate)?;
            (w.samples_per_window(), stride, g)
        }
    };
    let n = g.len();
    let out_len = n + (taps - 1) * stride;
    let samples = if stride == 1 {
        // running window sum via prefix sums
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(0.0);
        for &x in &g.samples {
            prefix.push(prefix.last().unwrap() + x);
        }
        (0..out_len)
            .map(|k| {
                let hi = (k + 1).min(n);
                let lo = (k + 1).saturating_sub(taps);
                (prefix[hi] - prefix[lo]) / taps as f64
            })
            .collect()
    } else {
        let mut out = vec![0.0; out_len];
        for j in 0..taps {
            for (i, &x) in g.samples.iter().enumerate() {
                out[i + j * stride] += x / taps as f64;
            }
        }
        out
    };
    let half_span = 0.5 * ((taps - 1) * stride) as f64 * g.dt;
    ImpulseResponse::with_start(samples, g.dt, w.center + g.t0 - half_span)
}

/// Best overlap of `g_eff` with the ideal mode and the delay that attains it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Alignment {
    pub g12: f64,
    /// Start of the best-matching ideal window relative to `g_eff`'s start.
    pub delay: f64,
}

/// Normalized inner product of `g_eff` with `(1/T)·rect`, maximized over
/// whole-sample shifts (partial overlaps included).
pub fn best_alignment(g_eff: &ImpulseResponse, w: &WindowSpec) -> Result<Alignment> {
    let (g, width) = commensurate(g_eff, w.duration)?;
    let n = g.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for &x in &g.samples {
        prefix.push(prefix.last().unwrap() + x);
    }
    let norm = (width as f64 * g.samples.iter().map(|x| x * x).sum::<f64>()).sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::domain("g_eff", "zero-energy response"));
    }
    let mut best = Alignment {
        g12: f64::NEG_INFINITY,
        delay: 0.0,
    };
    let width = width as i64;
    for shift in (1 - width)..(n as i64) {
        let lo = shift.max(0) as usize;
        let hi = (shift + width).min(n as i64) as usize;
        let g12 = (prefix[hi] - prefix[lo]) / norm;
        if g12 > best.g12 {
            best = Alignment {
                g12,
                delay: shift as f64 * g.dt,
            };
        }
    }
    best.g12 = best.g12.clamp(-1.0, 1.0);
    Ok(best)
}

/// `g₁₂` at the optimal relative delay.
pub fn cross_correlation_g12(g_eff: &ImpulseResponse, w: &WindowSpec) -> Result<f64> {
    best_alignment(g_eff, w).map(|a| a.g12)
}

/// What to do when the requested length drops too much response energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Truncation {
    Extend,
    Error,
}

/// Analog Type-I Chebyshev low-pass with unit DC gain, as poles and
/// residues of `h(t) = Σ rᵢ e^{pᵢ t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevLowPass {
    poles: Vec<Complex64>,
    residues: Vec<Complex64>,
}

impl ChebyshevLowPass {
    /// `cutoff_hz` is the edge of the ripple band.
    pub fn new(order: usize, cutoff_hz: f64, ripple_db: f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::domain("order", "need at least one pole"));
        }
        if !(cutoff_hz.is_finite() && cutoff_hz > 0.0) {
            return Err(Error::domain(
                "cutoff",
                format!("need a positive cutoff, got {cutoff_hz}"),
            ));
        }
        if !(ripple_db.is_finite() && ripple_db > 0.0) {
            return Err(Error::domain(
                "ripple",
                format!("need ripple > 0 dB, got {ripple_db}"),
            ));
        }
        let eps = (10f64.powf(ripple_db / 10.0) - 1.0).sqrt();
        let mu = (1.0 / eps).asinh() / order as f64;
        let omega = 2.0 * PI * cutoff_hz;
        let poles: Vec<Complex64> = (1..=order)
            .map(|k| {
                let theta = PI * (2 * k - 1) as f64 / (2 * order) as f64;
                omega * Complex64::new(-mu.sinh() * theta.sin(), mu.cosh() * theta.cos())
            })
            .collect();
        // H(s) = K / Π(s − pᵢ) with K = Π(−pᵢ) so that H(0) = 1
        let gain: Complex64 = poles.iter().map(|p| -p).product();
        let residues = poles
            .iter()
            .enumerate()
            .map(|(i, pi)| {
                let denom: Complex64 = poles
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, pj)| pi - pj)
                    .product();
                gain / denom
            })
            .collect();
        Ok(Self { poles, residues })
    }

    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    /// `h(t)` for `t ≥ 0`.
    pub fn response(&self, t: f64) -> f64 {
        self.poles
            .iter()
            .zip(&self.residues)
            .map(|(p, r)| r * (p * t).exp())
            .sum::<Complex64>()
            .re
    }

    /// `∫₀^t h²`, from the pole expansion:
    /// `Σᵢⱼ rᵢrⱼ (1 − e^{(pᵢ+pⱼ)t}) / −(pᵢ+pⱼ)`.
    pub fn energy_until(&self, t: f64) -> f64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (pi, ri) in self.poles.iter().zip(&self.residues) {
            for (pj, rj) in self.poles.iter().zip(&self.residues) {
                let s = pi + pj;
                let decay = if t.is_infinite() {
                    Complex64::new(0.0, 0.0)
                } else {
                    (s * t).exp()
                };
                total += ri * rj * (Complex64::new(1.0, 0.0) - decay) / -s;
            }
        }
        total.re
    }

    pub fn total_energy(&self) -> f64 {
        self.energy_until(f64::INFINITY)
    }
}

/// Sampled Chebyshev impulse response `h(k·dt)`, normalized to unit DC gain
/// on the grid. The record must keep [`ENERGY_CAPTURE`] of the analog
/// response energy; otherwise it is doubled until it does
/// ([`Truncation::Extend`]) or an error is returned.
pub fn chebyshev_impulse(
    order: usize,
    cutoff_hz: f64,
    ripple_db: f64,
    dt: f64,
    n_samples: usize,
    truncation: Truncation,
) -> Result<ImpulseResponse> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain(
            "dt",
            format!("need a positive time step, got {dt}"),
        ));
    }
    if n_samples < 2 {
        return Err(Error::domain("n_samples", "need at least two samples"));
    }
    let filter = ChebyshevLowPass::new(order, cutoff_hz, ripple_db)?;
    let total = filter.total_energy();
    let mut n = n_samples;
    loop {
        let captured = filter.energy_until(n as f64 * dt) / total;
        if captured >= ENERGY_CAPTURE {
            break;
        }
        match truncation {
            Truncation::Error => {
                return Err(Error::Truncated {
                    captured,
                    n_samples: n,
                })
            }
            Truncation::Extend if n >= MAX_SAMPLES => {
                return Err(Error::Truncated {
                    captured,
                    n_samples: n,
                })
            }
            Truncation::Extend => n *= 2,
        }
    }
    let samples = (0..n).map(|k| filter.response(k as f64 * dt)).collect();
    ImpulseResponse::new(samples, dt)?.normalized()
}

/// `g₁₂` of a Chebyshev detector response averaged over `w`, on the default
/// grid.
pub fn chebyshev_g12(order: usize, cutoff_hz: f64, ripple_db: f64, w: &WindowSpec) -> Result<f64> {
    let g = chebyshev_impulse(
        order,
        cutoff_hz,
        ripple_db,
        DEFAULT_DT,
        DEFAULT_SAMPLES,
        Truncation::Extend,
    )?;
    cross_correlation_g12(&effective_response(&g, w)?, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window() -> WindowSpec {
        WindowSpec::new(800e-9, 20e6).unwrap()
    }

    fn delta(dt: f64) -> ImpulseResponse {
        ImpulseResponse::new(vec![1.0 / dt], dt).unwrap()
    }

    #[test]
    fn validation() {
        assert!(ImpulseResponse::new(vec![0.0, 0.0], 1e-9).is_err());
        assert!(ImpulseResponse::new(vec![1.0], 0.0).is_err());
        assert!(ImpulseResponse::new(vec![f64::NAN], 1.0).is_err());
        assert!(WindowSpec::new(0.0, 20e6).is_err());
        assert!(WindowSpec::new(10e-9, 20e6).is_err());
        assert_eq!(window().samples_per_window(), 16);
        assert!(ChebyshevLowPass::new(0, 1e7, 0.5).is_err());
        assert!(ChebyshevLowPass::new(3, -1.0, 0.5).is_err());
        assert!(ChebyshevLowPass::new(3, 1e7, 0.0).is_err());
    }

    #[test]
    fn delta_recovers_the_window() {
        let w = window();
        let geff = effective_response(&delta(1e-9), &w).unwrap();
        assert_eq!(geff.len(), 800);
        assert!(geff
            .samples()
            .iter()
            .all(|&x| (x - 1.0 / 800e-9).abs() < 1e-3));
        // centered on the window
        let mid = 0.5 * (geff.time(0) + geff.time(geff.len() - 1));
        assert!(mid.abs() < 1e-15);
        assert!((cross_correlation_g12(&geff, &w).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rect_becomes_triangle() {
        let dt = 1e-9;
        let w = WindowSpec::new(100e-9, 20e6).unwrap();
        let rect = ImpulseResponse::new(vec![1.0 / 100e-9; 100], dt).unwrap();
        let geff = effective_response(&rect, &w).unwrap();
        assert_eq!(geff.len(), 199);
        let peak = geff.samples().iter().cloned().fold(f64::MIN, f64::max);
        assert!((geff.samples()[99] - peak).abs() < 1e-6);
        for k in 0..199 {
            let want = peak * (100 - (k as i64 - 99).unsigned_abs() as usize) as f64 / 100.0;
            assert!((geff.samples()[k] - want).abs() < 1e-6 * peak, "k={k}");
        }
    }

    #[test]
    fn window_sum_matches_double_sum() {
        let dt = 1e-9;
        let w = WindowSpec::new(7e-9, 2e8).unwrap();
        let g: Vec<f64> = (0..23)
            .map(|k| ((k * 37 % 11) as f64 - 4.5) * 1e7)
            .collect();
        let resp = ImpulseResponse::new(g.clone(), dt).unwrap();
        let geff = effective_response(&resp, &w).unwrap();
        for k in 0..geff.len() {
            let mut direct = 0.0;
            for j in 0..7 {
                if k >= j && k - j < g.len() {
                    direct += g[k - j] / 7.0;
                }
            }
            assert!((geff.samples()[k] - direct).abs() <= 1e-10 * 1e7, "k={k}");
        }
    }

    #[test]
    fn alignment_matches_brute_force() {
        let dt = 1.0;
        let w = WindowSpec::new(5.0, 1.0).unwrap();
        let g: Vec<f64> = (0..17)
            .map(|k| ((k * 13 % 7) as f64 - 2.0) + 0.1 * k as f64)
            .collect();
        let resp = ImpulseResponse::new(g.clone(), dt).unwrap();
        let got = cross_correlation_g12(&resp, &w).unwrap();
        let norm = (g.iter().map(|x| x * x).sum::<f64>() * 5.0).sqrt();
        let mut best = f64::MIN;
        for shift in -4i64..17 {
            let mut s = 0.0;
            for j in 0..5 {
                let idx = shift + j;
                if (0..17).contains(&idx) {
                    s += g[idx as usize];
                }
            }
            best = best.max(s / norm);
        }
        assert!((got - best).abs() < 1e-10);
    }

    #[test]
    fn sampled_averaging_is_a_comb() {
        let w = window().with_averaging(Averaging::Sampled);
        let geff = effective_response(&delta(1e-9), &w).unwrap();
        let nonzero: Vec<usize> = (0..geff.len())
            .filter(|&k| geff.samples()[k] != 0.0)
            .collect();
        assert_eq!(nonzero.len(), 16);
        assert!(nonzero.windows(2).all(|p| p[1] - p[0] == 50));
    }

    #[test]
    fn off_grid_window_is_resampled() {
        let w = WindowSpec::new(10.5e-9, 1e8).unwrap();
        let g = ImpulseResponse::new(vec![1e8; 10], 1e-9).unwrap();
        let geff = effective_response(&g, &w).unwrap();
        assert!((geff.dt() - 10.5e-9 / 11.0).abs() < 1e-20);
        assert!(whole_steps(10.5e-9, geff.dt()) == Some(11));
    }

    #[test]
    fn first_order_is_exponential() {
        let eps = (10f64.powf(0.05) - 1.0).sqrt();
        let rate = 2.0 * PI * 1e7 / eps;
        let g = chebyshev_impulse(1, 1e7, 0.5, 1e-10, 20_000, Truncation::Error).unwrap();
        let ratio = g.samples()[10] / g.samples()[0];
        assert!((ratio - (-rate * 1e-9).exp()).abs() < 1e-12);
    }

    #[test]
    fn unit_dc_gain() {
        for order in [1, 3, 7] {
            let g = chebyshev_impulse(order, 1e7, 0.5, 1e-9, 4000, Truncation::Extend).unwrap();
            assert!((g.dc_gain() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn energy_expansion_matches_quadrature() {
        let f = ChebyshevLowPass::new(7, 1e7, 0.5).unwrap();
        let (dt, n) = (1e-11, 400_000);
        let mut numeric = 0.0;
        for k in 0..=n {
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            numeric += w * f.response(k as f64 * dt).powi(2);
        }
        numeric *= dt;
        let analytic = f.energy_until(n as f64 * dt);
        assert!(((numeric - analytic) / analytic).abs() < 1e-6);
        assert!(analytic / f.total_energy() > 0.999_999);
    }

    #[test]
    fn short_records_extend_or_fail() {
        assert!(matches!(
            chebyshev_impulse(7, 1e6, 0.5, 1e-9, 200, Truncation::Error),
            Err(Error::Truncated { .. })
        ));
        let g = chebyshev_impulse(7, 1e6, 0.5, 1e-9, 200, Truncation::Extend).unwrap();
        assert!(g.len() > 200 && g.len() % 200 == 0);
    }

    #[test]
    fn g12_grows_with_bandwidth() {
        let w = window();
        let cutoffs = [1e6, 2e6, 3e6, 5e6, 7e6, 1e7, 2e7, 3e7, 5e7, 7e7, 1e8];
        let g: Vec<f64> = cutoffs
            .iter()
            .map(|&f| chebyshev_g12(7, f, 0.5, &w).unwrap())
            .collect();
        assert!(g.windows(2).all(|p| p[1] >= p[0] - 1e-12), "{g:?}");
        assert!(g.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn broadband_limit() {
        let w = window();
        let g = chebyshev_impulse(7, 2e9, 0.5, 1e-11, 400_000, Truncation::Extend).unwrap();
        let g12 = cross_correlation_g12(&effective_response(&g, &w).unwrap(), &w).unwrap();
        assert!(g12 > 0.999, "{g12}");
    }

    #[test]
    fn linear_in_the_response() {
        let w = WindowSpec::new(20e-9, 1e8).unwrap();
        let a: Vec<f64> = (0..60).map(|k| (k as f64 * 0.3).sin()).collect();
        let b: Vec<f64> = (0..60).map(|k| (k as f64 * 0.11).cos()).collect();
        let mix: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 2.0 * x - 0.5 * y).collect();
        let ea = effective_response(&ImpulseResponse::new(a, 1e-9).unwrap(), &w).unwrap();
        let eb = effective_response(&ImpulseResponse::new(b, 1e-9).unwrap(), &w).unwrap();
        let em = effective_response(&ImpulseResponse::new(mix, 1e-9).unwrap(), &w).unwrap();
        for k in 0..em.len() {
            let want = 2.0 * ea.samples()[k] - 0.5 * eb.samples()[k];
            assert!((em.samples()[k] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn text_round_trip() {
        let g = chebyshev_impulse(3, 2e7, 0.5, 1e-9, 400, Truncation::Extend).unwrap();
        let back = ImpulseResponse::from_text(&g.to_text()).unwrap();
        assert_eq!(back.len(), g.len());
        assert!((back.dt() - g.dt()).abs() < 1e-21);
        for (x, y) in back.samples().iter().zip(g.samples()) {
            assert!((x - y).abs() <= 1e-15 * y.abs().max(1.0));
        }
    }

    #[test]
    fn text_formats() {
        let parsed = ImpulseResponse::from_text(
            "# scope capture\ntime amp\n0 1\n1e-9 2 # peak\n\n2e-9\t0.5\n",
        )
        .unwrap();
        assert_eq!(parsed.samples(), &[1.0, 2.0, 0.5]);
        let comma = ImpulseResponse::from_text("0,1\n0.5,1\n1.0,1\n").unwrap();
        assert_eq!(comma.dt(), 0.5);
        assert!(matches!(
            ImpulseResponse::from_text("0,1\n1,2\n3,4\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            ImpulseResponse::from_text("0,1\n1,2\nx,4\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(ImpulseResponse::from_text("0,1\n").is_err());
    }
}
