//! Exhaustive grid check that homodyne detection is the best member of the
//! Gaussian family for both figures of merit at once.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use super::{conditional_rates, GaussianPovmParams};
use crate::alphabet::SignalAlphabet;
use crate::error::{Error, Result};

/// Squeezing that stands in for `r → ∞`: beyond it `a` differs from 1 by
/// less than `e^{−40}`.
pub const HOMODYNE_PROXY_R: f64 = 20.0;

/// Relative slack for ties and monotonicity steps.
const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub r: f64,
    pub phi: f64,
    pub lambda_b: f64,
    /// `None` where every outcome is discarded.
    pub p_error: Option<f64>,
    pub p_inconclusive: f64,
}

impl ScanPoint {
    fn error_key(&self) -> f64 {
        self.p_error.unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    /// The grid has no `φ = 0` point at the largest `r`.
    MissingHomodyneCorner,
    ErrorBelowCorner,
    InconclusiveBelowCorner,
    ErrorRisesAlongR,
    InconclusiveRisesAlongR,
    ErrorFallsAlongPhi,
    InconclusiveFallsAlongPhi,
}

/// A grid point that contradicts the expected ordering. `reference` is the
/// value it was compared against (the corner, or the previous grid step).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanViolation {
    pub kind: ViolationKind,
    pub r: f64,
    pub phi: f64,
    pub value: f64,
    pub reference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub alpha_sq: f64,
    pub lambda_b: f64,
    /// Row-major in `r`, then `φ`, in grid order.
    pub points: Vec<ScanPoint>,
    /// Ties go to the larger `r`, then the smaller `φ`.
    pub argmin_error: ScanPoint,
    pub argmin_inconclusive: ScanPoint,
    pub violations: Vec<ScanViolation>,
}

impl ScanReport {
    /// The `(r_max, φ = 0)` point, if the grid has it.
    pub fn homodyne_corner(&self) -> Option<&ScanPoint> {
        let r_max = self
            .points
            .iter()
            .map(|p| p.r)
            .fold(f64::NEG_INFINITY, f64::max);
        self.points.iter().find(|p| p.r == r_max && p.phi == 0.0)
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Both minimizers sit at the homodyne corner.
    pub fn argmins_at_corner(&self) -> bool {
        match self.homodyne_corner() {
            Some(c) => {
                let same = |p: &ScanPoint| p.r == c.r && p.phi == c.phi;
                same(&self.argmin_error) && same(&self.argmin_inconclusive)
            }
            None => false,
        }
    }
}

/// `r ∈ {0, 0.25, …, 3} ∪ {HOMODYNE_PROXY_R}`.
pub fn standard_r_grid() -> Vec<f64> {
    (0..=12)
        .map(|k| 0.25 * k as f64)
        .chain([HOMODYNE_PROXY_R])
        .collect()
}

/// `φ ∈ {0, π/16, …, π}`.
pub fn standard_phi_grid() -> Vec<f64> {
    (0..=16).map(|k| PI * k as f64 / 16.0).collect()
}

fn not_above(value: f64, reference: f64) -> bool {
    value <= reference + REL_TOL * reference.abs()
        || (value.is_infinite() && reference.is_infinite())
}

fn argmin_by(points: &[ScanPoint], key: impl Fn(&ScanPoint) -> f64) -> ScanPoint {
    let best = points.iter().map(&key).fold(f64::INFINITY, f64::min);
    *points
        .iter()
        .filter(|p| not_above(key(p), best))
        .max_by(|x, y| x.r.total_cmp(&y.r).then(y.phi.total_cmp(&x.phi)))
        .unwrap_or(&points[0])
}

/// Evaluates every `(r, φ)` pair and checks the optimality claims:
/// the `(r_max, φ = 0)` corner minimizes both rates, both rates are
/// non-increasing in `r` along `φ = 0`, and non-decreasing in `φ` on
/// `[0, π/2]` at each `r`. Failures are collected in the report, not raised.
pub fn scan_optimality(
    alphabet: &SignalAlphabet,
    lambda_b: f64,
    r_grid: &[f64],
    phi_grid: &[f64],
) -> Result<ScanReport> {
    if r_grid.is_empty() || phi_grid.is_empty() {
        return Err(Error::domain("grid", "scan grids must be non-empty"));
    }
    let params: Vec<GaussianPovmParams> = r_grid
        .iter()
        .flat_map(|&r| {
            phi_grid
                .iter()
                .map(move |&phi| GaussianPovmParams::new(r, phi, lambda_b))
        })
        .collect::<Result<_>>()?;
    let points: Vec<ScanPoint> = params
        .par_iter()
        .map(|p| {
            let rates = conditional_rates(alphabet, p)?;
            let op = rates.operating_point(alphabet);
            Ok(ScanPoint {
                r: p.squeeze_r(),
                phi: p.squeeze_phi(),
                lambda_b,
                p_error: op.as_ref().ok().map(|o| o.p_error),
                p_inconclusive: op.map_or(1.0, |o| o.p_inconclusive),
            })
        })
        .collect::<Result<_>>()?;

    let mut report = ScanReport {
        alpha_sq: alphabet.mean_photon_number(),
        lambda_b,
        argmin_error: argmin_by(&points, ScanPoint::error_key),
        argmin_inconclusive: argmin_by(&points, |p| p.p_inconclusive),
        points,
        violations: Vec::new(),
    };
    let violations = find_violations(&report);
    report.violations = violations;
    Ok(report)
}

fn find_violations(report: &ScanReport) -> Vec<ScanViolation> {
    let mut out = Vec::new();
    let points = &report.points;
    let mut push = |kind, p: &ScanPoint, value, reference| {
        out.push(ScanViolation {
            kind,
            r: p.r,
            phi: p.phi,
            value,
            reference,
        })
    };

    match report.homodyne_corner() {
        None => {
            let r_max = points.iter().map(|p| p.r).fold(f64::NEG_INFINITY, f64::max);
            push(
                ViolationKind::MissingHomodyneCorner,
                &ScanPoint {
                    r: r_max,
                    phi: 0.0,
                    lambda_b: report.lambda_b,
                    p_error: None,
                    p_inconclusive: f64::NAN,
                },
                f64::NAN,
                f64::NAN,
            );
        }
        Some(corner) => {
            for p in points {
                if !not_above(corner.error_key(), p.error_key()) {
                    push(
                        ViolationKind::ErrorBelowCorner,
                        p,
                        p.error_key(),
                        corner.error_key(),
                    );
                }
                if !not_above(corner.p_inconclusive, p.p_inconclusive) {
                    push(
                        ViolationKind::InconclusiveBelowCorner,
                        p,
                        p.p_inconclusive,
                        corner.p_inconclusive,
                    );
                }
            }
        }
    }

    let mut along_r: Vec<&ScanPoint> = points.iter().filter(|p| p.phi == 0.0).collect();
    along_r.sort_by(|x, y| x.r.total_cmp(&y.r));
    for w in along_r.windows(2) {
        if !not_above(w[1].error_key(), w[0].error_key()) {
            push(
                ViolationKind::ErrorRisesAlongR,
                w[1],
                w[1].error_key(),
                w[0].error_key(),
            );
        }
        if !not_above(w[1].p_inconclusive, w[0].p_inconclusive) {
            push(
                ViolationKind::InconclusiveRisesAlongR,
                w[1],
                w[1].p_inconclusive,
                w[0].p_inconclusive,
            );
        }
    }

    let mut radii: Vec<f64> = points.iter().map(|p| p.r).collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    for r in radii {
        let mut row: Vec<&ScanPoint> = points
            .iter()
            .filter(|p| p.r == r && p.phi <= FRAC_PI_2 + 1e-12)
            .collect();
        row.sort_by(|x, y| x.phi.total_cmp(&y.phi));
        for w in row.windows(2) {
            if !not_above(w[0].error_key(), w[1].error_key()) {
                push(
                    ViolationKind::ErrorFallsAlongPhi,
                    w[1],
                    w[1].error_key(),
                    w[0].error_key(),
                );
            }
            if !not_above(w[0].p_inconclusive, w[1].p_inconclusive) {
                push(
                    ViolationKind::InconclusiveFallsAlongPhi,
                    w[1],
                    w[1].p_inconclusive,
                    w[0].p_inconclusive,
                );
            }
        }
    }
    out
}
