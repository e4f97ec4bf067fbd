//! Scalar root bracketing and minimization.

/// Bisection for an increasing function: returns `x ∈ [lo, hi]` with
/// `|f(x) - target| ≤ ftol`, or the midpoint of the final bracket once it
/// collapses to floating-point resolution.
pub fn bisect_increasing<F>(mut f: F, target: f64, mut lo: f64, mut hi: f64, ftol: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        let value = f(mid);
        if (value - target).abs() <= ftol {
            return mid;
        }
        if value < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of `f` on `[a, b]`. Stops when the
/// bracket is narrower than `xtol`; returns `(x, f(x))`.
pub fn golden_section<F>(mut f: F, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // the interior probes can beat the midpoint on flat floors
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .unwrap()
}
