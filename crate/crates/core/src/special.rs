//! Error function and Poisson counting probabilities.
//!
//! For integer `m` the regularized upper incomplete gamma function
//! `Γ(m+1, λ)/Γ(m+1)` equals the Poisson CDF `P(N ≤ m)`, so every photon
//! counting rate here is a finite sum of Poisson terms.

pub use libm::{erf, erfc};

/// Poisson probabilities `P(N = k)` for `k = 0..=m`.
fn poisson_terms(m: u32, lambda: f64) -> impl Iterator<Item = f64> {
    let mut term = (-lambda).exp();
    (0..=m).map(move |k| {
        if k > 0 {
            term *= lambda / f64::from(k);
        }
        term
    })
}

/// `P(N ≤ m)` for `N ~ Poisson(λ)`.
pub fn poisson_cdf(m: u32, lambda: f64) -> f64 {
    debug_assert!(lambda >= 0.0);
    poisson_terms(m, lambda).sum::<f64>().min(1.0)
}

/// `P(N > m)` without cancellation when the tail is small.
pub fn poisson_sf(m: u32, lambda: f64) -> f64 {
    debug_assert!(lambda >= 0.0);
    if lambda == 0.0 {
        return 0.0;
    }
    if m == 0 {
        return -(-lambda).exp_m1();
    }
    if lambda >= f64::from(m) + 1.0 {
        return (1.0 - poisson_cdf(m, lambda)).max(0.0);
    }
    // terms beyond the mode shrink geometrically: sum them directly
    let mut term = poisson_terms(m, lambda).last().unwrap_or(0.0);
    let mut sum = 0.0;
    let mut k = m;
    loop {
        k += 1;
        term *= lambda / f64::from(k);
        sum += term;
        if term <= sum * 1e-17 || term == 0.0 || k > m + 10_000 {
            break;
        }
    }
    sum
}

/// `P(1 ≤ N ≤ m)`: the probability of landing in the inconclusive band.
pub fn poisson_band_unchecked(m: u32, lambda: f64) -> f64 {
    poisson_terms(m, lambda).skip(1).sum()
}
