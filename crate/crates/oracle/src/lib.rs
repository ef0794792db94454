//! Reference computations that do not share code paths with the library:
//! Gauss-Legendre quadrature, the Kolmogorov-Smirnov statistic, direct
//! (non-log) likelihood ratios and brute-force likelihood maximization.
//!
//! [`suite`] and [`properties`] package the checks so the crate's own tests
//! and the acceptance gate run exactly the same code.

pub mod properties;
pub mod quadrature;
pub mod suite;

use sslud::{Sample, Sslud};

/// Two-sided KS statistic of `sorted` against a continuous cdf.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic two-sided KS critical value at level 1%.
pub fn ks_critical_1pct(n: usize) -> f64 {
    // Kolmogorov distribution: P(K > 1.62762) = 0.01
    1.627_62 / (n as f64).sqrt()
}

/// e^{-|x|}/2
pub fn laplace_pdf(x: f64) -> f64 {
    0.5 * (-x.abs()).exp()
}

/// SSLUD density straight from the definition: Laplace density times twice
/// the clamped linear skewing factor.
pub fn sslud_pdf(mu: f64, x: f64) -> f64 {
    let w = (x / (2.0 * mu) + 0.5).clamp(0.0, 1.0);
    2.0 * laplace_pdf(x) * w
}

/// Λ as a plain product of density ratios over the sample.
pub fn direct_lambda(mu1: f64, s: &Sample) -> f64 {
    s.values().iter().map(|&x| sslud_pdf(mu1, x) / laplace_pdf(x)).product()
}

/// Σ log g(x; μ) from the definition.
pub fn direct_loglik(mu: f64, xs: &[f64]) -> f64 {
    xs.iter().map(|&x| sslud_pdf(mu, x).ln()).sum()
}

/// Best (μ, loglik) on `points` equally spaced values per sign branch inside
/// the feasible region and below `cap`.
pub fn grid_mle(xs: &[f64], cap: f64, points: usize) -> (f64, f64) {
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for (sign, bound) in [(1.0, -min), (-1.0, max)] {
        let lo = bound.max(0.0);
        for i in 1..=points {
            let a = lo + (cap - lo) * i as f64 / points as f64;
            let l = direct_loglik(sign * a, xs);
            if l > best.1 {
                best = (sign * a, l);
            }
        }
    }
    best
}

/// Support of SSLUD(μ) as `(lower, upper)` with infinities where unbounded.
pub fn support(mu: f64) -> (f64, f64) {
    if mu > 0.0 {
        (-mu, f64::INFINITY)
    } else {
        (f64::NEG_INFINITY, -mu)
    }
}

pub fn dist(mu: f64) -> Sslud {
    Sslud::new(mu).expect("nonzero μ")
}
