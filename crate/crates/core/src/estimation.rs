//! Log-likelihood and maximum-likelihood estimation of μ.
//!
//! The support of SSLUD(μ) depends on μ, so the likelihood is `-inf` on a
//! data-dependent region and the two signs of μ form disjoint feasible
//! branches:
//!
//! * μ > 0 needs μ > -min(x) (only binding when min(x) < 0),
//! * μ < 0 needs μ < -max(x) (only binding when max(x) > 0).
//!
//! Writing t = 1/μ, each observation contributes `log((1 + x t)/2)` while
//! inside the ramp and a constant outside it, which is concave in t on each
//! branch. The objective is therefore unimodal per branch, and a coarse
//! log-spaced grid followed by golden-section refinement finds the maximum.

use serde::{Deserialize, Serialize};

use crate::distribution::{Sample, Sslud, SsludParam};
use crate::error::{Error, Result};

/// Σ log g(xᵢ; μ), summed over the order statistics.
pub fn log_likelihood(p: SsludParam, s: &Sample) -> f64 {
    let dist = Sslud::Skewed(p);
    let mut total = 0.0;
    for &x in s.sorted() {
        let lp = dist.log_pdf(x);
        if lp == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        total += lp;
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerOptions {
    /// Log-spaced grid points per branch.
    pub grid_points: usize,
    /// Final golden-section bracket width.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Margin kept from the open support boundary and from zero.
    pub boundary_eps: f64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        OptimizerOptions {
            grid_points: 128,
            tolerance: 1e-9,
            max_iterations: 500,
            boundary_eps: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MleResult {
    pub mu_hat: f64,
    pub loglik: f64,
    pub branch: Branch,
    pub iterations: usize,
    pub converged: bool,
}

impl MleResult {
    pub fn param(&self) -> SsludParam {
        SsludParam::new(self.mu_hat).expect("MLE is nonzero by construction")
    }
}

/// Upper bound M on |μ| searched by [`fit_mle`].
pub fn search_cap(s: &Sample) -> f64 {
    let max_abs = s.min().abs().max(s.max().abs());
    10.0 * max_abs.max(1.0) + 50.0
}

/// Feasible |μ| range `[lo, hi]` for one branch, or `None` if empty.
fn branch_range(s: &Sample, branch: Branch, opts: &OptimizerOptions) -> Option<(f64, f64)> {
    let eps = opts.boundary_eps;
    let cap = search_cap(s);
    let lo = match branch {
        Branch::Positive => eps.max(-s.min() + eps),
        Branch::Negative => eps.max(s.max() + eps),
    };
    (lo < cap).then_some((lo, cap))
}

struct BranchFit {
    mu: f64,
    loglik: f64,
    iterations: usize,
    converged: bool,
}

fn fit_branch(s: &Sample, branch: Branch, opts: &OptimizerOptions) -> Option<BranchFit> {
    let (lo, hi) = branch_range(s, branch, opts)?;
    let sign = match branch {
        Branch::Positive => 1.0,
        Branch::Negative => -1.0,
    };
    // objective in |μ|
    let objective = |a: f64| log_likelihood(SsludParam::new(sign * a).expect("branch range excludes zero"), s);

    let k = opts.grid_points.max(3);
    let ratio = (hi / lo).ln() / (k - 1) as f64;
    let grid: Vec<f64> = (0..k)
        .map(|i| match i {
            0 => lo,
            i if i == k - 1 => hi,
            i => lo * (ratio * i as f64).exp(),
        })
        .collect();
    let values: Vec<f64> = grid.iter().map(|&a| objective(a)).collect();
    let best = values
        .iter()
        .enumerate()
        .fold(0, |b, (i, v)| if *v > values[b] { i } else { b });

    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(k - 1)];
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = objective(c);
    let mut fd = objective(d);
    let mut iterations = 0;
    while b - a > opts.tolerance && iterations < opts.max_iterations {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
        iterations += 1;
    }
    let converged = b - a <= opts.tolerance;

    let mid = 0.5 * (a + b);
    let mut candidates = vec![(grid[best], values[best]), (c, fc), (d, fd), (mid, objective(mid))];
    candidates.retain(|(m, _)| *m >= lo && *m <= hi);
    let (abs_mu, loglik) = candidates
        .into_iter()
        .fold((grid[best], values[best]), |acc, c| if c.1 > acc.1 { c } else { acc });
    Some(BranchFit {
        mu: sign * abs_mu,
        loglik,
        iterations,
        converged,
    })
}

/// Maximum-likelihood estimate of μ over both sign branches.
///
/// Each branch is searched on `|μ| ∈ [max(ε, boundary + ε), M]` with
/// `M = 10·max(1, max|xᵢ|) + 50`. The higher-likelihood branch wins; exact ties
/// go to the positive branch. Non-convergence is flagged, not raised.
pub fn fit_mle(s: &Sample, opts: &OptimizerOptions) -> Result<MleResult> {
    if s.sorted().iter().all(|&x| x == 0.0) {
        return Err(Error::DegenerateSample);
    }
    let pos = fit_branch(s, Branch::Positive, opts);
    let neg = fit_branch(s, Branch::Negative, opts);
    let (fit, branch) = match (pos, neg) {
        (Some(p), Some(n)) => {
            if n.loglik > p.loglik {
                (n, Branch::Negative)
            } else {
                (p, Branch::Positive)
            }
        }
        (Some(p), None) => (p, Branch::Positive),
        (None, Some(n)) => (n, Branch::Negative),
        (None, None) => return Err(Error::InfeasibleBranchesEmpty),
    };
    let param = SsludParam::new(fit.mu)?;
    let loglik = log_likelihood(param, s);
    if !loglik.is_finite() {
        return Err(Error::InfeasibleBranchesEmpty);
    }
    Ok(MleResult {
        mu_hat: fit.mu,
        loglik,
        branch,
        iterations: fit.iterations,
        converged: fit.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::RngStream;
    use approx::assert_abs_diff_eq;

    fn sample(v: &[f64]) -> Sample {
        Sample::new(v.to_vec()).unwrap()
    }

    fn p(mu: f64) -> SsludParam {
        SsludParam::new(mu).unwrap()
    }

    #[test]
    fn log_likelihood_examples() {
        assert_abs_diff_eq!(log_likelihood(p(1.0), &sample(&[0.0])), 0.5f64.ln(), epsilon = 1e-15);
        assert_eq!(log_likelihood(p(1.0), &sample(&[-2.0, 0.0])), f64::NEG_INFINITY);
        assert_eq!(log_likelihood(p(0.5), &sample(&[1.0, 2.0])), -3.0);
    }

    #[test]
    fn support_boundary_is_excluded() {
        // density vanishes at x = -μ
        assert_eq!(log_likelihood(p(1.0), &sample(&[-1.0, 0.5])), f64::NEG_INFINITY);
        assert_eq!(log_likelihood(p(-1.0), &sample(&[1.0, 0.5])), f64::NEG_INFINITY);
        assert!(log_likelihood(p(1.0 + 1e-9), &sample(&[-1.0, 0.5])).is_finite());
    }

    #[test]
    fn all_zero_sample_is_rejected() {
        let opts = OptimizerOptions::default();
        assert_eq!(fit_mle(&sample(&[0.0, 0.0]), &opts), Err(Error::DegenerateSample));
    }

    #[test]
    fn positive_data_fits_positive_branch() {
        let fit = fit_mle(&sample(&[1.0, 2.0, 3.0]), &OptimizerOptions::default()).unwrap();
        assert_eq!(fit.branch, Branch::Positive);
        assert!(fit.mu_hat > 0.0 && fit.mu_hat <= 1.0 + 1e-6);
        // every observation in the tail: Σ -|x|
        assert_abs_diff_eq!(fit.loglik, -6.0, epsilon = 1e-9);
    }

    #[test]
    fn negative_data_fits_negative_branch() {
        let fit = fit_mle(&sample(&[-1.0, -2.5, -0.2, 0.3]), &OptimizerOptions::default()).unwrap();
        assert_eq!(fit.branch, Branch::Negative);
        assert!(fit.mu_hat < -0.3);
        assert!(fit.converged);
    }

    #[test]
    fn reported_loglik_is_recomputed_exactly() {
        let mut rng = RngStream::new(4);
        let s = Sslud::new(-1.3).unwrap().sample(60, &mut rng).unwrap();
        let fit = fit_mle(&s, &OptimizerOptions::default()).unwrap();
        assert_eq!(fit.loglik, log_likelihood(fit.param(), &s));
    }

    #[test]
    fn mle_recovers_mu_from_500_draws() {
        let mut rng = RngStream::new(2);
        let s = Sslud::new(2.0).unwrap().sample(500, &mut rng).unwrap();
        let fit = fit_mle(&s, &OptimizerOptions::default()).unwrap();
        // brute-force oracle at resolution 1e-3 over the positive branch
        let lo = (-s.min()).max(0.0);
        let brute = (1..=20_000)
            .map(|i| lo + 1e-3 * i as f64)
            .map(|m| (m, log_likelihood(p(m), &s)))
            .fold((f64::NAN, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        assert!((fit.mu_hat - 2.0).abs() < 0.5, "{fit:?}");
        assert!(
            (fit.mu_hat - brute.0).abs() < 2e-3,
            "fit {} brute {}",
            fit.mu_hat,
            brute.0
        );
        assert!(fit.loglik >= brute.1 - 1e-9);
    }

    #[test]
    fn far_cap_approaches_laplace_limit() {
        let s = sample(&[-0.7, 0.2, 1.1, -2.0, 0.05]);
        let cap = search_cap(&s);
        let laplace: f64 = s.values().iter().map(|x| -x.abs()).sum::<f64>() + 5.0 * 0.5f64.ln();
        for sign in [1.0, -1.0] {
            let gaps: Vec<f64> = [1.0, 10.0, 100.0]
                .iter()
                .map(|k| (log_likelihood(p(sign * k * cap), &s) - laplace).abs())
                .collect();
            assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
            assert!(gaps[2] < 1e-3 * 5.0);
        }
    }
}
