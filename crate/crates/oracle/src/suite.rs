//! Distribution correctness checks for one value of μ.

use sslud::RngStream;

use crate::quadrature::{integrate, TAIL};
use crate::{dist, ks_critical_1pct, ks_statistic, support};

pub const SUITE_MUS: [f64; 6] = [-5.0, -2.0, -0.25, 0.25, 2.0, 5.0];
pub const KS_DRAWS: usize = 10_000;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub mu: f64,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, mu: f64, passed: bool, detail: String) -> Check {
    Check {
        name,
        mu,
        passed,
        detail,
    }
}

/// All distribution checks for SSLUD(μ); the KS sample is drawn from `rng`.
pub fn distribution_checks(mu: f64, rng: &RngStream) -> Vec<Check> {
    let d = dist(mu);
    let a = mu.abs();
    let breaks = [-a, 0.0, a];
    let (lo, hi) = support(mu);
    let (qlo, qhi) = (lo.max(-a - TAIL), hi.min(a + TAIL));
    let mut out = Vec::new();

    let total = integrate(|x| d.pdf(x), qlo, qhi, &breaks);
    out.push(check(
        "pdf integrates to 1",
        mu,
        (total - 1.0).abs() <= 1e-10,
        format!("|∫pdf - 1| = {:.3e}", (total - 1.0).abs()),
    ));

    let (glo, ghi) = (lo.max(-a - 8.0), hi.min(a + 8.0));
    let worst = (0..=200)
        .map(|i| glo + (ghi - glo) * i as f64 / 200.0)
        .map(|x| (d.cdf(x) - integrate(|t| d.pdf(t), qlo, x, &breaks)).abs())
        .fold(0.0, f64::max);
    out.push(check(
        "cdf matches ∫pdf",
        mu,
        worst <= 1e-8,
        format!("max diff {worst:.3e}"),
    ));

    let (mlo, mhi) = (-a - 20.0, a + 20.0);
    let grid: Vec<f64> = (0..10_000).map(|i| mlo + (mhi - mlo) * i as f64 / 9_999.0).collect();
    let drops = grid.windows(2).filter(|w| d.cdf(w[1]) < d.cdf(w[0])).count();
    let ends = if mu > 0.0 {
        d.cdf(-mu) == 0.0 && d.cdf(-mu - 1.0) == 0.0 && d.cdf(a + 40.0) > 1.0 - 1e-15
    } else {
        d.cdf(-mu) == 1.0 && d.cdf(-mu + 1.0) == 1.0 && d.cdf(-a - 40.0) < 1e-15
    };
    out.push(check(
        "cdf nondecreasing, 0/1 at support ends",
        mu,
        drops == 0 && ends,
        format!("{drops} decreases on 10^4 grid, endpoints ok = {ends}"),
    ));

    let h = 1e-5;
    let worst = grid
        .iter()
        .filter(|&&x| x > lo + 2.0 * h && x < hi - 2.0 * h && breaks.iter().all(|b| (x - b).abs() > 1e-4))
        .map(|&x| ((d.cdf(x + h) - d.cdf(x - h)) / (2.0 * h) - d.pdf(x)).abs())
        .fold(0.0, f64::max);
    out.push(check("cdf' = pdf", mu, worst <= 1e-6, format!("max diff {worst:.3e}")));

    let jump = [-a, a]
        .iter()
        .map(|&x| (d.pdf(x.next_up()) - d.pdf(x.next_down())).abs())
        .fold(0.0, f64::max);
    out.push(check(
        "pdf continuous at ±μ",
        mu,
        jump <= 1e-14,
        format!("max jump {jump:.3e}"),
    ));

    let us = [1e-6, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0 - 1e-6];
    let worst = us
        .iter()
        .map(|&u| (d.cdf(d.quantile(u).expect("u in (0,1)")) - u).abs())
        .fold(0.0, f64::max);
    out.push(check(
        "quantile round-trip",
        mu,
        worst <= 1e-10,
        format!("max |cdf(q(u)) - u| {worst:.3e}"),
    ));

    let mut stream = rng.clone();
    let s = d.sample(KS_DRAWS, &mut stream).expect("n > 0");
    let ks = ks_statistic(s.sorted(), |x| d.cdf(x));
    let crit = ks_critical_1pct(KS_DRAWS);
    out.push(check(
        "sampler KS at 1%",
        mu,
        ks < crit,
        format!("D = {ks:.4}, critical {crit:.4}"),
    ));
    out
}

/// The whole suite over [`SUITE_MUS`], with KS samples keyed by μ.
pub fn distribution_suite(seed: u64) -> Vec<Check> {
    let root = RngStream::new(seed);
    SUITE_MUS
        .iter()
        .flat_map(|&mu| distribution_checks(mu, &root.cell(mu, KS_DRAWS)))
        .collect()
}
