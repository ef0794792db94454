use sslud::montecarlo::DEFAULT_SEED;
use sslud::symmetry_test::{
    cutoff_rank, exceedance_prob, exceedance_prob_with, log_lambda, max_n_grid, power_cell, simulate_null_log_lambdas,
    Alternative, NegativeTailFormula,
};
use sslud::{laplace_sample, RngStream, Sample};

fn alt(m: f64) -> Alternative {
    Alternative::new(m).unwrap()
}

fn power(m: f64, n: usize, seed: u64) -> f64 {
    power_cell(&alt(m), n, 0.05, 1000, &RngStream::new(seed).cell(m, n))
        .unwrap()
        .power
}

#[test]
fn cutoff_controls_size_on_its_own_null_draws() {
    for (m, n) in [(3.0, 100), (-3.0, 100), (10.0, 50), (-25.0, 30)] {
        let root = RngStream::new(DEFAULT_SEED).cell(m, n);
        let null = simulate_null_log_lambdas(&alt(m), n, 1000, &root.substream(0)).unwrap();
        let log_k = null[cutoff_rank(1000, 0.05) - 1];
        let rejected = null.iter().filter(|&&v| v > log_k).count();
        assert!(rejected <= 50, "({m}, {n}): {rejected}");
    }
}

#[test]
fn power_grows_with_n() {
    for m in [10.0, -10.0] {
        let p: Vec<f64> = [50, 150, 250].iter().map(|&n| power(m, n, DEFAULT_SEED)).collect();
        assert!(p[0] < p[1] && p[1] < p[2], "μ₁ = {m}: {p:?}");
    }
}

#[test]
fn power_falls_as_alternative_recedes() {
    for sign in [1.0, -1.0] {
        let near = power(3.0 * sign, 100, DEFAULT_SEED);
        let far = power(15.0 * sign, 100, DEFAULT_SEED);
        assert!(near > far + 0.3, "{near} vs {far}");
    }
}

#[test]
fn structural_cells_are_forced() {
    for m in [-2.0, -1.0, 1.0, 2.0] {
        let c = power_cell(&alt(m), 50, 0.05, 1000, &RngStream::new(DEFAULT_SEED).cell(m, 50)).unwrap();
        assert_eq!(c.cutoff.log_k, f64::NEG_INFINITY);
        assert_eq!(c.power, 1.0);
    }
}

#[test]
fn statistic_is_reflection_symmetric() {
    let mut rng = RngStream::new(DEFAULT_SEED).substream(9);
    for _ in 0..200 {
        let s = laplace_sample(12, &mut rng).unwrap();
        let neg = Sample::new(s.values().iter().map(|x| -x).collect()).unwrap();
        for m in [0.5, 2.0, 7.0] {
            let (a, b) = (log_lambda(&alt(m), &s), log_lambda(&alt(-m), &neg));
            // same terms, summed in opposite order
            assert!(a.value == b.value || (a.value - b.value).abs() <= 1e-13 * a.value.abs().max(1.0));
            assert_eq!(a.branch, b.branch);
        }
    }
}

#[test]
fn laplace_extremes_are_mirror_images() {
    // P(Y₁ > c) = P(Yₙ < -c) under the standard Laplace
    for (c, n) in [(0.3, 3), (1.0, 2), (2.0, 1)] {
        let upper = exceedance_prob(&alt(c), n);
        let lower = exceedance_prob_with(&alt(-c), n, NegativeTailFormula::DirectLaplace);
        assert!((upper - lower).abs() < 1e-15);

        let mut rng = RngStream::new(DEFAULT_SEED).cell(c, n);
        let trials = 200_000;
        let (mut hi, mut lo) = (0, 0);
        for _ in 0..trials {
            let s = laplace_sample(n, &mut rng).unwrap();
            hi += (s.min() > c) as usize;
            lo += (s.max() < -c) as usize;
        }
        let se = (upper * (1.0 - upper) / trials as f64).sqrt();
        for count in [hi, lo] {
            assert!(
                (count as f64 / trials as f64 - upper).abs() < 5.0 * se,
                "c={c} n={n}: {count}"
            );
        }
    }
}

#[test]
fn max_n_grid_reports_disagreements() {
    let grid = max_n_grid();
    assert_eq!(grid.len(), 12);
    let cell = |a: f64, m: f64| grid.iter().find(|c| c.alpha == a && c.mu1 == m).unwrap();
    assert_eq!(cell(0.05, -1.0).max_n, 2);
    assert!(cell(0.05, -1.0).agrees());
    assert_eq!(cell(0.05, 1.0).max_n, 1);
    assert!(!cell(0.05, 1.0).agrees());
    for c in &grid {
        println!(
            "α={} μ₁={:>3}: bound {:.4} → {} (published {}){}",
            c.alpha,
            c.mu1,
            c.bound,
            c.max_n,
            c.published,
            if c.agrees() { "" } else { "  DIFFERS" }
        );
    }
}
