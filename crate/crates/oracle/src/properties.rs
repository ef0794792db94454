//! Property checks driven by proptest with a fixed-seed runner, so every run
//! explores the same cases. Each returns `Err` with the shrunk
//! counterexample on failure.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};

use sslud::estimation::search_cap;
use sslud::intervals::{
    bootstrap_draws, iqr_filter, percentile_ci, percentile_ranks, study_normal, study_percentile, BootstrapDraws,
    StudyOptions,
};
use sslud::symmetry_test::{log_lambda, power_cell, Alternative};
use sslud::{fit_mle, Branch, OptimizerOptions, RngStream, Sample};

use crate::{direct_lambda, grid_mle};

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn report<T: std::fmt::Debug>(r: Result<(), TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn draws(v: Vec<f64>) -> BootstrapDraws {
    BootstrapDraws {
        mu_hats: v,
        stream: RngStream::new(0).id().clone(),
        flagged: 0,
    }
}

/// A nonzero alternative and up to `max_n` observations, some placed exactly
/// on the ramp boundaries ±μ₁ or at 0.
fn alt_and_sample(max_n: usize) -> impl Strategy<Value = (f64, Vec<f64>)> {
    (0.05f64..12.0, any::<bool>()).prop_flat_map(move |(a, neg)| {
        let mu1 = if neg { -a } else { a };
        let x = prop_oneof![
            6 => -15.0f64..15.0,
            1 => Just(mu1),
            1 => Just(-mu1),
            1 => Just(0.0),
        ];
        (Just(mu1), prop::collection::vec(x, 1..=max_n))
    })
}

/// log Λ agrees with the direct product of density ratios (relative 1e-10),
/// including Λ = 0.
pub fn log_lambda_matches_product(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&alt_and_sample(8), |(mu1, xs)| {
        let s = Sample::new(xs).unwrap();
        let ll = log_lambda(&Alternative::new(mu1).unwrap(), &s);
        let direct = direct_lambda(mu1, &s);
        if direct == 0.0 {
            prop_assert_eq!(ll.value, f64::NEG_INFINITY);
        } else {
            let rel = (ll.value.exp() - direct).abs() / direct;
            prop_assert!(
                rel <= 1e-10,
                "Λ = {} vs direct {} (rel {:e})",
                ll.value.exp(),
                direct,
                rel
            );
        }
        Ok(())
    }))
}

fn heavy_tailed(min_len: usize, max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    let x = prop_oneof![
        8 => -3.0f64..3.0,
        1 => -200.0f64..200.0,
        1 => Just(1.0),
    ];
    prop::collection::vec(x, min_len..=max_len)
}

/// Fences follow the quartiles, every kept value lies inside them, removed +
/// kept = N, and kept values stay in input order.
pub fn iqr_filter_fences(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&heavy_tailed(4, 300), |v| {
        let (kept, r) = iqr_filter(&draws(v.clone())).unwrap();
        prop_assert_eq!(r.n_star + r.removed, v.len());
        prop_assert_eq!(kept.len(), r.n_star);
        prop_assert!(r.iqr >= 0.0 && r.q3 - r.q1 == r.iqr);
        prop_assert_eq!(r.lower_fence, r.q1 - 1.5 * r.iqr);
        prop_assert_eq!(r.upper_fence, r.q3 + 1.5 * r.iqr);
        for &m in &kept.mu_hats {
            prop_assert!(r.lower_fence <= m && m <= r.upper_fence);
        }
        let removed = v.iter().filter(|&&m| m < r.lower_fence || m > r.upper_fence).count();
        prop_assert_eq!(removed, r.removed);
        let expected: Vec<f64> = v
            .into_iter()
            .filter(|&m| m >= r.lower_fence && m <= r.upper_fence)
            .collect();
        prop_assert_eq!(kept.mu_hats, expected);
        Ok(())
    }))
}

/// Percentile endpoints are order statistics at the documented ranks, for
/// both the plain and the filtered interval.
pub fn percentile_endpoints_are_order_statistics(cases: u32) -> Result<(), String> {
    let strategy = (
        heavy_tailed(40, 400),
        prop_oneof![Just(0.05), Just(0.1), Just(0.2)],
        any::<bool>(),
    );
    report(runner(cases).run(&strategy, |(v, alpha, modified)| {
        let d = draws(v);
        let ci = percentile_ci(&d, alpha, modified).unwrap();
        prop_assert!(ci.lower <= ci.upper);
        let pool = if modified { iqr_filter(&d).unwrap().0 } else { d };
        let sorted = pool.sorted();
        let (l, u) = percentile_ranks(sorted.len(), alpha).unwrap();
        prop_assert_eq!(ci.lower, sorted[l - 1]);
        prop_assert_eq!(ci.upper, sorted[u - 1]);
        Ok(())
    }))
}

fn mle_sample() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![5 => -6.0f64..6.0, 1 => -0.2f64..0.2], 2..=40)
        .prop_filter("not all zero", |v| v.iter().any(|&x| x != 0.0))
}

/// Refitting a permuted sample gives the same estimate bit for bit.
pub fn mle_permutation_invariant(cases: u32) -> Result<(), String> {
    let strategy = mle_sample().prop_flat_map(|v| (Just(v.clone()), Just(v).prop_shuffle()));
    report(runner(cases).run(&strategy, |(v, w)| {
        let opts = OptimizerOptions::default();
        let a = fit_mle(&Sample::new(v).unwrap(), &opts).unwrap();
        let b = fit_mle(&Sample::new(w).unwrap(), &opts).unwrap();
        prop_assert_eq!(a.mu_hat.to_bits(), b.mu_hat.to_bits());
        prop_assert_eq!(a.loglik.to_bits(), b.loglik.to_bits());
        Ok(())
    }))
}

/// The estimate is feasible, sits on the branch it reports, and is at least
/// as good as a 10³-point grid per branch.
pub fn mle_beats_grid(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&mle_sample(), |v| {
        let s = Sample::new(v.clone()).unwrap();
        let fit = fit_mle(&s, &OptimizerOptions::default()).unwrap();
        prop_assert!(fit.loglik.is_finite());
        match fit.branch {
            Branch::Positive => prop_assert!(fit.mu_hat > 0.0 && fit.mu_hat > -s.min()),
            Branch::Negative => prop_assert!(fit.mu_hat < 0.0 && fit.mu_hat < -s.max()),
        }
        let (grid_mu, grid_ll) = grid_mle(&v, search_cap(&s), 1000);
        prop_assert!(
            fit.loglik >= grid_ll - 1e-9,
            "fit {} at {} below grid {} at {}",
            fit.loglik,
            fit.mu_hat,
            grid_ll,
            grid_mu
        );
        Ok(())
    }))
}

fn run_with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

/// Every simulation entry point gives identical output on a rerun and on 1
/// versus several worker threads.
pub fn reruns_bit_identical(seed: u64) -> Result<(), String> {
    let root = RngStream::new(seed);
    let opts = StudyOptions {
        inner_replications: Some(40),
        ..StudyOptions::default()
    };
    let mod_opts = StudyOptions { modified: true, ..opts };
    let pct_opts = StudyOptions {
        inner_replications: Some(80),
        ..mod_opts
    };
    let alt = Alternative::new(-3.0).unwrap();
    let work = || {
        (
            format!("{:?}", power_cell(&alt, 60, 0.05, 300, &root.cell(-3.0, 60))),
            format!(
                "{:?}",
                bootstrap_draws(-1.2, 50, 200, &root.cell(-1.2, 50), &OptimizerOptions::default())
            ),
            format!("{:?}", study_normal(-1.5, 40, 60, 0.05, &root.cell(-1.5, 40), &opts)),
            format!(
                "{:?}",
                study_normal(-1.5, 40, 60, 0.05, &root.cell(-1.5, 40), &mod_opts)
            ),
            format!(
                "{:?}",
                study_percentile(0.75, 40, 30, 0.05, &root.cell(0.75, 40), &pct_opts)
            ),
        )
    };
    let single = run_with_threads(1, work);
    let many = run_with_threads(4, work);
    let again = run_with_threads(4, work);
    if single != many {
        return Err(format!("1 thread vs 4 threads differ:\n{single:?}\n{many:?}"));
    }
    if many != again {
        return Err("rerun differs".into());
    }
    if single.0.contains("Err") || single.2.contains("Err") || single.4.contains("Err") {
        return Err(format!("simulation failed: {single:?}"));
    }
    Ok(())
}
