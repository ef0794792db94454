//! One function per subcommand. Each validates its inputs, runs the
//! computation and returns a human-readable summary, a [`RunReport`] and,
//! for the table commands, CSV text.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Value};

use sslud::intervals::{
    self, bootstrap_draws, normal_ci_from_draws, percentile_ci, percentile_ranks, CiMethod, StudyOptions, VarianceMode,
};
use sslud::reference;
use sslud::symmetry_test::{max_n_grid, max_n_randomized, power_cell, run_test, Alternative, Decision};
use sslud::{fit_mle, OptimizerOptions, RngStream, Sample};

use crate::format::Precision;
use crate::report::RunReport;
use crate::{CliError, CliResult};

/// Minimum N for a simulated cutoff.
pub const MIN_CUTOFF_REPLICATIONS: usize = 20;
/// Published coverage deltas above this are flagged in study summaries.
pub const CP_FLAG: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Normal,
    Percentile,
}

impl From<Method> for CiMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Normal => CiMethod::Normal,
            Method::Percentile => CiMethod::Percentile,
        }
    }
}

pub struct Outcome {
    pub summary: String,
    pub report: RunReport,
    pub csv: Option<String>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn check_alpha(alpha: f64) -> CliResult<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(usage(format!("--alpha must lie strictly between 0 and 1, got {alpha}")))
    }
}

fn check_mu(flag: &str, mu: f64) -> CliResult<()> {
    if mu != 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("{flag} must be finite and nonzero, got {mu}")))
    }
}

fn check_lists(mus: &[f64], mu_flag: &str, ns: &[usize]) -> CliResult<()> {
    if mus.is_empty() {
        return Err(usage(format!("{mu_flag} is empty")));
    }
    if ns.is_empty() {
        return Err(usage("--n-list is empty"));
    }
    for &m in mus {
        check_mu(mu_flag, m)?;
    }
    if let Some(n) = ns.iter().find(|&&n| n < 2) {
        return Err(usage(format!("--n-list entries must be at least 2, got {n}")));
    }
    Ok(())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("CSV is UTF-8")
}

pub fn fit(sample: &Sample, source: &str) -> CliResult<Outcome> {
    let opts = OptimizerOptions::default();
    let fit = fit_mle(sample, &opts)?;
    let mut summary = String::new();
    writeln!(summary, "data        {source} (n = {})", sample.len()).unwrap();
    writeln!(summary, "mu_hat      {:.6}", fit.mu_hat).unwrap();
    writeln!(summary, "loglik      {:.6}", fit.loglik).unwrap();
    writeln!(summary, "branch      {}", format!("{:?}", fit.branch).to_lowercase()).unwrap();
    writeln!(summary, "iterations  {}", fit.iterations).unwrap();
    writeln!(summary, "converged   {}", fit.converged).unwrap();
    let report = RunReport::new(
        "fit",
        None,
        json!({ "data": source, "n": sample.len(), "optimizer": opts }),
        json!(fit),
    );
    Ok(Outcome {
        summary,
        report,
        csv: None,
    })
}

pub struct TestArgs {
    pub mu1: f64,
    pub alpha: f64,
    pub replications: usize,
    pub seed: u64,
}

pub fn test(sample: &Sample, source: &str, a: &TestArgs) -> CliResult<Outcome> {
    check_mu("--mu1", a.mu1)?;
    check_alpha(a.alpha)?;
    if a.replications < MIN_CUTOFF_REPLICATIONS {
        return Err(usage(format!("--N must be at least {MIN_CUTOFF_REPLICATIONS}")));
    }
    let alt = Alternative::new(a.mu1)?;
    let rng = RngStream::new(a.seed).cell(a.mu1, sample.len());
    let r = run_test(&alt, sample, a.alpha, a.replications, &rng)?;

    let mut summary = String::new();
    writeln!(summary, "data        {source} (n = {})", sample.len()).unwrap();
    writeln!(summary, "H0: 1/mu = 0 against mu = {}, alpha = {}", a.mu1, a.alpha).unwrap();
    writeln!(
        summary,
        "Lambda      {:?}, log = {}",
        r.log_lambda.branch, r.log_lambda.value
    )
    .unwrap();
    writeln!(summary, "part        {:?}", r.part).unwrap();
    if let Some(c) = &r.cutoff {
        writeln!(
            summary,
            "cutoff      log k = {}, k = {} (N = {})",
            c.log_k,
            c.k(),
            c.replications
        )
        .unwrap();
    }
    if let Some(p) = r.exceedance_prob {
        writeln!(summary, "P(beyond)   {p}").unwrap();
    }
    let decision = match r.decision {
        Decision::Reject => "reject H0".to_string(),
        Decision::Accept => "do not reject H0".to_string(),
        Decision::Randomized { gamma } => {
            format!("randomized: reject H0 with probability {gamma:.6}")
        }
    };
    writeln!(summary, "decision    {decision}").unwrap();

    let report = RunReport::new(
        "test",
        Some(a.seed),
        json!({
            "data": source,
            "n": sample.len(),
            "mu1": a.mu1,
            "alpha": a.alpha,
            "N": a.replications,
            "stream": rng.id(),
        }),
        json!(r),
    );
    Ok(Outcome {
        summary,
        report,
        csv: None,
    })
}

pub struct CiArgs {
    pub method: Method,
    pub modified: bool,
    pub alpha: f64,
    pub replications: usize,
    pub seed: u64,
}

pub fn ci(sample: &Sample, source: &str, a: &CiArgs) -> CliResult<Outcome> {
    check_alpha(a.alpha)?;
    if a.replications < 2 {
        return Err(usage("--N must be at least 2"));
    }
    if a.method == Method::Percentile {
        percentile_ranks(a.replications, a.alpha).map_err(|_| {
            usage(format!(
                "--N {} too small for a percentile interval at alpha {}",
                a.replications, a.alpha
            ))
        })?;
    }
    if a.modified && a.replications < 4 {
        return Err(usage("--modified needs --N of at least 4"));
    }
    let opts = OptimizerOptions::default();
    let fit = fit_mle(sample, &opts)?;
    let rng = RngStream::new(a.seed);
    let draws = bootstrap_draws(fit.mu_hat, sample.len(), a.replications, &rng, &opts)?;
    let ci = match a.method {
        Method::Normal => normal_ci_from_draws(fit.mu_hat, &draws, a.alpha, a.modified)?,
        Method::Percentile => percentile_ci(&draws, a.alpha, a.modified)?,
    };

    let mut summary = String::new();
    writeln!(summary, "data        {source} (n = {})", sample.len()).unwrap();
    writeln!(summary, "mu_hat      {:.6}", fit.mu_hat).unwrap();
    let label = if a.modified { "modified " } else { "" };
    writeln!(
        summary,
        "{:.0}% {label}{} interval  ({:.6}, {:.6})",
        100.0 * (1.0 - a.alpha),
        ci.method,
        ci.lower,
        ci.upper
    )
    .unwrap();
    if let Some(v) = ci.variance_hat {
        writeln!(summary, "V_hat       {v:.7}").unwrap();
    }
    if let Some(f) = &ci.filter {
        writeln!(
            summary,
            "filter      Q1 = {:.6}, Q3 = {:.6}, fences [{:.6}, {:.6}], removed {}, N* = {}",
            f.q1, f.q3, f.lower_fence, f.upper_fence, f.removed, f.n_star
        )
        .unwrap();
    }
    if draws.flagged > 0 {
        writeln!(summary, "warning     {} bootstrap fits did not converge", draws.flagged).unwrap();
    }

    let report = RunReport::new(
        "ci",
        Some(a.seed),
        json!({
            "data": source,
            "n": sample.len(),
            "method": ci.method,
            "modified": a.modified,
            "alpha": a.alpha,
            "N": a.replications,
            "optimizer": opts,
        }),
        json!({ "fit": fit, "interval": ci, "flagged_fits": draws.flagged }),
    );
    Ok(Outcome {
        summary,
        report,
        csv: None,
    })
}

pub struct PowerTableArgs {
    pub mu1_list: Vec<f64>,
    pub n_list: Vec<usize>,
    pub alpha: f64,
    pub replications: usize,
    pub seed: u64,
    pub precision: Precision,
}

impl PowerTableArgs {
    pub fn published_grid() -> (Vec<f64>, Vec<usize>) {
        (reference::POWER_MU1.to_vec(), reference::POWER_N.to_vec())
    }
}

pub fn power_table(a: &PowerTableArgs) -> CliResult<Outcome> {
    check_lists(&a.mu1_list, "--mu1-list", &a.n_list)?;
    check_alpha(a.alpha)?;
    if a.replications < MIN_CUTOFF_REPLICATIONS {
        return Err(usage(format!("--N must be at least {MIN_CUTOFF_REPLICATIONS}")));
    }
    let root = RngStream::new(a.seed);
    let p = a.precision;
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["mu1", "n", "alpha", "N", "log_k", "k", "power", "seed"])?;
    let mut summary = String::new();
    writeln!(
        summary,
        "{:>7} {:>5} {:>12} {:>7}   {:>9} {:>9} {:>8}",
        "mu1", "n", "k", "power", "pub k", "pub power", "delta"
    )
    .unwrap();
    let mut rows = Vec::new();
    for &mu1 in &a.mu1_list {
        let alt = Alternative::new(mu1)?;
        for &n in &a.n_list {
            let cell = power_cell(&alt, n, a.alpha, a.replications, &root.cell(mu1, n))?;
            let k = cell.cutoff.k();
            csv.write_record([
                p.fmt(mu1),
                n.to_string(),
                p.fmt(a.alpha),
                a.replications.to_string(),
                p.fmt(cell.cutoff.log_k),
                p.fmt(k),
                p.fmt(cell.power),
                a.seed.to_string(),
            ])?;
            let published = (a.alpha == 0.05).then(|| reference::power_cell(mu1, n)).flatten();
            let delta = published.map(|(pp, _)| cell.power - pp);
            match published {
                Some((pp, pk)) => writeln!(
                    summary,
                    "{mu1:>7} {n:>5} {:>12} {:>7.3}   {:>9} {:>9.3} {:>+8.3}",
                    crate::format::sig6(k),
                    cell.power,
                    crate::format::sig6(pk),
                    pp,
                    cell.power - pp
                ),
                None => writeln!(
                    summary,
                    "{mu1:>7} {n:>5} {:>12} {:>7.3}",
                    crate::format::sig6(k),
                    cell.power
                ),
            }
            .unwrap();
            rows.push(json!({
                "mu1": mu1,
                "n": n,
                "cutoff": cell.cutoff,
                "k": k,
                "power": cell.power,
                "published_k": published.map(|x| x.1),
                "published_power": published.map(|x| x.0),
                "power_delta": delta,
            }));
        }
    }
    let csv = finish(csv);
    let report = RunReport::new(
        "power-table",
        Some(a.seed),
        json!({
            "mu1_list": a.mu1_list,
            "n_list": a.n_list,
            "alpha": a.alpha,
            "N": a.replications,
            "cell_streams": "master.substream(mu1 bits).substream(n)",
        }),
        Value::Array(rows),
    );
    Ok(Outcome {
        summary,
        report,
        csv: Some(csv),
    })
}

pub struct CiStudyArgs {
    pub mu_list: Vec<f64>,
    pub n_list: Vec<usize>,
    pub method: Method,
    pub modified: bool,
    pub alpha: f64,
    pub replications: usize,
    pub inner_replications: Option<usize>,
    pub per_replication_variance: bool,
    pub seed: u64,
    pub precision: Precision,
}

impl CiStudyArgs {
    pub fn published_grid() -> (Vec<f64>, Vec<usize>) {
        (reference::CI_MU.to_vec(), reference::CI_N.to_vec())
    }
}

pub fn ci_study(a: &CiStudyArgs) -> CliResult<Outcome> {
    check_lists(&a.mu_list, "--mu-list", &a.n_list)?;
    check_alpha(a.alpha)?;
    if a.replications < 2 {
        return Err(usage("--N must be at least 2"));
    }
    let inner = a.inner_replications.unwrap_or(a.replications);
    if inner < 2 {
        return Err(usage("--inner-N must be at least 2"));
    }
    if a.method == Method::Percentile {
        percentile_ranks(inner, a.alpha).map_err(|_| {
            usage(format!(
                "inner N {inner} too small for a percentile interval at alpha {}",
                a.alpha
            ))
        })?;
    }
    let opts = StudyOptions {
        modified: a.modified,
        variance_mode: if a.per_replication_variance {
            VarianceMode::PerReplication
        } else {
            VarianceMode::Pilot
        },
        inner_replications: a.inner_replications,
        optimizer: OptimizerOptions::default(),
    };
    let root = RngStream::new(a.seed);
    let p = a.precision;
    let method: CiMethod = a.method.into();
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record([
        "mu", "n", "method", "modified", "v_hat", "lower", "upper", "AL", "CP", "seed",
    ])?;
    let mut summary = String::new();
    writeln!(
        summary,
        "{:>6} {:>5} {:>9} {:>7}   {:>8} {:>7} {:>8} {:>7}",
        "mu", "n", "AL", "CP", "pub AL", "pub CP", "dAL", "dCP"
    )
    .unwrap();
    let mut rows = Vec::new();
    let mut flagged_cells = Vec::new();
    for &mu in &a.mu_list {
        for &n in &a.n_list {
            let rng = root.cell(mu, n);
            let r = match a.method {
                Method::Normal => intervals::study_normal(mu, n, a.replications, a.alpha, &rng, &opts)?,
                Method::Percentile => intervals::study_percentile(mu, n, a.replications, a.alpha, &rng, &opts)?,
            };
            csv.write_record([
                p.fmt(mu),
                n.to_string(),
                method.to_string(),
                a.modified.to_string(),
                r.v_hat.map(|v| p.fmt(v)).unwrap_or_default(),
                p.fmt(r.reported_ci.lower),
                p.fmt(r.reported_ci.upper),
                p.fmt(r.avg_length),
                p.fmt(r.coverage),
                a.seed.to_string(),
            ])?;
            let published = (a.alpha == 0.05)
                .then(|| reference::ci_cell(method, a.modified, mu, n))
                .flatten();
            let deltas = published.map(|(al, cp)| (r.avg_length - al, r.coverage - cp));
            let flag = deltas.is_some_and(|(_, dcp)| dcp.abs() > CP_FLAG);
            if flag {
                flagged_cells.push(json!({ "mu": mu, "n": n }));
            }
            match (published, deltas) {
                (Some((al, cp)), Some((dal, dcp))) => writeln!(
                    summary,
                    "{mu:>6} {n:>5} {:>9} {:>7.3}   {:>8} {cp:>7.3} {:>+8.3} {dcp:>+7.3}{}",
                    crate::format::sig6(r.avg_length),
                    r.coverage,
                    crate::format::sig6(al),
                    dal,
                    if flag { "  CP differs" } else { "" }
                ),
                _ => writeln!(
                    summary,
                    "{mu:>6} {n:>5} {:>9} {:>7.3}",
                    crate::format::sig6(r.avg_length),
                    r.coverage
                ),
            }
            .unwrap();
            rows.push(json!({
                "study": r,
                "published_al": published.map(|x| x.0),
                "published_cp": published.map(|x| x.1),
                "al_delta": deltas.map(|d| d.0),
                "cp_delta": deltas.map(|d| d.1),
                "cp_flagged": flag,
            }));
        }
    }
    if !flagged_cells.is_empty() {
        writeln!(
            summary,
            "{} cell(s) with |CP - published| > {CP_FLAG}",
            flagged_cells.len()
        )
        .unwrap();
    }
    let csv = finish(csv);
    let report = RunReport::new(
        "ci-study",
        Some(a.seed),
        json!({
            "mu_list": a.mu_list,
            "n_list": a.n_list,
            "method": method,
            "modified": a.modified,
            "alpha": a.alpha,
            "N": a.replications,
            "inner_N": inner,
            "variance_mode": opts.variance_mode,
            "cell_streams": "master.substream(mu bits).substream(n)",
        }),
        json!({ "cells": rows, "cp_flagged_cells": flagged_cells }),
    );
    Ok(Outcome {
        summary,
        report,
        csv: Some(csv),
    })
}

/// The published max-n grid recomputed from the inequalities, or a single
/// cell when both `alpha` and `mu1` are given.
pub fn max_n_table(single: Option<(f64, f64)>) -> CliResult<Outcome> {
    let mut summary = String::new();
    if let Some((alpha, mu1)) = single {
        check_alpha(alpha)?;
        check_mu("--mu1", mu1)?;
        let n = max_n_randomized(alpha, &Alternative::new(mu1)?)?;
        write!(summary, "alpha = {alpha}, mu1 = {mu1}: largest randomized n = {n}").unwrap();
        let published = max_n_grid().into_iter().find(|c| c.alpha == alpha && c.mu1 == mu1);
        let mut results = json!({ "max_n": n });
        if let Some(c) = published {
            if c.agrees() {
                write!(summary, " (matches the published table)").unwrap();
            } else {
                write!(
                    summary,
                    " (published table: {}; the inequality value is reported)",
                    c.published
                )
                .unwrap();
            }
            results["published"] = json!(c.published);
            results["discrepancy"] = json!(!c.agrees());
        }
        summary.push('\n');
        let report = RunReport::new("max-n-table", None, json!({ "alpha": alpha, "mu1": mu1 }), results);
        return Ok(Outcome {
            summary,
            report,
            csv: None,
        });
    }
    let grid = max_n_grid();
    writeln!(
        summary,
        "{:>6} {:>5} {:>9} {:>6} {:>10}",
        "alpha", "mu1", "bound", "max n", "published"
    )
    .unwrap();
    for c in &grid {
        writeln!(
            summary,
            "{:>6} {:>5} {:>9.4} {:>6} {:>10}{}",
            c.alpha,
            c.mu1,
            c.bound,
            c.max_n,
            c.published,
            if c.agrees() { "" } else { "  differs" }
        )
        .unwrap();
    }
    let discrepancies: Vec<&_> = grid.iter().filter(|c| !c.agrees()).collect();
    writeln!(
        summary,
        "{} of {} cells differ from the published table; values shown are the inequality results",
        discrepancies.len(),
        grid.len()
    )
    .unwrap();
    let report = RunReport::new(
        "max-n-table",
        None,
        json!({ "alpha": reference::MAX_N_ALPHA, "mu1": reference::MAX_N_MU1 }),
        json!({ "cells": grid, "discrepancies": discrepancies }),
    );
    Ok(Outcome {
        summary,
        report,
        csv: None,
    })
}
