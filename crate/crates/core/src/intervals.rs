//! Parametric-bootstrap confidence intervals for μ and the coverage studies
//! that validate them.
//!
//! Two constructions share the same bootstrap: refit SSLUD(μ̂) samples N
//! times to get replicate MLEs, then either
//!
//! * **normal**: μ̂ ± z_{α/2} √V̂ with V̂ the replicate variance, or
//! * **percentile**: order statistics of the replicate MLEs at ranks
//!   round(Nα/2) and round(N(1-α/2)).
//!
//! The *modified* variants drop replicates outside Tukey's fences
//! [Q1 - 1.5 IQR, Q3 + 1.5 IQR] before computing V̂ or the ranks.

use serde::{Deserialize, Serialize};

use crate::distribution::Sslud;
use crate::error::{Error, Result};
use crate::estimation::{fit_mle, MleResult, OptimizerOptions};
use crate::montecarlo::{Aggregation, ReplicationPlan, RngStream, StreamId};
use crate::normal;
use crate::symmetry_test::check_alpha;

/// Replicate MLEs from a parametric bootstrap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapDraws {
    pub mu_hats: Vec<f64>,
    pub stream: StreamId,
    /// Replicates whose fit did not converge even after one retry.
    pub flagged: usize,
}

impl BootstrapDraws {
    pub fn len(&self) -> usize {
        self.mu_hats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu_hats.is_empty()
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.mu_hats.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

fn draw_and_fit(dist: &Sslud, n: usize, stream: &mut RngStream, opts: &OptimizerOptions) -> Result<MleResult> {
    let s = dist.sample(n, stream)?;
    fit_mle(&s, opts)
}

/// N replicate MLEs, each fitted to a fresh sample of size n from SSLUD(μ̂).
///
/// Replicate i uses `rng.substream(i)`. A replicate whose fit fails or does
/// not converge is redrawn once from `rng.substream(i).substream(1)`; if the
/// retry also fails to converge its estimate is kept and counted in
/// `flagged`.
pub fn bootstrap_draws(
    mu_hat: f64,
    n: usize,
    replications: usize,
    rng: &RngStream,
    opts: &OptimizerOptions,
) -> Result<BootstrapDraws> {
    let dist = Sslud::new(mu_hat)?;
    if n < 2 {
        return Err(Error::TooFew {
            what: "bootstrap sample size",
            min: 2,
            got: n,
        });
    }
    if replications < 2 {
        return Err(Error::TooFew {
            what: "bootstrap replications",
            min: 2,
            got: replications,
        });
    }
    let plan = ReplicationPlan::new(replications, Aggregation::Collect);
    let fits = plan.map(rng, |i, mut stream| match draw_and_fit(&dist, n, &mut stream, opts) {
        Ok(fit) if fit.converged => Ok((fit.mu_hat, false)),
        _ => {
            let mut retry = rng.substream(i as u64).substream(1);
            let fit = draw_and_fit(&dist, n, &mut retry, opts)?;
            Ok((fit.mu_hat, !fit.converged))
        }
    })?;
    Ok(BootstrapDraws {
        flagged: fits.iter().filter(|(_, f)| *f).count(),
        mu_hats: fits.into_iter().map(|(m, _)| m).collect(),
        stream: rng.id().clone(),
    })
}

/// Sample variance of the draws with divisor N - 1.
pub fn variance_hat(d: &BootstrapDraws) -> Result<f64> {
    sample_variance(&d.mu_hats)
}

fn sample_variance(xs: &[f64]) -> Result<f64> {
    if xs.len() < 2 {
        return Err(Error::TooFew {
            what: "variance",
            min: 2,
            got: xs.len(),
        });
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    Ok(ss / (n - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CiMethod {
    Normal,
    Percentile,
}

impl std::fmt::Display for CiMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CiMethod::Normal => "normal",
            CiMethod::Percentile => "percentile",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutlierFilterReport {
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    pub lower_fence: f64,
    pub upper_fence: f64,
    pub removed: usize,
    pub n_star: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CiResult {
    pub lower: f64,
    pub upper: f64,
    pub method: CiMethod,
    pub modified: bool,
    pub variance_hat: Option<f64>,
    pub filter: Option<OutlierFilterReport>,
}

impl CiResult {
    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, mu: f64) -> bool {
        self.lower <= mu && mu <= self.upper
    }
}

/// μ̂ ± z_{α/2} √V̂.
pub fn normal_ci(mu_hat: f64, v_hat: f64, alpha: f64) -> Result<CiResult> {
    check_alpha(alpha)?;
    if v_hat.is_nan() || v_hat < 0.0 {
        return Err(Error::NegativeVariance(v_hat));
    }
    let half = normal::upper_quantile(alpha / 2.0) * v_hat.sqrt();
    Ok(CiResult {
        lower: mu_hat - half,
        upper: mu_hat + half,
        method: CiMethod::Normal,
        modified: false,
        variance_hat: Some(v_hat),
        filter: None,
    })
}

/// Quantile of ascending `sorted` at probability `p` by linear interpolation
/// at 1-based position 1 + (N - 1) p.
pub fn interpolated_quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Drops draws outside [Q1 - 1.5 IQR, Q3 + 1.5 IQR], keeping the original
/// order of the survivors.
pub fn iqr_filter(d: &BootstrapDraws) -> Result<(BootstrapDraws, OutlierFilterReport)> {
    if d.len() < 4 {
        return Err(Error::TooFew {
            what: "IQR filter",
            min: 4,
            got: d.len(),
        });
    }
    let sorted = d.sorted();
    let q1 = interpolated_quantile(&sorted, 0.25);
    let q3 = interpolated_quantile(&sorted, 0.75);
    let iqr = q3 - q1;
    let lower_fence = q1 - 1.5 * iqr;
    let upper_fence = q3 + 1.5 * iqr;
    let kept: Vec<f64> = d
        .mu_hats
        .iter()
        .copied()
        .filter(|x| *x >= lower_fence && *x <= upper_fence)
        .collect();
    let report = OutlierFilterReport {
        q1,
        q3,
        iqr,
        lower_fence,
        upper_fence,
        removed: d.len() - kept.len(),
        n_star: kept.len(),
    };
    Ok((
        BootstrapDraws {
            mu_hats: kept,
            stream: d.stream.clone(),
            flagged: d.flagged,
        },
        report,
    ))
}

fn round_half_up(x: f64) -> f64 {
    (x + 0.5 + 1e-9).floor()
}

/// 1-based ranks (L, U) = (round(Nα/2), round(N(1 - α/2))), clamped to [1, N].
pub fn percentile_ranks(n: usize, alpha: f64) -> Result<(usize, usize)> {
    check_alpha(alpha)?;
    let lower = n as f64 * alpha / 2.0;
    if lower < 1.0 - 1e-9 {
        return Err(Error::TooFew {
            what: "percentile interval draws",
            min: (2.0 / alpha).ceil() as usize,
            got: n,
        });
    }
    let clamp = |r: f64| (r as usize).clamp(1, n);
    Ok((
        clamp(round_half_up(lower)),
        clamp(round_half_up(n as f64 * (1.0 - alpha / 2.0))),
    ))
}

/// Percentile interval from the draws; `modified` applies [`iqr_filter`]
/// first and uses the surviving count N* in the rank formulas.
pub fn percentile_ci(d: &BootstrapDraws, alpha: f64, modified: bool) -> Result<CiResult> {
    let (draws, filter) = if modified {
        let (kept, report) = iqr_filter(d)?;
        (kept, Some(report))
    } else {
        (d.clone(), None)
    };
    let sorted = draws.sorted();
    let (l, u) = percentile_ranks(sorted.len(), alpha)?;
    Ok(CiResult {
        lower: sorted[l - 1],
        upper: sorted[u - 1],
        method: CiMethod::Percentile,
        modified,
        variance_hat: None,
        filter,
    })
}

/// Normal interval around `mu_hat` with V̂ from the draws, optionally after
/// IQR filtering.
pub fn normal_ci_from_draws(mu_hat: f64, d: &BootstrapDraws, alpha: f64, modified: bool) -> Result<CiResult> {
    if modified {
        let (kept, report) = iqr_filter(d)?;
        let mut ci = normal_ci(mu_hat, variance_hat(&kept)?, alpha)?;
        ci.modified = true;
        ci.filter = Some(report);
        Ok(ci)
    } else {
        normal_ci(mu_hat, variance_hat(d)?, alpha)
    }
}

/// How V̂ is obtained inside the normal-method coverage study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceMode {
    /// One pilot bootstrap supplies V̂ for every replication.
    #[default]
    Pilot,
    /// Each replication bootstraps its own V̂ (sensitivity analysis).
    PerReplication,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyOptions {
    pub modified: bool,
    pub variance_mode: VarianceMode,
    /// Bootstrap size inside each CI; defaults to the outer replication count.
    pub inner_replications: Option<usize>,
    pub optimizer: OptimizerOptions,
}

impl Default for StudyOptions {
    fn default() -> Self {
        StudyOptions {
            modified: false,
            variance_mode: VarianceMode::Pilot,
            inner_replications: None,
            optimizer: OptimizerOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    pub mu_true: f64,
    pub n: usize,
    pub replications: usize,
    pub inner_replications: usize,
    pub alpha: f64,
    pub method: CiMethod,
    pub modified: bool,
    pub avg_length: f64,
    pub coverage: f64,
    /// Pilot V̂ (normal method with a pilot variance).
    pub v_hat: Option<f64>,
    /// Interval reported alongside AL/CP: the pilot interval for the normal
    /// method, replication 0's interval for the percentile method.
    pub reported_ci: CiResult,
    pub flagged: usize,
}

/// Average length and coverage of the normal-approximation interval.
///
/// Streams: the pilot sample comes from `rng.substream(0)` and its bootstrap
/// from `rng.substream(0).substream(1)`; replication i draws from
/// `rng.substream(1).substream(i)`. The modified variant only changes how V̂
/// is computed, so with equal seeds both variants see the same replicate
/// MLEs.
pub fn study_normal(
    mu_true: f64,
    n: usize,
    replications: usize,
    alpha: f64,
    rng: &RngStream,
    opts: &StudyOptions,
) -> Result<StudyResult> {
    check_alpha(alpha)?;
    let dist = Sslud::new(mu_true)?;
    let inner = opts.inner_replications.unwrap_or(replications);
    let z = normal::upper_quantile(alpha / 2.0);

    let mut pilot_stream = rng.substream(0);
    let pilot_fit = draw_and_fit(&dist, n, &mut pilot_stream, &opts.optimizer)?;
    let pilot_draws = bootstrap_draws(
        pilot_fit.mu_hat,
        n,
        inner,
        &rng.substream(0).substream(1),
        &opts.optimizer,
    )?;
    let pilot_ci = normal_ci_from_draws(pilot_fit.mu_hat, &pilot_draws, alpha, opts.modified)?;
    let pilot_v = pilot_ci.variance_hat.expect("normal interval carries V̂");

    let plan = ReplicationPlan::new(replications, Aggregation::Collect);
    let outcomes = plan.map(&rng.substream(1), |_, mut stream| {
        let fit = draw_and_fit(&dist, n, &mut stream, &opts.optimizer)?;
        let (v, flagged) = match opts.variance_mode {
            VarianceMode::Pilot => (pilot_v, 0),
            VarianceMode::PerReplication => {
                let draws = bootstrap_draws(fit.mu_hat, n, inner, &stream.substream(0), &opts.optimizer)?;
                let ci = normal_ci_from_draws(fit.mu_hat, &draws, alpha, opts.modified)?;
                (ci.variance_hat.expect("normal interval carries V̂"), draws.flagged)
            }
        };
        let ci = normal_ci(fit.mu_hat, v, alpha)?;
        Ok((ci.length(), ci.contains(mu_true), flagged))
    })?;

    let covered = outcomes.iter().filter(|o| o.1).count();
    let avg_length = match opts.variance_mode {
        VarianceMode::Pilot => 2.0 * z * pilot_v.sqrt(),
        VarianceMode::PerReplication => outcomes.iter().map(|o| o.0).sum::<f64>() / replications as f64,
    };
    Ok(StudyResult {
        mu_true,
        n,
        replications,
        inner_replications: inner,
        alpha,
        method: CiMethod::Normal,
        modified: opts.modified,
        avg_length,
        coverage: covered as f64 / replications as f64,
        v_hat: match opts.variance_mode {
            VarianceMode::Pilot => Some(pilot_v),
            VarianceMode::PerReplication => None,
        },
        reported_ci: pilot_ci,
        flagged: pilot_draws.flagged + outcomes.iter().map(|o| o.2).sum::<usize>(),
    })
}

/// Average length and coverage of the percentile interval. Each of the N
/// outer replications draws a sample from SSLUD(μ) on `rng.substream(i)`,
/// fits it, and bootstraps its own interval from `rng.substream(i).substream(0)`.
pub fn study_percentile(
    mu_true: f64,
    n: usize,
    replications: usize,
    alpha: f64,
    rng: &RngStream,
    opts: &StudyOptions,
) -> Result<StudyResult> {
    check_alpha(alpha)?;
    let dist = Sslud::new(mu_true)?;
    let inner = opts.inner_replications.unwrap_or(replications);
    let plan = ReplicationPlan::new(replications, Aggregation::Collect);
    let cis = plan.map(rng, |_, mut stream| {
        let fit = draw_and_fit(&dist, n, &mut stream, &opts.optimizer)?;
        let draws = bootstrap_draws(fit.mu_hat, n, inner, &stream.substream(0), &opts.optimizer)?;
        Ok((percentile_ci(&draws, alpha, opts.modified)?, draws.flagged))
    })?;
    let covered = cis.iter().filter(|(ci, _)| ci.contains(mu_true)).count();
    let avg_length = cis.iter().map(|(ci, _)| ci.length()).sum::<f64>() / replications as f64;
    Ok(StudyResult {
        mu_true,
        n,
        replications,
        inner_replications: inner,
        alpha,
        method: CiMethod::Percentile,
        modified: opts.modified,
        avg_length,
        coverage: covered as f64 / replications as f64,
        v_hat: None,
        flagged: cis.iter().map(|(_, f)| f).sum(),
        reported_ci: cis.into_iter().next().map(|(ci, _)| ci).ok_or(Error::TooFew {
            what: "study replications",
            min: 1,
            got: 0,
        })?,
    })
}
