//! Deterministic, splittable random streams and the replication harness.
//!
//! Every stream is identified by a master seed plus a derivation path. The
//! path is folded into a 256-bit ChaCha8 key, so a stream's output depends
//! only on `(master_seed, path)` and never on how many values were drawn from
//! its parent or on which thread produced them. Replication `i` of a plan run
//! from `root` always receives the stream `root.substream(i)`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn derive_key(master_seed: u64, path: &[u64]) -> [u8; 32] {
    let mut state = master_seed;
    let mut acc = splitmix64(&mut state);
    for (depth, &index) in path.iter().enumerate() {
        // depth is mixed in so that [a, b] and [b, a] land on different keys
        let mut s = acc ^ index.wrapping_mul(GOLDEN_GAMMA) ^ ((depth as u64 + 1) << 56);
        acc = splitmix64(&mut s) ^ splitmix64(&mut s).rotate_left(17);
    }
    let mut key = [0u8; 32];
    let mut s = acc;
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut s).to_le_bytes());
    }
    key
}

/// Master seed used when none is given.
pub const DEFAULT_SEED: u64 = 42;

/// Identity of a stream: enough to recreate it exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamId {
    pub master_seed: u64,
    pub path: Vec<u64>,
}

/// A deterministic random stream addressed by `(master_seed, path)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    id: StreamId,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64) -> Self {
        Self::at(master_seed, Vec::new())
    }

    fn at(master_seed: u64, path: Vec<u64>) -> Self {
        let rng = ChaCha8Rng::from_seed(derive_key(master_seed, &path));
        RngStream {
            id: StreamId { master_seed, path },
            rng,
        }
    }

    /// Child stream at `path ++ [index]`. Independent of draws already taken
    /// from `self`.
    pub fn substream(&self, index: u64) -> RngStream {
        let mut path = self.id.path.clone();
        path.push(index);
        Self::at(self.id.master_seed, path)
    }

    /// Stream for one grid cell, keyed by the cell's parameter value and
    /// sample size so that a cell's results do not depend on which other
    /// cells are computed or in what order.
    pub fn cell(&self, param: f64, n: usize) -> RngStream {
        // +0.0 and -0.0 are the same cell
        let bits = if param == 0.0 { 0 } else { param.to_bits() };
        self.substream(bits).substream(n as u64)
    }

    pub fn id(&self) -> &StreamId {
        &self.id
    }

    pub fn master_seed(&self) -> u64 {
        self.id.master_seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform variate on the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        // midpoints of the 2^53 dyadic cells: never 0, never 1
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard Laplace L(0, 1) by inverting its cdf.
    pub fn standard_laplace(&mut self) -> f64 {
        let u = self.uniform();
        if u < 0.5 {
            (2.0 * u).ln()
        } else {
            -(2.0 * (1.0 - u)).ln()
        }
    }
}

/// Parse a 64-bit seed written in decimal or as `0x`-prefixed hex.
pub fn parse_seed(text: &str) -> Result<u64> {
    let t = text.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => t.replace('_', "").parse::<u64>(),
    };
    parsed.map_err(|_| Error::InvalidSeed(text.to_string()))
}

/// How the per-replication values of a plan are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Aggregation {
    /// Ascending order statistics.
    Sort,
    /// Fraction of replications whose value is nonzero.
    Proportion,
    Mean,
    /// Values in replication order.
    Collect,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Aggregate {
    Sorted(Vec<f64>),
    Proportion(f64),
    Mean(f64),
    Collected(Vec<f64>),
}

impl Aggregate {
    /// Scalar value for `Proportion` and `Mean`.
    pub fn scalar(&self) -> Option<f64> {
        match self {
            Aggregate::Proportion(v) | Aggregate::Mean(v) => Some(*v),
            _ => None,
        }
    }

    pub fn values(&self) -> Option<&[f64]> {
        match self {
            Aggregate::Sorted(v) | Aggregate::Collected(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplicationPlan {
    pub replications: usize,
    pub aggregation: Aggregation,
    pub parallel: bool,
}

impl ReplicationPlan {
    pub fn new(replications: usize, aggregation: Aggregation) -> Self {
        ReplicationPlan {
            replications,
            aggregation,
            parallel: true,
        }
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    /// Runs `body(i, root.substream(i))` for every replication and returns the
    /// outputs in replication order. On failure the lowest failing index is
    /// reported, whatever the schedule.
    pub fn map<T, F>(&self, root: &RngStream, body: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize, RngStream) -> Result<T> + Sync + Send,
    {
        let run = |i: usize| body(i, root.substream(i as u64));
        let outputs: Vec<Result<T>> = if self.parallel {
            (0..self.replications).into_par_iter().map(run).collect()
        } else {
            (0..self.replications).map(run).collect()
        };
        outputs
            .into_iter()
            .enumerate()
            .map(|(index, r)| {
                r.map_err(|e| Error::Replication {
                    index,
                    source: Box::new(e),
                })
            })
            .collect()
    }
}

/// Executes a plan whose body yields one real per replication and reduces the
/// values according to `plan.aggregation`. Reductions run in replication
/// order, so the result is bit-identical across schedules.
pub fn run_replications<F>(plan: &ReplicationPlan, root: &RngStream, body: F) -> Result<Aggregate>
where
    F: Fn(usize, RngStream) -> Result<f64> + Sync + Send,
{
    let mut values = plan.map(root, body)?;
    let n = values.len();
    Ok(match plan.aggregation {
        Aggregation::Sort => {
            values.sort_by(f64::total_cmp);
            Aggregate::Sorted(values)
        }
        Aggregation::Proportion => {
            let hits = values.iter().filter(|v| **v != 0.0).count();
            Aggregate::Proportion(if n == 0 { f64::NAN } else { hits as f64 / n as f64 })
        }
        Aggregation::Mean => {
            let sum: f64 = values.iter().sum();
            Aggregate::Mean(if n == 0 { f64::NAN } else { sum / n as f64 })
        }
        Aggregation::Collect => Aggregate::Collected(values),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_mean_and_open_interval() {
        let mut s = RngStream::new(11);
        let n = 1_000_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let u = s.uniform();
            assert!(u > 0.0 && u < 1.0);
            sum += u;
        }
        assert!((sum / n as f64 - 0.5).abs() < 0.002);
    }

    #[test]
    fn same_seed_and_path_repeat() {
        let mut a = RngStream::new(5).substream(3).substream(9);
        let mut b = RngStream::new(5).substream(3).substream(9);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn substream_ignores_parent_draws() {
        let root = RngStream::new(42);
        let mut advanced = root.clone();
        for _ in 0..17 {
            advanced.next_u64();
        }
        let mut x = root.substream(1);
        let mut y = advanced.substream(1);
        assert_eq!(x.next_u64(), y.next_u64());
    }

    #[test]
    fn sibling_streams_rarely_collide() {
        let root = RngStream::new(2024);
        let mut a = root.substream(0);
        let mut b = root.substream(1);
        let grid = |u: f64| (u * 1e12).floor() as u64;
        let xs: std::collections::HashSet<u64> = (0..1000).map(|_| grid(a.uniform())).collect();
        let collisions = (0..1000).filter(|_| xs.contains(&grid(b.uniform()))).count();
        assert!(collisions < 10, "collisions = {collisions}");
    }

    #[test]
    fn path_order_matters() {
        let root = RngStream::new(1);
        let mut ab = root.substream(1).substream(2);
        let mut ba = root.substream(2).substream(1);
        assert_ne!(ab.next_u64(), ba.next_u64());
    }

    #[test]
    fn cell_streams_are_keyed_by_value() {
        let root = RngStream::new(3);
        assert_eq!(root.cell(-1.5, 100).next_u64(), root.cell(-1.5, 100).next_u64());
        assert_eq!(root.cell(0.0, 5).next_u64(), root.cell(-0.0, 5).next_u64());
        assert_ne!(root.cell(-1.5, 100).next_u64(), root.cell(1.5, 100).next_u64());
        assert_ne!(root.cell(-1.5, 100).next_u64(), root.cell(-1.5, 101).next_u64());
    }

    #[test]
    fn seeds_parse_in_both_bases() {
        assert_eq!(parse_seed("1234").unwrap(), 1234);
        assert_eq!(parse_seed("0xff").unwrap(), 255);
        assert_eq!(parse_seed("0XDEAD_BEEF").unwrap(), 0xdead_beef);
        assert_eq!(parse_seed("18446744073709551615").unwrap(), u64::MAX);
        assert!(parse_seed("-1").is_err());
        assert!(parse_seed("0xg").is_err());
    }

    #[test]
    fn constant_body_mean_is_one() {
        let plan = ReplicationPlan::new(250, Aggregation::Mean);
        let agg = run_replications(&plan, &RngStream::new(0), |_, _| Ok(1.0)).unwrap();
        assert_eq!(agg, Aggregate::Mean(1.0));
    }

    #[test]
    fn laplace_medians_average_to_zero() {
        let plan = ReplicationPlan::new(1000, Aggregation::Mean);
        let agg = run_replications(&plan, &RngStream::new(77), |_, mut s| {
            let mut xs: Vec<f64> = (0..101).map(|_| s.standard_laplace()).collect();
            xs.sort_by(f64::total_cmp);
            Ok(xs[50])
        })
        .unwrap();
        assert!(agg.scalar().unwrap().abs() < 0.01, "{agg:?}");
    }

    #[test]
    fn parallel_matches_sequential_bitwise() {
        let body = |_: usize, mut s: RngStream| Ok((0..50).map(|_| s.standard_laplace()).sum::<f64>());
        let root = RngStream::new(9);
        for aggregation in [
            Aggregation::Sort,
            Aggregation::Mean,
            Aggregation::Collect,
            Aggregation::Proportion,
        ] {
            let par = run_replications(&ReplicationPlan::new(500, aggregation), &root, body).unwrap();
            let seq = run_replications(&ReplicationPlan::new(500, aggregation).sequential(), &root, body).unwrap();
            match (&par, &seq) {
                (Aggregate::Mean(a), Aggregate::Mean(b)) => assert_eq!(a.to_bits(), b.to_bits()),
                _ => assert_eq!(par, seq),
            }
        }
    }

    #[test]
    fn first_failing_index_is_reported() {
        let plan = ReplicationPlan::new(100, Aggregation::Collect);
        let err = run_replications(&plan, &RngStream::new(0), |i, _| {
            if i % 30 == 29 {
                Err(Error::EmptySample)
            } else {
                Ok(0.0)
            }
        })
        .unwrap_err();
        match err {
            Error::Replication { index, .. } => assert_eq!(index, 29),
            other => panic!("unexpected {other:?}"),
        }
    }
}
