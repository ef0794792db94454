//! The skew-symmetric-Laplace-uniform distribution SSLUD(μ).
//!
//! The density is the standard Laplace density `e^{-|x|}/2` skewed by twice
//! the cdf of Uniform(-|μ|, |μ|) evaluated at `x·sign(μ)`:
//!
//! ```text
//! g(x) = 0                          x/μ < -1
//!        e^{-|x|} (x/(2μ) + 1/2)    -1 <= x/μ < 1
//!        e^{-|x|}                   x/μ >= 1
//! ```
//!
//! The support is `[-μ, ∞)` for μ > 0 and `(-∞, -μ]` for μ < 0. The limit
//! 1/μ = 0 is the standard Laplace distribution and is represented by
//! [`Sslud::SymmetricLimit`], never by μ = 0.
//!
//! If X ~ SSLUD(μ) then -X ~ SSLUD(-μ). The cdf for μ < 0 is evaluated as the
//! survival function of the reflected positive-μ law, which is the same
//! piecewise expression algebraically but keeps full relative precision in
//! the lower tail.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::montecarlo::RngStream;

const QUANTILE_TOL: f64 = 1e-12;
const QUANTILE_MAX_ITER: usize = 200;

/// Nonzero, finite shape parameter μ.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SsludParam(f64);

impl SsludParam {
    pub fn new(mu: f64) -> Result<Self> {
        if mu == 0.0 || !mu.is_finite() {
            return Err(Error::InvalidMu(mu));
        }
        Ok(SsludParam(mu))
    }

    pub fn mu(self) -> f64 {
        self.0
    }
}

/// A member of the SSLUD family, including its symmetric limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Sslud {
    Skewed(SsludParam),
    /// 1/μ = 0: the standard Laplace distribution.
    SymmetricLimit,
}

impl From<SsludParam> for Sslud {
    fn from(p: SsludParam) -> Self {
        Sslud::Skewed(p)
    }
}

/// `e^s (s - 1) + 1`, the integral of `t e^t` over [0, s], for s >= 0.
///
/// The closed form cancels for small s, so a series is used there.
fn ramp_mass(s: f64) -> f64 {
    if s < 0.5 {
        // sum_{k>=2} (k-1) s^k / k!
        let mut term = s; // s^k / k! at k = 1
        let mut sum = 0.0;
        for k in 2..40 {
            term *= s / k as f64;
            let add = (k - 1) as f64 * term;
            sum += add;
            if add < sum * 1e-17 {
                break;
            }
        }
        sum
    } else {
        s.exp() * (s - 1.0) + 1.0
    }
}

/// cdf and survival function of SSLUD(m), m > 0.
fn cdf_sf_positive(m: f64, x: f64) -> (f64, f64) {
    if x < -m {
        (0.0, 1.0)
    } else if x < 0.0 {
        let cdf = (-m).exp() * ramp_mass(x + m) / (2.0 * m);
        (cdf, 1.0 - cdf)
    } else if x < m {
        let sf = (-x).exp() - (-m).exp() * ramp_mass(m - x) / (2.0 * m);
        (1.0 - sf, sf)
    } else {
        let sf = (-x).exp();
        (-(-x).exp_m1(), sf)
    }
}

impl Sslud {
    pub fn new(mu: f64) -> Result<Self> {
        SsludParam::new(mu).map(Sslud::Skewed)
    }

    pub fn mu(&self) -> Option<f64> {
        match self {
            Sslud::Skewed(p) => Some(p.mu()),
            Sslud::SymmetricLimit => None,
        }
    }

    /// The linear skewing factor `clamp(x/(2μ) + 1/2, 0, 1)`; 1/2 in the
    /// symmetric limit.
    pub fn skew_factor(&self, x: f64) -> f64 {
        match *self {
            Sslud::SymmetricLimit => 0.5,
            Sslud::Skewed(p) => {
                let mu = p.mu();
                let a = mu.abs();
                // x/μ < -1, -1 <= x/μ < 1, x/μ >= 1 written against ±|μ|
                let (below, tail) = if mu > 0.0 { (x < -a, x >= a) } else { (x > a, x <= -a) };
                if below {
                    0.0
                } else if tail {
                    1.0
                } else {
                    0.5 * (1.0 + x / mu)
                }
            }
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self {
            Sslud::SymmetricLimit => 0.5 * (-x.abs()).exp(),
            Sslud::Skewed(_) => {
                let k = self.skew_factor(x);
                if k == 0.0 {
                    0.0
                } else {
                    (-x.abs()).exp() * k
                }
            }
        }
    }

    /// Log-density; `-inf` exactly where the density is zero.
    pub fn log_pdf(&self, x: f64) -> f64 {
        match self {
            Sslud::SymmetricLimit => -x.abs() - std::f64::consts::LN_2,
            Sslud::Skewed(_) => {
                let k = self.skew_factor(x);
                if k == 0.0 {
                    f64::NEG_INFINITY
                } else if k == 1.0 {
                    -x.abs()
                } else {
                    -x.abs() + k.ln()
                }
            }
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.cdf_sf(x).0
    }

    /// Survival function `1 - cdf(x)`, accurate in the upper tail.
    pub fn sf(&self, x: f64) -> f64 {
        self.cdf_sf(x).1
    }

    fn cdf_sf(&self, x: f64) -> (f64, f64) {
        match *self {
            Sslud::SymmetricLimit => {
                if x < 0.0 {
                    let c = 0.5 * x.exp();
                    (c, 1.0 - c)
                } else {
                    let s = 0.5 * (-x).exp();
                    (1.0 - s, s)
                }
            }
            Sslud::Skewed(p) => {
                let mu = p.mu();
                if mu > 0.0 {
                    cdf_sf_positive(mu, x)
                } else {
                    let (c, s) = cdf_sf_positive(-mu, -x);
                    (s, c)
                }
            }
        }
    }

    /// Inverse cdf: returns x with `|cdf(x) - u| <= 1e-12`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::ProbabilityOutOfRange(u));
        }
        let x = match *self {
            Sslud::SymmetricLimit => {
                if u < 0.5 {
                    (2.0 * u).ln()
                } else {
                    -(2.0 * (1.0 - u)).ln()
                }
            }
            Sslud::Skewed(p) => {
                let mu = p.mu();
                let a = mu.abs();
                if mu > 0.0 {
                    // closed form on the exponential tail [μ, ∞)
                    if u >= -(-a).exp_m1() {
                        -(-u).ln_1p()
                    } else {
                        self.solve(u, -a, a)
                    }
                } else if u <= (-a).exp() {
                    // closed form on the exponential tail (-∞, μ]
                    u.ln()
                } else {
                    self.solve(u, -a, a)
                }
            }
        };
        Ok(x)
    }

    /// Safeguarded Newton on `cdf(x) = u` within a sign-changing bracket.
    fn solve(&self, u: f64, mut lo: f64, mut hi: f64) -> f64 {
        // Work with whichever tail is small to keep the residual accurate.
        let residual = |x: f64| {
            let (c, s) = self.cdf_sf(x);
            if u <= 0.5 {
                c - u
            } else {
                (1.0 - u) - s
            }
        };
        let mut x = 0.5 * (lo + hi);
        for _ in 0..QUANTILE_MAX_ITER {
            let r = residual(x);
            if r.abs() <= QUANTILE_TOL * 0.5 {
                return x;
            }
            if r > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let d = self.pdf(x);
            let newton = x - r / d;
            x = if d > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()).max(1e-300) {
                break;
            }
        }
        x
    }

    /// One draw. SSLUD(μ) is sampled by rejection from the standard Laplace,
    /// accepting a proposal with probability equal to the skew factor.
    pub fn draw(&self, rng: &mut RngStream) -> f64 {
        loop {
            let x = rng.standard_laplace();
            match self {
                Sslud::SymmetricLimit => return x,
                Sslud::Skewed(_) => {
                    if rng.uniform() < self.skew_factor(x) {
                        return x;
                    }
                }
            }
        }
    }

    /// `n` i.i.d. draws; `n` must be at least 1.
    pub fn sample(&self, n: usize, rng: &mut RngStream) -> Result<Sample> {
        Sample::new((0..n).map(|_| self.draw(rng)).collect())
    }
}

/// n draws from L(0, 1), the law of the data under the symmetry hypothesis.
pub fn laplace_sample(n: usize, rng: &mut RngStream) -> Result<Sample> {
    Sslud::SymmetricLimit.sample(n, rng)
}

/// A nonempty collection of finite observations with cached order statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    values: Vec<f64>,
    sorted: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteObservation { index, value });
        }
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(Sample { values, sorted })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Order statistics y₁ <= ... <= yₙ.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted[self.sorted.len() - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn d(mu: f64) -> Sslud {
        Sslud::new(mu).unwrap()
    }

    #[test]
    fn zero_mu_is_rejected() {
        assert_eq!(SsludParam::new(0.0), Err(Error::InvalidMu(0.0)));
        assert!(SsludParam::new(-0.0).is_err());
        assert!(SsludParam::new(f64::NAN).is_err());
        assert!(SsludParam::new(f64::INFINITY).is_err());
    }

    #[test]
    fn pdf_examples() {
        for mu in [-7.0, -1.0, -1e-9, 1e-9, 0.3, 4.0] {
            assert_eq!(d(mu).pdf(0.0), 0.5);
        }
        assert_eq!(d(1.0).pdf(-2.0), 0.0);
        assert_abs_diff_eq!(d(1.0).pdf(1.0), (-1.0f64).exp(), epsilon = 1e-15);
        // ramp side of the boundary
        let left = (-1.0f64).exp() * (0.5 * (1.0 + 1.0));
        assert_abs_diff_eq!(d(1.0).pdf(1.0 - 1e-15), left, epsilon = 1e-14);
    }

    #[test]
    fn log_pdf_examples() {
        assert_abs_diff_eq!(d(3.0).log_pdf(0.0), 0.5f64.ln(), epsilon = 1e-15);
        assert_eq!(d(2.0).log_pdf(-2.0), f64::NEG_INFINITY);
        assert_eq!(d(-2.0).log_pdf(2.0), f64::NEG_INFINITY);
        assert_eq!(d(1.0).log_pdf(5.0), -5.0);
        assert_abs_diff_eq!(d(1.0).log_pdf(5.0), d(1.0).pdf(5.0).ln(), epsilon = 1e-14);
    }

    #[test]
    fn log_pdf_does_not_underflow() {
        let x = 800.0;
        assert_eq!(d(2.0).pdf(x), 0.0);
        assert_eq!(d(2.0).log_pdf(x), -800.0);
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(d(1.0).cdf(-1.0), 0.0);
        assert_eq!(d(1.0).cdf(-1.5), 0.0);
        assert_abs_diff_eq!(d(1.0).cdf(0.0), (-1.0f64).exp() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d(-1.0).cdf(0.0), 1.0 - (-1.0f64).exp() / 2.0, epsilon = 1e-15);
        assert_eq!(d(-1.0).cdf(1.0), 1.0);
    }

    // Literal transcription of the published piecewise cdf for μ < 0 and μ > 0.
    fn cdf_printed(mu: f64, x: f64) -> f64 {
        if mu < 0.0 {
            if x < mu {
                x.exp()
            } else if x < 0.0 {
                x.exp() / (2.0 * mu) * (x + mu - 1.0) + mu.exp() / (2.0 * mu)
            } else if x < -mu {
                1.0 + mu.exp() / (2.0 * mu) - (-x).exp() / (2.0 * mu) * (x + mu + 1.0)
            } else {
                1.0
            }
        } else if x < -mu {
            0.0
        } else if x < 0.0 {
            x.exp() / (2.0 * mu) * (x + mu - 1.0) + (-mu).exp() / (2.0 * mu)
        } else if x < mu {
            1.0 + (-mu).exp() / (2.0 * mu) - (-x).exp() / (2.0 * mu) * (x + mu + 1.0)
        } else {
            1.0 - (-x).exp()
        }
    }

    #[test]
    fn cdf_matches_printed_piecewise_form() {
        for mu in [-5.0, -2.0, -0.25, 0.25, 2.0, 5.0] {
            for i in 0..=400 {
                let x = -12.0 + 24.0 * i as f64 / 400.0;
                assert_abs_diff_eq!(d(mu).cdf(x), cdf_printed(mu, x), epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn cdf_is_stable_for_tiny_mu() {
        // For |μ| -> 0 the law tends to a one-sided exponential.
        let mu = 1e-9;
        let x = 0.3;
        assert_abs_diff_eq!(d(mu).cdf(x), 1.0 - (-x).exp(), epsilon = 1e-12);
        assert!(d(mu).cdf(0.0) >= 0.0 && d(mu).cdf(0.0) < 1e-9);
    }

    #[test]
    fn ramp_mass_branches_agree() {
        for s in [0.499_999_999, 0.5] {
            let series = {
                let mut term = s;
                let mut sum = 0.0;
                for k in 2..60 {
                    term *= s / k as f64;
                    sum += (k - 1) as f64 * term;
                }
                sum
            };
            assert_abs_diff_eq!(ramp_mass(s), series, epsilon = 1e-15);
        }
    }

    #[test]
    fn symmetric_limit_is_laplace() {
        let lap = Sslud::SymmetricLimit;
        for x in [-3.0, -0.1, 0.0, 0.7, 9.0] {
            assert_eq!(lap.pdf(x), lap.pdf(-x));
            assert_abs_diff_eq!(lap.pdf(x), 0.5 * (-f64::abs(x)).exp(), epsilon = 1e-16);
        }
        assert_eq!(lap.cdf(0.0), 0.5);
        assert_eq!(lap.quantile(0.5).unwrap(), 0.0);
    }

    #[test]
    fn quantile_examples() {
        let u = (-1.0f64).exp() / 2.0;
        assert_abs_diff_eq!(d(1.0).quantile(u).unwrap(), 0.0, epsilon = 1e-10);
        assert!(d(1.0).quantile(0.0).is_err());
        assert!(d(1.0).quantile(1.0).is_err());
        assert!(d(1.0).quantile(f64::NAN).is_err());
    }

    #[test]
    fn quantile_round_trip() {
        for mu in [-5.0, -1.0, 1.0, 5.0] {
            for u in [0.01, 0.25, 0.5, 0.75, 0.99] {
                let x = d(mu).quantile(u).unwrap();
                assert_abs_diff_eq!(d(mu).cdf(x), u, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn sample_respects_support() {
        let mut rng = RngStream::new(3);
        let s = d(2.0).sample(20_000, &mut rng).unwrap();
        assert!(s.min() >= -2.0);
        let s = d(-0.5).sample(20_000, &mut rng).unwrap();
        assert!(s.max() <= 0.5);
    }

    #[test]
    fn rejection_accepts_half_of_proposals() {
        let mut rng = RngStream::new(8);
        let dist = d(1.7);
        let proposals = 100_000;
        let accepted = (0..proposals)
            .filter(|_| {
                let x = rng.standard_laplace();
                rng.uniform() < dist.skew_factor(x)
            })
            .count();
        assert_abs_diff_eq!(accepted as f64 / proposals as f64, 0.5, epsilon = 0.02);
    }

    #[test]
    fn laplace_sample_moments() {
        let mut rng = RngStream::new(101);
        let s = laplace_sample(100_000, &mut rng).unwrap();
        let median = s.sorted()[50_000];
        assert_abs_diff_eq!(median, 0.0, epsilon = 0.02);
        let mean_abs = s.values().iter().map(|x| x.abs()).sum::<f64>() / 1e5;
        assert_abs_diff_eq!(mean_abs, 1.0, epsilon = 0.02);
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = laplace_sample(100, &mut RngStream::new(5)).unwrap();
        let b = laplace_sample(100, &mut RngStream::new(5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sample_validation() {
        assert_eq!(Sample::new(vec![]), Err(Error::EmptySample));
        assert!(matches!(
            Sample::new(vec![1.0, f64::NAN]),
            Err(Error::NonFiniteObservation { index: 1, .. })
        ));
        let s = Sample::new(vec![3.0, -1.0, 2.0]).unwrap();
        assert_eq!(s.sorted(), &[-1.0, 2.0, 3.0]);
        assert_eq!(s.values(), &[3.0, -1.0, 2.0]);
        assert_eq!((s.min(), s.max(), s.len()), (-1.0, 3.0, 3));
    }
}
