//! Log-Multi-Gaussian distribution: `Y = exp(X)` with `X ~ MG(mu, sigma, M)`.
//!
//! Density and CDF follow from the change of variables `x = ln y`; moments are
//! the Multi-Gaussian weighted sum of log-normal moments
//! `exp(k mu + k^2 sigma^2 / (2m))`.

use rand::Rng;
use serde::Serialize;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::series::{weighted_series, SeriesResult, ShapeParam, TruncationFlag, TruncationPolicy};
use crate::univariate::MultiGauss;

#[derive(Debug, Clone, Serialize)]
pub struct LogMultiGauss {
    base: MultiGauss,
}

impl LogMultiGauss {
    pub fn new(mu: f64, sigma: f64, m: f64) -> Result<Self> {
        Ok(Self {
            base: MultiGauss::new(mu, sigma, m)?,
        })
    }

    pub fn with_policy(
        mu: f64,
        sigma: f64,
        shape: ShapeParam,
        policy: TruncationPolicy,
    ) -> Result<Self> {
        Ok(Self {
            base: MultiGauss::with_policy(mu, sigma, shape, policy)?,
        })
    }

    pub fn from_base(base: MultiGauss) -> Self {
        Self { base }
    }

    /// The underlying `X = ln Y`.
    pub fn base(&self) -> &MultiGauss {
        &self.base
    }

    pub fn pdf(&self, y: f64) -> f64 {
        if y <= 0.0 || y.is_nan() {
            return 0.0;
        }
        if y.is_infinite() {
            return 0.0;
        }
        self.base.pdf(y.ln()) / y
    }

    /// Series form of the density, for verification.
    pub fn pdf_series(&self, y: f64) -> SeriesResult {
        if y <= 0.0 {
            return SeriesResult {
                value: 0.0,
                terms_used: 0,
                condition_number: 1.0,
                truncation_flag: if self.base.shape().is_integer() {
                    TruncationFlag::Exact
                } else {
                    TruncationFlag::ToleranceMet
                },
                error_estimate: 0.0,
                converged: true,
            };
        }
        let r = self.base.pdf_series(y.ln());
        SeriesResult {
            value: r.value / y,
            error_estimate: r.error_estimate / y,
            ..r
        }
    }

    pub fn cdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        self.base.cdf(y.ln())
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        Ok(self.base.quantile(u)?.exp())
    }

    pub fn median(&self) -> f64 {
        self.base.mu().exp()
    }

    /// Raw moment `E[Y^k]`, `k >= 1`.
    pub fn moment(&self, k: u32) -> Result<f64> {
        if k == 0 {
            return Ok(1.0);
        }
        let kf = k as f64;
        let ks = kf * self.base.sigma();
        let half = Dd::mul_f64s(ks, ks) * 0.5;
        let r = weighted_series(self.base.shape(), self.base.policy(), Some(0.5), |m| {
            let mf = Dd::from_f64(m as f64);
            mf.powf(-0.5) * (half / mf).exp()
        })
        .require_converged("LMG moment")?;
        let v = (kf * self.base.mu()).exp() * r.value / self.base.c0();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow(format!("LMG moment of order {k}")))
        }
    }

    pub fn mean(&self) -> Result<f64> {
        self.moment(1)
    }

    /// Always a domain error: `E[exp(tY)]` diverges for every `t > 0`, so the
    /// LMG has no moment generating function.
    pub fn mgf(&self, t: f64) -> Result<f64> {
        Err(Error::Domain(format!(
            "the LMG moment generating function does not exist (requested t = {t})"
        )))
    }

    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.base.sample_one(rng).exp()
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| self.sample_one(rng)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn lmg(mu: f64, sigma: f64, m: f64) -> LogMultiGauss {
        LogMultiGauss::new(mu, sigma, m).unwrap()
    }

    #[test]
    fn pdf_examples() {
        assert_relative_eq!(lmg(0.0, 1.0, 1.0).pdf(1.0), 0.398_942_280_401_432_7, max_relative = 1e-15);
        assert_eq!(lmg(0.0, 1.0, 10.0).pdf(-1.0), 0.0);
        assert_eq!(lmg(0.0, 1.0, 10.0).pdf(0.0), 0.0);
        let d = lmg(0.0, 1.0, 10.0);
        let y = 0.5;
        assert_relative_eq!(d.pdf(y), d.base().pdf(y.ln()) / y, max_relative = 1e-15);
        let s = d.pdf_series(y);
        assert!((s.value - d.pdf(y)).abs() <= 1e-12);
    }

    #[test]
    fn cdf_examples() {
        for &m in &[1.0, 2.0, 10.0, 0.5] {
            let d = lmg(0.4, 1.3, m);
            assert_eq!(d.cdf(0.4f64.exp()), 0.5);
            assert_eq!(d.cdf(0.0), 0.0);
            assert_eq!(d.cdf(-3.0), 0.0);
        }
        assert!((lmg(0.0, 1.0, 1.0).cdf(1.959_963_984_540_054f64.exp()) - 0.975).abs() < 1e-15);
    }

    #[test]
    fn moment_examples() {
        let (mu, s) = (0.3, 0.8);
        assert_relative_eq!(lmg(mu, s, 1.0).moment(1).unwrap(), (mu + s * s / 2.0).exp(), max_relative = 1e-15);
        assert_relative_eq!(lmg(0.0, 1.0, 1.0).moment(2).unwrap(), 2f64.exp(), max_relative = 1e-15);
        let d = lmg(0.0, 1.0, 2.0);
        let expected = (2.0 * 0.5f64.exp() - 0.25f64.exp() / 2f64.sqrt()) / d.base().c0();
        assert_relative_eq!(d.moment(1).unwrap(), expected, max_relative = 1e-15);
    }

    #[test]
    fn moments_are_log_convex() {
        for &m in &[1.0, 2.0, 10.0, 0.5, 2.5] {
            let d = lmg(0.1, 0.7, m);
            let mk: Vec<f64> = (0..=5).map(|k| d.moment(k).unwrap()).collect();
            for k in 1..5 {
                assert!(mk[k] * mk[k] <= mk[k - 1] * mk[k + 1] * (1.0 + 1e-14), "M={m} k={k}");
            }
        }
    }

    #[test]
    fn mgf_is_a_domain_error() {
        assert!(matches!(lmg(0.0, 1.0, 2.0).mgf(0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn moment_overflow_is_reported() {
        assert!(matches!(lmg(0.0, 10.0, 2.0).moment(8), Err(Error::Overflow(_))));
    }

    #[test]
    fn samples_are_positive() {
        let d = lmg(-1.0, 2.0, 0.5);
        let xs = d.sample(1000, &mut crate::rng::seeded(3));
        assert!(xs.iter().all(|&y| y > 0.0));
    }
}
