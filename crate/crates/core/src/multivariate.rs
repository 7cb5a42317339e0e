//! N-dimensional Multi-Gaussian density and its bivariate specialization.
//!
//! With `Q(x) = (x - mu)^T Sigma^-1 (x - mu)` the density is
//!
//! ```text
//! p(x) = [1 - (1 - exp(-Q/2))^M] / (S(N/2; M) (2 pi)^(N/2) det(Sigma)^(1/2))
//! ```
//!
//! Integrating the m-th Gaussian term of the binomial expansion (covariance
//! `Sigma / m`) over R^N gives `m^(-N/2)`, so the normalizer is `S(N/2; M)`,
//! not the univariate `C0(M) = S(1/2; M)`; the two agree only for `N = 1`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::series::{series_s, weighted_series, SeriesResult, ShapeParam, TruncationPolicy};
use crate::special::{flat_top_kernel, flat_top_kernel_exp};
use crate::univariate::checked_series;

const SYMMETRY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct MvMultiGauss {
    mean: Vec<f64>,
    /// Row-major `N x N`.
    cov: Vec<f64>,
    /// Lower Cholesky factor, row-major.
    chol: Vec<f64>,
    shape: ShapeParam,
    policy: TruncationPolicy,
    norm_const: f64,
    scale: f64,
}

/// Lower Cholesky factor of a row-major symmetric matrix. Fails with the
/// 1-based index of the first leading minor that is not positive.
pub fn cholesky(a: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite { minor: j + 1 });
        }
        let djj = d.sqrt();
        l[j * n + j] = djj;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / djj;
        }
    }
    Ok(l)
}

impl MvMultiGauss {
    /// `cov` is the row-major `N x N` covariance of the `m = 1` component.
    pub fn new(mean: Vec<f64>, cov: Vec<f64>, m: f64) -> Result<Self> {
        Self::with_policy(mean, cov, ShapeParam::new(m)?, TruncationPolicy::default())
    }

    pub fn with_policy(
        mean: Vec<f64>,
        cov: Vec<f64>,
        shape: ShapeParam,
        policy: TruncationPolicy,
    ) -> Result<Self> {
        let n = mean.len();
        if n == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        if cov.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: cov.len(),
            });
        }
        if let Some(&bad) = mean.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidLocation(bad));
        }
        for i in 0..n {
            for j in 0..i {
                let (a, b) = (cov[i * n + j], cov[j * n + i]);
                if (a - b).abs() > SYMMETRY_RTOL * a.abs().max(b.abs()) {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        policy.validate()?;
        let chol = cholesky(&cov, n)?;
        let norm_const =
            checked_series(series_s(n as f64 / 2.0, shape, &policy), "S(N/2; M)")?.value;
        let sqrt_det: f64 = (0..n).map(|i| chol[i * n + i]).product();
        let scale = 1.0 / (norm_const * (2.0 * std::f64::consts::PI).powf(n as f64 / 2.0) * sqrt_det);
        Ok(Self {
            mean,
            cov,
            chol,
            shape,
            policy,
            norm_const,
            scale,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn cov(&self) -> &[f64] {
        &self.cov
    }

    pub fn shape(&self) -> ShapeParam {
        self.shape
    }

    /// `S(N/2; M)`.
    pub fn norm_const(&self) -> f64 {
        self.norm_const
    }

    /// Total mass the density would have if normalized by the univariate
    /// constant `C0(M)` instead of `S(N/2; M)`.
    pub fn mass_with_univariate_constant(&self) -> f64 {
        let c0 = series_s(0.5, self.shape, &self.policy).value;
        self.norm_const / c0
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Squared Mahalanobis distance, by forward substitution against the
    /// Cholesky factor.
    pub fn mahalanobis_sq(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        let n = self.dim();
        let mut y = vec![0.0; n];
        let mut q = 0.0;
        for i in 0..n {
            let mut s = x[i] - self.mean[i];
            for k in 0..i {
                s -= self.chol[i * n + k] * y[k];
            }
            y[i] = s / self.chol[i * n + i];
            q += y[i] * y[i];
        }
        Ok(q)
    }

    /// Density as a function of the squared Mahalanobis distance.
    pub fn pdf_from_q(&self, q: f64) -> f64 {
        flat_top_kernel_exp(0.5 * q, self.shape.value()) * self.scale
    }

    pub fn pdf(&self, x: &[f64]) -> Result<f64> {
        Ok(self.pdf_from_q(self.mahalanobis_sq(x)?))
    }

    /// Binomial series form `sum_m w_m exp(-m Q / 2)`, for verification.
    pub fn pdf_series(&self, x: &[f64]) -> Result<SeriesResult> {
        let q = self.mahalanobis_sq(x)?;
        let half = Dd::from_f64(q) * 0.5;
        let r = weighted_series(self.shape, &self.policy, None, |m| (-(half * m as f64)).exp());
        Ok(SeriesResult {
            value: r.value * self.scale,
            error_estimate: r.error_estimate * self.scale,
            ..r
        })
    }

    /// Envelope constant `c` with `1 - (1 - g)^M <= c g`.
    fn envelope(&self) -> f64 {
        self.shape.value().max(1.0)
    }

    /// Expected fraction of Gaussian proposals accepted by [`Self::sample`].
    pub fn expected_acceptance(&self) -> f64 {
        self.norm_const / self.envelope()
    }

    /// Rejection sampling from the `m = 1` Gaussian component: a proposal at
    /// distance `Q` is kept with probability `[1 - (1 - g)^M] / (c g)`,
    /// `g = exp(-Q/2)`.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<Vec<f64>> {
        self.sample_with_stats(n, rng).0
    }

    /// As [`Self::sample`], also returning the number of proposals drawn.
    pub fn sample_with_stats<R: Rng + ?Sized>(
        &self,
        n: usize,
        rng: &mut R,
    ) -> (Vec<Vec<f64>>, usize) {
        let dim = self.dim();
        let m = self.shape.value();
        let c = self.envelope();
        let gaussian = self.shape.as_integer() == Some(1);
        let mut out = Vec::with_capacity(n);
        let mut proposals = 0usize;
        let mut z = vec![0.0; dim];
        while out.len() < n {
            proposals += 1;
            let mut q = 0.0f64;
            for zi in z.iter_mut() {
                *zi = rng.sample(StandardNormal);
                q += *zi * *zi;
            }
            if !gaussian {
                let g = (-0.5 * q).exp();
                let accept = if g > 0.0 {
                    flat_top_kernel(g, m) / (c * g)
                } else {
                    m / c
                };
                let u: f64 = rng.random();
                if u >= accept {
                    continue;
                }
            }
            let x = (0..dim)
                .map(|i| {
                    self.mean[i]
                        + (0..=i)
                            .map(|k| self.chol[i * dim + k] * z[k])
                            .sum::<f64>()
                })
                .collect();
            out.push(x);
        }
        (out, proposals)
    }
}

/// Parameters of the bivariate case: means, standard deviations and the
/// correlation of the `m = 1` component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BivariateParams {
    pub mu1: f64,
    pub mu2: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub rho: f64,
}

impl BivariateParams {
    pub fn new(mu1: f64, mu2: f64, sigma1: f64, sigma2: f64, rho: f64) -> Result<Self> {
        for mu in [mu1, mu2] {
            if !mu.is_finite() {
                return Err(Error::InvalidLocation(mu));
            }
        }
        for s in [sigma1, sigma2] {
            if !s.is_finite() || s <= 0.0 {
                return Err(Error::InvalidScale(s));
            }
        }
        if !(rho.abs() < 1.0) {
            return Err(Error::InvalidCorrelation(rho));
        }
        Ok(Self {
            mu1,
            mu2,
            sigma1,
            sigma2,
            rho,
        })
    }

    pub fn standard(rho: f64) -> Result<Self> {
        Self::new(0.0, 0.0, 1.0, 1.0, rho)
    }

    /// Row-major covariance `[[s1^2, rho s1 s2], [rho s1 s2, s2^2]]`.
    pub fn covariance(&self) -> Vec<f64> {
        let c = self.rho * self.sigma1 * self.sigma2;
        vec![self.sigma1 * self.sigma1, c, c, self.sigma2 * self.sigma2]
    }
}

/// Bivariate density in the explicit `(sigma1, sigma2, rho)` form.
#[derive(Debug, Clone, Serialize)]
pub struct BivariateMultiGauss {
    params: BivariateParams,
    shape: ShapeParam,
    policy: TruncationPolicy,
    norm_const: f64,
    scale: f64,
}

impl BivariateMultiGauss {
    pub fn new(params: BivariateParams, shape: ShapeParam) -> Result<Self> {
        Self::with_policy(params, shape, TruncationPolicy::default())
    }

    pub fn with_policy(
        params: BivariateParams,
        shape: ShapeParam,
        policy: TruncationPolicy,
    ) -> Result<Self> {
        policy.validate()?;
        let norm_const = checked_series(series_s(1.0, shape, &policy), "S(1; M)")?.value;
        let p = &params;
        let scale = 1.0
            / (norm_const
                * 2.0
                * std::f64::consts::PI
                * p.sigma1
                * p.sigma2
                * (1.0 - p.rho * p.rho).sqrt());
        Ok(Self {
            params,
            shape,
            policy,
            norm_const,
            scale,
        })
    }

    pub fn params(&self) -> &BivariateParams {
        &self.params
    }

    pub fn shape(&self) -> ShapeParam {
        self.shape
    }

    /// `S(1; M)`, the harmonic number `H_M` for integer `M`.
    pub fn norm_const(&self) -> f64 {
        self.norm_const
    }

    /// The quadratic form `z` of the bivariate density.
    pub fn z(&self, x1: f64, x2: f64) -> f64 {
        let p = &self.params;
        let u = (x1 - p.mu1) / p.sigma1;
        let v = (x2 - p.mu2) / p.sigma2;
        u * u - 2.0 * p.rho * u * v + v * v
    }

    pub fn pdf(&self, x1: f64, x2: f64) -> f64 {
        let q = self.z(x1, x2) / (1.0 - self.params.rho * self.params.rho);
        flat_top_kernel_exp(0.5 * q, self.shape.value()) * self.scale
    }

    pub fn to_mv(&self) -> Result<MvMultiGauss> {
        MvMultiGauss::with_policy(
            vec![self.params.mu1, self.params.mu2],
            self.params.covariance(),
            self.shape,
            self.policy,
        )
    }
}

/// One-shot bivariate density evaluation with the default truncation policy.
pub fn bivariate_pdf(p: &BivariateParams, shape: ShapeParam, x1: f64, x2: f64) -> Result<f64> {
    Ok(BivariateMultiGauss::new(*p, shape)?.pdf(x1, x2))
}
