//! The Multi-Gaussian family of continuous distributions.
//!
//! A Multi-Gaussian variable `X ~ MG(mu, sigma, M)` has density
//!
//! ```text
//! p(x) = [1 - (1 - exp(-(x - mu)^2 / (2 sigma^2)))^M] / (C0(M) sqrt(2 pi) sigma)
//! ```
//!
//! which is Gaussian at `M = 1`, flat-topped for `M > 1` and cusped at the
//! mode for `0 < M < 1`. Expanding the bracket binomially writes the density
//! as an alternating sum of Gaussians with widths `sigma / sqrt(m)`; that
//! series drives the CDF, generating functions and moments.
//!
//! ```
//! use multigauss::MultiGauss;
//!
//! let d = MultiGauss::new(0.0, 1.0, 10.0).unwrap();
//! assert_eq!(d.cdf(0.0), 0.5);
//! let x = d.quantile(0.9).unwrap();
//! assert!((d.cdf(x) - 0.9).abs() < 1e-12);
//! ```

pub mod dd;
pub mod error;
pub mod figures;
pub mod log_mg;
pub mod multivariate;
pub mod oracle;
pub mod quad;
pub mod rng;
pub mod series;
pub mod special;
pub mod sum;
pub mod univariate;

pub use error::{Error, Result};
pub use log_mg::LogMultiGauss;
pub use multivariate::{bivariate_pdf, BivariateMultiGauss, BivariateParams, MvMultiGauss};
pub use series::{
    binom_coeff, series_s, xi_coeff, SeriesResult, ShapeParam, TruncationFlag, TruncationPolicy,
};
pub use univariate::MultiGauss;
