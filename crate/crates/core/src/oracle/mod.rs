//! Independent verification: quadrature, goodness-of-fit statistics and the
//! suite of library-versus-oracle checks.

pub mod quadrature;
pub mod report;
pub mod stats;
pub mod suite;

pub use quadrature::{integrate, integrate_with_breaks, Integral, QuadratureSpec};
pub use report::OracleReport;
pub use stats::{chi_square_gof, finite_diff, ks_statistic};
pub use suite::{criterion, run, Suite, CRITERIA};
