//! Data series for figures 1 to 8.
//!
//! One-dimensional panels use 801 points over `mu +- 5 sigma`, surfaces a
//! 201 x 201 grid over `mu +- 4 sigma`. Fractional shapes use the set
//! `{1, 1/2, 1/4, 1/40}` with the series truncated at 2000 terms.
//!
//! The `(mu, sigma)` sets of figures 2 and 4 are this crate's own choice.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::log_mg::LogMultiGauss;
use crate::multivariate::{BivariateMultiGauss, BivariateParams};
use crate::series::{ShapeParam, TruncationPolicy};
use crate::univariate::MultiGauss;

pub const CURVE_POINTS: usize = 801;
pub const CURVE_HALF_WIDTH: f64 = 5.0;
pub const SURFACE_POINTS: usize = 201;
pub const SURFACE_HALF_WIDTH: f64 = 4.0;
pub const FRACTIONAL_MAX_TERMS: usize = 2000;

/// Shapes used for the fractional-`M` figures, with their labels.
pub const FRACTIONAL_SHAPES: [(f64, &str); 4] =
    [(1.0, "1"), (0.5, "1/2"), (0.25, "1/4"), (0.025, "1/40")];

/// Shapes of the integer-`M` figures.
pub const INTEGER_SHAPES: [f64; 4] = [1.0, 2.0, 10.0, 40.0];

#[derive(Debug, Clone, Serialize)]
pub struct Curve {
    pub x: Vec<f64>,
    pub value: Vec<f64>,
}

/// Values on the grid `x1 x x2`, with `x2` varying fastest.
#[derive(Debug, Clone, Serialize)]
pub struct Surface {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub value: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub enum SeriesData {
    Curve(Curve),
    Surface(Surface),
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureSeries {
    /// Panel letter, `A`, `B`, ...
    pub panel: &'static str,
    /// Human-readable series label such as `M=1/40`.
    pub label: String,
    pub data: SeriesData,
}

impl FigureSeries {
    /// File-name fragment derived from the label: `M=1/40` becomes `M1-40`.
    pub fn slug(&self) -> String {
        self.label
            .chars()
            .filter_map(|c| match c {
                '=' | ' ' => None,
                '/' => Some('-'),
                ',' => Some('_'),
                c => Some(c),
            })
            .collect()
    }
}

/// Evenly spaced grid of `n` points with the centre point exactly at `c`
/// for odd `n`.
pub fn grid(c: f64, half_width: f64, n: usize) -> Vec<f64> {
    let mid = (n / 2) as f64;
    (0..n)
        .map(|i| c + half_width * (i as f64 - mid) / mid)
        .collect()
}

fn shape_label(m: f64) -> String {
    FRACTIONAL_SHAPES
        .iter()
        .find(|(v, _)| *v == m)
        .map(|(_, l)| l.to_string())
        .unwrap_or_else(|| format!("{m}"))
}

fn fractional_policy() -> TruncationPolicy {
    TruncationPolicy::with_max_terms(FRACTIONAL_MAX_TERMS).expect("valid policy")
}

fn mg(mu: f64, sigma: f64, m: f64, policy: TruncationPolicy) -> Result<MultiGauss> {
    MultiGauss::with_policy(mu, sigma, ShapeParam::new(m)?, policy)
}

fn curve(x: Vec<f64>, f: impl Fn(f64) -> f64) -> SeriesData {
    let value = x.iter().map(|&v| f(v)).collect();
    SeriesData::Curve(Curve { x, value })
}

fn mg_pdf_cdf(shapes: &[f64], policy: TruncationPolicy) -> Result<Vec<FigureSeries>> {
    let mut out = Vec::new();
    for &m in shapes {
        let d = mg(0.0, 1.0, m, policy)?;
        let label = format!("M={}", shape_label(m));
        let x = grid(0.0, CURVE_HALF_WIDTH, CURVE_POINTS);
        out.push(FigureSeries {
            panel: "A",
            label: label.clone(),
            data: curve(x.clone(), |v| d.pdf(v)),
        });
        out.push(FigureSeries {
            panel: "B",
            label,
            data: curve(x, |v| d.cdf(v)),
        });
    }
    Ok(out)
}

/// LMG density on `y in [0, e^(mu + 2 sigma)]`.
fn lmg_linear_grid(mu: f64, sigma: f64) -> Vec<f64> {
    let top = (mu + 2.0 * sigma).exp();
    (0..CURVE_POINTS)
        .map(|i| top * i as f64 / (CURVE_POINTS - 1) as f64)
        .collect()
}

/// Log-spaced `y = e^x` with `x` on the usual `mu +- 5 sigma` grid.
fn lmg_log_grid(mu: f64, sigma: f64) -> Vec<f64> {
    grid(mu, CURVE_HALF_WIDTH * sigma, CURVE_POINTS)
        .into_iter()
        .map(f64::exp)
        .collect()
}

fn surface(d: &BivariateMultiGauss) -> SeriesData {
    let p = d.params();
    let x1 = grid(p.mu1, SURFACE_HALF_WIDTH * p.sigma1, SURFACE_POINTS);
    let x2 = grid(p.mu2, SURFACE_HALF_WIDTH * p.sigma2, SURFACE_POINTS);
    let mut value = Vec::with_capacity(x1.len() * x2.len());
    for &a in &x1 {
        for &b in &x2 {
            value.push(d.pdf(a, b));
        }
    }
    SeriesData::Surface(Surface { x1, x2, value })
}

fn bivariate_panels(shapes: [(f64, &str); 2], policy: TruncationPolicy) -> Result<Vec<FigureSeries>> {
    let panels = ["A", "B", "C", "D"];
    let mut out = Vec::new();
    let mut k = 0;
    for (m, ml) in shapes {
        for rho in [0.0, 0.7] {
            let d = BivariateMultiGauss::with_policy(BivariateParams::standard(rho)?, ShapeParam::new(m)?, policy)?;
            out.push(FigureSeries {
                panel: panels[k],
                label: format!("M={ml},rho={rho}"),
                data: surface(&d),
            });
            k += 1;
        }
    }
    Ok(out)
}

/// All series of figure `id` (1 to 8).
pub fn figure(id: u32) -> Result<Vec<FigureSeries>> {
    let default = TruncationPolicy::default();
    match id {
        1 => mg_pdf_cdf(&INTEGER_SHAPES, default),
        2 => {
            let mut out = Vec::new();
            for (mu, sigma) in [(0.0, 1.0), (0.0, 2.0), (2.0, 0.5), (-2.0, 1.0)] {
                let d = mg(mu, sigma, 10.0, default)?;
                out.push(FigureSeries {
                    panel: "A",
                    label: format!("mu={mu},sigma={sigma}"),
                    data: curve(grid(mu, CURVE_HALF_WIDTH * sigma, CURVE_POINTS), |v| d.pdf(v)),
                });
            }
            Ok(out)
        }
        3 => {
            let mut out = Vec::new();
            for &m in &INTEGER_SHAPES {
                let d = LogMultiGauss::new(0.0, 1.0, m)?;
                let label = format!("M={m}");
                let lin = lmg_linear_grid(0.0, 1.0);
                let log = lmg_log_grid(0.0, 1.0);
                out.push(FigureSeries { panel: "A", label: label.clone(), data: curve(lin.clone(), |y| d.pdf(y)) });
                out.push(FigureSeries { panel: "B", label: label.clone(), data: curve(lin, |y| d.cdf(y)) });
                out.push(FigureSeries { panel: "C", label: label.clone(), data: curve(log.clone(), |y| d.pdf(y)) });
                out.push(FigureSeries { panel: "D", label, data: curve(log, |y| d.cdf(y)) });
            }
            Ok(out)
        }
        4 => {
            let mut out = Vec::new();
            for (mu, sigma) in [(0.0, 1.0), (0.0, 0.5), (0.5, 0.5), (-0.5, 0.25)] {
                let d = LogMultiGauss::new(mu, sigma, 10.0)?;
                out.push(FigureSeries {
                    panel: "A",
                    label: format!("mu={mu},sigma={sigma}"),
                    data: curve(lmg_linear_grid(mu, sigma), |y| d.pdf(y)),
                });
            }
            Ok(out)
        }
        5 => bivariate_panels([(1.0, "1"), (40.0, "40")], default),
        6 => {
            let shapes: Vec<f64> = FRACTIONAL_SHAPES.iter().map(|s| s.0).collect();
            mg_pdf_cdf(&shapes, fractional_policy())
        }
        7 => {
            let policy = fractional_policy();
            let mut sets: Vec<(f64, f64, f64)> =
                FRACTIONAL_SHAPES.iter().map(|s| (0.0, 1.0, s.0)).collect();
            sets.extend([(0.5, 0.5, 0.5), (-0.5, 0.75, 0.5)]);
            let mut out = Vec::new();
            for (mu, sigma, m) in sets {
                let d = LogMultiGauss::with_policy(mu, sigma, ShapeParam::new(m)?, policy)?;
                out.push(FigureSeries {
                    panel: "A",
                    label: format!("M={},mu={mu},sigma={sigma}", shape_label(m)),
                    data: curve(lmg_linear_grid(mu, sigma), |y| d.pdf(y)),
                });
            }
            Ok(out)
        }
        8 => bivariate_panels([(1.0, "1"), (0.025, "1/40")], fractional_policy()),
        _ => Err(Error::Domain(format!("unknown figure {id}; expected 1 to 8"))),
    }
}
