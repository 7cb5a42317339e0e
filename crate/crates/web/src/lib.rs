//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a flat `Float64Array`; the layouts are documented on
//! each function. Errors surface in JavaScript as thrown `Error`s.

use multigauss::figures::grid;
use multigauss::rng::seeded;
use multigauss::{BivariateMultiGauss, BivariateParams, LogMultiGauss, MultiGauss, ShapeParam};
use wasm_bindgen::prelude::*;

/// Largest sample the histogram export accepts.
pub const MAX_SAMPLE: usize = 200_000;

fn js(r: multigauss::Result<Vec<f64>>) -> Result<Vec<f64>, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

fn check_points(points: usize) -> multigauss::Result<()> {
    if points < 2 {
        return Err(multigauss::Error::Domain(format!("need at least 2 points, got {points}")));
    }
    Ok(())
}

pub fn mg_curve_values(mu: f64, sigma: f64, m: f64, points: usize) -> multigauss::Result<Vec<f64>> {
    check_points(points)?;
    let d = MultiGauss::new(mu, sigma, m)?;
    let x = grid(mu, 5.0 * sigma, points);
    let mut out = x.clone();
    out.extend(x.iter().map(|&v| d.pdf(v)));
    out.extend(x.iter().map(|&v| d.cdf(v)));
    Ok(out)
}

/// `[x; points] ++ [pdf; points] ++ [cdf; points]` over `mu +- 5 sigma`.
#[wasm_bindgen]
pub fn mg_curve(mu: f64, sigma: f64, m: f64, points: usize) -> Result<Vec<f64>, JsError> {
    js(mg_curve_values(mu, sigma, m, points))
}

pub fn lmg_curve_values(mu: f64, sigma: f64, m: f64, points: usize) -> multigauss::Result<Vec<f64>> {
    check_points(points)?;
    let d = LogMultiGauss::new(mu, sigma, m)?;
    let top = (mu + 2.0 * sigma).exp();
    let y: Vec<f64> = (0..points).map(|i| top * i as f64 / (points - 1) as f64).collect();
    let mut out = y.clone();
    out.extend(y.iter().map(|&v| d.pdf(v)));
    out.extend(y.iter().map(|&v| d.cdf(v)));
    Ok(out)
}

/// Log-Multi-Gaussian `[y] ++ [pdf] ++ [cdf]` over `[0, e^(mu + 2 sigma)]`.
#[wasm_bindgen]
pub fn lmg_curve(mu: f64, sigma: f64, m: f64, points: usize) -> Result<Vec<f64>, JsError> {
    js(lmg_curve_values(mu, sigma, m, points))
}

pub fn bivariate_values(m: f64, rho: f64, points: usize) -> multigauss::Result<Vec<f64>> {
    check_points(points)?;
    let d = BivariateMultiGauss::new(BivariateParams::standard(rho)?, ShapeParam::new(m)?)?;
    let axis = grid(0.0, 4.0, points);
    let mut out = Vec::with_capacity(points * points);
    for &x2 in axis.iter().rev() {
        for &x1 in &axis {
            out.push(d.pdf(x1, x2));
        }
    }
    Ok(out)
}

/// Standardized bivariate density on a `points x points` grid over
/// `[-4, 4]^2`, row-major from the top row (`x2 = 4`) down, so it maps
/// directly onto canvas pixels.
#[wasm_bindgen]
pub fn bivariate_grid(m: f64, rho: f64, points: usize) -> Result<Vec<f64>, JsError> {
    js(bivariate_values(m, rho, points))
}

pub fn histogram_values(
    mu: f64,
    sigma: f64,
    m: f64,
    n: usize,
    seed: u64,
    bins: usize,
) -> multigauss::Result<Vec<f64>> {
    if n == 0 || n > MAX_SAMPLE {
        return Err(multigauss::Error::Domain(format!("sample size must be in 1..={MAX_SAMPLE}, got {n}")));
    }
    if bins == 0 {
        return Err(multigauss::Error::Domain("need at least one bin".into()));
    }
    let d = MultiGauss::new(mu, sigma, m)?;
    let (lo, hi) = (mu - 5.0 * sigma, mu + 5.0 * sigma);
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for x in d.sample(n, &mut seeded(seed)) {
        if x >= lo && x < hi {
            counts[(((x - lo) / width) as usize).min(bins - 1)] += 1;
        }
    }
    Ok(counts.into_iter().map(|c| c as f64 / (n as f64 * width)).collect())
}

/// Density-scaled histogram of `n` seeded draws over `mu +- 5 sigma`.
#[wasm_bindgen]
pub fn sample_histogram(
    mu: f64,
    sigma: f64,
    m: f64,
    n: usize,
    seed: u64,
    bins: usize,
) -> Result<Vec<f64>, JsError> {
    js(histogram_values(mu, sigma, m, n, seed, bins))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_layout() {
        let v = mg_curve_values(0.0, 1.0, 1.0, 11).unwrap();
        assert_eq!(v.len(), 33);
        assert_eq!(v[5], 0.0);
        assert!((v[11 + 5] - 0.398_942_280_401_432_7).abs() < 1e-15);
        assert_eq!(v[22 + 5], 0.5);
        assert!(mg_curve_values(0.0, 1.0, -2.0, 11).is_err());
        assert!(mg_curve_values(0.0, 1.0, 2.0, 1).is_err());
    }

    #[test]
    fn log_curve_starts_at_zero() {
        let v = lmg_curve_values(0.0, 1.0, 10.0, 5).unwrap();
        assert_eq!(&v[0..1], &[0.0]);
        assert_eq!(v[5], 0.0);
        assert_eq!(v[10], 0.0);
    }

    #[test]
    fn surface_is_symmetric_about_the_origin() {
        let n = 21;
        let v = bivariate_values(40.0, 0.7, n).unwrap();
        assert_eq!(v.len(), n * n);
        for i in 0..v.len() {
            assert_eq!(v[i], v[v.len() - 1 - i]);
        }
        assert!(bivariate_values(1.0, 1.0, n).is_err());
    }

    #[test]
    fn histogram_integrates_to_about_one() {
        let h = histogram_values(0.0, 1.0, 10.0, 20_000, 5, 50).unwrap();
        let mass: f64 = h.iter().sum::<f64>() * 10.0 / 50.0;
        assert!((mass - 1.0).abs() < 1e-3);
        assert_eq!(h, histogram_values(0.0, 1.0, 10.0, 20_000, 5, 50).unwrap());
        assert!(histogram_values(0.0, 1.0, 10.0, 0, 5, 50).is_err());
    }
}
