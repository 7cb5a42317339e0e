//! Goodness-of-fit statistics and numerical differentiation.

use statrs::stats_tests::chisquare::chisquare;

use crate::error::{Error, Result};

/// Kolmogorov–Smirnov distance `sup |F_n(x) - F(x)|` of an ascending sample.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptySample);
    }
    if sorted.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::Domain("sample must be sorted ascending".into()));
    }
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// Asymptotic KS critical value at the 1% level.
pub fn ks_critical_01(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

/// Central difference `(f(x + h) - f(x - h)) / (2h)`.
pub fn finite_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub p_value: f64,
    pub bins: usize,
}

/// Pearson goodness of fit of `observed` counts to cell probabilities
/// `probs` (summing to one). Cells expecting fewer than five counts are
/// pooled into one before testing.
pub fn chi_square_gof(observed: &[usize], probs: &[f64]) -> Result<ChiSquare> {
    if observed.len() != probs.len() {
        return Err(Error::DimensionMismatch {
            expected: probs.len(),
            got: observed.len(),
        });
    }
    let n: usize = observed.iter().sum();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let nf = n as f64;
    let (mut obs, mut exp) = (Vec::new(), Vec::new());
    let (mut pooled_o, mut pooled_e) = (0usize, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        if p * nf >= 5.0 {
            obs.push(o);
            exp.push(p * nf);
        } else {
            pooled_o += o;
            pooled_e += p * nf;
        }
    }
    if pooled_e > 0.0 || pooled_o > 0 {
        obs.push(pooled_o);
        exp.push(pooled_e);
    }
    // rescale so expected and observed totals agree to rounding
    let total: f64 = exp.iter().sum();
    for e in exp.iter_mut() {
        *e *= nf / total;
    }
    let (statistic, p_value) =
        chisquare(&obs, Some(&exp), None).map_err(|e| Error::Domain(format!("chi-square: {e:?}")))?;
    Ok(ChiSquare {
        statistic,
        p_value,
        bins: obs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::quadrature::gaussian_pdf;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    use statrs::distribution::{ContinuousCDF, Normal};
    use statrs::stats_tests::ks_test::{ks_onesample, KSOneSampleAlternativeMethod};
    use statrs::stats_tests::NaNPolicy;

    fn normal_sample(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut xs: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        xs.sort_by(f64::total_cmp);
        xs
    }

    #[test]
    fn ks_accepts_matching_and_rejects_shifted_model() {
        let xs = normal_sample(100_000, 1);
        let n01 = Normal::new(0.0, 1.0).unwrap();
        let d = ks_statistic(&xs, |x| n01.cdf(x)).unwrap();
        assert!(d < ks_critical_01(xs.len()), "{d}");
        let n31 = Normal::new(3.0, 1.0).unwrap();
        assert!(ks_statistic(&xs, |x| n31.cdf(x)).unwrap() > 0.8);
    }

    #[test]
    fn ks_matches_reference_implementation() {
        let xs = normal_sample(2000, 9);
        let n01 = Normal::new(0.1, 1.0).unwrap();
        let ours = ks_statistic(&xs, |x| n01.cdf(x)).unwrap();
        let (theirs, _) = ks_onesample(
            xs.clone(),
            &n01,
            KSOneSampleAlternativeMethod::TwoSidedAsymptotic,
            NaNPolicy::Error,
        )
        .unwrap();
        assert!((ours - theirs).abs() < 1e-15);
    }

    #[test]
    fn ks_of_a_point_mass_at_the_median() {
        let xs = vec![0.0; 1000];
        let n01 = Normal::new(0.0, 1.0).unwrap();
        let d = ks_statistic(&xs, |x| n01.cdf(x)).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ks_input_errors() {
        assert!(matches!(ks_statistic(&[], |x| x), Err(Error::EmptySample)));
        assert!(ks_statistic(&[1.0, 0.0], |x| x).is_err());
    }

    #[test]
    fn central_differences() {
        assert!((finite_diff(|x| x * x, 1.0, 1e-6) - 2.0).abs() < 1e-9);
        assert_eq!(finite_diff(|_| 3.0, 0.4, 1e-3), 0.0);
        let n01 = Normal::new(0.0, 1.0).unwrap();
        let d = finite_diff(|x| n01.cdf(x), 0.5, 1e-4);
        assert!((d / gaussian_pdf(0.5, 0.0, 1.0) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn chi_square_pools_sparse_cells() {
        let probs = [0.5, 0.498, 0.001, 0.001];
        let r = chi_square_gof(&[505, 493, 1, 1], &probs).unwrap();
        assert_eq!(r.bins, 3);
        assert!(r.p_value > 0.5);
        let r = chi_square_gof(&[900, 98, 1, 1], &probs).unwrap();
        assert!(r.p_value < 1e-10);
    }
}
