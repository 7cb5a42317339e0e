use multigauss::oracle::quadrature::{gaussian_pdf, integrate_with_breaks, normal_cdf, QuadratureSpec};
use multigauss::oracle::finite_diff;
use multigauss::{series_s, LogMultiGauss, MultiGauss, MvMultiGauss, ShapeParam, TruncationPolicy};
use proptest::prelude::*;

fn shape(m: f64) -> ShapeParam {
    ShapeParam::new(m).unwrap()
}

#[test]
fn density_integrates_to_the_closed_form_constant() {
    for m in [1.0, 2.0, 10.0, 0.5, 2.5] {
        let sigma = 1.7;
        let d = MultiGauss::new(0.3, sigma, m).unwrap();
        let unnormalized = |x: f64| d.pdf(x) * d.c0() * (2.0 * std::f64::consts::PI).sqrt() * sigma;
        let spec = QuadratureSpec::new(f64::NEG_INFINITY, f64::INFINITY).tol(1e-13, 1e-12);
        let q = integrate_with_breaks(unnormalized, &[0.3], &spec).unwrap().value;
        let expected = d.c0() * (2.0 * std::f64::consts::PI).sqrt() * sigma;
        assert!((q / expected - 1.0).abs() < 1e-8, "M = {m}: {q} vs {expected}");
    }
}

#[test]
fn normalizer_grows_with_shape() {
    let policy = TruncationPolicy::default();
    let c: Vec<f64> = (1..=40).map(|m| series_s(0.5, shape(m as f64), &policy).value).collect();
    assert_eq!(c[0], 1.0);
    assert!(c.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn series_at_unit_shape_is_one() {
    let policy = TruncationPolicy::default();
    for alpha in [0.5, 1.0, 1.5, 7.25] {
        assert_eq!(series_s(alpha, shape(1.0), &policy).value, 1.0);
    }
}

#[test]
fn peak_height_falls_with_shape() {
    let peaks: Vec<f64> = [1.0, 2.0, 10.0, 40.0]
        .iter()
        .map(|&m| MultiGauss::new(0.0, 1.0, m).unwrap().pdf(0.0))
        .collect();
    assert!(peaks.windows(2).all(|w| w[0] > w[1]), "{peaks:?}");
}

#[test]
fn cdf_reaches_its_limits() {
    for m in [0.025, 0.5, 1.0, 2.0, 10.0, 40.0] {
        for (mu, sigma) in [(0.0, 1.0), (-3.0, 0.2), (5.0, 4.0)] {
            let d = MultiGauss::new(mu, sigma, m).unwrap();
            assert!(d.cdf(mu - 10.0 * sigma) < 1e-9);
            assert!(d.cdf(mu + 10.0 * sigma) > 1.0 - 1e-9);
        }
    }
}

#[test]
fn cdf_derivative_is_the_density() {
    for m in [0.5, 1.0, 3.0, 40.0] {
        let sigma = 0.8;
        let d = MultiGauss::new(1.0, sigma, m).unwrap();
        // the mode itself is skipped: for M < 1 the density has a cusp there
        for x in [-1.0, 0.2, 1.3, 1.9, 3.5] {
            let fd = finite_diff(|t| d.cdf(t), x, 1e-5 * sigma);
            let p = d.pdf(x);
            assert!((fd - p).abs() <= 1e-6 * p.max(1e-3), "M = {m}, x = {x}: {fd} vs {p}");
        }
    }
}

#[test]
fn characteristic_function_is_the_continued_mgf() {
    // Once the location phase is removed both transforms are even; the
    // continuation t -> i t flips the sign of every t^2 term, so the
    // difference of the two at small t is var t^2 up to sixth order.
    for m in [0.5, 1.0, 2.0, 10.0] {
        let mu = 0.7;
        let d = MultiGauss::new(mu, 1.3, m).unwrap();
        for t in [1e-2, 2e-2] {
            let centred = d.cf(t) * num_complex::Complex64::from_polar(1.0, -t * mu);
            assert!(centred.im.abs() < 1e-15, "{centred}");
            let mgf = d.mgf(t).unwrap() * (-mu * t).exp();
            let var = d.variance();
            let slope = (mgf - centred.re) / (t * t);
            assert!((slope / var - 1.0).abs() < 1e-5, "M = {m}: {slope} vs {var}");
        }
        assert_eq!(d.cf(0.0).re, 1.0);
    }
}

#[test]
fn cf_is_real_for_centred_laws() {
    let d = MultiGauss::new(0.0, 2.0, 0.25).unwrap();
    for w in [0.3, 1.1, 4.0] {
        assert_eq!(d.cf(w).im, 0.0);
    }
}

#[test]
fn log_density_is_the_change_of_variables() {
    for m in [0.5, 1.0, 10.0] {
        let l = LogMultiGauss::new(0.2, 0.6, m).unwrap();
        let x = l.base();
        for i in -20..=20 {
            let t = 0.2 + 0.6 * i as f64 / 4.0;
            let y = t.exp();
            let lhs = l.pdf(y) * y;
            let rhs = x.pdf(t);
            assert!((lhs - rhs).abs() <= 1e-14 * rhs.max(1e-300), "t = {t}");
            assert_eq!(l.cdf(y), x.cdf(y.ln()));
        }
        assert_eq!(l.pdf(0.0), 0.0);
        assert_eq!(l.cdf(0.0), 0.0);
        assert_eq!(l.pdf(-1.0), 0.0);
    }
}

#[test]
fn log_density_matches_quadrature_mass() {
    for m in [1.0, 2.0, 0.5] {
        let l = LogMultiGauss::new(0.0, 0.5, m).unwrap();
        let spec = QuadratureSpec::new(0.0, f64::INFINITY).tol(1e-13, 1e-12);
        let mass = integrate_with_breaks(|y| l.pdf(y), &[1.0], &spec).unwrap().value;
        assert!((mass - 1.0).abs() < 1e-8, "M = {m}: {mass}");
    }
}

#[test]
fn unit_shape_reproduces_the_multivariate_normal() {
    let mean = vec![0.5, -1.0];
    let cov = vec![2.0, 0.6, 0.6, 0.5];
    let d = MvMultiGauss::new(mean.clone(), cov.clone(), 1.0).unwrap();
    let det = cov[0] * cov[3] - cov[1] * cov[2];
    let inv = [cov[3] / det, -cov[1] / det, -cov[2] / det, cov[0] / det];
    for i in 0..10 {
        for j in 0..10 {
            let x = [mean[0] - 4.0 + 0.8 * i as f64, mean[1] - 2.0 + 0.4 * j as f64];
            let (a, b) = (x[0] - mean[0], x[1] - mean[1]);
            let q = a * a * inv[0] + 2.0 * a * b * inv[1] + b * b * inv[3];
            let direct = (-0.5 * q).exp() / (2.0 * std::f64::consts::PI * det.sqrt());
            let v = d.pdf(&x).unwrap();
            assert!((v - direct).abs() <= 1e-13 * direct, "{x:?}: {v} vs {direct}");
        }
    }
}

#[test]
fn one_dimensional_multivariate_is_univariate() {
    for m in [0.5, 1.0, 10.0] {
        let mv = MvMultiGauss::new(vec![1.0], vec![4.0], m).unwrap();
        let u = MultiGauss::new(1.0, 2.0, m).unwrap();
        for x in [-3.0, 0.0, 1.0, 2.5] {
            let a = mv.pdf(&[x]).unwrap();
            let b = u.pdf(x);
            assert!((a - b).abs() <= 1e-15 * b.max(1e-300) + 1e-300);
        }
    }
}

#[test]
fn univariate_normal_matches_the_gaussian() {
    let d = MultiGauss::new(-0.4, 1.5, 1.0).unwrap();
    for x in [-5.0, -0.4, 0.0, 3.0] {
        let g = gaussian_pdf(x, -0.4, 1.5);
        assert!((d.pdf(x) - g).abs() <= 1e-15 * g);
        let c = normal_cdf((x + 0.4) / 1.5);
        assert!((d.cdf(x) - c).abs() <= 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cdf_is_nondecreasing(m in prop::sample::select(vec![0.025, 0.5, 1.0, 2.0, 10.0, 40.0]),
                            a in -8.0f64..8.0, step in 0.0f64..0.5) {
        let d = MultiGauss::new(0.0, 1.0, m).unwrap();
        prop_assert!(d.cdf(a) <= d.cdf(a + step));
    }

    #[test]
    fn density_is_nonnegative_and_finite(m in 0.01f64..50.0, x in -40.0f64..40.0) {
        let d = MultiGauss::new(0.0, 1.0, m).unwrap();
        let p = d.pdf(x);
        prop_assert!(p.is_finite() && p >= 0.0);
    }

    #[test]
    fn equal_mahalanobis_gives_equal_density(angle in 0.0f64..std::f64::consts::TAU,
                                             r in 0.0f64..4.0,
                                             m in prop::sample::select(vec![1.0, 2.0, 10.0, 40.0])) {
        let d = MvMultiGauss::new(vec![0.0, 0.0], vec![1.0, 0.0, 0.0, 1.0], m).unwrap();
        let on_axis = d.pdf(&[r, 0.0]).unwrap();
        let rotated = d.pdf(&[r * angle.cos(), r * angle.sin()]).unwrap();
        prop_assert!((on_axis - rotated).abs() <= 1e-13 * on_axis);
    }

    #[test]
    fn quantile_inverts_cdf(m in prop::sample::select(vec![0.5, 1.0, 2.0, 10.0, 40.0]),
                            u in 1e-6f64..(1.0 - 1e-6)) {
        let d = MultiGauss::new(0.0, 1.0, m).unwrap();
        let x = d.quantile(u).unwrap();
        prop_assert!((d.cdf(x) - u).abs() < 1e-10);
    }
}
