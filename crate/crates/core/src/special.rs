//! Error function and Gaussian building blocks.
//!
//! `erf`/`erfc` come from `libm` (a port of the musl implementations, accurate
//! to about one ulp), which meets the 1e-14 relative accuracy the CDF series
//! needs.

use std::f64::consts::FRAC_1_SQRT_2;

pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Standard normal lower tail `Phi(z)`, accurate in relative terms for z < 0.
#[inline]
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

/// `1 - (1 - g)^M` for `g` in `[0, 1]`, evaluated without cancellation as
/// `-expm1(M ln(1 - g))`.
#[inline]
pub fn flat_top_kernel(g: f64, m: f64) -> f64 {
    if g >= 1.0 {
        return 1.0;
    }
    -(m * (-g).ln_1p()).exp_m1()
}

/// The same kernel for `g = exp(-a)`, `a >= 0`. Near the mode `1 - g` is
/// taken from `expm1` so fractional `M` keeps full relative accuracy there.
#[inline]
pub fn flat_top_kernel_exp(a: f64, m: f64) -> f64 {
    if !(a > 0.0) {
        return 1.0;
    }
    if m == 1.0 {
        return (-a).exp();
    }
    let ln_q = if a < std::f64::consts::LN_2 {
        (-(-a).exp_m1()).ln()
    } else {
        (-(-a).exp()).ln_1p()
    };
    -(m * ln_q).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erf_reference_values() {
        // 30-digit references
        let cases = [
            (0.5, 0.520_499_877_813_046_5),
            (1.0, 0.842_700_792_949_714_9),
            (2.0, 0.995_322_265_018_952_7),
        ];
        for (x, r) in cases {
            assert!(((erf(x) - r) / r).abs() < 1e-15);
        }
        let r = 2.088_487_583_762_544_8e-45; // erfc(10)
        assert!(((erfc(10.0) - r) / r).abs() < 1e-14);
    }

    #[test]
    fn kernel_reduces_to_identity_at_m1() {
        for &g in &[1e-300, 1e-20, 1e-8, 0.3, 0.999_999, 1.0] {
            let k = flat_top_kernel(g, 1.0);
            assert!(((k - g) / g).abs() < 4.0 * f64::EPSILON, "g={g}");
        }
    }

    #[test]
    fn kernel_small_g_is_linear() {
        let g = 1e-30;
        assert!((flat_top_kernel(g, 40.0) / (40.0 * g) - 1.0).abs() < 1e-14);
        assert!((flat_top_kernel(g, 0.025) / (0.025 * g) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exponent_form_matches_and_resolves_the_mode() {
        for &a in &[1e-3, 0.2, 0.69, 0.7, 3.0, 50.0] {
            for &m in &[0.025, 0.5, 2.0, 40.0] {
                let x = flat_top_kernel_exp(a, m);
                let y = flat_top_kernel((-a).exp(), m);
                assert!(((x - y) / y).abs() < 1e-12, "a={a} m={m}");
            }
        }
        // 1 - (1 - exp(-2e-20))^0.025, where exp(-a) rounds to 1
        let k = flat_top_kernel_exp(2e-20, 0.025);
        assert!((k - 0.678_244_669_998_867_4).abs() < 1e-15, "{k}");
    }
}
