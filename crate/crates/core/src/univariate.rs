//! Univariate Multi-Gaussian distribution `MG(mu, sigma, M)`.

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::Open01;
use serde::Serialize;

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::quad::{self, Tolerance};
use crate::series::{
    naive_weighted_sum, series_s, weighted_series, SeriesResult, ShapeParam, TruncationPolicy,
    Weights,
};
use crate::special::{erfc, flat_top_kernel_exp, std_normal_cdf, FRAC_1_SQRT_2PI};
use crate::sum::NeumaierSum;

/// Above this condition number the erf series for the CDF is abandoned in
/// favour of quadrature of the closed-form density.
pub const CDF_CONDITION_LIMIT: f64 = 1e3;

/// Normalization series more ill-conditioned than this cannot be trusted even
/// in double-double arithmetic.
pub const MAX_SERIES_CONDITION: f64 = 1e18;

/// Half-width (in units of sigma) of the tabulated CDF; beyond it the lower
/// tail is `M Phi(z) / C0` to full precision.
const TABLE_HALF_WIDTH: f64 = 12.0;
const TABLE_STEP: f64 = 0.125;

#[derive(Debug, Clone, Serialize)]
pub struct MultiGauss {
    mu: f64,
    sigma: f64,
    shape: ShapeParam,
    policy: TruncationPolicy,
    c0: f64,
    /// xi_0 .. xi_4
    xi: [f64; 5],
    #[serde(skip)]
    table: OnceLock<CdfTable>,
}

#[derive(Debug, Clone)]
struct CdfTable {
    /// Lower-tail mass at `z_i = -TABLE_HALF_WIDTH + i * TABLE_STEP`.
    lower: Vec<f64>,
}

pub(crate) fn checked_series(r: SeriesResult, what: &str) -> Result<SeriesResult> {
    let r = r.require_converged(what)?;
    if !(r.condition_number <= MAX_SERIES_CONDITION) || !(r.value > 0.0) {
        return Err(Error::IllConditioned {
            what: what.to_string(),
            condition_number: r.condition_number,
        });
    }
    Ok(r)
}

impl MultiGauss {
    pub fn new(mu: f64, sigma: f64, m: f64) -> Result<Self> {
        Self::with_policy(mu, sigma, ShapeParam::new(m)?, TruncationPolicy::default())
    }

    pub fn with_policy(
        mu: f64,
        sigma: f64,
        shape: ShapeParam,
        policy: TruncationPolicy,
    ) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidLocation(mu));
        }
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidScale(sigma));
        }
        policy.validate()?;
        let c0 = checked_series(series_s(0.5, shape, &policy), "C0(M)")?.value;
        let mut xi = [1.0; 5];
        for (n, slot) in xi.iter_mut().enumerate().skip(1) {
            let cn = checked_series(series_s(n as f64 + 0.5, shape, &policy), "Cn(M)")?;
            *slot = cn.value / c0;
        }
        Ok(Self {
            mu,
            sigma,
            shape,
            policy,
            c0,
            xi,
            table: OnceLock::new(),
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn shape(&self) -> ShapeParam {
        self.shape
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    /// Normalization constant `C0(M) = S(1/2; M)`.
    pub fn c0(&self) -> f64 {
        self.c0
    }

    /// `xi_n(M)`; cached for `n <= 4`.
    pub fn xi(&self, n: u32) -> f64 {
        match self.xi.get(n as usize) {
            Some(&v) => v,
            None => series_s(n as f64 + 0.5, self.shape, &self.policy).value / self.c0,
        }
    }

    pub fn mean(&self) -> f64 {
        self.mu
    }

    pub fn variance(&self) -> f64 {
        self.sigma * self.sigma * self.xi[1]
    }

    #[inline]
    fn standardize(&self, x: f64) -> f64 {
        (x - self.mu) / self.sigma
    }

    /// Density of the standardized variable `(X - mu) / sigma`.
    #[inline]
    pub(crate) fn pdf_std(&self, z: f64) -> f64 {
        flat_top_kernel_exp(0.5 * z * z, self.shape.value()) * FRAC_1_SQRT_2PI / self.c0
    }

    /// Density from the closed form `1 - (1 - g)^M`, stable for every `M`.
    pub fn pdf(&self, x: f64) -> f64 {
        self.pdf_std(self.standardize(x)) / self.sigma
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        self.pdf(x).ln()
    }

    /// Density as the alternating sum of Gaussians with widths
    /// `sigma / sqrt(m)`, accumulated in double-double.
    pub fn pdf_series(&self, x: f64) -> SeriesResult {
        let z = self.standardize(x);
        let a = Dd::mul_f64s(z, z) * 0.5;
        let r = weighted_series(self.shape, &self.policy, None, |m| (-(a * m as f64)).exp());
        let scale = FRAC_1_SQRT_2PI / (self.c0 * self.sigma);
        SeriesResult {
            value: r.value * scale,
            error_estimate: r.error_estimate * scale,
            ..r
        }
    }

    /// The same series summed term by term in plain `f64`.
    pub fn pdf_series_naive(&self, x: f64) -> f64 {
        let z = self.standardize(x);
        let a = 0.5 * z * z;
        let s = naive_weighted_sum(self.shape, self.policy.max_terms, |m| (-a * m as f64).exp());
        s * FRAC_1_SQRT_2PI / (self.c0 * self.sigma)
    }

    /// The erf series for the CDF, truncated per the policy for fractional
    /// `M`. [`MultiGauss::cdf`] is the robust entry point.
    pub fn cdf_series(&self, x: f64) -> SeriesResult {
        let z = self.standardize(x);
        let r = weighted_series(self.shape, &self.policy, Some(0.5), |m| {
            let mf = m as f64;
            Dd::from_f64(mf).powf(-0.5) * erfc(-z * (0.5 * mf).sqrt())
        });
        let scale = 0.5 / self.c0;
        SeriesResult {
            value: r.value * scale,
            error_estimate: r.error_estimate * scale,
            ..r
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let z = self.standardize(x);
        if z.is_nan() {
            return f64::NAN;
        }
        if z == 0.0 {
            return 0.5;
        }
        let lower = self.lower_tail(-z.abs());
        if z < 0.0 {
            lower
        } else {
            1.0 - lower
        }
    }

    /// `1 - cdf(x)`, accurate in the upper tail.
    pub fn sf(&self, x: f64) -> f64 {
        let z = self.standardize(x);
        if z == 0.0 {
            return 0.5;
        }
        let lower = self.lower_tail(-z.abs());
        if z > 0.0 {
            lower
        } else {
            1.0 - lower
        }
    }

    /// Standardized lower-tail mass for `z <= 0`.
    fn lower_tail(&self, z: f64) -> f64 {
        debug_assert!(z <= 0.0);
        if let Some(n) = self.shape.as_integer() {
            let a = -z * std::f64::consts::FRAC_1_SQRT_2;
            let mut s = NeumaierSum::new();
            for (m, w) in Weights::new(self.shape).take(n as usize) {
                let mf = m as f64;
                s.add(w.to_f64() / mf.sqrt() * erfc(a * mf.sqrt()));
            }
            if s.condition_number() <= CDF_CONDITION_LIMIT {
                let v = s.value() * 0.5 / self.c0;
                debug_assert!(v > -1e-12 && v < 0.5 + 1e-12);
                return v.clamp(0.0, 0.5);
            }
        }
        self.lower_tail_quadrature(z)
    }

    fn table(&self) -> &CdfTable {
        self.table.get_or_init(|| {
            let cells = (TABLE_HALF_WIDTH / TABLE_STEP).round() as usize;
            let mut lower = Vec::with_capacity(cells + 1);
            let mut acc = self.far_tail(-TABLE_HALF_WIDTH);
            lower.push(acc);
            let f = |z: f64| self.pdf_std(z);
            for i in 0..cells {
                let a = -TABLE_HALF_WIDTH + i as f64 * TABLE_STEP;
                let (v, _) = quad::integrate(&f, a, a + TABLE_STEP, Tolerance::default());
                acc += v;
                lower.push(acc);
            }
            CdfTable { lower }
        })
    }

    /// Lower tail beyond the table, where `1 - (1 - g)^M = M g` to within
    /// `M g ~ 1e-31`.
    fn far_tail(&self, z: f64) -> f64 {
        self.shape.value() * std_normal_cdf(z) / self.c0
    }

    fn lower_tail_quadrature(&self, z: f64) -> f64 {
        if z <= -TABLE_HALF_WIDTH {
            return self.far_tail(z);
        }
        let table = self.table();
        let last = table.lower.len() - 2;
        let i = (((z + TABLE_HALF_WIDTH) / TABLE_STEP).floor() as usize).min(last);
        let zi = -TABLE_HALF_WIDTH + i as f64 * TABLE_STEP;
        let f = |s: f64| self.pdf_std(s);
        let (v, _) = quad::integrate(&f, zi, z, Tolerance::default());
        (table.lower[i] + v).clamp(0.0, 0.5)
    }

    /// Moment generating function `E[exp(tX)]`.
    pub fn mgf(&self, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(1.0);
        }
        let st = self.sigma * t;
        let half = Dd::mul_f64s(st, st) * 0.5;
        let r = weighted_series(self.shape, &self.policy, Some(0.5), |m| {
            let mf = Dd::from_f64(m as f64);
            mf.powf(-0.5) * (half / mf).exp()
        })
        .require_converged("mgf")?;
        let v = (self.mu * t).exp() * r.value / self.c0;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow(format!("mgf at t = {t}")))
        }
    }

    /// Characteristic function `E[exp(i omega X)]`.
    pub fn cf(&self, omega: f64) -> Complex64 {
        if omega == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let modulus = self.cf_modulus(omega);
        Complex64::from_polar(1.0, omega * self.mu) * modulus
    }

    /// `E[cos(omega (X - mu))]`, the real factor of the CF once the location
    /// phase is removed.
    pub fn cf_modulus(&self, omega: f64) -> f64 {
        let so = self.sigma * omega;
        let half = Dd::mul_f64s(so, so) * 0.5;
        let r = weighted_series(self.shape, &self.policy, Some(0.5), |m| {
            let mf = Dd::from_f64(m as f64);
            mf.powf(-0.5) * (-(half / mf)).exp()
        });
        r.value / self.c0
    }

    /// Raw moment `E[X^k]`.
    ///
    /// The Gaussian raw moment `g_k(mu, s)` with variance `s = sigma^2 / m`
    /// obeys `g_k = mu g_{k-1} + (k-1) s g_{k-2}`; tracking it as a polynomial
    /// in `s` lets the sum over `m` collapse onto `xi_j(M)`.
    pub fn raw_moment(&self, k: u32) -> f64 {
        let coeffs = gaussian_moment_coefficients(k);
        let s2 = self.sigma * self.sigma;
        coeffs
            .iter()
            .enumerate()
            .map(|(j, &a)| {
                a * self.mu.powi((k as usize - 2 * j) as i32) * s2.powi(j as i32) * self.xi(j as u32)
            })
            .sum()
    }

    /// Cumulant `kappa_k`, `k >= 1`, by the moment-to-cumulant recursion.
    pub fn cumulant(&self, k: u32) -> f64 {
        assert!(k >= 1, "cumulants are indexed from 1");
        let moments: Vec<f64> = (0..=k).map(|j| self.raw_moment(j)).collect();
        cumulants_from_moments(&moments)[k as usize]
    }

    /// Inverse CDF.
    ///
    /// The bracket `[mu - 2^k sigma, mu]` (or its mirror) is grown until it
    /// straddles `u`, then refined by Newton steps on `cdf - u` with `pdf`
    /// as the derivative, falling back to bisection whenever a step leaves
    /// the bracket.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::InvalidProbability(u));
        }
        if u == 0.5 {
            return Ok(self.mu);
        }
        // 1 - u is exact for u in [0.5, 1).
        let t = if u < 0.5 { u } else { 1.0 - u };
        let z = self.solve_lower_tail(t);
        Ok(if u < 0.5 {
            self.mu + self.sigma * z
        } else {
            self.mu - self.sigma * z
        })
    }

    fn solve_lower_tail(&self, t: f64) -> f64 {
        let mut hi = 0.0;
        let mut lo = -1.0;
        while self.lower_tail(lo) > t {
            hi = lo;
            lo *= 2.0;
            if lo < -1e6 {
                return lo;
            }
        }
        let mut z = 0.5 * (lo + hi);
        for _ in 0..300 {
            let f = self.lower_tail(z) - t;
            if f.abs() <= 1e-15 * t {
                break;
            }
            if f > 0.0 {
                hi = z;
            } else {
                lo = z;
            }
            let d = self.pdf_std(z);
            let newton = z - f / d;
            let next = if d > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if next == z || hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(f64::MIN_POSITIVE) {
                break;
            }
            z = next;
        }
        z
    }

    /// One variate by inversion.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.sample(Open01);
        self.quantile(u).expect("Open01 yields u in (0, 1)")
    }

    /// `n` variates by inverse-CDF sampling; the same generator state always
    /// yields the same sequence.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| self.sample_one(rng)).collect()
    }
}

/// Coefficients `a_j` with `g_k(mu, s) = sum_j a_j mu^(k-2j) s^j`.
pub(crate) fn gaussian_moment_coefficients(k: u32) -> Vec<f64> {
    let mut prev2: Vec<f64> = vec![1.0]; // g_0
    if k == 0 {
        return prev2;
    }
    let mut prev1: Vec<f64> = vec![1.0]; // g_1 = mu
    for n in 2..=k {
        let len = n as usize / 2 + 1;
        let mut next = vec![0.0; len];
        for (j, &a) in prev1.iter().enumerate() {
            next[j] += a;
        }
        for (j, &a) in prev2.iter().enumerate() {
            next[j + 1] += (n - 1) as f64 * a;
        }
        prev2 = prev1;
        prev1 = next;
    }
    prev1
}

/// `kappa_n = m_n - sum_{j=1}^{n-1} C(n-1, j-1) kappa_j m_{n-j}`.
/// `moments[0]` must be 1; index 0 of the output is unused (zero).
pub fn cumulants_from_moments(moments: &[f64]) -> Vec<f64> {
    let k = moments.len().saturating_sub(1);
    let mut kappa = vec![0.0; k + 1];
    for n in 1..=k {
        let mut binom = 1.0; // C(n-1, 0)
        let mut acc = 0.0;
        for j in 1..n {
            acc += binom * kappa[j] * moments[n - j];
            binom = binom * (n - j) as f64 / j as f64;
        }
        kappa[n] = moments[n] - acc;
    }
    kappa
}
