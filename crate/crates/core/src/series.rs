//! Binomial/Pochhammer coefficients and the alternating series
//!
//! ```text
//! S(alpha; M) = sum_{m >= 1} binom(M, m) (-1)^(m-1) m^(-alpha)
//! ```
//!
//! that normalizes every member of the family (`C0(M) = S(1/2; M)`,
//! `Cn(M) = S(n + 1/2; M)`).
//!
//! For integer `M` the series has exactly `M` terms and is summed exactly in
//! double-double arithmetic; at `M = 40` the terms cancel by eleven orders of
//! magnitude, which plain `f64` accumulation cannot survive. For fractional
//! `M` the series is infinite and is truncated per [`TruncationPolicy`]. When
//! the cap is reached before the tolerance, the power-law tail is removed by
//! Richardson extrapolation on partial sums at `n, 2n, 4n, 8n, 16n` terms.

use serde::Serialize;

use crate::dd::Dd;
use crate::error::{Error, Result};

/// Shape parameters within this distance of a positive integer are treated as
/// that integer.
pub const INTEGER_TOLERANCE: f64 = 1e-12;

/// A cap-hit result whose extrapolation error estimate is below this relative
/// bound is accepted as converged.
pub const EXTRAPOLATION_RTOL: f64 = 1e-12;

const RICHARDSON_LEVELS: usize = 5;

/// Validated shape parameter `M > 0`.
///
/// Values within [`INTEGER_TOLERANCE`] of a positive integer are snapped to it,
/// so every series over `m` terminates at exactly `m = M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShapeParam {
    value: f64,
    #[serde(skip)]
    integer: Option<u32>,
}

impl ShapeParam {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::InvalidShape(value));
        }
        let nearest = value.round();
        if nearest >= 1.0 && nearest <= u32::MAX as f64 && (value - nearest).abs() <= INTEGER_TOLERANCE
        {
            Ok(Self {
                value: nearest,
                integer: Some(nearest as u32),
            })
        } else {
            Ok(Self {
                value,
                integer: None,
            })
        }
    }

    pub fn value(self) -> f64 {
        self.value
    }

    pub fn is_integer(self) -> bool {
        self.integer.is_some()
    }

    pub fn as_integer(self) -> Option<u32> {
        self.integer
    }
}

impl std::fmt::Display for ShapeParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.integer {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}", self.value),
        }
    }
}

/// Controls how many terms of an infinite (fractional `M`) series are summed.
/// Ignored for integer `M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TruncationPolicy {
    /// Stop once `|term| < eps_abs` (after `min_terms` and past the
    /// alternating head of the series).
    pub eps_abs: f64,
    pub max_terms: usize,
    pub min_terms: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            eps_abs: 1e-14,
            max_terms: 2000,
            min_terms: 10,
        }
    }
}

impl TruncationPolicy {
    pub fn new(eps_abs: f64, max_terms: usize, min_terms: usize) -> Result<Self> {
        let p = Self {
            eps_abs,
            max_terms,
            min_terms,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_max_terms(max_terms: usize) -> Result<Self> {
        let mut p = Self {
            max_terms,
            ..Self::default()
        };
        p.min_terms = p.min_terms.min(max_terms);
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_abs >= 0.0) || !self.eps_abs.is_finite() {
            return Err(Error::InvalidPolicy(format!(
                "eps_abs must be finite and >= 0, got {}",
                self.eps_abs
            )));
        }
        if self.min_terms == 0 || self.max_terms == 0 {
            return Err(Error::InvalidPolicy("term counts must be positive".into()));
        }
        if self.min_terms > self.max_terms {
            return Err(Error::InvalidPolicy(format!(
                "min_terms {} exceeds max_terms {}",
                self.min_terms, self.max_terms
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationFlag {
    /// Finite series (integer `M`), every term summed.
    Exact,
    /// Fractional `M`; the term magnitude fell below `eps_abs`.
    ToleranceMet,
    /// Fractional `M`; `max_terms` reached first.
    CapHit,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    /// `sum |term| / |sum term|` over the summed terms.
    pub condition_number: f64,
    pub truncation_flag: TruncationFlag,
    /// Estimated truncation error: zero for exact sums, the last term for a
    /// plain truncation, the spread of the last two extrapolation levels when
    /// the tail was extrapolated.
    pub error_estimate: f64,
    pub converged: bool,
}

impl SeriesResult {
    pub(crate) fn require_converged(self, what: &str) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                what: what.to_string(),
                terms: self.terms_used,
                error_estimate: self.error_estimate,
                condition_number: self.condition_number,
            })
        }
    }
}

/// Generalized binomial coefficient `(M)_m / m!` with the falling factorial
/// `(M)_m = M (M-1) ... (M-m+1)`. Exactly zero for integer `M` and `m > M`.
pub fn binom_coeff(shape: ShapeParam, m: u32) -> f64 {
    if let Some(n) = shape.integer {
        if m > n {
            return 0.0;
        }
    }
    let mv = shape.value;
    let mut b = 1.0;
    for j in 1..=m {
        b *= (mv - (j - 1) as f64) / j as f64;
    }
    b
}

/// Signed weights `binom(M, m) (-1)^(m-1)` in double-double, generated by the
/// ratio `w_m = w_{m-1} (m - 1 - M) / m`.
#[derive(Clone, Debug)]
pub(crate) struct Weights {
    m: u32,
    w: Dd,
    shape: f64,
}

impl Weights {
    pub(crate) fn new(shape: ShapeParam) -> Self {
        // w_0 = -1 so that w_1 = M.
        Self {
            m: 0,
            w: Dd::from_f64(-1.0),
            shape: shape.value,
        }
    }
}

impl Iterator for Weights {
    type Item = (u32, Dd);

    fn next(&mut self) -> Option<(u32, Dd)> {
        self.m += 1;
        let m = self.m;
        self.w = self.w * Dd::sub_f64s((m - 1) as f64, self.shape) / m as f64;
        Some((m, self.w))
    }
}

/// Sums `sum_m binom(M, m) (-1)^(m-1) factor(m)`.
///
/// `tail_decay` is the exponent `a` with `factor(m) ~ m^(-a) (1 + c/m + ...)`
/// for large `m`; when given, a capped fractional series is extrapolated.
pub(crate) fn weighted_series<F>(
    shape: ShapeParam,
    policy: &TruncationPolicy,
    tail_decay: Option<f64>,
    mut factor: F,
) -> SeriesResult
where
    F: FnMut(u32) -> Dd,
{
    let mut sum = Dd::ZERO;
    let mut abs = Dd::ZERO;

    if let Some(n) = shape.integer {
        for (m, w) in Weights::new(shape).take(n as usize) {
            let t = w * factor(m);
            sum += t;
            abs += t.abs();
        }
        return SeriesResult {
            value: sum.to_f64(),
            terms_used: n as usize,
            condition_number: condition(sum, abs),
            truncation_flag: TruncationFlag::Exact,
            error_estimate: 0.0,
            converged: true,
        };
    }

    let mv = shape.value;
    let base = policy.max_terms >> (RICHARDSON_LEVELS - 1);
    let can_extrapolate =
        tail_decay.is_some() && base >= policy.min_terms.max(mv.ceil() as usize + 2);
    let mut checkpoints = [Dd::ZERO; RICHARDSON_LEVELS];
    let mut last = Dd::ZERO;
    let mut used = 0usize;

    for (m, w) in Weights::new(shape) {
        let t = w * factor(m);
        sum += t;
        abs += t.abs();
        last = t;
        used = m as usize;

        if can_extrapolate && used % base == 0 {
            let k = used / base;
            if k.is_power_of_two() {
                let level = k.trailing_zeros() as usize;
                if level < RICHARDSON_LEVELS {
                    checkpoints[RICHARDSON_LEVELS - 1 - level] = sum;
                }
            }
        }

        let past_head = (m as f64) > mv + 1.0;
        if used >= policy.min_terms && past_head && t.hi.abs() < policy.eps_abs {
            return SeriesResult {
                value: sum.to_f64(),
                terms_used: used,
                condition_number: condition(sum, abs),
                truncation_flag: TruncationFlag::ToleranceMet,
                error_estimate: t.hi.abs(),
                converged: true,
            };
        }
        if used >= policy.max_terms {
            break;
        }
    }

    let cond = condition(sum, abs);
    if let (true, Some(decay)) = (can_extrapolate, tail_decay) {
        let (value, err) = richardson(&checkpoints, mv + decay);
        let converged = err <= policy.eps_abs.max(EXTRAPOLATION_RTOL * value.abs());
        return SeriesResult {
            value,
            terms_used: used,
            condition_number: cond,
            truncation_flag: TruncationFlag::CapHit,
            error_estimate: err,
            converged,
        };
    }
    let err = last.hi.abs();
    SeriesResult {
        value: sum.to_f64(),
        terms_used: used,
        condition_number: cond,
        truncation_flag: TruncationFlag::CapHit,
        error_estimate: err,
        converged: err <= policy.eps_abs,
    }
}

fn condition(sum: Dd, abs: Dd) -> f64 {
    let s = sum.to_f64().abs();
    let a = abs.to_f64();
    if s == 0.0 {
        return if a == 0.0 { 1.0 } else { f64::INFINITY };
    }
    (a / s).max(1.0)
}

/// Partial sums `s[i]` at `16n / 2^i` terms; the tail behaves as
/// `A0 n^-p + A1 n^-(p+1) + ...`. Returns the extrapolated limit and the
/// difference between the last two levels.
fn richardson(s: &[Dd; RICHARDSON_LEVELS], p: f64) -> (f64, f64) {
    let mut row: Vec<Dd> = s.to_vec();
    let mut prev_best = row[0];
    for j in 0..RICHARDSON_LEVELS - 1 {
        let f = 2f64.powf(p + j as f64);
        prev_best = row[0];
        row = (0..row.len() - 1)
            .map(|i| (row[i] * f - row[i + 1]) / (f - 1.0))
            .collect();
    }
    let best = row[0];
    (best.to_f64(), (best - prev_best).to_f64().abs())
}

/// Plain `f64` evaluation of a finite weighted series, without compensation.
/// Kept to exhibit the cancellation floor that the double-double path removes.
pub fn naive_weighted_sum<F>(shape: ShapeParam, terms: usize, mut factor: F) -> f64
where
    F: FnMut(u32) -> f64,
{
    let n = shape.integer.map_or(terms, |n| n as usize);
    let mut w = -1.0;
    let mut s = 0.0;
    for m in 1..=n as u32 {
        w *= ((m - 1) as f64 - shape.value) / m as f64;
        s += w * factor(m);
    }
    s
}

/// `S(alpha; M) = sum_m binom(M, m) (-1)^(m-1) m^(-alpha)`.
pub fn series_s(alpha: f64, shape: ShapeParam, policy: &TruncationPolicy) -> SeriesResult {
    weighted_series(shape, policy, Some(alpha), |m| {
        Dd::from_f64(m as f64).powf(-alpha)
    })
}

/// `xi_n(M) = S(n + 1/2; M) / S(1/2; M)`; `xi_0 = 1`.
pub fn xi_coeff(n: u32, shape: ShapeParam, policy: &TruncationPolicy) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    let c0 = series_s(0.5, shape, policy).require_converged("C0(M)")?;
    let cn = series_s(n as f64 + 0.5, shape, policy).require_converged("Cn(M)")?;
    Ok(cn.value / c0.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn shape(m: f64) -> ShapeParam {
        ShapeParam::new(m).unwrap()
    }

    #[test]
    fn shape_validation_and_classification() {
        assert!(ShapeParam::new(0.0).is_err());
        assert!(ShapeParam::new(-1.0).is_err());
        assert!(ShapeParam::new(f64::NAN).is_err());
        assert!(ShapeParam::new(f64::INFINITY).is_err());
        assert_eq!(shape(3.0).as_integer(), Some(3));
        assert_eq!(shape(2.0 + 1e-13).as_integer(), Some(2));
        assert_eq!(shape(2.0 + 1e-13).value(), 2.0);
        assert!(!shape(2.0 + 1e-9).is_integer());
        assert!(!shape(0.5).is_integer());
    }

    #[test]
    fn policy_validation() {
        assert!(TruncationPolicy::new(1e-14, 10, 20).is_err());
        assert!(TruncationPolicy::new(-1.0, 10, 5).is_err());
        assert!(TruncationPolicy::new(0.0, 0, 0).is_err());
        assert!(TruncationPolicy::new(0.0, 4000, 10).is_ok());
        assert_eq!(TruncationPolicy::default().max_terms, 2000);
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom_coeff(shape(1.0), 1), 1.0);
        assert_eq!(binom_coeff(shape(3.0), 3), 1.0);
        assert_eq!(binom_coeff(shape(0.5), 2), -0.125);
        assert_eq!(binom_coeff(shape(40.0), 20), 137_846_528_820.0);
        assert_eq!(binom_coeff(shape(3.0), 4), 0.0);
        assert_eq!(binom_coeff(shape(40.0), 41), 0.0);
    }

    #[test]
    fn binom_large_m_does_not_overflow() {
        let b = binom_coeff(shape(0.5), 10_000);
        assert!(b.is_finite() && b != 0.0);
        // |binom(1/2, m)| ~ m^(-3/2) / (2 sqrt(pi))
        let asym = 1.0 / (2.0 * std::f64::consts::PI.sqrt()) * 10_000f64.powf(-1.5);
        assert_relative_eq!(b.abs(), asym, max_relative = 1e-4);
    }

    #[test]
    fn weights_match_binom() {
        for &mv in &[0.5, 2.5, 7.0, 40.0] {
            let s = shape(mv);
            for (m, w) in Weights::new(s).take(30) {
                let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
                let b = binom_coeff(s, m);
                assert!((w.to_f64() - sign * b).abs() <= 1e-14 * b.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn series_examples() {
        let p = TruncationPolicy::default();
        assert_eq!(series_s(0.5, shape(1.0), &p).value, 1.0);
        assert_eq!(series_s(2.5, shape(1.0), &p).value, 1.0);
        let s2 = series_s(0.5, shape(2.0), &p);
        assert_relative_eq!(s2.value, 2.0 - 0.5f64.sqrt(), max_relative = 1e-15);
        assert_eq!(s2.truncation_flag, TruncationFlag::Exact);
        assert_eq!(s2.terms_used, 2);
    }

    // 50-digit references (exact finite sums for integer M, integral
    // representation for fractional M).
    const REFS: &[(f64, f64, f64)] = &[
        (0.5, 10.0, 1.890_851_969_665_063_8),
        (1.5, 10.0, 4.014_383_975_404_374_3),
        (0.5, 40.0, 2.310_119_037_001_745),
        (1.5, 40.0, 6.870_418_163_647_538),
        (2.5, 40.0, 13.378_491_380_691_579),
        (1.0, 40.0, 4.278_543_038_936_376),
        (0.5, 0.5, 0.709_233_979_855_956_4),
        (1.5, 0.5, 0.568_400_104_081_115_2),
        (2.5, 0.5, 0.528_402_818_673_471_6),
        (0.5, 2.5, 1.383_649_822_624_643_4),
        (1.5, 2.5, 1.903_763_201_816_697_4),
        (0.5, 0.025, 0.062_519_079_927_991_4),
        (1.0, 0.025, 0.040_388_582_052_144_35),
        (0.5, 0.25, 0.455_830_579_539_274_7),
    ];

    #[test]
    fn series_matches_extended_precision_references() {
        let p = TruncationPolicy::default();
        for &(alpha, mv, reference) in REFS {
            let r = series_s(alpha, shape(mv), &p);
            assert!(r.converged, "alpha={alpha} M={mv}: {r:?}");
            let rel = (r.value - reference).abs() / reference;
            assert!(rel < 1e-12, "alpha={alpha} M={mv}: rel {rel:e} ({r:?})");
        }
    }

    #[test]
    fn m40_is_badly_conditioned_but_exact() {
        let r = series_s(0.5, shape(40.0), &TruncationPolicy::default());
        assert!(r.condition_number > 1e10);
        let naive = naive_weighted_sum(shape(40.0), 40, |m| (m as f64).powf(-0.5));
        let naive_err = (naive - 2.310_119_037_001_745).abs();
        assert!(naive_err > 1e-8, "naive error {naive_err:e}");
        assert!((r.value - 2.310_119_037_001_745).abs() < 1e-14);
    }

    #[test]
    fn harmonic_numbers() {
        // S(1; n) = H_n
        let p = TruncationPolicy::default();
        for n in 1..=30u32 {
            let h: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
            assert_relative_eq!(series_s(1.0, shape(n as f64), &p).value, h, max_relative = 1e-14);
        }
    }

    #[test]
    fn c0_increases_with_integer_m() {
        let p = TruncationPolicy::default();
        let c: Vec<f64> = (1..=40)
            .map(|n| series_s(0.5, shape(n as f64), &p).value)
            .collect();
        assert!(c.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn small_fractional_m_has_no_cancellation() {
        let p = TruncationPolicy::default();
        for &mv in &[0.5, 0.25, 0.025, 0.9] {
            let r = series_s(0.5, shape(mv), &p);
            assert_eq!(r.condition_number, 1.0, "M={mv}");
        }
    }

    #[test]
    fn tail_signs_settle_for_fractional_m_above_one() {
        for &mv in &[1.5, 2.5, 3.7, 6.2] {
            let s = shape(mv);
            let expected = if (mv.floor() as i64) % 2 == 0 { 1.0 } else { -1.0 };
            let first = mv.floor() as u32 + 2;
            for (m, w) in Weights::new(s).skip(first as usize - 1).take(200) {
                assert!(m >= first);
                assert_eq!(w.hi.signum(), expected, "M={mv} m={m}");
            }
        }
    }

    #[test]
    fn cap_without_extrapolation_reports_non_convergence() {
        let p = TruncationPolicy::new(1e-14, 40, 10).unwrap();
        let r = series_s(0.5, shape(0.5), &p);
        assert_eq!(r.truncation_flag, TruncationFlag::CapHit);
        assert!(!r.converged);
        assert!(r.error_estimate > 1e-14);
        assert!(xi_coeff(1, shape(0.5), &p).is_err());
    }

    #[test]
    fn xi_examples() {
        let p = TruncationPolicy::default();
        assert_eq!(xi_coeff(3, shape(1.0), &p).unwrap(), 1.0);
        assert_eq!(xi_coeff(0, shape(10.0), &p).unwrap(), 1.0);
        let expected = (2.0 - 2f64.powf(-1.5)) / (2.0 - 2f64.powf(-0.5));
        assert_relative_eq!(xi_coeff(1, shape(2.0), &p).unwrap(), expected, max_relative = 1e-15);
        assert_relative_eq!(expected, 1.273_459_080_339_013_6, max_relative = 1e-15);
    }

    #[test]
    fn truncation_stability_for_m_2_5() {
        let a = series_s(0.5, shape(2.5), &TruncationPolicy::with_max_terms(2000).unwrap());
        let b = series_s(0.5, shape(2.5), &TruncationPolicy::with_max_terms(4000).unwrap());
        assert!((a.value - b.value).abs() <= 1e-8);
    }
}
