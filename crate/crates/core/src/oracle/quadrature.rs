//! Globally adaptive 10/21-point Gauss–Kronrod integration.
//!
//! Written separately from [`crate::quad`] so that verification never runs
//! through the integrator the distributions use themselves. Infinite limits
//! are mapped onto finite ones by algebraic substitutions.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_977_211_930,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Ten-point Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_628,
];

/// Integration range and stopping rule. Either limit may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub lower: f64,
    pub upper: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(lower: f64, upper: f64) -> Self {
        Self {
            lower,
            upper,
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            max_subdivisions: 5000,
        }
    }

    pub fn tol(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.lower.is_nan() || self.upper.is_nan() || !(self.lower < self.upper) {
            return Err(Error::Domain(format!(
                "integration range [{}, {}] is empty",
                self.lower, self.upper
            )));
        }
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) || (self.abs_tol == 0.0 && self.rel_tol == 0.0) {
            return Err(Error::Domain("at least one positive tolerance is required".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_err: f64,
    pub subdivisions: usize,
}

/// Map from a finite parameter `t` to `x`, with its Jacobian.
#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    /// `x = a + t / (1 - t)`, `t` in `[0, 1)`.
    Upper(f64),
    /// `x = b - (1 - t) / t`, `t` in `(0, 1]`.
    Lower(f64),
    /// `x = t / (1 - t^2)`, `t` in `(-1, 1)`.
    Both,
}

impl Map {
    fn eval<F: Fn(f64) -> f64>(self, f: &F, t: f64) -> f64 {
        let (x, jac) = match self {
            Map::Identity => return f(t),
            Map::Upper(a) => {
                let s = 1.0 - t;
                (a + t / s, 1.0 / (s * s))
            }
            Map::Lower(b) => (b - (1.0 - t) / t, 1.0 / (t * t)),
            Map::Both => {
                let s = 1.0 - t * t;
                (t / s, (1.0 + t * t) / (s * s))
            }
        };
        if !x.is_finite() || !jac.is_finite() {
            return 0.0;
        }
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            v * jac
        }
    }

    fn range(lower: f64, upper: f64) -> (Map, f64, f64) {
        match (lower.is_infinite(), upper.is_infinite()) {
            (false, false) => (Map::Identity, lower, upper),
            (false, true) => (Map::Upper(lower), 0.0, 1.0),
            (true, false) => (Map::Lower(upper), 0.0, 1.0),
            (true, true) => (Map::Both, -1.0, 1.0),
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    map: Map,
    value: f64,
    err: f64,
    /// The error estimate is at the rounding floor; bisecting cannot help.
    floor: bool,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, map: Map, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = map.eval(f, c);
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = WGK[10] * fc.abs();
    let mut pairs = [(0.0, 0.0); 10];
    for j in 0..10 {
        let dx = h * XGK[j];
        let (l, r) = (map.eval(f, c - dx), map.eval(f, c + dx));
        pairs[j] = (l, r);
        resk += WGK[j] * (l + r);
        resabs += WGK[j] * (l.abs() + r.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (l + r);
        }
    }
    let half = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - half).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((pairs[j].0 - half).abs() + (pairs[j].1 - half).abs());
    }
    let (resk, resabs, resasc) = (resk * h, resabs * h.abs(), resasc * h.abs());
    let mut err = (resk - resg * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let mut floor = false;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let round = 50.0 * f64::EPSILON * resabs;
        floor = err <= round;
        err = err.max(round);
    }
    Segment {
        a,
        b,
        map,
        value: resk,
        err,
        floor,
    }
}

/// Integrates `f` over `spec.lower..spec.upper`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<Integral> {
    integrate_with_breaks(f, &[], spec)
}

/// As [`integrate`], with the range first split at the interior points in
/// `breaks` (kinks, cusps, peaks). Points outside the range are ignored.
///
/// Segments whose error is already at the rounding level are not refined
/// further, so the returned `abs_err` may exceed an unattainable tolerance.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Integral> {
    spec.validate()?;
    let mut edges = vec![spec.lower];
    let mut inner: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| x > spec.lower && x < spec.upper)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    edges.extend(inner);
    edges.push(spec.upper);

    let mut heap = BinaryHeap::new();
    let mut settled = Vec::new();
    for w in edges.windows(2) {
        let (map, a, b) = Map::range(w[0], w[1]);
        heap.push(kronrod21(&f, map, a, b));
    }
    let mut subdivisions = 0;
    loop {
        let (value, err) = totals(heap.iter().chain(settled.iter()));
        if !value.is_finite() {
            return Err(Error::QuadratureFailed {
                estimate: value,
                error: err,
            });
        }
        if err <= spec.abs_tol.max(spec.rel_tol * value.abs()) || heap.is_empty() {
            return Ok(Integral {
                value,
                abs_err: err,
                subdivisions,
            });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::QuadratureFailed {
                estimate: value,
                error: err,
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if worst.floor || mid <= worst.a || mid >= worst.b {
            settled.push(worst);
            continue;
        }
        subdivisions += 1;
        heap.push(kronrod21(&f, worst.map, worst.a, mid));
        heap.push(kronrod21(&f, worst.map, mid, worst.b));
    }
}

fn totals<'a>(segs: impl Iterator<Item = &'a Segment>) -> (f64, f64) {
    let mut v = KahanSum::default();
    let mut e = 0.0;
    for s in segs {
        v.add(s.value);
        e += s.err;
    }
    (v.sum, e)
}

/// Plain Kahan summation, kept apart from the library's own summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Nested tensor-product integration of `f(x, y)` over a rectangle. `ybreaks`
/// gives the break points of the inner integral as a function of `x`.
pub fn integrate_2d<F, B>(
    f: F,
    xspec: &QuadratureSpec,
    xbreaks: &[f64],
    ylimits: (f64, f64),
    ybreaks: B,
    inner_tol: (f64, f64),
) -> Result<Integral>
where
    F: Fn(f64, f64) -> f64,
    B: Fn(f64) -> Vec<f64>,
{
    let failure = std::cell::Cell::new(None);
    let mut yspec = QuadratureSpec::new(ylimits.0, ylimits.1).tol(inner_tol.0, inner_tol.1);
    yspec.max_subdivisions = xspec.max_subdivisions;
    let outer = integrate_with_breaks(
        |x| match integrate_with_breaks(|y| f(x, y), &ybreaks(x), &yspec) {
            Ok(r) => r.value,
            Err(e) => {
                failure.set(Some(e.to_string()));
                f64::NAN
            }
        },
        xbreaks,
        xspec,
    );
    if let Some(msg) = failure.into_inner() {
        return Err(Error::Domain(format!("inner integral failed: {msg}")));
    }
    outer
}

/// `exp(-(x - mu)^2 / (2 s^2)) / (s sqrt(2 pi))`, computed directly.
pub fn gaussian_pdf(x: f64, mu: f64, s: f64) -> f64 {
    let z = (x - mu) / s;
    (-0.5 * z * z).exp() / (s * (2.0 * std::f64::consts::PI).sqrt())
}

/// Standard normal CDF from the all-positive series
/// `erf(t) = 2/sqrt(pi) exp(-t^2) sum_n 2^n t^(2n+1) / (2n+1)!!`, which
/// loses nothing to cancellation. Accurate to a few ulp in absolute terms.
pub fn normal_cdf(x: f64) -> f64 {
    let t = x.abs() / std::f64::consts::SQRT_2;
    if t > 27.0 {
        return if x > 0.0 { 1.0 } else { 0.0 };
    }
    let mut term = t;
    let mut sum = KahanSum::default();
    let mut n = 0.0;
    while term > 1e-18 * sum.value().max(t) {
        sum.add(term);
        n += 1.0;
        term *= 2.0 * t * t / (2.0 * n + 1.0);
    }
    let erf = 2.0 / std::f64::consts::PI.sqrt() * (-t * t).exp() * sum.value();
    if x >= 0.0 {
        0.5 + 0.5 * erf
    } else {
        0.5 - 0.5 * erf
    }
}

/// `int cos(omega x) f(x) dx` over `[lower, upper]` (finite), split at every
/// zero of the cosine so each piece is free of sign changes.
pub fn integrate_cos<F: Fn(f64) -> f64>(f: F, omega: f64, spec: &QuadratureSpec) -> Result<Integral> {
    let mut zeros = Vec::new();
    if omega != 0.0 {
        let half = std::f64::consts::PI / omega.abs();
        let k0 = (spec.lower / half - 0.5).ceil() as i64;
        let k1 = (spec.upper / half - 0.5).floor() as i64;
        for k in k0..=k1 {
            zeros.push((k as f64 + 0.5) * half);
        }
    }
    integrate_with_breaks(|x| (omega * x).cos() * f(x), &zeros, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_r() -> QuadratureSpec {
        QuadratureSpec::new(f64::NEG_INFINITY, f64::INFINITY)
    }

    #[test]
    fn gauss_weights_sum_to_two() {
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        let k: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        assert!((g - 2.0).abs() < 1e-15);
        assert!((k - 2.0).abs() < 1e-15);
    }

    #[test]
    fn standard_gaussian_over_the_line() {
        let r = integrate(|x| gaussian_pdf(x, 0.0, 1.0), &all_r()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12, "{r:?}");
        let r = integrate(|x| x * x * gaussian_pdf(x, 0.0, 1.0), &all_r()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn polynomial_times_gaussian_up_to_degree_eight() {
        // E[Z^k] = (k - 1)!! for even k, 0 for odd k
        let mut dfact = 1.0;
        for k in 0..=8u32 {
            if k >= 2 && k % 2 == 0 {
                dfact *= (k - 1) as f64;
            }
            let exact = if k % 2 == 0 { dfact } else { 0.0 };
            let r = integrate(|x| x.powi(k as i32) * gaussian_pdf(x, 0.0, 1.0), &all_r()).unwrap();
            assert!((r.value - exact).abs() < 1e-10 * exact.max(1.0), "k={k}: {r:?}");
        }
    }

    #[test]
    fn half_infinite_ranges() {
        let up = QuadratureSpec::new(1.0, f64::INFINITY);
        let r = integrate(|x| (-x).exp(), &up).unwrap();
        assert!((r.value - (-1.0f64).exp()).abs() < 1e-14);
        let down = QuadratureSpec::new(f64::NEG_INFINITY, 0.0);
        let r = integrate(|x| x.exp(), &down).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kink_at_a_break_point() {
        let spec = QuadratureSpec::new(-1.0, 2.0);
        let r = integrate_with_breaks(|x: f64| x.abs().sqrt(), &[0.0], &spec).unwrap();
        let exact = 2.0 / 3.0 * (1.0 + 2f64.powf(1.5));
        assert!((r.value - exact).abs() < 1e-13);
    }

    #[test]
    fn exhausted_subdivisions_are_reported() {
        let mut spec = QuadratureSpec::new(0.0, 1.0).tol(0.0, 1e-15);
        spec.max_subdivisions = 3;
        let r = integrate(|x: f64| (1.0 / x).sin(), &spec);
        assert!(matches!(r, Err(Error::QuadratureFailed { .. })));
    }

    #[test]
    fn empty_range_is_rejected() {
        assert!(integrate(|x| x, &QuadratureSpec::new(1.0, 1.0)).is_err());
    }

    #[test]
    fn normal_cdf_reference_values() {
        // 30-digit references
        for (x, r) in [
            (0.712_712_712_712_713_5, 0.761_988_225_881_507_732_0),
            (-1.0, 0.158_655_253_931_457_051_4),
            (2.5, 0.993_790_334_674_223_864_8),
            (-8.0, 6.220_960_574_271_784_1e-16),
        ] {
            assert!((normal_cdf(x) - r).abs() < 2e-16, "x={x}: {}", normal_cdf(x));
        }
        assert_eq!(normal_cdf(0.0), 0.5);
    }

    #[test]
    fn oscillatory_gaussian_transform() {
        let spec = QuadratureSpec::new(-40.0, 40.0);
        for &w in &[0.5, 1.0, 2.0, 5.0, 10.0] {
            let r = integrate_cos(|x| gaussian_pdf(x, 0.0, 1.0), w, &spec).unwrap();
            assert!((r.value - (-0.5 * w * w).exp()).abs() < 1e-13, "w={w}: {r:?}");
        }
    }

    #[test]
    fn bivariate_gaussian_mass() {
        let rho: f64 = 0.7;
        let norm = 1.0 / (2.0 * std::f64::consts::PI * (1.0 - rho * rho).sqrt());
        let f = |x: f64, y: f64| {
            norm * (-(x * x - 2.0 * rho * x * y + y * y) / (2.0 * (1.0 - rho * rho))).exp()
        };
        let spec = QuadratureSpec::new(-10.0, 10.0).tol(1e-12, 1e-11);
        let r = integrate_2d(f, &spec, &[0.0], (-10.0, 10.0), |x| vec![rho * x], (1e-13, 1e-12)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn zero_integrand() {
        let r = integrate(|_| 0.0, &QuadratureSpec::new(0.0, 1.0)).unwrap();
        assert_eq!(r.value, 0.0);
    }
}
