//! Compensated summation of `f64` terms.

/// Neumaier's improvement of Kahan summation: the running compensation also
/// captures the error when the incoming term is larger than the partial sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Sum of the absolute values of all terms seen so far.
    #[inline]
    pub fn abs_sum(&self) -> f64 {
        self.abs
    }

    /// `sum |x_i| / |sum x_i|`, or infinity when the sum vanishes.
    pub fn condition_number(&self) -> f64 {
        let v = self.value().abs();
        if v == 0.0 {
            if self.abs == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.abs / v).max(1.0)
        }
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        s.extend(iter);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_term_between_large_ones() {
        let s: NeumaierSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.value(), 2.0);
        let naive: f64 = [1.0, 1e100, 1.0, -1e100].iter().sum();
        assert_eq!(naive, 0.0);
    }

    #[test]
    fn condition_of_same_sign_terms_is_one() {
        let s: NeumaierSum = (1..100).map(|i| 1.0 / i as f64).collect();
        assert!(s.condition_number() - 1.0 <= 4.0 * f64::EPSILON);
    }
}
