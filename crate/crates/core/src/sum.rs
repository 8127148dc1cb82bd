//! Compensated (Kahan–Babuška) accumulation.

use num_complex::Complex64;

/// Neumaier's variant of Kahan summation. Order of `add` calls is the
/// order of accumulation; results are deterministic for a fixed order.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.carry += (self.sum - t) + value;
        } else {
            self.carry += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Componentwise compensated sum of complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl CompensatedComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: Complex64) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_sum() {
        let terms = [1.0, 1e-16, 1e-16, 1e-16, 1e-16, -1.0];
        let naive: f64 = terms.iter().sum();
        let comp: CompensatedSum = terms.iter().copied().collect();
        assert_eq!(naive, 0.0);
        assert!((comp.value() - 4e-16).abs() < 1e-30);
    }

    #[test]
    fn large_then_small_cancellation() {
        let comp: CompensatedSum = [1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(comp.value(), 1.0);
    }
}
