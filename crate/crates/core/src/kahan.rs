//! Compensated (Kahan-Babuska-Neumaier) summation.
//!
//! Several series in this crate alternate in sign with intermediate terms
//! much larger than the final sum; plain accumulation loses the result to
//! cancellation long before the terms themselves degrade.

/// Running compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
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
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of a slice, in slice order.
pub fn kahan_sum(xs: &[f64]) -> f64 {
    let mut acc = KahanSum::new();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Error-free transformation of `a + b` into `(sum, residual)`.
#[inline]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_tail() {
        // 1 + 1e-16 repeated: plain summation stays at 1.
        let xs = vec![1.0_f64].into_iter().chain(std::iter::repeat(1e-16).take(1000));
        let mut acc = KahanSum::new();
        let mut plain = 0.0;
        for x in xs {
            acc.add(x);
            plain += x;
        }
        assert_eq!(plain, 1.0);
        assert!((acc.value() - (1.0 + 1000.0 * 1e-16)).abs() < 1e-18);
    }

    #[test]
    fn two_sum_is_exact() {
        let (s, e) = two_sum(1e16, 1.0);
        assert_eq!(s, 1e16);
        assert_eq!(e, 1.0);
    }
}
