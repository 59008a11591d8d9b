//! Function representations the operators act on.
//!
//! [`FracPowerSeries`] is a finite series `sum_n a_n (t - a)^{n alpha}` with a
//! single base exponent `alpha` in (0, 1); this class is closed under every
//! operator in the crate. [`SampledSignal`] is a function sampled on a uniform
//! grid, for the quadrature-based operator paths.

use crate::error::{Error, Result};
use crate::kahan::KahanSum;

/// Hard cap on series length; Cauchy products that would exceed it are
/// truncated and flagged, never silently.
pub const MAX_SERIES_LEN: usize = 256;

/// A fractional power series `sum_{n=0}^{M} coeffs[n] (t - origin)^{n alpha}`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FracPowerSeries {
    alpha: f64,
    origin: f64,
    coeffs: Vec<f64>,
    #[serde(skip)]
    truncated: bool,
}

impl FracPowerSeries {
    pub fn new(alpha: f64, origin: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!(
                "series base order must lie in (0, 1), got {alpha}"
            )));
        }
        if coeffs.is_empty() {
            return Err(Error::Domain("series needs at least one coefficient".into()));
        }
        if !origin.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("series data must be finite".into()));
        }
        Ok(Self {
            alpha,
            origin,
            coeffs,
            truncated: false,
        })
    }

    /// The constant function `value` represented in the `alpha` class.
    pub fn constant(alpha: f64, value: f64, origin: f64) -> Result<Self> {
        Self::new(alpha, origin, vec![value])
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: coeffs is non-empty
    }

    /// True if some operation dropped coefficients past [`MAX_SERIES_LEN`].
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub(crate) fn with_truncation_flag(mut self, truncated: bool) -> Self {
        self.truncated = self.truncated || truncated;
        self
    }

    /// Evaluate at `t >= origin` by Horner recursion in `u = (t - origin)^alpha`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= self.origin) {
            return Err(Error::Domain(format!(
                "evaluation point {t} precedes the series origin {}",
                self.origin
            )));
        }
        let u = (t - self.origin).powf(self.alpha);
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        Ok(acc)
    }

    /// Cauchy product. Both factors must share base order and origin; the
    /// result is truncated (and flagged) past [`MAX_SERIES_LEN`].
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let full = self.coeffs.len() + other.coeffs.len() - 1;
        let out_len = full.min(MAX_SERIES_LEN);
        let mut out = vec![0.0; out_len];
        for (m, slot) in out.iter_mut().enumerate() {
            let mut acc = KahanSum::new();
            let lo = (m + 1).saturating_sub(other.coeffs.len());
            let hi = m.min(self.coeffs.len() - 1);
            for k in lo..=hi {
                acc.add(self.coeffs[k] * other.coeffs[m - k]);
            }
            *slot = acc.value();
        }
        Ok(Self {
            alpha: self.alpha,
            origin: self.origin,
            coeffs: out,
            truncated: self.truncated || other.truncated || full > MAX_SERIES_LEN,
        })
    }

    /// Coefficient-wise sum (tests and residual assembly).
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; len];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.coeffs.get(i).copied().unwrap_or(0.0)
                + other.coeffs.get(i).copied().unwrap_or(0.0);
        }
        Ok(Self {
            alpha: self.alpha,
            origin: self.origin,
            coeffs: out,
            truncated: self.truncated || other.truncated,
        })
    }

    /// Scalar multiple.
    pub fn scale(&self, c: f64) -> Self {
        Self {
            alpha: self.alpha,
            origin: self.origin,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            truncated: self.truncated,
        }
    }

    /// Sample onto a uniform grid over [origin, b].
    pub fn sample(&self, b: f64, n_points: usize) -> Result<SampledSignal> {
        if !(b > self.origin) {
            return Err(Error::Domain(format!(
                "sample endpoint {b} must exceed the origin {}",
                self.origin
            )));
        }
        if n_points < 2 {
            return Err(Error::Domain("sampling needs at least 2 points".into()));
        }
        let h = (b - self.origin) / (n_points - 1) as f64;
        let values = (0..n_points)
            .map(|i| self.eval(self.origin + i as f64 * h))
            .collect::<Result<Vec<_>>>()?;
        SampledSignal::new(self.origin, b, values)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if (self.alpha - other.alpha).abs() > 1e-12 || (self.origin - other.origin).abs() > 1e-12 {
            return Err(Error::Mismatch(format!(
                "base order/origin differ: ({}, {}) vs ({}, {})",
                self.alpha, self.origin, other.alpha, other.origin
            )));
        }
        Ok(())
    }
}

/// A function sampled on the uniform grid `t_i = a + i h`, `h = (b-a)/(n-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    a: f64,
    b: f64,
    values: Vec<f64>,
}

impl SampledSignal {
    pub fn new(a: f64, b: f64, values: Vec<f64>) -> Result<Self> {
        if !(a < b) {
            return Err(Error::Domain(format!("need a < b, got [{a}, {b}]")));
        }
        if values.len() < 2 {
            return Err(Error::Domain("a signal needs at least 2 samples".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("signal values must be finite".into()));
        }
        Ok(Self { a, b, values })
    }

    /// Sample a closure on a uniform grid.
    pub fn from_fn(a: f64, b: f64, n_points: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n_points < 2 {
            return Err(Error::Domain("a signal needs at least 2 samples".into()));
        }
        if !(a < b) {
            return Err(Error::Domain(format!("need a < b, got [{a}, {b}]")));
        }
        let h = (b - a) / (n_points - 1) as f64;
        let values: Vec<f64> = (0..n_points).map(|i| f(a + i as f64 * h)).collect();
        Self::new(a, b, values)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n_points(&self) -> usize {
        self.values.len()
    }

    pub fn step(&self) -> f64 {
        (self.b - self.a) / (self.values.len() - 1) as f64
    }

    pub fn t(&self, i: usize) -> f64 {
        self.a + i as f64 * self.step()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Replace the value vector, keeping the grid.
    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self {
            a: self.a,
            b: self.b,
            values,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Trapezoid-weighted grid L1 norm.
    pub fn l1_norm(&self) -> f64 {
        let h = self.step();
        let n = self.values.len();
        let mut acc = KahanSum::new();
        acc.add(0.5 * self.values[0].abs());
        for v in &self.values[1..n - 1] {
            acc.add(v.abs());
        }
        acc.add(0.5 * self.values[n - 1].abs());
        h * acc.value()
    }

    /// Write `t,value` CSV (header included).
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,value")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{}", self.t(i), v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fps(alpha: f64, coeffs: &[f64]) -> FracPowerSeries {
        FracPowerSeries::new(alpha, 0.0, coeffs.to_vec()).unwrap()
    }

    #[test]
    fn eval_basics() {
        assert_eq!(fps(0.5, &[1.0]).eval(7.0).unwrap(), 1.0);
        assert_eq!(fps(0.5, &[0.0, 1.0]).eval(4.0).unwrap(), 2.0);
        assert_eq!(fps(0.5, &[1.0, 2.0, 3.0]).eval(1.0).unwrap(), 6.0);
    }

    #[test]
    fn eval_rejects_points_before_origin() {
        let s = FracPowerSeries::new(0.5, 1.0, vec![1.0]).unwrap();
        assert!(s.eval(0.5).is_err());
        assert_eq!(s.eval(1.0).unwrap(), 1.0);
    }

    #[test]
    fn multiply_basics() {
        let got = fps(0.5, &[1.0, 1.0]).multiply(&fps(0.5, &[1.0, 1.0])).unwrap();
        assert_eq!(got.coeffs(), &[1.0, 2.0, 1.0]);

        let s = fps(0.5, &[3.0, -1.0, 2.0]);
        let id = fps(0.5, &[1.0]);
        assert_eq!(s.multiply(&id).unwrap().coeffs(), s.coeffs());

        let u = fps(0.5, &[0.0, 1.0]);
        assert_eq!(u.multiply(&u).unwrap().coeffs(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn multiply_mismatch() {
        let a = fps(0.5, &[1.0]);
        let b = fps(0.25, &[1.0]);
        assert!(matches!(a.multiply(&b), Err(Error::Mismatch(_))));
    }

    #[test]
    fn multiply_truncates_with_flag() {
        let long = fps(0.5, &vec![1.0; 200]);
        let got = long.multiply(&long).unwrap();
        assert_eq!(got.len(), MAX_SERIES_LEN);
        assert!(got.truncated());
    }

    #[test]
    fn sample_basics() {
        let ones = fps(0.5, &[1.0]).sample(1.0, 5).unwrap();
        assert_eq!(ones.values(), &[1.0; 5]);

        let root = fps(0.5, &[0.0, 1.0]).sample(1.0, 3).unwrap();
        assert!((root.values()[1] - 0.707_106_781_186_547_6).abs() < 1e-15);
        assert_eq!(root.values()[2], 1.0);

        let two = fps(0.5, &[2.0]).sample(2.0, 2).unwrap();
        assert_eq!(two.values(), &[2.0, 2.0]);
    }

    #[test]
    fn serde_schema_round_trip() {
        let s = fps(0.5, &[1.0, 2.0]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"alpha":0.5,"origin":0.0,"coeffs":[1.0,2.0]}"#);
        let back: FracPowerSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn signal_norms() {
        let sig = SampledSignal::new(0.0, 1.0, vec![1.0, -1.0, 1.0]).unwrap();
        assert_eq!(sig.sup_norm(), 1.0);
        assert!((sig.l1_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn signal_csv_has_header() {
        let sig = SampledSignal::new(0.0, 1.0, vec![0.0, 0.5]).unwrap();
        let mut buf = Vec::new();
        sig.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,value\n"));
        assert!(text.contains("1,0.5"));
    }
}
