//! Computational verification of the operator family's proven properties:
//! the Laplace-transform closed form against numerical transforms, the
//! semigroup law in the iteration order, and boundedness in the grid sup and
//! L1 norms with the explicit constant.
//!
//! These checks validate the implementation, not the theorems; a failure is
//! treated as a code defect.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classical::Multiplier;
use crate::error::{Error, Result};
use crate::fps::{FracPowerSeries, SampledSignal};
use crate::iterated::{
    iab_apply_fps, iab_apply_sampled, majorant_peak, series_coefficients, IteratedOrder,
};
use crate::kahan::KahanSum;
use crate::specfun::{self, Tolerance};

/// Result of a numerical Laplace transform over a finite window.
#[derive(Debug, Clone, Copy)]
pub struct LaplaceNumeric {
    /// Composite-Simpson value of the windowed integral.
    pub value: f64,
    /// Magnitude estimate of the truncated tail, `|f(b)| e^{-s b} / s`.
    pub tail_estimate: f64,
}

/// Closed-form Laplace transform of the differintegral:
/// `((1-alpha)/B + alpha/B s^{-alpha})^beta * fhat(s)`.
pub fn laplace_closed_form(
    ord: IteratedOrder,
    b: &Multiplier,
    fhat: impl Fn(f64) -> f64,
    s: f64,
) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("transform variable must be positive, got {s}")));
    }
    Ok(laplace_multiplier(ord, b, s) * fhat(s))
}

fn laplace_multiplier(ord: IteratedOrder, b: &Multiplier, s: f64) -> f64 {
    let alpha = ord.alpha();
    let b_alpha = b.eval(alpha);
    let base = (1.0 - alpha) / b_alpha + alpha / b_alpha * s.powf(-alpha);
    base.powf(ord.beta())
}

/// Windowed Laplace transform of a sampled signal starting at 0, by composite
/// Simpson on the signal's own grid, with a reported tail estimate.
pub fn laplace_numeric(sig: &SampledSignal, s: f64) -> Result<LaplaceNumeric> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("transform variable must be positive, got {s}")));
    }
    if sig.a() != 0.0 {
        return Err(Error::Domain(format!(
            "transform window must start at 0, got {}",
            sig.a()
        )));
    }
    let weighted: Vec<f64> = sig
        .values()
        .iter()
        .enumerate()
        .map(|(i, f)| (-s * sig.t(i)).exp() * f)
        .collect();
    let value = simpson(&weighted, sig.step());
    let tail_estimate = sig.values()[sig.n_points() - 1].abs() * (-s * sig.b()).exp() / s;
    Ok(LaplaceNumeric { value, tail_estimate })
}

/// Composite Simpson over a uniform grid; odd interval counts finish with a
/// 3/8 panel.
fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    assert!(n >= 3, "Simpson needs at least 3 nodes");
    let intervals = n - 1;
    let (simpson_end, three_eighth) = if intervals % 2 == 0 {
        (n - 1, false)
    } else {
        (n - 4, true)
    };
    let mut acc = KahanSum::new();
    if simpson_end >= 2 {
        acc.add(values[0]);
        for (i, v) in values[1..simpson_end].iter().enumerate() {
            acc.add(if i % 2 == 0 { 4.0 * v } else { 2.0 * v });
        }
        acc.add(values[simpson_end]);
    }
    let mut total = h / 3.0 * acc.value();
    if three_eighth {
        let m = n - 4;
        total += 3.0 * h / 8.0
            * (values[m] + 3.0 * values[m + 1] + 3.0 * values[m + 2] + values[m + 3]);
    }
    total
}

/// Max absolute coefficient difference between composing orders
/// `(alpha, gamma)` then `(alpha, beta)` and applying `(alpha, beta + gamma)`
/// directly, over the common prefix both paths compute exactly.
pub fn semigroup_residual(
    alpha: f64,
    beta: f64,
    gamma: f64,
    b: &Multiplier,
    f: &FracPowerSeries,
    tol: &Tolerance,
) -> Result<f64> {
    semigroup_residual_parts(alpha, beta, gamma, b, f, tol).map(|(residual, _)| residual)
}

/// Residual plus the magnitude of the largest coefficient compared; near
/// alpha = 1 with strongly negative total order the coefficients reach 1e8
/// and only the scale-relative residual is meaningful in f64.
fn semigroup_residual_parts(
    alpha: f64,
    beta: f64,
    gamma: f64,
    b: &Multiplier,
    f: &FracPowerSeries,
    tol: &Tolerance,
) -> Result<(f64, f64)> {
    let inner = iab_apply_fps(IteratedOrder::new(alpha, gamma)?, b, f, tol)?;
    let composed = iab_apply_fps(IteratedOrder::new(alpha, beta)?, b, &inner, tol)?;
    let direct = iab_apply_fps(IteratedOrder::new(alpha, beta + gamma)?, b, f, tol)?;
    let n = composed.len().min(direct.len()).min(inner.len());
    let mut worst = 0.0_f64;
    let mut scale = 0.0_f64;
    for m in 0..n {
        worst = worst.max((composed.coeffs()[m] - direct.coeffs()[m]).abs());
        scale = scale.max(direct.coeffs()[m].abs());
    }
    Ok((worst, scale))
}

/// The explicit boundedness constant
/// `K = ((1-alpha)/B)^beta sum_k |binom(beta,k)| (alpha L^alpha / (1-alpha))^k / Gamma(k alpha + 1)`
/// on an interval of length `b_end - a`; the same constant bounds both the
/// sup-norm and L1-norm operator ratios.
pub fn bound_constant(
    ord: IteratedOrder,
    b: &Multiplier,
    a: f64,
    b_end: f64,
    tol: &Tolerance,
) -> Result<f64> {
    if !(b_end > a) {
        return Err(Error::Domain(format!("need b > a, got [{a}, {b_end}]")));
    }
    let interval = b_end - a;
    let sc = series_coefficients(ord, b, interval, tol)?;
    let alpha = ord.alpha();
    let mut acc = KahanSum::new();
    for (k, ck) in sc.c().iter().enumerate() {
        if *ck == 0.0 {
            continue;
        }
        let ka = k as f64 * alpha;
        let ln_term = ck.abs().ln() + ka * interval.ln() - specfun::ln_gamma(ka + 1.0);
        acc.add(ln_term.exp());
    }
    Ok(acc.value())
}

/// Margins from one boundedness check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BoundEntry {
    pub sup_ratio: f64,
    pub l1_ratio: f64,
    /// `K - ratio`, nonnegative when the bound holds.
    pub sup_margin: f64,
    pub l1_margin: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct BoundReport {
    pub k: f64,
    pub entries: Vec<BoundEntry>,
}

/// Empirically verify the norm bounds for a family of series-class test
/// functions on [a, b]. Returns per-function margins; a ratio past
/// `K (1 + 1e-6)` is an implementation bug and comes back as
/// [`Error::BoundViolation`].
pub fn verify_bound(
    ord: IteratedOrder,
    b: &Multiplier,
    a: f64,
    b_end: f64,
    test_functions: &[FracPowerSeries],
    n_points: usize,
    tol: &Tolerance,
) -> Result<BoundReport> {
    let k = bound_constant(ord, b, a, b_end, tol)?;
    let slack = k * (1.0 + 1e-6);
    let mut entries = Vec::with_capacity(test_functions.len());
    for (idx, f) in test_functions.iter().enumerate() {
        if f.coeffs().iter().all(|&c| c == 0.0) {
            entries.push(BoundEntry {
                sup_ratio: 0.0,
                l1_ratio: 0.0,
                sup_margin: k,
                l1_margin: k,
            });
            continue;
        }
        let mapped = iab_apply_fps(ord, b, f, tol)?;
        let f_sig = f.sample(b_end, n_points)?;
        let mapped_sig = mapped.sample(b_end, n_points)?;
        let sup_ratio = mapped_sig.sup_norm() / f_sig.sup_norm();
        let l1_ratio = mapped_sig.l1_norm() / f_sig.l1_norm();
        for (ratio, which) in [(sup_ratio, "sup"), (l1_ratio, "l1")] {
            if ratio > slack {
                return Err(Error::BoundViolation {
                    ratio,
                    bound: k,
                    detail: format!("{which}-norm ratio, test function #{idx}"),
                });
            }
        }
        entries.push(BoundEntry {
            sup_ratio,
            l1_ratio,
            sup_margin: k - sup_ratio,
            l1_margin: k - l1_ratio,
        });
    }
    Ok(BoundReport { k, entries })
}

/// One verified quantity inside a suite report.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SuiteCheck {
    pub input: String,
    pub expected: f64,
    pub got: f64,
    pub rel_err: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Aggregated results of one verification suite.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<SuiteCheck>,
    pub passed: bool,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        Self {
            suite: suite.into(),
            checks: Vec::new(),
            passed: true,
        }
    }

    /// Record a |got - expected| <= threshold check (absolute).
    fn check_abs(&mut self, input: impl Into<String>, expected: f64, got: f64, threshold: f64) {
        let err = (got - expected).abs();
        let pass = err <= threshold;
        self.passed &= pass;
        self.checks.push(SuiteCheck {
            input: input.into(),
            expected,
            got,
            rel_err: err,
            threshold,
            pass,
        });
    }

    /// Record a relative-error check.
    fn check_rel(&mut self, input: impl Into<String>, expected: f64, got: f64, threshold: f64) {
        let rel = if expected == 0.0 {
            got.abs()
        } else {
            ((got - expected) / expected).abs()
        };
        let pass = rel <= threshold;
        self.passed &= pass;
        self.checks.push(SuiteCheck {
            input: input.into(),
            expected,
            got,
            rel_err: rel,
            threshold,
            pass,
        });
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// A time-domain test function paired with its analytic transform.
pub struct LaplaceTestFunction {
    pub label: &'static str,
    pub f: fn(f64) -> f64,
    pub fhat: fn(f64) -> f64,
}

pub const LAPLACE_TEST_FUNCTIONS: [LaplaceTestFunction; 3] = [
    LaplaceTestFunction {
        label: "1",
        f: |_| 1.0,
        fhat: |s| 1.0 / s,
    },
    LaplaceTestFunction {
        label: "t",
        f: |t| t,
        fhat: |s| 1.0 / (s * s),
    },
    LaplaceTestFunction {
        label: "sqrt(t)",
        f: |t| t.sqrt(),
        // Gamma(1.5) / s^{3/2}
        fhat: |s| 0.886_226_925_452_758 / s.powf(1.5),
    },
];

/// Transform comparison for one (order, test function) pair over several `s`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LaplaceCheckReport {
    pub s_values: Vec<f64>,
    pub closed_form: Vec<f64>,
    pub numeric: Vec<f64>,
    pub rel_errors: Vec<f64>,
    pub t_horizon: f64,
}

const LAPLACE_GRID: usize = 4001;
const HORIZON_CANDIDATES: [f64; 12] = [20.0, 16.0, 12.0, 10.0, 8.0, 7.0, 6.0, 5.0, 4.0, 3.0, 2.5, 2.0];

/// Pick the transform window. Two forces shrink it below the default 20:
///
/// * cancellation noise — the operator series on [0, T] has intermediate
///   terms up to the majorant peak, and their f64 rounding must stay well
///   under the value being checked;
/// * resolution — for large `s` the integrand mass sits near zero, and a
///   short window spends the fixed grid where it matters.
fn choose_horizon(
    ord: IteratedOrder,
    b: &Multiplier,
    f: &LaplaceTestFunction,
    closed_abs: f64,
    s: f64,
) -> f64 {
    let preferred = (18.0 / s).clamp(2.0, 20.0);
    let mut fallback = *HORIZON_CANDIDATES.last().unwrap();
    for &t in &HORIZON_CANDIDATES {
        if t > preferred + 1e-9 {
            continue;
        }
        fallback = t;
        let noise = majorant_peak(ord, b, t) * (f.f)(t).abs().max(1.0) * 1e-13;
        if noise <= 1e-4 * closed_abs {
            return t;
        }
    }
    fallback
}

/// Numerical-vs-closed-form transform comparison for one order and test
/// function. The windowed integral is completed with a three-term
/// integration-by-parts tail (value, slope, curvature at the window edge).
pub fn laplace_transform_check(
    ord: IteratedOrder,
    b: &Multiplier,
    f: &LaplaceTestFunction,
    s_values: &[f64],
    tol: &Tolerance,
) -> Result<LaplaceCheckReport> {
    let mut cache: HashMap<u64, SampledSignal> = HashMap::new();
    let mut closed_col = Vec::new();
    let mut numeric_col = Vec::new();
    let mut rel_col = Vec::new();
    let mut horizon = 0.0_f64;
    for &s in s_values {
        let closed = laplace_closed_form(ord, b, f.fhat, s)?;
        let t_end = choose_horizon(ord, b, f, closed.abs(), s);
        horizon = horizon.max(t_end);
        let g = match cache.entry(t_end.to_bits()) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => {
                let sig = SampledSignal::from_fn(0.0, t_end, LAPLACE_GRID, f.f)?;
                e.insert(iab_apply_sampled(ord, b, &sig, tol)?)
            }
        };
        let windowed = laplace_numeric(g, s)?;
        let numeric = windowed.value + tail_completion(g, s);
        closed_col.push(closed);
        numeric_col.push(numeric);
        rel_col.push(((numeric - closed) / closed).abs());
    }
    Ok(LaplaceCheckReport {
        s_values: s_values.to_vec(),
        closed_form: closed_col,
        numeric: numeric_col,
        rel_errors: rel_col,
        t_horizon: horizon,
    })
}

/// Signed tail of `int_T^inf e^{-s t} g(t) dt` by integration by parts at the
/// window edge: `e^{-sT} (g/s + g'/s^2 + g''/s^3)`.
///
/// The derivatives come from wide-stride one-sided stencils. The signal
/// carries quadrature noise of roughly 1e-5 relative; grid-step differences
/// would amplify that by 1/h^2 and swamp the correction, while a stride of
/// T/32 keeps both the noise amplification and the stencil truncation far
/// below what the exponential prefactor can carry.
fn tail_completion(g: &SampledSignal, s: f64) -> f64 {
    let v = g.values();
    let n = v.len();
    let stride = ((n - 1) / 32).max(1);
    let w = stride as f64 * g.step();
    let g0 = v[n - 1];
    let g1 = v[n - 1 - stride];
    let g2 = v[n - 1 - 2 * stride];
    let d1 = (3.0 * g0 - 4.0 * g1 + g2) / (2.0 * w);
    let d2 = (g0 - 2.0 * g1 + g2) / (w * w);
    (-s * g.b()).exp() * (g0 / s + d1 / (s * s) + d2 / (s * s * s))
}

/// Theorem-check suite: transform identity over a grid of orders, test
/// functions, and transform points.
pub fn laplace_suite(b: &Multiplier, tol: &Tolerance) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("laplace");
    let s_values = [1.0, 2.0, 4.0, 8.0];
    for &alpha in &[0.3, 0.5, 0.7] {
        for &beta in &[-1.0, 0.5, 1.0, 2.0] {
            let ord = IteratedOrder::new(alpha, beta)?;
            for f in &LAPLACE_TEST_FUNCTIONS {
                let check = laplace_transform_check(ord, b, f, &s_values, tol)?;
                for (i, &s) in s_values.iter().enumerate() {
                    report.check_rel(
                        format!(
                            "alpha={alpha} beta={beta} f={} s={s} T={}",
                            f.label, check.t_horizon
                        ),
                        check.closed_form[i],
                        check.numeric[i],
                        1e-3,
                    );
                }
            }
        }
    }
    Ok(report)
}

/// Theorem-check suite: semigroup law on random orders and series, plus the
/// inverse-pair special case.
pub fn semigroup_suite(
    b: &Multiplier,
    instances: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("semigroup");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..instances {
        let alpha = rng.gen_range(0.1..=0.9);
        let beta = rng.gen_range(-2.0..=2.0);
        let gamma = rng.gen_range(-2.0..=2.0);
        let len = rng.gen_range(1..=10);
        let coeffs: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let f = FracPowerSeries::new(alpha, 0.0, coeffs)?;
        let (residual, scale) = semigroup_residual_parts(alpha, beta, gamma, b, &f, tol)?;
        report.check_abs(
            format!("compose alpha={alpha:.3} beta={beta:.3} gamma={gamma:.3} len={len}"),
            0.0,
            residual / scale.max(1.0),
            1e-9,
        );
        if i % 4 == 0 {
            // inverse pair: beta then -beta recovers the input
            let ord = IteratedOrder::new(alpha, beta)?;
            let forward = iab_apply_fps(ord, b, &f, tol)?;
            let back = iab_apply_fps(ord.inverse(), b, &forward, tol)?;
            let mut worst = 0.0_f64;
            for m in 0..f.len() {
                worst = worst.max((back.coeffs()[m] - f.coeffs()[m]).abs());
            }
            report.check_abs(
                format!("inverse alpha={alpha:.3} beta={beta:.3} len={len}"),
                0.0,
                worst,
                1e-9,
            );
        }
    }
    Ok(report)
}

/// Theorem-check suite: norm-ratio bounds with the explicit constant, its
/// exact special values, term counts, and monotonicity in the interval.
pub fn bounds_suite(
    b: &Multiplier,
    n_functions: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("bounds");

    // K(beta = 0) is exactly 1
    let k0 = bound_constant(IteratedOrder::new(0.5, 0.0)?, b, 0.0, 1.0, tol)?;
    report.check_abs("K at beta=0", 1.0, k0, 0.0);

    // alpha -> 0 probe
    let k_eps = bound_constant(IteratedOrder::new(1e-9, 1.3)?, b, 0.0, 1.0, tol)?;
    report.check_abs("K at alpha=1e-9", 1.0, k_eps, 1e-6);

    // worked finite sum: two nonzero terms at beta = 1
    let k1 = bound_constant(IteratedOrder::new(0.5, 1.0)?, b, 0.0, 1.0, tol)?;
    report.check_abs("K at alpha=0.5 beta=1", 1.064_189_583_547_756_3, k1, 1e-12);

    // integer beta terminates with exactly beta + 1 weights
    for n in 1..=8_usize {
        let sc = series_coefficients(IteratedOrder::new(0.4, n as f64)?, b, 1.0, tol)?;
        report.check_abs(format!("terms at beta={n}"), (n + 1) as f64, sc.c().len() as f64, 0.0);
    }

    // K monotone nondecreasing in the interval length for beta >= 0
    for &alpha in &[0.3, 0.6] {
        for &beta in &[0.5, 1.3, 2.0] {
            let ord = IteratedOrder::new(alpha, beta)?;
            let mut prev = 0.0;
            let mut monotone: f64 = 1.0;
            for &len in &[0.5, 1.0, 2.0, 4.0] {
                let k = bound_constant(ord, b, 0.0, len, tol)?;
                if k + 1e-12 < prev {
                    monotone = 0.0;
                }
                prev = k;
            }
            report.check_abs(
                format!("K monotone in interval alpha={alpha} beta={beta}"),
                1.0,
                monotone,
                0.0,
            );
        }
    }

    // random continuous series functions against the proven inequality
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphas = [0.1, 0.3, 0.5, 0.7, 0.9];
    for i in 0..n_functions {
        let alpha = alphas[i % alphas.len()];
        let beta = rng.gen_range(-2.0..=2.0);
        let len = rng.gen_range(1..=8);
        let coeffs: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let f = FracPowerSeries::new(alpha, 0.0, coeffs)?;
        let ord = IteratedOrder::new(alpha, beta)?;
        match verify_bound(ord, b, 0.0, 1.0, std::slice::from_ref(&f), 801, tol) {
            Ok(rep) => {
                let e = &rep.entries[0];
                let worst = e.sup_ratio.max(e.l1_ratio);
                report.check_abs(
                    format!("ratio alpha={alpha} beta={beta:.3} #{i}"),
                    0.0,
                    (worst - rep.k * (1.0 + 1e-6)).max(0.0),
                    0.0,
                );
            }
            Err(err) => {
                report.check_abs(format!("ratio alpha={alpha} beta={beta:.3} #{i} ({err})"), 0.0, 1.0, 0.0);
            }
        }
    }
    Ok(report)
}

/// Reduction suite: the special orders where the operator collapses to a
/// known one (identity, iterated AB integrals, the Mittag-Leffler-kernel
/// derivative and its iterates).
pub fn reductions_suite(b: &Multiplier, tol: &Tolerance) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("reductions");

    // alpha = 0: identity, bitwise on the sampled path
    let sig = SampledSignal::from_fn(0.0, 1.0, 257, |t| (3.0 * t).sin() + 0.25)?;
    let out = iab_apply_sampled(IteratedOrder::new(0.0, 2.7)?, b, &sig, tol)?;
    let drift = sig
        .values()
        .iter()
        .zip(out.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0_f64, f64::max);
    report.check_abs("identity: alpha=0 (sampled)", 0.0, drift, 0.0);

    // beta = 0: identity on both paths
    let out = iab_apply_sampled(IteratedOrder::new(0.6, 0.0)?, b, &sig, tol)?;
    let drift = sig
        .values()
        .iter()
        .zip(out.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0_f64, f64::max);
    report.check_abs("identity: beta=0 (sampled)", 0.0, drift, 0.0);
    let f = FracPowerSeries::new(0.6, 0.0, vec![1.0, -0.5, 0.25])?;
    let out = iab_apply_fps(IteratedOrder::new(0.6, 0.0)?, b, &f, tol)?;
    let drift = f
        .coeffs()
        .iter()
        .zip(out.coeffs())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0_f64, f64::max);
    report.check_abs("identity: beta=0 (series)", 0.0, drift, 0.0);

    // integer beta: series path vs literal n-fold AB-integral composition
    for &alpha in &[0.3, 0.5, 0.7] {
        for n in 1..=8_usize {
            let ord = IteratedOrder::new(alpha, n as f64)?;
            for (label, f) in [
                ("1", FracPowerSeries::constant(alpha, 1.0, 0.0)?),
                ("mixed", FracPowerSeries::new(alpha, 0.0, vec![1.0, -0.5, 0.25])?),
            ] {
                let (series, composed) = crate::iterated::iab_iterate_check(ord, b, &f)?;
                let mut worst = 0.0_f64;
                for m in 0..series.len().min(composed.len()) {
                    worst = worst.max((series.coeffs()[m] - composed.coeffs()[m]).abs());
                }
                report.check_abs(
                    format!("n-fold: alpha={alpha} n={n} f={label}"),
                    0.0,
                    worst,
                    1e-11,
                );
            }
        }
    }

    // beta = -1 equals the Mittag-Leffler-kernel derivative closed form
    let one = FracPowerSeries::constant(0.5, 1.0, 0.0)?;
    let series = iab_apply_fps(IteratedOrder::new(0.5, -1.0)?, b, &one, tol)?;
    let mut worst = 0.0_f64;
    for i in 0..=100 {
        let t = i as f64 / 100.0;
        let want = 2.0 * specfun::mittag_leffler(0.5, -t.sqrt(), tol)?;
        worst = worst.max((series.eval(t)? - want).abs());
    }
    report.check_abs("ml-kernel derivative: series", 0.0, worst, 1e-9);

    let ones = SampledSignal::from_fn(0.0, 1.0, 2001, |_| 1.0)?;
    let sampled = iab_apply_sampled(IteratedOrder::new(0.5, -1.0)?, b, &ones, tol)?;
    let mut worst = 0.0_f64;
    for i in 0..ones.n_points() {
        let want = 2.0 * specfun::mittag_leffler(0.5, -sampled.t(i).sqrt(), tol)?;
        worst = worst.max((sampled.values()[i] - want).abs());
    }
    report.check_abs("ml-kernel derivative: sampled N=2001", 0.0, worst, 1e-3);

    // beta = -n equals the n-fold composition of beta = -1
    let f = FracPowerSeries::new(0.5, 0.0, vec![1.0, -0.3, 0.2])?;
    for n in 2..=3_usize {
        let direct = iab_apply_fps(IteratedOrder::new(0.5, -(n as f64))?, b, &f, tol)?;
        let mut composed = f.clone();
        for _ in 0..n {
            composed = iab_apply_fps(IteratedOrder::new(0.5, -1.0)?, b, &composed, tol)?;
        }
        let prefix = direct.len().min(composed.len()).min(f.len() + 20);
        let mut worst = 0.0_f64;
        for m in 0..prefix {
            worst = worst.max((direct.coeffs()[m] - composed.coeffs()[m]).abs());
        }
        report.check_abs(format!("iterated derivative: n={n}"), 0.0, worst, 1e-9);
    }

    Ok(report)
}
