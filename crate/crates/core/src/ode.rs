//! Series solvers for two differintegral equations in the iterated-AB model:
//!
//! * the quadratic equation `I^(alpha,beta) f = P + Q f + R f^2`, solved by a
//!   coefficient recurrence after fixing the leading coefficient from the
//!   quadratic's root (an explicit branch choice), and
//! * the relaxation equation `D^(alpha,beta) f = -C f + q(t)` driven by a
//!   forcing series, the model for a fractor responding in a circuit.
//!
//! Both solvers verify themselves: the residual is recomputed through the
//! operator and series product only, never through the recurrence that built
//! the solution.

use crate::classical::{gamma_ratio, Multiplier};
use crate::error::{Error, Result};
use crate::fps::FracPowerSeries;
use crate::iterated::{coefficient_run, iab_apply_fps, IteratedOrder};
use crate::kahan::KahanSum;
use crate::specfun::Tolerance;

/// Root choice for the quadratic's leading coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        }
    }
}

/// Parameters of `I^(alpha,beta) f = constant + linear f + quadratic f^2`.
#[derive(Debug, Clone)]
pub struct QuadraticParams {
    pub constant: f64,
    pub linear: f64,
    pub quadratic: f64,
    /// Root choice for the leading coefficient; `None` picks the root of
    /// smaller magnitude (continuous with the zero solution as the constant
    /// term vanishes).
    pub branch: Option<Branch>,
    /// Truncation order M of the solution series.
    pub truncation: usize,
}

impl QuadraticParams {
    pub fn new(constant: f64, linear: f64, quadratic: f64) -> Self {
        Self {
            constant,
            linear,
            quadratic,
            branch: None,
            truncation: 40,
        }
    }
}

/// Parameters of `D^(alpha,beta) f = -damping * f + forcing(t)`.
#[derive(Debug, Clone)]
pub struct RelaxationParams {
    pub damping: f64,
    pub forcing: FracPowerSeries,
    pub truncation: usize,
}

impl RelaxationParams {
    pub fn new(damping: f64, forcing: FracPowerSeries) -> Self {
        Self {
            damping,
            forcing,
            truncation: 40,
        }
    }
}

/// A solved instance: the series, its operator-path residual, and the branch
/// that fixed the leading coefficient (quadratic only).
#[derive(Debug, Clone)]
pub struct SeriesSolution {
    pub solution: FracPowerSeries,
    pub residual_coeffs: Vec<f64>,
    pub branch_used: Option<Branch>,
}

impl SeriesSolution {
    pub fn residual_max(&self) -> f64 {
        self.residual_coeffs.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// `|a_M / a_{M-1}|`, a crude convergence signal for the formal series.
    pub fn decay_ratio(&self) -> f64 {
        let c = self.solution.coeffs();
        let n = c.len();
        if n < 2 || c[n - 2] == 0.0 {
            return f64::NAN;
        }
        (c[n - 1] / c[n - 2]).abs()
    }
}

/// An equation for [`residual_check`] to test a candidate against.
#[derive(Debug, Clone)]
pub enum Equation<'a> {
    Quadratic(&'a QuadraticParams),
    Relaxation(&'a RelaxationParams),
}

fn check_alpha(ord: IteratedOrder) -> Result<()> {
    if ord.alpha() == 0.0 {
        return Err(Error::Domain(
            "series solvers need alpha in (0, 1); alpha = 0 makes the ansatz degenerate".into(),
        ));
    }
    Ok(())
}

/// `((1 - alpha)/B(alpha))^beta`, the operator's identity-term weight.
fn identity_weight(ord: IteratedOrder, b: &Multiplier) -> f64 {
    ((1.0 - ord.alpha()) / b.eval(ord.alpha())).powf(ord.beta())
}

/// Solve the quadratic equation by the series recurrence.
pub fn solve_quadratic(
    ord: IteratedOrder,
    b: &Multiplier,
    params: &QuadraticParams,
) -> Result<SeriesSolution> {
    check_alpha(ord)?;
    if params.quadratic == 0.0 {
        return Err(Error::LinearDegenerate);
    }
    let alpha = ord.alpha();
    let lam = identity_weight(ord, b);
    let disc = (lam - params.linear).powi(2) - 4.0 * params.constant * params.quadratic;
    if disc < 0.0 {
        return Err(Error::Discriminant { value: disc });
    }
    let root = disc.sqrt();
    let a0_for = |branch: Branch| match branch {
        Branch::Plus => (lam - params.linear + root) / (2.0 * params.quadratic),
        Branch::Minus => (lam - params.linear - root) / (2.0 * params.quadratic),
    };
    let branch = params.branch.unwrap_or_else(|| {
        if a0_for(Branch::Plus).abs() <= a0_for(Branch::Minus).abs() {
            Branch::Plus
        } else {
            Branch::Minus
        }
    });
    let a0 = a0_for(branch);
    let denom = lam - params.linear - 2.0 * params.quadratic * a0;
    if denom.abs() <= 1e-14 {
        return Err(Error::Resonance { denominator: denom });
    }

    let m_max = params.truncation;
    let c = coefficient_run(ord, b, m_max + 1);
    let mut a = Vec::with_capacity(m_max + 1);
    a.push(a0);
    for m in 1..=m_max {
        // nonlinear feedback from lower orders
        let mut s1 = KahanSum::new();
        for k in 1..m {
            s1.add(a[k] * a[m - k]);
        }
        // the operator's action on lower orders
        let mut s2 = KahanSum::new();
        for k in 1..=m {
            let l = m - k;
            let ratio = gamma_ratio(l as f64 * alpha + 1.0, m as f64 * alpha + 1.0);
            s2.add(a[l] * c[k] * ratio);
        }
        a.push((params.quadratic * s1.value() - s2.value()) / denom);
    }
    let solution = FracPowerSeries::new(alpha, 0.0, a)?;
    let residual_coeffs = residual_check(
        ord,
        b,
        &solution,
        &Equation::Quadratic(params),
        &Tolerance::default(),
    )?;
    Ok(SeriesSolution {
        solution,
        residual_coeffs,
        branch_used: Some(branch),
    })
}

/// Solve the linear equation `I^(alpha,beta) f = constant + linear f`: the
/// degenerate quadratic, whose root formula would divide by zero.
pub fn solve_linear(
    ord: IteratedOrder,
    b: &Multiplier,
    constant: f64,
    linear: f64,
    truncation: usize,
) -> Result<SeriesSolution> {
    check_alpha(ord)?;
    let alpha = ord.alpha();
    let lam = identity_weight(ord, b);
    let denom = lam - linear;
    if denom.abs() <= 1e-14 {
        return Err(Error::Resonance { denominator: denom });
    }
    let c = coefficient_run(ord, b, truncation + 1);
    let mut a = Vec::with_capacity(truncation + 1);
    a.push(constant / denom);
    for m in 1..=truncation {
        let mut s = KahanSum::new();
        for k in 1..=m {
            let l = m - k;
            let ratio = gamma_ratio(l as f64 * alpha + 1.0, m as f64 * alpha + 1.0);
            s.add(a[l] * c[k] * ratio);
        }
        a.push(-s.value() / denom);
    }
    let solution = FracPowerSeries::new(alpha, 0.0, a)?;
    let quad = QuadraticParams {
        constant,
        linear,
        quadratic: 0.0,
        branch: None,
        truncation,
    };
    let residual_coeffs = residual_check(
        ord,
        b,
        &solution,
        &Equation::Quadratic(&quad),
        &Tolerance::default(),
    )?;
    Ok(SeriesSolution {
        solution,
        residual_coeffs,
        branch_used: None,
    })
}

/// Solve the relaxation equation. `ord.beta()` must be positive; the
/// derivative of that order is the iterated operator of order `-beta`.
pub fn solve_relaxation(
    ord: IteratedOrder,
    b: &Multiplier,
    params: &RelaxationParams,
) -> Result<SeriesSolution> {
    check_alpha(ord)?;
    if !(ord.beta() > 0.0) {
        return Err(Error::Domain(format!(
            "relaxation requires beta > 0, got {}",
            ord.beta()
        )));
    }
    let alpha = ord.alpha();
    if (params.forcing.alpha() - alpha).abs() > 1e-12 {
        return Err(Error::Alignment {
            mu: alpha,
            base_order: params.forcing.alpha(),
        });
    }
    let denom = params.damping + (b.eval(alpha) / (1.0 - alpha)).powf(ord.beta());
    if denom.abs() <= 1e-14 {
        return Err(Error::SingularDenominator { value: denom });
    }
    // weights of the derivative operator (order -beta)
    let m_max = params.truncation;
    let d = coefficient_run(ord.inverse(), b, m_max + 1);
    let forcing = params.forcing.coeffs();
    let mut a = Vec::with_capacity(m_max + 1);
    a.push(forcing.first().copied().unwrap_or(0.0) / denom);
    for m in 1..=m_max {
        let c_m = forcing.get(m).copied().unwrap_or(0.0);
        let mut s = KahanSum::new();
        for k in 1..=m {
            let l = m - k;
            let ratio = gamma_ratio(l as f64 * alpha + 1.0, m as f64 * alpha + 1.0);
            s.add(a[l] * d[k] * ratio);
        }
        a.push((c_m - s.value()) / denom);
    }
    let solution = FracPowerSeries::new(alpha, 0.0, a)?;
    let residual_coeffs = residual_check(
        ord,
        b,
        &solution,
        &Equation::Relaxation(params),
        &Tolerance::default(),
    )?;
    Ok(SeriesSolution {
        solution,
        residual_coeffs,
        branch_used: None,
    })
}

/// Coefficient-wise residual LHS - RHS of a candidate solution, computed only
/// through the operator application and the series product; independent of
/// every solver recurrence above.
pub fn residual_check(
    ord: IteratedOrder,
    b: &Multiplier,
    candidate: &FracPowerSeries,
    equation: &Equation<'_>,
    tol: &Tolerance,
) -> Result<Vec<f64>> {
    match equation {
        Equation::Quadratic(p) => {
            let lhs = iab_apply_fps(ord, b, candidate, tol)?;
            let squared = candidate.multiply(candidate)?;
            let m_max = p.truncation.min(candidate.len() - 1);
            let mut res = Vec::with_capacity(m_max + 1);
            for m in 0..=m_max {
                let mut rhs = p.linear * candidate.coeffs().get(m).copied().unwrap_or(0.0)
                    + p.quadratic * squared.coeffs().get(m).copied().unwrap_or(0.0);
                if m == 0 {
                    rhs += p.constant;
                }
                res.push(lhs.coeffs().get(m).copied().unwrap_or(0.0) - rhs);
            }
            Ok(res)
        }
        Equation::Relaxation(p) => {
            let lhs = iab_apply_fps(ord.inverse(), b, candidate, tol)?;
            let m_max = p.truncation.min(candidate.len() - 1);
            let mut res = Vec::with_capacity(m_max + 1);
            for m in 0..=m_max {
                let rhs = -p.damping * candidate.coeffs().get(m).copied().unwrap_or(0.0)
                    + p.forcing.coeffs().get(m).copied().unwrap_or(0.0);
                res.push(lhs.coeffs().get(m).copied().unwrap_or(0.0) - rhs);
            }
            Ok(res)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(alpha: f64, beta: f64) -> IteratedOrder {
        IteratedOrder::new(alpha, beta).unwrap()
    }

    fn one() -> Multiplier {
        Multiplier::one()
    }

    #[test]
    fn pure_quadratic_minus_branch_is_zero() {
        let mut p = QuadraticParams::new(0.0, 0.0, 1.0);
        p.branch = Some(Branch::Minus);
        let sol = solve_quadratic(ord(0.5, 1.0), &one(), &p).unwrap();
        assert!(sol.solution.coeffs().iter().all(|&a| a == 0.0));
        assert!(sol.residual_coeffs.iter().all(|&r| r == 0.0));
        assert_eq!(sol.branch_used, Some(Branch::Minus));
    }

    #[test]
    fn pure_quadratic_plus_branch_worked_values() {
        let mut p = QuadraticParams::new(0.0, 0.0, 1.0);
        p.branch = Some(Branch::Plus);
        p.truncation = 20;
        let sol = solve_quadratic(ord(0.5, 1.0), &one(), &p).unwrap();
        let a = sol.solution.coeffs();
        assert!((a[0] - 0.5).abs() < 1e-15);
        assert!((a[1] - 0.564_189_583_547_756_3).abs() < 1e-13);
        // the plus branch is a formally divergent series (coefficients reach
        // ~1e5 by order 20); the residual floor scales with those products
        assert!(sol.residual_max() < 1e-8, "residual {:.3e}", sol.residual_max());
    }

    #[test]
    fn negative_discriminant_is_rejected() {
        let p = QuadraticParams::new(1.0, 0.0, 1.0);
        assert!(matches!(
            solve_quadratic(ord(0.5, 1.0), &one(), &p),
            Err(Error::Discriminant { .. })
        ));
    }

    #[test]
    fn zero_quadratic_coefficient_is_redirected() {
        let p = QuadraticParams::new(1.0, 0.5, 0.0);
        assert!(matches!(
            solve_quadratic(ord(0.5, 1.0), &one(), &p),
            Err(Error::LinearDegenerate)
        ));
    }

    #[test]
    fn default_branch_minimizes_leading_coefficient() {
        let p = QuadraticParams::new(0.0, 0.0, 1.0);
        let sol = solve_quadratic(ord(0.5, 1.0), &one(), &p).unwrap();
        // roots are 0 and lambda; the zero solution is the continuous one
        assert_eq!(sol.branch_used, Some(Branch::Minus));
        assert!(sol.solution.coeffs().iter().all(|&a| a == 0.0));
    }

    #[test]
    fn relaxation_worked_leading_coefficient() {
        let forcing = FracPowerSeries::constant(0.5, 1.0, 0.0).unwrap();
        let p = RelaxationParams::new(1.0, forcing);
        let sol = solve_relaxation(ord(0.5, 1.0), &one(), &p).unwrap();
        assert!((sol.solution.coeffs()[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!(sol.residual_max() < 1e-10);
    }

    #[test]
    fn relaxation_zero_forcing_gives_zero() {
        let forcing = FracPowerSeries::constant(0.5, 0.0, 0.0).unwrap();
        let p = RelaxationParams::new(1.0, forcing);
        let sol = solve_relaxation(ord(0.5, 1.0), &one(), &p).unwrap();
        assert!(sol.solution.coeffs().iter().all(|&a| a == 0.0));
    }

    #[test]
    fn relaxation_without_damping_inverts_the_operator() {
        // C = 0: D^(a,b) f = q, so f = I^(a,b) q
        let forcing = FracPowerSeries::constant(0.5, 1.0, 0.0).unwrap();
        let p = RelaxationParams::new(0.0, forcing.clone());
        let sol = solve_relaxation(ord(0.5, 1.0), &one(), &p).unwrap();
        assert!((sol.solution.coeffs()[0] - 0.5).abs() < 1e-15);
        let integral =
            iab_apply_fps(ord(0.5, 1.0), &one(), &forcing, &Tolerance::default()).unwrap();
        for m in 0..sol.solution.len().min(integral.len()) {
            let d = (sol.solution.coeffs()[m] - integral.coeffs()[m]).abs();
            assert!(d < 1e-10, "coefficient {m}: {d:.3e}");
        }
        let at_one = sol.solution.eval(1.0).unwrap();
        assert!((at_one - 1.064_189_583_547_756_3).abs() < 1e-10);
    }

    #[test]
    fn relaxation_rejects_singular_denominator() {
        let forcing = FracPowerSeries::constant(0.5, 1.0, 0.0).unwrap();
        let p = RelaxationParams::new(-2.0, forcing); // C + (B/(1-a))^b = -2 + 2
        assert!(matches!(
            solve_relaxation(ord(0.5, 1.0), &one(), &p),
            Err(Error::SingularDenominator { .. })
        ));
    }

    #[test]
    fn relaxation_requires_positive_beta() {
        let forcing = FracPowerSeries::constant(0.5, 1.0, 0.0).unwrap();
        let p = RelaxationParams::new(1.0, forcing);
        assert!(solve_relaxation(ord(0.5, -1.0), &one(), &p).is_err());
    }

    #[test]
    fn linear_path_matches_relaxation_when_equations_coincide() {
        // I^(a,-b) f = P + Q f with P = c0, Q = -C is the same equation as
        // D^(a,b) f = -C f + c0
        let forcing = FracPowerSeries::constant(0.5, 1.0, 0.0).unwrap();
        let relax = solve_relaxation(
            ord(0.5, 1.0),
            &one(),
            &RelaxationParams::new(1.0, forcing),
        )
        .unwrap();
        let lin = solve_linear(ord(0.5, -1.0), &one(), 1.0, -1.0, 40).unwrap();
        for m in 0..=40 {
            let d = (relax.solution.coeffs()[m] - lin.solution.coeffs()[m]).abs();
            assert!(d < 1e-12, "coefficient {m}: {d:.3e}");
        }
    }

    #[test]
    fn residual_detects_perturbations() {
        let mut p = QuadraticParams::new(0.01, 0.0, 1.0);
        p.truncation = 20;
        let sol = solve_quadratic(ord(0.5, 1.0), &one(), &p).unwrap();
        assert!(sol.residual_max() < 1e-10);

        let mut coeffs = sol.solution.coeffs().to_vec();
        coeffs[5] += 1e-3;
        let perturbed = FracPowerSeries::new(0.5, 0.0, coeffs).unwrap();
        let res = residual_check(
            ord(0.5, 1.0),
            &one(),
            &perturbed,
            &Equation::Quadratic(&p),
            &Tolerance::default(),
        )
        .unwrap();
        assert!(res[5].abs() >= 1e-4, "residual_5 = {:.3e}", res[5]);
    }

    #[test]
    fn residual_of_zero_candidate_for_pure_quadratic() {
        let p = QuadraticParams::new(0.0, 0.0, 1.0);
        let zero = FracPowerSeries::new(0.5, 0.0, vec![0.0; 21]).unwrap();
        let res = residual_check(
            ord(0.5, 1.0),
            &one(),
            &zero,
            &Equation::Quadratic(&p),
            &Tolerance::default(),
        )
        .unwrap();
        assert!(res.iter().all(|&r| r == 0.0));
    }
}
