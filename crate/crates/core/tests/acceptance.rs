//! Acceptance suite: one test per gate criterion, each printing a pass/fail
//! line. Run with `cargo test --test acceptance -- --nocapture` to see the
//! lines; thresholds are pinned in the assertions.

use iterated_ab::analysis::{
    bounds_suite, laplace_suite, reductions_suite, semigroup_suite, SuiteReport,
};
use iterated_ab::ode::{self, Branch, QuadraticParams, RelaxationParams};
use iterated_ab::{
    gen_binomial, iab_apply_fps, mittag_leffler, rl_integral_fps, rl_integral_sampled,
    FracPowerSeries, IteratedOrder, Multiplier, Tolerance,
};
use rand::{Rng, SeedableRng};

fn report_line(criterion: &str, report: &SuiteReport) {
    let failures = report.failures().count();
    println!(
        "criterion {criterion}: {} — {} checks, {failures} failures",
        if report.passed { "PASS" } else { "FAIL" },
        report.checks.len()
    );
    for f in report.failures() {
        println!(
            "    {}: expected {} got {} (err {:.3e} > {:.3e})",
            f.input, f.expected, f.got, f.rel_err, f.threshold
        );
    }
}

#[test]
fn criterion_1_reductions() {
    let report = reductions_suite(&Multiplier::one(), &Tolerance::default()).unwrap();
    report_line("1 (reductions)", &report);
    assert!(report.passed);
}

#[test]
fn criterion_2_semigroup() {
    let report = semigroup_suite(&Multiplier::one(), 200, 42, &Tolerance::default()).unwrap();
    report_line("2 (semigroup)", &report);
    assert!(report.checks.len() >= 200);
    assert!(report.passed);
}

#[test]
fn criterion_3_laplace() {
    let report = laplace_suite(&Multiplier::one(), &Tolerance::default()).unwrap();
    report_line("3 (laplace)", &report);
    assert_eq!(report.checks.len(), 144); // 3 alpha x 4 beta x 3 f x 4 s
    assert!(report.passed);
}

#[test]
fn criterion_4_boundedness() {
    let report = bounds_suite(&Multiplier::one(), 50, 42, &Tolerance::default()).unwrap();
    report_line("4 (boundedness)", &report);
    assert!(report.passed);
}

#[test]
fn criterion_5_ode_solvers() {
    let one = Multiplier::one();
    let ord = IteratedOrder::new(0.5, 1.0).unwrap();
    let mut pass = true;

    // quadratic, convergent instance: operator-path residual at order 20
    let mut quad = QuadraticParams::new(0.01, 0.0, 1.0);
    quad.truncation = 20;
    let sol = ode::solve_quadratic(ord, &one, &quad).unwrap();
    pass &= sol.residual_max() <= 1e-10;
    assert!(
        sol.residual_max() <= 1e-10,
        "quadratic residual {:.3e}",
        sol.residual_max()
    );

    // the degenerate linear path
    let lin = ode::solve_linear(ord, &one, 1.0, 0.25, 20).unwrap();
    pass &= lin.residual_max() <= 1e-10;
    assert!(lin.residual_max() <= 1e-10, "linear residual {:.3e}", lin.residual_max());

    // worked leading coefficients of the pure quadratic, plus branch
    let mut showcase = QuadraticParams::new(0.0, 0.0, 1.0);
    showcase.branch = Some(Branch::Plus);
    showcase.truncation = 20;
    let sol = ode::solve_quadratic(ord, &one, &showcase).unwrap();
    assert!((sol.solution.coeffs()[0] - 0.5).abs() < 1e-15);
    assert!((sol.solution.coeffs()[1] - 0.564_189_583_547_756_3).abs() < 1e-13);

    // relaxation: worked leading coefficient and residual
    let forcing = FracPowerSeries::constant(0.5, 1.0, 0.0).unwrap();
    let mut relax = RelaxationParams::new(1.0, forcing.clone());
    relax.truncation = 20;
    let sol = ode::solve_relaxation(ord, &one, &relax).unwrap();
    pass &= sol.residual_max() <= 1e-10;
    assert!((sol.solution.coeffs()[0] - 1.0 / 3.0).abs() < 1e-14);
    assert!(sol.residual_max() <= 1e-10, "relaxation residual {:.3e}", sol.residual_max());

    // undamped relaxation inverts the derivative: f = I^(alpha,beta) q
    let mut undamped = RelaxationParams::new(0.0, forcing.clone());
    undamped.truncation = 20;
    let sol = ode::solve_relaxation(ord, &one, &undamped).unwrap();
    let integral = iab_apply_fps(ord, &one, &forcing, &Tolerance::default()).unwrap();
    let mut worst = 0.0_f64;
    for m in 0..sol.solution.len().min(integral.len()) {
        worst = worst.max((sol.solution.coeffs()[m] - integral.coeffs()[m]).abs());
    }
    pass &= worst <= 1e-10;
    assert!(worst <= 1e-10, "inverse-operator mismatch {worst:.3e}");

    println!(
        "criterion 5 (ode solvers): {}",
        if pass { "PASS" } else { "FAIL" }
    );
}

#[test]
fn criterion_6_quadrature_convergence() {
    // smooth series input: f(t) = 1 + t + t^2 in the alpha = 1/2 class
    let f = FracPowerSeries::new(0.5, 0.0, vec![1.0, 0.0, 1.0, 0.0, 1.0]).unwrap();
    let mut pass = true;
    for mu in [0.5, 1.0] {
        let truth = rl_integral_fps(mu, &f).unwrap();
        let mut errors = Vec::new();
        for n in [251_usize, 501, 1001, 2001] {
            let sampled = rl_integral_sampled(mu, &f.sample(1.0, n).unwrap()).unwrap();
            let mut worst = 0.0_f64;
            for i in 0..n {
                worst = worst.max((sampled.values()[i] - truth.eval(sampled.t(i)).unwrap()).abs());
            }
            errors.push(worst);
        }
        for w in errors.windows(2) {
            let order = (w[0] / w[1]).log2();
            pass &= order >= 1.5;
            assert!(
                order >= 1.5,
                "mu={mu}: empirical order {order:.3} (errors {errors:?})"
            );
        }
        println!("    mu={mu}: errors {errors:?}");
    }
    println!(
        "criterion 6 (quadrature convergence): {}",
        if pass { "PASS" } else { "FAIL" }
    );
}

#[test]
fn criterion_7_special_functions() {
    let mut pass = true;

    // Vandermonde convolution of generalized binomials
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let beta: f64 = rng.gen_range(-3.0..=3.0);
        let gamma: f64 = rng.gen_range(-3.0..=3.0);
        for m in 0..=30_usize {
            let mut acc = 0.0;
            for k in 0..=m {
                acc += gen_binomial(beta, k) * gen_binomial(gamma, m - k);
            }
            let direct = gen_binomial(beta + gamma, m);
            let rel = (acc - direct).abs() / direct.abs().max(1e-300);
            worst = worst.max(rel);
        }
    }
    pass &= worst <= 1e-10;
    assert!(worst <= 1e-10, "Vandermonde worst rel err {worst:.3e}");

    // E_1 is the exponential
    let tol = Tolerance::default();
    let mut worst = 0.0_f64;
    for i in -20..=20 {
        let z = i as f64;
        let rel = ((mittag_leffler(1.0, z, &tol).unwrap() - z.exp()) / z.exp()).abs();
        worst = worst.max(rel);
    }
    pass &= worst <= 1e-12;
    assert!(worst <= 1e-12, "E_1 vs exp worst rel err {worst:.3e}");

    // frozen high-precision oracle value
    let got = mittag_leffler(0.5, -1.0, &tol).unwrap();
    let err = (got - 0.427_583_6).abs();
    pass &= err <= 1e-6;
    assert!(err <= 1e-6, "E_1/2(-1) err {err:.3e}");

    println!(
        "criterion 7 (special functions): {}",
        if pass { "PASS" } else { "FAIL" }
    );
}
