//! Property tests for the algebraic invariants the operators promise.

use iterated_ab::{
    ab_integral_fps, gen_binomial, iab_apply_fps, rl_integral_fps, FracPowerSeries,
    IteratedOrder, Multiplier, Tolerance,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn coeffs_strategy(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn binomial_pascal_identity(beta in -10.0..10.0f64, k in 1usize..40) {
        let lhs = gen_binomial(beta, k);
        let rhs = gen_binomial(beta - 1.0, k) + gen_binomial(beta - 1.0, k - 1);
        let scale = lhs.abs().max(rhs.abs()).max(1e-300);
        prop_assert!((lhs - rhs).abs() / scale <= 1e-12);
    }

    #[test]
    fn series_product_commutes(
        a in coeffs_strategy(12),
        b in coeffs_strategy(12),
        alpha in 0.1..0.9f64,
    ) {
        let sa = FracPowerSeries::new(alpha, 0.0, a).unwrap();
        let sb = FracPowerSeries::new(alpha, 0.0, b).unwrap();
        let ab = sa.multiply(&sb).unwrap();
        let ba = sb.multiply(&sa).unwrap();
        for (x, y) in ab.coeffs().iter().zip(ba.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn series_product_associates(
        a in coeffs_strategy(8),
        b in coeffs_strategy(8),
        c in coeffs_strategy(8),
        alpha in 0.1..0.9f64,
    ) {
        let sa = FracPowerSeries::new(alpha, 0.0, a).unwrap();
        let sb = FracPowerSeries::new(alpha, 0.0, b).unwrap();
        let sc = FracPowerSeries::new(alpha, 0.0, c).unwrap();
        let left = sa.multiply(&sb).unwrap().multiply(&sc).unwrap();
        let right = sa.multiply(&sb.multiply(&sc).unwrap()).unwrap();
        for (x, y) in left.coeffs().iter().zip(right.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn series_product_evaluates_pointwise(
        a in coeffs_strategy(8),
        b in coeffs_strategy(8),
        alpha in 0.1..0.9f64,
        t in 0.0..2.0f64,
    ) {
        let sa = FracPowerSeries::new(alpha, 0.0, a).unwrap();
        let sb = FracPowerSeries::new(alpha, 0.0, b).unwrap();
        let prod = sa.multiply(&sb).unwrap();
        let direct = prod.eval(t).unwrap();
        let split = sa.eval(t).unwrap() * sb.eval(t).unwrap();
        prop_assert!((direct - split).abs() <= 1e-10 * split.abs().max(1.0));
    }

    #[test]
    fn rl_integral_is_linear(
        a in coeffs_strategy(10),
        b in coeffs_strategy(10),
        c1 in -2.0..2.0f64,
        c2 in -2.0..2.0f64,
    ) {
        let alpha = 0.5;
        let sa = FracPowerSeries::new(alpha, 0.0, a).unwrap();
        let sb = FracPowerSeries::new(alpha, 0.0, b).unwrap();
        let combined = sa.scale(c1).add(&sb.scale(c2)).unwrap();
        let lhs = rl_integral_fps(0.5, &combined).unwrap();
        let rhs = rl_integral_fps(0.5, &sa)
            .unwrap()
            .scale(c1)
            .add(&rl_integral_fps(0.5, &sb).unwrap().scale(c2))
            .unwrap();
        for (x, y) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn iterated_operator_is_linear(
        a in coeffs_strategy(8),
        b in coeffs_strategy(8),
        beta in -1.5..1.5f64,
        c1 in -2.0..2.0f64,
    ) {
        let alpha = 0.4;
        let one = Multiplier::one();
        let tol = Tolerance::default();
        let ord = IteratedOrder::new(alpha, beta).unwrap();
        let sa = FracPowerSeries::new(alpha, 0.0, a).unwrap();
        let sb = FracPowerSeries::new(alpha, 0.0, b).unwrap();
        let combined = sa.scale(c1).add(&sb).unwrap();
        let lhs = iab_apply_fps(ord, &one, &combined, &tol).unwrap();
        let rhs = iab_apply_fps(ord, &one, &sa, &tol)
            .unwrap()
            .scale(c1)
            .add(&iab_apply_fps(ord, &one, &sb, &tol).unwrap())
            .unwrap();
        let n = lhs.len().min(rhs.len());
        for m in 0..n {
            prop_assert!((lhs.coeffs()[m] - rhs.coeffs()[m]).abs() <= 1e-10);
        }
    }

    #[test]
    fn iterated_semigroup_in_beta(
        coeffs in coeffs_strategy(6),
        alpha in 0.2..0.7f64,
        beta in -1.2..1.2f64,
        gamma in -1.2..1.2f64,
    ) {
        let one = Multiplier::one();
        let tol = Tolerance::default();
        let f = FracPowerSeries::new(alpha, 0.0, coeffs).unwrap();
        let residual =
            iterated_ab::analysis::semigroup_residual(alpha, beta, gamma, &one, &f, &tol)
                .unwrap();
        prop_assert!(residual <= 1e-9, "residual {residual:.3e}");
    }
}

#[test]
fn rl_semigroup_on_series() {
    // RL(mu1) o RL(mu2) = RL(mu1 + mu2), coefficient-wise
    let f = FracPowerSeries::new(0.25, 0.0, vec![1.0, -0.5, 0.3, 0.1]).unwrap();
    for (m1, m2) in [(0.25, 0.5), (0.5, 0.5), (0.25, 0.25), (0.75, 0.25)] {
        let two_step = rl_integral_fps(m1, &rl_integral_fps(m2, &f).unwrap()).unwrap();
        let one_step = rl_integral_fps(m1 + m2, &f).unwrap();
        for (x, y) in two_step.coeffs().iter().zip(one_step.coeffs()) {
            assert!((x - y).abs() < 1e-11, "orders ({m1}, {m2})");
        }
    }
}

#[test]
fn pascal_identity_bulk() {
    // dense randomized sweep at the tolerance the binomial promises
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let beta: f64 = rng.gen_range(-10.0..=10.0);
        let k: usize = rng.gen_range(1..=40);
        let lhs = gen_binomial(beta, k);
        let rhs = gen_binomial(beta - 1.0, k) + gen_binomial(beta - 1.0, k - 1);
        let scale = lhs.abs().max(rhs.abs()).max(1e-300);
        assert!(
            (lhs - rhs).abs() / scale <= 1e-12,
            "beta={beta} k={k}: {lhs} vs {rhs}"
        );
    }
}

#[test]
fn ab_integral_linearity_on_series() {
    let one = Multiplier::one();
    let sa = FracPowerSeries::new(0.5, 0.0, vec![0.2, 0.4, -0.6]).unwrap();
    let sb = FracPowerSeries::new(0.5, 0.0, vec![-1.0, 0.0, 0.5, 0.25]).unwrap();
    let combined = sa.scale(1.5).add(&sb.scale(-0.5)).unwrap();
    let lhs = ab_integral_fps(0.5, &one, &combined).unwrap();
    let rhs = ab_integral_fps(0.5, &one, &sa)
        .unwrap()
        .scale(1.5)
        .add(&ab_integral_fps(0.5, &one, &sb).unwrap().scale(-0.5))
        .unwrap();
    for (x, y) in lhs.coeffs().iter().zip(rhs.coeffs()) {
        assert!((x - y).abs() < 1e-10);
    }
}
