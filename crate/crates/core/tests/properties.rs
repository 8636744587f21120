use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use powerbound::admissible::{admissibility_report, threshold_consistency, ThresholdKind};
use powerbound::l1multiplier::{kernel_eval, MultiplierKernel};
use powerbound::matrix::{esterle_instance, esterle_verify, mat_exp};
use powerbound::seqdiag::{diff_bound_sum, diff_bound_terms, factorial, projection_bound_sum};
use powerbound::series::{compose, lagrange_invert};
use powerbound::{DenseOperator, FunctionSpec, NormKind, PowerSeries};

fn small_matrix(dim: usize) -> impl Strategy<Value = DenseOperator<f64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |v| {
        DenseOperator::from_entries(dim, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap()
    })
}

fn norm_kind() -> impl Strategy<Value = NormKind> {
    prop_oneof![Just(NormKind::One), Just(NormKind::Two), Just(NormKind::Inf)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lagrange_inverse_composes_to_identity(tail in prop::collection::vec(-5i64..=5, 1..8), lead in 1i64..=4) {
        let mut c = vec![BigRational::from_integer(0.into()), BigRational::from_integer(lead.into())];
        c.extend(tail.iter().map(|&x| BigRational::from_integer(BigInt::from(x))));
        let order = 10;
        let f = PowerSeries::new(c).unwrap().with_order(order);
        let w = lagrange_invert(&f, order).unwrap();
        prop_assert_eq!(compose(&f, &w, order).unwrap(), PowerSeries::identity(order));
    }

    #[test]
    fn norms_are_submultiplicative(a in small_matrix(5), b in small_matrix(5), kind in norm_kind()) {
        let (a, b) = (a.with_norm(kind), b.with_norm(kind));
        prop_assert!(a.matmul(&b).norm() <= a.norm() * b.norm() * (1.0 + 1e-12));
    }

    #[test]
    fn exponential_is_a_semigroup(a in small_matrix(4), s in 0.0f64..2.0, t in 0.0f64..2.0) {
        let lhs = mat_exp(&a, s).unwrap().matmul(&mat_exp(&a, t).unwrap());
        let rhs = mat_exp(&a, s + t).unwrap();
        prop_assert!(lhs.sub(&rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn edge_instances_never_falsify(dim in 2usize..=10, n in 1u32..=5, seed in any::<u64>(), frac in 0.1f64..1.0) {
        let t = esterle_instance(dim, n, seed, frac, NormKind::Two).unwrap();
        let r = esterle_verify(&t, n).unwrap();
        prop_assert!(r.hypothesis_holds);
        prop_assert!(!r.falsified());
        prop_assert!(r.inversion_residual <= 1e-12);
    }

    #[test]
    fn kernel_identity_holds_pointwise(n in 1u64..=100, x in -500.0f64..500.0) {
        let lhs = kernel_eval(MultiplierKernel::G(n + 1), x) - kernel_eval(MultiplierKernel::G(n), x);
        prop_assert!((lhs - kernel_eval(MultiplierKernel::D(n), x)).abs() <= 1e-12);
    }

    #[test]
    fn diff_bound_terms_are_bounded_by_one_over_e(n in 1u64..10_000_000) {
        for (_, t) in diff_bound_terms(n).unwrap() {
            prop_assert!((0.0..=1.0 / std::f64::consts::E + 1e-16).contains(&t));
        }
        prop_assert!(diff_bound_sum(n).unwrap() > 0.0);
    }

    #[test]
    fn threshold_consistency_off_grid(s in 1.05f64..8.0, c in 1.5f64..8.0) {
        for k in [ThresholdKind::ExpDiff { s }, ThresholdKind::SinclairSin { s }, ThresholdKind::Gorin { c }] {
            prop_assert!(threshold_consistency(k).unwrap() <= 1e-12);
        }
    }
}

#[test]
fn factorial_points_dominate_one_over_e() {
    for m in 1..=20 {
        let v = diff_bound_sum(factorial(m).unwrap()).unwrap();
        assert!(v >= 1.0 / std::f64::consts::E - 1e-15, "m={m}");
    }
}

#[test]
fn projection_bound_at_most_two() {
    assert!((1..=12).all(|n| projection_bound_sum(n).unwrap() <= 2.0));
}

#[test]
fn identity_partial_sums_below_xi() {
    // positive-coefficient inverses: partial sums increase toward ξ from below
    for spec in [
        FunctionSpec::ZPow { n: 1 },
        FunctionSpec::ZPow { n: 3 },
        FunctionSpec::PowDiff { n: 1, m: 2 },
        FunctionSpec::ZExpM { m: 2 },
        FunctionSpec::ExpDiff { s: 2.0 },
    ] {
        let r = admissibility_report(&spec, 2000).unwrap();
        assert!(r.first_negative.is_none(), "{spec}");
        assert!(r.residual > 0.0 && r.residual < 0.05 * r.xi, "{spec}: {r:?}");
    }
}
