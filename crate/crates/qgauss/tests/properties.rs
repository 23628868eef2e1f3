//! Property tests for the algebraic invariants that hold across the whole
//! parameter space, not just at the hand-picked oracle points.

use proptest::prelude::*;

use qgauss::bell::VarianceQuadratic;
use qgauss::fock::{fock_inner, TensorState};
use qgauss::moments::{hermite_of_field, vacuum_expectation, OperatorExpr};
use qgauss::qcore::{int, parse_scalar, rat, render_scalar, Scalar};
use qgauss::{q_factorial, GramSpace, QParam};

fn rational() -> impl Strategy<Value = Scalar> {
    (-60i64..=60, 1i64..=24).prop_map(|(num, den)| rat(num, den))
}

fn open_q() -> impl Strategy<Value = QParam> {
    (-9i64..=9).prop_map(|p| QParam::new(rat(p, 10)).expect("inside (-1, 1)"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_round_trip_through_rendering(x in rational()) {
        prop_assert_eq!(parse_scalar(&render_scalar(&x)).unwrap(), x);
    }

    #[test]
    fn hermite_expectations_are_orthogonal(n in 0u32..=4, m in 0u32..=4, q in open_q()) {
        let space = GramSpace::new(vec![vec![int(1)]]).unwrap();
        let f = space.basis_vector(0).unwrap();
        let product = OperatorExpr::Compose(vec![
            hermite_of_field(n, &f, &q).unwrap(),
            hermite_of_field(m, &f, &q).unwrap(),
        ]);
        let expected = if n == m { q_factorial(n, &q) } else { int(0) };
        prop_assert_eq!(vacuum_expectation(&product, &q).unwrap(), expected);
    }

    #[test]
    fn fock_inner_product_is_symmetric(
        len in 0usize..=4,
        seed_left in proptest::collection::vec(0usize..2, 4),
        seed_right in proptest::collection::vec(0usize..2, 4),
        rho_num in -9i64..=9,
        q in open_q(),
    ) {
        let rho = rat(rho_num, 10);
        let space = GramSpace::new(vec![
            vec![int(1), rho.clone()],
            vec![rho, int(1)],
        ]).unwrap();
        let left = TensorState::basis_word(&space, seed_left[..len].to_vec()).unwrap();
        let right = TensorState::basis_word(&space, seed_right[..len].to_vec()).unwrap();
        prop_assert_eq!(
            fock_inner(&left, &right, &q).unwrap(),
            fock_inner(&right, &left, &q).unwrap()
        );
    }

    #[test]
    fn square_minimum_is_a_true_lower_bound(
        x_sq in rational(),
        xz in rational(),
        z_sq in rational(),
        constant in rational(),
        l_sq_num in 1i64..=30,
        u_num in -10i64..=10,
        v_num in -10i64..=10,
    ) {
        // Any point (u L, v L) with |u|, |v| <= 1 lies in the square
        // [-L, L]^2, so the reported minimum must not exceed the value
        // there. Coordinates enter only through x^2, xz, z^2, keeping the
        // evaluation exact even though L itself is irrational.
        let quad = VarianceQuadratic { x_sq, xz, z_sq, constant };
        let l_sq = rat(l_sq_num, 7);
        let (u, v) = (rat(u_num, 10), rat(v_num, 10));
        let value = quad.eval_squares(
            &(&(&u * &u) * &l_sq),
            &(&(&u * &v) * &l_sq),
            &(&(&v * &v) * &l_sq),
        );
        prop_assert!(quad.min_over_square(&l_sq) <= value);
    }
}
