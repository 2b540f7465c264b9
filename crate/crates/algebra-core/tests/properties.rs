use std::sync::Arc;

use algebra_core::{
    eigen_3x3, factor_univariate, rat, solve_linear, Matrix, MultiPoly, Role, Scalar, VarTable,
};
use proptest::prelude::*;

fn table() -> Arc<VarTable> {
    VarTable::for_system(&["x", "y"], "t", &["a"])
}

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Scalar::from_rational(rat(n, d)))
}

fn arb_poly() -> impl Strategy<Value = MultiPoly> {
    let term = (
        proptest::collection::vec(0u32..3, 4),
        arb_scalar(),
    );
    proptest::collection::vec(term, 0..5).prop_map(|terms| {
        let tbl = table();
        let mut p = MultiPoly::zero(&tbl);
        for (exps, c) in terms {
            p = &p + &MultiPoly::monomial(&tbl, exps, c);
        }
        p
    })
}

fn arb_int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-6i64..=6, rows * cols).prop_map(move |data| {
        Matrix::from_fn(rows, cols, |i, j| Scalar::from_int(data[i * cols + j]))
    })
}

proptest! {
    #[test]
    fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a - &a, MultiPoly::zero(a.table()));
        prop_assert_eq!(&a * &MultiPoly::from_int(a.table(), 1), a.clone());
    }

    #[test]
    fn exact_division_inverts_multiplication(p in arb_poly(), d in arb_poly()) {
        prop_assume!(!d.is_zero());
        let prod = &p * &d;
        prop_assert_eq!(prod.exact_div(&d), Ok(p));
    }

    #[test]
    fn derivative_satisfies_leibniz(p in arb_poly(), q in arb_poly()) {
        for i in 0..4 {
            let lhs = (&p * &q).partial_derivative(i);
            let rhs = &(&p.partial_derivative(i) * &q) + &(&p * &q.partial_derivative(i));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn primitive_normalization_is_idempotent_and_unimodular(p in arb_poly()) {
        prop_assume!(!p.is_zero());
        let prim = p.primitive_normalized();
        prop_assert_eq!(prim.content(), rat(1, 1));
        prop_assert_eq!(prim.primitive_normalized(), prim.clone());
        // p and its primitive part differ by the (nonzero) rational content up to sign.
        let c = p.content();
        let rescaled = prim.scale(&Scalar::from_rational(c));
        prop_assert!(rescaled == p || rescaled == -&p);
    }

    #[test]
    fn linear_solver_is_exact(
        a in arb_int_matrix(3, 4),
        x in proptest::collection::vec(-6i64..=6, 4),
    ) {
        let x: Vec<Scalar> = x.into_iter().map(Scalar::from_int).collect();
        let b = a.mul_vec(&x);
        let sol = solve_linear(&a, &b);
        let particular = sol.particular.expect("constructed system is consistent");
        prop_assert_eq!(a.mul_vec(&particular), b);
        for v in &sol.nullspace {
            prop_assert!(a.mul_vec(v).iter().all(Scalar::is_zero));
        }
        prop_assert_eq!(sol.rank + sol.nullspace.len(), 4);
    }

    #[test]
    fn factorization_reassembles(coeffs in proptest::collection::vec(-9i64..=9, 1..7)) {
        let tbl = VarTable::new(vec![("s".to_string(), Role::State)]);
        let cs: Vec<_> = coeffs.iter().map(|&n| rat(n, 1)).collect();
        let p = MultiPoly::from_univariate(&tbl, 0, &cs);
        let f = factor_univariate(&p, 0).unwrap();
        prop_assert_eq!(f.reassemble(&tbl), p);
        for fac in &f.factors {
            prop_assert_eq!(fac.poly.content(), rat(1, 1));
            let lead = fac.poly.leading_term().unwrap().1;
            prop_assert!(lead.canonical_sign() > 0);
        }
    }
}

/// Jordan block data planted by conjugation with a unimodular matrix.
fn planted_cases() -> Vec<(Matrix, Vec<(i64, Vec<u32>)>)> {
    // (diagonal-block matrix, expected (eigenvalue, divisor degrees) per class)
    let j3 = |l: i64| {
        Matrix::from_int_rows(&[&[l, 1, 0], &[0, l, 1], &[0, 0, l]])
    };
    let j21 = |l: i64, m: i64| {
        Matrix::from_int_rows(&[&[l, 1, 0], &[0, l, 0], &[0, 0, m]])
    };
    let diag = |a: i64, b: i64, c: i64| {
        Matrix::from_int_rows(&[&[a, 0, 0], &[0, b, 0], &[0, 0, c]])
    };
    vec![
        (diag(1, 2, 3), vec![(1, vec![1]), (2, vec![1]), (3, vec![1])]),
        (diag(-2, -2, 5), vec![(-2, vec![1, 1]), (5, vec![1])]),
        (diag(4, 4, 4), vec![(4, vec![1, 1, 1])]),
        (j21(3, 7), vec![(3, vec![2]), (7, vec![1])]),
        (j21(3, 3), vec![(3, vec![2, 1])]),
        (j3(-1), vec![(-1, vec![3])]),
    ]
}

proptest! {
    #[test]
    fn planted_jordan_structure_is_recovered(
        case in 0usize..6,
        ops in proptest::collection::vec((0usize..3, 0usize..3, -3i64..=3), 0..6),
    ) {
        let (j, expected) = planted_cases().swap_remove(case);
        // Conjugate by a unimodular integer matrix built from shear operations;
        // apply P J P^-1 via the matching inverse shears.
        let mut p = Matrix::identity(3);
        let mut pinv = Matrix::identity(3);
        for &(r, c, k) in &ops {
            if r == c {
                continue;
            }
            let mut shear = Matrix::identity(3);
            shear.set(r, c, Scalar::from_int(k));
            let mut unshear = Matrix::identity(3);
            unshear.set(r, c, Scalar::from_int(-k));
            p = p.mul_mat(&shear);
            pinv = unshear.mul_mat(&pinv);
        }
        prop_assert!(p.mul_mat(&pinv).sub(&Matrix::identity(3)).is_zero());
        let a = p.mul_mat(&j).mul_mat(&pinv);

        let e = eigen_3x3(&a).unwrap();
        let got: Vec<(Scalar, Vec<u32>)> = e
            .classes
            .iter()
            .map(|c| (c.value.clone(), c.divisor_degrees.clone()))
            .collect();
        let want: Vec<(Scalar, Vec<u32>)> = expected
            .into_iter()
            .map(|(v, d)| (Scalar::from_int(v), d))
            .collect();
        prop_assert_eq!(got, want);

        for class in &e.classes {
            let n = a.sub(&Matrix::identity(3).scale(&class.value));
            for chain in &class.chains {
                prop_assert!(n.mul_vec(&chain.head).iter().all(Scalar::is_zero));
                if let Some(first) = &chain.first {
                    prop_assert_eq!(n.mul_vec(first), chain.head.clone());
                    if let Some(second) = &chain.second {
                        let twice: Vec<Scalar> =
                            first.iter().map(|s| s * &Scalar::from_int(2)).collect();
                        prop_assert_eq!(n.mul_vec(second), twice);
                    }
                }
            }
        }
    }
}
