use critcoh_core::algebra::{AlgebraName, FormTag, SimpleLieAlgebra};
use critcoh_core::linalg::{in_image, kernel_basis, rank, rank_exact, SparseMatrix, SparseMatrixQ};
use critcoh_core::rational::{qf, Q};
use num_traits::Zero;
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| qf(n, d))
}

fn vector(dim: usize) -> impl Strategy<Value = Vec<Q>> {
    proptest::collection::vec(rat(), dim)
}

/// Sparse matrix with roughly half the entries zero.
fn matrix() -> impl Strategy<Value = SparseMatrixQ> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        proptest::collection::vec(prop_oneof![Just(Q::zero()), rat()], r * c).prop_map(move |v| {
            let rows: Vec<Vec<Q>> = v.chunks(c).map(|x| x.to_vec()).collect();
            SparseMatrix::from_dense(&rows)
        })
    })
}

fn algebras() -> impl Strategy<Value = AlgebraName> {
    prop_oneof![Just(AlgebraName::Sl2), Just(AlgebraName::Sl3)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_antisymmetric_and_jacobi((name, x, y, z) in algebras().prop_flat_map(|n| {
        let d = SimpleLieAlgebra::new(n).dim;
        (Just(n), vector(d), vector(d), vector(d))
    })) {
        let a = SimpleLieAlgebra::new(name);
        let xy = a.bracket(&x, &y);
        let yx = a.bracket(&y, &x);
        prop_assert!(xy.iter().zip(&yx).all(|(p, q)| (p + q).is_zero()));
        let t1 = a.bracket(&x, &a.bracket(&y, &z));
        let t2 = a.bracket(&y, &a.bracket(&z, &x));
        let t3 = a.bracket(&z, &xy);
        prop_assert!((0..a.dim).all(|i| (&t1[i] + &t2[i] + &t3[i]).is_zero()));
        // Bracket agrees with the matrix commutator.
        let (mx, my) = (a.matrix_of(&x), a.matrix_of(&y));
        let comm = critcoh_core::algebra::commutator(&mx, &my);
        prop_assert_eq!(a.coords(&comm), xy);
    }

    #[test]
    fn forms_are_invariant((name, x, y, z) in algebras().prop_flat_map(|n| {
        let d = SimpleLieAlgebra::new(n).dim;
        (Just(n), vector(d), vector(d), vector(d))
    })) {
        let a = SimpleLieAlgebra::new(name);
        for tag in [FormTag::Kappa0, FormTag::Killing, FormTag::Critical] {
            let f = a.bilinear_form(tag);
            let l = f.eval(&a.bracket(&x, &y), &z);
            let r = f.eval(&x, &a.bracket(&y, &z));
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn invariant_polynomials_are_invariant((name, y, b) in algebras().prop_flat_map(|n| {
        let d = SimpleLieAlgebra::new(n).dim;
        (Just(n), vector(d), 0..d)
    })) {
        let a = SimpleLieAlgebra::new(name);
        for p in a.invariant_polynomials() {
            prop_assert!(a.coadjoint_derivative(b, &p.poly).eval(&y).is_zero());
        }
    }

    #[test]
    fn modular_and_exact_rank_agree(m in matrix()) {
        let r = rank_exact(&m);
        prop_assert_eq!(rank(&m).unwrap(), r);
        prop_assert_eq!(rank_exact(&m.transpose()), r);
        prop_assert_eq!(kernel_basis(&m).len() + r, m.cols());
    }

    #[test]
    fn kernel_vectors_are_killed(m in matrix()) {
        for v in kernel_basis(&m) {
            prop_assert!(m.mul_vec(&v).is_empty());
        }
    }

    #[test]
    fn image_witnesses_reproduce_the_vector(m in matrix(), coeffs in proptest::collection::vec(rat(), 7)) {
        let w: Vec<(usize, Q)> = (0..m.cols()).map(|i| (i, coeffs[i].clone())).filter(|(_, x)| !x.is_zero()).collect();
        let v = m.mul_vec(&w);
        let x = in_image(&m, &v).unwrap().expect("image vector");
        prop_assert_eq!(m.mul_vec(&x), v);
    }

    #[test]
    fn dump_roundtrip(m in matrix()) {
        prop_assert_eq!(SparseMatrixQ::parse_dump(&m.dump()).unwrap(), m);
    }
}
