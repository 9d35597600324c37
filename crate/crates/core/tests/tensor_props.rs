use bilinear_poisson::poisson::{AlgebraSpec, PoissonAlgebra};
use bilinear_poisson::ring::{Poly, Rational, Ring};
use bilinear_poisson::tensor::{classical_r, permutation_p, ConstMatrix, LegMatrix, QCase};
use proptest::prelude::*;
use std::sync::OnceLock;

fn matrix(n: usize, legs: usize) -> impl Strategy<Value = ConstMatrix> {
    let d = n.pow(legs as u32);
    prop::collection::vec(-3i64..=3, d * d).prop_map(move |v| LegMatrix::from_fn(n, legs, |r, c| Rational::from_int(v[r * d + c])))
}

fn ab2() -> &'static PoissonAlgebra {
    static A: OnceLock<PoissonAlgebra> = OnceLock::new();
    A.get_or_init(|| PoissonAlgebra::build(&AlgebraSpec::ab(2, QCase::II)).unwrap())
}

proptest! {
    #[test]
    fn partial_transposes_compose_to_the_full_transpose(m in matrix(2, 2)) {
        let t = m.partial_transpose(1).unwrap().partial_transpose(2).unwrap();
        prop_assert_eq!(t, m.transpose());
        prop_assert_eq!(m.partial_transpose(1).unwrap().partial_transpose(1).unwrap(), m);
    }

    #[test]
    fn leg_embeddings_are_kronecker_factors(x in matrix(2, 1), y in matrix(2, 1)) {
        let one = LegMatrix::embed(&x, 1, 2).unwrap();
        let two = LegMatrix::embed(&y, 2, 2).unwrap();
        prop_assert_eq!(one.mul(&two), x.kron(&y));
        prop_assert_eq!(one.mul(&two), two.mul(&one));
    }

    #[test]
    fn permutation_swaps_legs(x in matrix(2, 1), m in matrix(2, 2)) {
        let p = permutation_p(2);
        let one = LegMatrix::embed(&x, 1, 2).unwrap();
        let two = LegMatrix::embed(&x, 2, 2).unwrap();
        prop_assert_eq!(p.mul(&one).mul(&p), two);
        prop_assert_eq!(p.mul(&p.mul(&m).mul(&p)).mul(&p), m);
    }

    #[test]
    fn bracket_is_antisymmetric_and_a_derivation(
        i in 0usize..8, j in 0usize..8, k in 0usize..8, c in -4i64..=4,
    ) {
        let alg = ab2();
        let g = alg.generators();
        let (x, y, z) = (Poly::var(g[i]), Poly::var(g[j]), Poly::var(g[k]));
        let f = x.add(&Poly::int(c));
        prop_assert!(alg.bracket(&f, &y).add(&alg.bracket(&y, &f)).is_zero());
        let lhs = alg.bracket(&x.mul(&y), &z);
        let rhs = x.mul(&alg.bracket(&y, &z)).add(&alg.bracket(&x, &z).mul(&y));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn r_plus_its_flip_is_twice_the_permutation() {
    for n in 2..=4 {
        let r = classical_r(n);
        let p = permutation_p(n);
        let r21 = p.mul(&r).mul(&p);
        assert_eq!(r.add(&r21), p.add(&p));
    }
}
