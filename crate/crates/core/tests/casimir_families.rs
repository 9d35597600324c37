use bilinear_poisson::casimir::*;
use bilinear_poisson::poisson::algebra::to_expr;
use bilinear_poisson::poisson::checks::{bivector_rank, casimir_check, Options};
use bilinear_poisson::poisson::{AlgebraSpec, PoissonAlgebra};
use bilinear_poisson::tensor::QCase;

fn catalog(n: usize) -> Vec<AlgebraSpec> {
    let mut specs = vec![AlgebraSpec::a(n), AlgebraSpec::b(n), AlgebraSpec::bc(n)];
    for q in [QCase::II, QCase::III] {
        specs.push(AlgebraSpec::ab(n, q));
        specs.push(AlgebraSpec::abc(n, q));
        for j in 1..=3 {
            specs.push(AlgebraSpec::b_chain(n, j, q));
        }
        for j in 1..=2 {
            specs.push(AlgebraSpec::bc_chain(n, j, q));
        }
    }
    specs
}

fn assert_central(spec: &AlgebraSpec, opts: &Options) {
    let alg = PoissonAlgebra::build(spec).unwrap();
    let fam = casimir_family(spec).unwrap();
    assert!(!fam.members.is_empty());
    for (name, e) in &fam.members {
        let r = casimir_check(&alg, e, opts).unwrap();
        assert!(r.pass, "{} {name}: {:?}", fam.system, r.witness);
    }
}

#[test]
fn every_family_is_central_at_n2_and_n3() {
    for n in 2..=3 {
        for spec in catalog(n) {
            assert_central(&spec, &Options::modular(2, 1));
        }
    }
}

#[test]
fn ab_case_two_family_is_central_at_n4() {
    assert_central(&AlgebraSpec::ab(4, QCase::II), &Options::modular(2, 5));
}

#[test]
fn corank_matches_family_counts() {
    let opts = Options::modular(2, 3);
    for n in 2..=3 {
        let alg = PoissonAlgebra::build(&AlgebraSpec::bc(n)).unwrap();
        assert_eq!(alg.num_generators() - bivector_rank(&alg, &opts).unwrap(), 2 * n);
        for j in 1..=3 {
            let alg = PoissonAlgebra::build(&AlgebraSpec::b_chain(n, j, QCase::II)).unwrap();
            let corank = alg.num_generators() - bivector_rank(&alg, &opts).unwrap();
            let expected = if j % 2 == 0 { n } else { 2 * (n / 2) };
            assert_eq!(corank, expected, "B-chain n={n} j={j}");
        }
        for j in 1..=2 {
            for q in [QCase::II, QCase::III] {
                let alg = PoissonAlgebra::build(&AlgebraSpec::bc_chain(n, j, q)).unwrap();
                assert_eq!(bivector_rank(&alg, &opts).unwrap() % 2, 0);
            }
        }
    }
}

#[test]
fn chain_minor_exponents() {
    let o = Options::modular(3, 7);
    for j in 2..=3 {
        for n in 2..=3 {
            let alg = PoissonAlgebra::build(&AlgebraSpec::b_chain(n, j, QCase::II)).unwrap();
            let bs: Vec<_> = (1..=j).map(|k| alg.mat(&format!("B{k}"))).collect();
            let s = build_chain_s(&alg.mat("A"), &bs, QCase::II);
            let corner = if j % 2 == 0 { Corner::UpperRight } else { Corner::UpperLeft };
            let last = if j % 2 == 0 { ExponentKind::GPlus } else { ExponentKind::E };
            for p in 1..n {
                let ms = minor(&s, corner, p);
                assert_eq!(scaling_exponents(&alg, &ms, "A", &o).unwrap(), exponent_matrix(ExponentKind::D, n, p));
                assert_eq!(
                    scaling_exponents(&alg, &ms, "B1", &o).unwrap(),
                    exponent_matrix(ExponentKind::GMinus, n, p)
                );
                assert_eq!(scaling_exponents(&alg, &ms, &format!("B{j}"), &o).unwrap(), exponent_matrix(last, n, p));
                let b1 = minor(&to_expr(&bs[0]), Corner::UpperRight, p);
                assert_eq!(scaling_exponents(&alg, &b1, "B2", &o).unwrap(), exponent_matrix(ExponentKind::GMinus, n, p));
                let b2 = minor(&to_expr(&bs[1]), Corner::UpperRight, p);
                assert_eq!(scaling_exponents(&alg, &b2, "B1", &o).unwrap(), exponent_matrix(ExponentKind::GPlus, n, p));
            }
        }
    }
}
