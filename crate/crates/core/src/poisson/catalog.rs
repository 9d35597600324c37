//! Named Poisson maps between catalog algebras.

use super::algebra::{
    a_form, inverse_expr, lie_poisson, one, term, to_expr, two, konst, AlgebraSpec, BracketDecl, Consts,
    PoissonAlgebra, QSpec,
};
use super::checks::MapSign;
use crate::error::{Error, Result};
use crate::poisson::algebra::{bracket_q, groupoid_decls};
use crate::ring::Expr;
use crate::tensor::{LegMatrix, QCase};

/// A map `target generators -> expressions over source generators`.
pub struct MapCase {
    pub name: String,
    pub source: PoissonAlgebra,
    pub target: PoissonAlgebra,
    pub images: Vec<Expr>,
    pub expected: MapSign,
    /// Whether the images involve inverses.
    pub rational: bool,
}

pub const MAP_NAMES: &[&str] = &[
    "BAB^T",
    "BC^T",
    "BA^-TB^T",
    "BA^-TC^T",
    "BAC^T",
    "F-tilde",
    "S-relations",
    "S-relations-iii",
    "chain-compose",
    "chain-forget",
    "chain-shift",
    "duality-ii-iii",
    "duality-ii-iii-ABC",
    "identity",
    "theta",
];

fn flat(ms: &[LegMatrix<Expr>]) -> Vec<Expr> {
    let mut out = Vec::new();
    for m in ms {
        let n = m.n();
        for k in 0..n * n {
            out.push(m.get(k / n, k % n));
        }
    }
    out
}

fn e(alg: &PoissonAlgebra, name: &str) -> LegMatrix<Expr> {
    to_expr(&alg.mat(name))
}

fn inv(alg: &PoissonAlgebra, name: &str) -> LegMatrix<Expr> {
    inverse_expr(&alg.mat(name))
}

fn inv_t(alg: &PoissonAlgebra, name: &str) -> LegMatrix<Expr> {
    inverse_expr(&alg.mat(name).transpose())
}

/// Blocks `A, B, S` with the relations for `S = A^T B^{-1}` (case ii) or
/// `S = A B^{-1}` (case iii) on top of the `(A, B)` algebra.
pub fn s_extended(n: usize, case: QCase) -> Result<PoissonAlgebra> {
    let c = Consts::new(n);
    let (a, b, s) = (0, 1, 2);
    let mut decls = vec![a_form(&c, a, 1), lie_poisson(&c, b, b, 1), bracket_q(n, &QSpec::Case(case), b, a, 1)];
    match case {
        QCase::III => {
            decls.push(BracketDecl {
                left: s,
                right: b,
                terms: vec![
                    term(-1, vec![one(s), konst(c.r.clone()), two(b)]),
                    term(-1, vec![two(b), konst(c.r_t1.clone()), one(s)]),
                ],
            });
            decls.push(BracketDecl {
                left: s,
                right: a,
                terms: vec![
                    term(-1, vec![konst(c.r_t12.clone()), one(s), two(a)]),
                    term(-1, vec![two(a), konst(c.r_t1.clone()), one(s)]),
                ],
            });
        }
        _ => {
            decls.push(BracketDecl {
                left: s,
                right: b,
                terms: vec![
                    term(1, vec![one(s), konst(c.r_t12.clone()), two(b)]),
                    term(1, vec![two(b), konst(c.r_t2.clone()), one(s)]),
                ],
            });
            decls.push(BracketDecl {
                left: s,
                right: a,
                terms: vec![
                    term(1, vec![konst(c.r.clone()), one(s), two(a)]),
                    term(1, vec![two(a), konst(c.r_t2.clone()), one(s)]),
                ],
            });
        }
    }
    decls.push(BracketDecl {
        left: s,
        right: s,
        terms: vec![
            term(1, vec![konst(c.r.clone()), one(s), two(s)]),
            term(-1, vec![one(s), two(s), konst(c.r_t12.clone())]),
        ],
    });
    let label = format!("S-extended({})", case.label());
    PoissonAlgebra::partial(&label, n, &[("A", "a"), ("B", "b"), ("S", "s")], &decls)
}

/// Blocks `F, B, G` where `G` stands for `B F B^T`.
pub fn f_tilde_target(n: usize) -> Result<PoissonAlgebra> {
    let c = Consts::new(n);
    let (f, b, g) = (0, 1, 2);
    let mut decls = groupoid_decls(&c, f, b, 1);
    decls.push(a_form(&c, g, 1));
    decls.push(BracketDecl {
        left: b,
        right: g,
        terms: vec![
            term(1, vec![konst(c.r.clone()), one(b), two(g)]),
            term(-1, vec![two(g), konst(c.r_t1.clone()), one(b)]),
        ],
    });
    decls.push(BracketDecl { left: g, right: f, terms: vec![] });
    PoissonAlgebra::partial("F-tilde", n, &[("F", "f"), ("B", "b"), ("G", "g")], &decls)
}

fn build(s: AlgebraSpec) -> Result<PoissonAlgebra> {
    PoissonAlgebra::build(&s)
}

/// Look up a named map. `q` selects the coupling where the map has one.
pub fn map_case(name: &str, n: usize, q: QCase) -> Result<MapCase> {
    use MapSign::*;
    let mk = |source, target, images, expected, rational| MapCase {
        name: name.to_string(),
        source,
        target,
        images,
        expected,
        rational,
    };
    Ok(match name {
        "identity" => {
            let s = build(AlgebraSpec::ab(n, q))?;
            let images = flat(&[e(&s, "A"), e(&s, "B")]);
            mk(s.clone(), s, images, Poisson, false)
        }
        "BAB^T" => {
            let s = build(AlgebraSpec::ab(n, q))?;
            let img = e(&s, "B").mul(&e(&s, "A")).mul(&e(&s, "B").transpose());
            mk(s, build(AlgebraSpec::a(n))?, flat(&[img]), Poisson, false)
        }
        "BAC^T" => {
            let s = build(AlgebraSpec::abc(n, q))?;
            let img = e(&s, "B").mul(&e(&s, "A")).mul(&e(&s, "C").transpose());
            mk(s, build(AlgebraSpec::a(n))?, flat(&[img]), Poisson, false)
        }
        "BA^-TB^T" => {
            let s = build(AlgebraSpec::ab(n, q))?;
            let img = e(&s, "B").mul(&inv_t(&s, "A")).mul(&e(&s, "B").transpose());
            let expected = if q == QCase::I { Neither } else { Poisson };
            mk(s, build(AlgebraSpec::a(n))?, flat(&[img]), expected, true)
        }
        "BA^-TC^T" => {
            let s = build(AlgebraSpec::abc(n, q))?;
            let img = e(&s, "B").mul(&inv_t(&s, "A")).mul(&e(&s, "C").transpose());
            let expected = if q == QCase::I { Neither } else { Poisson };
            mk(s, build(AlgebraSpec::a(n))?, flat(&[img]), expected, true)
        }
        "BC^T" => {
            let s = build(AlgebraSpec::bc(n))?;
            let img = e(&s, "B").mul(&e(&s, "C").transpose());
            mk(s, build(AlgebraSpec::a(n))?, flat(&[img]), Poisson, false)
        }
        "theta" => {
            let s = build(AlgebraSpec::bc(n))?;
            let images = flat(&[inv_t(&s, "C"), inv_t(&s, "B")]);
            mk(s.clone(), s, images, Anti, true)
        }
        "duality-ii-iii" => {
            let s = build(AlgebraSpec::ab(n, q))?;
            let t = build(AlgebraSpec::ab(n, q.dual()))?;
            let images = flat(&[inv(&s, "A"), inv_t(&s, "B")]);
            mk(s, t, images, Anti, true)
        }
        "duality-ii-iii-ABC" => {
            let s = build(AlgebraSpec::abc(n, q))?;
            let t = build(AlgebraSpec::abc(n, q.dual()))?;
            let images = flat(&[inv(&s, "A"), inv_t(&s, "C"), inv_t(&s, "B")]);
            mk(s, t, images, Anti, true)
        }
        "chain-forget" => {
            let s = build(AlgebraSpec::b_chain(n, 2, q))?;
            let images = flat(&[e(&s, "A"), e(&s, "B1")]);
            mk(s, build(AlgebraSpec::ab(n, q))?, images, Poisson, false)
        }
        "chain-compose" => {
            let s = build(AlgebraSpec::b_chain(n, 2, q))?;
            let images = flat(&[e(&s, "A"), e(&s, "B2").mul(&e(&s, "B1"))]);
            mk(s, build(AlgebraSpec::ab(n, q))?, images, Poisson, false)
        }
        "chain-shift" => {
            let s = build(AlgebraSpec::b_chain(n, 2, q))?;
            let a1 = e(&s, "B1").mul(&e(&s, "A")).mul(&e(&s, "B1").transpose());
            let images = flat(&[a1, e(&s, "B2")]);
            mk(s, build(AlgebraSpec::ab(n, q))?, images, Poisson, false)
        }
        "S-relations" => {
            let s = build(AlgebraSpec::ab(n, QCase::II))?;
            let sm = e(&s, "A").transpose().mul(&inv(&s, "B"));
            let images = flat(&[e(&s, "A"), e(&s, "B"), sm]);
            mk(s, s_extended(n, QCase::II)?, images, Poisson, true)
        }
        "S-relations-iii" => {
            let s = build(AlgebraSpec::ab(n, QCase::III))?;
            let sm = e(&s, "A").mul(&inv(&s, "B"));
            let images = flat(&[e(&s, "A"), e(&s, "B"), sm]);
            mk(s, s_extended(n, QCase::III)?, images, Poisson, true)
        }
        "F-tilde" => {
            let s = build(AlgebraSpec::fb_groupoid(n))?;
            let g = e(&s, "B").mul(&e(&s, "F")).mul(&e(&s, "B").transpose());
            let images = flat(&[e(&s, "F"), e(&s, "B"), g]);
            mk(s, f_tilde_target(n)?, images, Poisson, false)
        }
        other => return Err(Error::InvalidSpec(format!("unknown map {other}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::checks::{poisson_map_check, MapMode, Options};
    use crate::poisson::components::*;
    use crate::ring::Rational;

    #[test]
    fn component_forms_are_half_normalised() {
        let half = Agreement::Scaled(Rational::new(1, 2));
        for n in 2..=3 {
            let s = s_extended(n, QCase::II).unwrap();
            assert_eq!(compare_block(&s, "S", "B", &sb_theta_form(&s, "S", "B")), half);
            assert_eq!(compare_block(&s, "S", "A", &sa_theta_form(&s, "S", "A")), half);
            assert_eq!(compare_block(&s, "S", "S", &ss_theta_form(&s, "S")), half);
            let g = f_tilde_target(n).unwrap();
            assert_eq!(compare_block(&g, "B", "F", &bf_theta_form(&g, "B", "F")), half);
            assert_eq!(compare_block(&g, "B", "G", &b_ftilde_theta_form(&g, "B", "G")), half);
        }
    }

    #[test]
    fn every_map_has_its_expected_sign() {
        for q in [QCase::I, QCase::II, QCase::III] {
            for name in MAP_NAMES {
                let c = map_case(name, 2, q).unwrap();
                let r = poisson_map_check(&c.source, &c.images, &c.target, MapMode::Auto, &Options::modular(2, 1)).unwrap();
                assert_eq!(r.sign, c.expected, "{name} {q:?}");
            }
        }
    }
}
