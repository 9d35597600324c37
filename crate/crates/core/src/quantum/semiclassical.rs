//! First order in `hbar` of the exchange rules, with `s = exp(hbar / 2)`.
//!
//! A rule `y x -> sum c_w w` gives `[y, x] = hbar sum c1_w w + O(hbar^2)`,
//! and the induced bracket is `{y, x} = sum c1_w w` read commutatively.

use super::nc::{ExchangeSystem, PairClass};
use crate::error::{Error, Result};
use crate::poisson::algebra::{AlgebraSpec, PoissonAlgebra};
use crate::poisson::components::{compare_block, Agreement};
use crate::ring::series::Trunc3;
use crate::ring::Poly;
use crate::tensor::QCase;
use std::cell::RefCell;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct SemiclassicalReport {
    pub relation: String,
    pub n: usize,
    pub identification: Identification,
    /// Every rule reduces to plain commutation at order zero.
    pub order_zero_trivial: bool,
    /// Agreement of the induced table with the classical one.
    #[serde(serialize_with = "agreement_text")]
    pub agreement: Agreement,
}

fn agreement_text<S: serde::Serializer>(a: &Agreement, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&describe(a))
}

pub fn describe(a: &Agreement) -> String {
    match a {
        Agreement::Equal => "equal".into(),
        Agreement::Scaled(c) => format!("scaled by {c}"),
        Agreement::Differs { at, table, formula } => {
            format!("differs at {at:?}: classical {table}, induced {formula}")
        }
    }
}

/// How quantum `a_ij` is matched with a classical generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identification {
    /// `a_ij <-> A_ij`.
    Natural,
    /// `a_ij <-> A_ji`.
    TransposedA,
}

/// Induced brackets `{x, y}` for generators `x, y`, by order-one coefficients.
pub struct InducedTable<'a> {
    sys: &'a ExchangeSystem,
    alg: &'a PoissonAlgebra,
    ident: Identification,
}

impl<'a> InducedTable<'a> {
    pub fn new(sys: &'a ExchangeSystem, alg: &'a PoissonAlgebra, ident: Identification) -> Self {
        InducedTable { sys, alg, ident }
    }

    fn classical_var(&self, g: u8) -> Poly {
        let (is_a, i, j) = self.sys.gens.split(g);
        Poly::var(match (is_a, self.ident) {
            (false, _) => self.alg.var("B", i, j),
            (true, Identification::Natural) => self.alg.var("A", i, j),
            (true, Identification::TransposedA) => self.alg.var("A", j, i),
        })
    }

    /// `(order-zero mismatch, order-one bracket)` of the rule for `y x`.
    fn expand(&self, y: u8, x: u8) -> Result<(bool, Poly)> {
        let rule = self
            .sys
            .rule(y, x)
            .ok_or_else(|| Error::NonInvertibleExchange(format!("no rule for {}", self.sys.word_name(&[y, x]))))?;
        let mut order0_ok = true;
        let mut bracket = Poly::zero();
        for (w, c) in &rule.right {
            let t = Trunc3::from_s_laurent(c);
            let expect0 = if *w == [x, y] { Poly::one() } else { Poly::zero() };
            if t.0[0] != expect0 {
                order0_ok = false;
            }
            let m = &self.classical_var(w[0]) * &self.classical_var(w[1]);
            bracket.add_assign(&(&t.0[1] * &m));
        }
        Ok((order0_ok, bracket))
    }

    pub fn bracket(&self, x: u8, y: u8) -> Result<Poly> {
        use std::cmp::Ordering::*;
        Ok(match x.cmp(&y) {
            Equal => Poly::zero(),
            Greater => self.expand(x, y)?.1,
            Less => -&self.expand(y, x)?.1,
        })
    }
}

/// Expand one generating relation and compare with the classical `(A, B)`
/// table of the given case.
pub fn semiclassical_expand(
    sys: &ExchangeSystem,
    relation: &str,
    ident: Identification,
    case: QCase,
) -> Result<SemiclassicalReport> {
    let class = match relation {
        "R-BB" => PairClass::BB,
        "R-AA" => PairClass::AA,
        "R-AB" => PairClass::AB,
        other => return Err(Error::UnknownCheck(other.to_string())),
    };
    let n = sys.gens.n;
    let alg = PoissonAlgebra::build(&AlgebraSpec::ab(n, case))?;
    let table = InducedTable::new(sys, &alg, ident);
    let order_zero_trivial = sys.rules().filter(|r| r.class == class).all(|r| {
        table.expand(r.left[0], r.left[1]).map(|(ok, _)| ok).unwrap_or(false)
    });
    let g = sys.gens;
    let t = ident == Identification::TransposedA;
    let ga = move |i: usize, j: usize| if t { g.a(j, i) } else { g.a(i, j) };
    let (x_block, y_block, gx, gy): (&str, &str, Box<dyn Fn(usize, usize) -> u8>, Box<dyn Fn(usize, usize) -> u8>) =
        match class {
            PairClass::BB => ("B", "B", Box::new(move |i, j| g.b(i, j)), Box::new(move |i, j| g.b(i, j))),
            PairClass::AA => ("A", "A", Box::new(ga), Box::new(ga)),
            PairClass::AB => ("B", "A", Box::new(move |i, j| g.b(i, j)), Box::new(ga)),
        };
    let failure = RefCell::new(None);
    let formula = |i: usize, j: usize, k: usize, l: usize| match table.bracket(gx(i, j), gy(k, l)) {
        Ok(p) => p,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            Poly::zero()
        }
    };
    let agreement = compare_block(&alg, x_block, y_block, &formula);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(SemiclassicalReport { relation: relation.to_string(), n, identification: ident, order_zero_trivial, agreement })
}

/// Classical target of each relation: Lie-Poisson, the `A` table, case (ii).
pub fn semiclassical_suite(sys: &ExchangeSystem, ident: Identification) -> Result<Vec<SemiclassicalReport>> {
    ["R-BB", "R-AA", "R-AB"].iter().map(|r| semiclassical_expand(sys, r, ident, QCase::II)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::nc::{exchange_rules_from_relations, exchange_rules_with, RConvention};
    use crate::ring::Rational;
    use Identification::*;

    fn agreement(sys: &ExchangeSystem, rel: &str, ident: Identification, case: QCase) -> Agreement {
        semiclassical_expand(sys, rel, ident, case).unwrap().agreement
    }

    #[test]
    fn order_zero_is_trivial_for_every_relation() {
        let sys = exchange_rules_from_relations(2).unwrap();
        for rel in ["R-BB", "R-AA", "R-AB"] {
            assert!(semiclassical_expand(&sys, rel, Natural, QCase::II).unwrap().order_zero_trivial, "{rel}");
        }
    }

    #[test]
    fn relations_as_written() {
        for n in [2, 3] {
            let sys = exchange_rules_from_relations(n).unwrap();
            assert_eq!(agreement(&sys, "R-BB", Natural, QCase::II), Agreement::Equal);
            assert!(matches!(agreement(&sys, "R-AA", Natural, QCase::II), Agreement::Differs { .. }));
            assert_eq!(agreement(&sys, "R-AA", TransposedA, QCase::II), Agreement::Equal);
            assert!(matches!(agreement(&sys, "R-AB", Natural, QCase::II), Agreement::Differs { .. }));
            assert_eq!(agreement(&sys, "R-AB", Natural, QCase::III), Agreement::Equal);
            assert_eq!(agreement(&sys, "R-AB", TransposedA, QCase::III), Agreement::Equal);
        }
    }

    #[test]
    fn flipped_r_gives_case_two_with_opposite_sign() {
        let sys = exchange_rules_with(2, RConvention::Flipped).unwrap();
        for rel in ["R-BB", "R-AA", "R-AB"] {
            assert_eq!(agreement(&sys, rel, Natural, QCase::II), Agreement::Scaled(Rational::from_int(-1)), "{rel}");
        }
    }

    #[test]
    fn unknown_relation_is_an_error() {
        let sys = exchange_rules_from_relations(2).unwrap();
        assert!(semiclassical_expand(&sys, "R-CC", Natural, QCase::II).is_err());
    }
}
