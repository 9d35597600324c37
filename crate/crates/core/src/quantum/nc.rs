//! Noncommutative polynomials in the entries of `B` and `A`, exchange rules
//! solved from the quantum relations, and normal ordering.
//!
//! Generators are numbered `b_ij = i n + j` and `a_ij = n^2 + i n + j`. A word
//! is normal when its letters are non-decreasing, so every `b` sits left of
//! every `a`.

use crate::error::{Error, Result};
use crate::ring::params::S;
use crate::ring::{Poly, RatFun, Rational, Ring};
use crate::tensor::{q_half, quantum_r, LegMatrix};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

pub type Word = Vec<u8>;

/// Finitely supported map from words to Laurent polynomials in `s`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NcPoly {
    terms: BTreeMap<Word, Poly>,
}

impl NcPoly {
    pub fn constant(c: Poly) -> Self {
        Self::term(Word::new(), c)
    }

    pub fn generator(g: u8) -> Self {
        Self::term(vec![g], Poly::one())
    }

    pub fn term(w: Word, c: Poly) -> Self {
        let mut p = NcPoly::default();
        p.add_term(w, &c);
        p
    }

    pub fn add_term(&mut self, w: Word, c: &Poly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w).or_insert_with(Poly::zero);
        slot.add_assign(c);
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Poly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &[u8]) -> Poly {
        self.terms.get(w).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Poly) -> NcPoly {
        let mut out = NcPoly::default();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), &(c * v));
        }
        out
    }

    /// Substitute `s = 1`.
    pub fn at_q_one(&self) -> NcPoly {
        let mut out = NcPoly::default();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), &Poly::constant(at_s_one(v)));
        }
        out
    }

    /// Sort every word, as in the commutative quotient.
    pub fn commutative(&self) -> NcPoly {
        let mut out = NcPoly::default();
        for (w, v) in &self.terms {
            let mut s = w.clone();
            s.sort_unstable();
            out.add_term(s, v);
        }
        out
    }

    pub fn display(&self, gens: &Generators) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word: Vec<String> = w.iter().map(|&g| gens.name(g)).collect();
                format!("({})*{}", c, if word.is_empty() { "1".to_string() } else { word.join("*") })
            })
            .collect();
        parts.join(" + ")
    }
}

impl Ring for NcPoly {
    fn zero() -> Self {
        NcPoly::default()
    }

    fn one() -> Self {
        NcPoly::constant(Poly::one())
    }

    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, v) in &o.terms {
            out.add_term(w.clone(), v);
        }
        out
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = NcPoly::default();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, &(c1 * c2));
            }
        }
        out
    }

    fn neg(&self) -> Self {
        self.scale(&Poly::int(-1))
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

fn at_s_one(p: &Poly) -> Rational {
    p.terms().fold(Rational::zero(), |acc, (_, c)| &acc + c)
}

/// Generator numbering for size `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generators {
    pub n: usize,
}

impl Generators {
    pub fn b(&self, i: usize, j: usize) -> u8 {
        (i * self.n + j) as u8
    }

    pub fn a(&self, i: usize, j: usize) -> u8 {
        (self.n * self.n + i * self.n + j) as u8
    }

    pub fn count(&self) -> usize {
        2 * self.n * self.n
    }

    pub fn is_a(&self, g: u8) -> bool {
        g as usize >= self.n * self.n
    }

    /// `(is_a, i, j)` of a generator.
    pub fn split(&self, g: u8) -> (bool, usize, usize) {
        let nn = self.n * self.n;
        let k = g as usize % nn;
        (self.is_a(g), k / self.n, k % self.n)
    }

    pub fn name(&self, g: u8) -> String {
        let (a, i, j) = self.split(g);
        format!("{}{}{}", if a { 'a' } else { 'b' }, i + 1, j + 1)
    }

    pub fn b_matrix(&self) -> LegMatrix<NcPoly> {
        LegMatrix::from_fn(self.n, 1, |i, j| NcPoly::generator(self.b(i, j)))
    }

    pub fn a_matrix(&self) -> LegMatrix<NcPoly> {
        LegMatrix::from_fn(self.n, 1, |i, j| NcPoly::generator(self.a(i, j)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PairClass {
    #[serde(rename = "b.b")]
    BB,
    #[serde(rename = "a.a")]
    AA,
    #[serde(rename = "a.b")]
    AB,
}

impl PairClass {
    pub fn relation_id(self) -> &'static str {
        match self {
            PairClass::BB => "R-BB",
            PairClass::AA => "R-AA",
            PairClass::AB => "R-AB",
        }
    }
}

/// `left[0] left[1] -> sum c w` over normal words `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExchangeRule {
    pub class: PairClass,
    pub left: [u8; 2],
    pub right: Vec<([u8; 2], Poly)>,
}

/// Matrix `R_12^{t1}(q)` or its `q -> 1/q` replacement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum T1Choice {
    Q,
    QInverse,
}

/// Which matrix plays `R_12(q)` in the relations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RConvention {
    /// The trigonometric `R(q)` of the identity catalog.
    #[default]
    AsWritten,
    /// Its flip `R_21(q) = P R_12(q) P`.
    Flipped,
}

fn r_nc(n: usize, inverse: bool, conv: RConvention) -> Result<LegMatrix<NcPoly>> {
    let r = quantum_r(n, &q_half(inverse))?;
    let r = match conv {
        RConvention::AsWritten => r,
        RConvention::Flipped => r.transpose(),
    };
    Ok(r.map_into(|p| NcPoly::constant(p.clone())))
}

/// Entries of `R 1A R^{t1} 2A - 2A R^{t1} 1A R` for a matrix of operators.
pub fn aa_residual(a: &LegMatrix<NcPoly>, t1: T1Choice, conv: RConvention) -> Result<LegMatrix<NcPoly>> {
    let n = a.n();
    let r = r_nc(n, false, conv)?;
    let rt1 = r_nc(n, t1 == T1Choice::QInverse, conv)?.partial_transpose(1)?;
    let a1 = LegMatrix::embed_legs(a, &[1], 2)?;
    let a2 = LegMatrix::embed_legs(a, &[2], 2)?;
    Ok(r.mul(&a1).mul(&rt1).mul(&a2).sub(&a2.mul(&rt1).mul(&a1).mul(&r)))
}

/// Entries of `R 1B 2B - 2B 1B R`.
pub fn bb_residual(b: &LegMatrix<NcPoly>, conv: RConvention) -> Result<LegMatrix<NcPoly>> {
    let n = b.n();
    let r = r_nc(n, false, conv)?;
    let b1 = LegMatrix::embed_legs(b, &[1], 2)?;
    let b2 = LegMatrix::embed_legs(b, &[2], 2)?;
    Ok(r.mul(&b1).mul(&b2).sub(&b2.mul(&b1).mul(&r)))
}

/// Entries of `2A 1B R - 1B R^{t2}(1/q) 2A`.
pub fn ab_residual(a: &LegMatrix<NcPoly>, b: &LegMatrix<NcPoly>, conv: RConvention) -> Result<LegMatrix<NcPoly>> {
    let n = b.n();
    let r = r_nc(n, false, conv)?;
    let rt2 = r_nc(n, true, conv)?.partial_transpose(2)?;
    let b1 = LegMatrix::embed_legs(b, &[1], 2)?;
    let a2 = LegMatrix::embed_legs(a, &[2], 2)?;
    Ok(a2.mul(&b1).mul(&r).sub(&b1.mul(&rt2).mul(&a2)))
}

fn entries(m: &LegMatrix<NcPoly>) -> Vec<NcPoly> {
    m.nonzeros().into_iter().map(|(_, _, v)| v).filter(|v| !v.is_zero()).collect()
}

/// Solve the degree-two relations of one class for the reversed words.
fn solve_class(class: PairClass, gens: &Generators, rels: &[NcPoly]) -> Result<Vec<ExchangeRule>> {
    let reversed = |w: &Word| w.len() == 2 && w[0] > w[1];
    let mut pivots: Vec<Word> = Vec::new();
    let mut normal: Vec<Word> = Vec::new();
    for r in rels {
        for (w, _) in r.terms() {
            if w.len() != 2 {
                return Err(Error::NonInvertibleExchange(format!("{} has a term of degree {}", class.relation_id(), w.len())));
            }
            let list = if reversed(w) { &mut pivots } else { &mut normal };
            if !list.contains(w) {
                list.push(w.clone());
            }
        }
    }
    pivots.sort();
    normal.sort();
    let cols: Vec<Word> = pivots.iter().chain(normal.iter()).cloned().collect();
    let index: HashMap<&Word, usize> = cols.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let mut rows: Vec<Vec<RatFun>> = rels
        .iter()
        .map(|r| {
            let mut row = vec![RatFun::zero(); cols.len()];
            for (w, c) in r.terms() {
                row[index[w]] = RatFun::from_poly(c.clone());
            }
            row
        })
        .collect();
    let mut rank = 0;
    for p in 0..pivots.len() {
        let Some(k) = (rank..rows.len()).find(|&k| !rows[k][p].is_zero()) else {
            let w = &pivots[p];
            return Err(Error::NonInvertibleExchange(format!(
                "no relation solves for {}{}",
                gens.name(w[0]),
                gens.name(w[1])
            )));
        };
        rows.swap(rank, k);
        let inv = rows[rank][p].inv()?;
        rows[rank] = rows[rank].iter().map(|v| v.mul(&inv)).collect();
        for k in 0..rows.len() {
            if k != rank && !rows[k][p].is_zero() {
                let f = rows[k][p].clone();
                let piv = rows[rank].clone();
                for (x, y) in rows[k].iter_mut().zip(&piv) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        rank += 1;
    }
    if let Some(extra) = rows[rank..].iter().find(|r| r.iter().any(|v| !v.is_zero())) {
        let at = extra.iter().position(|v| !v.is_zero()).unwrap();
        let w = &cols[at];
        return Err(Error::NonInvertibleExchange(format!(
            "{} leaves a relation among ordered words at {}{}",
            class.relation_id(),
            gens.name(w[0]),
            gens.name(w[1])
        )));
    }
    let mut out = Vec::new();
    for (p, w) in pivots.iter().enumerate() {
        let mut right = Vec::new();
        for (c, nw) in normal.iter().enumerate() {
            let v = &rows[p][pivots.len() + c];
            if v.is_zero() {
                continue;
            }
            let coef = v.neg().as_poly().ok_or_else(|| {
                Error::NonInvertibleExchange(format!("coefficient of {}{} is not a Laurent polynomial", gens.name(w[0]), gens.name(w[1])))
            })?;
            right.push(([nw[0], nw[1]], coef));
        }
        out.push(ExchangeRule { class, left: [w[0], w[1]], right });
    }
    Ok(out)
}

/// Rewriting system for the quantum `(A, B)` algebra of size `n`.
pub struct ExchangeSystem {
    pub gens: Generators,
    pub convention: RConvention,
    rules: BTreeMap<[u8; 2], ExchangeRule>,
    memo: Mutex<HashMap<Word, NcPoly>>,
}

impl std::fmt::Debug for ExchangeSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExchangeSystem").field("n", &self.gens.n).field("rules", &self.rules.len()).finish()
    }
}

impl ExchangeSystem {
    pub fn rules(&self) -> impl Iterator<Item = &ExchangeRule> {
        self.rules.values()
    }

    pub fn rule(&self, x: u8, y: u8) -> Option<&ExchangeRule> {
        self.rules.get(&[x, y])
    }

    fn rule_poly(&self, r: &ExchangeRule) -> NcPoly {
        let mut p = NcPoly::default();
        for (w, c) in &r.right {
            p.add_term(w.to_vec(), c);
        }
        p
    }

    fn nf_word(&self, w: &[u8], cap: usize, depth: usize) -> Result<NcPoly> {
        if w.len() > cap {
            return Err(Error::DegreeCapExceeded(w.len(), cap));
        }
        let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1]) else {
            return Ok(NcPoly::term(w.to_vec(), Poly::one()));
        };
        if let Some(hit) = self.memo.lock().expect("memo lock").get(w).cloned() {
            return Ok(hit);
        }
        if depth > 64 * (cap + 1) {
            return Err(Error::NonConfluent(format!("rewriting of {} does not terminate", self.word_name(w))));
        }
        let rule = self
            .rules
            .get(&[w[i], w[i + 1]])
            .ok_or_else(|| Error::NonInvertibleExchange(format!("no rule for {}", self.word_name(&w[i..i + 2]))))?;
        let mut out = NcPoly::default();
        for (pair, c) in &rule.right {
            let mut nw = w[..i].to_vec();
            nw.extend_from_slice(pair);
            nw.extend_from_slice(&w[i + 2..]);
            let sub = self.nf_word(&nw, cap, depth + 1)?;
            out = out.add(&sub.scale(c));
        }
        self.memo.lock().expect("memo lock").insert(w.to_vec(), out.clone());
        Ok(out)
    }

    pub fn word_name(&self, w: &[u8]) -> String {
        w.iter().map(|&g| self.gens.name(g)).collect::<Vec<_>>().join("*")
    }

    /// Normal form with leftmost rewriting.
    pub fn normal_form(&self, p: &NcPoly, cap: usize) -> Result<NcPoly> {
        let mut out = NcPoly::default();
        for (w, c) in p.terms() {
            out = out.add(&self.nf_word(w, cap, 0)?.scale(c));
        }
        Ok(out)
    }

    /// Words `x y z` with `x > y > z` whose two rewritings disagree.
    pub fn confluence_failures(&self) -> Result<Vec<Word>> {
        let m = self.gens.count() as u8;
        let mut bad = Vec::new();
        for x in 0..m {
            for y in 0..x {
                for z in 0..y {
                    let left = NcPoly::generator(z);
                    let right = NcPoly::generator(x);
                    let via_left = self.rule_poly(&self.rules[&[x, y]]).mul(&left);
                    let via_right = right.mul(&self.rule_poly(&self.rules[&[y, z]]));
                    if self.normal_form(&via_left, 3)? != self.normal_form(&via_right, 3)? {
                        bad.push(vec![x, y, z]);
                    }
                }
            }
        }
        Ok(bad)
    }

    /// Fails with `NonConfluent` on the first ambiguous overlap.
    pub fn check_confluent(&self) -> Result<()> {
        match self.confluence_failures()?.first() {
            Some(w) => Err(Error::NonConfluent(self.word_name(w))),
            None => Ok(()),
        }
    }
}

/// Solve `R-BB`, `R-AA` and `R-AB` entry-wise for the reversed products.
pub fn exchange_rules_from_relations(n: usize) -> Result<ExchangeSystem> {
    exchange_rules_with(n, RConvention::AsWritten)
}

pub fn exchange_rules_with(n: usize, conv: RConvention) -> Result<ExchangeSystem> {
    if n < 2 {
        return Err(Error::InvalidSpec("exchange rules need n >= 2".into()));
    }
    let gens = Generators { n };
    let (a, b) = (gens.a_matrix(), gens.b_matrix());
    let mut rules = BTreeMap::new();
    for (class, res) in [
        (PairClass::BB, bb_residual(&b, conv)?),
        (PairClass::AA, aa_residual(&a, T1Choice::Q, conv)?),
        (PairClass::AB, ab_residual(&a, &b, conv)?),
    ] {
        for r in solve_class(class, &gens, &entries(&res))? {
            rules.insert(r.left, r);
        }
    }
    let expected = gens.count() * (gens.count() - 1) / 2;
    if rules.len() != expected {
        return Err(Error::NonInvertibleExchange(format!("{} rules for {} reversed pairs", rules.len(), expected)));
    }
    Ok(ExchangeSystem { gens, convention: conv, rules, memo: Mutex::new(HashMap::new()) })
}

/// Normal form after checking the degree-three overlaps.
pub fn nc_normal_form(p: &NcPoly, sys: &ExchangeSystem, degree_cap: usize) -> Result<NcPoly> {
    sys.check_confluent()?;
    sys.normal_form(p, degree_cap)
}

/// Entry-wise comparison of `R-AA` for `B A B^T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AutomorphismReport {
    pub pass: bool,
    /// First entry `(row, column)` whose residual is nonzero.
    pub witness: Option<(usize, usize)>,
    pub words_reduced: usize,
}

/// Check that `B A B^T` satisfies `R-AA` (or the `t1` replacement).
pub fn quantum_automorphism_check(sys: &ExchangeSystem, t1: T1Choice, degree_cap: usize) -> Result<AutomorphismReport> {
    sys.check_confluent()?;
    let (a, b) = (sys.gens.a_matrix(), sys.gens.b_matrix());
    let image = b.mul(&a).mul(&b.transpose());
    let res = aa_residual(&image, t1, sys.convention)?;
    let mut words = 0;
    for (r, c, v) in res.nonzeros() {
        words += v.len();
        if !sys.normal_form(&v, degree_cap)?.is_zero() {
            return Ok(AutomorphismReport { pass: false, witness: Some((r, c)), words_reduced: words });
        }
    }
    Ok(AutomorphismReport { pass: true, witness: None, words_reduced: words })
}

/// `q - 1/q` as a Laurent polynomial in `s`.
pub fn q_minus_q_inverse() -> Poly {
    &Poly::var_pow(S, 2) - &Poly::var_pow(S, -2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys() -> ExchangeSystem {
        exchange_rules_from_relations(2).unwrap()
    }

    #[test]
    fn rules_cover_every_reversed_pair_and_preserve_classes() {
        let s = sys();
        assert_eq!(s.rules().count(), 28);
        for r in s.rules() {
            let left_a = r.left.iter().filter(|&&g| s.gens.is_a(g)).count();
            for (w, _) in &r.right {
                assert!(w[0] <= w[1]);
                assert_eq!(w.iter().filter(|&&g| s.gens.is_a(g)).count(), left_a);
            }
        }
    }

    #[test]
    fn rules_commute_at_q_one() {
        let s = sys();
        for r in s.rules() {
            let mut p = NcPoly::default();
            for (w, c) in &r.right {
                p.add_term(w.to_vec(), c);
            }
            let expect = NcPoly::term(vec![r.left[1], r.left[0]], Poly::one());
            assert_eq!(p.at_q_one(), expect, "{}", s.word_name(&r.left));
        }
    }

    #[test]
    fn hand_derived_rules() {
        // Entry (11,11) of R-AB gives q a11 b11 = q^-1 b11 a11; entry (11,12)
        // of R-BB gives b12 b11 = q b11 b12.
        let s = sys();
        let g = s.gens;
        let ab = s.rule(g.a(0, 0), g.b(0, 0)).unwrap();
        assert_eq!(ab.right, vec![([g.b(0, 0), g.a(0, 0)], Poly::var_pow(S, -4))]);
        let bb = s.rule(g.b(0, 1), g.b(0, 0)).unwrap();
        assert_eq!(bb.right, vec![([g.b(0, 0), g.b(0, 1)], Poly::var_pow(S, 2))]);
        let cross = s.rule(g.b(1, 1), g.b(0, 0)).unwrap();
        assert_eq!(
            cross.right,
            vec![([g.b(0, 0), g.b(1, 1)], Poly::one()), ([g.b(0, 1), g.b(1, 0)], q_minus_q_inverse())]
        );
    }

    #[test]
    fn ordered_word_is_its_own_normal_form() {
        let s = sys();
        let g = s.gens;
        let w = NcPoly::term(vec![g.b(0, 0), g.a(0, 0)], Poly::one());
        assert_eq!(nc_normal_form(&w, &s, 4).unwrap(), w);
    }

    #[test]
    fn a_times_b_rewrites_to_b_times_a_words() {
        let s = sys();
        let g = s.gens;
        let w = NcPoly::term(vec![g.a(0, 0), g.b(0, 0)], Poly::one());
        let nf = nc_normal_form(&w, &s, 4).unwrap();
        assert!(!nf.is_empty());
        for (word, _) in nf.terms() {
            assert!(!g.is_a(word[0]) && g.is_a(word[1]));
        }
    }

    #[test]
    fn generating_relations_reduce_to_zero() {
        let s = sys();
        let g = s.gens;
        let (a, b) = (g.a_matrix(), g.b_matrix());
        let c = RConvention::AsWritten;
        for res in [bb_residual(&b, c).unwrap(), aa_residual(&a, T1Choice::Q, c).unwrap(), ab_residual(&a, &b, c).unwrap()] {
            for (_, _, v) in res.nonzeros() {
                assert!(s.normal_form(&v, 2).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn overlaps_are_confluent() {
        assert!(sys().confluence_failures().unwrap().is_empty());
    }

    #[test]
    fn degree_cap_is_enforced() {
        let s = sys();
        let g = s.gens;
        let w = NcPoly::term(vec![g.a(1, 1), g.a(0, 0), g.b(1, 1), g.b(0, 0), g.a(0, 1)], Poly::one());
        assert!(matches!(s.normal_form(&w, 4), Err(Error::DegreeCapExceeded(5, 4))));
    }

    #[test]
    fn automorphism_and_negative_control() {
        let s = sys();
        assert!(quantum_automorphism_check(&s, T1Choice::Q, 6).unwrap().pass);
        let bad = quantum_automorphism_check(&s, T1Choice::QInverse, 6).unwrap();
        assert!(!bad.pass && bad.witness.is_some());
    }

    #[test]
    fn flipped_convention_is_also_consistent() {
        let s = exchange_rules_with(2, RConvention::Flipped).unwrap();
        assert!(s.confluence_failures().unwrap().is_empty());
        assert!(quantum_automorphism_check(&s, T1Choice::Q, 6).unwrap().pass);
    }

    #[test]
    fn automorphism_needs_degree_six() {
        let s = sys();
        assert!(matches!(quantum_automorphism_check(&s, T1Choice::Q, 4), Err(Error::DegreeCapExceeded(6, 4))));
    }
}
