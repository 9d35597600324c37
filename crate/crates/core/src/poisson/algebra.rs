//! Algebra specifications and generator tables.
//!
//! Every family is described by matrix blocks of generators and a list of
//! r-matrix bracket declarations `{¹X ⊗ ²Y} = sum of products`, which are
//! expanded on `V ⊗ V` and read off componentwise: `{x_ij, y_kl}` is the
//! `(i,k),(j,l)` entry. Reverse-order entries follow from antisymmetry, and
//! entries reached by two declarations must agree.

use crate::error::{Error, Result};
use crate::ring::linalg::{adjugate_ring, det_ring};
use crate::ring::{Expr, Poly, Rational, Var, VarNames};
use crate::tensor::{classical_r, lift, permutation_p, q_matrix, ConstMatrix, LegMatrix, QCase};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Coupling matrix selector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QSpec {
    Case(QCase),
    Named(QNamed),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QNamed {
    /// The permutation `P` on `V ⊗ V`; not an admissible coupling.
    #[serde(rename = "P")]
    Permutation,
}

impl QSpec {
    pub fn matrix(&self, n: usize) -> ConstMatrix {
        match self {
            QSpec::Case(c) => q_matrix(n, *c),
            QSpec::Named(QNamed::Permutation) => permutation_p(n),
        }
    }

    pub fn label(&self) -> String {
        match self {
            QSpec::Case(c) => c.label().to_string(),
            QSpec::Named(QNamed::Permutation) => "P".to_string(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "P" => Some(QSpec::Named(QNamed::Permutation)),
            other => QCase::parse(other).map(QSpec::Case),
        }
    }
}

impl From<QCase> for QSpec {
    fn from(c: QCase) -> Self {
        QSpec::Case(c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    BC,
    AB,
    ABC,
    #[serde(rename = "B-chain")]
    BChain,
    #[serde(rename = "BC-chain")]
    BCChain,
    #[serde(rename = "FB-groupoid")]
    FBGroupoid,
    #[serde(rename = "FB-triple")]
    FBTriple,
}

impl Family {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "A" => Family::A,
            "B" => Family::B,
            "BC" => Family::BC,
            "AB" => Family::AB,
            "ABC" => Family::ABC,
            "B-chain" => Family::BChain,
            "BC-chain" => Family::BCChain,
            "FB-groupoid" => Family::FBGroupoid,
            "FB-triple" => Family::FBTriple,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::BC => "BC",
            Family::AB => "AB",
            Family::ABC => "ABC",
            Family::BChain => "B-chain",
            Family::BCChain => "BC-chain",
            Family::FBGroupoid => "FB-groupoid",
            Family::FBTriple => "FB-triple",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSpec {
    pub family: Family,
    pub n: usize,
    /// Coupling between `A` and the first `B` (and `C`).
    pub q: QSpec,
    /// Couplings `Q^[k]` between consecutive chain links.
    pub chain_q: Vec<QSpec>,
    /// Chain length.
    pub j: usize,
}

impl AlgebraSpec {
    fn base(family: Family, n: usize) -> Self {
        AlgebraSpec { family, n, q: QSpec::Case(QCase::II), chain_q: Vec::new(), j: 0 }
    }

    pub fn a(n: usize) -> Self {
        Self::base(Family::A, n)
    }

    pub fn b(n: usize) -> Self {
        Self::base(Family::B, n)
    }

    pub fn bc(n: usize) -> Self {
        Self::base(Family::BC, n)
    }

    pub fn ab(n: usize, q: impl Into<QSpec>) -> Self {
        AlgebraSpec { q: q.into(), ..Self::base(Family::AB, n) }
    }

    pub fn abc(n: usize, q: impl Into<QSpec>) -> Self {
        AlgebraSpec { q: q.into(), ..Self::base(Family::ABC, n) }
    }

    /// Chain with every coupling set to `q`.
    pub fn b_chain(n: usize, j: usize, q: QCase) -> Self {
        AlgebraSpec {
            q: q.into(),
            chain_q: vec![q.into(); j.saturating_sub(1)],
            j,
            ..Self::base(Family::BChain, n)
        }
    }

    pub fn bc_chain(n: usize, j: usize, q: QCase) -> Self {
        AlgebraSpec {
            q: q.into(),
            chain_q: vec![q.into(); j.saturating_sub(1)],
            j,
            ..Self::base(Family::BCChain, n)
        }
    }

    pub fn fb_groupoid(n: usize) -> Self {
        Self::base(Family::FBGroupoid, n)
    }

    pub fn fb_triple(n: usize) -> Self {
        Self::base(Family::FBTriple, n)
    }

    pub fn with_chain_q(mut self, qs: Vec<QSpec>) -> Self {
        self.chain_q = qs;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.n > 6 {
            return Err(Error::InvalidSpec(format!("N = {} outside 1..=6", self.n)));
        }
        match self.family {
            Family::BChain | Family::BCChain => {
                if self.j < 1 {
                    return Err(Error::InvalidSpec("chain length must be at least 1".into()));
                }
                if self.chain_q.len() != self.j - 1 {
                    return Err(Error::InvalidSpec(format!(
                        "chain of length {} needs {} couplings, got {}",
                        self.j,
                        self.j - 1,
                        self.chain_q.len()
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match self.family {
            Family::AB | Family::ABC => format!("{}({})", self.family.name(), self.q.label()),
            Family::BChain | Family::BCChain => {
                let mut qs = vec![self.q.label()];
                qs.extend(self.chain_q.iter().map(QSpec::label));
                format!("{}[j={};{}]", self.family.name(), self.j, qs.join(","))
            }
            f => f.name().to_string(),
        }
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, N={}", self.label(), self.n)
    }
}

/// An `N × N` matrix of generators.
#[derive(Clone, Debug)]
pub struct Block {
    pub name: String,
    pub prefix: String,
    pub base: u32,
}

impl Block {
    pub fn var(&self, n: usize, i: usize, j: usize) -> Var {
        Var(self.base + (i * n + j) as u32)
    }
}

/// A factor in a product on `V ⊗ V`.
#[derive(Clone, Debug)]
pub enum Factor {
    Const(ConstMatrix),
    /// Block matrix placed on leg 1 or 2, optionally transposed.
    Mat { block: usize, leg: usize, transpose: bool },
}

#[derive(Clone, Debug)]
pub struct Term {
    pub coef: Rational,
    pub factors: Vec<Factor>,
}

/// `{¹X ⊗ ²Y} = sum of terms` for blocks `X = left`, `Y = right`.
#[derive(Clone, Debug)]
pub struct BracketDecl {
    pub left: usize,
    pub right: usize,
    pub terms: Vec<Term>,
}

pub fn one(block: usize) -> Factor {
    Factor::Mat { block, leg: 1, transpose: false }
}

pub fn two(block: usize) -> Factor {
    Factor::Mat { block, leg: 2, transpose: false }
}

pub fn konst(m: ConstMatrix) -> Factor {
    Factor::Const(m)
}

pub fn term(coef: i64, factors: Vec<Factor>) -> Term {
    Term { coef: Rational::from_int(coef), factors }
}

pub struct Consts {
    pub r: ConstMatrix,
    pub r_t1: ConstMatrix,
    pub r_t2: ConstMatrix,
    pub r_t12: ConstMatrix,
}

impl Consts {
    pub fn new(n: usize) -> Self {
        let r = classical_r(n);
        let r_t1 = r.partial_transpose(1).unwrap();
        let r_t2 = r.partial_transpose(2).unwrap();
        let r_t12 = r.transpose();
        Consts { r, r_t1, r_t2, r_t12 }
    }
}

/// `r ¹X ²Y − ¹X ²Y r`.
pub fn lie_poisson(c: &Consts, x: usize, y: usize, sign: i64) -> BracketDecl {
    BracketDecl {
        left: x,
        right: y,
        terms: vec![
            term(sign, vec![konst(c.r.clone()), one(x), two(y)]),
            term(-sign, vec![one(x), two(y), konst(c.r.clone())]),
        ],
    }
}

/// `r ¹A ²A − ¹A ²A r + ¹A r^{t1} ²A − ²A r^{t1} ¹A`.
pub fn a_form(c: &Consts, a: usize, sign: i64) -> BracketDecl {
    BracketDecl {
        left: a,
        right: a,
        terms: vec![
            term(sign, vec![konst(c.r.clone()), one(a), two(a)]),
            term(-sign, vec![one(a), two(a), konst(c.r.clone())]),
            term(sign, vec![one(a), konst(c.r_t1.clone()), two(a)]),
            term(-sign, vec![two(a), konst(c.r_t1.clone()), one(a)]),
        ],
    }
}

/// `¹B Q ²A + ¹B ²A Q^{t2}`.
pub fn bracket_q(n: usize, q: &QSpec, b: usize, a: usize, sign: i64) -> BracketDecl {
    let qm = q.matrix(n);
    let qt2 = qm.partial_transpose(2).unwrap();
    BracketDecl {
        left: b,
        right: a,
        terms: vec![
            term(sign, vec![one(b), konst(qm), two(a)]),
            term(sign, vec![one(b), two(a), konst(qt2)]),
        ],
    }
}

/// `¹X Q ²Y`.
pub fn chain_q(n: usize, q: &QSpec, x: usize, y: usize, sign: i64) -> BracketDecl {
    BracketDecl { left: x, right: y, terms: vec![term(sign, vec![one(x), konst(q.matrix(n)), two(y)])] }
}

/// A Poisson algebra presented by its generator table.
#[derive(Clone, Debug)]
pub struct PoissonAlgebra {
    pub spec: Option<AlgebraSpec>,
    pub label: String,
    pub n: usize,
    pub blocks: Vec<Block>,
    table: Vec<Poly>,
    declared: Vec<bool>,
    m: usize,
}

impl VarNames for PoissonAlgebra {
    fn var_name(&self, v: Var) -> String {
        if (v.0 as usize) < self.m {
            let bi = v.0 as usize / (self.n * self.n);
            let off = v.0 as usize % (self.n * self.n);
            format!("{}{}{}", self.blocks[bi].prefix, off / self.n + 1, off % self.n + 1)
        } else {
            crate::ring::poly::DefaultNames.var_name(v)
        }
    }
}

impl PoissonAlgebra {
    /// Build from blocks and declarations.
    pub fn from_decls(label: String, n: usize, blocks: &[(&str, &str)], decls: &[BracketDecl]) -> Result<Self> {
        let nn = n * n;
        let blocks: Vec<Block> = blocks
            .iter()
            .enumerate()
            .map(|(k, (name, prefix))| Block {
                name: name.to_string(),
                prefix: prefix.to_string(),
                base: (k * nn) as u32,
            })
            .collect();
        let m = blocks.len() * nn;
        let mut alg = PoissonAlgebra {
            spec: None,
            label,
            n,
            blocks,
            table: vec![Poly::zero(); m * m],
            declared: vec![false; m * m],
            m,
        };
        for d in decls {
            alg.apply_decl(d)?;
        }
        Ok(alg)
    }

    pub fn generic_matrix(&self, block: usize) -> LegMatrix<Poly> {
        let b = &self.blocks[block];
        LegMatrix::from_fn(self.n, 1, |i, j| Poly::var(b.var(self.n, i, j)))
    }

    fn leg_factor(&self, f: &Factor) -> LegMatrix<Poly> {
        match f {
            Factor::Const(c) => lift(c),
            Factor::Mat { block, leg, transpose } => {
                let mut m = self.generic_matrix(*block);
                if *transpose {
                    m = m.transpose();
                }
                LegMatrix::embed(&m, *leg, 2).expect("leg 1 or 2")
            }
        }
    }

    fn apply_decl(&mut self, d: &BracketDecl) -> Result<()> {
        let n = self.n;
        let mut total = LegMatrix::<Poly>::zero(n, 2);
        for t in &d.terms {
            let mut acc = LegMatrix::<Poly>::identity(n, 2);
            for f in &t.factors {
                acc = acc.mul(&self.leg_factor(f));
            }
            total = total.add(&acc.scale(&Poly::constant(t.coef.clone())));
        }
        let (bx, by) = (self.blocks[d.left].clone(), self.blocks[d.right].clone());
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let x = bx.var(n, i, j).0 as usize;
                        let y = by.var(n, k, l).0 as usize;
                        let v = total.component(i, j, k, l);
                        self.set_entry(x, y, v)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn set_entry(&mut self, x: usize, y: usize, v: Poly) -> Result<()> {
        let m = self.m;
        let neg = -&v;
        for (a, b, val) in [(x, y, v), (y, x, neg)] {
            let idx = a * m + b;
            if self.declared[idx] {
                if self.table[idx] != val {
                    return Err(Error::InvalidSpec(format!(
                        "inconsistent bracket {{{}, {}}}: {} vs {}",
                        self.var_name(Var(a as u32)),
                        self.var_name(Var(b as u32)),
                        self.table[idx].display_with(self),
                        val.display_with(self)
                    )));
                }
            } else {
                self.table[idx] = val;
                self.declared[idx] = true;
            }
        }
        Ok(())
    }

    /// Mark every block pair without a declaration as Poisson commuting.
    fn close_with_zero(&mut self) {
        for d in self.declared.iter_mut() {
            *d = true;
        }
    }

    pub fn build(spec: &AlgebraSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.n;
        let c = Consts::new(n);
        let mut decls = Vec::new();
        let mut blocks: Vec<(String, String)> = Vec::new();
        let push = |blocks: &mut Vec<(String, String)>, name: &str, prefix: &str| {
            blocks.push((name.to_string(), prefix.to_string()));
            blocks.len() - 1
        };
        match spec.family {
            Family::A => {
                let a = push(&mut blocks, "A", "a");
                decls.push(a_form(&c, a, 1));
            }
            Family::B => {
                let b = push(&mut blocks, "B", "b");
                decls.push(lie_poisson(&c, b, b, 1));
            }
            Family::BC => {
                let b = push(&mut blocks, "B", "b");
                let cc = push(&mut blocks, "C", "c");
                decls.push(lie_poisson(&c, b, b, 1));
                decls.push(lie_poisson(&c, cc, cc, 1));
                decls.push(lie_poisson(&c, cc, b, 1));
            }
            Family::AB => {
                let a = push(&mut blocks, "A", "a");
                let b = push(&mut blocks, "B", "b");
                decls.push(a_form(&c, a, 1));
                decls.push(lie_poisson(&c, b, b, 1));
                decls.push(bracket_q(n, &spec.q, b, a, 1));
            }
            Family::ABC => {
                let a = push(&mut blocks, "A", "a");
                let b = push(&mut blocks, "B", "b");
                let cc = push(&mut blocks, "C", "c");
                decls.push(a_form(&c, a, 1));
                decls.push(lie_poisson(&c, b, b, 1));
                decls.push(lie_poisson(&c, cc, cc, 1));
                decls.push(lie_poisson(&c, cc, b, 1));
                decls.push(bracket_q(n, &spec.q, b, a, 1));
                decls.push(bracket_q(n, &spec.q, cc, a, 1));
            }
            Family::BChain => {
                let a = push(&mut blocks, "A", "a");
                decls.push(a_form(&c, a, 1));
                let mut prev = None;
                for k in 1..=spec.j {
                    let b = push(&mut blocks, &format!("B{k}"), &format!("b{k}_"));
                    decls.push(lie_poisson(&c, b, b, 1));
                    match prev {
                        None => decls.push(bracket_q(n, &spec.q, b, a, 1)),
                        Some(p) => decls.push(chain_q(n, &spec.chain_q[k - 2], b, p, 1)),
                    }
                    prev = Some(b);
                }
            }
            Family::BCChain => {
                let a = push(&mut blocks, "A", "a");
                decls.push(a_form(&c, a, 1));
                let mut prev: Option<(usize, usize)> = None;
                for k in 1..=spec.j {
                    let b = push(&mut blocks, &format!("B{k}"), &format!("b{k}_"));
                    let cc = push(&mut blocks, &format!("C{k}"), &format!("c{k}_"));
                    decls.push(lie_poisson(&c, b, b, 1));
                    decls.push(lie_poisson(&c, cc, cc, 1));
                    decls.push(lie_poisson(&c, cc, b, 1));
                    match prev {
                        None => {
                            decls.push(bracket_q(n, &spec.q, b, a, 1));
                            decls.push(bracket_q(n, &spec.q, cc, a, 1));
                        }
                        Some((pb, pc)) => {
                            let q = &spec.chain_q[k - 2];
                            for x in [b, cc] {
                                for y in [pb, pc] {
                                    decls.push(chain_q(n, q, x, y, 1));
                                }
                            }
                        }
                    }
                    prev = Some((b, cc));
                }
            }
            Family::FBGroupoid => {
                let f = push(&mut blocks, "F", "f");
                let b = push(&mut blocks, "B", "b");
                decls.extend(groupoid_decls(&c, f, b, 1));
            }
            Family::FBTriple => {
                for (k, sign) in [(1, 1), (2, 1), (3, -1)] {
                    let f = push(&mut blocks, &format!("F{k}"), &format!("f{k}_"));
                    let b = push(&mut blocks, &format!("B{k}"), &format!("b{k}_"));
                    decls.extend(groupoid_decls(&c, f, b, sign));
                }
            }
        }
        let refs: Vec<(&str, &str)> = blocks.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let mut alg = Self::from_decls(spec.label(), n, &refs, &decls)?;
        alg.close_with_zero();
        alg.spec = Some(spec.clone());
        Ok(alg)
    }

    /// Table with only the listed declarations; other pairs stay undeclared
    /// and are skipped by map checks.
    pub fn partial(label: &str, n: usize, blocks: &[(&str, &str)], decls: &[BracketDecl]) -> Result<Self> {
        Self::from_decls(label.to_string(), n, blocks, decls)
    }

    pub fn num_generators(&self) -> usize {
        self.m
    }

    pub fn generators(&self) -> Vec<Var> {
        (0..self.m as u32).map(Var).collect()
    }

    pub fn block_index(&self, name: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.name == name)
    }

    pub fn block(&self, name: &str) -> &Block {
        &self.blocks[self.block_index(name).unwrap_or_else(|| panic!("no block {name}"))]
    }

    /// `N × N` matrix of generator polynomials for a named block.
    pub fn mat(&self, name: &str) -> LegMatrix<Poly> {
        self.generic_matrix(self.block_index(name).unwrap_or_else(|| panic!("no block {name}")))
    }

    pub fn var(&self, name: &str, i: usize, j: usize) -> Var {
        self.block(name).var(self.n, i, j)
    }

    pub fn entry(&self, x: Var, y: Var) -> &Poly {
        &self.table[x.0 as usize * self.m + y.0 as usize]
    }

    pub fn is_declared(&self, x: Var, y: Var) -> bool {
        self.declared[x.0 as usize * self.m + y.0 as usize]
    }

    pub fn is_generator(&self, v: Var) -> bool {
        (v.0 as usize) < self.m
    }

    /// `{f, g}` extended by the Leibniz rule.
    pub fn bracket(&self, f: &Poly, g: &Poly) -> Poly {
        let fv: Vec<Var> = f.variables().into_iter().filter(|v| self.is_generator(*v)).collect();
        let gv: Vec<Var> = g.variables().into_iter().filter(|v| self.is_generator(*v)).collect();
        let dg: Vec<Poly> = gv.iter().map(|&y| g.partial(y)).collect();
        let mut out = Poly::zero();
        for &x in &fv {
            let dfx = f.partial(x);
            let mut inner = Poly::zero();
            for (k, &y) in gv.iter().enumerate() {
                let e = self.entry(x, y);
                if !e.is_zero() {
                    inner.add_product(e, &dg[k], &Rational::one());
                }
            }
            if !inner.is_zero() {
                out.add_product(&dfx, &inner, &Rational::one());
            }
        }
        out
    }

    /// `{f, g}` for quotients by the quotient rule.
    pub fn bracket_ratfun(&self, f: &crate::ring::RatFun, g: &crate::ring::RatFun) -> crate::ring::RatFun {
        // {n/d, m/e} = ({n,m} d e - {n,e} d m - {d,m} n e + {d,e} n m) / (d^2 e^2)
        let (n, d) = (&f.num, &f.den);
        let (mm, e) = (&g.num, &g.den);
        let one = Poly::one();
        let mut num = &(&self.bracket(n, mm) * d) * e;
        if *e != one {
            num = &num - &(&(&self.bracket(n, e) * d) * mm);
        }
        if *d != one {
            num = &num - &(&(&self.bracket(d, mm) * n) * e);
        }
        if *d != one && *e != one {
            num = &num + &(&(&self.bracket(d, e) * n) * mm);
        }
        let den = &(d * d) * &(e * e);
        crate::ring::RatFun::new(num, den).expect("nonzero denominator")
    }

    pub fn display(&self, p: &Poly) -> String {
        p.display_with(self)
    }

    pub fn var_name_of(&self, i: usize) -> String {
        self.var_name(Var(i as u32))
    }
}

/// `{F ⊗ F} = −(A form)`, `{B ⊗ B}` Lie-Poisson, `{¹B ⊗ ²F} = ¹B r ²F − ¹B ²F r^{t1}`.
pub fn groupoid_decls(c: &Consts, f: usize, b: usize, sign: i64) -> Vec<BracketDecl> {
    vec![
        a_form(c, f, -sign),
        lie_poisson(c, b, b, sign),
        BracketDecl {
            left: b,
            right: f,
            terms: vec![
                term(sign, vec![one(b), konst(c.r.clone()), two(f)]),
                term(-sign, vec![one(b), two(f), konst(c.r_t1.clone())]),
            ],
        },
    ]
}

/// Inverse of a polynomial matrix as adjugate over determinant.
pub fn inverse_expr(m: &LegMatrix<Poly>) -> LegMatrix<Expr> {
    let n = m.n();
    let det = det_ring(n, &|r, c| m.get(r, c));
    let adj = adjugate_ring(n, &|r, c| m.get(r, c));
    let d = Expr::poly(det);
    LegMatrix::from_fn(n, 1, |i, j| Expr::poly(adj[i][j].clone()).div(&d))
}

/// Inverse of an expression matrix as adjugate over determinant.
pub fn inverse_expr_general(m: &LegMatrix<Expr>) -> LegMatrix<Expr> {
    let n = m.n();
    let det = det_ring(n, &|r, c| m.get(r, c));
    let adj = adjugate_ring(n, &|r, c| m.get(r, c));
    LegMatrix::from_fn(n, 1, |i, j| adj[i][j].div(&det))
}

pub fn to_expr(m: &LegMatrix<Poly>) -> LegMatrix<Expr> {
    m.map_into(|p| Expr::poly(p.clone()))
}

pub fn det_poly(m: &LegMatrix<Poly>) -> Poly {
    det_ring(m.n(), &|r, c| m.get(r, c))
}

pub fn det_expr(m: &LegMatrix<Expr>) -> Expr {
    det_ring(m.n(), &|r, c| m.get(r, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::components::*;
    use crate::tensor::QCase;

    fn p(alg: &PoissonAlgebra, s: &str) -> Poly {
        let b = &alg.blocks[alg.blocks.iter().position(|b| s.starts_with(&b.prefix)).unwrap()];
        let digits: Vec<usize> = s[b.prefix.len()..].chars().map(|c| c.to_digit(10).unwrap() as usize - 1).collect();
        Poly::var(b.var(alg.n, digits[0], digits[1]))
    }

    #[test]
    fn a_bracket_n2() {
        let alg = PoissonAlgebra::build(&AlgebraSpec::a(2)).unwrap();
        let (a11, a12, a21) = (p(&alg, "a11"), p(&alg, "a12"), p(&alg, "a21"));
        assert_eq!(alg.bracket(&a11, &a12), (&a11 * &a21).scale(&Rational::from_int(-2)));
        assert!(alg.bracket(&a12, &a21).is_zero());
    }

    #[test]
    fn b_bracket_n2() {
        let alg = PoissonAlgebra::build(&AlgebraSpec::b(2)).unwrap();
        let (b11, b12) = (p(&alg, "b11"), p(&alg, "b12"));
        assert_eq!(alg.bracket(&b11, &b12), -&(&b11 * &b12));
    }

    #[test]
    fn ab_mixed_n2() {
        let alg = PoissonAlgebra::build(&AlgebraSpec::ab(2, QCase::II)).unwrap();
        let (b11, b12, a11, a12) = (p(&alg, "b11"), p(&alg, "b12"), p(&alg, "a11"), p(&alg, "a12"));
        let half = &(&b11 * &a12).scale(&Rational::new(-1, 2)) - &(&b12 * &a11);
        assert_eq!(alg.bracket(&b11, &a12), half.scale(&Rational::from_int(2)));
        assert_eq!(
            compare_block(&alg, "B", "A", &ba_theta_form(&alg, "B", "A")),
            Agreement::Scaled(Rational::new(1, 2))
        );
        assert_eq!(
            compare_block(&alg, "B", "B", &b_theta_form(&alg, "B")),
            Agreement::Scaled(Rational::new(1, 2))
        );
    }

    #[test]
    fn b_against_det_pencil() {
        use crate::ring::params::LAMBDA;
        for n in 2..=3 {
            let alg = PoissonAlgebra::build(&AlgebraSpec::ab(n, QCase::II)).unwrap();
            let a = alg.mat("A");
            let lam = Poly::var(LAMBDA);
            let pencil = a.add(&a.transpose().scale(&lam));
            let d = det_poly(&pencil);
            let b11 = Poly::var(alg.var("B", 0, 0));
            assert_eq!(alg.bracket(&b11, &d), (&b11 * &d).scale(&Rational::from_int(-2)));
        }
    }

    #[test]
    fn tensor_and_component_forms_agree() {
        for n in 2..=4 {
            let a = PoissonAlgebra::build(&AlgebraSpec::a(n)).unwrap();
            assert_eq!(compare_block(&a, "A", "A", &a_sign_form(&a, "A")), Agreement::Equal, "N={n}");
            let b = PoissonAlgebra::build(&AlgebraSpec::b(n)).unwrap();
            assert_eq!(compare_block(&b, "B", "B", &b_sign_form(&b, "B")), Agreement::Equal, "N={n}");
        }
    }
}
