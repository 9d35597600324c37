//! Rational expressions as shared DAGs.
//!
//! Nodes are reference counted and immutable, and evaluation memoises on
//! node identity, so a subterm that is shared by many parents is evaluated
//! once per call. Sums and products of small polynomial leaves are folded
//! into a single polynomial leaf at construction.

use super::field::{Dual, DualField, Field};
use super::poly::{DefaultNames, Poly, Var, VarNames};
use super::ratfun::RatFun;
use super::rational::Rational;
use super::Ring;
use crate::error::{Error, Result};
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

const FOLD_LIMIT: usize = 512;

#[derive(Debug)]
pub enum Node {
    Const(Rational),
    Sym(Var),
    Poly(Poly),
    Add(Vec<Expr>),
    Sub(Expr, Expr),
    Mul(Vec<Expr>),
    Div(Expr, Expr),
    Neg(Expr),
}

#[derive(Clone, Debug)]
pub struct Expr(Arc<Node>);

impl Expr {
    fn node(n: Node) -> Self {
        Expr(Arc::new(n))
    }

    pub fn constant(c: Rational) -> Self {
        Self::node(Node::Const(c))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_int(n))
    }

    pub fn sym(v: Var) -> Self {
        Self::node(Node::Sym(v))
    }

    pub fn poly(p: Poly) -> Self {
        match p.as_constant() {
            Some(c) => Self::constant(c),
            None => Self::node(Node::Poly(p)),
        }
    }

    pub fn kind(&self) -> &Node {
        &self.0
    }

    /// The polynomial this node denotes, if it is a leaf.
    pub fn leaf_poly(&self) -> Option<Poly> {
        match &*self.0 {
            Node::Const(c) => Some(Poly::constant(c.clone())),
            Node::Sym(v) => Some(Poly::var(*v)),
            Node::Poly(p) => Some(p.clone()),
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<&Rational> {
        match &*self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_const_zero(&self) -> bool {
        self.as_constant().is_some_and(Rational::is_zero)
    }

    pub fn is_const_one(&self) -> bool {
        self.as_constant().is_some_and(Rational::is_one)
    }

    pub fn add(&self, o: &Expr) -> Expr {
        if self.is_const_zero() {
            return o.clone();
        }
        if o.is_const_zero() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.leaf_poly(), o.leaf_poly()) {
            if a.len() + b.len() <= FOLD_LIMIT {
                return Expr::poly(&a + &b);
            }
        }
        Self::node(Node::Add(vec![self.clone(), o.clone()]))
    }

    pub fn sum(items: impl IntoIterator<Item = Expr>) -> Expr {
        let mut leaf = Poly::zero();
        let mut rest = Vec::new();
        for e in items {
            match e.leaf_poly() {
                Some(p) if leaf.len() + p.len() <= FOLD_LIMIT => leaf.add_assign(&p),
                _ => rest.push(e),
            }
        }
        if !leaf.is_zero() {
            rest.push(Expr::poly(leaf));
        }
        match rest.len() {
            0 => Expr::int(0),
            1 => rest.pop().unwrap(),
            _ => Self::node(Node::Add(rest)),
        }
    }

    pub fn sub(&self, o: &Expr) -> Expr {
        if o.is_const_zero() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.leaf_poly(), o.leaf_poly()) {
            if a.len() + b.len() <= FOLD_LIMIT {
                return Expr::poly(&a - &b);
            }
        }
        Self::node(Node::Sub(self.clone(), o.clone()))
    }

    pub fn neg(&self) -> Expr {
        if let Some(p) = self.leaf_poly() {
            return Expr::poly(-&p);
        }
        Self::node(Node::Neg(self.clone()))
    }

    pub fn mul(&self, o: &Expr) -> Expr {
        if self.is_const_zero() || o.is_const_zero() {
            return Expr::int(0);
        }
        if self.is_const_one() {
            return o.clone();
        }
        if o.is_const_one() {
            return self.clone();
        }
        if let (Some(a), Some(b)) = (self.leaf_poly(), o.leaf_poly()) {
            if a.len() * b.len() <= FOLD_LIMIT {
                return Expr::poly(&a * &b);
            }
        }
        Self::node(Node::Mul(vec![self.clone(), o.clone()]))
    }

    pub fn product(items: impl IntoIterator<Item = Expr>) -> Expr {
        items.into_iter().fold(Expr::int(1), |acc, e| acc.mul(&e))
    }

    pub fn div(&self, o: &Expr) -> Expr {
        if o.is_const_one() {
            return self.clone();
        }
        if let Some(c) = o.as_constant() {
            if let Some(inv) = c.recip() {
                return self.mul(&Expr::constant(inv));
            }
        }
        Self::node(Node::Div(self.clone(), o.clone()))
    }

    pub fn pow(&self, e: i32) -> Expr {
        let base = if e < 0 { Expr::int(1).div(self) } else { self.clone() };
        (0..e.unsigned_abs()).fold(Expr::int(1), |acc, _| acc.mul(&base))
    }

    fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn eval<F: Field>(
        &self,
        field: &F,
        point: &dyn Fn(Var) -> Option<F::Elem>,
    ) -> Result<F::Elem> {
        let mut memo = HashMap::new();
        self.eval_memo(field, point, &mut memo)
    }

    fn eval_memo<F: Field>(
        &self,
        field: &F,
        point: &dyn Fn(Var) -> Option<F::Elem>,
        memo: &mut HashMap<usize, F::Elem>,
    ) -> Result<F::Elem> {
        if let Some(v) = memo.get(&self.key()) {
            return Ok(v.clone());
        }
        let v = match &*self.0 {
            Node::Const(c) => field.from_rational(c).ok_or(Error::DivisionByZero)?,
            Node::Sym(s) => point(*s).ok_or(Error::UnboundVariable(s.0))?,
            Node::Poly(p) => p.eval(field, point)?,
            Node::Add(xs) => {
                let mut acc = field.zero();
                for x in xs {
                    acc = field.add(&acc, &x.eval_memo(field, point, memo)?);
                }
                acc
            }
            Node::Mul(xs) => {
                let mut acc = field.one();
                for x in xs {
                    acc = field.mul(&acc, &x.eval_memo(field, point, memo)?);
                }
                acc
            }
            Node::Sub(a, b) => {
                let a = a.eval_memo(field, point, memo)?;
                field.sub(&a, &b.eval_memo(field, point, memo)?)
            }
            Node::Neg(a) => field.neg(&a.eval_memo(field, point, memo)?),
            Node::Div(a, b) => {
                let a = a.eval_memo(field, point, memo)?;
                let b = b.eval_memo(field, point, memo)?;
                field.div(&a, &b)?
            }
        };
        memo.insert(self.key(), v.clone());
        Ok(v)
    }

    /// `(f(x), df/dv(x))` by forward-mode dual numbers.
    pub fn derivative_eval<F: Field>(
        &self,
        field: &F,
        point: &dyn Fn(Var) -> Option<F::Elem>,
        v: Var,
    ) -> Result<(F::Elem, F::Elem)> {
        let df = DualField(field.clone());
        let at = |w: Var| {
            point(w).map(|x| if w == v { df.variable(x) } else { df.constant(x) })
        };
        let Dual { value, deriv } = self.eval(&df, &at)?;
        Ok((value, deriv))
    }

    /// Value and gradient with respect to `vars`.
    pub fn gradient_eval<F: Field>(
        &self,
        field: &F,
        point: &dyn Fn(Var) -> Option<F::Elem>,
        vars: &[Var],
    ) -> Result<(F::Elem, Vec<F::Elem>)> {
        let free = self.free_vars();
        let value = self.eval(field, point)?;
        let mut grad = Vec::with_capacity(vars.len());
        for &v in vars {
            if free.contains(&v) {
                grad.push(self.derivative_eval(field, point, v)?.1);
            } else {
                grad.push(field.zero());
            }
        }
        Ok((value, grad))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut seen = std::collections::HashSet::new();
        let mut out = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.key()) {
                continue;
            }
            match &*e.0 {
                Node::Const(_) => {}
                Node::Sym(v) => {
                    out.insert(*v);
                }
                Node::Poly(p) => out.extend(p.variables()),
                Node::Add(xs) | Node::Mul(xs) => stack.extend(xs.iter().cloned()),
                Node::Sub(a, b) | Node::Div(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                Node::Neg(a) => stack.push(a.clone()),
            }
        }
        out
    }

    pub fn has_division(&self) -> bool {
        let mut stack = vec![self.clone()];
        let mut seen = std::collections::HashSet::new();
        while let Some(e) = stack.pop() {
            if !seen.insert(e.key()) {
                continue;
            }
            match &*e.0 {
                Node::Div(..) => return true,
                Node::Add(xs) | Node::Mul(xs) => stack.extend(xs.iter().cloned()),
                Node::Sub(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                Node::Neg(a) => stack.push(a.clone()),
                _ => {}
            }
        }
        false
    }

    /// Expand to a polynomial; `None` when a division is present.
    pub fn to_poly(&self) -> Option<Poly> {
        if self.has_division() {
            return None;
        }
        let r = self.to_ratfun().ok()?;
        Some(r.num)
    }

    /// Expand to a quotient of polynomials.
    pub fn to_ratfun(&self) -> Result<RatFun> {
        let mut memo = HashMap::new();
        self.ratfun_memo(&mut memo)
    }

    fn ratfun_memo(&self, memo: &mut HashMap<usize, RatFun>) -> Result<RatFun> {
        if let Some(v) = memo.get(&self.key()) {
            return Ok(v.clone());
        }
        let v = match &*self.0 {
            Node::Const(c) => RatFun::constant(c.clone()),
            Node::Sym(s) => RatFun::from_poly(Poly::var(*s)),
            Node::Poly(p) => RatFun::from_poly(p.clone()),
            Node::Add(xs) => {
                let mut acc = RatFun::zero();
                for x in xs {
                    acc = acc.add(&x.ratfun_memo(memo)?);
                }
                acc
            }
            Node::Mul(xs) => {
                let mut acc = RatFun::one();
                for x in xs {
                    acc = acc.mul(&x.ratfun_memo(memo)?);
                }
                acc
            }
            Node::Sub(a, b) => a.ratfun_memo(memo)?.sub(&b.ratfun_memo(memo)?),
            Node::Neg(a) => a.ratfun_memo(memo)?.neg(),
            Node::Div(a, b) => a.ratfun_memo(memo)?.div(&b.ratfun_memo(memo)?)?,
        };
        memo.insert(self.key(), v.clone());
        Ok(v)
    }

    pub fn display_with(&self, names: &dyn VarNames) -> String {
        match self.to_ratfun() {
            Ok(r) if r.den == Poly::one() => r.num.display_with(names),
            Ok(r) => format!("({}) / ({})", r.num.display_with(names), r.den.display_with(names)),
            Err(e) => format!("<{e}>"),
        }
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.display_with(&DefaultNames))
    }
}

impl From<Poly> for Expr {
    fn from(p: Poly) -> Self {
        Expr::poly(p)
    }
}

impl Ring for Expr {
    fn zero() -> Self {
        Expr::int(0)
    }
    fn one() -> Self {
        Expr::int(1)
    }
    fn add(&self, o: &Self) -> Self {
        Expr::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Expr::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Expr::mul(self, o)
    }
    fn neg(&self) -> Self {
        Expr::neg(self)
    }
    fn is_zero(&self) -> bool {
        self.is_const_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::field::{PrimeField, RationalField};

    #[test]
    fn reciprocal_derivative() {
        let x = Var(0);
        let e = Expr::int(1).div(&Expr::sym(x));
        let at = |_: Var| Some(Rational::from_int(2));
        let (v, d) = e.derivative_eval(&RationalField, &at, x).unwrap();
        assert_eq!(v, Rational::new(1, 2));
        assert_eq!(d, Rational::new(-1, 4));
    }

    #[test]
    fn division_by_zero_is_reported() {
        let x = Var(0);
        let e = Expr::int(1).div(&Expr::sym(x));
        let at = |_: Var| Some(0u64);
        assert_eq!(e.eval(&PrimeField::default_field(), &at), Err(Error::DivisionByZero));
    }

    #[test]
    fn shared_subterms_evaluate_once() {
        // A deep chain of squarings would be exponential without memoisation.
        let x = Expr::sym(Var(0));
        let mut e = x.add(&Expr::int(1)).div(&x);
        for _ in 0..60 {
            e = Expr::node(Node::Mul(vec![e.clone(), e.clone()]));
        }
        let at = |_: Var| Some(1u64);
        let f = PrimeField::default_field();
        let v = e.eval(&f, &at).unwrap();
        // (2/1)^(2^60) mod p; 2 has order 61 modulo 2^61-1.
        let k = (1u128 << 60) % 61;
        assert_eq!(v, f.pow(&2, k as i32).unwrap());
    }
}
