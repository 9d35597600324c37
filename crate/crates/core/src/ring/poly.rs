//! Sparse multivariate Laurent polynomials over the rationals.
//!
//! Terms live in a `BTreeMap` keyed by monomials ordered lexicographically by
//! variable id (smaller id is more significant), so iteration order is
//! canonical and the leading term is the last entry. Zero coefficients are
//! never stored.

use super::field::Field;
use super::rational::Rational;
use crate::error::{Error, Result};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(pub u32);

/// Parameters that are not algebra generators.
pub mod params {
    use super::Var;
    const BASE: u32 = 0x4000_0000;
    /// `q = s^2`.
    pub const S: Var = Var(BASE);
    pub const LAMBDA: Var = Var(BASE + 1);
    pub const MU: Var = Var(BASE + 2);
    pub const RHO: Var = Var(BASE + 3);
    pub const NU: Var = Var(BASE + 4);
    pub const HBAR: Var = Var(BASE + 5);
    /// Spectral variable of determinant pencils.
    pub const T: Var = Var(BASE + 6);
    pub const U: Var = Var(BASE + 7);
    pub const W: Var = Var(BASE + 8);

    pub fn name(v: Var) -> Option<&'static str> {
        Some(match v {
            S => "s",
            LAMBDA => "lambda",
            MU => "mu",
            RHO => "rho",
            NU => "nu",
            HBAR => "hbar",
            T => "t",
            U => "u",
            W => "w",
            _ => return None,
        })
    }
}

/// Product of variables with nonzero integer exponents, sorted by variable.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, i32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, e: i32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial(smallvec::smallvec![(v, e)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, i32)>) -> Self {
        let mut map: BTreeMap<Var, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, i32)] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.0.iter().find(|(w, _)| *w == v).map(|&(_, e)| e).unwrap_or(0)
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    /// `self / other` if every exponent stays non-negative where `self` is.
    fn divides_into(&self, num: &Monomial) -> bool {
        let q = num.mul(&self.inv());
        q.0.iter().all(|&(_, e)| e > 0)
    }

    /// Divide out `v` entirely, returning the exponent removed.
    fn without(&self, v: Var) -> (Monomial, i32) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|&&(w, k)| {
                if w == v {
                    e = k;
                    false
                } else {
                    true
                }
            })
            .copied()
            .collect();
        (Monomial(rest), e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, ea)), None) => return ea.cmp(&0),
                (None, Some(&(_, eb))) => return 0.cmp(&eb),
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                    Ordering::Less => return ea.cmp(&0),
                    Ordering::Greater => return 0.cmp(&eb),
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Variable naming used when printing polynomials.
pub trait VarNames {
    fn var_name(&self, v: Var) -> String;
}

pub struct DefaultNames;

impl VarNames for DefaultNames {
    fn var_name(&self, v: Var) -> String {
        params::name(v).map(str::to_string).unwrap_or_else(|| format!("x{}", v.0))
    }
}

impl<F: Fn(Var) -> String> VarNames for F {
    fn var_name(&self, v: Var) -> String {
        self(v)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v, 1), Rational::one())
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        Self::term(Monomial::var(v, e), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// Canonicalising constructor: merges repeated monomials, drops zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// The single term, if this polynomial is a monomial times a constant.
    pub fn as_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// `self += coef * a * b`.
    pub fn add_product(&mut self, a: &Poly, b: &Poly, coef: &Rational) {
        if coef.is_zero() {
            return;
        }
        for (ma, ca) in &a.terms {
            let cac = ca * coef;
            for (mb, cb) in &b.terms {
                self.add_term(ma.mul(mb), &cac * cb);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn total_degree(&self) -> i32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Degree range `(min, max)` of `v`; `(0, 0)` for the zero polynomial.
    pub fn degree_range(&self, v: Var) -> (i32, i32) {
        let mut it = self.terms.keys().map(|m| m.exponent(v));
        match it.next() {
            None => (0, 0),
            Some(first) => it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))),
        }
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> =
            self.terms.keys().flat_map(|m| m.factors().iter().map(|&(v, _)| v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn partial(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e != 0 {
                out.add_term(m.mul(&Monomial::var(v, -1)), c * &Rational::from_int(e as i64));
            }
        }
        out
    }

    /// Split by powers of `v`: `self = sum_k coeff_k * v^k`.
    pub fn coefficients_in(&self, v: Var) -> BTreeMap<i32, Poly> {
        let mut out: BTreeMap<i32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    pub fn eval<F: Field>(
        &self,
        field: &F,
        point: &dyn Fn(Var) -> Option<F::Elem>,
    ) -> Result<F::Elem> {
        let mut cache: BTreeMap<(Var, i32), F::Elem> = BTreeMap::new();
        let mut base: BTreeMap<Var, F::Elem> = BTreeMap::new();
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = field.from_rational(c).ok_or(Error::DivisionByZero)?;
            for &(v, e) in m.factors() {
                let pw = match cache.get(&(v, e)) {
                    Some(x) => x.clone(),
                    None => {
                        let b = match base.get(&v) {
                            Some(b) => b.clone(),
                            None => {
                                let b = point(v).ok_or(Error::UnboundVariable(v.0))?;
                                base.insert(v, b.clone());
                                b
                            }
                        };
                        let x = field.pow(&b, e)?;
                        cache.insert((v, e), x.clone());
                        x
                    }
                };
                t = field.mul(&t, &pw);
            }
            acc = field.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Apply a variable substitution. Negative powers of a substituted
    /// variable require its image to be a single term.
    pub fn substitute(&self, map: &dyn Fn(Var) -> Option<Poly>) -> Result<Poly> {
        let mut powers: BTreeMap<(Var, i32), Poly> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut keep = Monomial::one();
            let mut t = Poly::constant(c.clone());
            for &(v, e) in m.factors() {
                let Some(img) = map(v) else {
                    keep = keep.mul(&Monomial::var(v, e));
                    continue;
                };
                let pw = match powers.get(&(v, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = if e >= 0 {
                            img.pow(e as u32)
                        } else {
                            img.inverse_term().ok_or(Error::NonMonomialInverse)?.pow((-e) as u32)
                        };
                        powers.insert((v, e), p.clone());
                        p
                    }
                };
                t = &t * &pw;
            }
            out.add_assign(&t.mul_monomial(&keep));
        }
        Ok(out)
    }

    /// Inverse of a single-term polynomial.
    pub fn inverse_term(&self) -> Option<Poly> {
        let (m, c) = self.as_term()?;
        Some(Poly::term(m.inv(), c.recip()?))
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn try_div(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(inv) = d.inverse_term() {
            return Some(self * &inv);
        }
        let (num, sn) = self.shift_nonnegative();
        let (den, sd) = d.shift_nonnegative();
        let (lm, lc) = den.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = num;
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            if !(lm.divides_into(rm) || lm == *rm) {
                return None;
            }
            let qm = rm.mul(&lm.inv());
            let qc = rc / &lc;
            let step = Poly::term(qm, qc);
            rem = &rem - &(&step * &den);
            quot.add_assign(&step);
        }
        Some(quot.mul_monomial(&sn.mul(&sd.inv())))
    }

    /// `(p, m)` with `self = p * m` and every variable's minimum exponent in
    /// `p` equal to zero.
    fn shift_nonnegative(&self) -> (Poly, Monomial) {
        let vars = self.variables();
        let m = Monomial::from_pairs(vars.into_iter().map(|v| (v, self.degree_range(v).0)));
        (self.mul_monomial(&m.inv()), m)
    }

    pub fn display_with(&self, names: &dyn VarNames) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = m
                .factors()
                .iter()
                .map(|&(v, e)| {
                    let n = names.var_name(v);
                    if e == 1 {
                        n
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            if mono.is_empty() {
                s.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    s.push_str(&mag.to_string());
                    s.push('*');
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&DefaultNames))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        out.add_assign(small);
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        out.add_product(self, rhs, &Rational::one());
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! owned_poly_op {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
owned_poly_op!(Add, add);
owned_poly_op!(Sub, sub);
owned_poly_op!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}
