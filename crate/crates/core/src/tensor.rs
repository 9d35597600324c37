//! Operators on `V^{⊗k}` with `V = K^N`.
//!
//! A multi-index `(i_1, …, i_k)` is flattened with leg 1 most significant,
//! matching the Kronecker product `A ⊗ B`. Component `X^{ik}_{jl}` of a
//! two-leg operator is row `(i, k)`, column `(j, l)`. Storage is dense up to
//! 729 entries and row-sparse above.

use crate::error::{Error, Result};
use crate::ring::{params, Poly, Rational, Ring};
use std::collections::BTreeMap;

const DENSE_LIMIT: usize = 729;

#[derive(Clone, Debug)]
enum Storage<T> {
    Dense(Vec<T>),
    Sparse(Vec<BTreeMap<usize, T>>),
}

#[derive(Clone, Debug)]
pub struct LegMatrix<T> {
    n: usize,
    legs: usize,
    dim: usize,
    data: Storage<T>,
}

impl<T: Ring> LegMatrix<T> {
    pub fn zero(n: usize, legs: usize) -> Self {
        let dim = n.pow(legs as u32);
        let data = if dim * dim <= DENSE_LIMIT {
            Storage::Dense(vec![T::zero(); dim * dim])
        } else {
            Storage::Sparse(vec![BTreeMap::new(); dim])
        };
        LegMatrix { n, legs, dim, data }
    }

    pub fn identity(n: usize, legs: usize) -> Self {
        let mut m = Self::zero(n, legs);
        for i in 0..m.dim {
            m.set(i, i, T::one());
        }
        m
    }

    /// One-leg matrix from a row-major entry function.
    pub fn from_fn(n: usize, legs: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut m = Self::zero(n, legs);
        for r in 0..m.dim {
            for c in 0..m.dim {
                let v = f(r, c);
                if !v.is_zero() {
                    m.set(r, c, v);
                }
            }
        }
        m
    }

    /// The unit matrix `E_ij` on one leg (0-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n, 1);
        m.set(i, j, T::one());
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        match &self.data {
            Storage::Dense(v) => v[r * self.dim + c].clone(),
            Storage::Sparse(rows) => rows[r].get(&c).cloned().unwrap_or_else(T::zero),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        match &mut self.data {
            Storage::Dense(d) => d[r * self.dim + c] = v,
            Storage::Sparse(rows) => {
                if v.is_zero() {
                    rows[r].remove(&c);
                } else {
                    rows[r].insert(c, v);
                }
            }
        }
    }

    fn add_at(&mut self, r: usize, c: usize, v: &T) {
        if v.is_zero() {
            return;
        }
        match &mut self.data {
            Storage::Dense(d) => d[r * self.dim + c].add_assign(v),
            Storage::Sparse(rows) => {
                let e = rows[r].entry(c).or_insert_with(T::zero);
                e.add_assign(v);
                if e.is_zero() {
                    rows[r].remove(&c);
                }
            }
        }
    }

    /// Nonzero entries in row-major order.
    pub fn nonzeros(&self) -> Vec<(usize, usize, T)> {
        let mut out = Vec::new();
        match &self.data {
            Storage::Dense(d) => {
                for (idx, v) in d.iter().enumerate() {
                    if !v.is_zero() {
                        out.push((idx / self.dim, idx % self.dim, v.clone()));
                    }
                }
            }
            Storage::Sparse(rows) => {
                for (r, row) in rows.iter().enumerate() {
                    for (c, v) in row {
                        out.push((r, *c, v.clone()));
                    }
                }
            }
        }
        out
    }

    fn row_nonzeros(&self, r: usize) -> Vec<(usize, T)> {
        match &self.data {
            Storage::Dense(d) => (0..self.dim)
                .filter_map(|c| {
                    let v = &d[r * self.dim + c];
                    (!v.is_zero()).then(|| (c, v.clone()))
                })
                .collect(),
            Storage::Sparse(rows) => rows[r].iter().map(|(c, v)| (*c, v.clone())).collect(),
        }
    }

    fn check_shape(&self, o: &Self) {
        assert!(self.n == o.n && self.legs == o.legs, "leg matrix shape mismatch");
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_shape(o);
        let mut out = Self::zero(self.n, self.legs);
        let orows: Vec<Vec<(usize, T)>> = (0..self.dim).map(|r| o.row_nonzeros(r)).collect();
        for r in 0..self.dim {
            for (k, a) in self.row_nonzeros(r) {
                for (c, b) in &orows[k] {
                    out.add_at(r, *c, &a.mul(b));
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_shape(o);
        let mut out = self.clone();
        for (r, c, v) in o.nonzeros() {
            out.add_at(r, c, &v);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|v| v.neg())
    }

    /// Multiply every entry by `c` on the left.
    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| c.mul(v))
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        let mut out = Self::zero(self.n, self.legs);
        for (r, c, v) in self.nonzeros() {
            out.set(r, c, f(&v));
        }
        out
    }

    pub fn map_into<U: Ring>(&self, f: impl Fn(&T) -> U) -> LegMatrix<U> {
        let mut out = LegMatrix::zero(self.n, self.legs);
        for (r, c, v) in self.nonzeros() {
            let u = f(&v);
            if !u.is_zero() {
                out.set(r, c, u);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.nonzeros().is_empty()
    }

    /// First position where the two operators differ.
    pub fn first_difference(&self, o: &Self) -> Option<(usize, usize)>
    where
        T: PartialEq,
    {
        let d = self.sub(o);
        d.nonzeros().first().map(|&(r, c, _)| (r, c))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.n, self.legs);
        for (r, c, v) in self.nonzeros() {
            out.set(c, r, v);
        }
        out
    }

    pub fn split_index(&self, idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.legs];
        let mut x = idx;
        for slot in out.iter_mut().rev() {
            *slot = x % self.n;
            x /= self.n;
        }
        out
    }

    pub fn join_index(&self, parts: &[usize]) -> usize {
        parts.iter().fold(0, |acc, &p| acc * self.n + p)
    }

    /// Transpose in leg `leg` (1-based).
    pub fn partial_transpose(&self, leg: usize) -> Result<Self> {
        if leg == 0 || leg > self.legs {
            return Err(Error::InvalidSpec(format!("leg {leg} out of range")));
        }
        let mut out = Self::zero(self.n, self.legs);
        for (r, c, v) in self.nonzeros() {
            let mut ri = self.split_index(r);
            let mut ci = self.split_index(c);
            std::mem::swap(&mut ri[leg - 1], &mut ci[leg - 1]);
            out.set(self.join_index(&ri), self.join_index(&ci), v);
        }
        Ok(out)
    }

    /// Place a one-leg matrix on leg `leg` (1-based) of `legs` legs.
    pub fn embed(m: &LegMatrix<T>, leg: usize, legs: usize) -> Result<Self> {
        if m.legs != 1 {
            return Err(Error::InvalidSpec("embed expects a one-leg matrix".into()));
        }
        Self::embed_legs(m, &[leg], legs)
    }

    /// Place a `j`-leg operator on the listed legs (1-based, in order) of a
    /// `legs`-leg space; the identity acts on the remaining legs.
    pub fn embed_legs(m: &LegMatrix<T>, at: &[usize], legs: usize) -> Result<Self> {
        if at.len() != m.legs || at.iter().any(|&l| l == 0 || l > legs) {
            return Err(Error::InvalidSpec(format!("bad leg placement {at:?} in {legs} legs")));
        }
        let mut sorted = at.to_vec();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != at.len() {
            return Err(Error::InvalidSpec(format!("repeated leg in {at:?}")));
        }
        let n = m.n;
        let mut out = Self::zero(n, legs);
        let others: Vec<usize> = (1..=legs).filter(|l| !at.contains(l)).collect();
        let n_other = n.pow(others.len() as u32);
        for (r, c, v) in m.nonzeros() {
            let ri = m.split_index(r);
            let ci = m.split_index(c);
            for o in 0..n_other {
                let mut rowp = vec![0; legs];
                let mut colp = vec![0; legs];
                let mut x = o;
                for &l in others.iter().rev() {
                    rowp[l - 1] = x % n;
                    colp[l - 1] = x % n;
                    x /= n;
                }
                for (slot, &l) in at.iter().enumerate() {
                    rowp[l - 1] = ri[slot];
                    colp[l - 1] = ci[slot];
                }
                let rr = out.join_index(&rowp);
                let cc = out.join_index(&colp);
                out.set(rr, cc, v.clone());
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut out = Self::zero(self.n, self.legs + o.legs);
        for (r1, c1, a) in self.nonzeros() {
            for (r2, c2, b) in o.nonzeros() {
                out.set(r1 * o.dim + r2, c1 * o.dim + c2, a.mul(&b));
            }
        }
        out
    }

    /// Component `X^{ik}_{jl}` of a two-leg operator (0-based).
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> T {
        debug_assert_eq!(self.legs, 2);
        self.get(i * self.n + k, j * self.n + l)
    }
}

impl<T: Ring + PartialEq> PartialEq for LegMatrix<T> {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.legs == o.legs && self.sub(o).is_zero()
    }
}

pub type ConstMatrix = LegMatrix<Rational>;

pub fn lift(m: &ConstMatrix) -> LegMatrix<Poly> {
    m.map_into(|c| Poly::constant(c.clone()))
}

/// `P = sum_ij E_ij ⊗ E_ji`.
pub fn permutation_p(n: usize) -> ConstMatrix {
    let mut p = LegMatrix::zero(n, 2);
    for i in 0..n {
        for j in 0..n {
            p.set(i * n + j, j * n + i, Rational::one());
        }
    }
    p
}

/// `theta(x)`: 0 for `x < 0`, 1/2 for `x = 0`, 1 for `x > 0`.
pub fn theta(x: i64) -> Rational {
    match x.cmp(&0) {
        std::cmp::Ordering::Less => Rational::zero(),
        std::cmp::Ordering::Equal => Rational::new(1, 2),
        std::cmp::Ordering::Greater => Rational::one(),
    }
}

/// `r = sum_i E_ii ⊗ E_ii + 2 sum_{i>j} E_ij ⊗ E_ji`.
pub fn classical_r(n: usize) -> ConstMatrix {
    let mut r = LegMatrix::zero(n, 2);
    for i in 0..n {
        for j in 0..n {
            // E_ij ⊗ E_ji sits at row (i, j), column (j, i).
            let w = theta(i as i64 - j as i64) * Rational::from_int(2);
            if !w.is_zero() {
                r.set(i * n + j, j * n + i, w);
            }
        }
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum QCase {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
}

impl QCase {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "i" => Some(QCase::I),
            "ii" => Some(QCase::II),
            "iii" => Some(QCase::III),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            QCase::I => "i",
            QCase::II => "ii",
            QCase::III => "iii",
        }
    }

    pub fn dual(self) -> Self {
        match self {
            QCase::I => QCase::I,
            QCase::II => QCase::III,
            QCase::III => QCase::II,
        }
    }
}

/// `Q(i) = 0`, `Q(ii) = -r^{t2}`, `Q(iii) = r^{t1}`.
pub fn q_matrix(n: usize, case: QCase) -> ConstMatrix {
    let r = classical_r(n);
    match case {
        QCase::I => LegMatrix::zero(n, 2),
        QCase::II => r.partial_transpose(2).expect("two legs").neg(),
        QCase::III => r.partial_transpose(1).expect("two legs"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Triangle {
    Upper,
    Lower,
}

/// Strict upper (or lower) part plus `weight` times the diagonal.
pub fn triangular_project<T: Ring>(m: &LegMatrix<T>, side: Triangle, weight: &T) -> LegMatrix<T> {
    assert_eq!(m.legs(), 1);
    let mut out = LegMatrix::zero(m.n(), 1);
    for (r, c, v) in m.nonzeros() {
        let keep = match side {
            Triangle::Upper => c > r,
            Triangle::Lower => r > c,
        };
        if keep {
            out.set(r, c, v);
        } else if r == c {
            out.set(r, c, weight.mul(&v));
        }
    }
    out
}

/// Square root of a single-term Laurent polynomial with even exponents.
fn monomial_sqrt_inverse(q_half: &Poly) -> Result<Poly> {
    q_half
        .inverse_term()
        .ok_or_else(|| Error::InvalidSpec("q^(1/2) must be a single term".into()))
}

/// Quantum `R(q)` with `q^(1/2) = half`:
/// `E ⊗ E + sum_kl E_kl ⊗ E_lk [(q - 1/q) theta(l-k) + (q^(1/2) - q^(-1/2))^2/2 delta_kl]`.
pub fn quantum_r(n: usize, half: &Poly) -> Result<LegMatrix<Poly>> {
    let half_inv = monomial_sqrt_inverse(half)?;
    let q = half * half;
    let qi = &half_inv * &half_inv;
    let q_minus = &q - &qi;
    let d = half - &half_inv;
    let diag_shift = (&d * &d).scale(&Rational::new(1, 2));
    let mut out = LegMatrix::identity(n, 2);
    for k in 0..n {
        for l in 0..n {
            let mut w = q_minus.scale(&theta(l as i64 - k as i64));
            if k == l {
                w = &w + &diag_shift;
            }
            // E_kl ⊗ E_lk sits at row (k, l), column (l, k).
            let r = k * n + l;
            let c = l * n + k;
            let cur = out.get(r, c);
            out.set(r, c, &cur + &w);
        }
    }
    Ok(out)
}

/// `q^(1/2)` as the Laurent monomial `s^(±1)`.
pub fn q_half(inverse: bool) -> Poly {
    Poly::var_pow(params::S, if inverse { -1 } else { 1 })
}

/// An operator `num / den` with a scalar denominator.
#[derive(Clone, Debug)]
pub struct Scaled {
    pub num: LegMatrix<Poly>,
    pub den: Poly,
}

impl Scaled {
    pub fn new(num: LegMatrix<Poly>) -> Self {
        Scaled { num, den: Poly::one() }
    }

    pub fn mul(&self, o: &Scaled) -> Scaled {
        Scaled { num: self.num.mul(&o.num), den: &self.den * &o.den }
    }

    pub fn add(&self, o: &Scaled) -> Scaled {
        if self.den == o.den {
            return Scaled { num: self.num.add(&o.num), den: self.den.clone() };
        }
        Scaled {
            num: self.num.scale(&o.den).add(&o.num.scale(&self.den)),
            den: &self.den * &o.den,
        }
    }

    pub fn neg(&self) -> Scaled {
        Scaled { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, c: &Poly) -> Scaled {
        Scaled { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn partial_transpose(&self, leg: usize) -> Result<Scaled> {
        Ok(Scaled { num: self.num.partial_transpose(leg)?, den: self.den.clone() })
    }

    pub fn embed_legs(&self, at: &[usize], legs: usize) -> Result<Scaled> {
        Ok(Scaled { num: LegMatrix::embed_legs(&self.num, at, legs)?, den: self.den.clone() })
    }

    /// Equality after clearing denominators; returns the first differing
    /// position otherwise.
    pub fn compare(&self, o: &Scaled) -> Option<(usize, usize)> {
        let l = self.num.scale(&o.den);
        let r = o.num.scale(&self.den);
        l.first_difference(&r)
    }
}

/// Spectral `R(lambda, mu; q)` with `q^(1/2) = half`.
pub fn affine_r(n: usize, lambda: &Poly, mu: &Poly, half: &Poly) -> Result<Scaled> {
    let half_inv = monomial_sqrt_inverse(half)?;
    let q = half * half;
    let qi = &half_inv * &half_inv;
    let den = &(&qi * lambda) - &(&q * mu);
    let lm = lambda - mu;
    let qd = &qi - &q;
    let upper = &qd * lambda;
    let lower = &qd * mu;
    let mut num = LegMatrix::zero(n, 2);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                num.set(i * n + i, i * n + i, den.clone());
            } else {
                // E_ii ⊗ E_jj on the diagonal, E_ij ⊗ E_ji off it.
                num.set(i * n + j, i * n + j, lm.clone());
                let w = if i < j { upper.clone() } else { lower.clone() };
                num.set(i * n + j, j * n + i, w);
            }
        }
    }
    Ok(Scaled { num, den })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn embed_second_leg() {
        let e12 = LegMatrix::<Rational>::unit(2, 0, 1);
        let m = LegMatrix::embed(&e12, 2, 2).unwrap();
        let nz: Vec<_> = m.nonzeros().into_iter().map(|(r, c, _)| (r, c)).collect();
        // rows (1,1)->(1,2) and (2,1)->(2,2) in 1-based multi-indices.
        assert_eq!(nz, vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn permutation_partial_transpose() {
        let p = permutation_p(2).partial_transpose(1).unwrap();
        // sum_ij E_ij ⊗ E_ij
        let mut expect = LegMatrix::zero(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                expect.set(i * 2 + i, j * 2 + j, q(1));
            }
        }
        assert_eq!(p, expect);
    }

    #[test]
    fn classical_r_two() {
        let r = classical_r(2);
        let nz: Vec<_> = r.nonzeros();
        assert_eq!(nz, vec![(0, 0, q(1)), (2, 1, q(2)), (3, 3, q(1))]);
    }

    #[test]
    fn quantum_r_two() {
        let r = quantum_r(2, &q_half(false)).unwrap();
        let qq = Poly::var_pow(params::S, 2);
        let qm = &qq - &Poly::var_pow(params::S, -2);
        assert_eq!(r.get(0, 0), qq);
        assert_eq!(r.get(3, 3), qq);
        assert_eq!(r.get(1, 1), Poly::one());
        assert_eq!(r.get(2, 2), Poly::one());
        assert_eq!(r.get(1, 2), qm);
        assert_eq!(r.nonzeros().len(), 5);
    }

    #[test]
    fn sparse_storage_agrees_with_dense() {
        let p2 = permutation_p(4);
        let p3 = LegMatrix::embed_legs(&p2, &[1, 3], 3).unwrap();
        let sq = p3.mul(&p3);
        assert_eq!(sq, LegMatrix::identity(4, 3));
    }

    #[test]
    fn kron_matches_embedding() {
        let a = LegMatrix::<Rational>::from_fn(3, 1, |r, c| q((r * 3 + c) as i64));
        let b = LegMatrix::<Rational>::from_fn(3, 1, |r, c| q(r as i64 - 2 * c as i64));
        let k = a.kron(&b);
        let e = LegMatrix::embed(&a, 1, 2).unwrap().mul(&LegMatrix::embed(&b, 2, 2).unwrap());
        assert_eq!(k, e);
    }
}
