//! Coefficient fields used for evaluation: exact rationals, a prime field and
//! forward-mode dual numbers over either.

use super::rational::Rational;
use crate::error::{Error, Result};
use rand::Rng;
use std::fmt::Debug;

/// A field given as a context object; elements carry no context themselves.
pub trait Field: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` when `a` is not a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// `None` when the denominator vanishes in this field.
    fn from_rational(&self, r: &Rational) -> Option<Self::Elem>;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_rational(&Rational::from_int(n)).expect("integers embed")
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let bi = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, e: i32) -> Result<Self::Elem> {
        let base = if e < 0 {
            self.inv(a).ok_or(Error::DivisionByZero)?
        } else {
            a.clone()
        };
        let mut acc = self.one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            k >>= 1;
        }
        Ok(acc)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = Rational;
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        a.recip()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn from_rational(&self, r: &Rational) -> Option<Rational> {
        Some(r.clone())
    }
}

pub const DEFAULT_PRIME: u64 = (1u64 << 61) - 1;

/// `Z/p` with `2^31 < p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    mersenne61: bool,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p <= (1u64 << 31) || p >= (1u64 << 63) {
            return Err(Error::InvalidPrime(p));
        }
        if !is_prime_u64(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(PrimeField { p, mersenne61: p == DEFAULT_PRIME })
    }

    pub fn default_field() -> Self {
        PrimeField { p: DEFAULT_PRIME, mersenne61: true }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn reduce128(&self, x: u128) -> u64 {
        if self.mersenne61 {
            let m = DEFAULT_PRIME as u128;
            let r = (x & m) + (x >> 61);
            let r = (r & m) + (r >> 61);
            let r = r as u64;
            if r >= DEFAULT_PRIME {
                r - DEFAULT_PRIME
            } else {
                r
            }
        } else {
            (x % self.p as u128) as u64
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(1..self.p)
    }

    /// Centered representative, if it is small enough to be read as an integer.
    pub fn to_small_int(&self, a: u64) -> Option<i64> {
        const BOUND: u64 = 1 << 20;
        if a < BOUND {
            Some(a as i64)
        } else if self.p - a < BOUND {
            Some(-((self.p - a) as i64))
        } else {
            None
        }
    }

    /// A square root of `a`, if one exists (Tonelli-Shanks).
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return Some(0);
        }
        let p = self.p;
        if self.pow_u64(a, (p - 1) / 2) != 1 {
            return None;
        }
        if p % 4 == 3 {
            return Some(self.pow_u64(a, (p + 1) / 4));
        }
        let mut q = p - 1;
        let mut s = 0;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut z = 2u64;
        while self.pow_u64(z, (p - 1) / 2) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow_u64(z, q);
        let mut t = self.pow_u64(a, q);
        let mut r = self.pow_u64(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(&tt, &tt);
                i += 1;
            }
            let b = self.pow_u64(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }

    fn pow_u64(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        if s >= self.p as u128 {
            (s - self.p as u128) as u64
        } else {
            s as u64
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.reduce128(*a as u128 * *b as u128)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let (mut t, mut new_t) = (0i128, 1i128);
        let (mut r, mut new_r) = (self.p as i128, *a as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        if t < 0 {
            t += self.p as i128;
        }
        Some(t as u64)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_rational(&self, r: &Rational) -> Option<u64> {
        let (n, d) = r.mod_p(self.p)?;
        Some(self.mul(&n, &self.inv(&d)?))
    }
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// `value + deriv * eps` with `eps^2 = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<E> {
    pub value: E,
    pub deriv: E,
}

#[derive(Clone, Debug)]
pub struct DualField<F: Field>(pub F);

impl<F: Field> DualField<F> {
    pub fn constant(&self, v: F::Elem) -> Dual<F::Elem> {
        Dual { value: v, deriv: self.0.zero() }
    }
    pub fn variable(&self, v: F::Elem) -> Dual<F::Elem> {
        Dual { value: v, deriv: self.0.one() }
    }
}

impl<F: Field> Field for DualField<F> {
    type Elem = Dual<F::Elem>;
    fn zero(&self) -> Self::Elem {
        self.constant(self.0.zero())
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.0.one())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Dual { value: self.0.add(&a.value, &b.value), deriv: self.0.add(&a.deriv, &b.deriv) }
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        Dual { value: self.0.sub(&a.value, &b.value), deriv: self.0.sub(&a.deriv, &b.deriv) }
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let f = &self.0;
        Dual {
            value: f.mul(&a.value, &b.value),
            deriv: f.add(&f.mul(&a.value, &b.deriv), &f.mul(&a.deriv, &b.value)),
        }
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Dual { value: self.0.neg(&a.value), deriv: self.0.neg(&a.deriv) }
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let f = &self.0;
        let vi = f.inv(&a.value)?;
        let d = f.neg(&f.mul(&a.deriv, &f.mul(&vi, &vi)));
        Some(Dual { value: vi, deriv: d })
    }
    /// A dual number is treated as zero only when both parts vanish; pivots
    /// additionally need an invertible value part, which `inv` enforces.
    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.0.is_zero(&a.value) && self.0.is_zero(&a.deriv)
    }
    fn from_rational(&self, r: &Rational) -> Option<Self::Elem> {
        Some(self.constant(self.0.from_rational(r)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_small_or_composite_moduli() {
        assert!(PrimeField::new(7).is_err());
        assert!(PrimeField::new(DEFAULT_PRIME - 2).is_err());
        assert!(PrimeField::new(DEFAULT_PRIME).is_ok());
        assert!(PrimeField::new(4294967311).is_ok());
    }

    #[test]
    fn sqrt_for_p_1_mod_4() {
        let p = 4294967357u64;
        assert!(is_prime_u64(p));
        assert_eq!(p % 4, 1);
        let f = PrimeField::new(p).unwrap();
        for a in 2..50u64 {
            let sq = f.mul(&a, &a);
            let r = f.sqrt(sq).unwrap();
            assert_eq!(f.mul(&r, &r), sq);
        }
    }

    proptest! {
        #[test]
        fn mersenne_reduction_agrees(a in 0..DEFAULT_PRIME, b in 0..DEFAULT_PRIME) {
            let f = PrimeField::default_field();
            let expect = ((a as u128 * b as u128) % DEFAULT_PRIME as u128) as u64;
            prop_assert_eq!(f.mul(&a, &b), expect);
        }

        #[test]
        fn inverse_roundtrip(a in 1..DEFAULT_PRIME) {
            let f = PrimeField::default_field();
            prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }

        #[test]
        fn rational_image_is_a_homomorphism(n in -500i64..500, d in 1i64..500, m in -500i64..500) {
            let f = PrimeField::default_field();
            let x = Rational::new(n, d);
            let y = Rational::from_int(m);
            let lhs = f.from_rational(&(&x * &y)).unwrap();
            let rhs = f.mul(&f.from_rational(&x).unwrap(), &f.from_rational(&y).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
