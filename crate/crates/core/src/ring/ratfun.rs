//! Quotients of Laurent polynomials without gcd normalisation.
//!
//! Only exact structural shortcuts are taken (equal denominators, monomial
//! or exactly divisible denominators); equality is decided by
//! cross-multiplication.

use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RatFun {
    pub num: Poly,
    pub den: Poly,
}

impl RatFun {
    pub fn from_poly(p: Poly) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFun { num, den }.tidy())
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    fn tidy(self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        if let Some(inv) = self.den.inverse_term() {
            return RatFun { num: &self.num * &inv, den: Poly::one() };
        }
        if let Some(q) = self.num.try_div(&self.den) {
            return RatFun::from_poly(q);
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<Poly> {
        if self.den == Poly::one() {
            Some(self.num.clone())
        } else {
            self.num.try_div(&self.den)
        }
    }

    pub fn add(&self, o: &RatFun) -> RatFun {
        if self.den == o.den {
            return RatFun { num: &self.num + &o.num, den: self.den.clone() }.tidy();
        }
        if let Some(k) = o.den.try_div(&self.den) {
            return RatFun { num: &(&self.num * &k) + &o.num, den: o.den.clone() }.tidy();
        }
        if let Some(k) = self.den.try_div(&o.den) {
            return RatFun { num: &self.num + &(&o.num * &k), den: self.den.clone() }.tidy();
        }
        RatFun {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
        .tidy()
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFun) -> RatFun {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFun) -> RatFun {
        if let Some(k) = self.num.try_div(&o.den) {
            if let Some(l) = o.num.try_div(&self.den) {
                return RatFun::from_poly(&k * &l);
            }
        }
        RatFun { num: &self.num * &o.num, den: &self.den * &o.den }.tidy()
    }

    pub fn inv(&self) -> Result<RatFun> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFun) -> Result<RatFun> {
        Ok(self.mul(&o.inv()?))
    }

    /// Decided by cross-multiplication.
    pub fn equals(&self, o: &RatFun) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }

    pub fn scale(&self, c: &Rational) -> RatFun {
        RatFun { num: self.num.scale(c), den: self.den.clone() }.tidy()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::poly::Var;

    #[test]
    fn cross_multiplication_equality() {
        let x = Poly::var(Var(0));
        let y = Poly::var(Var(1));
        let a = RatFun::new(&x * &y, &y * &y).unwrap();
        let b = RatFun::new(x.clone(), y.clone()).unwrap();
        assert!(a.equals(&b));
        let one = RatFun::one();
        assert!(b.add(&one).equals(&RatFun::new(&x + &y, y.clone()).unwrap()));
    }
}
