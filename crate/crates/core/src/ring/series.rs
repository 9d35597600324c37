//! Truncated power series in `hbar` with `hbar^3 = 0`.

use super::poly::{params, Poly};
use super::rational::Rational;
use crate::error::{Error, Result};

/// `c[0] + c[1] hbar + c[2] hbar^2`, coefficients polynomial in other variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Trunc3(pub [Poly; 3]);

impl Trunc3 {
    pub fn zero() -> Self {
        Trunc3([Poly::zero(), Poly::zero(), Poly::zero()])
    }

    pub fn constant(p: Poly) -> Self {
        Trunc3([p, Poly::zero(), Poly::zero()])
    }

    pub fn add(&self, o: &Self) -> Self {
        Trunc3([&self.0[0] + &o.0[0], &self.0[1] + &o.0[1], &self.0[2] + &o.0[2]])
    }

    pub fn sub(&self, o: &Self) -> Self {
        Trunc3([&self.0[0] - &o.0[0], &self.0[1] - &o.0[1], &self.0[2] - &o.0[2]])
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = &self.0;
        let b = &o.0;
        Trunc3([
            &a[0] * &b[0],
            &(&a[0] * &b[1]) + &(&a[1] * &b[0]),
            &(&(&a[0] * &b[2]) + &(&a[1] * &b[1])) + &(&a[2] * &b[0]),
        ])
    }

    /// Inverse when the constant term is a nonzero rational.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.0[0].as_constant().ok_or(Error::DivisionByZero)?;
        let i0 = c0.recip().ok_or(Error::DivisionByZero)?;
        let i0p = Poly::constant(i0.clone());
        // (c0 + x)^-1 = i0 - i0^2 x + i0^3 x^2 with x the positive-order part.
        let c1 = -self.0[1].scale(&(&i0 * &i0));
        let c2 = &(&self.0[1] * &self.0[1]).scale(&(&(&i0 * &i0) * &i0))
            - &self.0[2].scale(&(&i0 * &i0));
        Ok(Trunc3([i0p, c1, c2]))
    }

    /// Expand a Laurent polynomial in `s` at `s = exp(hbar/2)`.
    pub fn from_s_laurent(p: &Poly) -> Self {
        let mut out = Trunc3::zero();
        for (k, coeff) in p.coefficients_in(params::S) {
            let k = Rational::from_int(k as i64);
            let c1 = &k / &Rational::from_int(2);
            let c2 = &(&k * &k) / &Rational::from_int(8);
            out = out.add(&Trunc3([coeff.clone(), coeff.scale(&c1), coeff.scale(&c2)]));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_minus_q_inverse_is_order_hbar() {
        // q - 1/q = s^2 - s^-2 = 2 hbar + O(hbar^3).
        let p = &Poly::var_pow(params::S, 2) - &Poly::var_pow(params::S, -2);
        let t = Trunc3::from_s_laurent(&p);
        assert!(t.0[0].is_zero());
        assert_eq!(t.0[1], Poly::int(2));
        assert!(t.0[2].is_zero());
    }

    #[test]
    fn inverse_of_q() {
        let q = Trunc3::from_s_laurent(&Poly::var_pow(params::S, 2));
        let qi = Trunc3::from_s_laurent(&Poly::var_pow(params::S, -2));
        assert_eq!(q.inv().unwrap(), qi);
    }
}
