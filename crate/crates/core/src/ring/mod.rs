//! Exact and modular arithmetic: rationals, prime fields, dual numbers,
//! sparse Laurent polynomials, rational expressions and dense linear algebra.

pub mod expr;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod ratfun;
pub mod rational;
pub mod series;

pub use expr::Expr;
pub use field::{Dual, DualField, Field, PrimeField, RationalField, DEFAULT_PRIME};
pub use poly::{params, Monomial, Poly, Var, VarNames};
pub use ratfun::RatFun;
pub use rational::Rational;

/// Minimal ring interface shared by matrix code. Multiplication keeps operand
/// order, so noncommutative coefficient rings can implement it too.
pub trait Ring: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn add_assign(&mut self, o: &Self) {
        *self = Ring::add(self, o);
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add_assign(&mut self, o: &Self) {
        Poly::add_assign(self, o)
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

impl Ring for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn one() -> Self {
        RatFun::one()
    }
    fn add(&self, o: &Self) -> Self {
        RatFun::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFun::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFun::mul(self, o)
    }
    fn neg(&self) -> Self {
        RatFun::neg(self)
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
}
