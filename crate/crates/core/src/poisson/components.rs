//! Component formulas for brackets, written directly in indices.
//!
//! These are independent of the tensor expansion in [`super::algebra`] and
//! serve to cross-check it.

use super::algebra::PoissonAlgebra;
use crate::ring::{Poly, Rational, Var};
use crate::tensor::theta;

pub fn sign(x: i64) -> Rational {
    Rational::from_int(x.signum())
}

/// Component formula as a function of 0-based indices `(i, j, k, l)`.
pub type ComponentFn<'a> = dyn Fn(usize, usize, usize, usize) -> Poly + 'a;

fn v(alg: &PoissonAlgebra, block: &str) -> impl Fn(usize, usize) -> Poly + use<> {
    let b = alg.block(block).clone();
    let n = alg.n;
    move |i, j| Poly::var(b.var(n, i, j))
}

fn d(x: usize, y: usize) -> i64 {
    x as i64 - y as i64
}

/// `{a_ij, a_kl}` in the sign-function form.
pub fn a_sign_form<'a>(alg: &'a PoissonAlgebra, block: &'a str) -> Box<ComponentFn<'a>> {
    let a = v(alg, block);
    Box::new(move |i, j, k, l| {
        let t1 = (&a(i, l) * &a(k, j)).scale(&(sign(d(j, l)) + sign(d(i, k))));
        let t2 = (&a(j, l) * &a(i, k)).scale(&(sign(d(j, k)) + Rational::one()));
        let t3 = (&a(l, j) * &a(k, i)).scale(&(sign(d(i, l)) - Rational::one()));
        &(&t1 + &t2) + &t3
    })
}

/// `{b_ij, b_kl} = (sign(j-l) + sign(i-k)) b_il b_kj`.
pub fn b_sign_form<'a>(alg: &'a PoissonAlgebra, block: &'a str) -> Box<ComponentFn<'a>> {
    let b = v(alg, block);
    Box::new(move |i, j, k, l| (&b(i, l) * &b(k, j)).scale(&(sign(d(j, l)) + sign(d(i, k)))))
}

/// `{b_ij, b_kl} = b_il b_kj (theta(i-k) - theta(l-j))`.
pub fn b_theta_form<'a>(alg: &'a PoissonAlgebra, block: &'a str) -> Box<ComponentFn<'a>> {
    let b = v(alg, block);
    Box::new(move |i, j, k, l| (&b(i, l) * &b(k, j)).scale(&(theta(d(i, k)) - theta(d(l, j)))))
}

/// `{b_ij, a_kl} = -b_ik a_jl theta(k-j) - b_il a_kj theta(l-j)`.
pub fn ba_theta_form<'a>(alg: &'a PoissonAlgebra, b: &'a str, a: &'a str) -> Box<ComponentFn<'a>> {
    let bb = v(alg, b);
    let aa = v(alg, a);
    Box::new(move |i, j, k, l| {
        let t1 = (&bb(i, k) * &aa(j, l)).scale(&-theta(d(k, j)));
        let t2 = (&bb(i, l) * &aa(k, j)).scale(&-theta(d(l, j)));
        &t1 + &t2
    })
}

/// `{b_ij, f_kl} = sum_s theta(s-j) delta_kj b_is f_sl - sum_s theta(j-s) delta_jl b_is f_ks`.
pub fn bf_theta_form<'a>(alg: &'a PoissonAlgebra, b: &'a str, f: &'a str) -> Box<ComponentFn<'a>> {
    let bb = v(alg, b);
    let ff = v(alg, f);
    let n = alg.n;
    Box::new(move |i, j, k, l| {
        let mut out = Poly::zero();
        for s in 0..n {
            if k == j {
                out.add_product(&bb(i, s), &ff(s, l), &theta(d(s, j)));
            }
            if j == l {
                out.add_product(&bb(i, s), &ff(k, s), &-theta(d(j, s)));
            }
        }
        out
    })
}

/// `{b_ij, g_kl} = theta(i-k) b_kj g_il - theta(l-i) b_lj g_ki` with `g` a
/// target block (used for the conjugated groupoid variable).
pub fn b_ftilde_theta_form<'a>(alg: &'a PoissonAlgebra, b: &'a str, g: &'a str) -> Box<ComponentFn<'a>> {
    let bb = v(alg, b);
    let gg = v(alg, g);
    Box::new(move |i, j, k, l| {
        let t1 = (&bb(k, j) * &gg(i, l)).scale(&theta(d(i, k)));
        let t2 = (&bb(l, j) * &gg(k, i)).scale(&-theta(d(l, i)));
        &t1 + &t2
    })
}

/// `{s_ij, b_kl} = sum_r s_ir b_rl theta(j-r) delta_jk + s_lj b_ki theta(i-l)`.
pub fn sb_theta_form<'a>(alg: &'a PoissonAlgebra, s: &'a str, b: &'a str) -> Box<ComponentFn<'a>> {
    let ss = v(alg, s);
    let bb = v(alg, b);
    let n = alg.n;
    Box::new(move |i, j, k, l| {
        let mut out = Poly::zero();
        if j == k {
            for r in 0..n {
                out.add_product(&ss(i, r), &bb(r, l), &theta(d(j, r)));
            }
        }
        out.add_product(&ss(l, j), &bb(k, i), &theta(d(i, l)));
        out
    })
}

/// `{s_ij, a_kl} = s_kj a_il theta(i-k) + s_lj a_ki theta(i-l)`.
pub fn sa_theta_form<'a>(alg: &'a PoissonAlgebra, s: &'a str, a: &'a str) -> Box<ComponentFn<'a>> {
    let ss = v(alg, s);
    let aa = v(alg, a);
    Box::new(move |i, j, k, l| {
        let t1 = (&ss(k, j) * &aa(i, l)).scale(&theta(d(i, k)));
        let t2 = (&ss(l, j) * &aa(k, i)).scale(&theta(d(i, l)));
        &t1 + &t2
    })
}

/// `{s_ij, s_kl} = s_il s_kj (theta(i-k) - theta(j-l))`.
pub fn ss_theta_form<'a>(alg: &'a PoissonAlgebra, s: &'a str) -> Box<ComponentFn<'a>> {
    let ss = v(alg, s);
    Box::new(move |i, j, k, l| (&ss(i, l) * &ss(k, j)).scale(&(theta(d(i, k)) - theta(d(j, l)))))
}

/// Result of comparing a table block with a component formula.
#[derive(Clone, Debug, PartialEq)]
pub enum Agreement {
    Equal,
    /// `formula = factor * table` entrywise with `factor != 1`.
    Scaled(Rational),
    Differs { at: (usize, usize, usize, usize), table: String, formula: String },
}

/// Compare `{x_ij, y_kl}` from the table with `formula(i, j, k, l)`.
pub fn compare_block(alg: &PoissonAlgebra, x: &str, y: &str, formula: &ComponentFn<'_>) -> Agreement {
    let n = alg.n;
    let bx = alg.block(x);
    let by = alg.block(y);
    let mut factor: Option<Rational> = None;
    let mut consistent = true;
    let mut first_diff = None;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let t = alg.entry(bx.var(n, i, j), by.var(n, k, l));
                    let f = formula(i, j, k, l);
                    if *t == f {
                        if !t.is_zero() && factor.as_ref().is_some_and(|c| !c.is_one()) {
                            consistent = false;
                        }
                        if !t.is_zero() && factor.is_none() {
                            factor = Some(Rational::one());
                        }
                        continue;
                    }
                    if first_diff.is_none() {
                        first_diff = Some((i, j, k, l, t.clone(), f.clone()));
                    }
                    let ratio = ratio_of(&f, t);
                    match (ratio, &factor) {
                        (Some(c), None) => factor = Some(c),
                        (Some(c), Some(prev)) if c == *prev => {}
                        _ => consistent = false,
                    }
                }
            }
        }
    }
    match first_diff {
        None => Agreement::Equal,
        Some((i, j, k, l, t, f)) => match factor {
            Some(c) if consistent && !c.is_one() => Agreement::Scaled(c),
            _ => Agreement::Differs {
                at: (i + 1, j + 1, k + 1, l + 1),
                table: alg.display(&t),
                formula: alg.display(&f),
            },
        },
    }
}

/// `c` with `f = c * t`, if it exists.
fn ratio_of(f: &Poly, t: &Poly) -> Option<Rational> {
    let (tm, tc) = t.leading_term()?;
    let fc = f.terms().find(|(m, _)| *m == tm).map(|(_, c)| c.clone())?;
    let c = &fc / tc;
    (t.scale(&c) == *f).then_some(c)
}

pub fn block_var(alg: &PoissonAlgebra, block: &str, i: usize, j: usize) -> Var {
    alg.var(block, i, j)
}
