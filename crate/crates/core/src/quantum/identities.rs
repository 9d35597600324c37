//! Catalog of R-matrix identities, checked exactly over Laurent polynomials
//! in `s = q^(1/2)` and the spectral parameters.

use crate::error::{Error, Result};
use crate::ring::params::{LAMBDA, MU, NU, RHO};
use crate::ring::{Poly, Rational};
use crate::tensor::{affine_r, lift, permutation_p, q_half, quantum_r, LegMatrix, Scaled};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expected {
    Holds,
    Fails,
}

#[derive(Clone, Copy, Debug)]
pub struct IdentityEntry {
    pub id: &'static str,
    pub legs: usize,
    pub params: &'static [&'static str],
    pub expected: Expected,
    pub note: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityOutcome {
    pub id: String,
    pub n: usize,
    pub holds: bool,
    pub expected: Expected,
    /// First differing `(row, column)` when the identity fails.
    pub witness: Option<(usize, usize)>,
}

impl IdentityOutcome {
    pub fn as_expected(&self) -> bool {
        self.holds == (self.expected == Expected::Holds)
    }
}

const Q: &[&str] = &["q"];
const QLM: &[&str] = &["q", "lambda", "mu"];
const QLMR: &[&str] = &["q", "lambda", "mu", "rho"];
const QLMRN: &[&str] = &["q", "lambda", "mu", "rho", "nu"];
const QLMN: &[&str] = &["q", "lambda", "mu", "nu"];

pub const CATALOG: &[IdentityEntry] = &[
    IdentityEntry { id: "R-inverse", legs: 2, params: Q, expected: Expected::Holds, note: "R(q) R(1/q) = 1" },
    IdentityEntry { id: "R-comm", legs: 2, params: Q, expected: Expected::Holds, note: "[R, R^t1] = [R, R^t2] = 0" },
    IdentityEntry {
        id: "R-perm",
        legs: 2,
        params: Q,
        expected: Expected::Fails,
        note: "R12(q) + R21(1/q) = (q - 1/q) P12 as written",
    },
    IdentityEntry {
        id: "R-perm-minus",
        legs: 2,
        params: Q,
        expected: Expected::Holds,
        note: "R12(q) - R21(1/q) = (q - 1/q) P12",
    },
    IdentityEntry { id: "R-perm-P", legs: 2, params: Q, expected: Expected::Fails, note: "R12(q) + R21(1/q) = P12" },
    IdentityEntry { id: "R-t12", legs: 2, params: Q, expected: Expected::Holds, note: "R12^t1t2(q) = R21(q)" },
    IdentityEntry { id: "R-YB", legs: 3, params: Q, expected: Expected::Holds, note: "R12 R13 R23 = R23 R13 R12" },
    IdentityEntry {
        id: "YB-new",
        legs: 3,
        params: Q,
        expected: Expected::Holds,
        note: "R23(q) R13^t1(1/q) R12^t1(1/q) = R12^t1(1/q) R13^t1(1/q) R23(q)",
    },
    IdentityEntry {
        id: "RR-int",
        legs: 3,
        params: Q,
        expected: Expected::Holds,
        note: "R23^t3(1/q) R12^t2(1/q) R13(q) = R13(q) R12^t2(1/q) R23^t3(1/q)",
    },
    IdentityEntry {
        id: "R-perm-t3",
        legs: 3,
        params: Q,
        expected: Expected::Fails,
        note: "R23^t3(1/q) + R32^t3(q) = (q - 1/q) P23^t3 as written",
    },
    IdentityEntry {
        id: "R-perm-t3-minus",
        legs: 3,
        params: Q,
        expected: Expected::Holds,
        note: "R32^t3(q) - R23^t3(1/q) = (q - 1/q) P23^t3",
    },
    IdentityEntry {
        id: "YB-another",
        legs: 3,
        params: Q,
        expected: Expected::Holds,
        note: "R23^t2(q) R12^t2(1/q) R13(q) = R13(q) R12^t2(1/q) R23^t2(q)",
    },
    IdentityEntry {
        id: "R-MN-inverse",
        legs: 2,
        params: QLM,
        expected: Expected::Holds,
        note: "R(l, m; q) R(l, m; 1/q) = 1",
    },
    IdentityEntry {
        id: "R-1",
        legs: 2,
        params: QLM,
        expected: Expected::Holds,
        note: "R(l, m; q) = R^t1t2(1/l, 1/m; 1/q)",
    },
    IdentityEntry { id: "R-2", legs: 2, params: QLM, expected: Expected::Holds, note: "R(l, m; q) = R(1/m, 1/l; q)" },
    IdentityEntry {
        id: "R-3",
        legs: 2,
        params: QLMRN,
        expected: Expected::Holds,
        note: "R(l, m; q) R^t1(r, n; 1/q) R(l, m; 1/q) = R^t1(r, n; 1/q)",
    },
    IdentityEntry {
        id: "R-AB-mn-swap",
        legs: 2,
        params: QLM,
        expected: Expected::Holds,
        note: "R^t2(m, 1/l; 1/q) = R^t2(l, 1/m; 1/q)",
    },
    IdentityEntry {
        id: "YB-MN",
        legs: 3,
        params: QLMR,
        expected: Expected::Holds,
        note: "R12(l, m) R13(l, r) R23(m, r) = R23(m, r) R13(l, r) R12(l, m)",
    },
    IdentityEntry {
        id: "YB-new-mn",
        legs: 3,
        params: QLMN,
        expected: Expected::Holds,
        note: "R23(m, n; q) R12^t2(l, 1/m; 1/q) R13^t3(l, 1/n; 1/q) = R13^t3(l, 1/n; 1/q) R12^t2(l, 1/m; 1/q) R23(m, n; q)",
    },
];

pub fn entry(id: &str) -> Result<&'static IdentityEntry> {
    CATALOG.iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownCheck(id.to_string()))
}

fn r(n: usize, inverse: bool) -> Result<LegMatrix<Poly>> {
    quantum_r(n, &q_half(inverse))
}

fn p(n: usize) -> LegMatrix<Poly> {
    lift(&permutation_p(n))
}

fn on(m: &LegMatrix<Poly>, at: [usize; 2]) -> Result<LegMatrix<Poly>> {
    LegMatrix::embed_legs(m, &at, 3)
}

fn q_minus_qi() -> Poly {
    &Poly::var_pow(crate::ring::params::S, 2) - &Poly::var_pow(crate::ring::params::S, -2)
}

fn var(v: crate::ring::Var, e: i32) -> Poly {
    Poly::var_pow(v, e)
}

fn ar(n: usize, l: Poly, m: Poly, inverse: bool) -> Result<Scaled> {
    affine_r(n, &l, &m, &q_half(inverse))
}

fn ar3(n: usize, l: Poly, m: Poly, inverse: bool, at: [usize; 2]) -> Result<Scaled> {
    ar(n, l, m, inverse)?.embed_legs(&at, 3)
}

fn plain(a: &LegMatrix<Poly>, b: &LegMatrix<Poly>) -> Option<(usize, usize)> {
    a.first_difference(b)
}

/// Check one identity at size `n`.
pub fn check_identity(id: &str, n: usize) -> Result<IdentityOutcome> {
    let e = entry(id)?;
    let one2 = LegMatrix::<Poly>::identity(n, 2);
    let witness = match id {
        "R-inverse" => plain(&r(n, false)?.mul(&r(n, true)?), &one2),
        "R-comm" => {
            let rq = r(n, false)?;
            let t1 = rq.partial_transpose(1)?;
            let t2 = rq.partial_transpose(2)?;
            plain(&rq.mul(&t1), &t1.mul(&rq)).or(plain(&rq.mul(&t2), &t2.mul(&rq)))
        }
        "R-perm" | "R-perm-minus" | "R-perm-P" => {
            let pp = p(n);
            let r21 = pp.mul(&r(n, true)?).mul(&pp);
            let lhs = if id == "R-perm-minus" { r(n, false)?.sub(&r21) } else { r(n, false)?.add(&r21) };
            let rhs = if id == "R-perm-P" { pp } else { pp.scale(&q_minus_qi()) };
            plain(&lhs, &rhs)
        }
        "R-t12" => {
            let pp = p(n);
            let rq = r(n, false)?;
            plain(&rq.partial_transpose(1)?.partial_transpose(2)?, &pp.mul(&rq).mul(&pp))
        }
        "R-YB" => {
            let rq = r(n, false)?;
            let (r12, r13, r23) = (on(&rq, [1, 2])?, on(&rq, [1, 3])?, on(&rq, [2, 3])?);
            plain(&r12.mul(&r13).mul(&r23), &r23.mul(&r13).mul(&r12))
        }
        "YB-new" => {
            let (rq, ri) = (r(n, false)?, r(n, true)?);
            let r23 = on(&rq, [2, 3])?;
            let r13 = on(&ri, [1, 3])?.partial_transpose(1)?;
            let r12 = on(&ri, [1, 2])?.partial_transpose(1)?;
            plain(&r23.mul(&r13).mul(&r12), &r12.mul(&r13).mul(&r23))
        }
        "RR-int" => {
            let (rq, ri) = (r(n, false)?, r(n, true)?);
            let r23 = on(&ri, [2, 3])?.partial_transpose(3)?;
            let r12 = on(&ri, [1, 2])?.partial_transpose(2)?;
            let r13 = on(&rq, [1, 3])?;
            plain(&r23.mul(&r12).mul(&r13), &r13.mul(&r12).mul(&r23))
        }
        "R-perm-t3" | "R-perm-t3-minus" => {
            let (rq, ri) = (r(n, false)?, r(n, true)?);
            let r23i = on(&ri, [2, 3])?.partial_transpose(3)?;
            let r32 = on(&rq, [3, 2])?.partial_transpose(3)?;
            let p23 = on(&p(n), [2, 3])?.partial_transpose(3)?.scale(&q_minus_qi());
            let lhs = if id == "R-perm-t3" { r23i.add(&r32) } else { r32.sub(&r23i) };
            plain(&lhs, &p23)
        }
        "YB-another" => {
            let (rq, ri) = (r(n, false)?, r(n, true)?);
            let r23 = on(&rq, [2, 3])?.partial_transpose(2)?;
            let r12 = on(&ri, [1, 2])?.partial_transpose(2)?;
            let r13 = on(&rq, [1, 3])?;
            plain(&r23.mul(&r12).mul(&r13), &r13.mul(&r12).mul(&r23))
        }
        "R-MN-inverse" => {
            let a = ar(n, var(LAMBDA, 1), var(MU, 1), false)?;
            let b = ar(n, var(LAMBDA, 1), var(MU, 1), true)?;
            a.mul(&b).compare(&Scaled::new(one2))
        }
        "R-1" => {
            let a = ar(n, var(LAMBDA, 1), var(MU, 1), false)?;
            let b = ar(n, var(LAMBDA, -1), var(MU, -1), true)?.partial_transpose(1)?.partial_transpose(2)?;
            a.compare(&b)
        }
        "R-2" => {
            let a = ar(n, var(LAMBDA, 1), var(MU, 1), false)?;
            let b = ar(n, var(MU, -1), var(LAMBDA, -1), false)?;
            a.compare(&b)
        }
        "R-3" => {
            let a = ar(n, var(LAMBDA, 1), var(MU, 1), false)?;
            let t = ar(n, var(RHO, 1), var(NU, 1), true)?.partial_transpose(1)?;
            let b = ar(n, var(LAMBDA, 1), var(MU, 1), true)?;
            a.mul(&t).mul(&b).compare(&t)
        }
        "R-AB-mn-swap" => {
            let a = ar(n, var(MU, 1), var(LAMBDA, -1), true)?.partial_transpose(2)?;
            let b = ar(n, var(LAMBDA, 1), var(MU, -1), true)?.partial_transpose(2)?;
            a.compare(&b)
        }
        "YB-MN" => {
            let r12 = ar3(n, var(LAMBDA, 1), var(MU, 1), false, [1, 2])?;
            let r13 = ar3(n, var(LAMBDA, 1), var(RHO, 1), false, [1, 3])?;
            let r23 = ar3(n, var(MU, 1), var(RHO, 1), false, [2, 3])?;
            r12.mul(&r13).mul(&r23).compare(&r23.mul(&r13).mul(&r12))
        }
        "YB-new-mn" => {
            let r23 = ar3(n, var(MU, 1), var(NU, 1), false, [2, 3])?;
            let r12 = ar3(n, var(LAMBDA, 1), var(MU, -1), true, [1, 2])?.partial_transpose(2)?;
            let r13 = ar3(n, var(LAMBDA, 1), var(NU, -1), true, [1, 3])?.partial_transpose(3)?;
            r23.mul(&r12).mul(&r13).compare(&r13.mul(&r12).mul(&r23))
        }
        other => return Err(Error::UnknownCheck(other.to_string())),
    };
    Ok(IdentityOutcome { id: id.to_string(), n, holds: witness.is_none(), expected: e.expected, witness })
}

/// Check `ids` (all catalog entries when `None`) at size `n`, in parallel.
pub fn identity_suite(n: usize, ids: Option<&[String]>) -> Result<Vec<IdentityOutcome>> {
    let list: Vec<&str> = match ids {
        Some(v) => v.iter().map(String::as_str).collect(),
        None => CATALOG.iter().map(|e| e.id).collect(),
    };
    list.par_iter().map(|id| check_identity(id, n)).collect()
}

/// `(q^(1/2) - q^(-1/2))^2 / 2`, the diagonal shift of `R(q)`.
pub fn diagonal_shift() -> Poly {
    let d = &q_half(false) - &q_half(true);
    (&d * &d).scale(&Rational::new(1, 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_has_its_expected_status_at_n2() {
        for o in identity_suite(2, None).unwrap() {
            assert!(o.as_expected(), "{} {:?}", o.id, o);
        }
    }

    #[test]
    fn three_leg_entries_at_n3() {
        for id in ["R-YB", "YB-new", "YB-another", "RR-int"] {
            let o = check_identity(id, 3).unwrap();
            assert!(o.holds, "{id}");
        }
    }

    #[test]
    fn two_leg_entries_up_to_n4() {
        for n in 2..=4 {
            for id in ["R-inverse", "R-comm"] {
                assert!(check_identity(id, n).unwrap().holds, "{id} n={n}");
            }
        }
    }

    #[test]
    fn r_perm_as_written_differs_on_the_diagonal() {
        let o = check_identity("R-perm", 2).unwrap();
        assert_eq!(o.witness, Some((0, 0)));
    }

    #[test]
    fn unknown_entry_is_an_error() {
        assert!(check_identity("R-0", 2).is_err());
    }
}
