//! Dense linear algebra: Gaussian elimination over a [`Field`] and
//! division-free determinants over any [`Ring`].

use super::field::Field;
use super::Ring;
use crate::error::{Error, Result};

pub type Mat<E> = Vec<Vec<E>>;

fn find_pivot<F: Field>(field: &F, m: &Mat<F::Elem>, col: usize, from: usize) -> Option<usize> {
    (from..m.len()).find(|&r| field.inv(&m[r][col]).is_some())
}

/// Determinant by elimination. Pivots must be units (for dual numbers this
/// means an invertible value part).
pub fn det<F: Field>(field: &F, m: &Mat<F::Elem>) -> Result<F::Elem> {
    let n = m.len();
    let mut a = m.clone();
    let mut d = field.one();
    for c in 0..n {
        let Some(p) = find_pivot(field, &a, c, c) else {
            if (c..n).all(|r| field.is_zero(&a[r][c])) {
                return Ok(field.zero());
            }
            return Err(Error::DivisionByZero);
        };
        if p != c {
            a.swap(p, c);
            d = field.neg(&d);
        }
        let inv = field.inv(&a[c][c]).unwrap();
        d = field.mul(&d, &a[c][c]);
        for r in c + 1..n {
            if field.is_zero(&a[r][c]) {
                continue;
            }
            let f = field.mul(&a[r][c], &inv);
            for k in c..n {
                let t = field.mul(&f, &a[c][k]);
                a[r][k] = field.sub(&a[r][k], &t);
            }
        }
    }
    Ok(d)
}

pub fn rank<F: Field>(field: &F, m: &Mat<F::Elem>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = find_pivot(field, &a, c, r) else { continue };
        a.swap(p, r);
        let inv = field.inv(&a[r][c]).unwrap();
        for rr in r + 1..rows {
            if field.is_zero(&a[rr][c]) {
                continue;
            }
            let f = field.mul(&a[rr][c], &inv);
            for k in c..cols {
                let t = field.mul(&f, &a[r][k]);
                a[rr][k] = field.sub(&a[rr][k], &t);
            }
        }
        r += 1;
    }
    r
}

/// Solve `a x = b` for square `a`.
pub fn solve<F: Field>(field: &F, a: &Mat<F::Elem>, b: &[F::Elem]) -> Result<Vec<F::Elem>> {
    let n = a.len();
    let mut m: Mat<F::Elem> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = find_pivot(field, &m, c, c).ok_or(Error::SingularSystem)?;
        m.swap(p, c);
        let inv = field.inv(&m[c][c]).unwrap();
        for k in c..=n {
            m[c][k] = field.mul(&m[c][k], &inv);
        }
        for r in 0..n {
            if r == c || field.is_zero(&m[r][c]) {
                continue;
            }
            let f = m[r][c].clone();
            for k in c..=n {
                let t = field.mul(&f, &m[c][k]);
                m[r][k] = field.sub(&m[r][k], &t);
            }
        }
    }
    Ok(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn inverse<F: Field>(field: &F, a: &Mat<F::Elem>) -> Result<Mat<F::Elem>> {
    let n = a.len();
    let mut m: Mat<F::Elem> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = find_pivot(field, &m, c, c).ok_or(Error::SingularSystem)?;
        m.swap(p, c);
        let inv = field.inv(&m[c][c]).unwrap();
        for k in 0..2 * n {
            m[c][k] = field.mul(&m[c][k], &inv);
        }
        for r in 0..n {
            if r == c || field.is_zero(&m[r][c]) {
                continue;
            }
            let f = m[r][c].clone();
            for k in 0..2 * n {
                let t = field.mul(&f, &m[c][k]);
                m[r][k] = field.sub(&m[r][k], &t);
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul<F: Field>(field: &F, a: &Mat<F::Elem>, b: &Mat<F::Elem>) -> Mat<F::Elem> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![field.zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if field.is_zero(&a[i][l]) {
                continue;
            }
            for j in 0..m {
                let t = field.mul(&a[i][l], &b[l][j]);
                out[i][j] = field.add(&out[i][j], &t);
            }
        }
    }
    out
}

/// Division-free determinant by Laplace expansion memoised over column
/// subsets, `O(2^n n)` ring operations.
pub fn det_ring<T: Ring>(n: usize, entry: &dyn Fn(usize, usize) -> T) -> T {
    if n == 0 {
        return T::one();
    }
    assert!(n <= 20, "matrix too large for subset expansion");
    // minors[mask] = det of the last |mask| rows restricted to columns in mask.
    let full = (1usize << n) - 1;
    let mut minors: Vec<Option<T>> = vec![None; 1 << n];
    minors[0] = Some(T::one());
    let mut masks: Vec<usize> = (1..=full).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let size = mask.count_ones() as usize;
        let row = n - size;
        let mut acc = T::zero();
        let mut pos = 0;
        for c in 0..n {
            if mask & (1 << c) == 0 {
                continue;
            }
            let e = entry(row, c);
            if !e.is_zero() {
                let sub = minors[mask & !(1 << c)].as_ref().unwrap();
                if !sub.is_zero() {
                    let t = e.mul(sub);
                    acc = if pos % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
                }
            }
            pos += 1;
        }
        minors[mask] = Some(acc);
    }
    minors[full].take().unwrap()
}

/// Adjugate by cofactors: `adj[i][j] = (-1)^(i+j) det(minor(j, i))`.
pub fn adjugate_ring<T: Ring>(n: usize, entry: &dyn Fn(usize, usize) -> T) -> Vec<Vec<T>> {
    let mut adj = vec![vec![T::zero(); n]; n];
    for (i, row) in adj.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let m = det_ring(n - 1, &|r, c| {
                let rr = if r >= j { r + 1 } else { r };
                let cc = if c >= i { c + 1 } else { c };
                entry(rr, cc)
            });
            *slot = if (i + j) % 2 == 0 { m } else { m.neg() };
        }
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::field::RationalField;
    use crate::ring::rational::Rational;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn det_and_inverse_small() {
        let m = vec![vec![q(1), q(2)], vec![q(3), q(4)]];
        assert_eq!(det(&RationalField, &m).unwrap(), q(-2));
        assert_eq!(det_ring(2, &|r, c| m[r][c].clone()), q(-2));
        let inv = inverse(&RationalField, &m).unwrap();
        assert_eq!(inv[0][0], q(-2));
        assert_eq!(inv[1][0], Rational::new(3, 2));
    }

    #[test]
    fn singular_system() {
        let m = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(solve(&RationalField, &m, &[q(1), q(1)]), Err(Error::SingularSystem));
        assert_eq!(rank(&RationalField, &m), 1);
    }

    proptest! {
        #[test]
        fn laplace_matches_elimination(v in prop::collection::vec(-5i64..6, 16)) {
            let m: Mat<Rational> = (0..4).map(|i| (0..4).map(|j| q(v[4 * i + j])).collect()).collect();
            prop_assert_eq!(det(&RationalField, &m).unwrap(), det_ring(4, &|r, c| m[r][c].clone()));
        }

        #[test]
        fn adjugate_identity(v in prop::collection::vec(0u64..1000, 9)) {
            let m: Mat<u64> = (0..3).map(|i| (0..3).map(|j| v[3 * i + j]).collect()).collect();
            let mq: Mat<Rational> = m.iter().map(|r| r.iter().map(|&x| q(x as i64)).collect()).collect();
            let adj = adjugate_ring(3, &|r, c| mq[r][c].clone());
            let d = det_ring(3, &|r, c| mq[r][c].clone());
            for i in 0..3 {
                for j in 0..3 {
                    let mut s = Rational::zero();
                    for k in 0..3 {
                        s = s + &mq[i][k] * &adj[k][j];
                    }
                    prop_assert_eq!(s, if i == j { d.clone() } else { Rational::zero() });
                }
            }
        }
    }
}
