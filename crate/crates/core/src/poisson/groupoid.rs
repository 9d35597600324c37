//! Three mutually commuting `(F, B)` pairs and the constraints describing the
//! graph of the groupoid multiplication.

use super::algebra::{groupoid_decls, Consts, PoissonAlgebra};
use super::checks::Report;
use crate::error::Result;
use crate::ring::{Poly, Var};
use rayon::prelude::*;
use std::collections::HashMap;

/// Pairs `(F1, B1)`, `(F2, B2)` with the groupoid bracket and `(F3, B3)`
/// with its negative.
pub fn triple_pairs(n: usize) -> Result<PoissonAlgebra> {
    let c = Consts::new(n);
    let mut decls = Vec::new();
    for (k, sign) in [1i64, 1, -1].into_iter().enumerate() {
        decls.extend(groupoid_decls(&c, 2 * k, 2 * k + 1, sign));
    }
    let blocks = [("F1", "f"), ("B1", "b"), ("F2", "g"), ("B2", "c"), ("F3", "h"), ("B3", "d")];
    PoissonAlgebra::partial("FB-triple", n, &blocks, &decls)
}

/// Entries of `f = B3 - B2 B1`, `g = F3 - F1`, `h = F2 - B1 F1 B1^T`.
pub fn fgh_constraints(alg: &PoissonAlgebra) -> [(&'static str, Vec<Poly>); 3] {
    let (f1, b1, f2, b2, f3, b3) =
        (alg.mat("F1"), alg.mat("B1"), alg.mat("F2"), alg.mat("B2"), alg.mat("F3"), alg.mat("B3"));
    let flat = |m: crate::tensor::LegMatrix<Poly>| {
        let n = m.n();
        (0..n * n).map(|k| m.get(k / n, k % n)).collect::<Vec<_>>()
    };
    [
        ("f", flat(b3.sub(&b2.mul(&b1)))),
        ("g", flat(f3.sub(&f1))),
        ("h", flat(f2.sub(&b1.mul(&f1).mul(&b1.transpose())))),
    ]
}

fn surface(alg: &PoissonAlgebra) -> HashMap<Var, Poly> {
    let n = alg.n;
    let (f1, b1, b2) = (alg.mat("F1"), alg.mat("B1"), alg.mat("B2"));
    let b3 = b2.mul(&b1);
    let f2 = b1.mul(&f1).mul(&b1.transpose());
    let mut map = HashMap::new();
    for i in 0..n {
        for j in 0..n {
            map.insert(alg.var("B3", i, j), b3.get(i, j));
            map.insert(alg.var("F3", i, j), f1.get(i, j));
            map.insert(alg.var("F2", i, j), f2.get(i, j));
        }
    }
    map
}

/// The six families `{f,f}, {g,g}, {h,h}, {f,g}, {f,h}, {g,h}` restricted to
/// the constraint surface.
pub fn lagrangian_check(n: usize) -> Result<Vec<(String, Report)>> {
    let alg = triple_pairs(n)?;
    let cons = fgh_constraints(&alg);
    let surf = surface(&alg);
    let look = |v: Var| surf.get(&v).cloned();
    let mut out = Vec::new();
    for x in 0..3 {
        for y in x..3 {
            let (nx, cx) = (&cons[x].0, &cons[x].1);
            let (ny, cy) = (&cons[y].0, &cons[y].1);
            let pairs: Vec<(usize, usize)> =
                (0..cx.len()).flat_map(|i| (0..cy.len()).map(move |j| (i, j))).collect();
            let hits = pairs
                .par_iter()
                .map(|&(i, j)| -> Result<Option<String>> {
                    let b = alg.bracket(&cx[i], &cy[j]).substitute(&look)?;
                    Ok((!b.is_zero()).then(|| format!("{{{nx}_{i}, {ny}_{j}}} = {}", alg.display(&b))))
                })
                .collect::<Result<Vec<_>>>()?;
            out.push((format!("{{{nx},{ny}}}"), Report::from_witness(hits.into_iter().flatten().next())));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_families_vanish_on_the_surface() {
        for n in [2, 3] {
            let r = lagrangian_check(n).unwrap();
            assert_eq!(r.len(), 6);
            for (name, rep) in r {
                assert!(rep.pass, "n={n} {name}: {:?}", rep.witness);
            }
        }
    }

    #[test]
    fn same_sign_third_pair_breaks_the_graph_condition() {
        let c = Consts::new(2);
        let mut decls = Vec::new();
        for k in 0..3 {
            decls.extend(groupoid_decls(&c, 2 * k, 2 * k + 1, 1));
        }
        let blocks = [("F1", "f"), ("B1", "b"), ("F2", "g"), ("B2", "c"), ("F3", "h"), ("B3", "d")];
        let alg = PoissonAlgebra::partial("control", 2, &blocks, &decls).unwrap();
        let cons = fgh_constraints(&alg);
        let surf = surface(&alg);
        let look = |v: Var| surf.get(&v).cloned();
        let g = &cons[1].1;
        let any = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).any(|(i, j)| {
            !alg.bracket(&g[i], &g[j]).substitute(&look).unwrap().is_zero()
        });
        assert!(any);
    }
}
