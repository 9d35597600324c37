//! Central elements: corner minors, determinant pencils, the chain matrix
//! `S`, the catalogued Casimir families, and the exponent matrices that
//! describe log-scaling brackets of minors.

use crate::error::{Error, Result};
use crate::poisson::algebra::{det_poly, inverse_expr, to_expr, AlgebraSpec, Family, PoissonAlgebra};
use crate::poisson::checks::{bracket_at_point, casimir_check, sample_point, Options, Report};
use crate::ring::linalg::det_ring;
use crate::ring::params::LAMBDA;
use crate::ring::{Expr, Field, Poly, PrimeField, Var};
use crate::tensor::{LegMatrix, QCase};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corner {
    BottomLeft,
    UpperRight,
    UpperLeft,
    BottomRight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinorSpec {
    pub corner: Corner,
    pub size: usize,
}

/// Determinant of a `d × d` corner block; the empty minor is 1.
pub fn corner_minor(m: &LegMatrix<Expr>, spec: MinorSpec) -> Result<Expr> {
    let n = m.n();
    let d = spec.size;
    if d > n {
        return Err(Error::InvalidSpec(format!("minor of size {d} in a {n}x{n} matrix")));
    }
    let (r0, c0) = match spec.corner {
        Corner::UpperLeft => (0, 0),
        Corner::UpperRight => (0, n - d),
        Corner::BottomLeft => (n - d, 0),
        Corner::BottomRight => (n - d, n - d),
    };
    Ok(det_ring(d, &|r, c| m.get(r0 + r, c0 + c)))
}

pub fn minor(m: &LegMatrix<Expr>, corner: Corner, d: usize) -> Expr {
    corner_minor(m, MinorSpec { corner, size: d }).expect("size checked by caller")
}

/// Coefficients of `det(m1 + λ m2) / normalizer` keyed by the power of `λ`.
/// Entries may be Laurent in `λ`.
pub fn det_pencil(m1: &LegMatrix<Poly>, m2: &LegMatrix<Poly>, normalizer: &Expr) -> Vec<(i32, Expr)> {
    let lam = Poly::var(LAMBDA);
    let pencil = m1.add(&m2.scale(&lam));
    pencil_coefficients(&pencil, normalizer)
}

/// Coefficients in `λ` of `det(m) / normalizer`.
pub fn pencil_coefficients(m: &LegMatrix<Poly>, normalizer: &Expr) -> Vec<(i32, Expr)> {
    det_poly(m)
        .coefficients_in(LAMBDA)
        .into_iter()
        .map(|(k, c)| (k, Expr::poly(c).div(normalizer)))
        .collect()
}

/// `Y_p`: coefficients of `λ^{N-2p}` in `det(λA + λ^{-1}A^T)/det A`, `p = 1..=[N/2]`.
pub fn y_family(a: &LegMatrix<Poly>) -> Vec<(String, Expr)> {
    let n = a.n() as i32;
    let lam = Poly::var(LAMBDA);
    let laminv = Poly::var_pow(LAMBDA, -1);
    let pencil = a.scale(&lam).add(&a.transpose().scale(&laminv));
    let coeffs = pencil_coefficients(&pencil, &Expr::poly(det_poly(a)));
    (1..=n / 2)
        .map(|p| {
            let c = coeffs.iter().find(|(k, _)| *k == n - 2 * p).map(|(_, e)| e.clone()).unwrap_or(Expr::int(0));
            (format!("Y_{p}"), c)
        })
        .collect()
}

/// Chain matrix `A^T B_1^{-1} B_2^T B_3^{-1} ...` (case ii) or
/// `A B_1^{-1} B_2^T ...` (case iii).
pub fn build_chain_s(a: &LegMatrix<Poly>, bs: &[LegMatrix<Poly>], case: QCase) -> LegMatrix<Expr> {
    let mut s = match case {
        QCase::III => to_expr(a),
        _ => to_expr(&a.transpose()),
    };
    for (k, b) in bs.iter().enumerate() {
        let f = if k % 2 == 0 { inverse_expr(b) } else { to_expr(&b.transpose()) };
        s = s.mul(&f);
    }
    s
}

/// Named central elements for one system.
#[derive(Clone, Debug)]
pub struct CasimirFamily {
    pub system: String,
    pub members: Vec<(String, Expr)>,
}

fn dete(m: &LegMatrix<Poly>) -> Expr {
    Expr::poly(det_poly(m))
}

fn mats(alg: &PoissonAlgebra, prefix: &str, j: usize) -> Vec<LegMatrix<Poly>> {
    (1..=j).map(|k| alg.mat(&format!("{prefix}{k}"))).collect()
}

/// Corners used by a chain family for `(M_S, M_{B_k})`.
fn chain_corners(case: QCase, j: usize) -> (Corner, Corner) {
    match (case, j % 2 == 1) {
        (QCase::III, true) => (Corner::BottomRight, Corner::BottomLeft),
        (QCase::III, false) => (Corner::BottomLeft, Corner::BottomLeft),
        (_, true) => (Corner::UpperLeft, Corner::UpperRight),
        (_, false) => (Corner::UpperRight, Corner::UpperRight),
    }
}

/// `X_p` for a chain of length `j` with coupling matrices `ms` carrying the
/// minors and `dets` the determinant prefactor blocks.
fn chain_x(
    n: usize,
    j: usize,
    s: &LegMatrix<Expr>,
    minors_of: &[LegMatrix<Poly>],
    dets_of: &[Vec<LegMatrix<Poly>>],
    a: &LegMatrix<Poly>,
    case: QCase,
) -> Vec<(String, Expr)> {
    let (cs, cb) = chain_corners(case, j);
    let mb: Vec<LegMatrix<Expr>> = minors_of.iter().map(to_expr).collect();
    let mut out = Vec::new();
    if j.is_multiple_of(2) {
        for p in 0..n.div_ceil(2) {
            let mut num = vec![minor(s, cs, p)];
            let mut den = vec![minor(s, cs, n - p)];
            for b in &mb {
                num.push(minor(b, cb, p));
                den.push(minor(b, cb, n - p));
            }
            out.push((format!("X_{p}"), Expr::product(num).div(&Expr::product(den))));
        }
    } else {
        for p in 1..=n / 2 {
            let mut num = vec![minor(s, cs, p), minor(s, cs, n - p)];
            let mut den = Vec::new();
            for (k, b) in mb.iter().enumerate() {
                let pair = [minor(b, cb, p), minor(b, cb, n - p)];
                if k % 2 == 1 { num.extend(pair) } else { den.extend(pair) }
            }
            let mut dnum = Vec::new();
            let mut dden = vec![dete(a)];
            for (k, group) in dets_of.iter().enumerate() {
                for m in group {
                    let d = dete(m);
                    if k % 2 == 0 {
                        dnum.push(d);
                    } else {
                        dden.push(d);
                    }
                }
            }
            let ratio = Expr::product(num).div(&Expr::product(den));
            let pref = Expr::product(dnum).div(&Expr::product(dden));
            out.push((format!("X_{p}"), ratio.mul(&pref)));
        }
    }
    out
}

/// `K^p` of a B-chain of even length.
fn k_composite(s: &LegMatrix<Expr>, bs: &[LegMatrix<Expr>], p: usize, n: usize, cs: Corner, cb: Corner) -> Expr {
    let mut num = vec![minor(s, cs, p)];
    let mut den = Vec::new();
    for (k, b) in bs.iter().enumerate() {
        if k % 2 == 0 {
            den.push(minor(b, cb, n - p));
        } else {
            num.push(minor(b, cb, p));
        }
    }
    Expr::product(num).div(&Expr::product(den))
}

fn z_family(b: &LegMatrix<Poly>, c: &LegMatrix<Poly>, tag: &str) -> Vec<(String, Expr)> {
    det_pencil(b, c, &dete(b))
        .into_iter()
        .filter(|(k, _)| *k >= 1)
        .map(|(k, e)| (format!("Z{tag}_{k}"), e))
        .collect()
}

fn case_of(spec: &AlgebraSpec) -> Result<QCase> {
    match &spec.q {
        crate::poisson::QSpec::Case(c) => Ok(*c),
        _ => Err(Error::InvalidSpec(format!("no Casimir family for coupling {}", spec.q.label()))),
    }
}

pub fn casimir_family(spec: &AlgebraSpec) -> Result<CasimirFamily> {
    let alg = PoissonAlgebra::build(spec)?;
    let n = spec.n;
    let mut members: Vec<(String, Expr)> = Vec::new();
    match spec.family {
        Family::A => {
            let a = alg.mat("A");
            let laminv = Poly::var_pow(LAMBDA, -1);
            let pencil = a.add(&a.transpose().scale(&laminv));
            for (k, e) in pencil_coefficients(&pencil, &Expr::int(1)) {
                members.push((format!("r_{}", -k), e));
            }
            let ae = to_expr(&a);
            for d in 1..=n / 2 {
                let e = minor(&ae, Corner::BottomLeft, d).div(&minor(&ae, Corner::BottomLeft, n - d));
                members.push((format!("b_{d}"), e));
            }
        }
        Family::B => {
            let b = to_expr(&alg.mat("B"));
            for d in 1..=n {
                let e = minor(&b, Corner::UpperRight, d).div(&minor(&b, Corner::BottomLeft, n - d));
                members.push((format!("c_{d}"), e));
            }
        }
        Family::BC => {
            let (b, c) = (alg.mat("B"), alg.mat("C"));
            let (be, ce) = (to_expr(&b), to_expr(&c));
            for d in 0..=n {
                let e = minor(&be, Corner::BottomLeft, d).div(&minor(&ce, Corner::UpperRight, n - d));
                members.push((format!("m_{d}"), e));
            }
            for (s, e) in det_pencil(&b, &c, &Expr::int(1)) {
                members.push((format!("q_{s}"), e));
            }
        }
        Family::AB | Family::ABC => {
            let case = case_of(spec)?;
            if case == QCase::I {
                return Err(Error::InvalidSpec("Casimir families are catalogued for cases (ii) and (iii)".into()));
            }
            let a = alg.mat("A");
            let b = alg.mat("B");
            members.extend(y_family(&a));
            let triple = spec.family == Family::ABC;
            let c = if triple { Some(alg.mat("C")) } else { None };
            // Minor-carrying second matrix and the matrix inverted inside S.
            let (carrier, inner) = match (case, &c) {
                (QCase::III, Some(c)) => (b.clone(), c.clone()),
                (_, Some(c)) => (c.clone(), b.clone()),
                _ => (b.clone(), b.clone()),
            };
            let s = build_chain_s(&a, std::slice::from_ref(&inner), case);
            let (cs, cb) = chain_corners(case, 1);
            let ce = to_expr(&carrier);
            let pref = match &c {
                Some(c) => dete(&b).mul(&dete(c)).div(&dete(&a)),
                None => dete(&b).pow(2).div(&dete(&a)),
            };
            for p in 1..=n / 2 {
                let ratio = minor(&s, cs, p)
                    .mul(&minor(&s, cs, n - p))
                    .div(&minor(&ce, cb, n - p).mul(&minor(&ce, cb, p)));
                members.push((format!("X_{p}"), ratio.mul(&pref)));
            }
            if let Some(c) = &c {
                members.extend(z_family(&b, c, ""));
            }
        }
        Family::BChain => {
            let case = case_of(spec)?;
            let a = alg.mat("A");
            let bs = mats(&alg, "B", spec.j);
            members.extend(y_family(&a));
            let s = build_chain_s(&a, &bs, case);
            let groups: Vec<Vec<LegMatrix<Poly>>> = bs.iter().map(|b| vec![b.clone()]).collect();
            let sq: Vec<Vec<LegMatrix<Poly>>> = groups.iter().map(|g| vec![g[0].clone(), g[0].clone()]).collect();
            members.extend(chain_x(n, spec.j, &s, &bs, &sq, &a, case));
            if spec.j.is_multiple_of(2) {
                let (cs, cb) = chain_corners(case, spec.j);
                let be: Vec<LegMatrix<Expr>> = bs.iter().map(to_expr).collect();
                for p in 0..n.div_ceil(2) {
                    let e = k_composite(&s, &be, p, n, cs, cb).div(&k_composite(&s, &be, n - p, n, cs, cb));
                    members.push((format!("K^{p}/K^{}", n - p), e));
                }
            }
        }
        Family::BCChain => {
            let case = case_of(spec)?;
            let a = alg.mat("A");
            let bs = mats(&alg, "B", spec.j);
            let cs = mats(&alg, "C", spec.j);
            members.extend(y_family(&a));
            for (k, (b, c)) in bs.iter().zip(&cs).enumerate() {
                members.extend(z_family(b, c, &format!("^({})", k + 1)));
            }
            // Case (iii) swaps the roles of B_k and C_k, as for the triple.
            let (inner, carrier) = if case == QCase::III { (&cs, &bs) } else { (&bs, &cs) };
            let s = build_chain_s(&a, inner, case);
            let groups: Vec<Vec<LegMatrix<Poly>>> = bs.iter().zip(&cs).map(|(b, c)| vec![b.clone(), c.clone()]).collect();
            members.extend(chain_x(n, spec.j, &s, carrier, &groups, &a, case));
        }
        Family::FBGroupoid | Family::FBTriple => {
            return Err(Error::InvalidSpec(format!("no Casimir family catalogued for {}", spec.family.name())))
        }
    }
    Ok(CasimirFamily { system: spec.to_string(), members })
}

/// Exponent matrices of log-scaling brackets, `1`-based indicator form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExponentKind {
    D,
    F,
    G0,
    GMinus,
    GPlus,
    E,
}

pub fn exponent_matrix(kind: ExponentKind, n: usize, p: usize) -> Vec<Vec<i64>> {
    let top = |i: usize| (i < p) as i64;
    let bottom = |i: usize| (i >= n - p) as i64;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match kind {
                    ExponentKind::D => top(i) + top(j),
                    ExponentKind::F => -bottom(i) - bottom(j),
                    ExponentKind::G0 => top(i) - bottom(j),
                    ExponentKind::GMinus => top(j),
                    ExponentKind::GPlus => -bottom(i),
                    ExponentKind::E => top(i),
                })
                .collect()
        })
        .collect()
}

/// `c_g` with `{minor, g} = c_g · minor · g` for every `g` in `block`,
/// sampled at several points; fails if the ratio is not constant.
pub fn scaling_exponents(alg: &PoissonAlgebra, minor: &Expr, block: &str, opts: &Options) -> Result<Vec<Vec<i64>>> {
    let n = alg.n;
    let field: &PrimeField = &opts.field;
    let trials = opts.trials.max(2);
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let g = alg.var(block, i, j);
            let ge = Expr::sym(g);
            let mut seen: Option<u64> = None;
            for t in 0..trials {
                let c = sample_point(field, alg.num_generators(), opts.seed, t as u64, |pt| {
                    let br = bracket_at_point(alg, minor, &ge, field, pt)?;
                    let mv = minor.eval(field, &pt.lookup())?;
                    let den = field.mul(&mv, &pt.get(g));
                    field.div(&br, &den)
                })?;
                match seen {
                    None => seen = Some(c),
                    Some(prev) if prev != c => {
                        return Err(Error::NonScalingBracket(alg.var_name_of(g.0 as usize)));
                    }
                    _ => {}
                }
            }
            let c = seen.unwrap();
            out[i][j] = field
                .to_small_int(c)
                .ok_or_else(|| Error::NonScalingBracket(alg.var_name_of(g.0 as usize)))?;
        }
    }
    Ok(out)
}

pub fn var_of(alg: &PoissonAlgebra, block: &str, i: usize, j: usize) -> Var {
    alg.var(block, i, j)
}

/// Every member of the catalogued family is central.
pub fn casimir_family_check(spec: &AlgebraSpec, opts: &Options) -> Result<Report> {
    let alg = PoissonAlgebra::build(spec)?;
    let fam = casimir_family(spec)?;
    for (name, e) in &fam.members {
        let r = casimir_check(&alg, e, opts)?;
        if !r.pass {
            return Ok(Report::fail(format!("{name}: {}", r.witness.unwrap_or_default())));
        }
    }
    let names: Vec<&str> = fam.members.iter().map(|(n, _)| n.as_str()).collect();
    Ok(Report::pass().with_detail(format!("{} members: {}", names.len(), names.join(", "))))
}

/// Measured exponents of `S` and `B` minors for `AB(ii)` and of the chain
/// minors for `j = 2, 3`, against the block matrices.
pub fn exponent_check(n: usize, opts: &Options) -> Result<Report> {
    use ExponentKind::*;
    let mut cases: Vec<(String, PoissonAlgebra, Expr, String, ExponentKind, usize)> = Vec::new();
    let alg = PoissonAlgebra::build(&AlgebraSpec::ab(n, QCase::II))?;
    let s = build_chain_s(&alg.mat("A"), &[alg.mat("B")], QCase::II);
    let b = to_expr(&alg.mat("B"));
    for p in 1..n {
        let ms = minor(&s, Corner::UpperLeft, p);
        let mb = minor(&b, Corner::UpperRight, p);
        cases.push((format!("AB S_{p}"), alg.clone(), ms.clone(), "A".into(), D, p));
        cases.push((format!("AB S_{p}"), alg.clone(), ms, "B".into(), D, p));
        cases.push((format!("AB B_{p}"), alg.clone(), mb.clone(), "A".into(), F, p));
        cases.push((format!("AB B_{p}"), alg.clone(), mb, "B".into(), G0, p));
    }
    for j in 2..=3 {
        let alg = PoissonAlgebra::build(&AlgebraSpec::b_chain(n, j, QCase::II))?;
        let bs = mats(&alg, "B", j);
        let s = build_chain_s(&alg.mat("A"), &bs, QCase::II);
        let corner = if j % 2 == 0 { Corner::UpperRight } else { Corner::UpperLeft };
        let last = if j % 2 == 0 { GPlus } else { E };
        for p in 1..n {
            let ms = minor(&s, corner, p);
            let tag = format!("chain{j} S_{p}");
            cases.push((tag.clone(), alg.clone(), ms.clone(), "A".into(), D, p));
            cases.push((tag.clone(), alg.clone(), ms.clone(), "B1".into(), GMinus, p));
            cases.push((tag, alg.clone(), ms, format!("B{j}"), last, p));
            let b1 = minor(&to_expr(&bs[0]), Corner::UpperRight, p);
            let b2 = minor(&to_expr(&bs[1]), Corner::UpperRight, p);
            cases.push((format!("chain{j} B1_{p}"), alg.clone(), b1, "B2".into(), GMinus, p));
            cases.push((format!("chain{j} B2_{p}"), alg.clone(), b2, "B1".into(), GPlus, p));
        }
    }
    let total = cases.len();
    for (tag, alg, m, block, kind, p) in cases {
        let got = scaling_exponents(&alg, &m, &block, opts)?;
        if got != exponent_matrix(kind, n, p) {
            return Ok(Report::fail(format!("{tag} against {block}: measured {got:?}, expected {kind:?}")));
        }
    }
    Ok(Report::pass().with_detail(format!("{total} minor/block pairs")))
}
