//! Jacobi, Poisson-map, Casimir, rank and reduction checks.

use super::algebra::PoissonAlgebra;
use crate::error::{Error, Result};
use crate::ring::linalg::rank;
use crate::ring::{Expr, Field, Poly, PrimeField, RatFun, Rational, Var};
use crate::sample::{trial_rng, Point};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Symbolic,
    Modular,
}

impl Backend {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "symbolic" => Some(Backend::Symbolic),
            "modular" => Some(Backend::Modular),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub backend: Backend,
    pub field: PrimeField,
    pub trials: usize,
    pub seed: u64,
}

impl Options {
    pub fn symbolic() -> Self {
        Options { backend: Backend::Symbolic, field: PrimeField::default_field(), trials: 0, seed: 0 }
    }

    pub fn modular(trials: usize, seed: u64) -> Self {
        Options { backend: Backend::Modular, field: PrimeField::default_field(), trials, seed }
    }

    pub fn with_field(mut self, field: PrimeField) -> Self {
        self.field = field;
        self
    }
}

/// Outcome of a check.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub pass: bool,
    pub witness: Option<String>,
    pub detail: Option<String>,
}

impl Report {
    pub fn pass() -> Self {
        Report { pass: true, witness: None, detail: None }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Report { pass: false, witness: Some(witness.into()), detail: None }
    }

    pub fn from_witness(w: Option<String>) -> Self {
        match w {
            None => Self::pass(),
            Some(w) => Self::fail(w),
        }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

const RESAMPLE: usize = 32;

/// Sample a point where `ok` holds, retrying on division by zero.
pub(crate) fn sample_point<T>(
    field: &PrimeField,
    m: usize,
    seed: u64,
    trial: u64,
    mut f: impl FnMut(&Point) -> Result<T>,
) -> Result<T> {
    let mut rng = trial_rng(seed, trial);
    for _ in 0..RESAMPLE {
        let pt = Point::random(field, m, &mut rng);
        match f(&pt) {
            Err(Error::DivisionByZero) => continue,
            other => return other,
        }
    }
    Err(Error::Inconclusive(RESAMPLE))
}

fn show_mod(field: &PrimeField, x: u64) -> String {
    match field.to_small_int(x) {
        Some(s) => s.to_string(),
        None => format!("{x} (mod {})", field.modulus()),
    }
}

/// Partial derivatives of every upper-triangle table entry.
struct TableDerivs {
    m: usize,
    d: Vec<Vec<(usize, Poly)>>,
}

impl TableDerivs {
    fn new(alg: &PoissonAlgebra) -> Self {
        let m = alg.num_generators();
        let d = (0..m * m)
            .into_par_iter()
            .map(|idx| {
                let (j, k) = (idx / m, idx % m);
                let e = alg.entry(Var(j as u32), Var(k as u32));
                e.variables()
                    .into_iter()
                    .filter(|v| alg.is_generator(*v))
                    .map(|v| (v.0 as usize, e.partial(v)))
                    .collect()
            })
            .collect();
        TableDerivs { m, d }
    }

    fn get(&self, j: usize, k: usize) -> &[(usize, Poly)] {
        &self.d[j * self.m + k]
    }
}

/// `{g_i, {g_j, g_k}} = sum_l T(i,l) d_l T(j,k)`.
fn nested(alg: &PoissonAlgebra, dv: &TableDerivs, i: usize, j: usize, k: usize) -> Poly {
    let mut out = Poly::zero();
    for (l, d) in dv.get(j, k) {
        let t = alg.entry(Var(i as u32), Var(*l as u32));
        if !t.is_zero() {
            out.add_product(t, d, &Rational::one());
        }
    }
    out
}

pub fn jacobiator(alg: &PoissonAlgebra, i: Var, j: Var, k: Var) -> Poly {
    let dv = TableDerivs::new(alg);
    let (i, j, k) = (i.0 as usize, j.0 as usize, k.0 as usize);
    let mut s = nested(alg, &dv, i, j, k);
    s.add_assign(&nested(alg, &dv, j, k, i));
    s.add_assign(&nested(alg, &dv, k, i, j));
    s
}

/// Jacobi identity on all generator triples.
pub fn jacobi_check(alg: &PoissonAlgebra, opts: &Options) -> Result<Report> {
    let m = alg.num_generators();
    let dv = TableDerivs::new(alg);
    let name = |i: usize| alg.var_name_of(i);
    match opts.backend {
        Backend::Symbolic => {
            let hit = (0..m)
                .into_par_iter()
                .filter_map(|i| {
                    for j in i + 1..m {
                        for k in j + 1..m {
                            let mut s = nested(alg, &dv, i, j, k);
                            s.add_assign(&nested(alg, &dv, j, k, i));
                            s.add_assign(&nested(alg, &dv, k, i, j));
                            if !s.is_zero() {
                                return Some((i, j, k, s));
                            }
                        }
                    }
                    None
                })
                .min_by_key(|(i, j, k, _)| (*i, *j, *k));
            Ok(Report::from_witness(hit.map(|(i, j, k, s)| {
                format!("({}, {}, {}): residual {}", name(i), name(j), name(k), alg.display(&s))
            })))
        }
        Backend::Modular => {
            let field = &opts.field;
            let hits: Vec<Option<(usize, usize, usize, u64, usize)>> = (0..opts.trials)
                .into_par_iter()
                .map(|t| -> Result<_> {
                    sample_point(field, m, opts.seed, t as u64, |pt| {
                        let look = pt.lookup();
                        let mut tv = vec![0u64; m * m];
                        for i in 0..m {
                            for j in i + 1..m {
                                let v = alg.entry(Var(i as u32), Var(j as u32)).eval(field, &look)?;
                                tv[i * m + j] = v;
                                tv[j * m + i] = field.neg(&v);
                            }
                        }
                        let mut gv: Vec<Vec<(usize, u64)>> = Vec::with_capacity(m * m);
                        for idx in 0..m * m {
                            let mut row = Vec::new();
                            for (l, d) in dv.get(idx / m, idx % m) {
                                row.push((*l, d.eval(field, &look)?));
                            }
                            gv.push(row);
                        }
                        let nest = |i: usize, j: usize, k: usize| {
                            gv[j * m + k].iter().fold(0u64, |acc, (l, d)| {
                                field.add(&acc, &field.mul(&tv[i * m + l], d))
                            })
                        };
                        for i in 0..m {
                            for j in i + 1..m {
                                for k in j + 1..m {
                                    let s = field.add(&field.add(&nest(i, j, k), &nest(j, k, i)), &nest(k, i, j));
                                    if s != 0 {
                                        return Ok(Some((i, j, k, s, t)));
                                    }
                                }
                            }
                        }
                        Ok(None)
                    })
                })
                .collect::<Result<_>>()?;
            let hit = hits.into_iter().flatten().min_by_key(|h| (h.4, h.0, h.1, h.2));
            Ok(Report::from_witness(hit.map(|(i, j, k, s, t)| {
                format!("({}, {}, {}): residual {} at trial {t}", name(i), name(j), name(k), show_mod(field, s))
            })))
        }
    }
}

/// `{f, g}` evaluated at a point. `f` and `g` may be rational expressions.
pub fn bracket_at_point(alg: &PoissonAlgebra, f: &Expr, g: &Expr, field: &PrimeField, pt: &Point) -> Result<u64> {
    bracket_eval(alg, f, g, field, &pt.lookup())
}

/// [`bracket_at_point`] over any field.
pub fn bracket_eval<F: Field>(
    alg: &PoissonAlgebra,
    f: &Expr,
    g: &Expr,
    field: &F,
    look: &dyn Fn(Var) -> Option<F::Elem>,
) -> Result<F::Elem> {
    let fv: Vec<Var> = f.free_vars().into_iter().filter(|v| alg.is_generator(*v)).collect();
    let gv: Vec<Var> = g.free_vars().into_iter().filter(|v| alg.is_generator(*v)).collect();
    let (_, df) = f.gradient_eval(field, look, &fv)?;
    let (_, dg) = g.gradient_eval(field, look, &gv)?;
    let mut acc = field.zero();
    for (x, dfx) in fv.iter().zip(&df) {
        if field.is_zero(dfx) {
            continue;
        }
        for (y, dgy) in gv.iter().zip(&dg) {
            let t = alg.entry(*x, *y);
            if t.is_zero() || field.is_zero(dgy) {
                continue;
            }
            let tv = t.eval(field, look)?;
            acc = field.add(&acc, &field.mul(&field.mul(dfx, dgy), &tv));
        }
    }
    Ok(acc)
}

/// The Poisson tensor `{x_i, x_j}` over all generators at a point.
pub fn tensor_at<F: Field>(
    alg: &PoissonAlgebra,
    field: &F,
    look: &dyn Fn(Var) -> Option<F::Elem>,
) -> Result<Vec<Vec<F::Elem>>> {
    let gens = alg.generators();
    let mut out = vec![vec![field.zero(); gens.len()]; gens.len()];
    for (i, x) in gens.iter().enumerate() {
        for (j, y) in gens.iter().enumerate() {
            let t = alg.entry(*x, *y);
            if !t.is_zero() {
                out[i][j] = t.eval(field, look)?;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapMode {
    Auto,
    Poisson,
    Anti,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapSign {
    Poisson,
    Anti,
    Neither,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapReport {
    pub sign: MapSign,
    pub report: Report,
}

/// Evaluate a polynomial with generators replaced by rational functions.
pub fn compose_ratfun(p: &Poly, image: &dyn Fn(Var) -> Option<RatFun>) -> Result<RatFun> {
    let mut out = RatFun::zero();
    let mut cache: BTreeMap<(Var, i32), RatFun> = BTreeMap::new();
    for (mono, c) in p.terms() {
        let mut t = RatFun::constant(c.clone());
        let mut rest = Vec::new();
        for &(v, e) in mono.factors() {
            match image(v) {
                None => rest.push((v, e)),
                Some(r) => {
                    let pw = match cache.get(&(v, e)) {
                        Some(x) => x.clone(),
                        None => {
                            let base = if e < 0 { r.inv()? } else { r };
                            let mut acc = RatFun::one();
                            for _ in 0..e.unsigned_abs() {
                                acc = acc.mul(&base);
                            }
                            cache.insert((v, e), acc.clone());
                            acc
                        }
                    };
                    t = t.mul(&pw);
                }
            }
        }
        if !rest.is_empty() {
            let m = crate::ring::Monomial::from_pairs(rest);
            t = t.mul(&RatFun::from_poly(Poly::term(m, Rational::one())));
        }
        out = out.add(&t);
    }
    Ok(out)
}

/// Compare `{phi(a), phi(b)}` in `source` against `psi_ab(phi)` for every
/// declared pair of the `target` table; `images[a]` is the image of target
/// generator `a`.
pub fn poisson_map_check(
    source: &PoissonAlgebra,
    images: &[Expr],
    target: &PoissonAlgebra,
    mode: MapMode,
    opts: &Options,
) -> Result<MapReport> {
    let mt = target.num_generators();
    if images.len() != mt {
        return Err(Error::InvalidSpec(format!("map has {} images for {} generators", images.len(), mt)));
    }
    let pairs: Vec<(usize, usize)> = (0..mt)
        .flat_map(|a| (a..mt).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && target.is_declared(Var(a as u32), Var(b as u32)))
        .collect();
    let tname = |a: usize| target.var_name_of(a);
    // (pair index, lhs == rhs, lhs == -rhs, description)
    let outcomes: Vec<(bool, bool, String)> = match opts.backend {
        Backend::Symbolic => {
            let rf: Vec<RatFun> = images.iter().map(|e| e.to_ratfun()).collect::<Result<_>>()?;
            let img = |v: Var| rf.get(v.0 as usize).cloned();
            pairs
                .par_iter()
                .map(|&(a, b)| -> Result<_> {
                    let lhs = source.bracket_ratfun(&rf[a], &rf[b]);
                    let psi = target.entry(Var(a as u32), Var(b as u32));
                    let rhs = compose_ratfun(psi, &img)?;
                    let plus = lhs.equals(&rhs);
                    let minus = lhs.equals(&rhs.neg());
                    let desc = format!("{{{}, {}}}", tname(a), tname(b));
                    Ok((plus, minus, desc))
                })
                .collect::<Result<_>>()?
        }
        Backend::Modular => {
            let field = &opts.field;
            let ms = source.num_generators();
            let frees: Vec<Vec<Var>> = images
                .iter()
                .map(|e| e.free_vars().into_iter().filter(|v| source.is_generator(*v)).collect())
                .collect();
            let per_trial: Vec<Vec<(bool, bool, String)>> = (0..opts.trials)
                .into_par_iter()
                .map(|t| {
                    sample_point(field, ms, opts.seed, t as u64, |pt| {
                        let look = pt.lookup();
                        let mut vals = Vec::with_capacity(mt);
                        let mut grads = Vec::with_capacity(mt);
                        for (e, fv) in images.iter().zip(&frees) {
                            let (v, g) = e.gradient_eval(field, &look, fv)?;
                            vals.push(v);
                            grads.push(g);
                        }
                        let mut tcache: BTreeMap<(usize, usize), u64> = BTreeMap::new();
                        let mut out = Vec::with_capacity(pairs.len());
                        for &(a, b) in &pairs {
                            let mut lhs = 0u64;
                            for (x, dx) in frees[a].iter().zip(&grads[a]) {
                                if *dx == 0 {
                                    continue;
                                }
                                for (y, dy) in frees[b].iter().zip(&grads[b]) {
                                    if *dy == 0 {
                                        continue;
                                    }
                                    let key = (x.0 as usize, y.0 as usize);
                                    let tv = match tcache.get(&key) {
                                        Some(v) => *v,
                                        None => {
                                            let v = source.entry(*x, *y).eval(field, &look)?;
                                            tcache.insert(key, v);
                                            v
                                        }
                                    };
                                    lhs = field.add(&lhs, &field.mul(&field.mul(dx, dy), &tv));
                                }
                            }
                            let psi = target.entry(Var(a as u32), Var(b as u32));
                            let at = |v: Var| {
                                if target.is_generator(v) {
                                    Some(vals[v.0 as usize])
                                } else {
                                    Some(pt.get(v))
                                }
                            };
                            let rhs = psi.eval(field, &at)?;
                            let desc = format!(
                                "{{{}, {}}}: lhs {} rhs {} (trial {t})",
                                tname(a),
                                tname(b),
                                show_mod(field, lhs),
                                show_mod(field, rhs)
                            );
                            out.push((lhs == rhs, lhs == field.neg(&rhs), desc));
                        }
                        Ok(out)
                    })
                })
                .collect::<Result<_>>()?;
            per_trial.into_iter().flatten().collect()
        }
    };
    let plus_fail = outcomes.iter().find(|o| !o.0);
    let minus_fail = outcomes.iter().find(|o| !o.1);
    let sign = match (plus_fail, minus_fail) {
        (None, _) => MapSign::Poisson,
        (Some(_), None) => MapSign::Anti,
        _ => MapSign::Neither,
    };
    let report = match mode {
        MapMode::Poisson => Report::from_witness(plus_fail.map(|o| o.2.clone())),
        MapMode::Anti => Report::from_witness(minus_fail.map(|o| o.2.clone())),
        MapMode::Auto => match sign {
            MapSign::Neither => Report::fail(format!(
                "not Poisson at {}; not anti at {}",
                plus_fail.unwrap().2,
                minus_fail.unwrap().2
            )),
            _ => Report::pass(),
        },
    };
    let detail = match sign {
        MapSign::Poisson => "poisson",
        MapSign::Anti => "anti",
        MapSign::Neither => "neither",
    };
    Ok(MapReport { sign, report: report.with_detail(detail) })
}

/// `{C, g} = 0` for every generator `g`.
pub fn casimir_check(alg: &PoissonAlgebra, candidate: &Expr, opts: &Options) -> Result<Report> {
    let m = alg.num_generators();
    let gens = alg.generators();
    match opts.backend {
        Backend::Symbolic => {
            let rf = candidate.to_ratfun()?;
            let hit = gens
                .par_iter()
                .map(|&g| {
                    let gp = Poly::var(g);
                    let mut num = &alg.bracket(&rf.num, &gp) * &rf.den;
                    if rf.den.as_constant().is_none() {
                        num = &num - &(&alg.bracket(&rf.den, &gp) * &rf.num);
                    }
                    (g, num)
                })
                .filter(|(_, n)| !n.is_zero())
                .min_by_key(|(g, _)| *g);
            Ok(Report::from_witness(hit.map(|(g, n)| {
                let c = RatFun { num: n, den: &rf.den * &rf.den };
                format!("{{C, {}}} = ({}) / ({})", alg.var_name_of(g.0 as usize), alg.display(&c.num), alg.display(&c.den))
            })))
        }
        Backend::Modular => {
            let field = &opts.field;
            let free: Vec<Var> = candidate.free_vars().into_iter().filter(|v| alg.is_generator(*v)).collect();
            let hits: Vec<Option<(usize, Var, u64)>> = (0..opts.trials)
                .into_par_iter()
                .map(|t| {
                    sample_point(field, m, opts.seed, t as u64, |pt| {
                        let look = pt.lookup();
                        let (_, grad) = candidate.gradient_eval(field, &look, &free)?;
                        for &g in &gens {
                            let mut acc = 0u64;
                            for (x, dx) in free.iter().zip(&grad) {
                                let e = alg.entry(*x, g);
                                if *dx == 0 || e.is_zero() {
                                    continue;
                                }
                                acc = field.add(&acc, &field.mul(dx, &e.eval(field, &look)?));
                            }
                            if acc != 0 {
                                return Ok(Some((t, g, acc)));
                            }
                        }
                        Ok(None)
                    })
                })
                .collect::<Result<_>>()?;
            let hit = hits.into_iter().flatten().min_by_key(|h| (h.0, h.1));
            Ok(Report::from_witness(hit.map(|(t, g, v)| {
                format!("{{C, {}}} = {} at trial {t}", alg.var_name_of(g.0 as usize), show_mod(field, v))
            })))
        }
    }
}

/// Generic rank of the Poisson bivector, as the maximum over trials.
pub fn bivector_rank(alg: &PoissonAlgebra, opts: &Options) -> Result<usize> {
    let m = alg.num_generators();
    let field = &opts.field;
    let trials = opts.trials.max(1);
    let ranks: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|t| {
            sample_point(field, m, opts.seed, t as u64, |pt| {
                let look = pt.lookup();
                let mut mat = vec![vec![0u64; m]; m];
                for i in 0..m {
                    for j in i + 1..m {
                        let v = alg.entry(Var(i as u32), Var(j as u32)).eval(field, &look)?;
                        mat[i][j] = v;
                        mat[j][i] = field.neg(&v);
                    }
                }
                Ok(rank(field, &mat))
            })
        })
        .collect::<Result<_>>()?;
    Ok(ranks.into_iter().max().unwrap_or(0))
}

/// Linear constraints defining a pattern: `x = 0`, `x = 1`, or `x = y`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Pattern {
    pub zeros: Vec<Var>,
    pub ones: Vec<Var>,
    pub equal: Vec<(Var, Var)>,
}

impl Pattern {
    /// Upper unipotent shape on each named block.
    pub fn upper_unipotent(alg: &PoissonAlgebra, blocks: &[&str]) -> Self {
        let mut p = Pattern::default();
        for b in blocks {
            for i in 0..alg.n {
                p.ones.push(alg.var(b, i, i));
                p.zeros.extend((0..i).map(|j| alg.var(b, i, j)));
            }
        }
        p
    }

    /// Zeros in column `j` of `block` at rows `i >= below[j]` and `i < above[j]`;
    /// both profiles must be nondecreasing.
    pub fn staircase(alg: &PoissonAlgebra, block: &str, below: &[usize], above: &[usize]) -> Result<Self> {
        let n = alg.n;
        let monotone = |p: &[usize]| p.len() == n && p.windows(2).all(|w| w[0] <= w[1]) && p.iter().all(|&x| x <= n);
        if !monotone(below) || !monotone(above) {
            return Err(Error::InvalidSpec(format!("staircase profiles must be {n} nondecreasing values in 0..={n}")));
        }
        let mut p = Pattern::default();
        for j in 0..n {
            for i in 0..n {
                if i >= below[j] || i < above[j] {
                    p.zeros.push(alg.var(block, i, j));
                }
            }
        }
        Ok(p)
    }

    /// Identify every entry of block `x` with the same entry of block `y`.
    pub fn identify(alg: &PoissonAlgebra, x: &str, y: &str) -> Self {
        let n = alg.n;
        let equal = (0..n * n).map(|k| (alg.var(x, k / n, k % n), alg.var(y, k / n, k % n))).collect();
        Pattern { equal, ..Default::default() }
    }

    pub fn merge(mut self, o: Pattern) -> Self {
        self.zeros.extend(o.zeros);
        self.ones.extend(o.ones);
        self.equal.extend(o.equal);
        self
    }

    pub fn constraints(&self) -> Vec<Poly> {
        let mut out: Vec<Poly> = self.zeros.iter().map(|&v| Poly::var(v)).collect();
        out.extend(self.ones.iter().map(|&v| &Poly::var(v) - &Poly::one()));
        out.extend(self.equal.iter().map(|&(x, y)| &Poly::var(x) - &Poly::var(y)));
        out
    }

    /// Substitution onto the constraint surface.
    pub fn surface(&self, v: Var) -> Option<Poly> {
        if self.zeros.contains(&v) {
            return Some(Poly::zero());
        }
        if self.ones.contains(&v) {
            return Some(Poly::one());
        }
        self.equal.iter().find(|(x, _)| *x == v).map(|(_, y)| Poly::var(*y))
    }
}

/// Every `{constraint, g}` vanishes on the constraint surface.
pub fn pattern_reduction_check(alg: &PoissonAlgebra, pattern: &Pattern) -> Result<Report> {
    let gens = alg.generators();
    let cs = pattern.constraints();
    let surf = |v: Var| pattern.surface(v);
    let mut cases: Vec<(usize, Var)> = Vec::new();
    for ci in 0..cs.len() {
        for &g in &gens {
            cases.push((ci, g));
        }
    }
    let hits: Vec<Option<(usize, Var, Poly)>> = cases
        .par_iter()
        .map(|&(ci, g)| -> Result<_> {
            let b = alg.bracket(&cs[ci], &Poly::var(g)).substitute(&surf)?;
            Ok((!b.is_zero()).then_some((ci, g, b)))
        })
        .collect::<Result<_>>()?;
    let hit = hits.into_iter().flatten().next();
    Ok(Report::from_witness(hit.map(|(ci, g, b)| {
        format!(
            "{{{}, {}}} = {} on the surface",
            alg.display(&cs[ci]),
            alg.var_name_of(g.0 as usize),
            alg.display(&b)
        )
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::algebra::{det_poly, inverse_expr, to_expr, AlgebraSpec, QNamed, QSpec};
    use crate::ring::params::LAMBDA;
    use crate::tensor::{LegMatrix, QCase};

    fn build(s: AlgebraSpec) -> PoissonAlgebra {
        PoissonAlgebra::build(&s).unwrap()
    }

    fn flat(m: &LegMatrix<Expr>) -> Vec<Expr> {
        let n = m.n();
        (0..n * n).map(|k| m.get(k / n, k % n)).collect()
    }

    #[test]
    fn jacobi_examples() {
        assert!(jacobi_check(&build(AlgebraSpec::a(2)), &Options::symbolic()).unwrap().pass);
        let bad = build(AlgebraSpec::ab(2, QSpec::Named(QNamed::Permutation)));
        let r = jacobi_check(&bad, &Options::symbolic()).unwrap();
        assert!(!r.pass && r.witness.is_some());
        let r = jacobi_check(&bad, &Options::modular(3, 1)).unwrap();
        assert!(!r.pass);
        assert!(jacobi_check(&build(AlgebraSpec::ab(3, QCase::II)), &Options::modular(20, 7)).unwrap().pass);
    }

    #[test]
    fn jacobi_on_random_polynomials() {
        use rand::Rng;
        let alg = build(AlgebraSpec::ab(2, QCase::II));
        let mut rng = trial_rng(3, 0);
        let mut rand_poly = || {
            let mut p = Poly::zero();
            for _ in 0..3 {
                let a = Var(rng.gen_range(0..8));
                let b = Var(rng.gen_range(0..8));
                p.add_product(&Poly::var(a), &Poly::var(b), &Rational::from_int(rng.gen_range(-3..4)));
            }
            p
        };
        for _ in 0..3 {
            let (f, g, h) = (rand_poly(), rand_poly(), rand_poly());
            let j = &(&alg.bracket(&f, &alg.bracket(&g, &h)) + &alg.bracket(&g, &alg.bracket(&h, &f)))
                + &alg.bracket(&h, &alg.bracket(&f, &g));
            assert!(j.is_zero());
        }
    }

    #[test]
    fn map_examples() {
        let n = 2;
        let src = build(AlgebraSpec::ab(n, QCase::II));
        let tgt = build(AlgebraSpec::a(n));
        let (a, b) = (src.mat("A"), src.mat("B"));
        let bab = b.mul(&a).mul(&b.transpose());
        let images = flat(&to_expr(&bab));
        let r = poisson_map_check(&src, &images, &tgt, MapMode::Auto, &Options::symbolic()).unwrap();
        assert_eq!(r.sign, MapSign::Poisson);
        let r = poisson_map_check(&src, &images, &tgt, MapMode::Poisson, &Options::modular(5, 2)).unwrap();
        assert!(r.report.pass);

        let frak = to_expr(&b).mul(&inverse_expr(&a.transpose())).mul(&to_expr(&b.transpose()));
        let r = poisson_map_check(&src, &flat(&frak), &tgt, MapMode::Poisson, &Options::modular(5, 3)).unwrap();
        assert_eq!(r.sign, MapSign::Poisson, "{:?}", r.report);

        let id = flat(&to_expr(&tgt.mat("A")));
        let r = poisson_map_check(&tgt, &id, &tgt, MapMode::Poisson, &Options::symbolic()).unwrap();
        assert!(r.report.pass);

        let bb = build(AlgebraSpec::b(2));
        let bt = flat(&to_expr(&bb.mat("B").transpose()));
        let r = poisson_map_check(&bb, &bt, &bb, MapMode::Auto, &Options::symbolic()).unwrap();
        assert_eq!(r.sign, MapSign::Poisson);
        let binv = flat(&inverse_expr(&bb.mat("B")));
        let r = poisson_map_check(&bb, &binv, &bb, MapMode::Auto, &Options::modular(4, 1)).unwrap();
        assert_eq!(r.sign, MapSign::Anti);
        let r = poisson_map_check(&bb, &binv, &bb, MapMode::Poisson, &Options::symbolic()).unwrap();
        assert!(!r.report.pass && r.report.witness.is_some());
    }

    #[test]
    fn casimir_examples() {
        let alg = build(AlgebraSpec::ab(2, QCase::II));
        let a = alg.mat("A");
        let pencil = a.add(&a.transpose().scale(&Poly::var(LAMBDA)));
        let c = Expr::poly(det_poly(&pencil)).div(&Expr::poly(det_poly(&a)));
        assert!(casimir_check(&alg, &c, &Options::symbolic()).unwrap().pass);
        assert!(casimir_check(&alg, &c, &Options::modular(5, 1)).unwrap().pass);
        let aa = build(AlgebraSpec::a(2));
        let r = casimir_check(&aa, &Expr::sym(aa.var("A", 0, 1)), &Options::symbolic()).unwrap();
        assert!(!r.pass);
        assert!(r.witness.unwrap().contains("a11"));
        assert!(casimir_check(&aa, &Expr::int(1), &Options::modular(2, 1)).unwrap().pass);
    }

    #[test]
    fn rank_examples() {
        let o = Options::modular(3, 5);
        assert_eq!(bivector_rank(&build(AlgebraSpec::bc(2)), &o).unwrap(), 4);
        assert_eq!(bivector_rank(&build(AlgebraSpec::a(2)), &o).unwrap(), 2);
        let zero = PoissonAlgebra::build(&AlgebraSpec::ab(2, QCase::I)).unwrap();
        let r = bivector_rank(&zero, &o).unwrap();
        assert_eq!(r, 2 + 2);
    }

    #[test]
    fn pattern_examples() {
        let alg = build(AlgebraSpec::a(2));
        let p = Pattern { zeros: vec![alg.var("A", 0, 1)], ..Default::default() };
        assert!(!pattern_reduction_check(&alg, &p).unwrap().pass);
        let p = Pattern { zeros: vec![alg.var("A", 1, 0)], ones: vec![alg.var("A", 0, 0), alg.var("A", 1, 1)], ..Default::default() };
        assert!(pattern_reduction_check(&alg, &p).unwrap().pass);
        for n in 3..=4 {
            let alg = build(AlgebraSpec::a(n));
            let mut p = Pattern::default();
            for i in 0..n {
                p.ones.push(alg.var("A", i, i));
                for j in 0..i {
                    p.zeros.push(alg.var("A", i, j));
                }
            }
            assert!(pattern_reduction_check(&alg, &p).unwrap().pass);
        }
    }

    #[test]
    fn point_bracket_matches_symbolic() {
        let alg = build(AlgebraSpec::a(3));
        let field = PrimeField::default_field();
        let f = &Poly::var(Var(0)) * &Poly::var(Var(4));
        let g = &Poly::var(Var(2)) * &Poly::var(Var(7));
        let sym = alg.bracket(&f, &g);
        let mut rng = trial_rng(11, 0);
        for _ in 0..100 {
            let pt = Point::random(&field, 9, &mut rng);
            let v = bracket_at_point(&alg, &Expr::poly(f.clone()), &Expr::poly(g.clone()), &field, &pt).unwrap();
            assert_eq!(v, sym.eval(&field, &pt.lookup()).unwrap());
        }
        let pt = Point::random(&field, 9, &mut rng);
        let a11 = Expr::sym(Var(0));
        assert_eq!(bracket_at_point(&alg, &a11, &Expr::int(1).div(&a11), &field, &pt).unwrap(), 0);
    }
}
