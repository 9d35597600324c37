//! Constraints that keep `A` and `B A B^T` block upper triangular, their
//! Gram matrix, the Dirac bracket at surface points, the linear system that
//! expresses `A` through `B`, and the nondegeneracy probe.

use crate::error::{Error, Result};
use crate::poisson::algebra::{inverse_expr, to_expr, PoissonAlgebra};
use crate::poisson::checks::{bracket_eval, tensor_at, Options, Report};
use crate::ring::linalg::{adjugate_ring, det_ring, inverse, solve, Mat};
use crate::ring::{DualField, Expr, Field, Poly, PrimeField, Rational, Ring, Var};
use crate::sample::{small_nonzero, trial_rng};
use crate::tensor::{triangular_project, LegMatrix, QCase, Triangle};
use rand::Rng;
use serde::{Deserialize, Serialize};

const RESAMPLE: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    A,
    Babt,
    Both,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub name: String,
    pub expr: Expr,
}

#[derive(Clone, Debug)]
pub struct ConstraintSet {
    pub n: usize,
    pub blocks: Vec<usize>,
    pub constraints: Vec<Constraint>,
    /// Solved form of the `A` constraints, applied in order.
    pub surface: Vec<(Var, Expr)>,
}

fn block_of(blocks: &[usize]) -> Vec<usize> {
    blocks.iter().enumerate().flat_map(|(k, &s)| std::iter::repeat_n(k, s)).collect()
}

fn block_ranges(blocks: &[usize]) -> Vec<(usize, usize)> {
    let mut start = 0;
    blocks
        .iter()
        .map(|&s| {
            let r = (start, start + s);
            start += s;
            r
        })
        .collect()
}

fn push_block_constraints(out: &mut Vec<Constraint>, m: &LegMatrix<Expr>, blocks: &[usize], tag: &str) {
    let n = m.n();
    let owner = block_of(blocks);
    for k in 0..n {
        for l in 0..n {
            if owner[k] > owner[l] {
                out.push(Constraint { name: format!("{tag}_{}{}", k + 1, l + 1), expr: m.get(k, l) });
            }
        }
    }
    for (i, (s, e)) in block_ranges(blocks).into_iter().enumerate() {
        let d = det_ring(e - s, &|r, c| m.get(s + r, s + c));
        let name = if e - s == 1 { format!("{tag}_{}{}", s + 1, s + 1) } else { format!("{tag}_det{}", i + 1) };
        out.push(Constraint { name, expr: d.sub(&Expr::int(1)) });
    }
}

/// Constraints for the block partition `blocks` of `N` on an algebra with
/// blocks `A` and `B`. Unit blocks give the upper-triangular case.
pub fn but_constraints(alg: &PoissonAlgebra, blocks: &[usize], which: Which) -> Result<ConstraintSet> {
    let n = alg.n;
    if blocks.contains(&0) || blocks.iter().sum::<usize>() != n {
        return Err(Error::InvalidSpec(format!("block sizes {blocks:?} do not partition {n}")));
    }
    let a = alg.mat("A");
    let mut constraints = Vec::new();
    if which != Which::Babt {
        push_block_constraints(&mut constraints, &to_expr(&a), blocks, "C");
    }
    if which != Which::A {
        let b = alg.mat("B");
        let babt = b.mul(&a).mul(&b.transpose());
        push_block_constraints(&mut constraints, &to_expr(&babt), blocks, "C*");
    }
    let owner = block_of(blocks);
    let mut surface = Vec::new();
    for k in 0..n {
        for l in 0..n {
            if owner[k] > owner[l] {
                surface.push((alg.var("A", k, l), Expr::int(0)));
            }
        }
    }
    for (s, e) in block_ranges(blocks) {
        let last = e - 1;
        let ae = to_expr(&a);
        let entry = |r: usize, c: usize| {
            if r == last - s && c == last - s {
                Expr::int(0)
            } else {
                ae.get(s + r, s + c)
            }
        };
        // det is affine in the last diagonal entry: det = rest + cof * a_last.
        let rest = det_ring(e - s, &entry);
        let cof = det_ring(e - s - 1, &|r, c| ae.get(s + r, s + c));
        let v = alg.var("A", last, last);
        surface.push((v, Expr::int(1).sub(&rest).div(&cof)));
    }
    Ok(ConstraintSet { n, blocks: blocks.to_vec(), constraints, surface })
}

impl ConstraintSet {
    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn exprs(&self) -> Vec<Expr> {
        self.constraints.iter().map(|c| c.expr.clone()).collect()
    }

    /// Same surface, constraints replaced by `f(C_k)`.
    pub fn reparameterize(&self, f: impl Fn(&Expr) -> Expr) -> ConstraintSet {
        let mut out = self.clone();
        for c in &mut out.constraints {
            c.expr = f(&c.expr);
        }
        out
    }

    /// Overwrite the constrained `A` entries in `values` by their solved form.
    pub fn apply_surface<F: Field>(&self, field: &F, values: &mut [F::Elem]) -> Result<()> {
        for (v, e) in &self.surface {
            let x = {
                let look = |w: Var| values.get(w.0 as usize).cloned();
                e.eval(field, &look)?
            };
            values[v.0 as usize] = x;
        }
        Ok(())
    }

    /// Substitute the solved `A` entries into a polynomial. Only available
    /// when every solved form is polynomial (unit diagonal blocks).
    pub fn restrict(&self, p: &Poly) -> Result<Poly> {
        let rules: Vec<(Var, Poly)> = self
            .surface
            .iter()
            .map(|(v, e)| e.to_poly().map(|q| (*v, q)))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidSpec("surface rules are not polynomial".into()))?;
        p.substitute(&|w| rules.iter().find(|(v, _)| *v == w).map(|(_, q)| q.clone()))
    }
}

/// Raw Gram matrix `{C_k, C_l}` as polynomials.
pub fn constraint_gram(alg: &PoissonAlgebra, cs: &ConstraintSet) -> Result<Vec<Vec<Poly>>> {
    let ps: Vec<Poly> = cs
        .constraints
        .iter()
        .map(|c| c.expr.to_poly().ok_or_else(|| Error::InvalidSpec(format!("constraint {} is not polynomial", c.name))))
        .collect::<Result<_>>()?;
    Ok(ps.iter().map(|f| ps.iter().map(|g| alg.bracket(f, g)).collect()).collect())
}

/// Gram matrix restricted by the solved `A` constraints.
pub fn constraint_gram_restricted(alg: &PoissonAlgebra, cs: &ConstraintSet) -> Result<Vec<Vec<Poly>>> {
    constraint_gram(alg, cs)?.iter().map(|row| row.iter().map(|p| cs.restrict(p)).collect()).collect()
}

/// `[B]_{i,k}[B A^T A]_{j,l} + [B A A]_{i,l}[B]_{j,k}` for `{C_{k,l}, C*_{i,j}}`.
pub fn gram_formula(alg: &PoissonAlgebra, k: usize, l: usize, i: usize, j: usize) -> Poly {
    let a = alg.mat("A");
    let b = alg.mat("B");
    let bata = b.mul(&a.transpose()).mul(&a);
    let baa = b.mul(&a).mul(&a);
    &(&b.get(i, k) * &bata.get(j, l)) + &(&baa.get(i, l) * &b.get(j, k))
}

/// Values of all generators at a point of the full upper-triangular
/// surface: `B` random, `A` from the linear system, rows of `B` rescaled so
/// that `B A B^T` has unit diagonal.
pub fn surface_point_modular<R: Rng + ?Sized>(alg: &PoissonAlgebra, field: &PrimeField, rng: &mut R) -> Result<Vec<u64>> {
    let n = alg.n;
    for _ in 0..RESAMPLE {
        let mut b: Mat<u64> = (0..n).map(|_| (0..n).map(|_| field.random_nonzero(rng)).collect()).collect();
        let f = match solve_f_at(field, &b) {
            Ok(f) => f,
            Err(Error::SingularSystem) => continue,
            Err(e) => return Err(e),
        };
        let mut ok = true;
        for k in 0..n {
            let mut d = 0;
            for i in 0..n {
                for j in 0..n {
                    d = field.add(&d, &field.mul(&field.mul(&b[k][i], &f[i][j]), &b[k][j]));
                }
            }
            match field.sqrt(d).filter(|s| *s != 0) {
                Some(s) => {
                    let si = field.inv(&s).expect("nonzero");
                    for x in &mut b[k] {
                        *x = field.mul(x, &si);
                    }
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let mut values = vec![0u64; alg.num_generators()];
        for i in 0..n {
            for j in 0..n {
                values[alg.var("A", i, j).0 as usize] = f[i][j];
                values[alg.var("B", i, j).0 as usize] = b[i][j];
            }
        }
        return Ok(values);
    }
    Err(Error::Inconclusive(RESAMPLE))
}

/// Exact point of the `N = 2` surface from the rational parameterization
/// `A = [[1, (w²-1-u²)/u], [0, 1]]`, `B = [[1, u], [u, u²-w²]] / w`.
pub fn surface_point_rational_n2<R: Rng + ?Sized>(alg: &PoissonAlgebra, rng: &mut R) -> Result<Vec<Rational>> {
    if alg.n != 2 {
        return Err(Error::InvalidSpec("the rational parameterization is for N = 2".into()));
    }
    let u = Rational::from_int(small_nonzero(rng, 9));
    let w = Rational::from_int(small_nonzero(rng, 9));
    let one = Rational::one();
    let x = &(&(&(&w * &w) - &one) - &(&u * &u)) * &u.recip().expect("nonzero");
    let wi = w.recip().expect("nonzero");
    let a = [[one.clone(), x], [Rational::zero(), one.clone()]];
    let b = [[wi.clone(), &u * &wi], [&u * &wi, &(&(&u * &u) - &(&w * &w)) * &wi]];
    let mut values = vec![Rational::zero(); alg.num_generators()];
    for i in 0..2 {
        for j in 0..2 {
            values[alg.var("A", i, j).0 as usize] = a[i][j].clone();
            values[alg.var("B", i, j).0 as usize] = b[i][j].clone();
        }
    }
    Ok(values)
}

/// Everything needed for Dirac brackets at one point.
pub struct DiracPoint<F: Field> {
    field: F,
    values: Vec<F::Elem>,
    pi: Mat<F::Elem>,
    grads: Vec<Vec<F::Elem>>,
    gram: Mat<F::Elem>,
    gram_inv: Mat<F::Elem>,
}

impl<F: Field> DiracPoint<F> {
    pub fn new(alg: &PoissonAlgebra, cs: &ConstraintSet, field: &F, values: Vec<F::Elem>) -> Result<Self> {
        let gens = alg.generators();
        let look = |v: Var| values.get(v.0 as usize).cloned();
        let pi = tensor_at(alg, field, &look)?;
        let grads = cs
            .constraints
            .iter()
            .map(|c| c.expr.gradient_eval(field, &look, &gens).map(|(_, g)| g))
            .collect::<Result<Vec<_>>>()?;
        let gram: Mat<F::Elem> = grads.iter().map(|x| grads.iter().map(|y| pair(field, &pi, x, y)).collect()).collect();
        let gram_inv = inverse(field, &gram).map_err(|_| Error::SingularGram)?;
        Ok(DiracPoint { field: field.clone(), values, pi, grads, gram, gram_inv })
    }

    pub fn gram(&self) -> &Mat<F::Elem> {
        &self.gram
    }

    pub fn values(&self) -> &[F::Elem] {
        &self.values
    }

    fn grad(&self, e: &Expr) -> Result<Vec<F::Elem>> {
        let gens: Vec<Var> = (0..self.values.len() as u32).map(Var).collect();
        let look = |v: Var| self.values.get(v.0 as usize).cloned();
        Ok(e.gradient_eval(&self.field, &look, &gens)?.1)
    }

    pub fn bracket(&self, f: &Expr, g: &Expr) -> Result<F::Elem> {
        let (df, dg) = (self.grad(f)?, self.grad(g)?);
        Ok(self.dirac(&df, &dg))
    }

    /// Original bracket at the same point.
    pub fn plain(&self, f: &Expr, g: &Expr) -> Result<F::Elem> {
        Ok(pair(&self.field, &self.pi, &self.grad(f)?, &self.grad(g)?))
    }

    /// `{x_i, x_j}_D` over all generators.
    pub fn tensor(&self) -> Mat<F::Elem> {
        let fl = &self.field;
        let m = self.values.len();
        let unit = |i: usize| -> Vec<F::Elem> { (0..m).map(|k| if k == i { fl.one() } else { fl.zero() }).collect() };
        let xc: Vec<Vec<F::Elem>> =
            (0..m).map(|i| self.grads.iter().map(|c| pair(fl, &self.pi, &unit(i), c)).collect()).collect();
        let mut out = self.pi.clone();
        for i in 0..m {
            for j in 0..m {
                let mut corr = fl.zero();
                for (k, x) in xc[i].iter().enumerate() {
                    if fl.is_zero(x) {
                        continue;
                    }
                    for (l, y) in xc[j].iter().enumerate() {
                        // {C_l, x_j} = -{x_j, C_l}
                        corr = fl.sub(&corr, &fl.mul(&fl.mul(x, &self.gram_inv[k][l]), y));
                    }
                }
                out[i][j] = fl.sub(&out[i][j], &corr);
            }
        }
        out
    }

    fn dirac(&self, df: &[F::Elem], dg: &[F::Elem]) -> F::Elem {
        let fl = &self.field;
        let fc: Vec<F::Elem> = self.grads.iter().map(|c| pair(fl, &self.pi, df, c)).collect();
        let cg: Vec<F::Elem> = self.grads.iter().map(|c| pair(fl, &self.pi, c, dg)).collect();
        let mut corr = fl.zero();
        for (k, x) in fc.iter().enumerate() {
            if fl.is_zero(x) {
                continue;
            }
            for (l, y) in cg.iter().enumerate() {
                corr = fl.add(&corr, &fl.mul(&fl.mul(x, &self.gram_inv[k][l]), y));
            }
        }
        fl.sub(&pair(fl, &self.pi, df, dg), &corr)
    }
}

fn pair<F: Field>(field: &F, pi: &Mat<F::Elem>, x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
    let mut acc = field.zero();
    for (i, xi) in x.iter().enumerate() {
        if field.is_zero(xi) {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if field.is_zero(yj) || field.is_zero(&pi[i][j]) {
                continue;
            }
            acc = field.add(&acc, &field.mul(&field.mul(xi, &pi[i][j]), yj));
        }
    }
    acc
}

/// `{f, g}_D = {f, g} - {f, C_k} D^{-1}_{kl} {C_l, g}` at a point.
pub fn dirac_bracket<F: Field>(
    alg: &PoissonAlgebra,
    cs: &ConstraintSet,
    f: &Expr,
    g: &Expr,
    field: &F,
    values: Vec<F::Elem>,
) -> Result<F::Elem> {
    DiracPoint::new(alg, cs, field, values)?.bracket(f, g)
}

/// First generator triple whose cyclic Jacobi sum for `{·,·}_D` is nonzero
/// at the point, using dual-number derivatives of the Dirac tensor.
pub fn dirac_jacobi_at<F: Field>(
    alg: &PoissonAlgebra,
    cs: &ConstraintSet,
    field: &F,
    values: &[F::Elem],
) -> Result<Option<(usize, usize, usize)>> {
    let m = values.len();
    let pd = DiracPoint::new(alg, cs, field, values.to_vec())?.tensor();
    let df = DualField(field.clone());
    // deriv[w][x][y] = d/dx_w {x, y}_D
    let mut deriv = Vec::with_capacity(m);
    for w in 0..m {
        let vals: Vec<_> =
            values.iter().enumerate().map(|(k, x)| if k == w { df.variable(x.clone()) } else { df.constant(x.clone()) }).collect();
        let t = DiracPoint::new(alg, cs, &df, vals)?.tensor();
        deriv.push(t.into_iter().map(|row| row.into_iter().map(|d| d.deriv).collect::<Vec<_>>()).collect::<Vec<_>>());
    }
    let term = |x: usize, y: usize, z: usize| {
        let mut acc = field.zero();
        for (w, d) in deriv.iter().enumerate() {
            if !field.is_zero(&d[x][y]) && !field.is_zero(&pd[w][z]) {
                acc = field.add(&acc, &field.mul(&d[x][y], &pd[w][z]));
            }
        }
        acc
    };
    for x in 0..m {
        for y in x + 1..m {
            for z in y + 1..m {
                let s = field.add(&field.add(&term(x, y, z), &term(y, z, x)), &term(z, x, y));
                if !field.is_zero(&s) {
                    return Ok(Some((x, y, z)));
                }
            }
        }
    }
    Ok(None)
}

/// Unknowns `a_{ij}` (`i < j`) and equations `(k, l)` (`k > l`) of the
/// system making `B A B^T` upper triangular for unit upper-triangular `A`.
pub fn f_system<T: Ring>(b: &LegMatrix<T>) -> (Vec<(usize, usize)>, Vec<Vec<T>>, Vec<T>) {
    let n = b.n();
    let unknowns: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let eqs: Vec<(usize, usize)> = (0..n).flat_map(|k| (0..k).map(move |l| (k, l))).collect();
    let mut m = Vec::with_capacity(eqs.len());
    let mut rhs = Vec::with_capacity(eqs.len());
    for &(k, l) in &eqs {
        m.push(unknowns.iter().map(|&(i, j)| b.get(k, i).mul(&b.get(l, j))).collect());
        let mut s = T::zero();
        for q in 0..n {
            s.add_assign(&b.get(k, q).mul(&b.get(l, q)));
        }
        rhs.push(s.neg());
    }
    (unknowns, m, rhs)
}

pub fn f_system_det(b: &LegMatrix<Poly>) -> Poly {
    let (_, m, _) = f_system(b);
    det_ring(m.len(), &|r, c| m[r][c].clone())
}

fn unit_upper_from<T: Clone>(n: usize, unknowns: &[(usize, usize)], sol: &[T], zero: T, one: T) -> Vec<Vec<T>> {
    let mut f = vec![vec![zero; n]; n];
    for (i, row) in f.iter_mut().enumerate() {
        row[i] = one.clone();
    }
    for (&(i, j), x) in unknowns.iter().zip(sol) {
        f[i][j] = x.clone();
    }
    f
}

/// Unit upper-triangular `F[B]` with `B F B^T` upper triangular, by Cramer's rule.
pub fn solve_f(b: &LegMatrix<Poly>) -> Result<LegMatrix<Expr>> {
    let n = b.n();
    let (unknowns, m, rhs) = f_system(b);
    let k = m.len();
    let d = det_ring(k, &|r, c| m[r][c].clone());
    if d.is_zero() {
        return Err(Error::SingularSystem);
    }
    let adj = adjugate_ring(k, &|r, c| m[r][c].clone());
    let de = Expr::poly(d);
    let sol: Vec<Expr> = (0..k)
        .map(|i| {
            let mut num = Poly::zero();
            for (j, r) in rhs.iter().enumerate() {
                num.add_assign(&(&adj[i][j] * r));
            }
            Expr::poly(num).div(&de)
        })
        .collect();
    let f = unit_upper_from(n, &unknowns, &sol, Expr::int(0), Expr::int(1));
    Ok(LegMatrix::from_fn(n, 1, |r, c| f[r][c].clone()))
}

/// [`solve_f`] at a numeric `B`.
pub fn solve_f_at<F: Field>(field: &F, b: &Mat<F::Elem>) -> Result<Mat<F::Elem>> {
    let n = b.len();
    let bm = NumMat { field, m: b };
    let (unknowns, eqs, rhs) = f_system_num(&bm, n);
    let sol = if eqs.is_empty() {
        Vec::new()
    } else {
        solve(field, &eqs, &rhs).map_err(|_| Error::SingularSystem)?
    };
    Ok(unit_upper_from(n, &unknowns, &sol, field.zero(), field.one()))
}

struct NumMat<'a, F: Field> {
    field: &'a F,
    m: &'a Mat<F::Elem>,
}

fn f_system_num<F: Field>(b: &NumMat<F>, n: usize) -> (Vec<(usize, usize)>, Mat<F::Elem>, Vec<F::Elem>) {
    let f = b.field;
    let unknowns: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut m = Vec::new();
    let mut rhs = Vec::new();
    for k in 0..n {
        for l in 0..k {
            m.push(unknowns.iter().map(|&(i, j)| f.mul(&b.m[k][i], &b.m[l][j])).collect());
            let mut s = f.zero();
            for q in 0..n {
                s = f.add(&s, &f.mul(&b.m[k][q], &b.m[l][q]));
            }
            rhs.push(f.neg(&s));
        }
    }
    (unknowns, m, rhs)
}

/// Compare brackets of the entries of `F[B]` with `±{a, a}` at `A = F[B]`:
/// the induced Lie–Poisson bracket with a minus sign in case (i), the Dirac
/// bracket with a plus sign in cases (ii) and (iii).
pub fn f_bracket_sign_check(case: QCase, n: usize, opts: &Options) -> Result<Report> {
    use crate::poisson::AlgebraSpec;
    let alg = PoissonAlgebra::build(&AlgebraSpec::ab(n, case))?;
    let f = solve_f(&alg.mat("B"))?;
    let cs = but_constraints(&alg, &vec![1; n], Which::Both)?;
    let field = opts.field;
    let upper: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let sign = if case == QCase::I { -1 } else { 1 };
    let trials = opts.trials.max(1);
    for t in 0..trials {
        let mut rng = trial_rng(opts.seed, t as u64);
        let values = surface_point_modular(&alg, &field, &mut rng)?;
        let dp = if case == QCase::I { None } else { Some(DiracPoint::new(&alg, &cs, &field, values.clone())?) };
        let look = |v: Var| values.get(v.0 as usize).copied();
        for &(i, j) in &upper {
            for &(s, p) in &upper {
                let (fij, fsp) = (f.get(i, j), f.get(s, p));
                let lhs = match &dp {
                    Some(d) => d.bracket(&fij, &fsp)?,
                    None => bracket_eval(&alg, &fij, &fsp, &field, &look)?,
                };
                let aa = alg.entry(alg.var("A", i, j), alg.var("A", s, p)).eval(&field, &look)?;
                let rhs = if sign < 0 { field.neg(&aa) } else { aa };
                if lhs != rhs {
                    return Ok(Report::fail(format!(
                        "trial {t}: {{F_{}{}, F_{}{}}} differs from {}{{a, a}}",
                        i + 1,
                        j + 1,
                        s + 1,
                        p + 1,
                        if sign < 0 { "-" } else { "+" }
                    )));
                }
            }
        }
    }
    let sign = if sign < 0 { "-" } else { "+" };
    Ok(Report::pass().with_detail(format!("sign {sign}, {} pairs x {trials} points", upper.len() * upper.len())))
}

/// Determinant of the linear map `ω₊ ↦ P₊[B' g B'^{-1}]` on strictly upper
/// triangular `ω₊ = -ω₋^T`, with
/// `g = P₋,½(A' ω₋) - P₊,½(A'^T ω₋^T)`.
pub fn nondegeneracy_probe(a: &LegMatrix<Poly>, bp: &LegMatrix<Poly>) -> Result<Expr> {
    let n = a.n();
    let ae = to_expr(a);
    let at = ae.transpose();
    let be = to_expr(bp);
    let bi = inverse_expr(bp);
    let half = Expr::constant(Rational::new(1, 2));
    let upper: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let cols: Vec<Vec<Expr>> = upper
        .iter()
        .map(|&(i, j)| {
            let omega_minus = LegMatrix::<Expr>::unit(n, j, i).neg();
            let g = triangular_project(&ae.mul(&omega_minus), Triangle::Lower, &half)
                .sub(&triangular_project(&at.mul(&omega_minus.transpose()), Triangle::Upper, &half));
            let h = be.mul(&g).mul(&bi);
            upper.iter().map(|&(r, c)| h.get(r, c)).collect()
        })
        .collect();
    Ok(det_ring(upper.len(), &|r, c| cols[c][r].clone()))
}

/// Properties checked by [`dirac_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiracProperty {
    /// `{C, C} = {C*, C*} = 0` and `{C, C*}` equals twice the closed form.
    Gram,
    /// Every constraint has zero Dirac bracket with every generator.
    Central,
    /// The Dirac tensor satisfies Jacobi.
    Jacobi,
    /// The Gram matrix is singular.
    SingularGram,
}

impl DiracProperty {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "gram" => DiracProperty::Gram,
            "central" => DiracProperty::Central,
            "jacobi" => DiracProperty::Jacobi,
            "singular-gram" => DiracProperty::SingularGram,
            _ => return None,
        })
    }
}

fn property_at<F: Field>(
    prop: DiracProperty,
    alg: &PoissonAlgebra,
    cs: &ConstraintSet,
    field: &F,
    values: Vec<F::Elem>,
) -> Result<Option<String>> {
    let n = alg.n;
    match prop {
        DiracProperty::Gram => {
            let look = |v: Var| values.get(v.0 as usize).cloned();
            let gram = constraint_gram(alg, cs)?;
            let h = cs.len() / 2;
            let idx: Vec<(usize, usize)> =
                (0..n).flat_map(|k| (0..k).map(move |l| (k, l))).chain((0..n).map(|k| (k, k))).collect();
            let two = field.from_i64(2);
            for p in 0..cs.len() {
                for q in 0..cs.len() {
                    let got = gram[p][q].eval(field, &look)?;
                    let want = if p < h && q >= h {
                        let ((k, l), (i, j)) = (idx[p], idx[q - h]);
                        field.mul(&two, &gram_formula(alg, k, l, i, j).eval(field, &look)?)
                    } else if p >= h && q < h {
                        let ((k, l), (i, j)) = (idx[q], idx[p - h]);
                        field.neg(&field.mul(&two, &gram_formula(alg, k, l, i, j).eval(field, &look)?))
                    } else {
                        field.zero()
                    };
                    if got != want {
                        let (cp, cq) = (&cs.constraints[p].name, &cs.constraints[q].name);
                        return Ok(Some(format!("{{{cp}, {cq}}} = {got:?}, expected {want:?}")));
                    }
                }
            }
            Ok(None)
        }
        DiracProperty::Central => {
            let d = DiracPoint::new(alg, cs, field, values)?;
            for c in &cs.constraints {
                for g in alg.generators() {
                    let b = d.bracket(&c.expr, &Expr::sym(g))?;
                    if !field.is_zero(&b) {
                        return Ok(Some(format!("{{{}, {}}}_D = {b:?}", c.name, alg.var_name_of(g.0 as usize))));
                    }
                }
            }
            Ok(None)
        }
        DiracProperty::Jacobi => {
            let d = DiracPoint::new(alg, cs, field, values)?;
            Ok(dirac_jacobi_at(alg, cs, field, d.values())?.map(|(i, j, k)| {
                format!(
                    "Jacobi residual at ({}, {}, {})",
                    alg.var_name_of(i),
                    alg.var_name_of(j),
                    alg.var_name_of(k)
                )
            }))
        }
        DiracProperty::SingularGram => match DiracPoint::new(alg, cs, field, values) {
            Err(Error::SingularGram) => Ok(None),
            Err(e) => Err(e),
            Ok(_) => Ok(Some("Gram matrix is invertible".into())),
        },
    }
}

/// Check a property of the upper-triangular constraints on `AB(case)` at
/// surface points: exact rational points when `n = 2` and the backend is
/// symbolic, points over the prime field otherwise.
pub fn dirac_check(prop: DiracProperty, n: usize, case: QCase, opts: &Options) -> Result<Report> {
    use crate::poisson::{AlgebraSpec, Backend};
    let alg = PoissonAlgebra::build(&AlgebraSpec::ab(n, case))?;
    let cs = but_constraints(&alg, &vec![1; n], Which::Both)?;
    let trials = opts.trials.max(1);
    let exact = opts.backend == Backend::Symbolic && n == 2;
    for t in 0..trials {
        let mut rng = trial_rng(opts.seed, t as u64);
        let hit = if exact {
            let v = surface_point_rational_n2(&alg, &mut rng)?;
            property_at(prop, &alg, &cs, &crate::ring::RationalField, v)?
        } else {
            let v = surface_point_modular(&alg, &opts.field, &mut rng)?;
            property_at(prop, &alg, &cs, &opts.field, v)?
        };
        if let Some(w) = hit {
            return Ok(Report::fail(format!("point {t}: {w}")));
        }
    }
    let kind = if exact { "rational" } else { "modular" };
    Ok(Report::pass().with_detail(format!("{trials} {kind} surface points")))
}

/// `det 𝔉 = ± Π_d M⁺_d M⁻_d` for the generic `B`, symbolically.
pub fn f_system_det_check(n: usize) -> Result<Report> {
    use crate::casimir::{minor, Corner};
    use crate::poisson::AlgebraSpec;
    let alg = PoissonAlgebra::build(&AlgebraSpec::b(n))?;
    let b = alg.mat("B");
    let be = to_expr(&b);
    let mut prod = Poly::one();
    for d in 1..n {
        let plus = minor(&be, Corner::UpperRight, d).to_poly().ok_or(Error::InvalidSpec("minor is not polynomial".into()))?;
        let minus = minor(&be, Corner::BottomLeft, d).to_poly().ok_or(Error::InvalidSpec("minor is not polynomial".into()))?;
        prod = &(&prod * &plus) * &minus;
    }
    let det = f_system_det(&b);
    Ok(if det == prod {
        Report::pass().with_detail("sign +")
    } else if det == -&prod {
        Report::pass().with_detail("sign -")
    } else {
        Report::fail(format!("det = {}", alg.display(&det)))
    })
}

/// The nondegeneracy determinant at `B' = E` on the upper unipotent `A'`.
pub fn nondegeneracy_check(n: usize) -> Result<Report> {
    use crate::poisson::AlgebraSpec;
    let alg = PoissonAlgebra::build(&AlgebraSpec::a(n))?;
    let a = LegMatrix::from_fn(n, 1, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => Poly::var(alg.var("A", i, j)),
        std::cmp::Ordering::Equal => Poly::one(),
        _ => Poly::zero(),
    });
    let d = nondegeneracy_probe(&a, &LegMatrix::identity(n, 1))?.to_ratfun()?;
    Ok(if d.equals(&crate::ring::RatFun::one()) {
        Report::pass()
    } else {
        Report::fail(format!("determinant {} / {}", alg.display(&d.num), alg.display(&d.den)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::casimir::{minor, Corner};
    use crate::poisson::AlgebraSpec;
    use crate::ring::{RatFun, RationalField};

    fn ab(n: usize, case: QCase) -> PoissonAlgebra {
        PoissonAlgebra::build(&AlgebraSpec::ab(n, case)).unwrap()
    }

    fn names(cs: &ConstraintSet) -> Vec<String> {
        cs.constraints.iter().map(|c| c.name.clone()).collect()
    }

    #[test]
    fn dirac_properties_by_case() {
        let exact = Options::symbolic();
        let modular = Options::modular(4, 3);
        for prop in [DiracProperty::Gram, DiracProperty::Central, DiracProperty::Jacobi] {
            assert!(dirac_check(prop, 2, QCase::II, &exact).unwrap().pass, "{prop:?}");
            assert!(dirac_check(prop, 3, QCase::II, &modular).unwrap().pass, "{prop:?}");
        }
        assert!(dirac_check(DiracProperty::SingularGram, 2, QCase::I, &exact).unwrap().pass);
        assert!(!dirac_check(DiracProperty::SingularGram, 2, QCase::II, &exact).unwrap().pass);
        assert!(!dirac_check(DiracProperty::Gram, 3, QCase::III, &modular).unwrap().pass);
    }

    #[test]
    fn dirac_jacobi_at_twenty_points() {
        let r = dirac_check(DiracProperty::Jacobi, 3, QCase::II, &Options::modular(20, 2024)).unwrap();
        assert!(r.pass, "{:?}", r.witness);
    }

    #[test]
    fn determinant_and_nondegeneracy_reports() {
        for n in [2, 3] {
            assert!(f_system_det_check(n).unwrap().pass);
            assert!(nondegeneracy_check(n).unwrap().pass);
        }
    }

    #[test]
    fn constraint_sets() {
        let alg = ab(2, QCase::II);
        let cs = but_constraints(&alg, &[1, 1], Which::A).unwrap();
        assert_eq!(names(&cs), ["C_21", "C_11", "C_22"]);
        let a = |i, j| Poly::var(alg.var("A", i, j));
        assert_eq!(cs.constraints[0].expr.to_poly().unwrap(), a(1, 0));
        assert_eq!(cs.constraints[1].expr.to_poly().unwrap(), &a(0, 0) - &Poly::one());

        let both = but_constraints(&alg, &[1, 1], Which::Both).unwrap();
        assert_eq!(names(&both)[3..], ["C*_21", "C*_11", "C*_22"]);
        let b = alg.mat("B");
        let babt = b.mul(&alg.mat("A")).mul(&b.transpose());
        assert_eq!(both.constraints[3].expr.to_poly().unwrap(), babt.get(1, 0));

        let alg4 = ab(4, QCase::II);
        let cs4 = but_constraints(&alg4, &[2, 2], Which::Both).unwrap();
        assert_eq!(cs4.len(), 2 * (4 + 2));
        assert!(but_constraints(&alg4, &[2, 1], Which::A).is_err());
    }

    #[test]
    fn surface_rules_are_idempotent() {
        let alg = ab(4, QCase::II);
        let cs = but_constraints(&alg, &[1, 2, 1], Which::A).unwrap();
        let field = PrimeField::default_field();
        let mut rng = trial_rng(2, 0);
        let mut v: Vec<u64> = (0..alg.num_generators()).map(|_| field.random_nonzero(&mut rng)).collect();
        cs.apply_surface(&field, &mut v).unwrap();
        let once = v.clone();
        cs.apply_surface(&field, &mut v).unwrap();
        assert_eq!(once, v);
        let look = |x: Var| v.get(x.0 as usize).copied();
        for c in &cs.constraints {
            assert_eq!(c.expr.eval(&field, &look).unwrap(), 0, "{}", c.name);
        }
    }

    #[test]
    fn gram_block_matches_closed_form_up_to_normalisation() {
        let alg = ab(2, QCase::II);
        let cs = but_constraints(&alg, &[1, 1], Which::Both).unwrap();
        let g = constraint_gram_restricted(&alg, &cs).unwrap();
        let v = |b: &str, i, j| Poly::var(alg.var(b, i, j));
        let want = &(&(&v("B", 1, 1) * &v("B", 0, 0)) + &(&(&v("B", 1, 1) * &v("B", 0, 1)) * &v("A", 0, 1)))
            + &(&v("B", 1, 0) * &v("B", 0, 1));
        assert_eq!(g[0][3], want.scale(&2.into()));
        assert_eq!(cs.restrict(&gram_formula(&alg, 1, 0, 1, 0)).unwrap(), want);
    }

    fn surface_gram_check(n: usize, case: QCase) -> (bool, bool, Vec<Option<u64>>) {
        let alg = ab(n, case);
        let cs = but_constraints(&alg, &vec![1; n], Which::Both).unwrap();
        let field = PrimeField::default_field();
        let v = surface_point_modular(&alg, &field, &mut trial_rng(3, 0)).unwrap();
        let look = |x: Var| v.get(x.0 as usize).copied();
        let gram = constraint_gram(&alg, &cs).unwrap();
        let at = |p: &Poly| p.eval(&field, &look).unwrap();
        let h = cs.len() / 2;
        let idx: Vec<(usize, usize)> = (0..n).flat_map(|k| (0..k).map(move |l| (k, l))).chain((0..n).map(|k| (k, k))).collect();
        let cc = (0..h).all(|p| (0..h).all(|q| at(&gram[p][q]) == 0));
        let ss = (0..h).all(|p| (0..h).all(|q| at(&gram[h + p][h + q]) == 0));
        let mut ratios = Vec::new();
        for p in 0..h {
            for q in 0..h {
                let ((k, l), (i, j)) = (idx[p], idx[q]);
                let f = at(&gram_formula(&alg, k, l, i, j));
                ratios.push(field.div(&at(&gram[p][h + q]), &f).ok());
            }
        }
        ratios.sort();
        ratios.dedup();
        (cc, ss, ratios)
    }

    #[test]
    fn gram_on_full_surface() {
        for n in 2..=3 {
            let (cc, ss, r) = surface_gram_check(n, QCase::II);
            assert!(cc && ss);
            assert_eq!(r, vec![Some(2)]);
            let (cc, ss, _) = surface_gram_check(n, QCase::I);
            assert!(cc && ss);
        }
    }

    #[test]
    fn case_one_gram_is_singular() {
        for n in 2..=3 {
            let alg = ab(n, QCase::I);
            let cs = but_constraints(&alg, &vec![1; n], Which::Both).unwrap();
            let field = PrimeField::default_field();
            let v = surface_point_modular(&alg, &field, &mut trial_rng(4, 0)).unwrap();
            assert!(matches!(DiracPoint::new(&alg, &cs, &field, v), Err(Error::SingularGram)));
        }
    }

    #[test]
    fn constraints_are_central_exactly_at_n2() {
        let alg = ab(2, QCase::II);
        let cs = but_constraints(&alg, &[1, 1], Which::Both).unwrap();
        for t in 0..5 {
            let v = surface_point_rational_n2(&alg, &mut trial_rng(9, t)).unwrap();
            let d = DiracPoint::new(&alg, &cs, &RationalField, v).unwrap();
            for c in &cs.constraints {
                for g in alg.generators() {
                    assert!(d.bracket(&c.expr, &Expr::sym(g)).unwrap().is_zero());
                }
            }
            assert!(dirac_jacobi_at(&alg, &cs, &RationalField, d.values()).unwrap().is_none());
        }
    }

    #[test]
    fn dirac_point_properties_at_n3() {
        let field = PrimeField::default_field();
        for case in [QCase::II, QCase::III] {
            let alg = ab(3, case);
            let cs = but_constraints(&alg, &[1, 1, 1], Which::Both).unwrap();
            let cs2 = cs.reparameterize(|c| c.mul(&Expr::int(2)).add(&c.mul(c)));
            let v = surface_point_modular(&alg, &field, &mut trial_rng(5, 0)).unwrap();
            let d = DiracPoint::new(&alg, &cs, &field, v.clone()).unwrap();
            let d2 = DiracPoint::new(&alg, &cs2, &field, v).unwrap();
            for c in &cs.constraints {
                for g in alg.generators() {
                    assert_eq!(d.bracket(&c.expr, &Expr::sym(g)).unwrap(), 0);
                }
            }
            let f = Expr::sym(alg.var("A", 0, 0)).mul(&Expr::sym(alg.var("B", 0, 1)));
            let g = Expr::sym(alg.var("B", 1, 0));
            assert_eq!(d.bracket(&f, &g).unwrap(), d2.bracket(&f, &g).unwrap());
            let upper = [(0, 1), (0, 2), (1, 2)];
            for &(i, j) in &upper {
                for &(s, p) in &upper {
                    let (x, y) = (Expr::sym(alg.var("A", i, j)), Expr::sym(alg.var("A", s, p)));
                    assert_eq!(d.bracket(&x, &y).unwrap(), d.plain(&x, &y).unwrap());
                }
            }
        }
    }

    #[test]
    fn trivial_constraints_leave_bracket_unchanged() {
        let alg = PoissonAlgebra::build(&AlgebraSpec::bc(2)).unwrap();
        let field = PrimeField::default_field();
        let v: Vec<u64> = (0..alg.num_generators()).map(|k| 3 + k as u64).collect();
        let cs = ConstraintSet { n: 2, blocks: vec![2], constraints: vec![], surface: vec![] };
        let d = DiracPoint::new(&alg, &cs, &field, v).unwrap();
        let (x, y) = (Expr::sym(alg.var("B", 0, 0)), Expr::sym(alg.var("B", 0, 1)));
        assert_eq!(d.bracket(&x, &y).unwrap(), d.plain(&x, &y).unwrap());
    }

    #[test]
    fn solve_f_examples() {
        let alg = PoissonAlgebra::build(&AlgebraSpec::b(2)).unwrap();
        let b = alg.mat("B");
        let v = |i, j| Poly::var(alg.var("B", i, j));
        let f = solve_f(&b).unwrap();
        let num = -(&(&v(1, 0) * &v(0, 0)) + &(&v(1, 1) * &v(0, 1)));
        let want = RatFun::new(num, &v(1, 0) * &v(0, 1)).unwrap();
        assert!(f.get(0, 1).to_ratfun().unwrap().equals(&want));
        assert_eq!(f_system_det(&b), &v(0, 1) * &v(1, 0));
        let mut bz = b.clone();
        bz.set(0, 1, Poly::zero());
        assert!(matches!(solve_f(&bz), Err(Error::SingularSystem)));
    }

    #[test]
    fn f_system_det_is_product_of_corner_minors() {
        for n in 2..=4 {
            let alg = PoissonAlgebra::build(&AlgebraSpec::b(n)).unwrap();
            let b = alg.mat("B");
            let be = to_expr(&b);
            let mut prod = Poly::one();
            for d in 1..n {
                let plus = minor(&be, Corner::UpperRight, d).to_poly().unwrap();
                let minus = minor(&be, Corner::BottomLeft, d).to_poly().unwrap();
                prod = &(&prod * &plus) * &minus;
            }
            let det = f_system_det(&b);
            assert!(det == prod || det == -&prod, "n={n}");
        }
    }

    #[test]
    fn bfbt_is_upper_triangular() {
        for n in 2..=4 {
            let alg = PoissonAlgebra::build(&AlgebraSpec::b(n)).unwrap();
            let b = alg.mat("B");
            let f = solve_f(&b).unwrap();
            let be = to_expr(&b);
            let m = be.mul(&f).mul(&be.transpose());
            for k in 0..n {
                for l in 0..k {
                    assert!(m.get(k, l).to_ratfun().unwrap().is_zero(), "n={n} ({k},{l})");
                }
            }
        }
    }

    #[test]
    fn induced_f_brackets_have_case_signs() {
        for case in [QCase::I, QCase::II, QCase::III] {
            for n in 2..=3 {
                let r = f_bracket_sign_check(case, n, &Options::modular(4, 1)).unwrap();
                assert!(r.pass, "{case:?} n={n}: {:?}", r.witness);
            }
        }
    }

    #[test]
    fn nondegeneracy_at_identity_is_one() {
        for n in 2..=3 {
            let alg = PoissonAlgebra::build(&AlgebraSpec::a(n)).unwrap();
            let a = LegMatrix::from_fn(n, 1, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Less => Poly::var(alg.var("A", i, j)),
                std::cmp::Ordering::Equal => Poly::one(),
                _ => Poly::zero(),
            });
            let d = nondegeneracy_probe(&a, &LegMatrix::identity(n, 1)).unwrap();
            assert!(d.to_ratfun().unwrap().equals(&RatFun::one()), "n={n}");
        }
        let alg = PoissonAlgebra::build(&AlgebraSpec::a(2)).unwrap();
        let a = LegMatrix::from_fn(2, 1, |i, j| if i == j { Poly::one() } else if i < j { Poly::var(alg.var("A", 0, 1)) } else { Poly::zero() });
        let bp = LegMatrix::from_fn(2, 1, |i, j| Poly::int(if i <= j { 1 } else { -2 }));
        let d = nondegeneracy_probe(&a, &bp).unwrap();
        assert!(!d.to_ratfun().unwrap().is_zero());
    }
}
