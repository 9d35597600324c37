//! Check kinds available to scenarios, their parameters and how they run.

use super::scenario::{parse_algebra, Expect, Fields, Scenario};
use crate::casimir::{casimir_family_check, exponent_check};
use crate::dirac::{dirac_check, f_bracket_sign_check, f_system_det_check, nondegeneracy_check, DiracProperty};
use crate::error::{Error, Result};
use crate::poisson::catalog::{f_tilde_target, map_case, s_extended, MAP_NAMES};
use crate::poisson::checks::{bivector_rank, jacobi_check, pattern_reduction_check, poisson_map_check};
use crate::poisson::components::{self as comp, compare_block, Agreement};
use crate::poisson::groupoid::lagrangian_check;
use crate::poisson::{AlgebraSpec, Backend, MapMode, MapSign, Options, Pattern, PoissonAlgebra, Report};
use crate::quantum::identities::{check_identity, entry, Expected, CATALOG};
use crate::quantum::nc::{exchange_rules_with, quantum_automorphism_check, RConvention, T1Choice};
use crate::quantum::semiclassical::{describe, semiclassical_expand, Identification};
use crate::ring::{PrimeField, Rational};
use crate::tensor::QCase;

pub struct CheckKind {
    pub id: &'static str,
    pub params: &'static str,
    pub summary: &'static str,
}

/// Registered check kinds, sorted by id.
pub const CHECK_KINDS: &[CheckKind] = &[
    CheckKind { id: "casimir-family", params: "algebra", summary: "every catalogued central element is central" },
    CheckKind { id: "dirac", params: "property n q", summary: "Dirac reduction on block-upper-triangular constraints" },
    CheckKind { id: "exchange-confluence", params: "n convention", summary: "degree-3 overlaps of the exchange rules resolve" },
    CheckKind { id: "exponents", params: "n", summary: "log-scaling exponents of minors against the block matrices" },
    CheckKind { id: "f-bracket-sign", params: "n q", summary: "induced bracket of F[B] against the A table with sign" },
    CheckKind { id: "f-system-det", params: "n", summary: "determinant of the F[B] system factors into corner minors" },
    CheckKind { id: "formula-equivalence", params: "form n factor", summary: "component formula against the tensor table" },
    CheckKind { id: "groupoid-lagrangian", params: "n", summary: "constraint brackets of the multiplication graph vanish" },
    CheckKind { id: "identity", params: "entry n", summary: "R-matrix identity from the catalog" },
    CheckKind { id: "jacobi", params: "algebra", summary: "Jacobi identity on all generator triples" },
    CheckKind { id: "nondegeneracy", params: "n", summary: "nondegeneracy determinant at B' = E" },
    CheckKind { id: "pattern-reduction", params: "algebra|space unipotent staircase equal", summary: "zero, unit and equality pattern is a Poisson submanifold" },
    CheckKind { id: "poisson-map", params: "map n q sign", summary: "named map has the claimed sign" },
    CheckKind { id: "quantum-automorphism", params: "n t1 cap convention", summary: "B A B^T satisfies the A relation" },
    CheckKind { id: "rank", params: "algebra rank|corank", summary: "generic rank of the Poisson bivector" },
    CheckKind { id: "semiclassical", params: "relation n identification q convention factor", summary: "first order of the exchange rules against the classical table" },
];

pub const FORMS: &[&str] = &["A-sign", "B-sign", "B-theta", "BA-theta", "BF-theta", "BG-theta", "SA-theta", "SB-theta", "SS-theta"];

#[derive(Clone, Debug)]
pub enum Space {
    Algebra(AlgebraSpec),
    FTilde(usize),
}

/// Pattern description for `pattern-reduction`.
#[derive(Clone, Debug, Default)]
pub struct Shape {
    /// Blocks set to upper unipotent.
    pub unipotent: Vec<String>,
    /// `(block, below, above)` staircase profiles.
    pub staircase: Vec<(String, Vec<usize>, Vec<usize>)>,
    /// Block pairs identified entrywise.
    pub equal: Vec<(String, String)>,
}

impl Shape {
    fn describe(&self) -> String {
        let mut parts: Vec<String> = self.unipotent.iter().map(|b| format!("{b}:unipotent")).collect();
        for (b, lo, hi) in &self.staircase {
            let show = |p: &[usize]| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("");
            parts.push(format!("{b}:stair({};{})", show(lo), show(hi)));
        }
        parts.extend(self.equal.iter().map(|(x, y)| format!("{x}={y}")));
        parts.join("+")
    }

    fn pattern(&self, alg: &PoissonAlgebra) -> Result<Pattern> {
        let blocks = self
            .unipotent
            .iter()
            .chain(self.staircase.iter().map(|s| &s.0))
            .chain(self.equal.iter().flat_map(|(x, y)| [x, y]));
        for b in blocks {
            if alg.block_index(b).is_none() {
                return Err(Error::InvalidSpec(format!("no block {b} in {}", alg.label)));
            }
        }
        let names: Vec<&str> = self.unipotent.iter().map(String::as_str).collect();
        let mut p = Pattern::upper_unipotent(alg, &names);
        for (b, lo, hi) in &self.staircase {
            p = p.merge(Pattern::staircase(alg, b, lo, hi)?);
        }
        for (x, y) in &self.equal {
            p = p.merge(Pattern::identify(alg, x, y));
        }
        Ok(p)
    }
}

#[derive(Clone, Debug)]
pub enum Job {
    Jacobi(AlgebraSpec),
    PoissonMap { map: String, n: usize, q: QCase, sign: MapSign },
    CasimirFamily(AlgebraSpec),
    Rank { spec: AlgebraSpec, rank: Option<usize>, corank: Option<usize> },
    Exponents(usize),
    FormulaEquivalence { form: String, n: usize, factor: Rational },
    PatternReduction { space: Space, shape: Shape },
    Dirac { property: DiracProperty, n: usize, q: QCase },
    FBracketSign { n: usize, q: QCase },
    FSystemDet(usize),
    Nondegeneracy(usize),
    Identity { entry: String, n: usize },
    ExchangeConfluence { n: usize, convention: RConvention },
    QuantumAutomorphism { n: usize, t1: T1Choice, cap: usize, convention: RConvention },
    Semiclassical {
        relation: String,
        n: usize,
        identification: Identification,
        q: QCase,
        convention: RConvention,
        factor: Rational,
    },
    GroupoidLagrangian(usize),
}

/// A validated check ready to run.
#[derive(Clone, Debug)]
pub struct Planned {
    pub label: String,
    pub kind: &'static str,
    pub expect: Expect,
    pub job: Job,
    pub opts: Options,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (i64, i64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
            (b != 0).then(|| Rational::new(a, b))
        }
        None => s.trim().parse::<i64>().ok().map(Rational::from_int),
    }
}

fn parse_convention(s: &str) -> Option<RConvention> {
    match s {
        "as-written" => Some(RConvention::AsWritten),
        "flipped" => Some(RConvention::Flipped),
        _ => None,
    }
}

fn convention_name(c: RConvention) -> &'static str {
    match c {
        RConvention::AsWritten => "as-written",
        RConvention::Flipped => "flipped",
    }
}

fn parse_t1(s: &str) -> Option<T1Choice> {
    match s {
        "q" => Some(T1Choice::Q),
        "q-inverse" => Some(T1Choice::QInverse),
        _ => None,
    }
}

fn parse_identification(s: &str) -> Option<Identification> {
    match s {
        "natural" => Some(Identification::Natural),
        "transposed-a" => Some(Identification::TransposedA),
        _ => None,
    }
}

fn parse_sign(s: &str) -> Option<MapSign> {
    match s {
        "poisson" => Some(MapSign::Poisson),
        "anti" => Some(MapSign::Anti),
        "neither" => Some(MapSign::Neither),
        _ => None,
    }
}

fn sign_name(s: MapSign) -> &'static str {
    match s {
        MapSign::Poisson => "poisson",
        MapSign::Anti => "anti",
        MapSign::Neither => "neither",
    }
}

struct Ctx<'a> {
    default_algebra: Option<&'a AlgebraSpec>,
}

impl Ctx<'_> {
    fn algebra(&self, f: &mut Fields<'_>, ctx: &str) -> Result<AlgebraSpec> {
        match f.table("algebra")? {
            Some(t) => parse_algebra(&format!("{ctx}.algebra"), t),
            None => self.default_algebra.cloned().ok_or_else(|| schema(format!("{ctx}: no algebra given"))),
        }
    }

    fn n(&self, f: &mut Fields<'_>, ctx: &str) -> Result<usize> {
        let n = match f.usize("n")? {
            Some(n) => n,
            None => self.default_algebra.map(|a| a.n).ok_or_else(|| schema(format!("{ctx}: missing `n`")))?,
        };
        if !(1..=6).contains(&n) {
            return Err(schema(format!("{ctx}: N = {n} outside 1..=6")));
        }
        Ok(n)
    }

    fn q(&self, f: &mut Fields<'_>) -> Result<QCase> {
        Ok(f.parsed("q", "case", QCase::parse)?.unwrap_or(QCase::II))
    }
}

fn parse_job(kind: &str, f: &mut Fields<'_>, cx: &Ctx<'_>, ctx: &str) -> Result<Job> {
    Ok(match kind {
        "jacobi" => Job::Jacobi(cx.algebra(f, ctx)?),
        "casimir-family" => Job::CasimirFamily(cx.algebra(f, ctx)?),
        "rank" => {
            let spec = cx.algebra(f, ctx)?;
            Job::Rank { spec, rank: f.usize("rank")?, corank: f.usize("corank")? }
        }
        "poisson-map" => {
            let map = f.req_str("map")?;
            if !MAP_NAMES.contains(&map) {
                return Err(schema(format!("{ctx}: unknown map `{map}`")));
            }
            let n = cx.n(f, ctx)?;
            let q = cx.q(f)?;
            let sign = match f.parsed("sign", "sign", parse_sign)? {
                Some(s) => s,
                None => map_case(map, n, q)?.expected,
            };
            Job::PoissonMap { map: map.to_string(), n, q, sign }
        }
        "exponents" => Job::Exponents(cx.n(f, ctx)?),
        "formula-equivalence" => {
            let form = f.req_str("form")?;
            if !FORMS.contains(&form) {
                return Err(schema(format!("{ctx}: unknown form `{form}`")));
            }
            let factor = f.parsed("factor", "factor", parse_rational)?.unwrap_or_else(Rational::one);
            Job::FormulaEquivalence { form: form.to_string(), n: cx.n(f, ctx)?, factor }
        }
        "pattern-reduction" => {
            let space = match f.str("space")? {
                Some("F-tilde") => Space::FTilde(cx.n(f, ctx)?),
                Some(other) => return Err(schema(format!("{ctx}: unknown space `{other}`"))),
                None => Space::Algebra(cx.algebra(f, ctx)?),
            };
            let mut shape = Shape { unipotent: f.str_list("unipotent")?.unwrap_or_default(), ..Default::default() };
            for (k, t) in f.tables("staircase")?.unwrap_or_default().into_iter().enumerate() {
                let mut g = Fields::new(format!("{ctx}.staircase[{k}]"), t);
                let block = g.req_str("block")?.to_string();
                let below = g.usize_list("below")?.ok_or_else(|| schema(format!("{ctx}: staircase needs `below`")))?;
                let above = g.usize_list("above")?.ok_or_else(|| schema(format!("{ctx}: staircase needs `above`")))?;
                g.finish()?;
                shape.staircase.push((block, below, above));
            }
            for pair in f.str_list("equal")?.unwrap_or_default() {
                let (x, y) = pair
                    .split_once('=')
                    .ok_or_else(|| schema(format!("{ctx}: `equal` entries look like \"C=B\"")))?;
                shape.equal.push((x.trim().to_string(), y.trim().to_string()));
            }
            if shape.unipotent.is_empty() && shape.staircase.is_empty() && shape.equal.is_empty() {
                return Err(schema(format!("{ctx}: empty pattern")));
            }
            Job::PatternReduction { space, shape }
        }
        "dirac" => {
            let property = f
                .parsed("property", "property", DiracProperty::parse)?
                .ok_or_else(|| schema(format!("{ctx}: missing `property`")))?;
            Job::Dirac { property, n: cx.n(f, ctx)?, q: cx.q(f)? }
        }
        "f-bracket-sign" => Job::FBracketSign { n: cx.n(f, ctx)?, q: cx.q(f)? },
        "f-system-det" => Job::FSystemDet(cx.n(f, ctx)?),
        "nondegeneracy" => Job::Nondegeneracy(cx.n(f, ctx)?),
        "identity" => {
            let id = f.req_str("entry")?;
            entry(id).map_err(|_| schema(format!("{ctx}: unknown identity `{id}`")))?;
            Job::Identity { entry: id.to_string(), n: cx.n(f, ctx)? }
        }
        "exchange-confluence" => Job::ExchangeConfluence {
            n: cx.n(f, ctx)?,
            convention: f.parsed("convention", "convention", parse_convention)?.unwrap_or_default(),
        },
        "quantum-automorphism" => Job::QuantumAutomorphism {
            n: cx.n(f, ctx)?,
            t1: f.parsed("t1", "t1 choice", parse_t1)?.unwrap_or(T1Choice::Q),
            cap: f.usize("cap")?.unwrap_or(6),
            convention: f.parsed("convention", "convention", parse_convention)?.unwrap_or_default(),
        },
        "semiclassical" => {
            let relation = f.req_str("relation")?;
            if !["R-AA", "R-AB", "R-BB"].contains(&relation) {
                return Err(schema(format!("{ctx}: unknown relation `{relation}`")));
            }
            Job::Semiclassical {
                relation: relation.to_string(),
                n: cx.n(f, ctx)?,
                identification: f
                    .parsed("identification", "identification", parse_identification)?
                    .unwrap_or(Identification::Natural),
                q: cx.q(f)?,
                convention: f.parsed("convention", "convention", parse_convention)?.unwrap_or_default(),
                factor: f.parsed("factor", "factor", parse_rational)?.unwrap_or_else(Rational::one),
            }
        }
        "groupoid-lagrangian" => Job::GroupoidLagrangian(cx.n(f, ctx)?),
        other => return Err(Error::UnknownCheck(other.to_string())),
    })
}

impl Job {
    fn default_expect(&self) -> Expect {
        match self {
            Job::Identity { entry: id, .. } => match entry(id).map(|e| e.expected) {
                Ok(Expected::Fails) => Expect::Fail,
                _ => Expect::Pass,
            },
            _ => Expect::Pass,
        }
    }

    fn uses_backend(&self) -> bool {
        matches!(self, Job::Jacobi(_) | Job::PoissonMap { .. } | Job::CasimirFamily(_) | Job::Dirac { .. })
    }

    fn uses_trials(&self) -> bool {
        matches!(
            self,
            Job::Rank { .. } | Job::Exponents(_) | Job::FBracketSign { .. } | Job::Dirac { .. }
        )
    }

    fn describe(&self) -> String {
        match self {
            Job::Jacobi(s) | Job::CasimirFamily(s) => format!("{},N={}", s.label(), s.n),
            Job::Rank { spec, .. } => format!("{},N={}", spec.label(), spec.n),
            Job::PoissonMap { map, n, q, .. } => format!("{map},{},N={n}", q.label()),
            Job::Exponents(n) | Job::FSystemDet(n) | Job::Nondegeneracy(n) | Job::GroupoidLagrangian(n) => {
                format!("N={n}")
            }
            Job::FormulaEquivalence { form, n, .. } => format!("{form},N={n}"),
            Job::PatternReduction { space, shape } => {
                let s = match space {
                    Space::Algebra(a) => format!("{},N={}", a.label(), a.n),
                    Space::FTilde(n) => format!("F-tilde,N={n}"),
                };
                format!("{s},{}", shape.describe())
            }
            Job::Dirac { property, n, q } => {
                let p = serde_json::to_value(property).ok().and_then(|v| v.as_str().map(str::to_string));
                format!("{},{},N={n}", p.unwrap_or_default(), q.label())
            }
            Job::FBracketSign { n, q } => format!("{},N={n}", q.label()),
            Job::Identity { entry, n } => format!("{entry},N={n}"),
            Job::ExchangeConfluence { n, convention } => format!("N={n},{}", convention_name(*convention)),
            Job::QuantumAutomorphism { n, t1, cap, convention } => {
                let t = if *t1 == T1Choice::Q { "q" } else { "q-inverse" };
                format!("N={n},t1={t},cap={cap},{}", convention_name(*convention))
            }
            Job::Semiclassical { relation, n, identification, q, convention, factor } => {
                let i = match identification {
                    Identification::Natural => "natural",
                    Identification::TransposedA => "transposed-a",
                };
                format!("{relation},N={n},{i},{},{},factor={factor}", q.label(), convention_name(*convention))
            }
        }
    }
}

/// Validate every check of a scenario before anything runs.
pub fn plan(scn: &Scenario) -> Result<Vec<Planned>> {
    let field = PrimeField::new(scn.prime).map_err(|e| schema(e.to_string()))?;
    let cx = Ctx { default_algebra: scn.algebra.as_ref() };
    let mut out: Vec<Planned> = Vec::new();
    for (i, c) in scn.checks.iter().enumerate() {
        let ctx = format!("checks[{i}] ({})", c.kind);
        let kind = CHECK_KINDS
            .iter()
            .find(|k| k.id == c.kind)
            .map(|k| k.id)
            .ok_or_else(|| Error::UnknownCheck(c.kind.clone()))?;
        let mut f = Fields::new(ctx.clone(), &c.params);
        let job = parse_job(kind, &mut f, &cx, &ctx)?;
        f.finish()?;
        let opts = Options {
            backend: c.backend.unwrap_or(scn.backend),
            field,
            trials: c.trials.unwrap_or(scn.trials),
            seed: scn.seed,
        };
        let label = match &c.label {
            Some(l) => l.clone(),
            None => {
                let mut d = job.describe();
                if job.uses_backend() {
                    d.push_str(match opts.backend {
                        Backend::Symbolic => ",symbolic",
                        Backend::Modular => ",modular",
                    });
                }
                if job.uses_trials() || (job.uses_backend() && opts.backend == Backend::Modular) {
                    d.push_str(&format!(",trials={}", opts.trials));
                }
                format!("{kind}[{d}]")
            }
        };
        if out.iter().any(|p| p.label == label) {
            return Err(schema(format!("{ctx}: duplicate check label `{label}`")));
        }
        let expect = c.expect.unwrap_or_else(|| job.default_expect());
        out.push(Planned { label, kind, expect, job, opts });
    }
    Ok(out)
}

fn build(spec: &AlgebraSpec) -> Result<PoissonAlgebra> {
    PoissonAlgebra::build(spec)
}

fn agreement_report(a: Agreement, factor: &Rational) -> Report {
    let ok = match &a {
        Agreement::Equal => factor.is_one(),
        Agreement::Scaled(c) => c == factor,
        Agreement::Differs { .. } => false,
    };
    if ok {
        Report::pass().with_detail(describe(&a))
    } else {
        Report::fail(describe(&a))
    }
}

fn formula_equivalence(form: &str, n: usize, factor: &Rational) -> Result<Report> {
    let a = match form {
        "A-sign" => {
            let g = build(&AlgebraSpec::a(n))?;
            let a = compare_block(&g, "A", "A", &comp::a_sign_form(&g, "A"));
            a
        }
        "B-sign" => {
            let g = build(&AlgebraSpec::b(n))?;
            let a = compare_block(&g, "B", "B", &comp::b_sign_form(&g, "B"));
            a
        }
        "B-theta" => {
            let g = build(&AlgebraSpec::b(n))?;
            let a = compare_block(&g, "B", "B", &comp::b_theta_form(&g, "B"));
            a
        }
        "BA-theta" => {
            let g = build(&AlgebraSpec::ab(n, QCase::II))?;
            let a = compare_block(&g, "B", "A", &comp::ba_theta_form(&g, "B", "A"));
            a
        }
        "BF-theta" => {
            let g = f_tilde_target(n)?;
            let a = compare_block(&g, "B", "F", &comp::bf_theta_form(&g, "B", "F"));
            a
        }
        "BG-theta" => {
            let g = f_tilde_target(n)?;
            let a = compare_block(&g, "B", "G", &comp::b_ftilde_theta_form(&g, "B", "G"));
            a
        }
        "SA-theta" => {
            let g = s_extended(n, QCase::II)?;
            let a = compare_block(&g, "S", "A", &comp::sa_theta_form(&g, "S", "A"));
            a
        }
        "SB-theta" => {
            let g = s_extended(n, QCase::II)?;
            let a = compare_block(&g, "S", "B", &comp::sb_theta_form(&g, "S", "B"));
            a
        }
        "SS-theta" => {
            let g = s_extended(n, QCase::II)?;
            let a = compare_block(&g, "S", "S", &comp::ss_theta_form(&g, "S"));
            a
        }
        other => return Err(Error::UnknownCheck(other.to_string())),
    };
    Ok(agreement_report(a, factor))
}

/// Run one check.
pub fn execute(job: &Job, opts: &Options) -> Result<Report> {
    match job {
        Job::Jacobi(spec) => jacobi_check(&build(spec)?, opts),
        Job::CasimirFamily(spec) => casimir_family_check(spec, opts),
        Job::Rank { spec, rank, corank } => {
            let alg = build(spec)?;
            let r = bivector_rank(&alg, opts)?;
            let m = alg.num_generators();
            let detail = format!("rank {r}, corank {}", m - r);
            let bad = rank.filter(|&want| want != r).map(|want| format!("rank {r}, expected {want}")).or_else(|| {
                corank.filter(|&want| want != m - r).map(|want| format!("corank {}, expected {want}", m - r))
            });
            Ok(match bad {
                Some(w) => Report::fail(w),
                None => Report::pass().with_detail(detail),
            })
        }
        Job::PoissonMap { map, n, q, sign } => {
            let c = map_case(map, *n, *q)?;
            let r = poisson_map_check(&c.source, &c.images, &c.target, MapMode::Auto, opts)?;
            Ok(if r.sign == *sign {
                Report::pass().with_detail(sign_name(r.sign))
            } else {
                let why = r.report.witness.map(|w| format!(" ({w})")).unwrap_or_default();
                Report::fail(format!("sign {}, expected {}{why}", sign_name(r.sign), sign_name(*sign)))
            })
        }
        Job::Exponents(n) => exponent_check(*n, &modular(opts)),
        Job::FormulaEquivalence { form, n, factor } => formula_equivalence(form, *n, factor),
        Job::PatternReduction { space, shape } => {
            let alg = match space {
                Space::Algebra(s) => build(s)?,
                Space::FTilde(n) => f_tilde_target(*n)?,
            };
            pattern_reduction_check(&alg, &shape.pattern(&alg)?)
        }
        Job::Dirac { property, n, q } => dirac_check(*property, *n, *q, opts),
        Job::FBracketSign { n, q } => f_bracket_sign_check(*q, *n, opts),
        Job::FSystemDet(n) => f_system_det_check(*n),
        Job::Nondegeneracy(n) => nondegeneracy_check(*n),
        Job::Identity { entry, n } => {
            let o = check_identity(entry, *n)?;
            Ok(match o.witness {
                None if o.holds => Report::pass(),
                w => Report::fail(match w {
                    Some((r, c)) => format!("entry ({r}, {c}) differs"),
                    None => "identity does not hold".to_string(),
                }),
            })
        }
        Job::ExchangeConfluence { n, convention } => {
            let sys = exchange_rules_with(*n, *convention)?;
            let bad = sys.confluence_failures()?;
            let rules = sys.rules().count();
            Ok(match bad.first() {
                None => Report::pass().with_detail(format!("{rules} rules")),
                Some(w) => Report::fail(format!("overlap {} does not resolve", sys.word_name(w))),
            })
        }
        Job::QuantumAutomorphism { n, t1, cap, convention } => {
            let sys = exchange_rules_with(*n, *convention)?;
            let r = quantum_automorphism_check(&sys, *t1, *cap)?;
            Ok(match r.witness {
                None => Report::pass().with_detail(format!("{} words reduced", r.words_reduced)),
                Some((i, j)) => Report::fail(format!("entry ({i}, {j}) has nonzero normal form")),
            })
        }
        Job::Semiclassical { relation, n, identification, q, convention, factor } => {
            let sys = exchange_rules_with(*n, *convention)?;
            let r = semiclassical_expand(&sys, relation, *identification, *q)?;
            if !r.order_zero_trivial {
                return Ok(Report::fail("order zero is not plain commutation"));
            }
            Ok(agreement_report(r.agreement, factor))
        }
        Job::GroupoidLagrangian(n) => {
            let fams = lagrangian_check(*n)?;
            let names: Vec<&str> = fams.iter().map(|(f, _)| f.as_str()).collect();
            let detail = names.join(" ");
            Ok(match fams.iter().find(|(_, r)| !r.pass) {
                None => Report::pass().with_detail(detail),
                Some((f, r)) => Report::fail(format!("{f}: {}", r.witness.clone().unwrap_or_default())),
            })
        }
    }
}

fn modular(opts: &Options) -> Options {
    Options { backend: Backend::Modular, ..opts.clone() }
}

/// Sorted algebra family labels.
pub fn family_labels() -> Vec<String> {
    let mut out: Vec<String> = ["A", "B", "BC", "FB-groupoid", "FB-triple", "B-chain", "BC-chain"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for f in ["AB", "ABC"] {
        for q in ["i", "ii", "iii"] {
            out.push(format!("{f}({q})"));
        }
    }
    out.sort();
    out
}

/// The catalog listing printed by `list`.
pub fn catalog_listing() -> String {
    let mut s = String::from("families:\n");
    for f in family_labels() {
        s.push_str(&format!("  {f}\n"));
    }
    s.push_str("checks:\n");
    for k in CHECK_KINDS {
        s.push_str(&format!("  {:<22} {:<40} {}\n", k.id, k.params, k.summary));
    }
    let mut maps: Vec<&str> = MAP_NAMES.to_vec();
    maps.sort();
    s.push_str("maps:\n");
    for m in maps {
        s.push_str(&format!("  {m}\n"));
    }
    s.push_str("forms:\n");
    for f in FORMS {
        s.push_str(&format!("  {f}\n"));
    }
    let mut ids: Vec<_> = CATALOG.iter().collect();
    ids.sort_by_key(|e| e.id);
    s.push_str("identities:\n");
    for e in ids {
        let exp = match e.expected {
            Expected::Holds => "holds",
            Expected::Fails => "fails",
        };
        s.push_str(&format!("  {:<16} legs={} {:<6} {}\n", e.id, e.legs, exp, e.note));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_are_sorted_and_unique() {
        let ids: Vec<&str> = CHECK_KINDS.iter().map(|k| k.id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/2"), Some(Rational::new(1, 2)));
        assert_eq!(parse_rational("-3"), Some(Rational::from_int(-3)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn every_form_runs() {
        for f in FORMS {
            let want = if f.ends_with("sign") { Rational::one() } else { Rational::new(1, 2) };
            assert!(formula_equivalence(f, 2, &want).unwrap().pass, "{f}");
        }
    }
}
