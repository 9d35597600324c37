//! Scenario files: TOML with top-level settings, an optional default
//! `[algebra]` table and a list of `[[checks]]`.

use crate::error::{Error, Result};
use crate::poisson::{AlgebraSpec, Backend, Family, QSpec};
use crate::ring::field::DEFAULT_PRIME;
use serde::Serialize;
use std::collections::BTreeSet;
use std::path::Path;
use toml::{Table, Value};

pub const SCHEMA_VERSION: i64 = 1;

/// Expected outcome of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug)]
pub struct CheckEntry {
    pub kind: String,
    pub label: Option<String>,
    pub expect: Option<Expect>,
    pub backend: Option<Backend>,
    pub trials: Option<usize>,
    pub params: Table,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub backend: Backend,
    pub prime: u64,
    pub seed: u64,
    pub trials: usize,
    pub report: Option<String>,
    pub algebra: Option<AlgebraSpec>,
    pub checks: Vec<CheckEntry>,
}

/// Command-line values that take precedence over the scenario's own.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub backend: Option<Backend>,
    pub prime: Option<u64>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

/// Typed access to a TOML table that rejects keys nobody asked for.
pub struct Fields<'a> {
    ctx: String,
    table: &'a Table,
    used: BTreeSet<&'a str>,
}

impl<'a> Fields<'a> {
    pub fn new(ctx: impl Into<String>, table: &'a Table) -> Self {
        Fields { ctx: ctx.into(), table, used: BTreeSet::new() }
    }

    fn raw(&mut self, key: &str) -> Option<&'a Value> {
        let (k, v) = self.table.get_key_value(key)?;
        self.used.insert(k.as_str());
        Some(v)
    }

    fn bad(&self, key: &str, want: &str) -> Error {
        schema(format!("{}: `{key}` must be {want}", self.ctx))
    }

    pub fn str(&mut self, key: &str) -> Result<Option<&'a str>> {
        match self.raw(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(_) => Err(self.bad(key, "a string")),
        }
    }

    pub fn req_str(&mut self, key: &str) -> Result<&'a str> {
        self.str(key)?.ok_or_else(|| schema(format!("{}: missing `{key}`", self.ctx)))
    }

    pub fn int(&mut self, key: &str) -> Result<Option<i64>> {
        match self.raw(key) {
            None => Ok(None),
            Some(Value::Integer(i)) => Ok(Some(*i)),
            Some(_) => Err(self.bad(key, "an integer")),
        }
    }

    pub fn usize(&mut self, key: &str) -> Result<Option<usize>> {
        match self.int(key)? {
            None => Ok(None),
            Some(i) if i >= 0 => Ok(Some(i as usize)),
            Some(_) => Err(self.bad(key, "a non-negative integer")),
        }
    }

    pub fn str_list(&mut self, key: &str) -> Result<Option<Vec<String>>> {
        match self.raw(key) {
            None => Ok(None),
            Some(Value::Array(xs)) => xs
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| self.bad(key, "a list of strings")))
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(_) => Err(self.bad(key, "a list of strings")),
        }
    }

    pub fn usize_list(&mut self, key: &str) -> Result<Option<Vec<usize>>> {
        match self.raw(key) {
            None => Ok(None),
            Some(Value::Array(xs)) => xs
                .iter()
                .map(|x| match x {
                    Value::Integer(i) if *i >= 0 => Ok(*i as usize),
                    _ => Err(self.bad(key, "a list of non-negative integers")),
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(_) => Err(self.bad(key, "a list of non-negative integers")),
        }
    }

    pub fn tables(&mut self, key: &str) -> Result<Option<Vec<&'a Table>>> {
        match self.raw(key) {
            None => Ok(None),
            Some(Value::Array(xs)) => xs
                .iter()
                .map(|x| x.as_table().ok_or_else(|| self.bad(key, "an array of tables")))
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(_) => Err(self.bad(key, "an array of tables")),
        }
    }

    pub fn table(&mut self, key: &str) -> Result<Option<&'a Table>> {
        match self.raw(key) {
            None => Ok(None),
            Some(Value::Table(t)) => Ok(Some(t)),
            Some(_) => Err(self.bad(key, "a table")),
        }
    }

    pub fn parsed<T>(&mut self, key: &str, what: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Option<T>> {
        match self.str(key)? {
            None => Ok(None),
            Some(s) => parse(s).map(Some).ok_or_else(|| schema(format!("{}: unknown {what} `{s}`", self.ctx))),
        }
    }

    /// Error on keys that were present but never read.
    pub fn finish(self) -> Result<()> {
        let extra: Vec<&str> = self.table.keys().map(String::as_str).filter(|k| !self.used.contains(k)).collect();
        if extra.is_empty() {
            Ok(())
        } else {
            Err(schema(format!("{}: unknown key(s) {}", self.ctx, extra.join(", "))))
        }
    }
}

pub fn parse_algebra(ctx: &str, t: &Table) -> Result<AlgebraSpec> {
    let mut f = Fields::new(ctx, t);
    let family = f.parsed("family", "family", Family::parse)?.ok_or_else(|| schema(format!("{ctx}: missing `family`")))?;
    let n = f.usize("n")?.ok_or_else(|| schema(format!("{ctx}: missing `n`")))?;
    let q = f.parsed("q", "coupling", QSpec::parse)?.unwrap_or(QSpec::Case(crate::tensor::QCase::II));
    let j = f.usize("j")?.unwrap_or(0);
    let chain_q = match f.str_list("chain_q")? {
        Some(xs) => xs
            .iter()
            .map(|s| QSpec::parse(s).ok_or_else(|| schema(format!("{ctx}: unknown coupling `{s}`"))))
            .collect::<Result<Vec<_>>>()?,
        None if j > 0 => vec![q.clone(); j - 1],
        None => Vec::new(),
    };
    f.finish()?;
    let spec = AlgebraSpec { family, n, q, chain_q, j };
    spec.validate().map_err(|e| schema(format!("{ctx}: {e}")))?;
    Ok(spec)
}

fn parse_expect(ctx: &str, s: &str) -> Result<Expect> {
    match s {
        "pass" => Ok(Expect::Pass),
        "fail" => Ok(Expect::Fail),
        "error" => Ok(Expect::Error),
        other => Err(schema(format!("{ctx}: `expect` must be pass, fail or error, got `{other}`"))),
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario> {
        let root: Table = toml::from_str(text).map_err(|e| schema(e.to_string()))?;
        let mut f = Fields::new("scenario", &root);
        if let Some(v) = f.int("schema")? {
            if v != SCHEMA_VERSION {
                return Err(schema(format!("unsupported schema version {v}")));
            }
        }
        let name = f.req_str("name")?.to_string();
        let backend = f.parsed("backend", "backend", Backend::parse)?.unwrap_or(Backend::Symbolic);
        let prime = match f.int("prime")? {
            None => DEFAULT_PRIME,
            Some(p) if p > 0 => p as u64,
            Some(p) => return Err(schema(format!("scenario: invalid prime {p}"))),
        };
        let seed = f.usize("seed")?.unwrap_or(0) as u64;
        let trials = f.usize("trials")?.unwrap_or(20);
        let report = f.str("report")?.map(str::to_string);
        let algebra = f.table("algebra")?.map(|t| parse_algebra("[algebra]", t)).transpose()?;
        let raw_checks = match f.raw("checks") {
            None => Vec::new(),
            Some(Value::Array(xs)) => xs.clone(),
            Some(_) => return Err(schema("scenario: `checks` must be an array of tables")),
        };
        f.finish()?;
        let mut checks = Vec::new();
        for (i, v) in raw_checks.into_iter().enumerate() {
            let Value::Table(mut t) = v else {
                return Err(schema(format!("checks[{i}] is not a table")));
            };
            let ctx = format!("checks[{i}]");
            let take_str = |t: &mut Table, k: &str| -> Result<Option<String>> {
                match t.remove(k) {
                    None => Ok(None),
                    Some(Value::String(s)) => Ok(Some(s)),
                    Some(_) => Err(schema(format!("{ctx}: `{k}` must be a string"))),
                }
            };
            let kind = take_str(&mut t, "id")?.ok_or_else(|| schema(format!("{ctx}: missing `id`")))?;
            let label = take_str(&mut t, "label")?;
            let expect = take_str(&mut t, "expect")?.map(|s| parse_expect(&ctx, &s)).transpose()?;
            let backend = match take_str(&mut t, "backend")? {
                None => None,
                Some(s) => Some(Backend::parse(&s).ok_or_else(|| schema(format!("{ctx}: unknown backend `{s}`")))?),
            };
            let trials = match t.remove("trials") {
                None => None,
                Some(Value::Integer(k)) if k >= 0 => Some(k as usize),
                Some(_) => return Err(schema(format!("{ctx}: `trials` must be a non-negative integer"))),
            };
            checks.push(CheckEntry { kind, label, expect, backend, trials, params: t });
        }
        if checks.is_empty() {
            return Err(schema("scenario has no checks"));
        }
        Ok(Scenario { name, backend, prime, seed, trials, report, algebra, checks })
    }

    pub fn load(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Scenario::parse(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(b) = o.backend {
            self.backend = b;
        }
        if let Some(p) = o.prime {
            self.prime = p;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(t) = o.trials {
            self.trials = t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "t"
seed = 3
[algebra]
family = "AB"
n = 2
q = "iii"
[[checks]]
id = "jacobi"
expect = "pass"
"#;

    #[test]
    fn minimal_scenario() {
        let s = Scenario::parse(MINIMAL).unwrap();
        assert_eq!(s.name, "t");
        assert_eq!(s.seed, 3);
        assert_eq!(s.trials, 20);
        assert_eq!(s.prime, DEFAULT_PRIME);
        assert_eq!(s.algebra.unwrap().label(), "AB(iii)");
        assert_eq!(s.checks[0].kind, "jacobi");
        assert_eq!(s.checks[0].expect, Some(Expect::Pass));
    }

    #[test]
    fn schema_errors() {
        for bad in [
            "seed = 1\n[[checks]]\nid = \"jacobi\"",
            "name = \"x\"",
            "name = \"x\"\ncolour = 1\n[[checks]]\nid = \"jacobi\"",
            "name = \"x\"\n[algebra]\nfamily = \"Z\"\nn = 2\n[[checks]]\nid = \"jacobi\"",
            "name = \"x\"\n[[checks]]\nid = \"jacobi\"\nexpect = \"maybe\"",
            "name = \"x\"\nschema = 7\n[[checks]]\nid = \"jacobi\"",
            "name = [",
        ] {
            assert!(matches!(Scenario::parse(bad), Err(Error::Schema(_))), "{bad}");
        }
    }

    #[test]
    fn chain_couplings_default_to_q() {
        let t: Table = toml::from_str("family = \"B-chain\"\nn = 2\nj = 3\nq = \"iii\"").unwrap();
        let s = parse_algebra("a", &t).unwrap();
        assert_eq!(s.chain_q.len(), 2);
        assert_eq!(s.label(), "B-chain[j=3;iii,iii,iii]");
    }

    #[test]
    fn overrides_win() {
        let mut s = Scenario::parse(MINIMAL).unwrap();
        s.apply(&Overrides { seed: Some(9), trials: Some(2), ..Default::default() });
        assert_eq!((s.seed, s.trials), (9, 2));
    }
}
