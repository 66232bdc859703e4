//! The built-in list of checks, and the parser for registry files.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::expr::{parse_all, Expr};
use crate::error::{Error, Result};

const BUILTIN: &str = include_str!("registry.sexp");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    SeriesIdentity,
    Congruence,
    LeadingTerms,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::SeriesIdentity => "series-identity",
            CheckKind::Congruence => "congruence",
            CheckKind::LeadingTerms => "leading-terms",
        }
    }
}

/// Exponents `m j + r` for `j >= 0` and each listed `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Progression {
    pub m: i64,
    pub residues: Vec<i64>,
}

impl Progression {
    pub fn all() -> Self {
        Self { m: 1, residues: vec![0] }
    }
}

#[derive(Clone, Debug)]
pub struct CheckSpec {
    pub id: String,
    pub kind: CheckKind,
    pub note: String,
    /// The left side of an identity, or the series of a congruence.
    pub lhs: Expr,
    pub rhs: Option<Expr>,
    pub modulus: Option<u64>,
    pub progression: Option<Progression>,
    /// Fixed precision of a leading-terms check.
    pub prec: Option<i64>,
    /// Upper limit on the working precision of an identity.
    pub max_prec: Option<i64>,
    /// Congruence is cheap enough to scan to the larger bound.
    pub cheap: bool,
    pub known_issue: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct Registry {
    pub defs: HashMap<String, Expr>,
    pub checks: Vec<CheckSpec>,
}

fn err<T>(msg: String) -> Result<T> {
    Err(Error::Parse(msg))
}

fn int_of(e: &Expr, what: &str) -> Result<i64> {
    match e {
        Expr::Num(n) if n.is_integer() => n
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::Parse(format!("{what}: {n} out of range"))),
        _ => err(format!("{what}: expected an integer, got {e}")),
    }
}

fn parse_check(form: &[Expr]) -> Result<CheckSpec> {
    let head = form[0].sym().unwrap_or_default();
    let kind = match head {
        "identity" => CheckKind::SeriesIdentity,
        "leading" => CheckKind::LeadingTerms,
        "congruence" => CheckKind::Congruence,
        _ => unreachable!(),
    };
    let id = form
        .get(1)
        .and_then(Expr::sym)
        .ok_or_else(|| Error::Parse(format!("`{head}` needs an id")))?
        .to_string();
    let note = match form.get(2) {
        Some(Expr::Str(s)) => s.clone(),
        _ => return err(format!("{id}: expected a note string after the id")),
    };
    let mut spec = CheckSpec {
        id: id.clone(),
        kind,
        note,
        lhs: Expr::List(vec![]),
        rhs: None,
        modulus: None,
        progression: None,
        prec: None,
        max_prec: None,
        cheap: false,
        known_issue: None,
    };
    let mut sides = Vec::new();
    for item in &form[3..] {
        let opt = item.head().unwrap_or_default();
        let args = item.list().map(|v| &v[1..]).unwrap_or(&[]);
        match (opt, args) {
            ("cheap", []) => spec.cheap = true,
            ("known-issue", [Expr::Str(s)]) => spec.known_issue = Some(s.clone()),
            ("max-prec", [p]) => spec.max_prec = Some(int_of(p, &id)?),
            ("prec", [p]) if kind == CheckKind::LeadingTerms => spec.prec = Some(int_of(p, &id)?),
            ("series", [s]) if kind == CheckKind::Congruence => sides.push(s.clone()),
            ("modulus", [m]) if kind == CheckKind::Congruence => {
                let m = int_of(m, &id)?;
                if m < 2 {
                    return err(format!("{id}: modulus must be at least 2"));
                }
                spec.modulus = Some(m as u64);
            }
            ("progression", [m, rs @ ..]) if kind == CheckKind::Congruence && !rs.is_empty() => {
                let m = int_of(m, &id)?;
                if m < 1 {
                    return err(format!("{id}: progression step must be positive"));
                }
                let residues = rs.iter().map(|r| int_of(r, &id)).collect::<Result<Vec<_>>>()?;
                if residues.iter().any(|&r| r < 0) {
                    return err(format!("{id}: progression offsets must be non-negative"));
                }
                spec.progression = Some(Progression { m, residues });
            }
            _ if kind != CheckKind::Congruence => sides.push(item.clone()),
            _ => return err(format!("{id}: unexpected {item}")),
        }
    }
    let wanted = if kind == CheckKind::Congruence { 1 } else { 2 };
    if sides.len() != wanted {
        return err(format!("{id}: expected {wanted} series expression(s), found {}", sides.len()));
    }
    let mut sides = sides.into_iter();
    spec.lhs = sides.next().unwrap();
    spec.rhs = sides.next();
    match kind {
        CheckKind::Congruence if spec.modulus.is_none() => err(format!("{id}: missing (modulus M)")),
        CheckKind::LeadingTerms if spec.prec.is_none() => err(format!("{id}: missing (prec P)")),
        _ => Ok(spec),
    }
}

impl Registry {
    /// The checks shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("built-in registry parses")
    }

    pub fn parse(src: &str) -> Result<Self> {
        let mut reg = Registry::default();
        for form in parse_all(src)? {
            let items = form
                .list()
                .filter(|v| !v.is_empty())
                .ok_or_else(|| Error::Parse(format!("top-level form must be a list: {form}")))?;
            match form.head() {
                Some("def") => match items {
                    [_, Expr::Sym(name), body] => {
                        if reg.defs.insert(name.clone(), body.clone()).is_some() {
                            return err(format!("`{name}` defined twice"));
                        }
                    }
                    _ => return err(format!("malformed def: {form}")),
                },
                Some("identity" | "leading" | "congruence") => {
                    let spec = parse_check(items)?;
                    if reg.checks.iter().any(|c| c.id == spec.id) {
                        return err(format!("duplicate check id {}", spec.id));
                    }
                    reg.checks.push(spec);
                }
                _ => return err(format!("unknown top-level form: {form}")),
            }
        }
        Ok(reg)
    }

    pub fn get(&self, id: &str) -> Option<&CheckSpec> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Checks whose id matches a shell-style pattern, in registry order.
    pub fn select(&self, pattern: &str) -> Result<Vec<&CheckSpec>> {
        let pat = glob::Pattern::new(pattern).map_err(|e| Error::Parse(format!("bad id pattern {pattern:?}: {e}")))?;
        Ok(self.checks.iter().filter(|c| pat.matches(&c.id)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parses_and_references_resolve() {
        let reg = Registry::builtin();
        assert!(reg.checks.len() > 100);
        fn walk(e: &Expr, reg: &Registry, bound: &mut Vec<String>) {
            match e {
                Expr::Sym(s) if s.chars().next().is_some_and(|c| c.is_ascii_uppercase()) => {
                    assert!(reg.defs.contains_key(s) || bound.contains(s), "undefined {s}");
                }
                Expr::List(v) if v.first().and_then(Expr::sym) == Some("sum") => {
                    bound.push(v[1].sym().unwrap().to_string());
                    v[2..].iter().for_each(|c| walk(c, reg, bound));
                    bound.pop();
                }
                Expr::List(v) => v.iter().for_each(|c| walk(c, reg, bound)),
                _ => {}
            }
        }
        for c in &reg.checks {
            walk(&c.lhs, &reg, &mut vec![]);
            if let Some(r) = &c.rhs {
                walk(r, &reg, &mut vec![]);
            }
        }
    }

    #[test]
    fn selection_by_pattern() {
        let reg = Registry::builtin();
        let five: Vec<_> = reg.select("CPHI5-*").unwrap().iter().map(|c| c.id.as_str()).collect();
        assert_eq!(five, ["CPHI5-E", "CPHI5-PROD", "CPHI5-RIGHT", "CPHI5-THETA40"]);
        assert_eq!(reg.select("NOPE").unwrap().len(), 0);
        assert_eq!(reg.get("C-CPHI17").unwrap().modulus, Some(289));
    }

    #[test]
    fn rejects_malformed_entries() {
        assert!(Registry::parse("(identity X \"n\" (qq 1))").is_err());
        assert!(Registry::parse("(congruence X \"n\" (series (qq 1)))").is_err());
        assert!(Registry::parse("(leading X \"n\" (qq 1) (qq 1))").is_err());
        assert!(Registry::parse("(def A 1) (def A 2)").is_err());
        assert!(Registry::parse("(identity X \"n\" 1 1) (identity X \"n\" 1 1)").is_err());
        let ok = Registry::parse("(congruence X \"n\" (series (qq 1)) (modulus 5) (progression 5 4) (cheap))").unwrap();
        let c = &ok.checks[0];
        assert_eq!(c.progression, Some(Progression { m: 5, residues: vec![4] }));
        assert!(c.cheap);
    }
}
