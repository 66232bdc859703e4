//! Running registry checks and collecting their results.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::eval::{rational_to_string, DiskCache, Evaluator};
use super::registry::{CheckKind, CheckSpec, Progression, Registry};
use crate::error::{Error, Result};
use crate::series::{exp, Exponent};

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Precision for series identities (coefficients of `q^n`, `n < prec`).
    pub prec: i64,
    /// Largest exponent scanned by a congruence.
    pub n_max: i64,
    /// Largest exponent scanned by a congruence marked cheap.
    pub cheap_n_max: i64,
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
    pub cache: Option<DiskCache>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            prec: 120,
            n_max: 400,
            cheap_n_max: 2000,
            threads: None,
            cache: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// Where a check first failed. Coefficients are exact decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FirstMismatch {
    pub exponent: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub kind: CheckKind,
    pub status: Status,
    /// Precision used by an identity or leading-terms check.
    pub prec: Option<i64>,
    /// Scan bound used by a congruence.
    pub n_max: Option<i64>,
    pub first_mismatch: Option<FirstMismatch>,
    pub message: Option<String>,
    pub known_issue: Option<String>,
    pub wall_time_ms: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// A registry together with an evaluator whose caches are shared by every check.
pub struct Runner {
    registry: Registry,
    evaluator: Evaluator,
    config: RunConfig,
}

impl Runner {
    pub fn new(registry: Registry, config: RunConfig) -> Self {
        let evaluator = Evaluator::new(registry.defs.clone()).with_disk_cache(config.cache.clone());
        Self {
            registry,
            evaluator,
            config,
        }
    }

    pub fn builtin(config: RunConfig) -> Self {
        Self::new(Registry::builtin(), config)
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn run_check(&self, id: &str) -> Result<CheckResult> {
        let spec = self.registry.get(id).ok_or_else(|| Error::UnknownId(id.to_string()))?;
        Ok(self.run_spec(spec))
    }

    /// Runs every check whose id matches `pattern`, in parallel, returning
    /// results in registry order. A pattern matching nothing is an unknown id.
    pub fn run_suite(&self, pattern: &str) -> Result<Vec<CheckResult>> {
        let specs = self.registry.select(pattern)?;
        if specs.is_empty() {
            return Err(Error::UnknownId(pattern.to_string()));
        }
        self.run_specs(&specs)
    }

    pub fn run_all(&self) -> Result<Vec<CheckResult>> {
        let specs: Vec<_> = self.registry.checks.iter().collect();
        self.run_specs(&specs)
    }

    pub fn run_specs(&self, specs: &[&CheckSpec]) -> Result<Vec<CheckResult>> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.config.threads {
            builder = builder.num_threads(n);
        }
        let pool = builder.build().map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(pool.install(|| specs.par_iter().map(|s| self.run_spec(s)).collect()))
    }

    pub fn run_spec(&self, spec: &CheckSpec) -> CheckResult {
        let start = Instant::now();
        let mut result = CheckResult {
            id: spec.id.clone(),
            kind: spec.kind,
            status: Status::Pass,
            prec: None,
            n_max: None,
            first_mismatch: None,
            message: None,
            known_issue: spec.known_issue.clone(),
            wall_time_ms: 0.0,
        };
        let outcome = match spec.kind {
            CheckKind::SeriesIdentity | CheckKind::LeadingTerms => {
                let prec = match spec.kind {
                    CheckKind::LeadingTerms => spec.prec.unwrap(),
                    _ => spec.max_prec.map_or(self.config.prec, |m| m.min(self.config.prec)),
                };
                result.prec = Some(prec);
                self.compare(spec, exp(prec))
            }
            CheckKind::Congruence => {
                let n_max = if spec.cheap { self.config.cheap_n_max } else { self.config.n_max };
                result.n_max = Some(n_max);
                self.scan(spec, n_max)
            }
        };
        match outcome {
            Ok(None) => {}
            Ok(Some(m)) => {
                result.status = Status::Fail;
                result.first_mismatch = Some(m);
            }
            Err(e) => {
                result.status = Status::Error;
                result.message = Some(e.to_string());
            }
        }
        result.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
        result
    }

    fn compare(&self, spec: &CheckSpec, prec: Exponent) -> Result<Option<FirstMismatch>> {
        let rhs = spec.rhs.as_ref().expect("identity has two sides");
        let (l, r) = rayon::join(
            || self.evaluator.evaluate(&spec.lhs, prec),
            || self.evaluator.evaluate(rhs, prec),
        );
        Ok(l?.first_mismatch(&r?, None).map(|m| FirstMismatch {
            exponent: m.exponent.to_string(),
            lhs: rational_to_string(&m.lhs),
            rhs: rational_to_string(&m.rhs),
        }))
    }

    fn scan(&self, spec: &CheckSpec, n_max: i64) -> Result<Option<FirstMismatch>> {
        let modulus = spec.modulus.expect("congruence has a modulus");
        let series = self.evaluator.evaluate(&spec.lhs, exp(n_max + 1))?;
        let reduced = series.reduce_mod(modulus)?;
        let prog = spec.progression.clone().unwrap_or_else(Progression::all);
        let mut first: Option<i64> = None;
        for &r in &prog.residues {
            if let Some((n, _)) = reduced.first_nonzero_on_progression(prog.m, r, n_max)? {
                first = Some(first.map_or(n, |f| f.min(n)));
            }
        }
        Ok(first.map(|n| FirstMismatch {
            exponent: n.to_string(),
            lhs: series.coefficient_int(n).map(|c| c.to_string()).unwrap_or_default(),
            rhs: format!("0 mod {modulus}"),
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn runner(src: &str) -> Runner {
        Runner::new(
            Registry::parse(src).unwrap(),
            RunConfig {
                prec: 30,
                n_max: 40,
                cheap_n_max: 60,
                threads: Some(2),
                cache: None,
            },
        )
    }

    #[test]
    fn identity_pass_and_fail() {
        let r = runner(
            "(identity A \"n\" (cphi 2) (/ (poch 2 4) (* (^ (poch 1 2) 4) (qq 4))))
             (identity B \"n\" (qq 1) (+ (qq 1) (* 3 (q 7))))",
        );
        let res = r.run_suite("*").unwrap();
        assert_eq!(res[0].status, Status::Pass);
        assert_eq!(res[0].prec, Some(30));
        assert_eq!(res[1].status, Status::Fail);
        let m = res[1].first_mismatch.as_ref().unwrap();
        assert_eq!((m.exponent.as_str(), m.lhs.as_str(), m.rhs.as_str()), ("7", "1", "4"));
    }

    #[test]
    fn congruence_reports_first_failure() {
        let r = runner(
            "(congruence R5 \"n\" (series (pgen 5 1)) (modulus 5) (cheap))
             (congruence P \"n\" (series (/ 1 (qq 1))) (modulus 2) (progression 5 3 1))",
        );
        let a = r.run_check("R5").unwrap();
        assert_eq!((a.status, a.n_max), (Status::Pass, Some(60)));
        let b = r.run_check("P").unwrap();
        // p(1) = 1 is odd; offsets are scanned together.
        assert_eq!(b.first_mismatch.unwrap().exponent, "1");
        assert!(matches!(r.run_check("Z"), Err(Error::UnknownId(_))));
        assert!(matches!(r.run_suite("Z*"), Err(Error::UnknownId(_))));
    }

    #[test]
    fn leading_terms_and_errors() {
        let r = runner(
            "(leading L \"n\" (prec 3) (fgh f 5) (+ 1 (* 25 (q 1)) (* 150 (q 2))))
             (identity E \"n\" (qq 1) (undefined-thing 3))",
        );
        let res = r.run_suite("*").unwrap();
        assert_eq!((res[0].status, res[0].prec), (Status::Pass, Some(3)));
        assert_eq!(res[1].status, Status::Error);
        assert!(res[1].message.is_some());
    }
}
