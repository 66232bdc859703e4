//! Rendering check results as JSON, CSV or a text table.

use std::fmt::Write as _;

use super::runner::{CheckResult, Status};
use crate::error::{Error, Result};

pub fn to_json(results: &[CheckResult]) -> Result<String> {
    serde_json::to_string_pretty(results).map_err(|e| Error::Io(e.to_string()))
}

pub fn to_csv(results: &[CheckResult]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record([
        "id",
        "kind",
        "status",
        "prec",
        "n_max",
        "mismatch_exponent",
        "mismatch_lhs",
        "mismatch_rhs",
        "message",
        "known_issue",
        "wall_time_ms",
    ])
    .map_err(io)?;
    for r in results {
        let opt = |v: Option<i64>| v.map(|n| n.to_string()).unwrap_or_default();
        let m = r.first_mismatch.as_ref();
        w.write_record([
            r.id.clone(),
            r.kind.as_str().to_string(),
            r.status.as_str().to_string(),
            opt(r.prec),
            opt(r.n_max),
            m.map(|m| m.exponent.clone()).unwrap_or_default(),
            m.map(|m| m.lhs.clone()).unwrap_or_default(),
            m.map(|m| m.rhs.clone()).unwrap_or_default(),
            r.message.clone().unwrap_or_default(),
            r.known_issue.clone().unwrap_or_default(),
            format!("{:.1}", r.wall_time_ms),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn shorten(s: &str, max: usize) -> String {
    if s.chars().count() <= max {
        s.to_string()
    } else {
        let head: String = s.chars().take(max - 3).collect();
        format!("{head}...")
    }
}

/// One row per check plus a summary line.
pub fn to_text(results: &[CheckResult]) -> String {
    let id_w = results.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
    let mut out = String::new();
    let _ = writeln!(out, "{:id_w$}  {:6}  {:>10}  {:>9}  detail", "id", "status", "bound", "time");
    for r in results {
        let bound = match (r.prec, r.n_max) {
            (Some(p), _) => format!("prec {p}"),
            (_, Some(n)) => format!("n<={n}"),
            _ => String::new(),
        };
        let detail = match (&r.first_mismatch, &r.message) {
            (Some(m), _) => format!("q^{}: {} vs {}", m.exponent, shorten(&m.lhs, 30), shorten(&m.rhs, 30)),
            (None, Some(msg)) => shorten(msg, 70),
            _ => String::new(),
        };
        let detail = match &r.known_issue {
            Some(k) if r.status != Status::Pass => format!("{detail} [known issue: {k}]"),
            _ => detail,
        };
        let time = format!("{:.2}s", r.wall_time_ms / 1e3);
        let _ = writeln!(
            out,
            "{:id_w$}  {:6}  {:>10}  {:>9}  {}",
            r.id,
            r.status.as_str().to_uppercase(),
            bound,
            time,
            detail.trim_end()
        );
    }
    let count = |s| results.iter().filter(|r| r.status == s).count();
    let _ = writeln!(
        out,
        "{} checks: {} pass, {} fail, {} error",
        results.len(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Error)
    );
    out
}
