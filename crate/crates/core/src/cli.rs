//! The `cphi` command line: compute values, enumerate symbols, run checks.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::engine::{self, refined_cphi_ct, ThetaMethod};
use crate::error::{Error, Result};
use crate::frobenius::{enumerate_symbols, refined_counts};
use crate::harness::report;
use crate::harness::{DiskCache, Registry, RunConfig, Runner, Status};
use crate::series::{exp, PuiseuxSeries};

/// Environment variable naming the series cache directory.
pub const CACHE_ENV: &str = "CPHI_CACHE_DIR";

/// Largest number of symbols `enumerate` (and `compute --method enumerate`) will list.
pub const ENUMERATION_LIMIT: u128 = 200_000;

#[derive(Parser, Debug)]
#[command(name = "cphi", version, about = "Colored generalized Frobenius partitions: counts, symbols and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print cphi_k(n), or the series CPhi_k to a precision.
    Compute(ComputeArgs),
    /// List the k-colored symbols of weight n with their order and color difference.
    Enumerate(EnumerateArgs),
    /// Run identity and congruence checks from the built-in registry or a file.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Constant-term dynamic programme.
    Ct,
    /// Direct lattice enumeration.
    Lattice,
    /// Count the symbols one by one.
    Enumerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[arg(long)]
    pub k: u32,
    /// Weight; required unless --series is given.
    #[arg(long, required_unless_present = "series")]
    pub n: Option<u32>,
    /// Print the series below q^PREC instead of one coefficient.
    #[arg(long)]
    pub series: bool,
    #[arg(long, default_value_t = 20)]
    pub prec: u32,
    #[arg(long, value_enum, default_value_t = Method::Ct)]
    pub method: Method,
    /// Split cphi_k(n) by color difference.
    #[arg(long, conflicts_with = "series")]
    pub refined: bool,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub n: u32,
    /// Print the color-difference histogram and order counts instead of the symbols.
    #[arg(long)]
    pub refined: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Check id or shell-style pattern such as `CPHI5-*`; repeatable.
    #[arg(long = "id", required_unless_present_any = ["all", "list"])]
    pub ids: Vec<String>,
    #[arg(long, conflicts_with = "ids")]
    pub all: bool,
    /// Print the selected ids and notes without running them.
    #[arg(long)]
    pub list: bool,
    /// Read checks from this file instead of the built-in registry.
    #[arg(long)]
    pub registry: Option<PathBuf>,
    #[command(flatten)]
    pub config: CliConfig,
}

#[derive(Args, Debug, Clone)]
pub struct CliConfig {
    /// Series precision for identities.
    #[arg(long, default_value_t = 120, value_parser = clap::value_parser!(u32).range(10..))]
    pub prec: u32,
    /// Scan bound for congruences.
    #[arg(long = "n-max", default_value_t = 400, value_parser = clap::value_parser!(u32).range(1..))]
    pub n_max: u32,
    /// Scan bound for congruences marked cheap.
    #[arg(long = "cheap-n-max", default_value_t = 2000, value_parser = clap::value_parser!(u32).range(1..))]
    pub cheap_n_max: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Directory for cached builder outputs; defaults to $CPHI_CACHE_DIR.
    #[arg(long = "cache-dir")]
    pub cache_dir: Option<PathBuf>,
    /// Recompute every cache hit and fail if it differs.
    #[arg(long = "verify-cache")]
    pub verify_cache: bool,
}

impl CliConfig {
    pub fn run_config(&self) -> RunConfig {
        let dir = self.cache_dir.clone().or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
        RunConfig {
            prec: self.prec as i64,
            n_max: self.n_max as i64,
            cheap_n_max: self.cheap_n_max as i64,
            threads: self.threads,
            cache: dir.map(|dir| DiskCache {
                dir,
                verify: self.verify_cache,
            }),
        }
    }
}

fn series_by(k: u32, prec: u32, method: Method) -> Result<PuiseuxSeries> {
    let p = exp(prec as i64);
    match method {
        Method::Ct => engine::cphi_series(k as usize, p),
        Method::Lattice if k == 1 => engine::cphi_series(1, p),
        Method::Lattice => {
            let qq_inv = crate::builders::pochhammer(exp(1), exp(1), false, p)?.pow(-(k as i64))?;
            Ok(engine::frobenius_theta(k as usize, p, ThetaMethod::Lattice)?.mul(&qq_inv))
        }
        Method::Enumerate => {
            let coeffs = (0..prec).map(|n| enumerate_count(k, n)).collect::<Result<Vec<_>>>()?;
            let terms = coeffs
                .into_iter()
                .enumerate()
                .map(|(i, c)| (i as i64, num_rational::BigRational::from_integer(c.into())));
            PuiseuxSeries::new(1, p, terms)
        }
    }
}

fn guard(k: u32, n: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let size = engine::cphi(k as usize, n as i64)?;
    if size > ENUMERATION_LIMIT.into() {
        return Err(Error::InvalidInput(format!(
            "refusing to enumerate {size} symbols (limit {ENUMERATION_LIMIT}); use --method ct or a smaller n"
        )));
    }
    Ok(())
}

fn enumerate_count(k: u32, n: u32) -> Result<u128> {
    guard(k, n)?;
    Ok(enumerate_symbols(k, n).len() as u128)
}

fn cmd_compute(a: &ComputeArgs, out: &mut dyn Write) -> Result<()> {
    if a.k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if a.series {
        let s = series_by(a.k, a.prec, a.method)?;
        let coeffs = s.int_coeffs(a.prec as usize)?;
        for (n, c) in coeffs.iter().enumerate() {
            writeln!(out, "{n} {c}")?;
        }
        return Ok(());
    }
    let n = a.n.expect("clap enforces --n without --series");
    if a.refined {
        let row = match a.method {
            Method::Enumerate => {
                guard(a.k, n)?;
                refined_counts(a.k, n).by_difference.into_iter().collect()
            }
            _ => refined_cphi_ct(a.k as usize, n)?.row(n),
        };
        writeln!(out, "{}", histogram(&row))?;
        return Ok(());
    }
    let value = match a.method {
        Method::Enumerate => enumerate_count(a.k, n)?.into(),
        m => series_by(a.k, n + 1, m)?.coefficient_int(n as i64)?,
    };
    writeln!(out, "{value}")?;
    Ok(())
}

fn histogram(row: &[(i64, u128)]) -> String {
    let items: Vec<String> = row.iter().map(|(m, c)| format!("{m}:{c}")).collect();
    format!("{{{}}}", items.join(", "))
}

fn cmd_enumerate(a: &EnumerateArgs, out: &mut dyn Write) -> Result<()> {
    guard(a.k, a.n)?;
    if a.refined {
        let rc = refined_counts(a.k, a.n);
        let row: Vec<_> = rc.by_difference.into_iter().collect();
        writeln!(out, "m-histogram {}", histogram(&row))?;
        let orders: Vec<_> = rc.by_order.iter().map(|(l, c)| format!("{l}:{c}")).collect();
        writeln!(out, "order counts {{{}}}", orders.join(", "))?;
        writeln!(out, "total {}", rc.total)?;
        return Ok(());
    }
    for s in enumerate_symbols(a.k, a.n) {
        writeln!(out, "{s}  order={} m={}", s.order(), s.color_difference())?;
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<bool> {
    let registry = match &a.registry {
        Some(path) => Registry::parse(&std::fs::read_to_string(path)?)?,
        None => Registry::builtin(),
    };
    let runner = Runner::new(registry, a.config.run_config());
    let patterns = if a.all || a.ids.is_empty() { vec!["*".to_string()] } else { a.ids.clone() };
    let unknown: Vec<_> = patterns
        .iter()
        .filter(|p| runner.registry().select(p).map_or(true, |v| v.is_empty()))
        .cloned()
        .collect();
    if !unknown.is_empty() {
        return Err(Error::UnknownId(unknown.join(", ")));
    }
    let mut specs = Vec::new();
    for p in &patterns {
        for s in runner.registry().select(p)? {
            if !specs.iter().any(|x: &&crate::harness::CheckSpec| x.id == s.id) {
                specs.push(s);
            }
        }
    }
    if a.list {
        for s in &specs {
            writeln!(out, "{:24} {:16} {}", s.id, s.kind.as_str(), s.note)?;
        }
        return Ok(true);
    }
    // Keep registry order regardless of the order patterns were given in.
    let order: Vec<_> = runner.registry().checks.iter().map(|c| c.id.as_str()).collect();
    specs.sort_by_key(|s| order.iter().position(|id| *id == s.id));
    let results = runner.run_specs(&specs)?;
    let text = match a.config.format {
        Format::Text => report::to_text(&results),
        Format::Json => report::to_json(&results)? + "\n",
        Format::Csv => report::to_csv(&results)?,
    };
    out.write_all(text.as_bytes())?;
    Ok(results.iter().all(|r| r.status == Status::Pass))
}

/// Parse `args` (including the program name), run, and return the exit code:
/// 0 when everything passed, 1 when a check failed, 2 on usage errors and unknown ids.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Compute(a) => cmd_compute(a, out).map(|_| true),
        Command::Enumerate(a) => cmd_enumerate(a, out).map(|_| true),
        Command::Verify(a) => cmd_verify(a, out),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::UnknownId(_) | Error::InvalidInput(_) | Error::Parse(_) => 2,
                _ => 1,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("cphi").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
    }

    #[test]
    fn compute_values() {
        assert_eq!(call(&["compute", "--k", "2", "--n", "2"]), (0, "9\n".into()));
        assert_eq!(call(&["compute", "--k", "1", "--n", "4"]), (0, "5\n".into()));
        assert_eq!(call(&["compute", "--k", "5", "--n", "1", "--method", "enumerate"]), (0, "25\n".into()));
        assert_eq!(call(&["compute", "--k", "3", "--n", "4", "--method", "lattice"]).1, call(&["compute", "--k", "3", "--n", "4"]).1);
        let (code, text) = call(&["compute", "--k", "2", "--series", "--prec", "4"]);
        assert_eq!((code, text.as_str()), (0, "0 1\n1 4\n2 9\n3 20\n"));
    }

    #[test]
    fn refined_rows() {
        assert_eq!(call(&["compute", "--k", "2", "--n", "2", "--refined"]).1, "{-1:2, 0:5, 1:2}\n");
        let (_, text) = call(&["enumerate", "--k", "2", "--n", "2", "--refined"]);
        assert!(text.starts_with("m-histogram {-1:2, 0:5, 1:2}\n"));
    }

    #[test]
    fn enumerate_rows() {
        let (code, text) = call(&["enumerate", "--k", "2", "--n", "2"]);
        assert_eq!(code, 0);
        assert_eq!(text.lines().count(), 9);
        assert_eq!(text.lines().filter(|l| l.contains("order=1 ")).count(), 1);
        assert_eq!(call(&["enumerate", "--k", "1", "--n", "0"]).1.lines().count(), 1);
    }

    #[test]
    fn guards_and_usage() {
        let (code, text) = call(&["enumerate", "--k", "9", "--n", "12"]);
        assert_eq!(code, 2);
        assert!(text.contains("--method ct"));
        assert_eq!(call(&["compute", "--k", "2"]).0, 2);
        assert_eq!(call(&["verify", "--id", "NOPE"]).0, 2);
        assert_eq!(call(&["verify", "--id", "RAMA5", "--prec", "5"]).0, 2);
    }

    #[test]
    fn verify_exit_codes() {
        let (code, text) = call(&["verify", "--id", "CPHI5-PROD", "--prec", "30"]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("CPHI5-PROD") && text.contains("PASS"));
        let (code, text) = call(&["verify", "--id", "CPHI5-*", "--list"]);
        assert_eq!((code, text.lines().count()), (0, 4));
    }

    #[test]
    fn verify_from_file() {
        let path = std::env::temp_dir().join(format!("cphi-registry-{}.sexp", std::process::id()));
        std::fs::write(&path, "(identity T \"t\" (t3 1) (+ 1 (* 2 (q 1)) (* 2 (q 4)) (* 3 (q 9))))").unwrap();
        let (code, text) = call(&["verify", "--all", "--prec", "12", "--registry", path.to_str().unwrap()]);
        std::fs::remove_file(&path).unwrap();
        assert_eq!(code, 1);
        assert!(text.contains("q^9: 2 vs 3"), "{text}");
    }
}
