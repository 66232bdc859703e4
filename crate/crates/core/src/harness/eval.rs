//! Evaluation of registry expressions into series.
//!
//! Every node is evaluated at a requested precision `P`. Operators that lose
//! precision (division by a series of positive valuation, products with
//! negative-valuation factors) may return less than `P`; [`Evaluator::evaluate`]
//! then retries at a higher precision until the target is met.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::expr::Expr;
use crate::builders::{self, EisensteinKind, Fgh, TwistSide};
use crate::engine::{self, ThetaMethod};
use crate::error::{Error, Result};
use crate::frobenius::overline_via_mobius;
use crate::series::{exp, Exponent, PuiseuxSeries};

const MAX_ATTEMPTS: usize = 8;

#[derive(Clone, Debug)]
pub enum Value {
    Num(BigRational),
    Series(PuiseuxSeries),
}

impl Value {
    fn into_series(self, prec: Exponent) -> PuiseuxSeries {
        match self {
            Value::Num(c) => PuiseuxSeries::constant(c, prec),
            Value::Series(s) => s,
        }
    }
}

/// On-disk store of builder outputs, one text file per (builder, parameters, precision).
#[derive(Clone, Debug)]
pub struct DiskCache {
    pub dir: PathBuf,
    /// Recompute on every hit and fail if the stored series differs.
    pub verify: bool,
}

impl DiskCache {
    fn path(&self, key: &str) -> PathBuf {
        let name: String = key
            .chars()
            .map(|c| match c {
                'a'..='z' | 'A'..='Z' | '0'..='9' | '-' | '.' => c,
                '/' => '~',
                _ => '_',
            })
            .collect();
        self.dir.join(format!("{name}.series"))
    }

    fn load(&self, key: &str) -> Result<Option<PuiseuxSeries>> {
        let path = self.path(key);
        match std::fs::read_to_string(&path) {
            Ok(text) => {
                let (stored_key, body) = text.split_once('\n').unwrap_or(("", ""));
                if stored_key != key {
                    return Ok(None);
                }
                Ok(Some(PuiseuxSeries::from_text(body)?))
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    fn store(&self, key: &str, s: &PuiseuxSeries) -> Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let tmp = self.path(key).with_extension(format!("tmp{}", std::process::id()));
        std::fs::write(&tmp, format!("{key}\n{}", s.to_text()))?;
        std::fs::rename(tmp, self.path(key))?;
        Ok(())
    }
}

type Env = Vec<(String, BigRational)>;

// One slot per key; a thread computing a key holds its slot so that others
// asking for the same key wait instead of recomputing.
type Slot = Arc<Mutex<Option<Arc<PuiseuxSeries>>>>;

/// Evaluates expressions against a set of named definitions, memoizing
/// builder calls and definitions by canonical text and precision.
pub struct Evaluator {
    defs: HashMap<String, Expr>,
    memo: Mutex<HashMap<String, Slot>>,
    disk: Option<DiskCache>,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self::new(HashMap::new())
    }
}

fn num_arg(v: Value, what: &str) -> Result<BigRational> {
    match v {
        Value::Num(n) => Ok(n),
        Value::Series(_) => Err(Error::Parse(format!("{what}: expected a number, got a series"))),
    }
}

fn to_i64(n: &BigRational, what: &str) -> Result<i64> {
    if !n.is_integer() {
        return Err(Error::Parse(format!("{what}: expected an integer, got {n}")));
    }
    n.to_integer()
        .to_i64()
        .ok_or_else(|| Error::Parse(format!("{what}: {n} out of range")))
}

fn to_exponent(n: &BigRational, what: &str) -> Result<Exponent> {
    let (a, b) = (n.numer().to_i64(), n.denom().to_i64());
    match (a, b) {
        (Some(a), Some(b)) => Ok(Exponent::new(a, b)),
        _ => Err(Error::Parse(format!("{what}: {n} out of range"))),
    }
}

fn rat_pow(c: &BigRational, e: i64) -> Result<BigRational> {
    if e < 0 && c.is_zero() {
        return Err(Error::InvalidInput("zero to a negative power".into()));
    }
    let p = num_traits::pow(c.clone(), e.unsigned_abs() as usize);
    Ok(if e < 0 { p.recip() } else { p })
}

impl Evaluator {
    pub fn new(defs: HashMap<String, Expr>) -> Self {
        Self {
            defs,
            memo: Mutex::new(HashMap::new()),
            disk: None,
        }
    }

    pub fn with_disk_cache(mut self, cache: Option<DiskCache>) -> Self {
        self.disk = cache;
        self
    }

    pub fn defs(&self) -> &HashMap<String, Expr> {
        &self.defs
    }

    /// Evaluate to exactly `target`, raising the working precision as needed.
    pub fn evaluate(&self, expr: &Expr, target: Exponent) -> Result<PuiseuxSeries> {
        let mut work = target;
        for _ in 0..MAX_ATTEMPTS {
            let got = self.eval(expr, work, &mut Vec::new())?.into_series(target);
            if got.prec() >= target {
                return Ok(got.truncate(target));
            }
            let deficit = target - got.prec();
            work += deficit.max(Exponent::one());
        }
        Err(Error::InvalidInput(format!(
            "could not reach precision {target} for {expr} (precision loss keeps growing)"
        )))
    }

    /// Evaluate a numeric expression (no series leaves).
    pub fn evaluate_number(&self, expr: &Expr) -> Result<BigRational> {
        num_arg(self.eval(expr, Exponent::one(), &mut Vec::new())?, "expression")
    }

    fn memoized<F>(&self, key: String, persist: bool, compute: F) -> Result<Arc<PuiseuxSeries>>
    where
        F: FnOnce() -> Result<PuiseuxSeries>,
    {
        let slot = self.memo.lock().unwrap().entry(key.clone()).or_default().clone();
        let mut slot = slot.lock().unwrap();
        if let Some(hit) = slot.as_ref() {
            return Ok(hit.clone());
        }
        let disk = self.disk.as_ref().filter(|_| persist);
        let value = match disk.map(|d| d.load(&key)).transpose()?.flatten() {
            Some(stored) if disk.is_some_and(|d| d.verify) => {
                let fresh = compute()?;
                if fresh != stored {
                    return Err(Error::InvalidInput(format!("cache entry for {key} differs from recomputation")));
                }
                fresh
            }
            Some(stored) => stored,
            None => {
                let fresh = compute()?;
                if let Some(d) = disk {
                    d.store(&key, &fresh)?;
                }
                fresh
            }
        };
        let value = Arc::new(value);
        *slot = Some(value.clone());
        Ok(value)
    }

    fn eval(&self, expr: &Expr, prec: Exponent, env: &mut Env) -> Result<Value> {
        match expr {
            Expr::Num(n) => Ok(Value::Num(n.clone())),
            Expr::Str(s) => Err(Error::Parse(format!("unexpected string {s:?} in expression"))),
            Expr::Sym(name) => {
                if let Some((_, v)) = env.iter().rev().find(|(k, _)| k == name) {
                    return Ok(Value::Num(v.clone()));
                }
                let body = self
                    .defs
                    .get(name)
                    .ok_or_else(|| Error::Parse(format!("unknown name `{name}`")))?;
                let key = format!("def {body} @ {prec}");
                let v = self.memoized(key, false, || Ok(self.eval(body, prec, &mut Vec::new())?.into_series(prec)))?;
                Ok(Value::Series((*v).clone()))
            }
            Expr::List(items) => {
                let head = items
                    .first()
                    .and_then(Expr::sym)
                    .ok_or_else(|| Error::Parse(format!("expected an operator at the head of {expr}")))?;
                self.eval_form(head, &items[1..], expr, prec, env)
            }
        }
    }

    fn eval_num(&self, e: &Expr, env: &mut Env, what: &str) -> Result<BigRational> {
        num_arg(self.eval(e, Exponent::one(), env)?, what)
    }

    fn eval_form(&self, head: &str, args: &[Expr], whole: &Expr, prec: Exponent, env: &mut Env) -> Result<Value> {
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!("`{head}` takes {n} arguments: {whole}")))
            }
        };
        match head {
            "+" | "*" => {
                let mut acc: Option<Value> = None;
                for a in args {
                    let v = self.eval(a, prec, env)?;
                    acc = Some(match acc {
                        None => v,
                        Some(prev) => combine(head, prev, v),
                    });
                }
                Ok(acc.unwrap_or(Value::Num(if head == "+" { BigRational::zero() } else { BigRational::one() })))
            }
            "-" => {
                let first = self.eval(args.first().ok_or_else(|| Error::Parse("empty `-`".into()))?, prec, env)?;
                if args.len() == 1 {
                    return Ok(combine("*", Value::Num(-BigRational::one()), first));
                }
                let mut acc = first;
                for a in &args[1..] {
                    let v = combine("*", Value::Num(-BigRational::one()), self.eval(a, prec, env)?);
                    acc = combine("+", acc, v);
                }
                Ok(acc)
            }
            "/" => {
                arity(2)?;
                let num = self.eval(&args[0], prec, env)?;
                match self.eval(&args[1], prec, env)? {
                    Value::Num(d) => {
                        if d.is_zero() {
                            return Err(Error::InvalidInput(format!("division by zero in {whole}")));
                        }
                        Ok(combine("*", Value::Num(d.recip()), num))
                    }
                    Value::Series(d) => Ok(combine("*", num, Value::Series(d.invert()?))),
                }
            }
            "^" => {
                arity(2)?;
                let e = to_i64(&self.eval_num(&args[1], env, "exponent")?, "exponent")?;
                match self.eval(&args[0], prec, env)? {
                    Value::Num(c) => Ok(Value::Num(rat_pow(&c, e)?)),
                    Value::Series(s) => Ok(Value::Series(s.pow(e)?)),
                }
            }
            "subst" => {
                arity(2)?;
                let r = to_exponent(&self.eval_num(&args[1], env, "subst power")?, "subst power")?;
                if r <= Exponent::zero() {
                    return Err(Error::InvalidInput(format!("subst power must be positive in {whole}")));
                }
                self.map_series(&args[0], prec / r, env, |s| s.substitute_power(r))
            }
            "dissect" => {
                arity(3)?;
                let m = to_i64(&self.eval_num(&args[1], env, "dissect modulus")?, "dissect modulus")?;
                let r = to_i64(&self.eval_num(&args[2], env, "dissect residue")?, "dissect residue")?;
                self.map_series(&args[0], prec * m + r, env, |s| s.dissect(m, r))
            }
            "shift" => {
                arity(2)?;
                let e = to_exponent(&self.eval_num(&args[1], env, "shift")?, "shift")?;
                self.map_series(&args[0], prec - e, env, |s| Ok(s.shift(e)))
            }
            "alt" => {
                arity(1)?;
                self.map_series(&args[0], prec, env, |s| s.alternate_sign())
            }
            "sum" => {
                arity(4)?;
                let var = args[0]
                    .sym()
                    .ok_or_else(|| Error::Parse(format!("`sum` needs a variable name: {whole}")))?
                    .to_string();
                let lo = to_i64(&self.eval_num(&args[1], env, "sum bound")?, "sum bound")?;
                let hi = to_i64(&self.eval_num(&args[2], env, "sum bound")?, "sum bound")?;
                let mut acc = Value::Num(BigRational::zero());
                for i in lo..=hi {
                    env.push((var.clone(), BigRational::from_integer(i.into())));
                    let v = self.eval(&args[3], prec, env);
                    env.pop();
                    acc = combine("+", acc, v?);
                }
                Ok(acc)
            }
            "q" => {
                arity(1)?;
                let e = to_exponent(&self.eval_num(&args[0], env, "q exponent")?, "q exponent")?;
                Ok(Value::Series(PuiseuxSeries::monomial(BigRational::one(), e, prec)))
            }
            _ => {
                let params = args
                    .iter()
                    .map(|a| match a.sym() {
                        Some(s) if is_selector(head, s) => Ok(BigRational::zero()),
                        _ => self.eval_num(a, env, head),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let canonical = canonical_leaf(head, args, &params);
                let key = format!("{canonical} @ {prec}");
                let s = self.memoized(key, true, || self.leaf(head, &params, args, whole, prec))?;
                Ok(Value::Series((*s).clone()))
            }
        }
    }

    fn map_series<F>(&self, child: &Expr, child_prec: Exponent, env: &mut Env, f: F) -> Result<Value>
    where
        F: FnOnce(PuiseuxSeries) -> Result<PuiseuxSeries>,
    {
        match self.eval(child, child_prec, env)? {
            Value::Num(c) => Ok(Value::Num(c)),
            Value::Series(s) => Ok(Value::Series(f(s)?)),
        }
    }

    fn leaf(&self, head: &str, p: &[BigRational], raw: &[Expr], whole: &Expr, prec: Exponent) -> Result<PuiseuxSeries> {
        let n = |want: usize| -> Result<()> {
            if p.len() == want {
                Ok(())
            } else {
                Err(Error::Parse(format!("`{head}` takes {want} arguments: {whole}")))
            }
        };
        let int = |i: usize| to_i64(&p[i], head);
        let ex = |i: usize| to_exponent(&p[i], head);
        let size = |i: usize| -> Result<usize> {
            usize::try_from(int(i)?).map_err(|_| Error::InvalidInput(format!("`{head}` needs a nonnegative size")))
        };
        match head {
            "qq" => {
                n(1)?;
                builders::pochhammer(ex(0)?, ex(0)?, false, prec)
            }
            "poch" | "pochp" => {
                n(2)?;
                builders::pochhammer(ex(0)?, ex(1)?, head == "pochp", prec)
            }
            "eta" => {
                if p.is_empty() || p.len() % 2 != 0 {
                    return Err(Error::Parse(format!("`eta` takes (r e) pairs: {whole}")));
                }
                let pairs = (0..p.len() / 2).map(|i| Ok((int(2 * i)?, int(2 * i + 1)?))).collect::<Result<Vec<_>>>()?;
                builders::eta_quotient(&pairs, prec)
            }
            "t3" | "t2" => {
                n(1)?;
                builders::theta(if head == "t3" { 3 } else { 2 }, ex(0)?, prec)
            }
            "jf" => {
                n(2)?;
                builders::jacobi_f(ex(0)?, ex(1)?, prec)
            }
            "geta" => {
                n(2)?;
                builders::gen_eta(int(0)?, int(1)?, prec)
            }
            "e2" | "e4" => {
                n(1)?;
                let kind = if head == "e2" { EisensteinKind::E2 } else { EisensteinKind::E4 };
                builders::eisenstein(kind, int(0)?, prec)
            }
            "twist" => {
                if raw.len() != 3 {
                    return Err(Error::Parse(format!("`twist` takes (w d side): {whole}")));
                }
                let side = match raw[2].sym() {
                    Some("cofactor") => TwistSide::PowerOnCofactor,
                    Some("divisor") => TwistSide::PowerOnDivisor,
                    Some("index") => TwistSide::CharacterOnIndex,
                    _ => return Err(Error::Parse(format!("twist side must be cofactor, divisor or index: {whole}"))),
                };
                let w = u32::try_from(int(0)?).map_err(|_| Error::InvalidInput("twist weight must be >= 0".into()))?;
                builders::twisted_eisenstein(w, int(1)?, side, prec)
            }
            "lambert" => {
                n(3)?;
                let a = u32::try_from(int(1)?).map_err(|_| Error::InvalidInput("lambert power must be >= 0".into()))?;
                builders::lambert(int(0)?, a, size(2)?, prec)
            }
            "pgen" => {
                n(2)?;
                builders::partition_progression(int(0)?, int(1)?, prec)
            }
            "psum" => {
                n(0)?;
                Ok(builders::partition_series(prec))
            }
            "fgh" => {
                if raw.len() != 2 {
                    return Err(Error::Parse(format!("`fgh` takes (f|g|h l): {whole}")));
                }
                let which = match raw[0].sym() {
                    Some("f") => Fgh::F,
                    Some("g") => Fgh::G,
                    Some("h") => Fgh::H,
                    _ => return Err(Error::Parse(format!("fgh selector must be f, g or h: {whole}"))),
                };
                builders::fgh_ell(which, int(1)?, prec)
            }
            "cphi" => {
                n(1)?;
                engine::cphi_series(size(0)?, prec)
            }
            "atheta" => {
                n(1)?;
                engine::frobenius_theta(size(0)?, prec, ThetaMethod::ConstantTerm)
            }
            "dual" => {
                n(1)?;
                engine::dual_theta(int(0)?, prec)
            }
            "bqf" => {
                n(3)?;
                engine::binary_qf_theta(int(0)?, int(1)?, int(2)?, prec)
            }
            "overline" => {
                n(1)?;
                self.overline(int(0)?, prec)
            }
            _ => Err(Error::Parse(format!("unknown operator or builder `{head}` in {whole}"))),
        }
    }

    /// Generating function of order-`k` symbols, coefficientwise from the
    /// Möbius relation over engine values of `CPhi_{k/d}`.
    fn overline(&self, k: i64, prec: Exponent) -> Result<PuiseuxSeries> {
        if k < 1 {
            return Err(Error::InvalidInput(format!("overline needs k >= 1, got {k}")));
        }
        let limit = crate::series::index_limit(prec, 1).max(0);
        let mut tables: HashMap<u64, Vec<BigInt>> = HashMap::new();
        for d in crate::arith::divisors(k as u64) {
            let j = k as u64 / d;
            let key = format!("(cphi {j}) @ {}", exp(limit));
            let s = self.memoized(key, true, || engine::cphi_series(j as usize, exp(limit)))?;
            tables.insert(j, s.int_coeffs(limit as usize)?);
        }
        let mut coeffs = Vec::with_capacity(limit as usize);
        for m in 0..limit {
            let c = overline_via_mobius(k as u64, m, |j, i| Ok(tables[&j][i as usize].clone()))?;
            coeffs.push((m, BigRational::from_integer(c)));
        }
        PuiseuxSeries::new(1, prec, coeffs)
    }
}

fn is_selector(head: &str, s: &str) -> bool {
    matches!((head, s), ("twist", "cofactor" | "divisor" | "index") | ("fgh", "f" | "g" | "h"))
}

fn canonical_leaf(head: &str, raw: &[Expr], params: &[BigRational]) -> String {
    let mut out = format!("({head}");
    for (r, p) in raw.iter().zip(params) {
        out.push(' ');
        match r.sym() {
            Some(s) if is_selector(head, s) => out.push_str(s),
            _ => out.push_str(&Expr::Num(p.clone()).to_string()),
        }
    }
    out.push(')');
    out
}

fn combine(op: &str, a: Value, b: Value) -> Value {
    use Value::*;
    match (op, a, b) {
        ("+", Num(x), Num(y)) => Num(x + y),
        ("*", Num(x), Num(y)) => Num(x * y),
        ("+", Num(c), Series(s)) | ("+", Series(s), Num(c)) => {
            let p = s.prec();
            Series(s.add(&PuiseuxSeries::constant(c, p)))
        }
        ("*", Num(c), Series(s)) | ("*", Series(s), Num(c)) => Series(s.scalar_mul(&c)),
        ("+", Series(x), Series(y)) => Series(x.add(&y)),
        (_, Series(x), Series(y)) => Series(x.mul(&y)),
        _ => unreachable!("combine only handles + and *"),
    }
}

/// Decimal text; integers print without a denominator.
pub fn rational_to_string(c: &BigRational) -> String {
    Expr::Num(c.clone()).to_string()
}
