//! Truncated Laurent-Puiseux series in `q` with exact rational coefficients.
//!
//! A series stores exponents as integer indices on a per-series lattice
//! `q^(i/scale)` together with a truncation bound `prec` (in q-units): every
//! coefficient at an exponent `>= prec` is unknown. All operations propagate
//! that bound so results are never claimed beyond what the inputs determine.

mod kernel;
mod modular;
mod text;

pub use modular::ModSeries;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};

/// Exponents and precisions are rationals with machine-sized parts.
pub type Exponent = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxSeries {
    scale: i64,
    prec: Exponent,
    terms: Vec<(i64, BigRational)>,
}

/// First exponent at which two series disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub exponent: Exponent,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

/// Smallest index `n` such that `i/scale < prec` exactly when `i < n`.
pub(crate) fn index_limit(prec: Exponent, scale: i64) -> i64 {
    let num = *prec.numer() as i128 * scale as i128;
    let den = *prec.denom() as i128;
    Integer::div_ceil(&num, &den) as i64
}

pub(crate) fn exponent_of(index: i64, scale: i64) -> Exponent {
    Exponent::new(index, scale)
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl PuiseuxSeries {
    /// Builds a series from `(index, coefficient)` pairs on the lattice `1/scale`.
    /// Repeated indices are summed; terms at or beyond `prec` are dropped.
    pub fn new<I>(scale: i64, prec: Exponent, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        if scale <= 0 {
            return invalid(format!("scale must be positive, got {scale}"));
        }
        Ok(Self::assemble(scale, prec, terms.into_iter().collect()))
    }

    /// Integer coefficients `coeffs[n]` at `q^n`.
    pub fn from_coeffs(coeffs: &[i64], prec: Exponent) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(n, &c)| (n as i64, big(c)))
            .collect();
        Self::assemble(1, prec, terms)
    }

    pub fn zero(prec: Exponent) -> Self {
        Self::assemble(1, prec, Vec::new())
    }

    pub fn one(prec: Exponent) -> Self {
        Self::constant(BigRational::one(), prec)
    }

    pub fn constant(c: BigRational, prec: Exponent) -> Self {
        Self::assemble(1, prec, vec![(0, c)])
    }

    /// `c * q^exponent`.
    pub fn monomial(c: BigRational, exponent: Exponent, prec: Exponent) -> Self {
        Self::assemble(*exponent.denom(), prec, vec![(*exponent.numer(), c)])
    }

    /// Sorts, merges, drops zeros and out-of-range terms, then reduces the scale.
    pub(crate) fn assemble(scale: i64, prec: Exponent, mut terms: Vec<(i64, BigRational)>) -> Self {
        let limit = index_limit(prec, scale);
        terms.retain(|(i, c)| *i < limit && !c.is_zero());
        let sorted = terms.windows(2).all(|w| w[0].0 < w[1].0);
        if !sorted {
            terms.sort_by_key(|t| t.0);
            let mut merged: Vec<(i64, BigRational)> = Vec::with_capacity(terms.len());
            for (i, c) in terms {
                match merged.last_mut() {
                    Some((j, acc)) if *j == i => *acc += c,
                    _ => merged.push((i, c)),
                }
            }
            merged.retain(|(_, c)| !c.is_zero());
            terms = merged;
        }
        let mut s = Self { scale, prec, terms };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if self.terms.is_empty() {
            self.scale = 1;
            return;
        }
        let g = self
            .terms
            .iter()
            .fold(self.scale, |g, (i, _)| g.gcd(i));
        if g > 1 {
            self.scale /= g;
            for (i, _) in &mut self.terms {
                *i /= g;
            }
        }
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn prec(&self) -> Exponent {
        self.prec
    }

    /// Least stored index (0 for the zero series).
    pub fn lo(&self) -> i64 {
        self.terms.first().map_or(0, |t| t.0)
    }

    /// Least exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<Exponent> {
        self.terms.first().map(|t| exponent_of(t.0, self.scale))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &BigRational)> + '_ {
        self.terms.iter().map(|(i, c)| (exponent_of(*i, self.scale), c))
    }

    pub(crate) fn raw_terms(&self) -> &[(i64, BigRational)] {
        &self.terms
    }

    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    /// Coefficient of `q^e`; errors when `e` is not below the precision.
    pub fn coefficient(&self, e: Exponent) -> Result<BigRational> {
        if e >= self.prec {
            return Err(Error::OutOfPrecision {
                exponent: e,
                prec: self.prec,
            });
        }
        let scaled = e * self.scale;
        if !scaled.is_integer() {
            return Ok(BigRational::zero());
        }
        let idx = scaled.to_integer();
        Ok(match self.terms.binary_search_by_key(&idx, |t| t.0) {
            Ok(pos) => self.terms[pos].1.clone(),
            Err(_) => BigRational::zero(),
        })
    }

    /// Integer coefficient of `q^n`.
    pub fn coefficient_int(&self, n: i64) -> Result<BigInt> {
        let c = self.coefficient(Exponent::from_integer(n))?;
        if !c.is_integer() {
            return invalid(format!("coefficient of q^{n} is not an integer: {c}"));
        }
        Ok(c.to_integer())
    }

    /// Lowers the precision to `prec` (never raises it).
    pub fn truncate(&self, prec: Exponent) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::assemble(self.scale, prec, self.terms.clone())
    }

    fn rescaled_terms(&self, scale: i64) -> Vec<(i64, BigRational)> {
        let f = scale / self.scale;
        self.terms.iter().map(|(i, c)| (i * f, c.clone())).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let scale = self.scale.lcm(&other.scale);
        let prec = self.prec.min(other.prec);
        let a = self.rescaled_terms(scale);
        let b = other.rescaled_terms(scale);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut ia, mut ib) = (a.into_iter().peekable(), b.into_iter().peekable());
        loop {
            let ord = match (ia.peek(), ib.peek()) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => break,
            };
            match ord {
                Ordering::Less => out.push(ia.next().unwrap()),
                Ordering::Greater => out.push(ib.next().unwrap()),
                Ordering::Equal => {
                    let (i, x) = ia.next().unwrap();
                    let (_, y) = ib.next().unwrap();
                    let s = x + y;
                    if !s.is_zero() {
                        out.push((i, s));
                    }
                }
            }
        }
        Self::assemble(scale, prec, out)
    }

    pub fn neg(&self) -> Self {
        Self {
            scale: self.scale,
            prec: self.prec,
            terms: self.terms.iter().map(|(i, c)| (*i, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.prec);
        }
        Self {
            scale: self.scale,
            prec: self.prec,
            terms: self.terms.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    /// Multiplies by `q^e`; the precision moves with the series.
    pub fn shift(&self, e: Exponent) -> Self {
        let scale = self.scale.lcm(e.denom());
        let delta = (e * scale).to_integer();
        let terms = self
            .rescaled_terms(scale)
            .into_iter()
            .map(|(i, c)| (i + delta, c))
            .collect();
        Self::assemble(scale, self.prec + e, terms)
    }

    /// Valuation, or the precision when no term is known to be nonzero.
    fn order_bound(&self) -> Exponent {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = (self.prec + other.order_bound()).min(other.prec + self.order_bound());
        let scale = self.scale.lcm(&other.scale);
        if self.is_zero() || other.is_zero() {
            return Self::zero(prec);
        }
        let limit = index_limit(prec, scale);
        let (a, da) = kernel::integerize(&self.terms, scale / self.scale);
        let (b, db) = kernel::integerize(&other.terms, scale / other.scale);
        let prod = kernel::convolve(&a, &b, limit);
        let den = da * db;
        let terms = prod
            .into_iter()
            .map(|(i, c)| (i, BigRational::new(c, den.clone())))
            .collect();
        Self::assemble(scale, prec, terms)
    }

    /// Multiplicative inverse; the leading coefficient must be nonzero.
    pub fn invert(&self) -> Result<Self> {
        self.pow(-1)
    }

    /// Integer power. Negative powers require an invertible series.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let Some(&(v_idx, ref u0)) = self.terms.first() else {
            if e <= 0 {
                return invalid("cannot take a non-positive power of the zero series");
            }
            let p = self.prec;
            return Ok(Self::zero(p.min(p * e)));
        };
        let v = exponent_of(v_idx, self.scale);
        let rel_prec = self.prec - v;
        let out_v = v * e;
        let out_prec = out_v + rel_prec;
        let g = self.terms[1..]
            .iter()
            .fold(0i64, |g, (i, _)| g.gcd(&(i - v_idx)));
        if g == 0 {
            let c = pow_rational(u0, e);
            return Ok(Self::monomial(c, out_v, out_prec));
        }
        let n_rel = index_limit(rel_prec, self.scale);
        let count = if n_rel <= 0 { 0 } else { (n_rel + g - 1) / g };
        let u: Vec<(usize, &BigRational)> = self
            .terms
            .iter()
            .map(|(i, c)| (((i - v_idx) / g) as usize, c))
            .collect();
        let coeffs = kernel::miller_pow(&u, e, count as usize);
        let base = (out_v * self.scale).to_integer();
        let scale = self.scale;
        let terms = coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (base + n as i64 * g, c))
            .collect::<Vec<_>>();
        Ok(Self::assemble(scale, out_prec, terms))
    }

    /// The substitution `q -> q^r` for a positive rational `r`.
    pub fn substitute_power(&self, r: Exponent) -> Result<Self> {
        if r <= Exponent::zero() {
            return invalid(format!("substitution power must be positive, got {r}"));
        }
        let (rn, rd) = (*r.numer(), *r.denom());
        let scale = self.scale * rd;
        let terms = self.terms.iter().map(|(i, c)| (i * rn, c.clone())).collect();
        Ok(Self::assemble(scale, self.prec * r, terms))
    }

    fn require_integer_exponents(&self, what: &str) -> Result<()> {
        if self.scale != 1 {
            return invalid(format!(
                "{what} needs integer exponents, series has exponents in (1/{})Z",
                self.scale
            ));
        }
        Ok(())
    }

    /// `sum_n coeff(m n + r) q^n`.
    pub fn dissect(&self, m: i64, r: i64) -> Result<Self> {
        if m <= 0 || r < 0 || r >= m {
            return invalid(format!("dissection needs m > 0 and 0 <= r < m, got m={m}, r={r}"));
        }
        self.require_integer_exponents("dissection")?;
        let terms = self
            .terms
            .iter()
            .filter(|(i, _)| (i - r).rem_euclid(m) == 0)
            .map(|(i, c)| ((i - r).div_euclid(m), c.clone()))
            .collect();
        let prec = (self.prec - r) / m;
        Ok(Self::assemble(1, prec, terms))
    }

    /// `q -> -q`: the coefficient of `q^n` picks up `(-1)^n`.
    pub fn alternate_sign(&self) -> Result<Self> {
        self.require_integer_exponents("sign alternation")?;
        Ok(Self {
            scale: 1,
            prec: self.prec,
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (*i, if i.rem_euclid(2) == 1 { -c } else { c.clone() }))
                .collect(),
        })
    }

    pub fn reduce_mod(&self, modulus: u64) -> Result<ModSeries> {
        ModSeries::from_series(self, modulus)
    }

    /// Compares two series below `min(prec_a, prec_b, bound)`.
    pub fn first_mismatch(&self, other: &Self, bound: Option<Exponent>) -> Option<Mismatch> {
        let mut prec = self.prec.min(other.prec);
        if let Some(b) = bound {
            prec = prec.min(b);
        }
        let diff = self.sub(other).truncate(prec);
        let (i, _) = diff.terms.first()?;
        let e = exponent_of(*i, diff.scale);
        Some(Mismatch {
            exponent: e,
            lhs: self.coefficient(e).unwrap_or_default(),
            rhs: other.coefficient(e).unwrap_or_default(),
        })
    }

    /// Equality up to the common precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_mismatch(other, None).is_none()
    }

    pub fn to_text(&self) -> String {
        text::to_text(self)
    }

    pub fn from_text(s: &str) -> Result<Self> {
        text::from_text(s)
    }

    /// Integer coefficients at `q^0 .. q^(n-1)` (scale 1 series only).
    pub fn int_coeffs(&self, n: usize) -> Result<Vec<BigInt>> {
        (0..n as i64).map(|k| self.coefficient_int(k)).collect()
    }
}

pub(crate) fn pow_rational(c: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(c.clone(), e as usize)
    } else {
        num_traits::pow(c.recip(), (-e) as usize)
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            if e.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if !unit {
                write!(f, "{mag}*")?;
            }
            if e.is_one() {
                write!(f, "q")?;
            } else if e.is_integer() && e > Exponent::zero() {
                write!(f, "q^{e}")?;
            } else {
                write!(f, "q^({e})")?;
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        if self.prec.is_integer() {
            write!(f, "O(q^{})", self.prec)
        } else {
            write!(f, "O(q^({}))", self.prec)
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr<&PuiseuxSeries> for &PuiseuxSeries {
            type Output = PuiseuxSeries;
            fn $m(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
                PuiseuxSeries::$m(self, rhs)
            }
        }
        impl std::ops::$tr for PuiseuxSeries {
            type Output = PuiseuxSeries;
            fn $m(self, rhs: PuiseuxSeries) -> PuiseuxSeries {
                PuiseuxSeries::$m(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl std::ops::Neg for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        PuiseuxSeries::neg(self)
    }
}

impl std::ops::Neg for PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        PuiseuxSeries::neg(&self)
    }
}

/// Convenience for tests and builders: `n` as an exponent.
pub fn exp(n: i64) -> Exponent {
    Exponent::from_integer(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(coeffs: &[i64], prec: i64) -> PuiseuxSeries {
        PuiseuxSeries::from_coeffs(coeffs, exp(prec))
    }

    fn r(n: i64) -> BigRational {
        big(n)
    }

    #[test]
    fn difference_of_squares() {
        let p = s(&[1, 1], 10).mul(&s(&[1, -1], 10));
        assert_eq!(p, s(&[1, 0, -1], 10));
    }

    #[test]
    fn geometric_inverse() {
        let inv = s(&[1, -1], 8).invert().unwrap();
        assert_eq!(inv, s(&[1; 8], 8));
    }

    #[test]
    fn invert_zero_fails() {
        assert!(PuiseuxSeries::zero(exp(5)).invert().is_err());
    }

    #[test]
    fn square_binomial() {
        assert_eq!(s(&[1, 1], 10).pow(2).unwrap(), s(&[1, 2, 1], 10));
    }

    #[test]
    fn zeroth_power_is_one() {
        let a = s(&[3, 1, 4], 6);
        assert_eq!(a.pow(0).unwrap(), PuiseuxSeries::one(exp(6)));
    }

    #[test]
    fn pow_matches_repeated_product() {
        let a = s(&[2, -1, 0, 3], 12);
        let mut acc = PuiseuxSeries::one(exp(12));
        for _ in 0..5 {
            acc = acc.mul(&a);
        }
        assert_eq!(a.pow(5).unwrap(), acc);
        let inv = a.pow(-3).unwrap();
        assert!(inv.mul(&acc.mul(&a.invert().unwrap().pow(2).unwrap())).agrees_with(&PuiseuxSeries::one(exp(12))));
    }

    #[test]
    fn negative_valuation_inverse() {
        let a = s(&[0, 0, 1, 1], 10);
        let inv = a.invert().unwrap();
        assert_eq!(inv.valuation(), Some(exp(-2)));
        assert_eq!(inv.prec(), exp(6));
        assert!(a.mul(&inv).agrees_with(&PuiseuxSeries::one(exp(100))));
    }

    #[test]
    fn coefficient_bounds() {
        let a = s(&[1, 1], 10);
        assert_eq!(a.coefficient(exp(2)).unwrap(), r(0));
        assert!(matches!(
            a.coefficient(exp(10)),
            Err(Error::OutOfPrecision { .. })
        ));
    }

    #[test]
    fn substitution_half() {
        let a = PuiseuxSeries::monomial(r(2), Exponent::new(1, 4), exp(3));
        let b = a.substitute_power(Exponent::new(1, 2)).unwrap();
        assert_eq!(b.valuation(), Some(Exponent::new(1, 8)));
        assert_eq!(b.prec(), Exponent::new(3, 2));
        assert_eq!(b.scale(), 8);
    }

    #[test]
    fn dissect_small() {
        let a = s(&[1, 1, 2, 3], 4);
        assert_eq!(a.dissect(2, 0).unwrap(), s(&[1, 2], 2));
        assert!(PuiseuxSeries::monomial(r(1), Exponent::new(1, 2), exp(2))
            .dissect(2, 0)
            .is_err());
    }

    #[test]
    fn alternate_sign_involution() {
        let a = s(&[1, 2, 0, 0, 2], 9);
        let b = a.alternate_sign().unwrap();
        assert_eq!(b, s(&[1, -2, 0, 0, 2], 9));
        assert_eq!(b.alternate_sign().unwrap(), a);
    }

    #[test]
    fn mixed_scale_product_precision() {
        let a = PuiseuxSeries::monomial(r(1), Exponent::new(1, 3), exp(5));
        let b = PuiseuxSeries::monomial(r(1), Exponent::new(1, 2), exp(4));
        let p = a.mul(&b);
        assert_eq!(p.valuation(), Some(Exponent::new(5, 6)));
        assert_eq!(p.prec(), Exponent::new(13, 3));
    }

    #[test]
    fn shift_moves_precision() {
        let a = s(&[1, 1], 5).shift(exp(-2));
        assert_eq!(a.valuation(), Some(exp(-2)));
        assert_eq!(a.prec(), exp(3));
    }

    #[test]
    fn mismatch_reports_first_difference() {
        let a = s(&[1, 2, 3, 4], 10);
        let b = s(&[1, 2, 5, 4], 10);
        let m = a.first_mismatch(&b, None).unwrap();
        assert_eq!(m.exponent, exp(2));
        assert_eq!((m.lhs, m.rhs), (r(3), r(5)));
        assert!(a.first_mismatch(&b, Some(exp(2))).is_none());
    }

    #[test]
    fn rational_power() {
        let a = PuiseuxSeries::new(
            1,
            exp(6),
            vec![(0, BigRational::new(2.into(), 1.into())), (1, r(1))],
        )
        .unwrap();
        let inv = a.invert().unwrap();
        assert_eq!(inv.coefficient(exp(0)).unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(inv.coefficient(exp(1)).unwrap(), BigRational::new((-1).into(), 4.into()));
        assert!(a.mul(&inv).agrees_with(&PuiseuxSeries::one(exp(6))));
    }

    #[test]
    fn display_form() {
        let a = s(&[1, -2, 0, 3], 5);
        assert_eq!(a.to_string(), "1 - 2*q + 3*q^3 + O(q^5)");
    }
}
