//! Named q-expansions: Pochhammer products, eta quotients, theta constants,
//! Jacobi's `f(a, b)`, generalized eta functions, Eisenstein series,
//! Lambert series and partition generating functions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{CheckedAdd, CheckedSub, One, Zero};

use crate::arith::{is_prime, kronecker, partition};
use crate::error::{invalid, Result};
use crate::series::{exp, index_limit, Exponent, PuiseuxSeries};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn from_dense_ints(scale: i64, prec: Exponent, base: i64, coeffs: Vec<BigInt>) -> PuiseuxSeries {
    let terms = coeffs
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (base + i as i64, BigRational::from_integer(c)))
        .collect();
    PuiseuxSeries::assemble(scale, prec, terms)
}

/// `(q^b; q^b)_inf` via Euler's pentagonal number theorem.
fn euler_product(b: Exponent, prec: Exponent) -> PuiseuxSeries {
    let scale = *b.denom();
    let step = *b.numer();
    let limit = index_limit(prec, scale);
    let mut terms = Vec::new();
    for k in 0i64.. {
        let g1 = k * (3 * k - 1) / 2 * step;
        if g1 >= limit {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        terms.push((g1, int(sign)));
        if k > 0 {
            let g2 = k * (3 * k + 1) / 2 * step;
            if g2 < limit {
                terms.push((g2, int(sign)));
            }
        }
    }
    PuiseuxSeries::assemble(scale, prec, terms)
}

fn dense_product<T>(limit: usize, factors: &[usize], plus: bool) -> Option<Vec<T>>
where
    T: Clone + Zero + One + CheckedAdd + CheckedSub,
{
    let mut c = vec![T::zero(); limit];
    c[0] = T::one();
    let mut top = 0usize;
    for &m in factors {
        top = (top + m).min(limit - 1);
        for i in (m..=top).rev() {
            let (lhs, rhs) = (&c[i], &c[i - m]);
            let v = if plus { lhs.checked_add(rhs)? } else { lhs.checked_sub(rhs)? };
            c[i] = v;
        }
    }
    Some(c)
}

/// `(q^a; q^b)_inf` when `plus` is false, `(-q^a; q^b)_inf` when it is true.
pub fn pochhammer(a: Exponent, b: Exponent, plus: bool, prec: Exponent) -> Result<PuiseuxSeries> {
    if a <= Exponent::zero() || b <= Exponent::zero() {
        return invalid(format!("pochhammer needs positive exponents, got a={a}, b={b}"));
    }
    if a == b && !plus {
        return Ok(euler_product(b, prec));
    }
    let scale = num_integer::lcm(*a.denom(), *b.denom());
    let (ai, bi) = ((a * scale).to_integer(), (b * scale).to_integer());
    let limit = index_limit(prec, scale);
    if limit <= 0 {
        return Ok(PuiseuxSeries::zero(prec));
    }
    let factors: Vec<usize> = (0..)
        .map(|j| ai + j * bi)
        .take_while(|&m| m < limit)
        .map(|m| m as usize)
        .collect();
    let limit = limit as usize;
    let coeffs: Vec<BigInt> = match dense_product::<i128>(limit, &factors, plus) {
        Some(v) => v.into_iter().map(BigInt::from).collect(),
        None => dense_product::<BigInt>(limit, &factors, plus).expect("bigint arithmetic cannot overflow"),
    };
    Ok(from_dense_ints(scale, prec, 0, coeffs))
}

/// `prod eta(r tau)^e` with `eta(tau) = q^(1/24) (q; q)_inf`.
pub fn eta_quotient(factors: &[(i64, i64)], prec: Exponent) -> Result<PuiseuxSeries> {
    let mut seen = std::collections::BTreeSet::new();
    for &(r, _) in factors {
        if r <= 0 {
            return invalid(format!("eta multiplier must be positive, got {r}"));
        }
        if !seen.insert(r) {
            return invalid(format!("eta multiplier {r} repeated"));
        }
    }
    let shift: Exponent = factors.iter().map(|&(r, e)| Exponent::new(r * e, 24)).sum();
    let inner = prec - shift;
    let mut acc = PuiseuxSeries::one(inner);
    for &(r, e) in factors {
        if e == 0 {
            continue;
        }
        let base = euler_product(exp(r), inner);
        acc = acc.mul(&base.pow(e)?);
    }
    Ok(acc.shift(shift))
}

/// `Theta_3(q^r) = sum q^(r j^2)` (kind 3) or `Theta_2(q^r) = sum q^(r (j+1/2)^2)` (kind 2).
pub fn theta(kind: u8, r: Exponent, prec: Exponent) -> Result<PuiseuxSeries> {
    if r <= Exponent::zero() {
        return invalid(format!("theta argument power must be positive, got {r}"));
    }
    let mut terms = Vec::new();
    match kind {
        3 => {
            terms.push((Exponent::zero(), 1));
            for j in 1i64.. {
                let e = r * (j * j);
                if e >= prec {
                    break;
                }
                terms.push((e, 2));
            }
        }
        2 => {
            for j in 0i64.. {
                let e = r * Exponent::new((2 * j + 1) * (2 * j + 1), 4);
                if e >= prec {
                    break;
                }
                terms.push((e, 2));
            }
        }
        _ => return invalid(format!("theta kind must be 2 or 3, got {kind}")),
    }
    let scale = terms.iter().fold(1i64, |l, (e, _)| num_integer::lcm(l, *e.denom()));
    let terms: Vec<(i64, BigRational)> = terms
        .into_iter()
        .map(|(e, c)| ((e * scale).to_integer(), int(c)))
        .collect();
    PuiseuxSeries::new(scale, prec, terms)
}

/// Ramanujan's `f(q^x, q^y) = (-q^x; q^(x+y)) (-q^y; q^(x+y)) (q^(x+y); q^(x+y))`.
pub fn jacobi_f(x: Exponent, y: Exponent, prec: Exponent) -> Result<PuiseuxSeries> {
    let s = x + y;
    let a = pochhammer(x, s, true, prec)?;
    let b = pochhammer(y, s, true, prec)?;
    let c = pochhammer(s, s, false, prec)?;
    Ok(a.mul(&b).mul(&c))
}

/// Leading exponent `L * B2(a/L) / 2` of the generalized eta function.
pub fn gen_eta_order(level: i64, a: i64) -> Exponent {
    Exponent::new(6 * a * a - 6 * a * level + level * level, 12 * level)
}

/// `q^(L B2(a/L)/2) prod_{m>=1} (1 - q^(L(m-1)+a)) (1 - q^(Lm-a))` with
/// `B2(x) = x^2 - x + 1/6`.
///
/// Any positive `a` not divisible by `L` is accepted; the product taken
/// literally satisfies `E_a = (-1)^floor(a/L) E_(a mod L)`.
pub fn gen_eta(level: i64, a: i64, prec: Exponent) -> Result<PuiseuxSeries> {
    if level <= 1 || a <= 0 || a % level == 0 {
        return invalid(format!("generalized eta needs L > 1 and a > 0 not divisible by L, got L={level}, a={a}"));
    }
    let (wraps, b) = (a / level, a % level);
    let order = gen_eta_order(level, b);
    let inner = prec - order;
    let l = exp(level);
    let p1 = pochhammer(exp(b), l, false, inner)?;
    let p2 = pochhammer(exp(level - b), l, false, inner)?;
    let mut s = p1.mul(&p2).shift(order);
    if wraps % 2 == 1 {
        s = s.neg();
    }
    Ok(s)
}

fn divisor_power_sums(n: usize, w: u32) -> Vec<BigInt> {
    let mut sig = vec![BigInt::zero(); n];
    for d in 1..n {
        let dw = BigInt::from(d).pow(w);
        for m in (d..n).step_by(d) {
            sig[m] += &dw;
        }
    }
    sig
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EisensteinKind {
    E2,
    E4,
}

/// `E2(q^r) = 1 - 24 sum sigma_1(n) q^(rn)` or `E4(q^r) = 1 + 240 sum sigma_3(n) q^(rn)`.
pub fn eisenstein(kind: EisensteinKind, r: i64, prec: Exponent) -> Result<PuiseuxSeries> {
    if r <= 0 {
        return invalid(format!("Eisenstein argument power must be positive, got {r}"));
    }
    let inner = prec / r;
    let n = index_limit(inner, 1).max(1) as usize;
    let (w, c) = match kind {
        EisensteinKind::E2 => (1, -24),
        EisensteinKind::E4 => (3, 240),
    };
    let mut coeffs: Vec<BigInt> = divisor_power_sums(n, w).into_iter().map(|s| s * c).collect();
    coeffs[0] = BigInt::one();
    from_dense_ints(1, inner, 0, coeffs).substitute_power(exp(r))
}

/// Where the character and the power sit in a twisted divisor sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistSide {
    /// `sum_{d|n} chi(d) (n/d)^w`
    PowerOnCofactor,
    /// `sum_{d|n} chi(d) d^w`
    PowerOnDivisor,
    /// `chi(n) sum_{d|n} d^w`
    CharacterOnIndex,
}

/// `sum_{n>=1} a(n) q^n` for the twisted divisor sum selected by `side`,
/// with character `chi(m) = (d/m)`. No constant term.
pub fn twisted_eisenstein(w: u32, d: i64, side: TwistSide, prec: Exponent) -> Result<PuiseuxSeries> {
    let n = index_limit(prec, 1).max(1) as usize;
    let mut coeffs = vec![BigInt::zero(); n];
    for div in 1..n {
        let chi_div = kronecker(d, div as i64);
        for m in (div..n).step_by(div) {
            let cof = m / div;
            match side {
                TwistSide::PowerOnCofactor => {
                    if chi_div != 0 {
                        coeffs[m] += BigInt::from(cof).pow(w) * chi_div;
                    }
                }
                TwistSide::PowerOnDivisor => {
                    if chi_div != 0 {
                        coeffs[m] += BigInt::from(div).pow(w) * chi_div;
                    }
                }
                TwistSide::CharacterOnIndex => {
                    coeffs[m] += BigInt::from(div).pow(w);
                }
            }
        }
    }
    if side == TwistSide::CharacterOnIndex {
        for (m, c) in coeffs.iter_mut().enumerate().skip(1) {
            *c *= kronecker(d, m as i64);
        }
    }
    Ok(from_dense_ints(1, prec, 0, coeffs))
}

fn eulerian_row(b: usize) -> Vec<i64> {
    let mut row = vec![1i64];
    for n in 1..=b {
        let mut next = vec![0i64; n];
        for m in 0..n {
            let keep = if m < row.len() { (m as i64 + 1) * row[m] } else { 0 };
            let carry = if m >= 1 && m - 1 < row.len() { (n - m) as i64 * row[m - 1] } else { 0 };
            next[m] = keep + carry;
        }
        row = next;
    }
    row
}

/// `sum_{m>=1} m^b q^m`, built as `q A_b(q) / (1-q)^(b+1)` with the Eulerian
/// polynomial `A_b`.
pub fn lambert_kernel(b: usize, prec: Exponent) -> Result<PuiseuxSeries> {
    let mut numer = vec![0i64];
    numer.extend(eulerian_row(b));
    let num = PuiseuxSeries::from_coeffs(&numer, prec);
    let den = PuiseuxSeries::from_coeffs(&[1, -1], prec).pow(-(b as i64 + 1))?;
    Ok(num.mul(&den))
}

/// `sum_{j>=1} chi(j) j^a K_b(q^j)` with `chi(j) = (d/j)` and `K_b` from
/// [`lambert_kernel`]. Assembled term by term from the kernel expansion.
pub fn lambert(d: i64, a: u32, b: usize, prec: Exponent) -> Result<PuiseuxSeries> {
    let n = index_limit(prec, 1).max(1) as usize;
    let kernel = lambert_kernel(b, exp(n as i64))?;
    let k: Vec<BigInt> = (0..n as i64)
        .map(|m| kernel.coefficient_int(m))
        .collect::<Result<_>>()?;
    let mut coeffs = vec![BigInt::zero(); n];
    for j in 1..n {
        let chi = kronecker(d, j as i64);
        if chi == 0 {
            continue;
        }
        let w = BigInt::from(j).pow(a) * chi;
        for m in 1..=(n - 1) / j {
            if !k[m].is_zero() {
                coeffs[j * m] += &w * &k[m];
            }
        }
    }
    Ok(from_dense_ints(1, prec, 0, coeffs))
}

/// `sum_{n>=0} p(n) q^n` from the pentagonal recurrence.
pub fn partition_series(prec: Exponent) -> PuiseuxSeries {
    let n = index_limit(prec, 1).max(0);
    from_dense_ints(1, prec, 0, (0..n).map(partition).collect())
}

/// `sum_{j>=1} p(l j - c) q^j`.
pub fn partition_progression(l: i64, c: i64, prec: Exponent) -> Result<PuiseuxSeries> {
    if l <= 0 {
        return invalid(format!("progression step must be positive, got {l}"));
    }
    let n = index_limit(prec, 1).max(1);
    let coeffs = (0..n)
        .map(|j| if j == 0 { BigInt::zero() } else { partition(l * j - c) })
        .collect();
    Ok(from_dense_ints(1, prec, 0, coeffs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fgh {
    F,
    G,
    H,
}

/// `(l^2 - 1) / 24` for a prime `l >= 5`.
pub fn delta(l: i64) -> i64 {
    (l * l - 1) / 24
}

/// `l^2 - l p(l - delta_l)`: the modulus in the congruences for `h_l`.
pub fn nu(l: i64) -> BigInt {
    BigInt::from(l * l) - partition(l - delta(l)) * l
}

/// `f_l = (q^l; q^l) CPhi_l`, `g_l = 1 + l (q^l; q^l) sum p(l j - delta_l) q^j`,
/// `h_l = f_l - g_l - 2 l^((l-11)/2) (eta(l tau) / eta(tau))^(l-11)`.
pub fn fgh_ell(which: Fgh, l: i64, prec: Exponent) -> Result<PuiseuxSeries> {
    if l < 5 || !is_prime(l as u64) {
        return invalid(format!("f/g/h need a prime l >= 5, got {l}"));
    }
    if which == Fgh::H && l < 17 {
        return invalid(format!("h_l is defined for l >= 17, got {l}"));
    }
    let ql = euler_product(exp(l), prec);
    let f = || -> Result<PuiseuxSeries> { Ok(ql.mul(&crate::engine::cphi_series(l as usize, prec)?)) };
    let g = || -> Result<PuiseuxSeries> {
        let tail = ql.mul(&partition_progression(l, delta(l), prec)?).scalar_mul(&int(l));
        Ok(PuiseuxSeries::one(prec).add(&tail))
    };
    match which {
        Fgh::F => f(),
        Fgh::G => g(),
        Fgh::H => {
            let c = int(2) * num_traits::pow(int(l), ((l - 11) / 2) as usize);
            let eta = eta_quotient(&[(l, l - 11), (1, 11 - l)], prec)?.scalar_mul(&c);
            Ok(f()?.sub(&g()?).sub(&eta))
        }
    }
}
