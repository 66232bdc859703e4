//! Coefficient kernels: integer convolution with an `i128` fast path and the
//! power recurrence used for inversion and exponentiation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const DENSE_LIMIT: i64 = 1 << 24;

/// Clears denominators: returns integer coefficients (indices multiplied by
/// `factor`) and the common denominator.
pub(super) fn integerize(terms: &[(i64, BigRational)], factor: i64) -> (Vec<(i64, BigInt)>, BigInt) {
    let den = terms
        .iter()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let out = terms
        .iter()
        .map(|(i, c)| {
            let n = if den.is_one() {
                c.numer().clone()
            } else {
                c.numer() * (&den / c.denom())
            };
            (i * factor, n)
        })
        .collect();
    (out, den)
}

fn max_bits(v: &[(i64, BigInt)]) -> u64 {
    v.iter().map(|(_, c)| c.bits()).max().unwrap_or(0)
}

/// Product of two sparse integer series, keeping indices `< limit`.
pub(super) fn convolve(a: &[(i64, BigInt)], b: &[(i64, BigInt)], limit: i64) -> Vec<(i64, BigInt)> {
    let (Some(a0), Some(b0)) = (a.first(), b.first()) else {
        return Vec::new();
    };
    let base = a0.0 + b0.0;
    if base >= limit {
        return Vec::new();
    }
    let len = limit - base;
    let terms_bits = 64 - (a.len().min(b.len()) as u64).leading_zeros() as u64;
    let fits = max_bits(a) + max_bits(b) + terms_bits + 1 <= 127;
    if len <= DENSE_LIMIT && fits {
        return convolve_i128(a, b, base, len as usize);
    }
    if len <= DENSE_LIMIT {
        let mut acc = vec![BigInt::zero(); len as usize];
        for (i, x) in a {
            if i + b0.0 >= limit {
                break;
            }
            for (j, y) in b {
                let t = i + j;
                if t >= limit {
                    break;
                }
                acc[(t - base) as usize] += x * y;
            }
        }
        return acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| (base + t as i64, c))
            .collect();
    }
    let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
    for (i, x) in a {
        for (j, y) in b {
            let t = i + j;
            if t >= limit {
                break;
            }
            *acc.entry(t).or_default() += x * y;
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn convolve_i128(a: &[(i64, BigInt)], b: &[(i64, BigInt)], base: i64, len: usize) -> Vec<(i64, BigInt)> {
    let small = |v: &[(i64, BigInt)]| -> Vec<(i64, i128)> {
        v.iter().map(|(i, c)| (*i, c.to_i128().unwrap())).collect()
    };
    let (a, b) = (small(a), small(b));
    let limit = base + len as i64;
    let b0 = b[0].0;
    let mut acc = vec![0i128; len];
    for &(i, x) in &a {
        if i + b0 >= limit {
            break;
        }
        for &(j, y) in &b {
            let t = i + j;
            if t >= limit {
                break;
            }
            acc[(t - base) as usize] += x * y;
        }
    }
    acc.into_iter()
        .enumerate()
        .filter(|(_, c)| *c != 0)
        .map(|(t, c)| (base + t as i64, BigInt::from(c)))
        .collect()
}

/// Coefficients `b_0 .. b_{count-1}` of `u^e`, where `u` is given sparsely as
/// `(index, coefficient)` with `u_0 != 0` at index 0.
///
/// Uses `u_0 n b_n = sum_{k=1..n} ((e+1)k - n) u_k b_{n-k}`, obtained by
/// comparing coefficients in `u (u^e)' = e u' u^e`.
pub(super) fn miller_pow(u: &[(usize, &BigRational)], e: i64, count: usize) -> Vec<BigRational> {
    if count == 0 {
        return Vec::new();
    }
    let u0 = u[0].1;
    let unit = u0.is_integer() && u0.numer().abs().is_one();
    if unit && u.iter().all(|(_, c)| c.is_integer()) {
        let ints: Vec<(usize, BigInt)> = u.iter().map(|(k, c)| (*k, c.to_integer())).collect();
        return miller_pow_int(&ints, e, count)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
    }
    let mut b: Vec<BigRational> = Vec::with_capacity(count);
    b.push(super::pow_rational(u0, e));
    let e1 = BigRational::from_integer(BigInt::from(e + 1));
    for n in 1..count {
        let mut acc = BigRational::zero();
        for (k, uk) in &u[1..] {
            if *k > n {
                break;
            }
            if b[n - k].is_zero() {
                continue;
            }
            let kk = BigRational::from_integer(BigInt::from(*k as i64));
            let nn = BigRational::from_integer(BigInt::from(n as i64));
            let w = &e1 * kk - nn;
            acc += w * *uk * &b[n - k];
        }
        let nn = BigRational::from_integer(BigInt::from(n as i64));
        b.push(acc / (nn * u0));
    }
    b
}

fn miller_pow_int(u: &[(usize, BigInt)], e: i64, count: usize) -> Vec<BigInt> {
    let negative_lead = u[0].1.is_negative();
    let mut b: Vec<BigInt> = Vec::with_capacity(count);
    b.push(if negative_lead && e.rem_euclid(2) == 1 {
        -BigInt::one()
    } else {
        BigInt::one()
    });
    let small: Option<Vec<(usize, i128)>> = u[1..]
        .iter()
        .map(|(k, c)| c.to_i64().map(|v| (*k, v as i128)))
        .collect();
    for n in 1..count {
        let mut acc = BigInt::zero();
        match &small {
            Some(sm) => {
                for &(k, uk) in sm {
                    if k > n {
                        break;
                    }
                    let w = ((e as i128 + 1) * k as i128 - n as i128) * uk;
                    if w != 0 && !b[n - k].is_zero() {
                        acc += &b[n - k] * w;
                    }
                }
            }
            None => {
                for (k, uk) in &u[1..] {
                    if *k > n {
                        break;
                    }
                    let w = BigInt::from((e as i128 + 1) * *k as i128 - n as i128) * uk;
                    acc += &b[n - k] * w;
                }
            }
        }
        let (q, rem) = acc.div_rem(&BigInt::from(n as i64));
        debug_assert!(rem.is_zero(), "power recurrence lost integrality");
        b.push(if negative_lead { -q } else { q });
    }
    b
}
