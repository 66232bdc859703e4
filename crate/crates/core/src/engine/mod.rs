//! Theta series of the colored-Frobenius lattice and the generating functions
//! `CPhi_k = A_k / (q; q)^k`.
//!
//! `A_k = sum_{m in Z^(k-1)} q^Q(m)` with `Q(m) = (sum m_i^2 + (sum m_i)^2) / 2`.

mod refined;

pub use refined::{refined_cphi_ct, BivariateTable};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::builders::pochhammer;
use crate::error::{invalid, Error, Result};
use crate::series::{exp, index_limit, Exponent, PuiseuxSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaMethod {
    /// Constant term in `z` of `(sum z^n q^(n^2/2))^k`.
    ConstantTerm,
    /// Depth-first enumeration of `Z^(k-1)`.
    Lattice,
}

fn overflow(what: &str) -> Error {
    Error::Overflow(format!("{what}: count exceeds 128 bits"))
}

fn counts_to_series(counts: Vec<u128>, prec: Exponent) -> PuiseuxSeries {
    let terms = counts
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c != 0)
        .map(|(i, c)| (i as i64, BigRational::from_integer(BigInt::from(c))))
        .collect();
    PuiseuxSeries::assemble(1, prec, terms)
}

fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `A_k` to `prec`.
pub fn frobenius_theta(k: usize, prec: Exponent, method: ThetaMethod) -> Result<PuiseuxSeries> {
    if k < 2 {
        return invalid(format!("frobenius_theta needs k >= 2, got {k}"));
    }
    let n = index_limit(prec, 1);
    if n <= 0 {
        return Ok(PuiseuxSeries::zero(prec));
    }
    let counts = match method {
        ThetaMethod::ConstantTerm => theta_ct(k, n)?,
        ThetaMethod::Lattice => theta_lattice(k, n)?,
    };
    Ok(counts_to_series(counts, prec))
}

/// DP over the `k` theta factors. State `(s, e)` is the running `z`-degree and
/// twice the running `q`-order; the constant term has `s = 0` and order `e / 2`.
/// With `r` factors still to come, reaching `s = 0` costs at least `s^2 / r`
/// more, so states with `e + s^2 / r >= 2N` are dropped.
fn theta_ct(k: usize, n: i64) -> Result<Vec<u128>> {
    let bound = 2 * n;
    let nmax = isqrt(bound - 1);
    let smax = isqrt((k as i64 - 1) * (bound - 1)) + 1;
    let width = (2 * smax + 1) as usize;
    let idx = |s: i64, e: i64| (s + smax) as usize * bound as usize + e as usize;
    let mut cur = vec![0u128; width * bound as usize];
    cur[idx(0, 0)] = 1;
    for step in 0..k {
        let remaining = (k - step - 1) as i64;
        let mut next = vec![0u128; cur.len()];
        for s in -smax..=smax {
            for e in 0..bound {
                let c = cur[idx(s, e)];
                if c == 0 {
                    continue;
                }
                for j in -nmax..=nmax {
                    let (s2, e2) = (s + j, e + j * j);
                    if e2 >= bound || s2.abs() > smax {
                        continue;
                    }
                    let feasible = if remaining == 0 {
                        s2 == 0
                    } else {
                        e2 * remaining + s2 * s2 < bound * remaining
                    };
                    if !feasible {
                        continue;
                    }
                    let slot = &mut next[idx(s2, e2)];
                    *slot = slot.checked_add(c).ok_or_else(|| overflow("constant-term theta"))?;
                }
            }
        }
        cur = next;
    }
    let mut out = vec![0u128; n as usize];
    for e in 0..bound {
        let c = cur[idx(0, e)];
        if c != 0 {
            assert!(e % 2 == 0, "constant term landed on a half-integer exponent");
            out[(e / 2) as usize] = c;
        }
    }
    Ok(out)
}

/// Enumerate `(m_1, ..., m_(k-1))` with `Q(m) < N`. With partial square sum `t`,
/// partial sum `s` and `r` coordinates left, the smallest reachable value of
/// `Q` is `t/2 + s^2 / (2(r+1))`.
fn theta_lattice(k: usize, n: i64) -> Result<Vec<u128>> {
    fn dfs(left: i64, t: i64, s: i64, bound: i64, mmax: i64, out: &mut [u128]) -> Result<()> {
        if left == 0 {
            let q = (t + s * s) / 2;
            out[q as usize] = out[q as usize].checked_add(1).ok_or_else(|| overflow("lattice theta"))?;
            return Ok(());
        }
        for m in -mmax..=mmax {
            let (t2, s2) = (t + m * m, s + m);
            // t2/2 + s2^2/(2 left) < bound/2
            if t2 * left + s2 * s2 < bound * left {
                dfs(left - 1, t2, s2, bound, mmax, out)?;
            }
        }
        Ok(())
    }
    let bound = 2 * n;
    let mut out = vec![0u128; n as usize];
    dfs(k as i64 - 1, 0, 0, bound, isqrt(bound - 1), &mut out)?;
    Ok(out)
}

/// `CPhi_k` to `prec`; `k = 1` gives `1 / (q; q)`.
pub fn cphi_series(k: usize, prec: Exponent) -> Result<PuiseuxSeries> {
    if k == 0 {
        return invalid("cphi needs k >= 1");
    }
    let qq = pochhammer(exp(1), exp(1), false, prec)?;
    let inv = qq.pow(-(k as i64))?;
    if k == 1 {
        return Ok(inv);
    }
    Ok(frobenius_theta(k, prec, ThetaMethod::ConstantTerm)?.mul(&inv))
}

/// `cphi_k(n)`, zero for negative `n`.
pub fn cphi(k: usize, n: i64) -> Result<BigInt> {
    if n < 0 {
        return Ok(BigInt::from(0));
    }
    cphi_series(k, exp(n + 1))?.coefficient_int(n)
}

/// Theta series of the lattice with form `Q'(m) = (l sum m_i^2 - (sum m_i)^2) / 2`
/// on `Z^(l-1)`. Since `(sum m_i)^2 <= (l-1) sum m_i^2`, `Q' >= sum m_i^2 / 2`,
/// which bounds the running square sum.
pub fn dual_theta(l: i64, prec: Exponent) -> Result<PuiseuxSeries> {
    if l < 5 || !crate::arith::is_prime(l as u64) {
        return invalid(format!("dual_theta needs a prime l >= 5, got {l}"));
    }
    let n = index_limit(prec, 1);
    if n <= 0 {
        return Ok(PuiseuxSeries::zero(prec));
    }
    let bound = 2 * n;
    let mmax = isqrt(bound - 1);
    let smax = isqrt((l - 1) * (bound - 1));
    let width = (2 * smax + 1) as usize;
    let idx = |s: i64, t: i64| (s + smax) as usize * bound as usize + t as usize;
    let mut cur = vec![0u128; width * bound as usize];
    cur[idx(0, 0)] = 1;
    for _ in 0..l - 1 {
        let mut next = vec![0u128; cur.len()];
        for s in -smax..=smax {
            for t in 0..bound {
                let c = cur[idx(s, t)];
                if c == 0 {
                    continue;
                }
                for m in -mmax..=mmax {
                    let (s2, t2) = (s + m, t + m * m);
                    if t2 >= bound || s2.abs() > smax {
                        continue;
                    }
                    let slot = &mut next[idx(s2, t2)];
                    *slot = slot.checked_add(c).ok_or_else(|| overflow("dual theta"))?;
                }
            }
        }
        cur = next;
    }
    let mut out = vec![0u128; n as usize];
    for s in -smax..=smax {
        for t in 0..bound {
            let c = cur[idx(s, t)];
            if c == 0 {
                continue;
            }
            let twice = l * t - s * s;
            debug_assert!(twice >= 0 && twice % 2 == 0);
            if twice < bound {
                let q = (twice / 2) as usize;
                out[q] = out[q].checked_add(c).ok_or_else(|| overflow("dual theta"))?;
            }
        }
    }
    Ok(counts_to_series(out, prec))
}

/// `sum q^(a m^2 + b m n + c n^2)` for a positive definite form.
pub fn binary_qf_theta(a: i64, b: i64, c: i64, prec: Exponent) -> Result<PuiseuxSeries> {
    let disc = 4 * a * c - b * b;
    if a <= 0 || disc <= 0 {
        return invalid(format!("form ({a}, {b}, {c}) is not positive definite"));
    }
    let n = index_limit(prec, 1);
    if n <= 0 {
        return Ok(PuiseuxSeries::zero(prec));
    }
    // Q >= disc/(4a) * y^2 and Q >= disc/(4c) * x^2.
    let ymax = isqrt(4 * a * (n - 1) / disc) + 1;
    let xmax = isqrt(4 * c * (n - 1) / disc) + 1;
    let mut out = vec![0u128; n as usize];
    for y in -ymax..=ymax {
        for x in -xmax..=xmax {
            let q = a * x * x + b * x * y + c * y * y;
            if q < n {
                out[q as usize] += 1;
            }
        }
    }
    Ok(counts_to_series(out, prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::theta;

    fn ints(s: &PuiseuxSeries, n: usize) -> Vec<i64> {
        s.int_coeffs(n)
            .unwrap()
            .into_iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn two_colors_is_theta3() {
        let prec = exp(50);
        for method in [ThetaMethod::ConstantTerm, ThetaMethod::Lattice] {
            assert_eq!(frobenius_theta(2, prec, method).unwrap(), theta(3, exp(1), prec).unwrap());
        }
    }

    #[test]
    fn small_theta_values() {
        let a3 = frobenius_theta(3, exp(5), ThetaMethod::ConstantTerm).unwrap();
        assert_eq!(ints(&a3, 5), vec![1, 6, 0, 6, 6]);
        let a5 = frobenius_theta(5, exp(3), ThetaMethod::ConstantTerm).unwrap();
        assert_eq!(ints(&a5, 3), vec![1, 20, 30]);
    }

    #[test]
    fn methods_agree() {
        for k in 2..=6 {
            let prec = exp(25);
            let ct = frobenius_theta(k, prec, ThetaMethod::ConstantTerm).unwrap();
            let lat = frobenius_theta(k, prec, ThetaMethod::Lattice).unwrap();
            assert_eq!(ct, lat, "k={k}");
            assert_eq!(ct.coefficient_int(1).unwrap(), BigInt::from(k * (k - 1)));
        }
    }

    #[test]
    fn cphi_values() {
        assert_eq!(cphi(2, 2).unwrap(), BigInt::from(9));
        assert_eq!(cphi(1, 4).unwrap(), BigInt::from(5));
        assert_eq!(cphi(5, 1).unwrap(), BigInt::from(25));
        assert_eq!(cphi(3, 1).unwrap(), BigInt::from(9));
        assert!(frobenius_theta(1, exp(5), ThetaMethod::ConstantTerm).is_err());
    }

    #[test]
    fn dual_theta_examples() {
        let b5 = dual_theta(5, exp(4)).unwrap();
        assert_eq!(ints(&b5, 4), vec![1, 0, 10, 20]);
        let b7 = dual_theta(7, exp(6)).unwrap();
        assert_eq!(b7.coefficient_int(3).unwrap(), BigInt::from(14));
        assert_eq!(b7.coefficient_int(5).unwrap(), BigInt::from(42));
        assert!(dual_theta(9, exp(4)).is_err());
    }

    #[test]
    fn binary_forms() {
        let prec = exp(60);
        assert_eq!(
            binary_qf_theta(1, 1, 1, prec).unwrap(),
            frobenius_theta(3, prec, ThetaMethod::Lattice).unwrap()
        );
        let t = theta(3, exp(1), prec).unwrap();
        assert_eq!(binary_qf_theta(1, 0, 1, prec).unwrap(), t.mul(&t));
        assert!(binary_qf_theta(1, 3, 1, prec).is_err());
    }
}
