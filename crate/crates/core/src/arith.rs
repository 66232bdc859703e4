//! Elementary arithmetic: Kronecker symbol, Möbius function, divisors and the
//! partition function.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::series::Exponent;

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: i64, n: i64) -> i8 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(d/n)` for arbitrary integers.
pub fn kronecker(d: i64, n: i64) -> i8 {
    if n == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    let mut sign = 1i8;
    let mut n = n;
    if n < 0 {
        n = -n;
        if d < 0 {
            sign = -sign;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if (r == 3 || r == 5) && twos % 2 == 1 {
            sign = -sign;
        }
        n >>= twos;
    }
    sign * jacobi(d, n)
}

pub fn mobius(n: u64) -> i8 {
    assert!(n > 0, "mobius is defined on positive integers");
    let mut n = n;
    let mut result = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn partition_table() -> &'static RwLock<Vec<BigInt>> {
    static TABLE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigInt::one()]))
}

fn extend_partitions(table: &mut Vec<BigInt>, n: usize) {
    while table.len() <= n {
        let m = table.len() as i64;
        let mut acc = BigInt::zero();
        for k in 1i64.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let plus = k % 2 == 1;
            let mut term = table[(m - g1) as usize].clone();
            let g2 = g1 + k;
            if g2 <= m {
                term += &table[(m - g2) as usize];
            }
            if plus {
                acc += term;
            } else {
                acc -= term;
            }
        }
        table.push(acc);
    }
}

/// `p(n)`, with `p(n) = 0` for negative `n`.
pub fn partition(n: i64) -> BigInt {
    if n < 0 {
        return BigInt::zero();
    }
    let idx = n as usize;
    {
        let t = partition_table().read().unwrap();
        if let Some(v) = t.get(idx) {
            return v.clone();
        }
    }
    let mut t = partition_table().write().unwrap();
    extend_partitions(&mut t, idx);
    t[idx].clone()
}

/// `p(x)` for rational `x`, zero unless `x` is a nonnegative integer.
pub fn partition_at(x: Exponent) -> BigInt {
    if x.is_integer() {
        partition(x.to_integer())
    } else {
        BigInt::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_values() {
        assert_eq!(kronecker(5, 2), -1);
        let sevens: Vec<i8> = (1..=6).map(|j| kronecker(j, 7)).collect();
        assert_eq!(sevens, vec![1, 1, -1, 1, -1, -1]);
        for d in -20..20 {
            assert_eq!(kronecker(d, 1), 1);
        }
        // (-3/n) agrees with the Legendre symbol (n/3).
        for n in 1..40 {
            assert_eq!(kronecker(-3, n), jacobi(n, 3));
        }
        assert_eq!(kronecker(-20, 3), kronecker(-20, 7));
        assert_eq!(kronecker(12, 5), -1);
        assert_eq!(kronecker(-7, -1), -1);
        assert_eq!(kronecker(1, 0), 1);
        assert_eq!(kronecker(4, 0), 0);
    }

    #[test]
    fn mobius_values() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(12), 0);
        assert_eq!(mobius(30), -1);
    }

    #[test]
    fn partitions() {
        assert_eq!(partition(0), BigInt::from(1));
        assert_eq!(partition(4), BigInt::from(5));
        assert_eq!(partition(9), BigInt::from(30));
        assert_eq!(partition(100), "190569292".parse::<BigInt>().unwrap());
        assert_eq!(partition(-1), BigInt::zero());
        assert_eq!(partition_at(Exponent::new(1, 2)), BigInt::zero());
    }

    #[test]
    fn divisor_listing() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert!(is_prime(17) && !is_prime(1) && !is_prime(21));
    }
}
