use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{exponent_of, index_limit, Exponent, PuiseuxSeries};
use crate::error::{invalid, Error, Result};

/// A truncated series with coefficients in `Z/M`, stored in `[0, M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModSeries {
    modulus: u64,
    scale: i64,
    prec: Exponent,
    terms: Vec<(i64, u64)>,
}

impl ModSeries {
    pub fn from_series(s: &PuiseuxSeries, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return invalid("modulus must be positive");
        }
        let m = BigInt::from(modulus);
        let mut terms = Vec::new();
        for (i, c) in s.raw_terms() {
            if !c.is_integer() {
                return invalid(format!(
                    "cannot reduce non-integral coefficient {c} at q^{} modulo {modulus}",
                    exponent_of(*i, s.scale())
                ));
            }
            let r = c.numer().mod_floor(&m).to_u64().unwrap();
            if r != 0 {
                terms.push((*i, r));
            }
        }
        let g = terms.iter().fold(s.scale(), |g, (i, _)| g.gcd(i));
        let g = if terms.is_empty() { s.scale() } else { g };
        Ok(Self {
            modulus,
            scale: s.scale() / g,
            prec: s.prec(),
            terms: terms.into_iter().map(|(i, r)| (i / g, r)).collect(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn prec(&self) -> Exponent {
        self.prec
    }

    /// True when every known coefficient vanishes mod `M`.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: Exponent) -> Result<u64> {
        if e >= self.prec {
            return Err(Error::OutOfPrecision {
                exponent: e,
                prec: self.prec,
            });
        }
        let scaled = e * self.scale;
        if !scaled.is_integer() {
            return Ok(0);
        }
        let idx = scaled.to_integer();
        Ok(self
            .terms
            .binary_search_by_key(&idx, |t| t.0)
            .map_or(0, |p| self.terms[p].1))
    }

    pub fn nonzero_terms(&self) -> impl Iterator<Item = (Exponent, u64)> + '_ {
        self.terms.iter().map(|(i, r)| (exponent_of(*i, self.scale), *r))
    }

    /// First exponent `n = m j + r` with `j >= 0` and `n <= n_max` whose residue
    /// is nonzero. Errors if the scan would pass the precision.
    pub fn first_nonzero_on_progression(&self, m: i64, r: i64, n_max: i64) -> Result<Option<(i64, u64)>> {
        if n_max >= 0 && Exponent::from_integer(n_max) >= self.prec {
            return Err(Error::OutOfPrecision {
                exponent: Exponent::from_integer(n_max),
                prec: self.prec,
            });
        }
        let limit = index_limit(Exponent::from_integer(n_max + 1), self.scale);
        for &(i, res) in &self.terms {
            if i >= limit {
                break;
            }
            if i % self.scale != 0 {
                continue;
            }
            let n = i / self.scale;
            if n >= r && (n - r).rem_euclid(m) == 0 {
                return Ok(Some((n, res)));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::exp;
    use num_rational::BigRational;

    #[test]
    fn reduces_into_range() {
        let s = PuiseuxSeries::from_coeffs(&[1, 5, 25], exp(10));
        let m = s.reduce_mod(5).unwrap();
        assert_eq!(m.nonzero_terms().count(), 1);
        assert_eq!(m.coefficient(exp(0)).unwrap(), 1);
        let neg = PuiseuxSeries::from_coeffs(&[-3], exp(4)).reduce_mod(7).unwrap();
        assert_eq!(neg.coefficient(exp(0)).unwrap(), 4);
    }

    #[test]
    fn rejects_fractions() {
        let s = PuiseuxSeries::new(
            1,
            exp(5),
            vec![(0, BigRational::new(3.into(), 2.into())), (1, BigRational::from_integer(1.into()))],
        )
        .unwrap();
        assert!(s.reduce_mod(7).is_err());
    }

    #[test]
    fn progression_scan() {
        let s = PuiseuxSeries::from_coeffs(&[1, 0, 0, 3, 0, 0, 6], exp(10));
        let m = s.reduce_mod(3).unwrap();
        assert_eq!(m.first_nonzero_on_progression(3, 0, 8).unwrap(), Some((0, 1)));
        assert_eq!(m.first_nonzero_on_progression(3, 1, 8).unwrap(), None);
        assert!(m.first_nonzero_on_progression(3, 1, 10).is_err());
        let m5 = s.reduce_mod(5).unwrap();
        assert_eq!(m5.first_nonzero_on_progression(3, 6, 8).unwrap(), Some((6, 1)));
        assert_eq!(m5.first_nonzero_on_progression(3, 3, 8).unwrap(), Some((3, 3)));
    }
}
