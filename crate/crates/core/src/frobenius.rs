//! Direct enumeration of colored generalized Frobenius symbols, used as ground
//! truth for the generating-function engine.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{divisors, mobius};
use crate::engine::BivariateTable;
use crate::error::Result;

/// A part `value_color`. The derived order compares value first, then color,
/// so `0_1 < 0_2 < ... < 0_k < 1_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoredPart {
    pub value: u32,
    pub color: u32,
}

impl fmt::Display for ColoredPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.value, self.color)
    }
}

/// Two equal-length rows, each strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FrobeniusSymbol {
    k: u32,
    top: Vec<ColoredPart>,
    bottom: Vec<ColoredPart>,
}

fn strictly_decreasing(row: &[ColoredPart]) -> bool {
    row.windows(2).all(|w| w[0] > w[1])
}

impl FrobeniusSymbol {
    pub fn new(k: u32, top: Vec<ColoredPart>, bottom: Vec<ColoredPart>) -> Result<Self> {
        let ok = top.len() == bottom.len()
            && strictly_decreasing(&top)
            && strictly_decreasing(&bottom)
            && top.iter().chain(&bottom).all(|p| (1..=k).contains(&p.color));
        if !ok {
            return crate::error::invalid("not a valid colored Frobenius symbol");
        }
        Ok(Self { k, top, bottom })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn top(&self) -> &[ColoredPart] {
        &self.top
    }

    pub fn bottom(&self) -> &[ColoredPart] {
        &self.bottom
    }

    pub fn weight(&self) -> u64 {
        self.top.len() as u64 + self.top.iter().chain(&self.bottom).map(|p| p.value as u64).sum::<u64>()
    }

    /// Sum of top colors minus sum of bottom colors.
    pub fn color_difference(&self) -> i64 {
        let sum = |row: &[ColoredPart]| row.iter().map(|p| p.color as i64).sum::<i64>();
        sum(&self.top) - sum(&self.bottom)
    }

    /// Apply `c -> c + shift (mod k)` to every color and re-sort both rows.
    pub fn color_shift(&self, shift: u32) -> Self {
        let k = self.k;
        let apply = |row: &[ColoredPart]| {
            let mut out: Vec<ColoredPart> = row
                .iter()
                .map(|p| ColoredPart {
                    value: p.value,
                    color: (p.color - 1 + shift) % k + 1,
                })
                .collect();
            out.sort_by(|a, b| b.cmp(a));
            assert!(strictly_decreasing(&out), "color shift produced a repeated part");
            out
        };
        Self {
            k,
            top: apply(&self.top),
            bottom: apply(&self.bottom),
        }
    }

    /// Least `l >= 1` with `color_shift(l) == self`; always a divisor of `k`.
    pub fn order(&self) -> u32 {
        divisors(self.k as u64)
            .into_iter()
            .map(|d| d as u32)
            .find(|&d| self.color_shift(d) == *self)
            .expect("k itself fixes every symbol")
    }

    pub fn swap_rows(&self) -> Self {
        Self {
            k: self.k,
            top: self.bottom.clone(),
            bottom: self.top.clone(),
        }
    }
}

impl fmt::Display for FrobeniusSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &[ColoredPart]| r.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "({} | {})", row(&self.top), row(&self.bottom))
    }
}

/// All strictly decreasing rows of `len` parts with value sum `sum`, every part
/// below `bound`. Lexicographic in the row read left to right.
fn rows(k: u32, len: usize, sum: u32, bound: Option<ColoredPart>, prefix: &mut Vec<ColoredPart>, out: &mut Vec<Vec<ColoredPart>>) {
    if len == 0 {
        if sum == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    // The next part is the largest remaining, so its value is at least sum/len.
    for value in 0..=sum {
        if (value as usize) * len < sum as usize {
            continue;
        }
        for color in 1..=k {
            let part = ColoredPart { value, color };
            if bound.is_some_and(|b| part >= b) {
                continue;
            }
            prefix.push(part);
            rows(k, len - 1, sum - value, Some(part), prefix, out);
            prefix.pop();
        }
    }
}

fn all_rows(k: u32, len: usize, sum: u32) -> Vec<Vec<ColoredPart>> {
    let mut out = Vec::new();
    rows(k, len, sum, None, &mut Vec::new(), &mut out);
    out
}

/// Every `k`-colored symbol of weight `n`, ordered by length, then top-row sum,
/// then top row, then bottom row.
pub fn enumerate_symbols(k: u32, n: u32) -> Vec<FrobeniusSymbol> {
    assert!(k >= 1, "need at least one color");
    let mut out = Vec::new();
    if n == 0 {
        out.push(FrobeniusSymbol {
            k,
            top: vec![],
            bottom: vec![],
        });
        return out;
    }
    for d in 1..=n as usize {
        let rest = n - d as u32;
        let table: Vec<Vec<Vec<ColoredPart>>> = (0..=rest).map(|s| all_rows(k, d, s)).collect();
        for a in 0..=rest {
            for top in &table[a as usize] {
                for bottom in &table[(rest - a) as usize] {
                    out.push(FrobeniusSymbol {
                        k,
                        top: top.clone(),
                        bottom: bottom.clone(),
                    });
                }
            }
        }
    }
    out
}

/// `phi_k(n)`: uncolored symbols whose rows are nonincreasing with each value
/// repeated at most `k` times.
pub fn enumerate_phi(k: u32, n: u32) -> u128 {
    let n = n as usize;
    // counts[d][s]: rows of length d and value sum s.
    let mut counts = vec![vec![0u128; n + 1]; n + 1];
    counts[0][0] = 1;
    for value in 0..=n {
        let mut next = vec![vec![0u128; n + 1]; n + 1];
        for d in 0..=n {
            for s in 0..=n {
                let c = counts[d][s];
                if c == 0 {
                    continue;
                }
                for mult in 0..=k as usize {
                    let (d2, s2) = (d + mult, s + mult * value);
                    if d2 > n || s2 > n {
                        break;
                    }
                    next[d2][s2] += c;
                }
            }
        }
        counts = next;
    }
    if n == 0 {
        return 1;
    }
    let mut total = 0u128;
    for d in 1..=n {
        let rest = n - d;
        for a in 0..=rest {
            total += counts[d][a] * counts[d][rest - a];
        }
    }
    total
}

/// Counts gathered from one enumeration of weight-`n` symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedCounts {
    pub k: u32,
    pub n: u32,
    /// `cphi_k(n)`
    pub total: u128,
    /// `cphi_k(m, n)` keyed by color difference `m`.
    pub by_difference: BTreeMap<i64, u128>,
    /// `Psi_(k,l)(n)`, the number of symbols of order `l`, keyed by `l | k`.
    pub by_order: BTreeMap<u32, u128>,
    /// Symbols of full order `k`.
    pub overline: u128,
    /// `c_k(j, n)` for `j = 0..k`: full-order symbols with color difference `= j (mod k)`.
    pub classes: Vec<u128>,
}

pub fn refined_counts(k: u32, n: u32) -> RefinedCounts {
    let mut by_difference = BTreeMap::new();
    let mut by_order: BTreeMap<u32, u128> = divisors(k as u64).into_iter().map(|d| (d as u32, 0)).collect();
    let mut classes = vec![0u128; k as usize];
    let mut total = 0;
    for s in enumerate_symbols(k, n) {
        total += 1;
        let m = s.color_difference();
        *by_difference.entry(m).or_insert(0) += 1;
        let ord = s.order();
        *by_order.get_mut(&ord).expect("order divides k") += 1;
        if ord == k {
            classes[m.rem_euclid(k as i64) as usize] += 1;
        }
    }
    RefinedCounts {
        k,
        n,
        total,
        overline: by_order[&k],
        by_difference,
        by_order,
        classes,
    }
}

/// Refined table for weights `0..=n_max` by enumeration.
pub fn refined_table(k: u32, n_max: u32) -> Result<BivariateTable> {
    let mut full = BTreeMap::new();
    for n in 0..=n_max {
        for (m, c) in refined_counts(k, n).by_difference {
            full.insert((m, n), c);
        }
    }
    BivariateTable::from_full(k as usize, n_max, &full)
}

/// `sum_{d | k} mu(d) cphi_(k/d)(n/d)`, with terms at non-integral `n/d` dropped.
pub fn overline_via_mobius<F>(k: u64, n: i64, mut cphi: F) -> Result<BigInt>
where
    F: FnMut(u64, i64) -> Result<BigInt>,
{
    let mut acc = BigInt::zero();
    for d in divisors(k) {
        let mu = mobius(d);
        if mu == 0 || n % d as i64 != 0 {
            continue;
        }
        acc += cphi(k / d, n / d as i64)? * mu;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(value: u32, color: u32) -> ColoredPart {
        ColoredPart { value, color }
    }

    fn sym(top: &[(u32, u32)], bottom: &[(u32, u32)]) -> FrobeniusSymbol {
        let row = |r: &[(u32, u32)]| r.iter().map(|&(v, c)| p(v, c)).collect();
        FrobeniusSymbol::new(2, row(top), row(bottom)).unwrap()
    }

    #[test]
    fn nine_two_colored_symbols_of_two() {
        let got: std::collections::HashSet<_> = enumerate_symbols(2, 2).into_iter().collect();
        let expected = [
            sym(&[(1, 1)], &[(0, 1)]),
            sym(&[(1, 1)], &[(0, 2)]),
            sym(&[(1, 2)], &[(0, 1)]),
            sym(&[(1, 2)], &[(0, 2)]),
            sym(&[(0, 1)], &[(1, 1)]),
            sym(&[(0, 2)], &[(1, 1)]),
            sym(&[(0, 1)], &[(1, 2)]),
            sym(&[(0, 2)], &[(1, 2)]),
            sym(&[(0, 2), (0, 1)], &[(0, 2), (0, 1)]),
        ];
        assert_eq!(got.len(), 9);
        assert!(expected.iter().all(|s| got.contains(s)));
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_symbols(1, 3).len(), 3);
        assert_eq!(enumerate_symbols(3, 1).len(), 9);
        assert_eq!(enumerate_symbols(1, 0).len(), 1);
        assert_eq!(enumerate_phi(2, 3), 5);
        assert_eq!(enumerate_phi(2, 1), 1);
        let partitions = [1, 1, 2, 3, 5, 7, 11, 15, 22];
        for (n, &pn) in partitions.iter().enumerate() {
            assert_eq!(enumerate_phi(1, n as u32), pn);
            assert_eq!(enumerate_symbols(1, n as u32).len() as u128, pn);
        }
    }

    #[test]
    fn orders_and_differences() {
        assert_eq!(sym(&[(0, 2), (0, 1)], &[(0, 2), (0, 1)]).order(), 1);
        assert_eq!(sym(&[(1, 1)], &[(0, 1)]).order(), 2);
        let s = sym(&[(1, 1)], &[(0, 2)]);
        assert_eq!(s.color_difference(), -1);
        assert_eq!(s.swap_rows().color_difference(), 1);
        assert_eq!(enumerate_symbols(1, 0)[0].color_difference(), 0);
        assert_eq!(s.to_string(), "(1_1 | 0_2)");
    }

    #[test]
    fn refined_two_two() {
        let r = refined_counts(2, 2);
        assert_eq!(r.total, 9);
        assert_eq!(r.by_order[&1], 1);
        assert_eq!(r.by_order[&2], 8);
        assert_eq!(r.overline, 8);
        assert_eq!(r.classes, vec![4, 4]);
        assert_eq!(r.by_difference.into_iter().collect::<Vec<_>>(), vec![(-1, 2), (0, 5), (1, 2)]);
    }

    #[test]
    fn mobius_overline() {
        let counts = |k: u64, n: i64| Ok(BigInt::from(enumerate_symbols(k as u32, n as u32).len()));
        assert_eq!(overline_via_mobius(2, 2, counts).unwrap(), BigInt::from(8));
        assert_eq!(overline_via_mobius(5, 1, counts).unwrap(), BigInt::from(25));
    }
}
