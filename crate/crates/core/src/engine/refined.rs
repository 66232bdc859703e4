//! Two-variable refinement by color difference: the coefficient of `t^m q^n` in
//! `CT_z prod_{j=1..k} (z t^j q; q)_inf (z^-1 t^-j; q)_inf`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

/// Counts indexed by `(m, n)`, stored for `m >= 0` and mirrored for `m < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateTable {
    k: usize,
    n_max: u32,
    entries: BTreeMap<(i64, u32), u128>,
}

impl BivariateTable {
    /// Build from a full table, checking the `m <-> -m` symmetry.
    pub fn from_full(k: usize, n_max: u32, full: &BTreeMap<(i64, u32), u128>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (&(m, n), &c) in full {
            let mirror = full.get(&(-m, n)).copied().unwrap_or(0);
            if mirror != c {
                return Err(Error::InvalidInput(format!(
                    "table not symmetric at (m={m}, n={n}): {c} vs {mirror}"
                )));
            }
            if m >= 0 && c != 0 {
                entries.insert((m, n), c);
            }
        }
        Ok(Self { k, n_max, entries })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn get(&self, m: i64, n: u32) -> u128 {
        self.entries.get(&(m.abs(), n)).copied().unwrap_or(0)
    }

    /// Largest `|m|` with a nonzero entry.
    pub fn m_max(&self) -> i64 {
        self.entries.keys().map(|&(m, _)| m).max().unwrap_or(0)
    }

    /// `sum_m entry(m, n)`.
    pub fn row_total(&self, n: u32) -> u128 {
        (-self.m_max()..=self.m_max()).map(|m| self.get(m, n)).sum()
    }

    /// Nonzero entries of weight `n` in increasing `m`, both signs.
    pub fn row(&self, n: u32) -> Vec<(i64, u128)> {
        (-self.m_max()..=self.m_max())
            .map(|m| (m, self.get(m, n)))
            .filter(|&(_, c)| c != 0)
            .collect()
    }
}

/// `1 / (q; q)_r` truncated at `q^n_max`.
fn partitions_bounded(r: usize, n_max: usize) -> Vec<i128> {
    let mut c = vec![0i128; n_max + 1];
    c[0] = 1;
    for part in 1..=r.min(n_max) {
        for i in part..=n_max {
            c[i] += c[i - part];
        }
    }
    c
}

/// Smallest total of `r_i (r_i - 1) / 2` over `factors` nonnegative `r_i` summing to `z`.
fn min_negative_cost(z: i64, factors: i64) -> i64 {
    if factors == 0 {
        return if z == 0 { 0 } else { i64::MAX };
    }
    let (q, rem) = (z / factors, z % factors);
    let tri = |r: i64| r * (r - 1) / 2;
    rem * tri(q + 1) + (factors - rem) * tri(q)
}

type State = (i64, i64, usize);

pub fn refined_cphi_ct(k: usize, n_max: u32) -> Result<BivariateTable> {
    if k == 0 {
        return Err(Error::InvalidInput("refined count needs k >= 1".into()));
    }
    let nm = n_max as usize;
    let inv: Vec<Vec<i128>> = (0..=nm + 1).map(|r| partitions_bounded(r, nm)).collect();
    let mut states: HashMap<State, i128> = HashMap::new();
    states.insert((0, 0, 0), 1);

    // Factors in the order (+1, -1, +2, -2, ...); each positive factor
    // contributes z^r t^(jr) q^(r(r+1)/2) / (q;q)_r, each negative one
    // z^-r t^-(jr) q^(r(r-1)/2) / (q;q)_r, both with sign (-1)^r.
    for j in 1..=k as i64 {
        for positive in [true, false] {
            let plus_left = k as i64 - j;
            let minus_left = if positive { k as i64 - j + 1 } else { k as i64 - j };
            let mut next: HashMap<State, i128> = HashMap::new();
            for (&(z, t, q), &c) in &states {
                for r in 0usize.. {
                    let base = if positive { r * (r + 1) / 2 } else { r * (r.max(1) - 1) / 2 };
                    if q + base > nm {
                        break;
                    }
                    let ri = r as i64;
                    let (z2, t2) = if positive { (z + ri, t + j * ri) } else { (z - ri, t - j * ri) };
                    let sign = if r % 2 == 0 { 1 } else { -1 };
                    let series = &inv[r.min(nm + 1)];
                    for extra in 0..=nm - q - base {
                        let w = series[extra];
                        if w == 0 {
                            continue;
                        }
                        let q2 = q + base + extra;
                        let budget = (nm - q2) as i64;
                        let ok = if z2 < 0 {
                            plus_left > 0 && -z2 <= budget
                        } else {
                            min_negative_cost(z2, minus_left) <= budget
                        };
                        if !ok {
                            continue;
                        }
                        let delta = c
                            .checked_mul(w * sign)
                            .ok_or_else(|| Error::Overflow("refined constant term".into()))?;
                        let slot = next.entry((z2, t2, q2)).or_insert(0);
                        *slot = slot
                            .checked_add(delta)
                            .ok_or_else(|| Error::Overflow("refined constant term".into()))?;
                    }
                    if r > nm + 1 {
                        break;
                    }
                }
            }
            next.retain(|_, v| *v != 0);
            states = next;
        }
    }

    let mut full = BTreeMap::new();
    for ((z, t, q), c) in states {
        if z != 0 {
            continue;
        }
        if c < 0 {
            return Err(Error::InvalidInput(format!("negative constant-term count at t^{t} q^{q}")));
        }
        full.insert((t, q as u32), c as u128);
    }
    BivariateTable::from_full(k, n_max, &full)
}
