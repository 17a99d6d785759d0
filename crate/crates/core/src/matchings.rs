//! k-noncrossing perfect and partial matchings.
//!
//! Perfect matchings on `2n` points with no `k` mutually crossing arcs are in
//! bijection with oscillating tableaux of length `2n` whose shapes never have
//! more than `k - 1` rows. We count those walks level by level: if `W_i(s)`
//! is the number of walks of length `i` from the empty shape to `s`, then
//! reversing a walk keeps it inside the chamber, so
//! `f_k(2n) = sum_s W_n(s)^2`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::bigcombinat::{binomial, BigCount, ExactRatio};
use crate::error::{Error, Result};
use crate::series::PowerSeries;

/// Shape of an oscillating-tableau step: `k - 1` weakly decreasing row lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChamberState(Box<[u16]>);

impl ChamberState {
    pub fn empty(rows: usize) -> Self {
        ChamberState(vec![0; rows].into_boxed_slice())
    }

    pub fn rows(&self) -> &[u16] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(|&r| r as usize).sum()
    }

    /// All shapes reachable by adding or removing a single box.
    fn neighbours(&self) -> impl Iterator<Item = ChamberState> + '_ {
        let rows = &self.0;
        let n = rows.len();
        (0..n).flat_map(move |r| {
            let add = (r == 0 || rows[r] < rows[r - 1]).then(|| {
                let mut next = rows.clone();
                next[r] += 1;
                ChamberState(next)
            });
            let remove = (rows[r] > 0 && (r + 1 == n || rows[r] > rows[r + 1])).then(|| {
                let mut next = rows.clone();
                next[r] -= 1;
                ChamberState(next)
            });
            add.into_iter().chain(remove)
        })
    }
}

fn check_k(k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    Ok(())
}

/// `f_k(2n)` for `n = 0..=max_pairs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectMatchings {
    k: u32,
    counts: Vec<BigCount>,
}

impl PerfectMatchings {
    pub fn compute(k: u32, max_pairs: usize) -> Result<Self> {
        check_k(k)?;
        let rows = (k - 1) as usize;
        let mut counts = Vec::with_capacity(max_pairs + 1);

        let mut shapes = vec![ChamberState::empty(rows)];
        let mut weights = vec![BigCount::one()];

        for level in 0..=max_pairs {
            let total = weights.iter().fold(BigCount::zero(), |acc, w| acc + w * w);
            counts.push(total);
            if level == max_pairs {
                break;
            }
            let mut next_index: HashMap<ChamberState, usize> = HashMap::with_capacity(shapes.len() * 2);
            let mut next_shapes = Vec::with_capacity(shapes.len() * 2);
            let mut next_weights: Vec<BigCount> = Vec::with_capacity(shapes.len() * 2);
            for (shape, weight) in shapes.iter().zip(&weights) {
                for succ in shape.neighbours() {
                    match next_index.get(&succ) {
                        Some(&i) => next_weights[i] += weight,
                        None => {
                            next_index.insert(succ.clone(), next_shapes.len());
                            next_shapes.push(succ);
                            next_weights.push(weight.clone());
                        }
                    }
                }
            }
            shapes = next_shapes;
            weights = next_weights;
        }
        Ok(PerfectMatchings { k, counts })
    }

    /// Wraps counts loaded from elsewhere (the on-disk cache).
    pub fn from_counts(k: u32, counts: Vec<BigCount>) -> Result<Self> {
        check_k(k)?;
        if counts.is_empty() {
            return Err(Error::InvalidParameter("empty matching table".into()));
        }
        Ok(PerfectMatchings { k, counts })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn max_pairs(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[BigCount] {
        &self.counts
    }

    /// `f_k(2n)`; panics if `n` is beyond the computed range.
    pub fn perfect(&self, pairs: usize) -> &BigCount {
        self.counts.get(pairs).unwrap_or_else(|| {
            panic!(
                "f_{}(2n) table holds n <= {}, asked for {}",
                self.k,
                self.max_pairs(),
                pairs
            )
        })
    }

    /// `f_k(m, l)`: partial matchings on `m` points with exactly `l` isolated
    /// points. Isolated points never cross anything, so this is
    /// `C(m, l) f_k(m - l)`.
    pub fn partial(&self, m: i64, isolated: i64) -> BigCount {
        if m < 0 || isolated < 0 || isolated > m || (m - isolated) % 2 != 0 {
            return BigCount::zero();
        }
        binomial(m, isolated) * self.perfect(((m - isolated) / 2) as usize)
    }
}

/// Perfect-matching tables for several `k`, built in parallel.
#[derive(Debug, Clone, Default)]
pub struct MatchingTable {
    tables: HashMap<u32, PerfectMatchings>,
}

impl MatchingTable {
    pub fn build(ks: &[u32], max_pairs: usize) -> Result<Self> {
        let built: Result<Vec<PerfectMatchings>> = ks
            .par_iter()
            .map(|&k| PerfectMatchings::compute(k, max_pairs))
            .collect();
        let tables = built?.into_iter().map(|t| (t.k, t)).collect();
        Ok(MatchingTable { tables })
    }

    pub fn insert(&mut self, table: PerfectMatchings) {
        self.tables.insert(table.k, table);
    }

    pub fn get(&self, k: u32) -> Option<&PerfectMatchings> {
        self.tables.get(&k)
    }

    pub fn perfect(&self, k: u32, pairs: usize) -> Option<&BigCount> {
        self.tables.get(&k).and_then(|t| t.counts.get(pairs))
    }

    pub fn partial(&self, k: u32, m: i64, isolated: i64) -> Option<BigCount> {
        let t = self.tables.get(&k)?;
        let pairs = (m - isolated).max(0) / 2;
        (pairs as usize <= t.max_pairs()).then(|| t.partial(m, isolated))
    }
}

/// Number of perfect matchings on `2 * pairs` points with no `k` mutually
/// crossing arcs.
pub fn count_perfect(k: u32, pairs: usize) -> Result<BigCount> {
    Ok(PerfectMatchings::compute(k, pairs)?.counts.swap_remove(pairs))
}

/// Number of partial matchings on `m` points with exactly `isolated`
/// unmatched points and no `k` mutually crossing arcs.
pub fn count_partial(k: u32, m: usize, isolated: usize) -> Result<BigCount> {
    check_k(k)?;
    if isolated > m || !(m - isolated).is_multiple_of(2) {
        return Ok(BigCount::zero());
    }
    let pairs = (m - isolated) / 2;
    Ok(binomial(m as i64, isolated as i64) * count_perfect(k, pairs)?)
}

/// `F_k(x) = sum_n f_k(2n) x^(2n)` truncated at `x^order`.
pub fn series_fk(k: u32, order: usize) -> Result<PowerSeries> {
    let table = PerfectMatchings::compute(k, order / 2)?;
    let coeffs = (0..=order)
        .map(|i| {
            if i % 2 == 0 {
                ExactRatio::from_integer(table.perfect(i / 2).clone().into())
            } else {
                ExactRatio::zero()
            }
        })
        .collect();
    Ok(PowerSeries::from_coeffs(coeffs))
}
