//! Brute-force enumeration of diagrams on small vertex sets.
//!
//! Everything here works directly from the definitions (crossings, stacks,
//! arc lengths, beta-arcs) and is the ground truth the closed-form counts are
//! checked against.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::bigcombinat::BigCount;
use crate::error::{Error, Result};

/// Largest vertex count enumerated unless the caller raises it.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 14;

/// Minimum arc length `j - i` of an RNA structure.
///
/// Calibrated against the exact formulas: the closed-form pipeline counts
/// structures whose arcs all satisfy `j - i >= 4`.
pub const DEFAULT_LAMBDA_MIN: u32 = 4;

/// Partial matching on the vertices `1..=n`, arcs sorted by left endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    n: usize,
    arcs: Vec<(u32, u32)>,
}

impl Diagram {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut arcs: Vec<(u32, u32)> = arcs.into_iter().collect();
        arcs.sort_unstable();
        let mut used = vec![false; n + 1];
        for &(i, j) in &arcs {
            if i < 1 || i >= j || j as usize > n {
                return Err(Error::InvalidParameter(format!(
                    "arc ({i}, {j}) is not a valid arc over [{n}]"
                )));
            }
            for v in [i, j] {
                if std::mem::replace(&mut used[v as usize], true) {
                    return Err(Error::InvalidParameter(format!(
                        "vertex {v} lies on more than one arc"
                    )));
                }
            }
        }
        Ok(Diagram { n, arcs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(u32, u32)] {
        &self.arcs
    }

    fn partners(&self) -> Vec<u32> {
        let mut partner = vec![0; self.n + 2];
        for &(i, j) in &self.arcs {
            partner[i as usize] = j;
            partner[j as usize] = i;
        }
        partner
    }
}

/// A maximal run of parallel arcs `(i, j), (i+1, j-1), ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stack {
    pub outer: (u32, u32),
    pub len: usize,
}

fn crosses(a: (u32, u32), b: (u32, u32)) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

fn max_clique(adj: &[u64], candidates: u64, size: usize, best: &mut usize) {
    if candidates == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + candidates.count_ones() as usize <= *best {
        return;
    }
    let v = candidates.trailing_zeros() as usize;
    max_clique(adj, candidates & adj[v], size + 1, best);
    max_clique(adj, candidates & !(1u64 << v), size, best);
}

fn crossing_number(arcs: &[(u32, u32)]) -> usize {
    assert!(arcs.len() <= 64, "crossing check supports at most 64 arcs");
    if arcs.is_empty() {
        return 0;
    }
    let adj: Vec<u64> = arcs
        .iter()
        .map(|&a| {
            arcs.iter()
                .enumerate()
                .filter(|&(_, &b)| crosses(a, b))
                .fold(0u64, |m, (idx, _)| m | (1 << idx))
        })
        .collect();
    let all = if arcs.len() == 64 { u64::MAX } else { (1u64 << arcs.len()) - 1 };
    let mut best = 0;
    max_clique(&adj, all, 0, &mut best);
    best
}

/// Size of the largest set of pairwise crossing arcs.
pub fn max_mutually_crossing(d: &Diagram) -> usize {
    crossing_number(&d.arcs)
}

fn stacks_of(arcs: &[(u32, u32)], partner: &[u32]) -> Vec<Stack> {
    let is_arc = |i: u32, j: u32| i >= 1 && (i as usize) < partner.len() && partner[i as usize] == j;
    arcs.iter()
        .filter(|&&(i, j)| !(i > 1 && is_arc(i - 1, j + 1)))
        .map(|&(i, j)| {
            let mut len = 1;
            while i + (len as u32) < j - (len as u32) && is_arc(i + len as u32, j - len as u32) {
                len += 1;
            }
            Stack { outer: (i, j), len }
        })
        .collect()
}

/// Splits the arcs into maximal stacks, ordered by outer left endpoint.
pub fn stack_decomposition(d: &Diagram) -> Vec<Stack> {
    stacks_of(&d.arcs, &d.partners())
}

/// Which diagrams an enumeration keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructureFilter {
    /// Reject diagrams with `k` or more mutually crossing arcs.
    pub k: u32,
    /// Minimum stack length.
    pub tau: u32,
    /// Minimum arc length `j - i`.
    pub lambda_min: u32,
    pub forbid_one_arcs: bool,
    /// Reject `(i, i+2)` with `i+1` isolated and `(i, i+3)` with `i+1, i+2` isolated.
    pub forbid_beta: bool,
    /// Keep only diagrams whose stacks all have length one.
    pub core_only: bool,
}

impl StructureFilter {
    /// k-noncrossing, tau-canonical structures with the default arc length.
    pub fn structures(k: u32, tau: u32) -> Self {
        StructureFilter {
            k,
            tau,
            lambda_min: DEFAULT_LAMBDA_MIN,
            forbid_one_arcs: false,
            forbid_beta: false,
            core_only: false,
        }
    }

    /// k-noncrossing diagrams without 1-arcs or beta-arcs.
    pub fn tstar(k: u32) -> Self {
        StructureFilter {
            k,
            tau: 1,
            lambda_min: 1,
            forbid_one_arcs: true,
            forbid_beta: true,
            core_only: false,
        }
    }

    /// Cores (all stacks of length one) without 1-arcs or beta-arcs.
    pub fn corestar(k: u32) -> Self {
        StructureFilter { core_only: true, ..Self::tstar(k) }
    }

    pub fn with_lambda_min(self, lambda_min: u32) -> Self {
        StructureFilter { lambda_min, ..self }
    }

    fn validate(&self) -> Result<()> {
        if self.k < 2 || self.tau < 1 || self.lambda_min < 1 {
            return Err(Error::InvalidParameter(format!(
                "filter needs k >= 2, tau >= 1, lambda_min >= 1 (got k={}, tau={}, lambda_min={})",
                self.k, self.tau, self.lambda_min
            )));
        }
        Ok(())
    }

    fn accepts(&self, arcs: &[(u32, u32)], partner: &[u32]) -> bool {
        let isolated = |v: u32| partner[v as usize] == 0;
        for &(i, j) in arcs {
            let len = j - i;
            if self.forbid_one_arcs && len == 1 {
                return false;
            }
            if self.forbid_beta
                && ((len == 2 && isolated(i + 1)) || (len == 3 && isolated(i + 1) && isolated(i + 2)))
            {
                return false;
            }
        }
        if arcs.len() >= self.k as usize && crossing_number(arcs) >= self.k as usize {
            return false;
        }
        if self.tau > 1 || self.core_only {
            let stacks = stacks_of(arcs, partner);
            if stacks.iter().any(|s| s.len < self.tau as usize) {
                return false;
            }
            if self.core_only && stacks.iter().any(|s| s.len != 1) {
                return false;
            }
        }
        true
    }
}

/// Statistic an enumeration tallies by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tally {
    Stacks,
    Arcs,
}

struct Walker<'a> {
    n: u32,
    filter: &'a StructureFilter,
    tally: Tally,
    partner: Vec<u32>,
    arcs: Vec<(u32, u32)>,
    counts: Vec<u64>,
}

impl Walker<'_> {
    fn new(n: usize, filter: &StructureFilter, tally: Tally) -> Walker<'_> {
        Walker {
            n: n as u32,
            filter,
            tally,
            partner: vec![0; n + 2],
            arcs: Vec::with_capacity(n / 2),
            counts: vec![0; n / 2 + 1],
        }
    }

    fn first_free(&self, from: u32) -> Option<u32> {
        (from..=self.n).find(|&v| self.partner[v as usize] == 0)
    }

    fn finish(&mut self) {
        if self.filter.accepts(&self.arcs, &self.partner) {
            let key = match self.tally {
                Tally::Arcs => self.arcs.len(),
                Tally::Stacks => stacks_of(&self.arcs, &self.partner).len(),
            };
            self.counts[key] += 1;
        }
    }

    /// Vertices `< v` are decided; `v` is the smallest undecided one.
    fn recurse(&mut self, v: Option<u32>) {
        let Some(v) = v else {
            self.finish();
            return;
        };
        // v stays isolated
        let next = self.first_free(v + 1);
        self.recurse(next);
        self.branch_matched(v);
    }

    fn branch_matched(&mut self, v: u32) {
        for w in (v + self.filter.lambda_min)..=self.n {
            if self.partner[w as usize] == 0 {
                self.link(v, w);
                let next = self.first_free(v + 1);
                self.recurse(next);
                self.unlink(v, w);
            }
        }
    }

    fn link(&mut self, v: u32, w: u32) {
        self.partner[v as usize] = w;
        self.partner[w as usize] = v;
        self.arcs.push((v, w));
    }

    fn unlink(&mut self, v: u32, w: u32) {
        self.partner[v as usize] = 0;
        self.partner[w as usize] = 0;
        self.arcs.pop();
    }
}

/// Tallies every diagram on `[n]` passing `filter`, with the given cap.
pub fn enumerate_with_cap(
    n: usize,
    filter: &StructureFilter,
    tally: Tally,
    cap: usize,
) -> Result<BTreeMap<usize, BigCount>> {
    filter.validate()?;
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let mut counts = vec![0u64; n / 2 + 1];
    if n == 0 {
        let mut w = Walker::new(0, filter, tally);
        w.recurse(None);
        counts = w.counts;
    } else {
        // Branches on the partner of vertex 1 (0 = isolated) run in parallel.
        let first_choices: Vec<u32> = std::iter::once(0)
            .chain((1 + filter.lambda_min)..=n as u32)
            .collect();
        let partials: Vec<Vec<u64>> = first_choices
            .par_iter()
            .map(|&w| {
                let mut walker = Walker::new(n, filter, tally);
                if w == 0 {
                    let next = walker.first_free(2);
                    walker.recurse(next);
                } else {
                    walker.link(1, w);
                    let next = walker.first_free(2);
                    walker.recurse(next);
                }
                walker.counts
            })
            .collect();
        for part in partials {
            for (acc, c) in counts.iter_mut().zip(part) {
                *acc += c;
            }
        }
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(t, c)| (t, BigCount::from(c)))
        .collect())
}

/// Structures on `[n]` passing `filter`, tallied by stack number.
pub fn enumerate_counts(n: usize, filter: &StructureFilter) -> Result<BTreeMap<usize, BigCount>> {
    enumerate_with_cap(n, filter, Tally::Stacks, DEFAULT_BRUTE_FORCE_CAP)
}

fn lookup(map: &BTreeMap<usize, BigCount>, key: usize) -> BigCount {
    map.get(&key).cloned().unwrap_or_default()
}

/// Direct count of k-noncrossing diagrams on `[n]` with `h` arcs, no 1-arcs
/// and no beta-arcs.
pub fn enumerate_tstar(n: usize, k: u32, h: usize) -> Result<BigCount> {
    let map = enumerate_with_cap(n, &StructureFilter::tstar(k), Tally::Arcs, DEFAULT_BRUTE_FORCE_CAP)?;
    Ok(lookup(&map, h))
}

/// Direct count of k-noncrossing cores on `[n]` with `t` arcs, no 1-arcs and
/// no beta-arcs.
pub fn enumerate_corestar(n: usize, k: u32, t: usize) -> Result<BigCount> {
    let map = enumerate_with_cap(n, &StructureFilter::corestar(k), Tally::Arcs, DEFAULT_BRUTE_FORCE_CAP)?;
    Ok(lookup(&map, t))
}

/// Perfect matchings on `two_n` points with fewer than `k` mutually crossing
/// arcs, by exhaustive search. Intended for `two_n <= 14`.
pub fn count_perfect_matchings(two_n: usize, k: u32) -> BigCount {
    fn go(free: &mut Vec<u32>, arcs: &mut Vec<(u32, u32)>, k: u32, count: &mut u64) {
        if free.is_empty() {
            if crossing_number(arcs) < k as usize {
                *count += 1;
            }
            return;
        }
        let v = free.remove(0);
        for idx in 0..free.len() {
            let w = free.remove(idx);
            arcs.push((v, w));
            go(free, arcs, k, count);
            arcs.pop();
            free.insert(idx, w);
        }
        free.insert(0, v);
    }
    if two_n % 2 == 1 {
        return BigCount::default();
    }
    let mut free: Vec<u32> = (1..=two_n as u32).collect();
    let mut count = 0;
    go(&mut free, &mut Vec::new(), k, &mut count);
    BigCount::from(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize, arcs: &[(u32, u32)]) -> Diagram {
        Diagram::new(n, arcs.iter().copied()).unwrap()
    }

    fn big(v: u64) -> BigCount {
        BigCount::from(v)
    }

    fn involutions(n: usize) -> u64 {
        let mut a = [1u64, 1u64];
        if n == 0 {
            return 1;
        }
        for m in 2..=n as u64 {
            a = [a[1], a[1] + (m - 1) * a[0]];
        }
        a[1]
    }

    #[test]
    fn diagram_validation() {
        assert!(Diagram::new(4, [(1, 3), (3, 4)]).is_err());
        assert!(Diagram::new(4, [(2, 2)]).is_err());
        assert!(Diagram::new(4, [(1, 5)]).is_err());
        assert_eq!(d(5, &[(3, 5), (1, 2)]).arcs(), &[(1, 2), (3, 5)]);
    }

    #[test]
    fn crossing_examples() {
        assert_eq!(max_mutually_crossing(&d(4, &[(1, 3), (2, 4)])), 2);
        assert_eq!(max_mutually_crossing(&d(4, &[(1, 4), (2, 3)])), 1);
        assert_eq!(max_mutually_crossing(&d(6, &[(1, 4), (2, 5), (3, 6)])), 3);
        assert_eq!(max_mutually_crossing(&d(3, &[])), 0);
    }

    #[test]
    fn stack_examples() {
        let s = stack_decomposition(&d(9, &[(1, 9), (2, 8), (3, 7)]));
        assert_eq!(s, vec![Stack { outer: (1, 9), len: 3 }]);
        assert!(stack_decomposition(&d(5, &[])).is_empty());
        let s = stack_decomposition(&d(12, &[(1, 9), (2, 8), (4, 12), (5, 11)]));
        assert_eq!(
            s,
            vec![Stack { outer: (1, 9), len: 2 }, Stack { outer: (4, 12), len: 2 }]
        );
    }

    #[test]
    fn adjacent_parallel_arcs_form_a_stack() {
        let s = stack_decomposition(&d(4, &[(1, 4), (2, 3)]));
        assert_eq!(s, vec![Stack { outer: (1, 4), len: 2 }]);
    }

    #[test]
    fn structure_count_examples() {
        let f = StructureFilter::structures(2, 3);
        let c9 = enumerate_counts(9, &f).unwrap();
        assert_eq!(c9, BTreeMap::from([(0, big(1)), (1, big(1))]));
        let c8 = enumerate_counts(8, &f).unwrap();
        assert_eq!(c8, BTreeMap::from([(0, big(1))]));
        for n in 1..=12 {
            let c = enumerate_counts(n, &StructureFilter::structures(3, 4)).unwrap();
            assert_eq!(c[&0], big(1), "n={n}");
        }
    }

    #[test]
    fn tstar_corestar_examples() {
        assert_eq!(enumerate_tstar(4, 2, 1).unwrap(), big(0));
        assert_eq!(enumerate_tstar(5, 2, 1).unwrap(), big(1));
        assert_eq!(enumerate_corestar(5, 2, 1).unwrap(), big(1));
        assert_eq!(enumerate_corestar(4, 2, 1).unwrap(), big(0));
        for n in 0..=10 {
            assert_eq!(enumerate_corestar(n, 3, 0).unwrap(), big(1));
            assert_eq!(enumerate_tstar(n, 3, 0).unwrap(), big(1));
        }
    }

    #[test]
    fn all_diagrams_are_involutions() {
        let open = StructureFilter {
            k: 64,
            tau: 1,
            lambda_min: 1,
            forbid_one_arcs: false,
            forbid_beta: false,
            core_only: false,
        };
        for n in 0..=12 {
            let total: BigCount = enumerate_counts(n, &open).unwrap().values().sum();
            assert_eq!(total, big(involutions(n)), "n={n}");
        }
    }

    #[test]
    fn filters_are_monotone() {
        let n = 12;
        let total = |f: StructureFilter| -> Vec<BigCount> {
            let m = enumerate_counts(n, &f).unwrap();
            (0..=n / 2).map(|t| lookup(&m, t)).collect()
        };
        let base = StructureFilter::structures(3, 2).with_lambda_min(2);
        let reference = total(base);
        let tighter = [
            StructureFilter { tau: 3, ..base },
            StructureFilter { lambda_min: 4, ..base },
            StructureFilter { k: 2, ..base },
        ];
        for f in tighter {
            for (a, b) in total(f).iter().zip(&reference) {
                assert!(a <= b, "{f:?}");
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_counts(15, &StructureFilter::structures(2, 3)).unwrap_err();
        assert_eq!(err, Error::CapExceeded { n: 15, cap: 14 });
        let ok = enumerate_with_cap(3, &StructureFilter::structures(2, 3), Tally::Stacks, 3);
        assert!(ok.is_ok());
    }

    #[test]
    fn invalid_filter_rejected() {
        let bad = StructureFilter { k: 1, ..StructureFilter::structures(2, 3) };
        assert!(matches!(enumerate_counts(5, &bad), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn perfect_matching_brute_force() {
        assert_eq!(count_perfect_matchings(6, 2), big(5));
        assert_eq!(count_perfect_matchings(6, 3), big(14));
        assert_eq!(count_perfect_matchings(6, 4), big(15));
        assert_eq!(count_perfect_matchings(5, 4), big(0));
    }
}
