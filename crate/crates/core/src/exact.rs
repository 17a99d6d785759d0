//! Exact stack-number counts by collapsing structures to cores.
//!
//! Three tables are built bottom-up for a fixed `k`:
//!
//! * `T*(n, h)`: k-noncrossing diagrams on `[n]` with `h` arcs, no 1-arcs and
//!   no beta-arcs, by inclusion-exclusion over marked 1-, beta2- and
//!   beta3-arcs;
//! * `C*(n, h)`: the cores among them (every stack of length one), by
//!   inverting the stack-collapse relation
//!   `T*(n, h) = sum_b C(h-1, b) C*(n-2b, h-b)`;
//! * `T(n, t)`: k-noncrossing, tau-canonical structures with `t` stacks, by
//!   re-inflating each core arc into a stack of length at least `tau`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::bigcombinat::{
    binomial, lambda_multinomial, ratio, to_count, BigCount, BinomialTable, ExactRatio, SignedCount,
};
use crate::error::{Error, Result};
use crate::matchings::PerfectMatchings;

/// `T*` and `C*` for one `k` and all `n <= max_n`.
#[derive(Debug, Clone)]
pub struct CountTable {
    k: u32,
    max_n: usize,
    matchings: PerfectMatchings,
    tstar: Vec<Vec<BigCount>>,
    corestar: Vec<Vec<BigCount>>,
    zero: BigCount,
}

/// Coefficients of `(1 + y + y^2)^j` for `j <= max_j`.
fn trinomial_rows(max_j: usize) -> Vec<Vec<BigCount>> {
    let mut rows = vec![vec![BigCount::one()]];
    for j in 1..=max_j {
        let prev: &Vec<BigCount> = &rows[j - 1];
        let at = |i: isize| -> BigCount {
            if i < 0 || i as usize >= prev.len() {
                BigCount::zero()
            } else {
                prev[i as usize].clone()
            }
        };
        let row = (0..=2 * j as isize).map(|r| at(r) + at(r - 1) + at(r - 2)).collect();
        rows.push(row);
    }
    rows
}

/// Inclusion-exclusion for `T*(n, h)`, regrouped.
///
/// Marking `j1` 1-arcs, `j2` beta2-arcs and `j3` beta3-arcs contributes
/// `(-1)^J lambda(n, j1, j2, j3) f_k(m, l)` with `J = j1+j2+j3`,
/// `m = n-2j1-3j2-4j3` and `l = n-2h-j2-2j3`. With `r = j2 + 2 j3` the term
/// only depends on `(J, r)`:
///
/// `lambda * f_k(m, l) = J!/(j1! j2! j3!) * C(n-J-r, J) C(n-2J-r, 2(h-J)) f_k(2(h-J))`
///
/// and summing the multinomial over `j2 + 2 j3 = r` gives the trinomial
/// coefficient `[y^r] (1 + y + y^2)^J`.
fn tstar_regrouped(
    n: usize,
    h: usize,
    matchings: &PerfectMatchings,
    binom: &BinomialTable,
    trinomials: &[Vec<BigCount>],
) -> Result<BigCount> {
    if 2 * h > n {
        return Ok(BigCount::zero());
    }
    let n = n as i64;
    let mut total = SignedCount::zero();
    for (j, tri_row) in trinomials.iter().enumerate().take(h + 1) {
        let pairs = h - j;
        let mut inner = BigCount::zero();
        for (r, tri) in tri_row.iter().enumerate() {
            let r = r as i64;
            let j = j as i64;
            let a = binom.get(n - j - r, j);
            if a.is_zero() {
                continue;
            }
            let b = binom.get(n - 2 * j - r, 2 * pairs as i64);
            if b.is_zero() {
                continue;
            }
            inner += tri * a * b;
        }
        if inner.is_zero() {
            continue;
        }
        let term = BigInt::from(inner * matchings.perfect(pairs));
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    to_count(total, || format!("T*_{}(n={n}, h={h})", matchings.k()))
}

/// Inclusion-exclusion for `T*(n, h)` written as the plain triple sum over
/// `(j1, j2, j3)`. Slow; kept as an independent check of the regrouped form.
pub fn tstar_inclusion_exclusion(matchings: &PerfectMatchings, n: usize, h: usize) -> Result<BigCount> {
    let (n, h) = (n as i64, h as i64);
    let mut total = SignedCount::zero();
    for j1 in 0..=h {
        for j2 in 0..=h - j1 {
            for j3 in 0..=h - j1 - j2 {
                let lambda = lambda_multinomial(n, j1, j2, j3);
                if lambda.is_zero() {
                    continue;
                }
                let m = n - 2 * j1 - 3 * j2 - 4 * j3;
                let isolated = n - 2 * h - j2 - 2 * j3;
                let f = matchings.partial(m, isolated);
                let term = BigInt::from(lambda * f);
                if (j1 + j2 + j3) % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
        }
    }
    to_count(total, || format!("T*_{}(n={n}, h={h})", matchings.k()))
}

fn check_k(k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    Ok(())
}

fn check_tau(tau: u32) -> Result<()> {
    if tau < 1 {
        return Err(Error::InvalidParameter(format!("tau must be at least 1, got {tau}")));
    }
    Ok(())
}

impl CountTable {
    /// Builds `T*` and `C*` for all `n <= max_n`.
    pub fn build(k: u32, max_n: usize) -> Result<Self> {
        check_k(k)?;
        Self::from_matchings(PerfectMatchings::compute(k, max_n / 2)?, max_n)
    }

    /// Same as [`CountTable::build`] with an existing `f_k(2n)` table, which must
    /// cover `n <= max_n / 2`.
    pub fn from_matchings(matchings: PerfectMatchings, max_n: usize) -> Result<Self> {
        if matchings.max_pairs() < max_n / 2 {
            return Err(Error::InvalidParameter(format!(
                "matching table covers {} pairs, need {}",
                matchings.max_pairs(),
                max_n / 2
            )));
        }
        let k = matchings.k();
        let binom = BinomialTable::new(max_n);
        let trinomials = trinomial_rows(max_n / 2);

        let tstar: Vec<Vec<BigCount>> = (0..=max_n)
            .into_par_iter()
            .map(|n| {
                (0..=n / 2)
                    .map(|h| tstar_regrouped(n, h, &matchings, &binom, &trinomials))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;

        let corestar: Vec<Vec<BigCount>> = (0..=max_n)
            .into_par_iter()
            .map(|n| {
                (0..=n / 2)
                    .map(|h| corestar_from(&tstar, &binom, k, n, h))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;

        Ok(CountTable { k, max_n, matchings, tstar, corestar, zero: BigCount::zero() })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn matchings(&self) -> &PerfectMatchings {
        &self.matchings
    }

    /// `T*[n][h]` rows, `h <= n/2`.
    pub fn tstar_rows(&self) -> &[Vec<BigCount>] {
        &self.tstar
    }

    /// `C*[n][h]` rows, `h <= n/2`.
    pub fn corestar_rows(&self) -> &[Vec<BigCount>] {
        &self.corestar
    }

    fn lookup<'a>(&'a self, rows: &'a [Vec<BigCount>], n: i64, h: i64) -> &'a BigCount {
        if n < 0 || h < 0 {
            return &self.zero;
        }
        let row = rows.get(n as usize).unwrap_or_else(|| {
            panic!("count table covers n <= {}, asked for {}", self.max_n, n)
        });
        row.get(h as usize).unwrap_or(&self.zero)
    }

    pub fn tstar(&self, n: i64, h: i64) -> &BigCount {
        self.lookup(&self.tstar, n, h)
    }

    pub fn corestar(&self, n: i64, h: i64) -> &BigCount {
        self.lookup(&self.corestar, n, h)
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::InvalidParameter(format!(
                "count table covers n <= {}, asked for {}",
                self.max_n, n
            )));
        }
        Ok(())
    }

    /// Number of k-noncrossing, tau-canonical structures on `[n]` with exactly
    /// `t` stacks.
    pub fn count_structures(&self, tau: u32, n: usize, t: usize) -> Result<BigCount> {
        check_tau(tau)?;
        self.check_n(n)?;
        if t == 0 {
            // Only the structure of isolated vertices; n = 0 gives the empty structure.
            return Ok(BigCount::one());
        }
        if t > n / 2 {
            return Ok(BigCount::zero());
        }
        let (tau, n, t) = (tau as i64, n as i64, t as i64);
        let mut total = BigCount::zero();
        for h in (t * tau)..=(n / 2) {
            let mult = binomial((1 - tau) * t + h - 1, t - 1);
            if mult.is_zero() {
                continue;
            }
            total += mult * self.corestar(n + 2 * t - 2 * h, t);
        }
        Ok(total)
    }

    /// `T(n, t)` for `t = 0..=n/2`.
    pub fn row(&self, tau: u32, n: usize) -> Result<Vec<BigCount>> {
        (0..=n / 2).map(|t| self.count_structures(tau, n, t)).collect()
    }

    pub fn distribution(&self, tau: u32, n: usize) -> Result<StackDistribution> {
        let counts = self.row(tau, n)?;
        StackDistribution::from_counts(self.k, tau, n, counts)
    }
}

fn corestar_from(
    tstar: &[Vec<BigCount>],
    binom: &BinomialTable,
    k: u32,
    n: usize,
    h: usize,
) -> Result<BigCount> {
    if h == 0 {
        return Ok(BigCount::one());
    }
    let get = |n: i64, h: i64| -> Option<&BigCount> {
        if n < 0 {
            None
        } else {
            tstar[n as usize].get(h as usize)
        }
    };
    let (ni, hi) = (n as i64, h as i64);
    let mut total = SignedCount::zero();
    for b in 0..hi {
        let Some(ts) = get(ni - 2 * hi + 2 * b + 2, b + 1) else {
            continue;
        };
        if ts.is_zero() {
            continue;
        }
        let term = BigInt::from(binom.get(hi - 1, b) * ts);
        if (hi - b - 1) % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    to_count(total, || format!("C*_{k}(n={n}, h={h})"))
}

/// `T*_{k}(n, h)`.
pub fn tstar(k: u32, n: usize, h: usize) -> Result<BigCount> {
    Ok(CountTable::build(k, n)?.tstar(n as i64, h as i64).clone())
}

/// `C*_{k}(n, h)`.
pub fn corestar(k: u32, n: usize, h: usize) -> Result<BigCount> {
    Ok(CountTable::build(k, n)?.corestar(n as i64, h as i64).clone())
}

/// `T_{k,tau}(n, t)`.
pub fn count_structures(k: u32, tau: u32, n: usize, t: usize) -> Result<BigCount> {
    check_k(k)?;
    check_tau(tau)?;
    CountTable::build(k, n)?.count_structures(tau, n, t)
}

/// Exact law of the stack number of a uniformly random structure on `[n]`.
pub fn distribution(k: u32, tau: u32, n: usize) -> Result<StackDistribution> {
    check_k(k)?;
    check_tau(tau)?;
    CountTable::build(k, n)?.distribution(tau, n)
}

/// Exact probability mass function of the stack number.
#[derive(Debug, Clone, PartialEq)]
pub struct StackDistribution {
    pub n: usize,
    pub k: u32,
    pub tau: u32,
    /// `T(n, t)` for `t = 0..=n/2`.
    pub counts: Vec<BigCount>,
    pub total: BigCount,
    pub probabilities: Vec<ExactRatio>,
}

impl StackDistribution {
    pub fn from_counts(k: u32, tau: u32, n: usize, counts: Vec<BigCount>) -> Result<Self> {
        let total: BigCount = counts.iter().sum();
        if total.is_zero() {
            return Err(Error::InternalConsistency(format!(
                "no structures counted for k={k}, tau={tau}, n={n}"
            )));
        }
        let probabilities = counts.iter().map(|c| ratio(c, &total)).collect();
        Ok(StackDistribution { n, k, tau, counts, total, probabilities })
    }

    /// Largest `t` with positive probability.
    pub fn max_support(&self) -> usize {
        self.counts.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn probability(&self, t: usize) -> ExactRatio {
        self.probabilities.get(t).cloned().unwrap_or_else(ExactRatio::zero)
    }
}

/// Exact mean and variance of the stack number.
pub fn moments(dist: &StackDistribution) -> (ExactRatio, ExactRatio) {
    let mut first = BigCount::zero();
    let mut second = BigCount::zero();
    for (t, c) in dist.counts.iter().enumerate() {
        first += c * t;
        second += c * (t * t);
    }
    let mean = ratio(&first, &dist.total);
    let variance = ratio(&second, &dist.total) - &mean * &mean;
    (mean, variance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn big(v: u64) -> BigCount {
        BigCount::from(v)
    }

    fn q(num: i64, den: i64) -> ExactRatio {
        ExactRatio::new(num.into(), den.into())
    }

    #[test]
    fn trinomials() {
        let rows = trinomial_rows(3);
        let as_u: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|c| c.to_u64_digits().first().copied().unwrap_or(0)).collect())
            .collect();
        assert_eq!(as_u[2], vec![1, 2, 3, 2, 1]);
        assert_eq!(as_u[3], vec![1, 3, 6, 7, 6, 3, 1]);
    }

    #[test]
    fn tstar_examples() {
        assert_eq!(tstar(2, 5, 1).unwrap(), big(1));
        assert_eq!(tstar(2, 4, 1).unwrap(), big(0));
        for n in 0..10 {
            assert_eq!(tstar(3, n, 0).unwrap(), big(1));
        }
    }

    #[test]
    fn corestar_examples() {
        assert_eq!(corestar(2, 5, 1).unwrap(), big(1));
        assert_eq!(corestar(2, 4, 1).unwrap(), big(0));
        for n in 0..10 {
            assert_eq!(corestar(2, n, 0).unwrap(), big(1));
        }
    }

    #[test]
    fn structure_examples() {
        assert_eq!(count_structures(2, 3, 9, 1).unwrap(), big(1));
        assert_eq!(count_structures(2, 3, 8, 1).unwrap(), big(0));
        for n in 0..12 {
            assert_eq!(count_structures(3, 3, n, 0).unwrap(), big(1));
        }
        assert_eq!(count_structures(2, 3, 9, 7).unwrap(), big(0));
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(count_structures(2, 0, 9, 1), Err(Error::InvalidParameter(_))));
        assert!(matches!(count_structures(1, 3, 9, 1), Err(Error::InvalidParameter(_))));
        let table = CountTable::build(2, 10).unwrap();
        assert!(matches!(table.count_structures(3, 11, 1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn regrouped_matches_triple_sum() {
        for k in 2..=4u32 {
            let table = CountTable::build(k, 40).unwrap();
            for n in 0..=40usize {
                for h in 0..=n / 2 {
                    let direct = tstar_inclusion_exclusion(table.matchings(), n, h).unwrap();
                    assert_eq!(table.tstar(n as i64, h as i64), &direct, "k={k} n={n} h={h}");
                }
            }
        }
    }

    #[test]
    fn collapse_relation_round_trips() {
        // T*(n, h) = sum_b C(h-1, b) C*(n-2b, h-b)
        let table = CountTable::build(3, 30).unwrap();
        for n in 0..=30i64 {
            for h in 1..=n / 2 {
                let sum: BigCount = (0..h)
                    .map(|b| binomial(h - 1, b) * table.corestar(n - 2 * b, h - b))
                    .sum();
                assert_eq!(&sum, table.tstar(n, h), "n={n} h={h}");
            }
        }
    }

    #[test]
    fn agrees_with_oracle_small() {
        for k in [2u32, 3] {
            let table = CountTable::build(k, 10).unwrap();
            for n in 0..=10usize {
                for h in 0..=n / 2 {
                    assert_eq!(table.tstar(n as i64, h as i64), &oracle::enumerate_tstar(n, k, h).unwrap());
                    assert_eq!(
                        table.corestar(n as i64, h as i64),
                        &oracle::enumerate_corestar(n, k, h).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn distribution_examples() {
        let d = distribution(2, 3, 9).unwrap();
        assert_eq!(d.probabilities[..2], [q(1, 2), q(1, 2)]);
        assert_eq!(d.max_support(), 1);
        let d = distribution(2, 3, 5).unwrap();
        assert_eq!(d.probability(0), q(1, 1));
        assert_eq!(d.max_support(), 0);
        for n in [0, 1, 17, 40] {
            let d = distribution(3, 3, n).unwrap();
            let sum: ExactRatio = d.probabilities.iter().sum();
            assert_eq!(sum, q(1, 1));
        }
    }

    #[test]
    fn moment_examples() {
        let point = StackDistribution::from_counts(2, 3, 5, vec![big(1), big(0)]).unwrap();
        assert_eq!(moments(&point), (q(0, 1), q(0, 1)));
        let coin = StackDistribution::from_counts(2, 3, 9, vec![big(1), big(1)]).unwrap();
        assert_eq!(moments(&coin), (q(1, 2), q(1, 4)));
    }
}
