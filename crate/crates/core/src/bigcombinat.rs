//! Arbitrary-precision counting primitives.
//!
//! All exact counts are [`BigCount`] (nonnegative big integers) and all exact
//! probabilities and series coefficients are [`ExactRatio`] (reduced big
//! rationals with positive denominator). Out-of-range binomial and
//! multinomial arguments evaluate to zero so that inclusion-exclusion sums can
//! run over rectangular index ranges.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Nonnegative exact count.
pub type BigCount = BigUint;

/// Signed intermediate used by alternating sums.
pub type SignedCount = BigInt;

/// Exact rational, always stored in lowest terms with a positive denominator.
pub type ExactRatio = BigRational;

/// Default number of Pascal rows a [`BinomialTable`] may grow to.
pub const DEFAULT_BINOMIAL_CAP: usize = 1200;

/// `C(n, k)`, zero when `k < 0`, `k > n` or `n < 0`.
pub fn binomial(n: i64, k: i64) -> BigCount {
    if n < 0 || k < 0 || k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigCount::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// The multinomial `(n-j1-2j2-3j3; j1, j2, j3, n-2j1-3j2-4j3)`.
///
/// Counts the placements of `j1` one-arcs, `j2` two-arcs with an isolated
/// midpoint and `j3` three-arcs with two isolated interior points among `n`
/// vertices. Zero whenever any implied entry is negative.
pub fn lambda_multinomial(n: i64, j1: i64, j2: i64, j3: i64) -> BigCount {
    if j1 < 0 || j2 < 0 || j3 < 0 {
        return BigCount::zero();
    }
    let rest = n - 2 * j1 - 3 * j2 - 4 * j3;
    if rest < 0 {
        return BigCount::zero();
    }
    let top = n - j1 - 2 * j2 - 3 * j3;
    binomial(top, j1) * binomial(top - j1, j2) * binomial(top - j1 - j2, j3)
}

/// `n!` for `n >= 0`.
pub fn factorial(n: u64) -> BigCount {
    (1..=n).fold(BigCount::one(), |acc, i| acc * i)
}

/// `(2n-1)!!`, the number of perfect matchings on `2n` points.
pub fn double_factorial_odd(n: u64) -> BigCount {
    (1..=n).fold(BigCount::one(), |acc, i| acc * (2 * i - 1))
}

/// Converts a signed intermediate into a count, rejecting negative values.
pub fn to_count(value: SignedCount, what: impl FnOnce() -> String) -> Result<BigCount> {
    match value.sign() {
        Sign::Minus => Err(Error::InternalConsistency(format!(
            "{} evaluated to the negative value {}",
            what(),
            value
        ))),
        _ => Ok(value.magnitude().clone()),
    }
}

/// Exact ratio `num / den` of two counts. `den` must be nonzero.
pub fn ratio(num: &BigCount, den: &BigCount) -> ExactRatio {
    ExactRatio::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

/// Lossy rendering of an exact ratio.
pub fn ratio_to_f64(value: &ExactRatio) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Pascal triangle memo.
///
/// Rows are added on demand up to `cap`; once grown the table is read-only
/// and can be shared between threads.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    rows: Vec<Vec<BigCount>>,
    cap: usize,
    zero: BigCount,
}

impl BinomialTable {
    pub fn new(rows: usize) -> Self {
        Self::with_cap(rows, DEFAULT_BINOMIAL_CAP.max(rows))
    }

    pub fn with_cap(rows: usize, cap: usize) -> Self {
        let mut table = BinomialTable {
            rows: vec![vec![BigCount::one()]],
            cap,
            zero: BigCount::zero(),
        };
        table
            .ensure(rows.min(cap))
            .expect("row count already clamped to cap");
        table
    }

    /// Largest `n` currently stored.
    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Grows the table so that every `C(m, .)` with `m <= n` is stored.
    pub fn ensure(&mut self, n: usize) -> Result<()> {
        if n > self.cap {
            return Err(Error::InvalidParameter(format!(
                "binomial table row {} exceeds cap {}",
                n, self.cap
            )));
        }
        while self.rows.len() <= n {
            let prev = self.rows.last().expect("row 0 always present");
            let mut row = Vec::with_capacity(prev.len() + 1);
            row.push(BigCount::one());
            for w in prev.windows(2) {
                row.push(&w[0] + &w[1]);
            }
            row.push(BigCount::one());
            self.rows.push(row);
        }
        Ok(())
    }

    /// `C(n, k)` from the table; zero outside `0 <= k <= n`.
    ///
    /// Panics if `n` is beyond the rows grown so far.
    pub fn get(&self, n: i64, k: i64) -> &BigCount {
        if n < 0 || k < 0 || k > n {
            return &self.zero;
        }
        let row = self.rows.get(n as usize).unwrap_or_else(|| {
            panic!("binomial table holds rows up to {}, asked for {}", self.max_n(), n)
        });
        &row[k as usize]
    }
}
