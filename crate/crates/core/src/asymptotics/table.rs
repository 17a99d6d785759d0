//! Reference grid of limiting means and variances.

use serde::Serialize;

use super::{clt_params, SingularityResult, VERIFIED_K, VERIFIED_TAU};
use crate::error::{Error, Result};

/// Published `(mu, sigma^2)` for one `(k, tau)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table1Reference {
    pub k: u32,
    pub tau: u32,
    pub mu: f64,
    pub sigma2: f64,
    /// Breaks the row/column monotone pattern of the rest of the grid.
    pub suspected_typo: bool,
}

const fn cell(k: u32, tau: u32, mu: f64, sigma2: f64) -> Table1Reference {
    Table1Reference { k, tau, mu, sigma2, suspected_typo: false }
}

const fn odd(k: u32, tau: u32, mu: f64, sigma2: f64) -> Table1Reference {
    Table1Reference { k, tau, mu, sigma2, suspected_typo: true }
}

const REFERENCE: [Table1Reference; 30] = [
    cell(2, 3, 0.090323, 0.0189975),
    cell(2, 4, 0.071677, 0.0131316),
    cell(2, 5, 0.059591, 0.0098165),
    cell(2, 6, 0.051092, 0.0077233),
    cell(2, 7, 0.044774, 0.0062991),
    cell(3, 3, 0.115473, 0.0086760),
    cell(3, 4, 0.086554, 0.0055685),
    cell(3, 5, 0.069467, 0.0039688),
    odd(3, 6, 0.058149, 0.0026885),
    odd(3, 7, 0.050083, 0.0017584),
    cell(4, 3, 0.123509, 0.0076977),
    cell(4, 4, 0.091737, 0.0049917),
    cell(4, 5, 0.073166, 0.0035769),
    cell(4, 6, 0.060964, 0.0027313),
    cell(4, 7, 0.052319, 0.0021788),
    cell(5, 3, 0.128157, 0.0070210),
    odd(5, 4, 0.094768, 0.0020037),
    cell(5, 5, 0.075345, 0.0033114),
    cell(5, 6, 0.062629, 0.0025364),
    cell(5, 7, 0.053648, 0.0020277),
    cell(6, 3, 0.131353, 0.0065187),
    odd(6, 4, 0.119551, 0.0080515),
    cell(6, 5, 0.076864, 0.0031162),
    cell(6, 6, 0.063794, 0.0023936),
    cell(6, 7, 0.054580, 0.0019171),
    cell(7, 3, 0.133748, 0.0061254),
    cell(7, 4, 0.098461, 0.0040797),
    cell(7, 5, 0.078016, 0.0029639),
    cell(7, 6, 0.064680, 0.0022823),
    cell(7, 7, 0.055291, 0.0018310),
];

/// Published value for `(k, tau)`, if the grid has one.
pub fn table1_reference(k: u32, tau: u32) -> Option<Table1Reference> {
    REFERENCE.iter().copied().find(|c| c.k == k && c.tau == tau)
}

/// Reference cells taking part in a violation of the grid's monotone
/// pattern: `mu` and `sigma^2` decreasing in `tau`, `mu` increasing and
/// `sigma^2` decreasing in `k`.
pub fn monotone_breaks() -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut mark = |a: &Table1Reference, b: &Table1Reference| {
        for c in [(a.k, a.tau), (b.k, b.tau)] {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    };
    for a in &REFERENCE {
        if let Some(b) = table1_reference(a.k, a.tau + 1) {
            if b.mu >= a.mu || b.sigma2 >= a.sigma2 {
                mark(a, &b);
            }
        }
        if let Some(b) = table1_reference(a.k + 1, a.tau) {
            if b.mu <= a.mu || b.sigma2 >= a.sigma2 {
                mark(a, &b);
            }
        }
    }
    out.sort_unstable();
    out
}

/// One computed cell next to its published value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub k: u32,
    pub tau: u32,
    pub computed: std::result::Result<SingularityResult, String>,
    pub reference: Option<Table1Reference>,
    pub dev_mu: Option<f64>,
    pub dev_sigma2: Option<f64>,
}

impl Table1Row {
    pub fn suspected_typo(&self) -> bool {
        self.reference.is_some_and(|r| r.suspected_typo)
    }

    /// Largest absolute deviation from the published cell.
    pub fn max_deviation(&self) -> Option<f64> {
        Some(self.dev_mu?.max(self.dev_sigma2?))
    }
}

/// Computes the grid `ks x taus`; a failing cell is recorded and the rest
/// still computed.
pub fn table1(ks: &[u32], taus: &[u32]) -> Result<Vec<Table1Row>> {
    for &k in ks {
        if !VERIFIED_K.contains(&k) {
            return Err(Error::InvalidParameter(format!("table k must lie in 2..=9, got {k}")));
        }
    }
    for &tau in taus {
        if !VERIFIED_TAU.contains(&tau) {
            return Err(Error::InvalidParameter(format!("table tau must lie in 3..=7, got {tau}")));
        }
    }
    let mut rows = Vec::with_capacity(ks.len() * taus.len());
    for &k in ks {
        for &tau in taus {
            let computed = clt_params(k, tau).map_err(|e| e.to_string());
            let reference = table1_reference(k, tau);
            let (dev_mu, dev_sigma2) = match (&computed, reference) {
                (Ok(c), Some(r)) => (Some((c.mu - r.mu).abs()), Some((c.sigma2 - r.sigma2).abs())),
                _ => (None, None),
            };
            rows.push(Table1Row { k, tau, computed, reference, dev_mu, dev_sigma2 });
        }
    }
    Ok(rows)
}
