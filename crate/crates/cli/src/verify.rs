//! Verification drivers shared by the `verify` command and the acceptance
//! suite. A mismatch is report content; only faults are errors.

use std::path::Path;

use serde::Serialize;
use stackdist::asymptotics::{clt_params, discretized_normal, normal_compare, NormalComparison};
use stackdist::bigcombinat::ratio_to_f64;
use stackdist::identities::{check_identities, IdentityInputs};
use stackdist::oracle::{enumerate_with_cap, StructureFilter, Tally};
use stackdist::series::{bivariate_t_with, univariate_t_with};
use stackdist::{cache, BigCount, CountTable, ExactRatio, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: &'static str,
    pub checks: Vec<CheckLine>,
}

impl VerifyReport {
    fn new(suite: &'static str) -> Self {
        VerifyReport { suite, checks: Vec::new() }
    }

    fn push(&mut self, name: String, passed: bool, detail: String) {
        self.checks.push(CheckLine { name, passed, detail });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{mark} {} {}: {}\n", self.suite, c.name, c.detail));
        }
        let overall = if self.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!("{overall} {}\n", self.suite));
        out
    }
}

/// Count table for `k` up to `max_n`, reading and refreshing the matching
/// cache when a directory is given.
pub fn count_table(k: u32, max_n: usize, cache_dir: Option<&Path>) -> Result<CountTable> {
    match cache_dir {
        Some(dir) => CountTable::from_matchings(cache::load_or_compute(dir, k, max_n / 2)?, max_n),
        None => CountTable::build(k, max_n),
    }
}

/// Mismatches between a formula row and an enumerated tally, as `(index, formula, oracle)`.
fn diff_row(formula: &[BigCount], oracle: &std::collections::BTreeMap<usize, BigCount>) -> Option<(usize, BigCount, BigCount)> {
    let len = formula.len().max(oracle.keys().next_back().map_or(0, |&t| t + 1));
    (0..len).find_map(|t| {
        let a = formula.get(t).cloned().unwrap_or_default();
        let b = oracle.get(&t).cloned().unwrap_or_default();
        (a != b).then_some((t, a, b))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub lambda_min: u32,
    pub cap: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            lambda_min: stackdist::oracle::DEFAULT_LAMBDA_MIN,
            cap: stackdist::oracle::DEFAULT_BRUTE_FORCE_CAP,
        }
    }
}

/// Exact agreement of `count_structures`, `T*` and `C*` with brute-force
/// enumeration for all `n <= n_max`.
pub fn verify_oracle(ks: &[u32], taus: &[u32], n_max: usize, opts: OracleOptions, cache_dir: Option<&Path>) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("oracle");
    for &k in ks {
        let table = count_table(k, n_max, cache_dir)?;
        for (label, filter, rows) in [
            ("tstar", StructureFilter::tstar(k), table.tstar_rows()),
            ("corestar", StructureFilter::corestar(k), table.corestar_rows()),
        ] {
            let mut first = None;
            for (n, row) in rows.iter().enumerate().take(n_max + 1) {
                let tally = enumerate_with_cap(n, &filter, Tally::Arcs, opts.cap)?;
                if let Some(d) = diff_row(row, &tally) {
                    first = Some((n, d));
                    break;
                }
            }
            let detail = match &first {
                None => format!("n <= {n_max} exact"),
                Some((n, (h, a, b))) => format!("n={n} h={h}: formula {a}, oracle {b}"),
            };
            report.push(format!("{label} k={k}"), first.is_none(), detail);
        }
        for &tau in taus {
            let filter = StructureFilter::structures(k, tau).with_lambda_min(opts.lambda_min);
            let mut first = None;
            for n in 0..=n_max {
                let tally = enumerate_with_cap(n, &filter, Tally::Stacks, opts.cap)?;
                if let Some(d) = diff_row(&table.row(tau, n)?, &tally) {
                    first = Some((n, d));
                    break;
                }
            }
            let detail = match &first {
                None => format!("n <= {n_max} exact"),
                Some((n, (t, a, b))) => format!("n={n} t={t}: formula {a}, oracle {b}"),
            };
            report.push(format!("count k={k} tau={tau}"), first.is_none(), detail);
        }
    }
    Ok(report)
}

/// Generating-function coefficients against exact-enum: totals for
/// `n <= n_uni` and per-`(n, t)` for `n <= n_bi`.
pub fn verify_series(ks: &[u32], taus: &[u32], n_uni: usize, n_bi: usize, cache_dir: Option<&Path>) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("series");
    for &k in ks {
        let n_max = n_uni.max(n_bi);
        let table = count_table(k, n_max, cache_dir)?;
        for &tau in taus {
            {
                let uni = univariate_t_with(table.matchings(), tau, n_uni)?;
                let mut bad = None;
                for n in 0..=n_uni {
                    let total: BigCount = table.row(tau, n)?.iter().sum();
                    if uni.coeff(n) != ExactRatio::from_integer(total.clone().into()) {
                        bad = Some((n, total, uni.coeff(n)));
                        break;
                    }
                }
                let detail = match &bad {
                    None => format!("n <= {n_uni} exact"),
                    Some((n, a, b)) => format!("n={n}: exact-enum {a}, series {b}"),
                };
                report.push(format!("univariate k={k} tau={tau}"), bad.is_none(), detail);
            }
            {
                let bi = bivariate_t_with(table.matchings(), tau, n_bi)?;
                let mut bad = None;
                'outer: for n in 0..=n_bi {
                    let row = table.row(tau, n)?;
                    let poly = bi.coeff(n);
                    let top = (poly.degree().max(0) as usize + 1).max(row.len());
                    for t in 0..top {
                        let a = row.get(t).cloned().unwrap_or_default();
                        if poly.coeff(t) != ExactRatio::from_integer(a.clone().into()) {
                            bad = Some((n, t, a, poly.coeff(t)));
                            break 'outer;
                        }
                    }
                }
                let detail = match &bad {
                    None => format!("n <= {n_bi}, all t exact"),
                    Some((n, t, a, b)) => format!("n={n} t={t}: exact-enum {a}, series {b}"),
                };
                report.push(format!("bivariate k={k} tau={tau}"), bad.is_none(), detail);
            }
        }
    }
    Ok(report)
}

/// The four functional-equation checks to `x^order`.
pub fn verify_identities(ks: &[u32], taus: &[u32], order: usize, cache_dir: Option<&Path>) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("identities");
    for &k in ks {
        let table = count_table(k, order, cache_dir)?;
        let inputs = IdentityInputs::from_table(&table);
        for &tau in taus {
            let r = check_identities(&inputs, k, tau, order)?;
            for c in r.checks {
                let detail = match c.first_mismatch {
                    None => format!("order {order} exact"),
                    Some((n, t)) => format!("first mismatch at n={n} t={t}"),
                };
                report.push(format!("{} k={k} tau={tau}", c.name), c.holds, detail);
            }
        }
    }
    Ok(report)
}

/// One `n` of the normal-approximation study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalPoint {
    pub n: usize,
    pub comparison: NormalComparison,
    /// `(t, exact pmf, discretized normal pmf)` over `t = 0..=n/2`.
    pub pmf: Vec<(usize, f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalThresholds {
    /// Largest allowed `mean_gap / mu` at the largest `n`.
    pub mean_rel: f64,
    /// Largest allowed `var_gap / sigma^2` at the largest `n`.
    pub var_rel: f64,
}

impl Default for NormalThresholds {
    fn default() -> Self {
        NormalThresholds { mean_rel: 0.1, var_rel: 0.15 }
    }
}

/// Exact laws against `Normal(n mu, n sigma^2)`: total variation must
/// decrease along `ns`, and the moment gaps at the largest `n` stay within
/// the thresholds.
pub fn verify_normal(
    k: u32,
    tau: u32,
    ns: &[usize],
    limits: NormalThresholds,
    cache_dir: Option<&Path>,
) -> Result<(VerifyReport, Vec<NormalPoint>)> {
    let mut report = VerifyReport::new("normal");
    let params = clt_params(k, tau)?;
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let table = count_table(k, n_max, cache_dir)?;
    let mut points = Vec::with_capacity(ns.len());
    for &n in ns {
        let dist = table.distribution(tau, n)?;
        let comparison = normal_compare(&dist, &params);
        let (normal, _) = discretized_normal(dist.probabilities.len(), n as f64 * params.mu, n as f64 * params.sigma2);
        let pmf = dist
            .probabilities
            .iter()
            .zip(normal)
            .enumerate()
            .map(|(t, (p, q))| (t, ratio_to_f64(p), q))
            .collect();
        points.push(NormalPoint { n, comparison, pmf });
    }
    let tvs: Vec<String> = points.iter().map(|p| format!("n={}: {:.6}", p.n, p.comparison.tv_distance)).collect();
    let decreasing = points.windows(2).all(|w| w[1].comparison.tv_distance < w[0].comparison.tv_distance);
    report.push(format!("tv_decreasing k={k} tau={tau}"), decreasing, tvs.join(", "));
    if let Some(last) = points.last() {
        let c = last.comparison;
        let mean_ok = c.mean_gap <= limits.mean_rel * params.mu;
        let var_ok = c.var_gap <= limits.var_rel * params.sigma2;
        report.push(
            format!("mean_gap n={}", last.n),
            mean_ok,
            format!("{:.6} vs limit {:.6}", c.mean_gap, limits.mean_rel * params.mu),
        );
        report.push(
            format!("var_gap n={}", last.n),
            var_ok,
            format!("{:.7} vs limit {:.7}", c.var_gap, limits.var_rel * params.sigma2),
        );
    }
    Ok((report, points))
}
