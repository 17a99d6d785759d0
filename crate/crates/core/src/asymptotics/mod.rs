//! Singularity analysis of the stack-number generating function.
//!
//! For `u = e^s` the dominant singularity `gamma(s)` of the bivariate
//! generating function is the smallest positive root of
//! `psi_tau(z, s) = rho_k`. The limiting mean and variance of the stack
//! number per vertex follow from `gamma(0)`, `gamma'(0)` and `gamma''(0)`,
//! which are obtained by implicit differentiation of that equation.

mod jet;
mod psi;
mod table;

pub use jet::Jet;
pub use psi::{rho, w0, PsiEvaluator, PsiJets};
pub use table::{monotone_breaks, table1, table1_reference, Table1Reference, Table1Row};

use serde::Serialize;

use crate::bigcombinat::ratio_to_f64;
use crate::error::{Error, Result};
use crate::exact::{moments, StackDistribution};

/// `(k, tau)` range over which the singularity is known to be unique and
/// dominant.
pub const VERIFIED_K: std::ops::RangeInclusive<u32> = 2..=9;
pub const VERIFIED_TAU: std::ops::RangeInclusive<u32> = 3..=7;

/// Largest `|s|` accepted by the solver.
pub const MAX_SHIFT: f64 = 0.1;

/// Upper end of the root scan. Every `n` admits the structure with no arcs,
/// so the radius of convergence never exceeds 1.
const Z_CEILING: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Spacing of the bracketing scan.
    pub grid_step: f64,
    /// Required `|psi(gamma, s) - rho_k|`.
    pub tolerance: f64,
    /// Below this `|F_z|` the root is reported as degenerate.
    pub min_slope: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { grid_step: 1e-3, tolerance: 1e-13, min_slope: 1e-8 }
    }
}

/// Root of `psi(z, s) = rho_k` for one `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaSolution {
    pub gamma: f64,
    pub residual: f64,
    /// End of the scanned interval.
    pub z_max: f64,
}

/// Singularity and the limit law parameters derived from it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularityResult {
    pub k: u32,
    pub tau: u32,
    pub rho_k: f64,
    pub gamma0: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub mu: f64,
    pub sigma2: f64,
    pub residual: f64,
    pub tolerance: f64,
    /// `(k, tau)` lies outside `2..=9 x 3..=7`; computed but not covered by
    /// the uniqueness argument.
    pub unverified_regime: bool,
}

pub fn is_verified_regime(k: u32, tau: u32) -> bool {
    VERIFIED_K.contains(&k) && VERIFIED_TAU.contains(&tau)
}

fn check_params(k: u32, tau: u32, s: f64) -> Result<()> {
    if k < 2 || tau < 3 {
        return Err(Error::InvalidParameter(format!(
            "singularity analysis needs k >= 2 and tau >= 3, got k={k}, tau={tau}"
        )));
    }
    if s.is_nan() || s.abs() > MAX_SHIFT {
        return Err(Error::InvalidParameter(format!("|s| must be at most {MAX_SHIFT}, got {s}")));
    }
    Ok(())
}

/// First sign change of `f` on the grid `step, 2 step, ... <= limit`.
fn first_sign_change(f: impl Fn(f64) -> f64, step: f64, limit: f64) -> Option<(f64, f64)> {
    let mut lo = step;
    let mut f_lo = f(lo);
    let steps = (limit / step).floor() as usize;
    for i in 2..=steps {
        let hi = i as f64 * step;
        let f_hi = f(hi);
        if (f_lo < 0.0) != (f_hi < 0.0) {
            return Some((lo, hi));
        }
        lo = hi;
        f_lo = f_hi;
    }
    None
}

/// `0.99 x` the smallest positive zero of the `u0` or `v` denominators, capped at 1.
fn scan_limit(eval: &PsiEvaluator, s: f64, step: f64) -> f64 {
    let fine = step / 4.0;
    let pole = |g: &dyn Fn(f64) -> f64| first_sign_change(g, fine, Z_CEILING).map(|(_, hi)| hi);
    let d1 = pole(&|z| eval.u0_denominator(z, s));
    let d2 = pole(&|z| eval.v_numerator(z, s));
    let root = [d1, d2].into_iter().flatten().fold(f64::INFINITY, f64::min);
    if root.is_finite() {
        0.99 * root
    } else {
        Z_CEILING
    }
}

/// Minimal positive root `gamma(s)` of `psi_tau(z, s) = rho_k`.
pub fn solve_gamma(k: u32, tau: u32, s: f64) -> Result<GammaSolution> {
    solve_gamma_with(k, tau, s, &SolverOptions::default())
}

pub fn solve_gamma_with(k: u32, tau: u32, s: f64, opts: &SolverOptions) -> Result<GammaSolution> {
    check_params(k, tau, s)?;
    let eval = PsiEvaluator::new(k, tau);
    let rho = eval.rho();
    let z_max = scan_limit(&eval, s, opts.grid_step);
    let f = |z: f64| eval.psi(z, s) - rho;

    let (mut lo, mut hi) = first_sign_change(f, opts.grid_step, z_max)
        .ok_or(Error::NoRoot { k, tau, s, z_max })?;

    // The bracket must contain a single crossing.
    let probes = 64;
    let width = hi - lo;
    let changes = (0..probes)
        .map(|i| f(lo + width * i as f64 / probes as f64))
        .chain(std::iter::once(f(hi)))
        .collect::<Vec<_>>()
        .windows(2)
        .filter(|w| (w[0] < 0.0) != (w[1] < 0.0))
        .count();
    if changes != 1 {
        return Err(Error::AmbiguousRoot { k, tau, s, lo, hi });
    }

    // psi increases through the first crossing: f(lo) < 0 <= f(hi).
    let rising = f(lo) < 0.0;
    while hi - lo > f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut gamma = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    // One Newton polish; accepted only if it does not worsen the residual.
    let jet = eval.f(gamma, s);
    if jet.z != 0.0 {
        let cand = gamma - jet.v / jet.z;
        if cand > 0.0 && f(cand).abs() < f(gamma).abs() {
            gamma = cand;
        }
    }
    // The positive square root of u0 is only meaningful where u0 > 0.
    let (u0, v) = (eval.u0(gamma, s), eval.v_numerator(gamma, s));
    if !(u0 > 0.0 && v > 0.0) {
        return Err(Error::Domain(format!(
            "u0 = {u0:e}, v = {v:e} at z = {gamma} (k={k}, tau={tau}, s={s})"
        )));
    }
    let residual = f(gamma).abs();
    if residual > opts.tolerance {
        return Err(Error::InternalConsistency(format!(
            "root refinement stalled at residual {residual:e} (k={k}, tau={tau}, s={s})"
        )));
    }
    Ok(GammaSolution { gamma, residual, z_max })
}

/// `gamma(0)`, `gamma'(0)`, `gamma''(0)` and the limit-law parameters
/// `mu = -gamma'/gamma` and `sigma^2 = (gamma'/gamma)^2 - gamma''/gamma`.
pub fn clt_params(k: u32, tau: u32) -> Result<SingularityResult> {
    clt_params_with(k, tau, &SolverOptions::default())
}

pub fn clt_params_with(k: u32, tau: u32, opts: &SolverOptions) -> Result<SingularityResult> {
    let root = solve_gamma_with(k, tau, 0.0, opts)?;
    let g = root.gamma;
    let f = PsiEvaluator::new(k, tau).f(g, 0.0);
    if f.z.abs() < opts.min_slope {
        return Err(Error::DegenerateRoot { z: g, fz: f.z });
    }
    let g1 = -f.s / f.z;
    let g2 = -(f.zz * g1 * g1 + 2.0 * f.zs * g1 + f.ss) / f.z;
    Ok(assemble(k, tau, g, g1, g2, root.residual, opts.tolerance))
}

fn assemble(k: u32, tau: u32, g: f64, g1: f64, g2: f64, residual: f64, tolerance: f64) -> SingularityResult {
    let ratio = g1 / g;
    SingularityResult {
        k,
        tau,
        rho_k: rho(k),
        gamma0: g,
        gamma1: g1,
        gamma2: g2,
        mu: -ratio,
        sigma2: ratio * ratio - g2 / g,
        residual,
        tolerance,
        unverified_regime: !is_verified_regime(k, tau),
    }
}

/// Same parameters from five-point stencils of `gamma(s)` at
/// `s = 0, +-h, +-2h`.
pub fn clt_params_finite_difference(k: u32, tau: u32, h: f64) -> Result<SingularityResult> {
    let opts = SolverOptions::default();
    let at = |s: f64| solve_gamma_with(k, tau, s, &opts).map(|r| r.gamma);
    let (m2, m1, c, p1, p2) = (at(-2.0 * h)?, at(-h)?, at(0.0)?, at(h)?, at(2.0 * h)?);
    let g1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let g2 = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
    let residual = (PsiEvaluator::new(k, tau).psi(c, 0.0) - rho(k)).abs();
    Ok(assemble(k, tau, c, g1, g2, residual, opts.tolerance))
}

/// How far an exact stack-number law is from its normal approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalComparison {
    /// `1/2 sum_t |P(t) - N_t|` over all integers `t`, where `N_t` is the
    /// `Normal(n mu, n sigma^2)` mass of `[t - 1/2, t + 1/2]`.
    pub tv_distance: f64,
    /// `|E[t]/n - mu|`.
    pub mean_gap: f64,
    /// `|Var[t]/n - sigma^2|`.
    pub var_gap: f64,
}

fn normal_cdf(x: f64, mean: f64, sd: f64) -> f64 {
    if sd <= 0.0 {
        return if x >= mean { 1.0 } else { 0.0 };
    }
    0.5 * libm::erfc(-(x - mean) / (sd * std::f64::consts::SQRT_2))
}

/// Normal mass of `[t - 1/2, t + 1/2]` for every `t` in `0..len`, and the mass outside.
pub fn discretized_normal(len: usize, mean: f64, variance: f64) -> (Vec<f64>, f64) {
    let sd = variance.max(0.0).sqrt();
    let masses: Vec<f64> = (0..len)
        .map(|t| normal_cdf(t as f64 + 0.5, mean, sd) - normal_cdf(t as f64 - 0.5, mean, sd))
        .collect();
    let outside = normal_cdf(-0.5, mean, sd) + (1.0 - normal_cdf(len as f64 - 0.5, mean, sd));
    (masses, outside)
}

pub fn normal_compare(dist: &StackDistribution, params: &SingularityResult) -> NormalComparison {
    let n = dist.n as f64;
    let (mass, outside) = discretized_normal(dist.probabilities.len(), n * params.mu, n * params.sigma2);
    let inside: f64 = dist
        .probabilities
        .iter()
        .zip(&mass)
        .map(|(p, q)| (ratio_to_f64(p) - q).abs())
        .sum();
    let (mean, var) = moments(dist);
    let (mean, var) = (ratio_to_f64(&mean), ratio_to_f64(&var));
    let per_vertex = |x: f64| if dist.n == 0 { 0.0 } else { x / n };
    NormalComparison {
        tv_distance: 0.5 * (inside + outside),
        mean_gap: (per_vertex(mean) - params.mu).abs(),
        var_gap: (per_vertex(var) - params.sigma2).abs(),
    }
}
