//! Coefficientwise checks of the functional equations linking cores,
//! stack-collapsed structures, matchings and the bivariate generating
//! function.

use serde::Serialize;

use crate::bigcombinat::BigCount;
use crate::error::Result;
use crate::exact::CountTable;
use crate::matchings::PerfectMatchings;
use crate::series::{
    bivariate_t_with, matching_composition, substitute_table, u0_series, BivariateSeries, Ring, UPoly,
};

/// Tables fed into the identities. Fields are public so a test can perturb
/// an entry and watch the check fail.
#[derive(Debug, Clone)]
pub struct IdentityInputs {
    pub tstar: Vec<Vec<BigCount>>,
    pub corestar: Vec<Vec<BigCount>>,
    pub matchings: PerfectMatchings,
}

impl IdentityInputs {
    pub fn from_table(table: &CountTable) -> Self {
        IdentityInputs {
            tstar: table.tstar_rows().to_vec(),
            corestar: table.corestar_rows().to_vec(),
            matchings: table.matchings().clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
    /// First `(n, t)` in order of `n`, then `t`, where the two sides differ.
    pub first_mismatch: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub k: u32,
    pub tau: u32,
    pub order: usize,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn first_mismatch(lhs: &BivariateSeries, rhs: &BivariateSeries, order: usize) -> Option<(usize, usize)> {
    for n in 0..=order {
        let (a, b) = (lhs.coeff(n), rhs.coeff(n));
        let top = a.degree().max(b.degree());
        for t in 0..=top.max(0) as usize {
            if a.coeff(t) != b.coeff(t) {
                return Some((n, t));
            }
        }
    }
    None
}

fn check(name: &'static str, lhs: &BivariateSeries, rhs: &BivariateSeries, order: usize) -> IdentityCheck {
    let first_mismatch = first_mismatch(lhs, rhs, order);
    IdentityCheck { name, holds: first_mismatch.is_none(), first_mismatch }
}

fn x_monomial(c: UPoly, power: usize, order: usize) -> BivariateSeries {
    BivariateSeries::monomial(c, power, order)
}

/// Runs all identity checks to `x^order` (`order` must not exceed the table range).
pub fn check_identities(inputs: &IdentityInputs, k: u32, tau: u32, order: usize) -> Result<IdentityReport> {
    let one = BivariateSeries::one(order);
    let u = x_monomial(UPoly::u(), 0, order);
    let x2 = x_monomial(UPoly::one(), 2, order);
    let target = bivariate_t_with(&inputs.matchings, tau, order)?;
    let mut checks = Vec::with_capacity(4);

    // Cores with every stack slot filled: u x^(2 tau - 2) / (1 - x^2).
    let z = x_monomial(UPoly::u(), 2 * tau as usize - 2, order).mul(&one.sub(&x2).reciprocal()?);
    let lhs = substitute_table(&inputs.corestar, &z, order);
    checks.push(check("core_substitution", &lhs, &target, order));

    // Stack collapse: T*_{k,1} against C*_k at u / (1 - u x^2).
    let tstar_u = substitute_table(&inputs.tstar, &u, order);
    let collapse = u.mul(&one.sub(&u.mul(&x2)).reciprocal()?);
    let cores = substitute_table(&inputs.corestar, &collapse, order);
    checks.push(check("stack_collapse", &tstar_u, &cores, order));

    // T*_{k,1} by arc count equals the matching composition with formal w.
    let composed = matching_composition(&u, &inputs.matchings, order)?;
    checks.push(check("matching_composition", &tstar_u, &composed, order));

    // Same relation at w = u0, which is the bivariate structure series.
    let u0 = u0_series(&UPoly::u(), tau, order)?;
    let at_u0 = substitute_table(&inputs.tstar, &u0, order);
    checks.push(check("matching_composition_at_u0", &at_u0, &target, order));

    Ok(IdentityReport { k, tau, order, checks })
}

/// Builds the tables and runs [`check_identities`].
pub fn identity_checks(k: u32, tau: u32, order: usize) -> Result<IdentityReport> {
    let table = CountTable::build(k, order)?;
    check_identities(&IdentityInputs::from_table(&table), k, tau, order)
}
