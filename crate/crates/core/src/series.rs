//! Truncated formal power series over exact coefficient rings.
//!
//! [`PowerSeries`] has rational coefficients, [`BivariateSeries`] has
//! coefficients that are dense polynomials in a second variable `u`. Both
//! share the arithmetic of [`Series`]; products and compositions truncate at
//! the order of their operands.

use std::fmt;

use num_traits::{One, Zero};

use crate::bigcombinat::{BigCount, ExactRatio};
use crate::error::{Error, Result};
use crate::matchings::PerfectMatchings;

/// Exact commutative coefficient ring.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse when the element is a unit.
    fn inverse(&self) -> Option<Self>;
    fn from_count(value: &BigCount) -> Self;
}

impl Ring for ExactRatio {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_count(value: &BigCount) -> Self {
        ExactRatio::from_integer(value.clone().into())
    }
}

/// Dense polynomial in `u` with rational coefficients, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UPoly(Vec<ExactRatio>);

impl UPoly {
    pub fn from_coeffs(mut coeffs: Vec<ExactRatio>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn constant(c: ExactRatio) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The variable `u`.
    pub fn u() -> Self {
        UPoly(vec![<ExactRatio as Zero>::zero(), <ExactRatio as One>::one()])
    }

    /// `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn coeffs(&self) -> &[ExactRatio] {
        &self.0
    }

    pub fn coeff(&self, power: usize) -> ExactRatio {
        self.0.get(power).cloned().unwrap_or_else(<ExactRatio as Zero>::zero)
    }

    pub fn eval(&self, u: &ExactRatio) -> ExactRatio {
        self.0.iter().rev().fold(<ExactRatio as Zero>::zero(), |acc, c| acc * u + c)
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !Zero::is_zero(*c))
            .map(|(i, c)| format!("{c}*u^{i}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Ring for UPoly {
    fn zero() -> Self {
        UPoly(Vec::new())
    }
    fn one() -> Self {
        UPoly(vec![<ExactRatio as One>::one()])
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        let coeffs = (0..len).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Self::from_coeffs(coeffs)
    }
    fn sub(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        let coeffs = (0..len).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Self::from_coeffs(coeffs)
    }
    fn mul(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return Self::zero();
        }
        let mut out = vec![<ExactRatio as Zero>::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }
    fn neg(&self) -> Self {
        UPoly(self.0.iter().map(|c| -c).collect())
    }
    fn inverse(&self) -> Option<Self> {
        match self.0.as_slice() {
            [c] => Some(UPoly(vec![c.recip()])),
            _ => None,
        }
    }
    fn from_count(value: &BigCount) -> Self {
        Self::constant(ExactRatio::from_count(value))
    }
}

/// Power series in `x` truncated after `x^order`.
#[derive(Clone, PartialEq)]
pub struct Series<C: Ring> {
    coeffs: Vec<C>,
}

pub type PowerSeries = Series<ExactRatio>;
pub type BivariateSeries = Series<UPoly>;

impl<C: Ring> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl<C: Ring> Series<C> {
    /// Series with the given coefficients; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least its constant term");
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![C::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(C::one(), 0, order)
    }

    /// `c * x^power`, truncated.
    pub fn monomial(c: C, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> C {
        self.coeffs.get(power).cloned().unwrap_or_else(C::zero)
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Drops coefficients beyond `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order());
        Series { coeffs: self.coeffs[..=keep].to_vec() }
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|i| self.coeffs[i].add(&other.coeffs[i])).collect();
        Series { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|i| self.coeffs[i].sub(&other.coeffs[i])).collect();
        Series { coeffs }
    }

    pub fn scale(&self, c: &C) -> Self {
        Series { coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![C::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        Series { coeffs }
    }

    /// Multiplicative inverse via the coefficient recurrence
    /// `b_0 = 1/a_0`, `b_n = -(1/a_0) sum_{i=1..n} a_i b_{n-i}`.
    pub fn reciprocal(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inverse().ok_or_else(|| {
            Error::InvalidOperand(format!(
                "reciprocal needs an invertible constant term, got {:?}",
                self.coeffs[0]
            ))
        })?;
        let order = self.order();
        let mut out: Vec<C> = Vec::with_capacity(order + 1);
        out.push(inv0.clone());
        for n in 1..=order {
            let mut acc = C::zero();
            for i in 1..=n {
                if !self.coeffs[i].is_zero() {
                    acc = acc.add(&self.coeffs[i].mul(&out[n - i]));
                }
            }
            out.push(acc.mul(&inv0).neg());
        }
        Ok(Series { coeffs: out })
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// `g(a(x)) = sum_n g_n a(x)^n` for a series `a` with zero constant term.
    ///
    /// Used with `g(y) = sum f_k(2n) y^n` and `a = w x^2 / v^2`, which realises
    /// `F_k(sqrt(w) x / v)` without square roots.
    pub fn compose_even(g: &Self, a: &Self) -> Result<Self> {
        if !a.coeffs[0].is_zero() {
            return Err(Error::InvalidOperand(
                "inner series of a composition must have zero constant term".into(),
            ));
        }
        let order = a.order();
        let Some(val) = a.valuation() else {
            return Ok(Self::monomial(g.coeffs[0].clone(), 0, order));
        };
        // Terms a^n with n * val > order vanish after truncation.
        let top = g.order().min(order / val);
        let mut acc = Self::monomial(g.coeffs[top].clone(), 0, order);
        for n in (0..top).rev() {
            acc = acc.mul(a);
            acc.coeffs[0] = acc.coeffs[0].add(&g.coeffs[n]);
        }
        Ok(acc)
    }
}

impl BivariateSeries {
    /// Specialises `u` to a rational value.
    pub fn at_u(&self, u: &ExactRatio) -> PowerSeries {
        self.map(|p| p.eval(u))
    }

    /// `[x^n u^t]`.
    pub fn coeff_xu(&self, n: usize, t: usize) -> ExactRatio {
        self.coeffs.get(n).map(|p| p.coeff(t)).unwrap_or_else(<ExactRatio as Zero>::zero)
    }
}

/// `sum_n f_k(2n) y^n` as a series in `y` of the given order.
fn matching_series<C: Ring>(matchings: &PerfectMatchings, order: usize) -> Result<Series<C>> {
    if matchings.max_pairs() < order {
        return Err(Error::InvalidParameter(format!(
            "matching table holds f_k(2n) for n <= {}, need {}",
            matchings.max_pairs(),
            order
        )));
    }
    Ok(Series {
        coeffs: (0..=order).map(|n| C::from_count(matchings.perfect(n))).collect(),
    })
}

fn x_pow<C: Ring>(power: usize, order: usize) -> Series<C> {
    Series::monomial(C::one(), power, order)
}

/// `u x^(2 tau - 2) / (1 - x^2 + u x^(2 tau))`.
pub fn u0_series<C: Ring>(u: &C, tau: u32, order: usize) -> Result<Series<C>> {
    let tau = tau as usize;
    let denom = Series::one(order)
        .sub(&x_pow(2, order))
        .add(&Series::monomial(u.clone(), 2 * tau, order));
    Ok(Series::monomial(u.clone(), 2 * tau - 2, order).mul(&denom.reciprocal()?))
}

/// `(1/v) sum_n f_k(2n) (w x^2 / v^2)^n` with `v = 1 - x + w (x^2 + x^3 + x^4)`.
pub fn matching_composition<C: Ring>(
    w: &Series<C>,
    matchings: &PerfectMatchings,
    order: usize,
) -> Result<Series<C>> {
    let w = w.truncate(order);
    let quartic = x_pow::<C>(2, order).add(&x_pow(3, order)).add(&x_pow(4, order));
    let v = Series::one(order).sub(&x_pow(1, order)).add(&w.mul(&quartic));
    let vinv = v.reciprocal()?;
    let y = w.mul(&x_pow(2, order)).mul(&vinv).mul(&vinv);
    let g = matching_series(matchings, order / 2)?;
    Ok(vinv.mul(&Series::compose_even(&g, &y)?))
}

fn check_structure_params(k: u32, tau: u32) -> Result<()> {
    if k < 2 || tau < 3 {
        return Err(Error::InvalidParameter(format!(
            "structure series need k >= 2 and tau >= 3, got k={k}, tau={tau}"
        )));
    }
    Ok(())
}

/// Generating function of k-noncrossing, tau-canonical structures by size,
/// using a precomputed matching table.
pub fn univariate_t_with(matchings: &PerfectMatchings, tau: u32, order: usize) -> Result<PowerSeries> {
    check_structure_params(matchings.k(), tau)?;
    let w0 = u0_series(&<ExactRatio as One>::one(), tau, order)?;
    matching_composition(&w0, matchings, order)
}

/// Bivariate generating function by size and stack number, using a
/// precomputed matching table.
pub fn bivariate_t_with(matchings: &PerfectMatchings, tau: u32, order: usize) -> Result<BivariateSeries> {
    check_structure_params(matchings.k(), tau)?;
    let u0 = u0_series(&UPoly::u(), tau, order)?;
    matching_composition(&u0, matchings, order)
}

/// `sum_n T_{k,tau}(n) x^n` truncated at `x^order`.
pub fn univariate_t(k: u32, tau: u32, order: usize) -> Result<PowerSeries> {
    check_structure_params(k, tau)?;
    univariate_t_with(&PerfectMatchings::compute(k, order / 2)?, tau, order)
}

/// `sum_{n,t} T_{k,tau}(n, t) u^t x^n` truncated at `x^order`.
pub fn bivariate_t(k: u32, tau: u32, order: usize) -> Result<BivariateSeries> {
    check_structure_params(k, tau)?;
    bivariate_t_with(&PerfectMatchings::compute(k, order / 2)?, tau, order)
}

/// `sum_{n,h} c(n, h) z^h x^n` for a table `c[n][h]`.
pub fn substitute_table(table: &[Vec<BigCount>], z: &BivariateSeries, order: usize) -> BivariateSeries {
    let max_h = table.iter().map(|row| row.len()).max().unwrap_or(0);
    let mut acc = BivariateSeries::zero(order);
    let mut z_pow = BivariateSeries::one(order);
    for h in 0..max_h {
        let column = Series {
            coeffs: (0..=order)
                .map(|n| {
                    table
                        .get(n)
                        .and_then(|row| row.get(h))
                        .map(UPoly::from_count)
                        .unwrap_or_else(UPoly::zero)
                })
                .collect(),
        };
        acc = acc.add(&column.mul(&z_pow));
        z_pow = z_pow.mul(z);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> ExactRatio {
        ExactRatio::from_integer(BigInt::from(n))
    }

    fn ps(v: &[i64]) -> PowerSeries {
        PowerSeries::from_coeffs(v.iter().map(|&c| q(c)).collect())
    }

    #[test]
    fn reciprocal_of_one_minus_x() {
        let r = ps(&[1, -1, 0, 0, 0, 0, 0]).reciprocal().unwrap();
        assert_eq!(r, ps(&[1; 7]));
    }

    #[test]
    fn reciprocal_rejects_zero_constant() {
        let err = ps(&[0, 1, 2]).reciprocal().unwrap_err();
        assert!(matches!(err, Error::InvalidOperand(_)));
        let biv = BivariateSeries::from_coeffs(vec![UPoly::u(), UPoly::one()]);
        assert!(matches!(biv.reciprocal(), Err(Error::InvalidOperand(_))));
    }

    #[test]
    fn multiplicative_identity() {
        let s = ps(&[3, -2, 7, 0, 5]);
        assert_eq!(s.mul(&PowerSeries::one(4)), s);
    }

    #[test]
    fn reciprocal_of_non_unit_constant() {
        let s = ps(&[2, 3, -1, 4, 0, 1]);
        let r = s.reciprocal().unwrap();
        assert_eq!(s.mul(&r), PowerSeries::one(5));
    }

    #[test]
    fn compose_catalan_with_x_squared() {
        let m = PerfectMatchings::compute(2, 6).unwrap();
        let g = matching_series::<ExactRatio>(&m, 6).unwrap();
        let y = PowerSeries::monomial(q(1), 2, 6);
        let c = PowerSeries::compose_even(&g, &y).unwrap();
        assert_eq!(c.coeff(6), q(5));
        assert_eq!(c, ps(&[1, 0, 1, 0, 2, 0, 5]));
    }

    #[test]
    fn compose_rejects_nonzero_constant() {
        let g = ps(&[1, 1]);
        assert!(PowerSeries::compose_even(&g, &ps(&[1, 1])).is_err());
    }

    #[test]
    fn compose_matches_powers() {
        let g = ps(&[2, -1, 3, 5]);
        let a = ps(&[0, 1, 1, 0, 2, 0, 0, 0]);
        let mut expect = PowerSeries::zero(7);
        for (n, gn) in g.coeffs().iter().enumerate() {
            expect = expect.add(&a.pow(n).scale(gn));
        }
        assert_eq!(PowerSeries::compose_even(&g, &a).unwrap(), expect);
    }

    #[test]
    fn upoly_arithmetic() {
        let a = UPoly::from_coeffs(vec![q(1), q(2)]);
        let b = UPoly::from_coeffs(vec![q(-1), q(0), q(3)]);
        assert_eq!(a.mul(&b), UPoly::from_coeffs(vec![q(-1), q(-2), q(3), q(6)]));
        assert_eq!(a.sub(&a), UPoly::zero());
        assert_eq!(a.add(&b).degree(), 2);
        assert_eq!(b.eval(&q(2)), q(11));
        assert!(a.inverse().is_none());
        assert_eq!(UPoly::constant(q(4)).inverse(), Some(UPoly::constant(ExactRatio::new(1.into(), 4.into()))));
    }

    #[test]
    fn univariate_small_coefficients() {
        let t = univariate_t(2, 3, 12).unwrap();
        assert_eq!(t.coeff(0), q(1));
        for n in 1..=8 {
            assert_eq!(t.coeff(n), q(1), "n={n}");
        }
        assert_eq!(t.coeff(9), q(2));
    }

    #[test]
    fn bivariate_small_coefficients() {
        let t = bivariate_t(2, 3, 12).unwrap();
        assert_eq!(t.coeffs()[9], UPoly::from_coeffs(vec![q(1), q(1)]));
        for n in 0..=12 {
            assert!(t.coeffs()[n].degree() <= (n / 2) as isize);
        }
    }

    #[test]
    fn bivariate_at_one_is_univariate() {
        for (k, tau) in [(2, 3), (3, 3), (3, 4)] {
            let b = bivariate_t(k, tau, 30).unwrap();
            let u = univariate_t(k, tau, 30).unwrap();
            assert_eq!(b.at_u(&q(1)), u, "k={k} tau={tau}");
        }
    }

    #[test]
    fn u0_at_one_is_w0() {
        for tau in 3..=5 {
            let u0 = u0_series(&UPoly::u(), tau, 30).unwrap().at_u(&q(1));
            let w0 = u0_series(&q(1), tau, 30).unwrap();
            assert_eq!(u0, w0);
            // w0 (1 - x^2 + x^(2 tau)) = x^(2 tau - 2)
            let t = tau as usize;
            let denom = PowerSeries::one(30)
                .sub(&PowerSeries::monomial(q(1), 2, 30))
                .add(&PowerSeries::monomial(q(1), 2 * t, 30));
            assert_eq!(w0.mul(&denom), PowerSeries::monomial(q(1), 2 * t - 2, 30));
        }
    }

    #[test]
    fn coefficients_are_integers() {
        let b = bivariate_t(3, 3, 30).unwrap();
        for p in b.coeffs() {
            for c in p.coeffs() {
                assert!(c.is_integer() && c >= &q(0));
            }
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(univariate_t(1, 3, 5), Err(Error::InvalidParameter(_))));
        assert!(matches!(bivariate_t(2, 2, 5), Err(Error::InvalidParameter(_))));
    }
}
