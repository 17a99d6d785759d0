//! Worked values for each module, checked through the public API.

use num_bigint::BigUint;
use stackdist::asymptotics::{clt_params, normal_compare, rho, table1};
use stackdist::bigcombinat::{binomial, lambda_multinomial};
use stackdist::exact::{corestar, tstar};
use stackdist::identities::identity_checks;
use stackdist::matchings::series_fk;
use stackdist::oracle::{enumerate_corestar, enumerate_counts, enumerate_tstar, max_mutually_crossing, stack_decomposition, Diagram, StructureFilter};
use stackdist::series::{PowerSeries, Ring};
use stackdist::*;

fn big(v: u64) -> BigCount {
    BigUint::from(v)
}

fn q(num: i64, den: i64) -> ExactRatio {
    ExactRatio::new(num.into(), den.into())
}

#[test]
fn combinatorial_primitives() {
    assert_eq!(binomial(5, 2), big(10));
    assert_eq!(binomial(7, 0), big(1));
    assert_eq!(binomial(3, 5), big(0));
    assert_eq!(lambda_multinomial(6, 1, 0, 0), big(5));
    assert_eq!(lambda_multinomial(9, 0, 0, 0), big(1));
    assert_eq!(lambda_multinomial(4, 1, 1, 0), big(0));
}

#[test]
fn matching_counts() {
    assert_eq!(count_perfect(2, 3).unwrap(), big(5));
    assert_eq!(count_perfect(3, 3).unwrap(), big(14));
    assert_eq!(count_perfect(4, 3).unwrap(), big(15));
    assert_eq!(count_partial(2, 5, 1).unwrap(), big(10));
    assert_eq!(count_partial(3, 5, 2).unwrap(), big(0));
    assert_eq!(count_partial(3, 4, 4).unwrap(), big(1));
    let coeffs = |k, n| series_fk(k, n).unwrap().coeffs().to_vec();
    let ints = |v: &[u64]| v.iter().map(|&c| ExactRatio::from_integer((c as i64).into())).collect::<Vec<_>>();
    assert_eq!(coeffs(2, 6), ints(&[1, 0, 1, 0, 2, 0, 5]));
    assert_eq!(coeffs(3, 0), ints(&[1]));
    assert_eq!(coeffs(9, 4), ints(&[1, 0, 1, 0, 3]));
}

#[test]
fn diagrams() {
    let d = |arcs: &[(u32, u32)], n| Diagram::new(n, arcs.iter().copied()).unwrap();
    assert_eq!(max_mutually_crossing(&d(&[(1, 3), (2, 4)], 4)), 2);
    assert_eq!(max_mutually_crossing(&d(&[(1, 4), (2, 3)], 4)), 1);
    assert_eq!(max_mutually_crossing(&d(&[(1, 4), (2, 5), (3, 6)], 6)), 3);
    let stacks = stack_decomposition(&d(&[(1, 9), (2, 8), (3, 7)], 9));
    assert_eq!(stacks.len(), 1);
    assert_eq!(stacks[0].len, 3);
    assert!(stack_decomposition(&d(&[], 5)).is_empty());
    let stacks = stack_decomposition(&d(&[(1, 9), (2, 8), (4, 12), (5, 11)], 12));
    assert_eq!(stacks.iter().map(|s| s.len).collect::<Vec<_>>(), vec![2, 2]);
}

#[test]
fn enumeration() {
    let f = StructureFilter::structures(2, 3);
    let m = enumerate_counts(9, &f).unwrap();
    assert_eq!(m.into_iter().collect::<Vec<_>>(), vec![(0, big(1)), (1, big(1))]);
    let m = enumerate_counts(8, &f).unwrap();
    assert_eq!(m.into_iter().collect::<Vec<_>>(), vec![(0, big(1))]);
    assert_eq!(enumerate_tstar(4, 2, 1).unwrap(), big(0));
    assert_eq!(enumerate_tstar(5, 2, 1).unwrap(), big(1));
    for n in 0..10 {
        assert_eq!(enumerate_corestar(n, 3, 0).unwrap(), big(1));
    }
}

#[test]
fn exact_counts() {
    assert_eq!(tstar(2, 5, 1).unwrap(), big(1));
    assert_eq!(tstar(2, 4, 1).unwrap(), big(0));
    assert_eq!(corestar(2, 5, 1).unwrap(), big(1));
    assert_eq!(corestar(2, 4, 1).unwrap(), big(0));
    for k in 2..=4 {
        for n in 0..20 {
            assert_eq!(tstar(k, n, 0).unwrap(), big(1));
            assert_eq!(corestar(k, n, 0).unwrap(), big(1));
            assert_eq!(count_structures(k, 3, n, 0).unwrap(), big(1));
        }
    }
    assert_eq!(count_structures(2, 3, 9, 1).unwrap(), big(1));
    assert_eq!(count_structures(2, 3, 8, 1).unwrap(), big(0));
}

#[test]
fn distributions_and_moments() {
    let d = distribution(2, 3, 9).unwrap();
    assert_eq!(d.probabilities, vec![q(1, 2), q(1, 2), q(0, 1), q(0, 1), q(0, 1)]);
    assert_eq!(moments(&d), (q(1, 2), q(1, 4)));
    let d = distribution(2, 3, 5).unwrap();
    assert_eq!(d.probability(0), q(1, 1));
    assert_eq!(moments(&d), (q(0, 1), q(0, 1)));
    let params = clt_params(2, 3).unwrap();
    let zero = stackdist::asymptotics::SingularityResult { mu: 0.0, sigma2: 0.0, ..params };
    assert_eq!(normal_compare(&d, &zero).mean_gap, 0.0);
}

#[test]
fn series_values() {
    let one_minus_x = PowerSeries::from_coeffs(vec![q(1, 1), q(-1, 1), q(0, 1), q(0, 1), q(0, 1)]);
    let geo = one_minus_x.reciprocal().unwrap();
    assert!(geo.coeffs().iter().all(|c| *c == q(1, 1)));
    assert_eq!(geo.mul(&PowerSeries::one(4)), geo);
    let g = PowerSeries::from_coeffs(vec![q(1, 1), q(1, 1), q(2, 1), q(5, 1)]);
    let y = PowerSeries::monomial(ExactRatio::one(), 2, 6);
    assert_eq!(PowerSeries::compose_even(&g, &y).unwrap().coeff(6), q(5, 1));

    let t = univariate_t(2, 3, 9).unwrap();
    assert_eq!(t.coeff(0), q(1, 1));
    for n in 1..=8 {
        assert_eq!(t.coeff(n), q(1, 1));
    }
    assert_eq!(t.coeff(9), q(2, 1));
    let b = bivariate_t(2, 3, 9).unwrap();
    assert_eq!(b.coeff(9).coeffs(), &[q(1, 1), q(1, 1)]);
    assert_eq!(b.at_u(&q(1, 1)), t);
}

#[test]
fn identities_hold() {
    assert!(identity_checks(2, 3, 40).unwrap().all_hold());
    assert!(identity_checks(3, 4, 0).unwrap().all_hold());
}

#[test]
fn singularity_values() {
    assert_eq!(rho(2), 0.5);
    assert_eq!(rho(3), 0.25);
    assert_eq!(rho(9), 0.0625);
    let close = |k, tau, mu: f64, s2: f64| {
        let r = clt_params(k, tau).unwrap();
        assert!((r.mu - mu).abs() < 5e-6 && (r.sigma2 - s2).abs() < 5e-6, "k={k} tau={tau}: {r:?}");
    };
    close(3, 3, 0.115473, 0.0086760);
    close(3, 5, 0.069467, 0.0039688);
    close(4, 3, 0.123509, 0.0076977);
}

#[test]
fn grid_shape_properties() {
    let rows = table1(&[2, 3, 4, 5, 6, 7, 8, 9], &[3, 4, 5, 6, 7]).unwrap();
    for r in &rows {
        assert!(r.computed.as_ref().unwrap().sigma2 > 0.0);
    }
    for pair in rows.windows(2).filter(|w| w[0].k == w[1].k) {
        let (a, b) = (pair[0].computed.as_ref().unwrap(), pair[1].computed.as_ref().unwrap());
        assert!(b.mu < a.mu, "mu must decrease in tau at k={}", a.k);
    }
}
