use num_bigint::BigInt;
use prodloop_core::algebra::BigRational;
use prodloop_core::curve::fuss_catalan;
use prodloop_core::maps::{cumulant_by_inversion, enumerate_cumulants, moment_polynomial, MapSpec, DEFAULT_BUDGET};
use prodloop_core::moments::cumulant_from_resolvent;
use prodloop_core::solver::ResolventTable;
use prodloop_core::CoreError;

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

#[test]
fn one_edge_type_gives_catalan() {
    for k in 1..=8u32 {
        let t = enumerate_cumulants(&MapSpec::new(1, &[k]).unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(BigInt::from(t.genus_count(0)), fuss_catalan(k as u64, 2), "k = {k}");
    }
}

#[test]
fn two_edge_types_match_residues() {
    let mut table = ResolventTable::new();
    table.solve_wgn(1, 1).unwrap();
    for k in 1..=6u32 {
        let t = enumerate_cumulants(&MapSpec::new(2, &[k]).unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(int(t.genus_count(0)), cumulant_from_resolvent(&table, 0, &[k]).unwrap(), "c0_{k}");
        if k <= 5 {
            assert_eq!(int(t.genus_count(1)), cumulant_from_resolvent(&table, 1, &[k]).unwrap(), "c1_{k}");
        }
    }
    for (i, j) in [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (1, 4)] {
        let t = enumerate_cumulants(&MapSpec::new(2, &[i, j]).unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(int(t.genus_count(0)), cumulant_from_resolvent(&table, 0, &[i, j]).unwrap(), "c0_{i},{j}");
    }
}

#[test]
fn low_moments_as_polynomials() {
    let m1 = moment_polynomial(&MapSpec::new(2, &[1]).unwrap(), DEFAULT_BUDGET).unwrap();
    assert_eq!(m1.to_string(), "N");
    let m2 = moment_polynomial(&MapSpec::new(2, &[2]).unwrap(), DEFAULT_BUDGET).unwrap();
    assert_eq!(m2.to_string(), "3*N + N^-1");
    let spec = MapSpec::new(2, &[1, 1]).unwrap();
    let var = enumerate_cumulants(&spec, DEFAULT_BUDGET).unwrap().cumulant_polynomial();
    assert_eq!(var.coeff(0), BigInt::from(3));
    assert_eq!(cumulant_by_inversion(&spec, DEFAULT_BUDGET).unwrap(), var);
}

#[test]
fn three_point_inversion() {
    let spec = MapSpec::new(2, &[1, 1, 1]).unwrap();
    let direct = enumerate_cumulants(&spec, DEFAULT_BUDGET).unwrap().cumulant_polynomial();
    assert_eq!(cumulant_by_inversion(&spec, DEFAULT_BUDGET).unwrap(), direct);
    assert!(direct.0.keys().all(|&e| e <= -1));
}

#[test]
fn budget_is_enforced() {
    let spec = MapSpec::new(2, &[10]).unwrap();
    assert!(matches!(enumerate_cumulants(&spec, DEFAULT_BUDGET), Err(CoreError::BudgetExceeded { .. })));
}
