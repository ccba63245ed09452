use effbounds::forms::parse::parse_poly;
use effbounds::forms::poly::Poly;
use effbounds::forms::{bound_thm_3, factorize, reduce_to_unit_equations, FormSystem, LinearForm};
use effbounds::heights::SSpec;
use effbounds::nf::{build_quadratic_field, build_rational_field, AlgNum};
use effbounds::Error;
use proptest::prelude::*;

const PREC: u32 = 128;

fn lf(xs: &[i64]) -> LinearForm {
    LinearForm::new(xs.iter().map(|&x| AlgNum::from_int(x)).collect()).unwrap()
}

fn product(m: usize, fs: &[LinearForm]) -> Poly {
    fs.iter().fold(Poly::constant(m, AlgNum::one()), |p, l| p.mul(&l.to_poly()).unwrap())
}

fn independent(a: &[i64], b: &[i64]) -> bool {
    a[0] * b[1] != a[1] * b[0]
}

/// Binary integer forms, pairwise independent.
fn binary_factors() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-5i64..6, 2), 3..6).prop_filter("independent", |fs| {
        fs.iter().all(|f| f.iter().any(|&c| c != 0))
            && fs.iter().enumerate().all(|(i, a)| fs[i + 1..].iter().all(|b| independent(a, b)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn binary_forms_factor_and_connect(fs in binary_factors()) {
        let lfs: Vec<LinearForm> = fs.iter().map(|f| lf(f)).collect();
        let poly = product(2, &lfs);
        let fac = factorize(&poly, 0, None).unwrap();
        prop_assert_eq!(fac.factors.len(), fs.len());
        let sys = FormSystem::build(&poly, 0, None, PREC).unwrap();
        prop_assert_eq!(sys.l0.len(), fs.len());
        prop_assert!(sys.graph_g.triangularly_connected);
        prop_assert!(sys.verdict.applicable);
        prop_assert_eq!(sys.verdict.k, 1);
    }

    #[test]
    fn verdict_ignores_scaling_and_order(fs in binary_factors(), c in 1i64..20, rot in 0usize..5) {
        let lfs: Vec<LinearForm> = fs.iter().map(|f| lf(f)).collect();
        let poly = product(2, &lfs);
        let base = FormSystem::build(&poly, 0, None, PREC).unwrap();
        let scaled = FormSystem::build(&poly.scale(&AlgNum::from_int(c)).unwrap(), 0, None, PREC).unwrap();
        prop_assert_eq!(scaled.l0.len(), base.l0.len());
        prop_assert_eq!(scaled.verdict.applicable, base.verdict.applicable);
        prop_assert_eq!(&scaled.scalar, &(&base.scalar * &AlgNum::from_int(c)));
        let mut shuffled = lfs.clone();
        shuffled.rotate_left(rot % lfs.len());
        let supplied = FormSystem::build(&poly, 0, Some(shuffled), PREC).unwrap();
        prop_assert_eq!(supplied.l0.len(), base.l0.len());
        prop_assert_eq!(supplied.verdict.applicable, base.verdict.applicable);
        prop_assert_eq!(supplied.graph_g.edges.len(), base.graph_g.edges.len());
    }
}

#[test]
fn norm_form_in_two_variables_is_not_connected() {
    let poly = parse_poly("X1^2 - 5*X2^2", 2, Some(5)).unwrap();
    let sys = FormSystem::build(&poly, 5, None, PREC).unwrap();
    assert_eq!(sys.l0.len(), 2);
    assert_eq!(sys.verdict.k, 2);
    assert!(!sys.verdict.applicable);
    let k = build_quadratic_field(5).unwrap();
    let s = SSpec::from_primes(&k, &[2]).unwrap();
    assert!(reduce_to_unit_equations(&sys, &AlgNum::one(), &s, PREC).is_err());
}

#[test]
fn vandermonde_in_three_variables() {
    let nodes = [1i64, 2, 3];
    let lfs: Vec<LinearForm> = nodes.iter().map(|&a| lf(&[1, a, a * a])).collect();
    let poly = product(3, &lfs);
    assert_eq!(factorize(&poly, 0, None).unwrap_err(), Error::FactorsRequired);
    let sys = FormSystem::build(&poly, 0, Some(lfs), PREC).unwrap();
    assert_eq!(sys.rank, 3);
    // three forms in three variables: no form lies in the span of two others
    assert!(sys.graph_g.edges.is_empty());
    assert_eq!(sys.verdict.k, 3);
    assert!(!sys.verdict.applicable);
}

#[test]
fn wrong_factors_are_rejected() {
    let poly = parse_poly("X1*X2*(X1+X2)", 2, Some(0)).unwrap();
    let bad = vec![lf(&[1, 0]), lf(&[0, 1]), lf(&[1, -1])];
    assert!(matches!(FormSystem::build(&poly, 0, Some(bad), PREC), Err(Error::VerificationFailed(_))));
    assert!(matches!(parse_poly("X1^2 + X2", 2, Some(0)).map(|p| factorize(&p, 0, None)), Ok(Err(Error::NotHomogeneous))));
}

#[test]
fn trace_bound_over_q() {
    let poly = parse_poly("X1*X2*(X1+X2)", 2, Some(0)).unwrap();
    let sys = FormSystem::build(&poly, 0, None, PREC).unwrap();
    let q = build_rational_field();
    let s = SSpec::from_primes(&q, &[2, 3]).unwrap();
    let one = bound_thm_3(&sys, &AlgNum::one(), &s, PREC).unwrap();
    let six = bound_thm_3(&sys, &AlgNum::from_int(6), &s, PREC).unwrap();
    assert!(one.value().lo() > &0);
    assert!(one.value().certainly_le(six.value()));
    assert!(!one.trace.is_empty());
    assert_eq!(one.system.equations.len(), sys.graph_g.edges.len());
    let empty = SSpec::from_primes(&q, &[]).unwrap();
    assert_eq!(bound_thm_3(&sys, &AlgNum::one(), &empty, PREC).unwrap_err(), Error::RequiresFinitePlaces);
    assert_eq!(bound_thm_3(&sys, &AlgNum::frac(1, 7), &s, PREC).unwrap_err(), Error::NotSIntegral);
}
