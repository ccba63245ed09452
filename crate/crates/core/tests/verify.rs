use std::collections::BTreeSet;

use effbounds::bounds::{bound_thm_a, bound_thm_c, BoundInputs};
use effbounds::forms::parse::{parse_element, parse_poly};
use effbounds::heights::{infinite_places, is_s_integral, Place, SSpec};
use effbounds::nf::{build_quadratic_field, build_rational_field, AlgNum};
use effbounds::verify::{
    check_bounds, check_lemma3_constructive, check_prop4, enumerate_sunit_solutions, enumerate_thue_solutions,
    sample_check_prop5, AuditVerdict, EnumerationBox, Prop5Sample, ThueBox,
};
use effbounds::{Error, Interval};
use proptest::prelude::*;

const PREC: u32 = 128;

fn q_s(primes: &[u64]) -> SSpec {
    SSpec::from_primes(&build_rational_field(), primes).unwrap()
}

fn pairs(alpha: &AlgNum, beta: &AlgNum, s: &SSpec, a_max: u32) -> BTreeSet<(String, String)> {
    enumerate_sunit_solutions(alpha, beta, s, &EnumerationBox::new(a_max), PREC)
        .unwrap()
        .into_iter()
        .map(|r| (r.x.to_string(), r.y.to_string()))
        .collect()
}

fn is_s_unit(x: &AlgNum, s: &SSpec) -> bool {
    is_s_integral(x, s).unwrap() && is_s_integral(&x.recip(), s).unwrap()
}

#[test]
fn records_solve_the_equation() {
    let s = q_s(&[2, 3, 5]);
    let (a, b) = (AlgNum::from_int(1), AlgNum::from_int(1));
    let recs = enumerate_sunit_solutions(&a, &b, &s, &EnumerationBox::new(6), PREC).unwrap();
    assert!(recs.len() > 20);
    for r in &recs {
        assert_eq!(&(&a * &r.x) + &(&b * &r.y), AlgNum::one(), "{} {}", r.x, r.y);
        assert!(is_s_unit(&r.x, &s) && is_s_unit(&r.y, &s));
    }
    let xs: BTreeSet<String> = recs.iter().map(|r| r.x.to_string()).collect();
    for x in ["2", "-1", "1/2", "-3", "4", "-8", "9", "-15", "81/80", "-1/15"] {
        assert!(xs.contains(x), "{x}");
    }
}

#[test]
fn box_too_large() {
    let s = q_s(&[2, 3, 5, 7]);
    let bx = EnumerationBox::new(10).with_budget(1000);
    let err = enumerate_sunit_solutions(&AlgNum::one(), &AlgNum::one(), &s, &bx, PREC).unwrap_err();
    assert_eq!(err, Error::BoxTooLarge { size: 2 * 21u128.pow(4), budget: 1000 });
    assert_eq!(err.name(), "BoxTooLarge");
    assert!(!err.is_violation());
}

#[test]
fn bounds_hold_on_a_small_instance() {
    let s = q_s(&[2, 3]);
    let recs = enumerate_sunit_solutions(&AlgNum::one(), &AlgNum::one(), &s, &EnumerationBox::new(8), PREC).unwrap();
    let inp = BoundInputs::from_sspec(&s, Interval::one(PREC)).unwrap();
    let a = bound_thm_a(&inp).unwrap();
    let c = bound_thm_c(&inp).unwrap();
    let audit = check_bounds("q23", &recs, &[&a, &c]).unwrap();
    assert_eq!(audit.verdict, AuditVerdict::Pass);
    assert_eq!(audit.checked, 2 * recs.len());
    assert!(audit.worst_margin.is_some());
}

#[test]
fn prop4_witness_for_catalan() {
    let s = q_s(&[2, 3]);
    let w = check_prop4(&AlgNum::from_int(9), &AlgNum::from_int(-8), &AlgNum::one(), &AlgNum::one(), &s, PREC).unwrap();
    assert!(["alpha*x", "beta*y", "beta*y/(alpha*x)"].contains(&w.which), "{}", w.which);
}

#[test]
fn lemma3_over_q() {
    let s = q_s(&[2, 5]);
    let w = check_lemma3_constructive(&AlgNum::frac(-35, 8), 2, &s, 20, PREC).unwrap();
    assert!(is_s_unit(&w.epsilon, &s));
    assert_eq!(w.value, &w.epsilon.pow(2) * &AlgNum::frac(-35, 8));
    assert!(w.height_arg <= w.bound_arg);
    assert_eq!(check_lemma3_constructive(&AlgNum::frac(1, 3), 2, &s, 5, PREC).unwrap_err(), Error::NotSIntegral);
    assert!(check_lemma3_constructive(&AlgNum::one(), 0, &s, 5, PREC).is_err());
}

#[test]
fn prop5_samples_over_q_and_gaussian_integers() {
    let s = Prop5Sample { k_max: 6 };
    let q = build_rational_field();
    let audit = sample_check_prop5(&q, &[AlgNum::from_int(2), AlgNum::from_int(3)], &AlgNum::frac(5, 7), &Place::Real(0), &s, PREC).unwrap();
    assert_eq!(audit.verdict, AuditVerdict::Pass);
    assert!(audit.checked > 100);
    let gi = build_quadratic_field(-1).unwrap();
    let gens = vec![parse_element("2+i", -1).unwrap(), parse_element("1+i", -1).unwrap()];
    let v = infinite_places(&gi)[0].clone();
    let audit = sample_check_prop5(&gi, &gens, &parse_element("3-2*i", -1).unwrap(), &v, &s, PREC).unwrap();
    assert_eq!(audit.verdict, AuditVerdict::Pass);
    let err = sample_check_prop5(&q, &[AlgNum::from_int(-1)], &AlgNum::one(), &Place::Real(0), &s, PREC).unwrap_err();
    assert!(matches!(err, Error::Domain(_)));
}

#[test]
fn thue_solutions_satisfy_the_form() {
    let poly = parse_poly("X1*X2*(X1+X2)", 2, Some(0)).unwrap();
    let s = q_s(&[2, 3]);
    for delta in [1i64, 6] {
        let d = AlgNum::from_int(delta);
        let sols = enumerate_thue_solutions(&poly, &d, &s, &ThueBox::new(20), PREC).unwrap();
        assert_eq!(sols.is_empty(), delta == 1);
        for sol in &sols {
            assert_eq!(poly.eval(&[sol.x.clone(), sol.y.clone()]).unwrap(), d);
            assert!(is_s_integral(&sol.x, &s).unwrap() && is_s_integral(&sol.y, &s).unwrap());
        }
    }
}

fn coeff() -> impl Strategy<Value = AlgNum> {
    (prop::sample::select(vec![-6i64, -3, -2, -1, 1, 2, 3, 4, 6, 9]), prop::sample::select(vec![1i64, 2, 3, 4]))
        .prop_map(|(n, d)| AlgNum::frac(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enlarging_the_box_keeps_every_solution(a in coeff(), b in coeff(), k in 1u32..5) {
        let s = q_s(&[2, 3]);
        let small = pairs(&a, &b, &s, k);
        let big = pairs(&a, &b, &s, k + 2);
        prop_assert!(small.is_subset(&big));
    }

    #[test]
    fn swapping_coefficients_swaps_solutions(a in coeff(), b in coeff()) {
        let s = q_s(&[2, 3]);
        let ab = pairs(&a, &b, &s, 6);
        let ba: BTreeSet<(String, String)> = pairs(&b, &a, &s, 6).into_iter().map(|(x, y)| (y, x)).collect();
        // the box constrains x only, so compare where both exponent vectors fit
        let fits = |p: &(String, String)| {
            let x: AlgNum = parse_element(&p.0, 0).unwrap();
            let y: AlgNum = parse_element(&p.1, 0).unwrap();
            fits_box(&x, 6) && fits_box(&y, 6)
        };
        let l: BTreeSet<_> = ab.iter().filter(|p| fits(p)).collect();
        let r: BTreeSet<_> = ba.iter().filter(|p| fits(p)).collect();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn inversion_maps_solutions(a in coeff(), b in coeff()) {
        // αx + βy = 1  ⟺  (1/α)(1/x) + (−β/α)(y/x) = 1
        let s = q_s(&[2, 3, 5]);
        let a2 = a.recip();
        let b2 = -&(&b / &a);
        let image = pairs(&a2, &b2, &s, 5);
        for (x, y) in pairs(&a, &b, &s, 5) {
            let x = parse_element(&x, 0).unwrap();
            let y = parse_element(&y, 0).unwrap();
            let x2 = x.recip();
            let y2 = &y / &x;
            prop_assert_eq!(&(&a2 * &x2) + &(&b2 * &y2), AlgNum::one());
            prop_assert!(image.contains(&(x2.to_string(), y2.to_string())), "{} {}", x2, y2);
        }
    }
}

fn fits_box(x: &AlgNum, a_max: u32) -> bool {
    let q = x.a().clone();
    let mut n = q.magnitude().clone() * x.c().magnitude();
    let mut ok = true;
    for p in [2u32, 3] {
        let mut k = 0;
        while &n % p == 0u32.into() {
            n /= p;
            k += 1;
        }
        ok &= k <= a_max;
    }
    ok
}
