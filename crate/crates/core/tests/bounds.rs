use effbounds::bounds::{
    best_unit_bound, bound_thm_1, bound_thm_2, bound_thm_2_full_group, bound_thm_a, bound_thm_b, bound_thm_c, constant,
    eq31_s_factor, improvement_factor, lemma2_bound, prop5_lower_bound, BoundInputs, ConstParams, FormulaId, GroupData,
};
use effbounds::heights::SSpec;
use effbounds::nf::{build_quadratic_field, build_rational_field, import_field_profile, AssertedRecord};
use effbounds::{Error, Interval};
use proptest::prelude::*;

const PREC: u32 = 128;

fn q_inputs(primes: &[u64], h: Interval) -> BoundInputs {
    let s = SSpec::from_primes(&build_rational_field(), primes).unwrap();
    BoundInputs::from_sspec(&s, h).unwrap()
}

fn ln(x: i64) -> Interval {
    Interval::from_int(PREC, x).ln()
}

#[test]
fn reports_scale_linearly_in_h() {
    let one = q_inputs(&[2, 3, 7], Interval::one(PREC));
    let five = one.with_h(Interval::from_int(PREC, 5));
    for f in [bound_thm_a, bound_thm_b, bound_thm_c, bound_thm_1] {
        let a = f(&one).unwrap();
        let b = f(&five).unwrap();
        let shift = b.log_value.unwrap().sub(a.log_value.as_ref().unwrap());
        assert!(shift.overlaps(&ln(5)), "{:?}", a.formula);
    }
}

#[test]
fn selection_flags_the_minimum() {
    let inp = q_inputs(&[2, 3], Interval::one(PREC));
    let sel = best_unit_bound(&inp).unwrap();
    let ids: Vec<FormulaId> = sel.reports.iter().map(|r| r.formula).collect();
    assert_eq!(ids, vec![FormulaId::ThmA, FormulaId::ThmB, FormulaId::ThmC, FormulaId::Thm1]);
    let best = sel.best_report().unwrap();
    assert_eq!(best.formula, FormulaId::ThmC);
    for r in &sel.reports {
        assert!(best.log_upper() <= r.log_upper());
    }
    let inf = q_inputs(&[], Interval::one(PREC));
    let sel = best_unit_bound(&inf).unwrap();
    assert_eq!(sel.skipped.len(), 2);
    assert!(sel.get(FormulaId::ThmASinf).is_some());
}

#[test]
fn h_below_one_is_rejected() {
    let inp = q_inputs(&[2], Interval::from_ratio(PREC, &num_rational::BigRational::new(1.into(), 2.into())));
    assert!(matches!(bound_thm_a(&inp), Err(Error::ParamOutOfRange(_))));
}

#[test]
fn theorem_2_full_group_uses_lemma_2() {
    let inp = q_inputs(&[2, 3, 5], Interval::one(PREC));
    let full = bound_thm_2_full_group(&inp).unwrap();
    let l2 = lemma2_bound(&inp).unwrap();
    let theta = l2.log_value.unwrap().exp();
    let mut g = inp.clone();
    g.group = Some(GroupData { m: 3, theta });
    let direct = bound_thm_2(&g).unwrap();
    assert!(full.log_value.unwrap().overlaps(direct.log_value.as_ref().unwrap()));
    assert!(bound_thm_2(&inp).is_err());
}

#[test]
fn eq31_is_flagged_as_partial() {
    let r = eq31_s_factor(&q_inputs(&[2, 3], Interval::one(PREC))).unwrap();
    assert!(r.notes.iter().any(|n| n.contains("c7")));
}

#[test]
fn prop5_is_a_negative_lower_bound() {
    let r = prop5_lower_bound(1, 2, 1, &ln(2), &Interval::one(PREC), &ln(2).mul_int(5)).unwrap();
    assert!(r.negative);
    assert!(r.linear.as_ref().unwrap().hi() < &0);
    assert!(r.decimal().starts_with('-'));
    assert!(prop5_lower_bound(1, 1, 1, &ln(2), &Interval::one(PREC), &ln(2)).is_err());
}

#[test]
fn constant_parameter_checks() {
    assert_eq!(constant("c7", &ConstParams::default(), PREC).unwrap_err(), Error::UnknownConstant("c7".into()));
    let bad = ConstParams { d: 2, r: 2, s: 3, t: 1, m: 1 };
    assert!(matches!(constant("c2", &bad, PREC), Err(Error::ParamOutOfRange(_))));
    let no_s = ConstParams { d: 1, r: 0, s: 0, t: 0, m: 1 };
    assert!(matches!(constant("c1", &no_s, PREC), Err(Error::ParamOutOfRange(_))));
}

#[test]
fn asserted_profiles_feed_the_bounds() {
    let rec: AssertedRecord = serde_json::from_value(serde_json::json!({
        "d": 3, "r": 1, "R_K": "1.1", "h_K": 2, "prime_ideal_norms": [2, 3, 5]
    }))
    .unwrap();
    let k = import_field_profile(&rec).unwrap();
    let s = SSpec::from_norms(&k, &[2, 3, 5]).unwrap();
    let inp = BoundInputs::from_sspec(&s, Interval::one(PREC)).unwrap();
    assert!(inp.r_s_interval_only);
    let r = bound_thm_b(&inp).unwrap();
    assert!(r.notes.iter().any(|n| n.contains("sandwich")));
}

#[test]
fn quadratic_inputs() {
    let k = build_quadratic_field(-5).unwrap();
    let s = SSpec::from_primes(&k, &[2, 3]).unwrap();
    let inp = BoundInputs::from_sspec(&s, Interval::one(PREC)).unwrap();
    assert_eq!((inp.d, inp.r, inp.h_k, inp.t), (2, 0, 2, 3));
    let sel = best_unit_bound(&inp).unwrap();
    assert_eq!(sel.reports.len(), 4);
}

proptest! {
    #[test]
    fn factor_claims(p in 2u64..1_000_000, q in 1u64..1_000_000) {
        prop_assume!(q <= p);
        let f = improvement_factor(p, q, PREC);
        let lp = Interval::from_int(PREC, p as i64).ln();
        let qi = Interval::from_int(PREC, q as i64);
        if q == 1 {
            prop_assert!(f.certainly_le(&lp.ln_star().mul_int(2)));
        } else if qi.lo() > lp.hi() {
            prop_assert!(f.certainly_le(&qi.div(&qi.ln_star()).mul_int(2)));
        }
    }

    #[test]
    fn theorem_c_never_exceeds_theorem_a(mask in 1u32..64, h in 1i64..50) {
        let primes: Vec<u64> = [2u64, 3, 5, 7, 11, 13].iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p).collect();
        let inp = q_inputs(&primes, Interval::from_int(PREC, h));
        let a = bound_thm_a(&inp).unwrap().log_value.unwrap();
        let c = bound_thm_c(&inp).unwrap().log_value.unwrap();
        prop_assert!(c.lo() <= a.hi());
        if inp.p_prime_s < inp.p_s {
            prop_assert!(c.certainly_le(&a));
        }
    }

    #[test]
    fn constants_grow_with_s(d in 1u32..6, s in 1u32..10) {
        let r = d - 1;
        let p = |s| ConstParams { d, r, s, t: s.saturating_sub(r + 1), m: 1 };
        for name in ["c1", "c5"] {
            let a = constant(name, &p(s), PREC).unwrap().log.unwrap();
            let b = constant(name, &p(s + 1), PREC).unwrap().log.unwrap();
            prop_assert!(a.certainly_le(&b), "{name}");
        }
    }
}
