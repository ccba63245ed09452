use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use rug::ops::Pow;
use rug::Integer;
use serde::Serialize;

use super::{rational, require_rational_field, Audit, EnumerationBox, WorstMargin};
use crate::bounds::{BoundReport, TaggedInterval};
use crate::error::{Error, Result};
use crate::heights::{height, max_heights, HeightValue, SSpec};
use crate::nf::AlgNum;

/// A solution of `αx + βy = 1` in S-units.
#[derive(Clone, Debug, Serialize)]
pub struct SolutionRecord {
    pub x: AlgNum,
    pub y: AlgNum,
    /// `x = sign·∏ pᵢ^{exponents[i]}`.
    pub sign: i8,
    pub exponents: Vec<i64>,
    #[serde(serialize_with = "super::ser_height")]
    pub h_x: HeightValue,
    #[serde(serialize_with = "super::ser_height")]
    pub h_y: HeightValue,
    /// `𝓗 = max(h(x), h(y))`.
    #[serde(rename = "H_script", serialize_with = "super::ser_height")]
    pub script_h: HeightValue,
}

fn to_rug(n: &BigInt) -> Integer {
    Integer::from_str(&n.to_string()).expect("decimal integer")
}

fn from_rug(n: &Integer) -> BigInt {
    BigInt::from_str(&n.to_string()).expect("decimal integer")
}

fn s_free(mut n: Integer, primes: &[Integer]) -> Integer {
    n.abs_mut();
    for p in primes {
        n.remove_factor_mut(p);
    }
    n
}

/// Every `x = ±∏ pᵢ^{aᵢ}` in the box with `y = (1 − αx)/β` an S-unit,
/// sorted by exponent vector and then sign.
pub fn enumerate_sunit_solutions(alpha: &AlgNum, beta: &AlgNum, s: &SSpec, bx: &EnumerationBox, prec: u32) -> Result<Vec<SolutionRecord>> {
    require_rational_field(s)?;
    let (a, b) = (rational(alpha, "α")?, rational(beta, "β")?);
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("α and β must be nonzero".into()));
    }
    let primes: Vec<u64> = s.rational_primes();
    let t = primes.len();
    bx.check(t)?;
    let rp: Vec<Integer> = primes.iter().map(|&p| Integer::from(p)).collect();
    let am = bx.a_max as i64;
    let pows: Vec<Vec<Integer>> = rp.iter().map(|p| (0..=am as u32).map(|k| p.clone().pow(k)).collect()).collect();
    let (an, ad) = (to_rug(a.numer()), to_rug(a.denom()));
    let (bn, bd) = (to_rug(b.numer()), to_rug(b.denom()));
    let target = s_free(Integer::from(&bn * &ad), &rp);
    let side = 2 * am + 1;
    let cells = (side as u64).pow(t as u32);

    let mut hits: Vec<(Vec<i64>, i8)> = (0..cells)
        .into_par_iter()
        .flat_map_iter(|idx| {
            let mut exps = vec![0i64; t];
            let mut r = idx;
            for e in exps.iter_mut().rev() {
                *e = (r % side as u64) as i64 - am;
                r /= side as u64;
            }
            let mut xn = Integer::from(1);
            let mut xd = Integer::from(1);
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    xn *= &pows[i][e as usize];
                } else if e < 0 {
                    xd *= &pows[i][(-e) as usize];
                }
            }
            let lhs = Integer::from(&ad * &xd);
            let base = Integer::from(&an * &xn);
            let found: Vec<(Vec<i64>, i8)> = bx
                .signs
                .iter()
                .filter_map(|&sg| {
                    let n = if sg > 0 { Integer::from(&lhs - &base) } else { Integer::from(&lhs + &base) };
                    if n.is_zero() {
                        return None;
                    }
                    (s_free(n * &bd, &rp) == target).then(|| (exps.clone(), sg))
                })
                .collect();
            found
        })
        .collect();
    hits.sort();

    let mut out = Vec::with_capacity(hits.len());
    for (exps, sg) in hits {
        let mut x = BigRational::from_integer(sg.into());
        for (i, &e) in exps.iter().enumerate() {
            let p = BigRational::from_integer(from_rug(&rp[i]));
            x *= if e >= 0 { num_traits::pow(p, e as usize) } else { num_traits::pow(p.recip(), (-e) as usize) };
        }
        let y = (BigRational::one() - &a * &x) / &b;
        if &a * &x + &b * &y != BigRational::one() || !supported(&y, &primes) {
            return Err(Error::VerificationFailed(format!("candidate x = {x} failed the exact recheck")));
        }
        let (xa, ya) = (AlgNum::from_ratio(&x), AlgNum::from_ratio(&y));
        let h_x = height(&xa, prec)?;
        let h_y = height(&ya, prec)?;
        let script_h = max_heights(&[h_x.clone(), h_y.clone()]);
        if let Some(c) = &bx.height_cutoff {
            let big = x.numer().abs().max(x.denom().clone()).max(y.numer().abs()).max(y.denom().clone());
            if &big > c {
                continue;
            }
        }
        out.push(SolutionRecord { x: xa, y: ya, sign: sg, exponents: exps, h_x, h_y, script_h });
    }
    Ok(out)
}

fn supported(q: &BigRational, primes: &[u64]) -> bool {
    let strip = |n: &BigInt| crate::arith::strip_primes(n, primes).abs().is_one();
    !q.is_zero() && strip(q.numer()) && strip(q.denom())
}

#[derive(Serialize)]
struct BoundCheck {
    formula: String,
    max_h: TaggedInterval,
    /// `ln bound − ln max 𝓗`.
    margin: TaggedInterval,
}

/// Every record lies strictly below every positive report.
pub fn check_bounds(instance: &str, records: &[SolutionRecord], reports: &[&BoundReport]) -> Result<Audit> {
    let mut audit = Audit::new(instance);
    let Some(first) = records.first() else {
        audit.checked = 0;
        return Ok(audit);
    };
    let mut max_h = first.script_h.value.clone();
    for r in &records[1..] {
        max_h = max_h.max(&r.script_h.value);
    }
    let mut worst = WorstMargin::default();
    for rep in reports.iter().filter(|r| !r.negative) {
        if !rep.certainly_exceeds(&max_h) {
            return Err(Error::BoundViolated(format!(
                "{}: max height {} not below {}",
                rep.formula,
                max_h,
                rep.decimal()
            )));
        }
        let margin = match &rep.log_value {
            Some(l) if max_h.hi() > &0 => l.sub(&max_h.ln()),
            Some(l) => l.clone(),
            None => unreachable!("a zero bound never exceeds"),
        };
        worst.push(&margin);
        audit.witnesses.push(
            serde_json::to_value(BoundCheck {
                formula: rep.formula.to_string(),
                max_h: TaggedInterval::from(&max_h),
                margin: TaggedInterval::from(&margin),
            })
            .expect("serializable"),
        );
    }
    audit.checked = records.len() * audit.witnesses.len();
    audit.worst_margin = worst.tagged();
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::build_rational_field;

    fn solve(a: AlgNum, b: AlgNum, primes: &[u64], am: u32) -> Vec<(AlgNum, AlgNum)> {
        let q = build_rational_field();
        let s = SSpec::from_primes(&q, primes).unwrap();
        enumerate_sunit_solutions(&a, &b, &s, &EnumerationBox::new(am), 128)
            .unwrap()
            .into_iter()
            .map(|r| (r.x, r.y))
            .collect()
    }

    #[test]
    fn two_three() {
        let sols = solve(AlgNum::one(), AlgNum::one(), &[2, 3], 5);
        let f = |n: i64, d: i64| AlgNum::frac(n, d);
        for (x, y) in [(f(3, 1), f(-2, 1)), (f(-2, 1), f(3, 1)), (f(4, 1), f(-3, 1)), (f(9, 1), f(-8, 1)), (f(1, 3), f(2, 3)), (f(3, 4), f(1, 4)), (f(-1, 8), f(9, 8))] {
            assert!(sols.contains(&(x.clone(), y.clone())), "{x}, {y}");
        }
        for (x, y) in &sols {
            assert_eq!(x + y, AlgNum::one());
        }
        assert!(solve(AlgNum::one(), AlgNum::one(), &[], 5).is_empty());
        let s = solve(AlgNum::frac(1, 3), AlgNum::one(), &[2, 3], 5);
        assert!(s.contains(&(AlgNum::from_int(9), AlgNum::from_int(-2))));
        assert!(!s.iter().any(|(_, y)| y.is_zero()));
    }

    #[test]
    fn budget() {
        let q = build_rational_field();
        let s = SSpec::from_primes(&q, &[2, 3, 5]).unwrap();
        let bx = EnumerationBox::new(10).with_budget(1000);
        assert!(matches!(
            enumerate_sunit_solutions(&AlgNum::one(), &AlgNum::one(), &s, &bx, 128),
            Err(Error::BoxTooLarge { size: 18522, .. })
        ));
    }

    #[test]
    fn negative_control() {
        let q = build_rational_field();
        let s = SSpec::from_primes(&q, &[2, 3]).unwrap();
        let recs = enumerate_sunit_solutions(&AlgNum::one(), &AlgNum::one(), &s, &EnumerationBox::new(5), 128).unwrap();
        let prec = 128;
        let low = BoundReport::new(crate::bounds::FormulaId::Thm1, crate::interval::Interval::zero(prec));
        assert!(matches!(check_bounds("t", &recs, &[&low]), Err(Error::BoundViolated(_))));
        let high = BoundReport::new(crate::bounds::FormulaId::Thm1, crate::interval::Interval::from_int(prec, 10));
        let a = check_bounds("t", &recs, &[&high]).unwrap();
        assert_eq!(a.checked, recs.len());
    }
}
