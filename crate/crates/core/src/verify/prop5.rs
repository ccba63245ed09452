use serde::Serialize;

use super::{Audit, WorstMargin};
use crate::bounds::{prop5_lower_bound, TaggedInterval};
use crate::error::{Error, Result};
use crate::heights::{abs_value, abs_value_exact, height, Place};
use crate::interval::Interval;
use crate::nf::{AlgNum, FieldProfile};

/// Exponent vectors `k ∈ [−k_max, k_max]^m` for `ξ = ∏ ξⱼ^{kⱼ}`.
#[derive(Clone, Debug, Serialize)]
pub struct Prop5Sample {
    pub k_max: u32,
}

impl Prop5Sample {
    pub fn cardinality(&self, m: usize) -> u128 {
        (2 * self.k_max as u128 + 1).saturating_pow(m as u32)
    }
}

#[derive(Serialize)]
struct Worst {
    exponents: Vec<i64>,
    xi: AlgNum,
    /// `ln|1 − αξ|_v`.
    log_abs: TaggedInterval,
    /// The lower bound it is compared with.
    bound: TaggedInterval,
}

/// Check `ln|1 − αξ|_v > −exp(L)` for every sampled `ξ` with `αξ ≠ 1`.
/// The margin is `L − ln(−ln|1 − αξ|_v)`.
pub fn sample_check_prop5(field: &FieldProfile, gens: &[AlgNum], alpha: &AlgNum, v: &Place, sample: &Prop5Sample, prec: u32) -> Result<Audit> {
    if field.is_asserted() {
        return Err(Error::AssertedFieldUnsupported);
    }
    if gens.is_empty() {
        return Err(Error::ParamOutOfRange("at least one generator".into()));
    }
    field.require_element(alpha)?;
    if alpha.is_zero() {
        return Err(Error::Domain("α must be nonzero".into()));
    }
    let mut theta = Interval::one(prec);
    for g in gens {
        field.require_element(g)?;
        if g.is_zero() {
            return Err(Error::Domain("generators must be nonzero".into()));
        }
        let h = height(g, prec)?.value;
        if h.hi() <= &0 {
            return Err(Error::Domain(format!("generator {g} is a root of unity")));
        }
        theta = theta.mul(&h);
    }
    let h = height(alpha, prec)?.value.max(&Interval::one(prec));
    let m = gens.len();
    let k = sample.k_max as i64;
    let side = 2 * k + 1;
    let total = side.pow(m as u32);
    let mut audit = Audit::new(format!("{} alpha={alpha} v={v} gens={gens:?}", field.name()));
    let mut worst = WorstMargin::default();
    let mut worst_w: Option<(Interval, Worst)> = None;
    for idx in 0..total {
        let mut exps = vec![0i64; m];
        let mut r = idx;
        for e in exps.iter_mut().rev() {
            *e = r % side - k;
            r /= side;
        }
        let mut xi = AlgNum::one();
        for (g, &e) in gens.iter().zip(&exps) {
            xi = &xi * &g.pow(e);
        }
        let z = alpha * &xi;
        if z.is_one() {
            continue;
        }
        audit.checked += 1;
        let diff = &AlgNum::one() - &z;
        let h_xi = height(&xi, prec)?.value;
        let rep = prop5_lower_bound(field.degree, v.n_v(), m as u32, &theta, &h, &h_xi)?;
        let l = rep.log_value.clone().expect("nonzero bound");
        let log_abs = |p: u32| -> Result<Interval> {
            Ok(match abs_value_exact(field, &diff, v)? {
                Some(q) => Interval::ln_ratio(p, &q),
                None => abs_value(field, &diff, v, p)?.ln(),
            })
        };
        let la = log_abs(prec)?;
        if la.lo() >= &0 {
            continue;
        }
        let mut ok = la.neg().ln().certainly_lt(&l);
        if !ok {
            let la4 = log_abs(prec * 4)?;
            ok = la4.hi() < &0 && la4.neg().ln().certainly_lt(&l.with_prec(prec * 4));
        }
        if !ok {
            return Err(Error::Prop5Violated(format!(
                "xi = {xi} (exponents {exps:?}): ln|1 - alpha*xi|_v = {la} vs bound -exp({l})"
            )));
        }
        let margin = l.sub(&la.neg().ln());
        if worst_w.as_ref().map_or(true, |(w, _)| margin.lo() < w.lo()) {
            let bound = rep.linear.clone().expect("bound value");
            worst_w = Some((
                margin.clone(),
                Worst { exponents: exps.clone(), xi: xi.clone(), log_abs: (&la).into(), bound: (&bound).into() },
            ));
        }
        worst.push(&margin);
    }
    audit.worst_margin = worst.tagged();
    if let Some((_, w)) = worst_w {
        audit.witnesses.push(serde_json::to_value(w).expect("serializable"));
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::{build_quadratic_field, build_rational_field, PrimeIdeal};

    #[test]
    fn powers_of_two() {
        let q = build_rational_field();
        let a = sample_check_prop5(&q, &[AlgNum::from_int(2)], &AlgNum::from_int(3), &Place::Real(0), &Prop5Sample { k_max: 30 }, 128).unwrap();
        assert_eq!(a.checked, 61);
        let v = Place::Finite(PrimeIdeal::rational(5));
        let a = sample_check_prop5(&q, &[AlgNum::from_int(2)], &AlgNum::one(), &v, &Prop5Sample { k_max: 30 }, 128).unwrap();
        // ξ = 1 gives αξ = 1
        assert_eq!(a.checked, 60);
        let gi = build_quadratic_field(-1).unwrap();
        let gens = [&AlgNum::one() + &AlgNum::sqrt_radicand(-1), &AlgNum::from_int(2) + &AlgNum::sqrt_radicand(-1)];
        let a = sample_check_prop5(&gi, &gens, &AlgNum::from_int(3), &Place::Complex, &Prop5Sample { k_max: 4 }, 128).unwrap();
        assert_eq!(a.checked, 81);
        assert!(sample_check_prop5(&q, &[AlgNum::from_int(-1)], &AlgNum::one(), &Place::Real(0), &Prop5Sample { k_max: 1 }, 128).is_err());
    }
}
