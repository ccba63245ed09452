use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{rational, require_rational_field};
use crate::bounds::{lemma3_bound, BoundInputs, TaggedInterval};
use crate::error::{Error, Result};
use crate::heights::{is_s_integral, s_norm, SSpec};
use crate::interval::Interval;
use crate::nf::AlgNum;

#[derive(Clone, Debug, Serialize)]
pub struct Lemma3Witness {
    pub epsilon: AlgNum,
    /// `εⁿα`.
    pub value: AlgNum,
    /// `h(εⁿα) = log(height_arg)`.
    #[serde(serialize_with = "super::ser_bigint")]
    pub height_arg: BigInt,
    /// `N_S(α)·Q_S^n`, the exact form of the bound over ℚ.
    #[serde(serialize_with = "super::ser_bigint")]
    pub bound_arg: BigInt,
    pub height: TaggedInterval,
    pub bound: TaggedInterval,
}

/// Search `ε = ∏ pᵢ^{eᵢ}`, `|eᵢ| ≤ e_max`, minimizing `h(εⁿα)`, and check the
/// minimum against the bound. Exhaustion of the box is inconclusive.
pub fn check_lemma3_constructive(alpha: &AlgNum, n: u32, s: &SSpec, e_max: u32, prec: u32) -> Result<Lemma3Witness> {
    require_rational_field(s)?;
    let a = rational(alpha, "α")?;
    if a.is_zero() {
        return Err(Error::Domain("α must be nonzero".into()));
    }
    if n == 0 {
        return Err(Error::ParamOutOfRange("n must be at least 1".into()));
    }
    if !is_s_integral(alpha, s)? {
        return Err(Error::NotSIntegral);
    }
    let primes = s.rational_primes();
    let nn = n as i64;
    let em = e_max as i64;
    // |α| = u·∏ p^{vₚ}, u the S-free part
    let mut u = a.numer().abs();
    let mut den = a.denom().clone();
    let mut vals = Vec::with_capacity(primes.len());
    for &p in &primes {
        let vp = crate::arith::valuation(&u, p) as i64 - crate::arith::valuation(&den, p) as i64;
        u /= num_traits::pow(BigInt::from(p), crate::arith::valuation(&u, p) as usize);
        den /= num_traits::pow(BigInt::from(p), crate::arith::valuation(&den, p) as usize);
        vals.push(vp);
    }
    debug_assert!(den.is_one());

    let value = |e: &[i64]| -> BigInt {
        let mut num = u.clone();
        let mut d = BigInt::one();
        for ((&p, &vp), &ep) in primes.iter().zip(&vals).zip(e) {
            let f = vp + nn * ep;
            if f > 0 {
                num *= num_traits::pow(BigInt::from(p), f as usize);
            } else if f < 0 {
                d *= num_traits::pow(BigInt::from(p), (-f) as usize);
            }
        }
        num.max(d)
    };
    // a good start: each fₚ close to 0
    let start: Vec<i64> = vals.iter().map(|&vp| (-(vp as f64) / nn as f64).round() as i64).map(|e| e.clamp(-em, em)).collect();
    let v0 = value(&start);
    // any better ε has pᵢ^{|fᵢ|} ≤ v0 for every i
    let ranges: Vec<Vec<i64>> = primes
        .iter()
        .zip(&vals)
        .map(|(&p, &vp)| {
            let lim = max_exp(&v0, p);
            (-em..=em).filter(|&e| (vp + nn * e).abs() <= lim).collect()
        })
        .collect();
    let mut best = (v0, start);
    let mut idx = vec![0usize; primes.len()];
    if ranges.iter().all(|r| !r.is_empty()) {
        loop {
            let e: Vec<i64> = idx.iter().zip(&ranges).map(|(&i, r)| r[i]).collect();
            let v = value(&e);
            if v < best.0 || (v == best.0 && e < best.1) {
                best = (v, e);
            }
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < ranges[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    let (hv, e) = best;
    let mut eps = BigRational::one();
    for (&p, &ep) in primes.iter().zip(&e) {
        let pq = BigRational::from_integer(p.into());
        eps *= if ep >= 0 { num_traits::pow(pq, ep as usize) } else { num_traits::pow(pq.recip(), (-ep) as usize) };
    }
    let eps_a = AlgNum::from_ratio(&eps);
    let val = &eps_a.pow(nn) * alpha;

    let ns = s_norm(alpha, s)?;
    let inp = BoundInputs::from_sspec(s, Interval::one(prec))?;
    let rep = lemma3_bound(&inp, &Interval::ln_ratio(prec, &ns), n)?;
    let bound = rep.linear.clone().expect("height-scale report");
    let bound_arg = ns.to_integer() * num_traits::pow(inp.q_s.clone(), n as usize);
    let h = Interval::ln_int(prec, &hv);
    if hv > bound_arg {
        return Err(Error::WitnessNotFound);
    }
    if !h.certainly_le(&bound) && !h.overlaps(&bound) {
        return Err(Error::VerificationFailed("exact and interval bounds disagree".into()));
    }
    Ok(Lemma3Witness {
        epsilon: eps_a,
        value: val,
        height_arg: hv,
        bound_arg,
        height: TaggedInterval::from(&h),
        bound: TaggedInterval::from(&bound),
    })
}

/// Largest `k` with `p^k ≤ v`.
fn max_exp(v: &BigInt, p: u64) -> i64 {
    let bits = v.bits() as f64;
    let mut k = (bits / (p as f64).log2()).floor() as i64 + 1;
    while k > 0 && num_traits::pow(BigInt::from(p), k as usize) > *v {
        k -= 1;
    }
    k.to_i64().unwrap_or(0)
}
