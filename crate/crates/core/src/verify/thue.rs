use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{rational, require_rational_field};
use crate::error::{Error, Result};
use crate::forms::Poly;
use crate::heights::{height, max_heights, HeightValue, SSpec};
use crate::nf::AlgNum;

/// Solutions `(a/D, b/D)` with `|a|, |b| ≤ num_max` and `D = ∏ pᵢ^{eᵢ}`,
/// `eᵢ ≤ den_exp_max`.
#[derive(Clone, Debug, Serialize)]
pub struct ThueBox {
    pub num_max: u32,
    pub den_exp_max: u32,
    pub budget: u128,
}

impl ThueBox {
    pub fn new(num_max: u32) -> Self {
        ThueBox { num_max, den_exp_max: num_max, budget: 100_000_000 }
    }

    pub fn cardinality(&self) -> u128 {
        (2 * self.num_max as u128 + 1).pow(2)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThueSolution {
    pub x: AlgNum,
    pub y: AlgNum,
    /// `max(h(x), h(y))`.
    #[serde(serialize_with = "super::ser_height")]
    pub h: HeightValue,
}

fn h0(x: &AlgNum, prec: u32) -> Result<HeightValue> {
    if x.is_zero() {
        Ok(HeightValue::zero(prec))
    } else {
        height(x, prec)
    }
}

/// `F(x, y) = δ` in S-integers, complete within the box.
pub fn enumerate_thue_solutions(form: &Poly, delta: &AlgNum, s: &SSpec, bx: &ThueBox, prec: u32) -> Result<Vec<ThueSolution>> {
    require_rational_field(s)?;
    if form.nvars() != 2 {
        return Err(Error::Domain("a binary form is required".into()));
    }
    let n = form.homogeneous_degree().ok_or(Error::NotHomogeneous)? as usize;
    if n == 0 {
        return Err(Error::Domain("the form must have positive degree".into()));
    }
    let delta_q = rational(delta, "δ")?;
    if delta_q.is_zero() {
        return Err(Error::Domain("δ must be nonzero".into()));
    }
    // coefficient of X^{n−i} Y^i
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for (e, c) in form.terms() {
        coeffs[e[1] as usize] = c.to_rational().ok_or_else(|| Error::UnsupportedCoefficientField("enumeration needs rational coefficients".into()))?;
    }
    let c = bx.cardinality();
    if c > bx.budget {
        return Err(Error::BoxTooLarge { size: c, budget: bx.budget });
    }
    let primes = s.rational_primes();
    let nm = bx.num_max as i64;
    let mut found: BTreeSet<(BigRational, BigRational)> = BTreeSet::new();
    for a in -nm..=nm {
        for b in -nm..=nm {
            if a == 0 && b == 0 {
                continue;
            }
            let (ab, bb) = (BigRational::from_integer(a.into()), BigRational::from_integer(b.into()));
            let mut val = BigRational::zero();
            for (i, ci) in coeffs.iter().enumerate() {
                if !ci.is_zero() {
                    val += ci * num_traits::pow(ab.clone(), n - i) * num_traits::pow(bb.clone(), i);
                }
            }
            let v = val / &delta_q;
            let Some(d) = nth_root_s_supported(&v, n, &primes, bx.den_exp_max) else { continue };
            let dq = BigRational::from_integer(d);
            found.insert((ab / &dq, bb / &dq));
        }
    }
    let mut out = Vec::with_capacity(found.len());
    for (x, y) in found {
        let (xa, ya) = (AlgNum::from_ratio(&x), AlgNum::from_ratio(&y));
        if form.eval(&[xa.clone(), ya.clone()])? != *delta {
            return Err(Error::VerificationFailed(format!("({x}, {y}) failed the exact recheck")));
        }
        let h = max_heights(&[h0(&xa, prec)?, h0(&ya, prec)?]);
        out.push(ThueSolution { x: xa, y: ya, h });
    }
    Ok(out)
}

/// `D > 0` with `v = Dⁿ` and `D = ∏ pᵢ^{eᵢ}`, `eᵢ ≤ e_max`.
fn nth_root_s_supported(v: &BigRational, n: usize, primes: &[u64], e_max: u32) -> Option<BigInt> {
    if !v.denom().is_one() || !v.numer().is_positive() {
        return None;
    }
    let mut rest = v.numer().clone();
    let mut d = BigInt::one();
    for &p in primes {
        let k = crate::arith::valuation(&rest, p) as usize;
        if k % n != 0 || k / n > e_max as usize {
            return None;
        }
        rest /= num_traits::pow(BigInt::from(p), k);
        d *= num_traits::pow(BigInt::from(p), k / n);
    }
    rest.is_one().then_some(d)
}
