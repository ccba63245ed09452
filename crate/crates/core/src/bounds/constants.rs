//! The explicit constants `c₁ … c₆`, `c₁₀`, `c₁₁`, evaluated in log space.
//!
//! Integer and rational parts are formed exactly and logged once; powers of
//! `e` contribute their exponent directly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Which reading of `c₃` to use.
///
/// `Section2`: `0`, `1/d`, `29e·r!·r·√(r−1)·log d` for `r = 0, 1, ≥ 2`.
/// `Lemma3`: `0`, `1`, `29e·r!·r·√(r−1)·log* d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum C3Variant {
    Section2,
    Lemma3,
}

/// Parameters a constant may depend on; unused ones are ignored.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConstParams {
    pub d: u32,
    pub r: u32,
    pub s: u32,
    pub t: u32,
    pub m: u32,
}

/// A nonnegative constant: its logarithm (absent for 0) and, when it is
/// rational, its exact value.
#[derive(Clone, Debug)]
pub struct ConstValue {
    pub name: String,
    pub log: Option<Interval>,
    pub exact: Option<BigRational>,
}

impl ConstValue {
    fn exact(name: &str, q: BigRational, prec: u32) -> Self {
        let log = (!q.is_zero()).then(|| Interval::ln_ratio(prec, &q));
        ConstValue { name: name.into(), log, exact: Some(q) }
    }

    fn logged(name: &str, log: Interval) -> Self {
        ConstValue { name: name.into(), log: Some(log), exact: None }
    }

    /// The constant itself (not its logarithm).
    pub fn value(&self, prec: u32) -> Interval {
        match (&self.exact, &self.log) {
            (Some(q), _) => Interval::from_ratio(prec, q),
            (None, Some(l)) => l.exp(),
            (None, None) => Interval::zero(prec),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log.is_none()
    }
}

pub const NAMES: [&str; 9] = ["c1", "c2", "c3", "c3_lemma3", "c4", "c5", "c6", "c10", "c11"];

fn int(n: u64) -> BigInt {
    BigInt::from(n)
}

fn pow(b: u64, e: u32) -> BigInt {
    num_traits::pow(int(b), e as usize)
}

fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * k)
}

fn ln_int(prec: u32, n: &BigInt) -> Interval {
    Interval::ln_int(prec, n)
}

/// `ln log* n`.
fn ln_log_star(prec: u32, n: u64) -> Interval {
    Interval::from_bigint(prec, &int(n)).ln_star().ln()
}

fn check_degree(p: &ConstParams) -> Result<()> {
    if p.d == 0 {
        return Err(Error::ParamOutOfRange("d must be at least 1".into()));
    }
    if p.r >= p.d {
        return Err(Error::ParamOutOfRange(format!("unit rank r = {} needs r ≤ d − 1 = {}", p.r, p.d - 1)));
    }
    Ok(())
}

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange(msg.into()))
    }
}

/// `c₁(d,s) = (16ds)^{2(s+3)}`.
pub fn c1(d: u32, s: u32, prec: u32) -> ConstValue {
    ConstValue::exact("c1", BigRational::from_integer(pow(16 * d as u64 * s as u64, 2 * (s + 3))), prec)
}

/// `c₂(d,r) = (4d)^{4(r+4)}`.
pub fn c2(d: u32, r: u32, prec: u32) -> ConstValue {
    ConstValue::exact("c2", BigRational::from_integer(pow(4 * d as u64, 4 * (r + 4))), prec)
}

/// `c₃` in either reading.
pub fn c3(d: u32, r: u32, variant: C3Variant, prec: u32) -> ConstValue {
    let name = match variant {
        C3Variant::Section2 => "c3",
        C3Variant::Lemma3 => "c3_lemma3",
    };
    match r {
        0 => ConstValue::exact(name, BigRational::zero(), prec),
        1 => {
            let v = match variant {
                C3Variant::Section2 => BigRational::new(BigInt::one(), int(d as u64)),
                C3Variant::Lemma3 => BigRational::one(),
            };
            ConstValue::exact(name, v, prec)
        }
        _ => {
            // 29·e·r!·r·√(r−1)·L with L = log d or log* d
            let head = ln_int(prec, &(factorial(r) * 29u32 * r)).add(&Interval::one(prec));
            let root = ln_int(prec, &int(r as u64 - 1)).div_int(2);
            let l = match variant {
                C3Variant::Section2 => ln_int(prec, &int(d as u64)).ln(),
                C3Variant::Lemma3 => ln_log_star(prec, d as u64),
            };
            ConstValue::logged(name, head.add(&root).add(&l))
        }
    }
}

/// `c₄(d,r,t) = 16^{3r+4t+12}·d^{5r+t+20}`.
pub fn c4(d: u32, r: u32, t: u32, prec: u32) -> ConstValue {
    let v = pow(16, 3 * r + 4 * t + 12) * pow(d as u64, 5 * r + t + 20);
    ConstValue::exact("c4", BigRational::from_integer(v), prec)
}

/// `c₅(d,r,s,t) = s⁵·(16e)^{3r+4t+7}·d^{4r+2t+7}`.
pub fn c5(d: u32, r: u32, s: u32, t: u32, prec: u32) -> ConstValue {
    let k = 3 * r + 4 * t + 7;
    let int_part = pow(s as u64, 5) * pow(16, k) * pow(d as u64, 4 * r + 2 * t + 7);
    ConstValue::logged("c5", ln_int(prec, &int_part).add(&Interval::from_int(prec, k as i64)))
}

/// `2λ(m+1)·log*(dm)·(log* d)²·(16ed)^{3m+5}`; `c₆` has `λ = 1`.
fn c6_like(name: &str, d: u32, m: u32, lambda: u64, prec: u32) -> ConstValue {
    let k = 3 * m + 5;
    let int_part = int(2 * lambda * (m as u64 + 1)) * pow(16 * d as u64, k);
    let v = ln_int(prec, &int_part)
        .add(&Interval::from_int(prec, k as i64))
        .add(&ln_log_star(prec, d as u64 * m as u64))
        .add(&ln_log_star(prec, d as u64).mul_int(2));
    ConstValue::logged(name, v)
}

/// `c₆(d,m) = 2(m+1)·log*(dm)·(log* d)²·(16ed)^{3m+5}`.
pub fn c6(d: u32, m: u32, prec: u32) -> ConstValue {
    c6_like("c6", d, m, 1, prec)
}

/// `c₁₁ = 2λ(m+1)·log*(dm)·(log* d)²·(16ed)^{3m+5}`, `λ = 12` if `m = 1`.
pub fn c11(d: u32, m: u32, prec: u32) -> ConstValue {
    c6_like("c11", d, m, if m == 1 { 12 } else { 1 }, prec)
}

/// `c₁₀ = ((s−1)!)² / (2^{s−2}·d^{s−1})`.
pub fn c10(d: u32, s: u32, prec: u32) -> ConstValue {
    let f = factorial(s - 1);
    let num = BigRational::from_integer(&f * &f);
    let two = BigRational::from_integer(int(2));
    let two_pow = if s >= 2 { two.pow((s - 2) as i32) } else { two.recip() };
    let den = two_pow * BigRational::from_integer(pow(d as u64, s - 1));
    ConstValue::exact("c10", num / den, prec)
}

/// Evaluate a constant by name.
pub fn constant(name: &str, p: &ConstParams, prec: u32) -> Result<ConstValue> {
    if !NAMES.contains(&name) {
        return Err(Error::UnknownConstant(name.into()));
    }
    check_degree(p)?;
    Ok(match name {
        "c1" => {
            need(p.s >= 1, "s must be at least 1")?;
            c1(p.d, p.s, prec)
        }
        "c2" => c2(p.d, p.r, prec),
        "c3" => c3(p.d, p.r, C3Variant::Section2, prec),
        "c3_lemma3" => c3(p.d, p.r, C3Variant::Lemma3, prec),
        "c4" => c4(p.d, p.r, p.t, prec),
        "c5" => {
            need(p.s >= 1, "s must be at least 1")?;
            c5(p.d, p.r, p.s, p.t, prec)
        }
        "c6" => {
            need(p.m >= 1, "m must be at least 1")?;
            c6(p.d, p.m, prec)
        }
        "c10" => {
            need(p.s >= 1, "s must be at least 1")?;
            c10(p.d, p.s, prec)
        }
        "c11" => {
            need(p.m >= 1, "m must be at least 1")?;
            c11(p.d, p.m, prec)
        }
        _ => unreachable!(),
    })
}

/// `𝓡 = max(h_K, c₃·d·R_K)`.
pub fn script_r(d: u32, r: u32, r_k: &Interval, h_k: u64, variant: C3Variant) -> Interval {
    let prec = r_k.prec();
    let hk = Interval::from_int(prec, h_k as i64);
    let c = c3(d, r, variant, prec);
    if c.is_zero() {
        return hk;
    }
    hk.max(&c.value(prec).mul_int(d as i64).mul(r_k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let p = ConstParams { d: 1, r: 0, s: 3, t: 2, m: 1 };
        assert!(constant("c3", &p, 128).unwrap().is_zero());
        let l = constant("c1", &p, 128).unwrap().log.unwrap();
        assert!((l.mid_f64() - 12.0 * 48f64.ln()).abs() < 1e-12);
        let c = constant("c10", &ConstParams { s: 2, ..p }, 128).unwrap();
        assert!(c.exact.unwrap().is_one());
        assert_eq!(constant("c99", &p, 64).unwrap_err(), Error::UnknownConstant("c99".into()));
        assert!(matches!(constant("c6", &ConstParams { m: 0, ..p }, 64), Err(Error::ParamOutOfRange(_))));
        assert!(matches!(constant("c1", &ConstParams { d: 2, r: 2, ..p }, 64), Err(Error::ParamOutOfRange(_))));
    }

    #[test]
    fn script_r_cases() {
        let one = Interval::one(128);
        assert!(script_r(1, 0, &one, 1, C3Variant::Section2).is_point());
        let rk = Interval::from_ratio(128, &BigRational::new(4812.into(), 10000.into()));
        let v = script_r(2, 1, &rk, 1, C3Variant::Section2);
        assert_eq!(v.mid_f64(), 1.0);
        let v = script_r(2, 1, &Interval::from_int(128, 3), 1, C3Variant::Section2);
        assert_eq!(v.mid_f64(), 3.0);
    }

    #[test]
    fn c3_large_rank() {
        // d = 5, r = 3: 29e·6·3·√2·log 5
        let v = c3(5, 3, C3Variant::Section2, 128).log.unwrap();
        let want = (29.0 * std::f64::consts::E * 18.0 * 2f64.sqrt() * 5f64.ln()).ln();
        assert!((v.mid_f64() - want).abs() < 1e-12);
    }
}
