//! Places, normalized absolute values, absolute and local heights.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::nf::{AlgNum, FieldKind, FieldProfile, PrimeIdeal};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    /// Real embedding; index 0 sends `√D ↦ +√D`.
    Real(usize),
    Complex,
    Finite(PrimeIdeal),
}

impl Place {
    pub fn is_infinite(&self) -> bool {
        !matches!(self, Place::Finite(_))
    }

    /// `d_v`.
    pub fn local_degree(&self) -> u32 {
        match self {
            Place::Real(_) => 1,
            Place::Complex => 2,
            Place::Finite(p) => p.local_degree(),
        }
    }

    /// `N(v)`: 2 at infinite places, `N(𝔭)` at finite ones.
    pub fn n_v(&self) -> u64 {
        match self {
            Place::Finite(p) => p.norm,
            _ => 2,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Place::Real(0) => "inf".into(),
            Place::Real(i) => format!("inf{}", i + 1),
            Place::Complex => "inf".into(),
            Place::Finite(p) => p.label.clone(),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

/// The archimedean places of a field.
pub fn infinite_places(field: &FieldProfile) -> Vec<Place> {
    match field.kind {
        FieldKind::Rational => vec![Place::Real(0)],
        FieldKind::Quadratic(d) if d > 0 => vec![Place::Real(0), Place::Real(1)],
        FieldKind::Quadratic(_) => vec![Place::Complex],
        FieldKind::Asserted => field
            .infinite_local_degrees()
            .into_iter()
            .enumerate()
            .map(|(i, dv)| if dv == 1 { Place::Real(i) } else { Place::Complex })
            .collect(),
    }
}

/// `h = (1/root)·log(arg)` with rational `arg ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactLog {
    pub arg: BigRational,
    pub root: u32,
}

impl ExactLog {
    pub fn eval(&self, prec: u32) -> Interval {
        Interval::ln_ratio(prec, &self.arg).div_int(self.root as i64)
    }
}

/// A height: a sound enclosure plus, when available, its exact form.
#[derive(Clone, Debug)]
pub struct HeightValue {
    pub value: Interval,
    pub exact: Option<ExactLog>,
}

impl HeightValue {
    pub fn from_exact(prec: u32, e: ExactLog) -> Self {
        HeightValue { value: e.eval(prec), exact: Some(e) }
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_exact(prec, ExactLog { arg: BigRational::one(), root: 1 })
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Exact equality test when both sides are exact logs:
    /// `arg₁^{root₂} = arg₂^{root₁}`.
    pub fn exact_eq(&self, other: &HeightValue) -> Option<bool> {
        let (a, b) = (self.exact.as_ref()?, other.exact.as_ref()?);
        Some(num_traits::pow(a.arg.clone(), b.root as usize) == num_traits::pow(b.arg.clone(), a.root as usize))
    }

    /// Exact comparison `self ≤ other` when both sides are exact logs.
    pub fn exact_le(&self, other: &HeightValue) -> Option<bool> {
        let (a, b) = (self.exact.as_ref()?, other.exact.as_ref()?);
        Some(num_traits::pow(a.arg.clone(), b.root as usize) <= num_traits::pow(b.arg.clone(), a.root as usize))
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(e) if e.root == 1 => write!(f, "log({}) ∈ {}", e.arg, self.value),
            Some(e) => write!(f, "(1/{})·log({}) ∈ {}", e.root, e.arg, self.value),
            None => write!(f, "{}", self.value),
        }
    }
}

fn check_element(field: &FieldProfile, alpha: &AlgNum) -> Result<()> {
    if field.is_asserted() {
        return Err(Error::AssertedFieldUnsupported);
    }
    field.require_element(alpha)
}

/// `|α|_v` in the normalization `|σα|` (real), `|σα|²` (complex),
/// `N(𝔭)^{−ord_𝔭 α}` (finite).
pub fn abs_value(field: &FieldProfile, alpha: &AlgNum, v: &Place, prec: u32) -> Result<Interval> {
    check_element(field, alpha)?;
    if alpha.is_zero() {
        return Ok(Interval::zero(prec));
    }
    Ok(match v {
        Place::Real(i) => alpha.real_embedding(prec, *i).abs(),
        Place::Complex => Interval::from_ratio(prec, &alpha.norm()),
        Place::Finite(_) => Interval::from_ratio(prec, &abs_value_exact(field, alpha, v)?.expect("finite place")),
    })
}

/// Exact `|α|_v` where it is rational (finite places, complex places, ℚ).
pub fn abs_value_exact(field: &FieldProfile, alpha: &AlgNum, v: &Place) -> Result<Option<BigRational>> {
    check_element(field, alpha)?;
    if alpha.is_zero() {
        return Ok(Some(BigRational::zero()));
    }
    Ok(match v {
        Place::Finite(p) => {
            let k = field.ord(p, alpha)?;
            let n = BigRational::from_integer(p.norm.into());
            Some(num_traits::pow(n, k.unsigned_abs() as usize)).map(|x| if k > 0 { x.recip() } else { x })
        }
        Place::Complex => Some(alpha.norm()),
        Place::Real(_) if alpha.is_rational() => Some(alpha.to_rational().unwrap().abs()),
        Place::Real(_) => None,
    })
}

/// Absolute logarithmic height, computed from the primitive minimal
/// polynomial so the value does not depend on the ambient field.
pub fn height(alpha: &AlgNum, prec: u32) -> Result<HeightValue> {
    if alpha.is_zero() {
        return Err(Error::Domain("the height of 0 is not defined here".into()));
    }
    if let Some(q) = alpha.to_rational() {
        let arg = q.numer().abs().max(q.denom().clone());
        return Ok(HeightValue::from_exact(prec, ExactLog { arg: BigRational::from_integer(arg), root: 1 }));
    }
    let a0 = BigRational::from_integer(alpha.min_poly()[0].clone());
    let n = alpha.norm().abs();
    let one = BigRational::one();
    if alpha.radicand() < 0 {
        let arg = &a0 * if n > one { n } else { one };
        return Ok(HeightValue::from_exact(prec, ExactLog { arg, root: 2 }));
    }
    let gt1 = |i: usize| alpha.real_gt(&AlgNum::one(), i) || (-alpha).real_gt(&AlgNum::one(), i);
    let (big0, big1) = (gt1(0), gt1(1));
    let exact = match (big0, big1) {
        (false, false) => Some(a0.clone()),
        (true, true) => Some(&a0 * &n),
        _ => None,
    };
    if let Some(arg) = exact {
        return Ok(HeightValue::from_exact(prec, ExactLog { arg, root: 2 }));
    }
    let i = if big0 { 0 } else { 1 };
    let v = Interval::from_ratio(prec, &a0).ln().add(&alpha.real_embedding(prec, i).abs().ln());
    Ok(HeightValue { value: v.div_int(2), exact: None })
}

/// Height as the sum over places, `(1/d) Σ_v log max(1, |α|_v)`, over the
/// given field; used to cross-check [`height`].
pub fn height_by_places(field: &FieldProfile, alpha: &AlgNum, prec: u32) -> Result<Interval> {
    check_element(field, alpha)?;
    if alpha.is_zero() {
        return Err(Error::Domain("the height of 0 is not defined here".into()));
    }
    let mut acc = Interval::zero(prec);
    for v in infinite_places(field) {
        acc = acc.add(&abs_value(field, alpha, &v, prec)?.ln_plus());
    }
    // finite places with |α|_v > 1: primes dividing the denominator ideal
    let den = denominator_primes(field, alpha);
    for p in den {
        for pi in field.split_prime(p)? {
            let v = Place::Finite(pi);
            acc = acc.add(&abs_value(field, alpha, &v, prec)?.ln_plus());
        }
    }
    Ok(acc.div_int(field.degree as i64))
}

fn denominator_primes(field: &FieldProfile, alpha: &AlgNum) -> Vec<u64> {
    use num_traits::ToPrimitive;
    let lead = match field.quad() {
        Some(_) => alpha.min_poly()[0].clone(),
        None => alpha.to_rational().unwrap().denom().clone(),
    };
    if lead.is_one() {
        return Vec::new();
    }
    crate::arith::factor(lead.magnitude()).into_iter().map(|(p, _)| p.to_u64().expect("prime fits u64")).collect()
}

/// `h_v(γ) = log⁺(1/|γ|_v)`.
pub fn local_height(field: &FieldProfile, gamma: &AlgNum, v: &Place, prec: u32) -> Result<HeightValue> {
    if gamma.is_zero() {
        return Err(Error::Domain("local height of 0".into()));
    }
    if let Some(q) = abs_value_exact(field, gamma, v)? {
        let inv = q.recip();
        let arg = if inv > BigRational::one() { inv } else { BigRational::one() };
        return Ok(HeightValue::from_exact(prec, ExactLog { arg, root: 1 }));
    }
    let a = abs_value(field, gamma, v, prec)?;
    Ok(HeightValue { value: a.ln().neg().max(&Interval::zero(prec)), exact: None })
}

/// `max(h(α), h(β), 1)`.
pub fn big_h(alpha: &AlgNum, beta: &AlgNum, prec: u32) -> Result<HeightValue> {
    let ha = height(alpha, prec)?;
    let hb = height(beta, prec)?;
    Ok(max_heights(&[ha, hb, HeightValue::one_log(prec)]))
}

impl HeightValue {
    /// The constant 1 as a height-scale quantity (`log e`), kept inexact.
    pub fn one_log(prec: u32) -> Self {
        HeightValue { value: Interval::one(prec), exact: None }
    }
}

/// Maximum of a list of heights; exactness is kept only when the winner is
/// certain and exact.
pub fn max_heights(hs: &[HeightValue]) -> HeightValue {
    let mut best = hs[0].clone();
    for h in &hs[1..] {
        let v = best.value.max(&h.value);
        let exact = match (best.value.certainly_cmp(&h.value), &best.exact, &h.exact) {
            (Some(std::cmp::Ordering::Greater), e, _) => e.clone(),
            (Some(std::cmp::Ordering::Less), _, e) => e.clone(),
            _ => match (best.exact_le(h), &best.exact, &h.exact) {
                (Some(true), _, e) => e.clone(),
                (Some(false), e, _) => e.clone(),
                _ => None,
            },
        };
        best = HeightValue { value: v, exact };
    }
    best
}

/// Integer `log` helper: `ln n` for `n ≥ 1`.
pub fn ln_int(prec: u32, n: u64) -> Interval {
    Interval::ln_int(prec, &BigInt::from(n))
}
