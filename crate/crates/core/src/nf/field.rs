//! Field profiles: ℚ, quadratic fields, and user-asserted invariants.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::alg::AlgNum;
use super::classgroup::ClassGroup;
use super::ideal::{split_prime_quadratic, PrimeIdeal};
use super::quad::QuadField;
use crate::arith::{factor_u64, is_prime_u64, is_squarefree};
use crate::error::{Error, Result};
use crate::interval::Interval;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Computed,
    Asserted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FieldProvenance {
    pub degree: Provenance,
    pub unit_rank: Provenance,
    pub regulator: Provenance,
    pub class_number: Provenance,
    pub discriminant: Provenance,
}

impl FieldProvenance {
    fn all(p: Provenance) -> Self {
        FieldProvenance { degree: p, unit_rank: p, regulator: p, class_number: p, discriminant: p }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rational,
    Quadratic(i64),
    Asserted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Regulator {
    /// Empty determinant (`r = 0`).
    One,
    /// `log ε₀`, kept symbolic so it can be evaluated at any precision.
    LogUnit(AlgNum),
    Asserted(BigRational),
}

/// Work limits for field construction.
#[derive(Clone, Copy, Debug)]
pub struct FieldConfig {
    /// Largest accepted `|disc|`.
    pub disc_limit: u64,
    /// Step budget for continued fractions, reductions and class enumeration.
    pub budget: u64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig { disc_limit: 1_000_000, budget: 2_000_000 }
    }
}

#[derive(Clone)]
pub struct FieldProfile {
    pub degree: u32,
    pub unit_rank: u32,
    pub class_number: u64,
    /// 0 for asserted profiles.
    pub discriminant: i64,
    pub kind: FieldKind,
    pub fundamental_unit: Option<AlgNum>,
    pub provenance: FieldProvenance,
    /// Norms of the prime ideals an asserted profile supplies.
    pub prime_ideal_norms: Vec<u64>,
    regulator: Regulator,
    quad: Option<Arc<ClassGroup>>,
}

impl fmt::Debug for FieldProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldProfile")
            .field("kind", &self.kind)
            .field("d", &self.degree)
            .field("r", &self.unit_rank)
            .field("R_K", &self.regulator)
            .field("h_K", &self.class_number)
            .field("disc", &self.discriminant)
            .finish()
    }
}

impl PartialEq for FieldProfile {
    fn eq(&self, o: &Self) -> bool {
        self.degree == o.degree
            && self.unit_rank == o.unit_rank
            && self.class_number == o.class_number
            && self.discriminant == o.discriminant
            && self.kind == o.kind
            && self.fundamental_unit == o.fundamental_unit
            && self.provenance == o.provenance
            && self.prime_ideal_norms == o.prime_ideal_norms
            && self.regulator == o.regulator
    }
}

pub fn build_rational_field() -> FieldProfile {
    FieldProfile {
        degree: 1,
        unit_rank: 0,
        class_number: 1,
        discriminant: 1,
        kind: FieldKind::Rational,
        fundamental_unit: None,
        provenance: FieldProvenance::all(Provenance::Computed),
        prime_ideal_norms: Vec::new(),
        regulator: Regulator::One,
        quad: None,
    }
}

pub fn build_quadratic_field(radicand: i64) -> Result<FieldProfile> {
    build_quadratic_field_with(radicand, FieldConfig::default())
}

pub fn build_quadratic_field_with(radicand: i64, cfg: FieldConfig) -> Result<FieldProfile> {
    if radicand == 0 || radicand == 1 || !is_squarefree(radicand) {
        return Err(Error::NotSquarefree(radicand));
    }
    let f = QuadField::new(radicand);
    if f.disc.unsigned_abs() > cfg.disc_limit {
        return Err(Error::LimitExceeded(format!("|disc| = {} exceeds the limit {}", f.disc.abs(), cfg.disc_limit)));
    }
    let (unit, regulator, rank) = if f.is_real() {
        let e = f.fundamental_unit(cfg.budget)?;
        (Some(e.clone()), Regulator::LogUnit(e), 1)
    } else {
        (None, Regulator::One, 0)
    };
    let cg = ClassGroup::new(&f, unit.clone(), cfg.budget)?;
    let h = cg.class_number()?;
    Ok(FieldProfile {
        degree: 2,
        unit_rank: rank,
        class_number: h,
        discriminant: f.disc,
        kind: FieldKind::Quadratic(radicand),
        fundamental_unit: unit,
        provenance: FieldProvenance::all(Provenance::Computed),
        prime_ideal_norms: Vec::new(),
        regulator,
        quad: Some(Arc::new(cg)),
    })
}

/// Asserted invariants of a field the toolkit does not compute.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AssertedRecord {
    pub d: u32,
    pub r: u32,
    #[serde(rename = "R_K")]
    pub regulator: serde_json::Value,
    #[serde(rename = "h_K")]
    pub class_number: u64,
    #[serde(default)]
    pub prime_ideal_norms: Vec<u64>,
}

/// Exact value of a decimal literal such as `0.85`, `-3`, `1.5e-2`.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}0").parse::<BigInt>().ok()? / 10;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut q = BigRational::from_integer(digits);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -q } else { q })
}

pub fn import_field_profile(rec: &AssertedRecord) -> Result<FieldProfile> {
    let bad = |m: String| Err(Error::InconsistentInvariants(m));
    let reg = match &rec.regulator {
        serde_json::Value::String(s) => parse_decimal(s),
        serde_json::Value::Number(n) => parse_decimal(&n.to_string()),
        _ => None,
    };
    let Some(reg) = reg else { return bad("R_K must be a decimal number".into()) };
    if rec.d == 0 {
        return bad("d must be positive".into());
    }
    if rec.r + 1 > rec.d {
        return bad(format!("unit rank r = {} exceeds d − 1 = {}", rec.r, rec.d - 1));
    }
    if rec.r + 1 < rec.d.div_ceil(2) {
        return bad(format!("unit rank r = {} is below ⌈d/2⌉ − 1", rec.r));
    }
    if !reg.is_positive() {
        return bad("R_K must be positive".into());
    }
    if rec.r == 0 && !reg.is_one() {
        return bad("r = 0 requires R_K = 1 (empty determinant)".into());
    }
    if rec.class_number == 0 {
        return bad("h_K must be positive".into());
    }
    for &n in &rec.prime_ideal_norms {
        let f = if n >= 2 { factor_u64(n) } else { Vec::new() };
        if f.len() != 1 || f[0].1 > rec.d {
            return bad(format!("{n} is not the norm of a prime ideal of a degree-{} field", rec.d));
        }
    }
    Ok(FieldProfile {
        degree: rec.d,
        unit_rank: rec.r,
        class_number: rec.class_number,
        discriminant: 0,
        kind: FieldKind::Asserted,
        fundamental_unit: None,
        provenance: FieldProvenance::all(Provenance::Asserted),
        prime_ideal_norms: rec.prime_ideal_norms.clone(),
        regulator: if rec.r == 0 { Regulator::One } else { Regulator::Asserted(reg) },
        quad: None,
    })
}

impl FieldProfile {
    pub fn is_asserted(&self) -> bool {
        self.kind == FieldKind::Asserted
    }

    pub fn radicand(&self) -> Option<i64> {
        match self.kind {
            FieldKind::Quadratic(d) => Some(d),
            _ => None,
        }
    }

    pub fn quad(&self) -> Option<&QuadField> {
        self.quad.as_deref().map(|c| c.field())
    }

    pub fn class_group(&self) -> Option<&ClassGroup> {
        self.quad.as_deref()
    }

    /// Number of archimedean places and their local degrees.
    pub fn infinite_local_degrees(&self) -> Vec<u32> {
        match self.kind {
            FieldKind::Rational => vec![1],
            FieldKind::Quadratic(d) if d > 0 => vec![1, 1],
            FieldKind::Quadratic(_) => vec![2],
            FieldKind::Asserted => {
                // r₁ + r₂ = r + 1, r₁ + 2r₂ = d
                let r2 = self.degree - self.unit_rank - 1;
                let r1 = self.unit_rank + 1 - r2;
                let mut v = vec![1; r1 as usize];
                v.extend(std::iter::repeat(2).take(r2 as usize));
                v
            }
        }
    }

    /// `R_K` at the given precision.
    pub fn regulator(&self, prec: u32) -> Interval {
        match &self.regulator {
            Regulator::One => Interval::one(prec),
            Regulator::LogUnit(e) => e.real_embedding(prec, 0).ln(),
            Regulator::Asserted(q) => Interval::from_ratio(prec, q),
        }
    }

    /// Exact rational `R_K` when it has one (ℚ, imaginary, asserted).
    pub fn regulator_exact(&self) -> Option<BigRational> {
        match &self.regulator {
            Regulator::One => Some(BigRational::one()),
            Regulator::Asserted(q) => Some(q.clone()),
            Regulator::LogUnit(_) => None,
        }
    }

    /// `R_K > 1/5`, certified by interval comparison.
    pub fn friedman_floor_holds(&self) -> bool {
        let r = self.regulator(128);
        r.lo() > &rug::Float::with_val(128, 0.2f64)
    }

    /// Whether `α` lies in this field (exact arithmetic needed).
    pub fn contains(&self, alpha: &AlgNum) -> Result<bool> {
        match self.kind {
            FieldKind::Rational => Ok(alpha.is_rational()),
            FieldKind::Quadratic(d) => Ok(alpha.fits_field(d)),
            FieldKind::Asserted => Err(Error::AssertedFieldUnsupported),
        }
    }

    pub fn require_element(&self, alpha: &AlgNum) -> Result<()> {
        if self.contains(alpha)? {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Prime ideals above a rational prime.
    pub fn split_prime(&self, p: u64) -> Result<Vec<PrimeIdeal>> {
        if self.is_asserted() {
            return Err(Error::AssertedFieldUnsupported);
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(match self.quad() {
            None => vec![PrimeIdeal::rational(p)],
            Some(f) => split_prime_quadratic(f, p),
        })
    }

    /// `ord_𝔭(α)`.
    pub fn ord(&self, pi: &PrimeIdeal, alpha: &AlgNum) -> Result<i64> {
        self.require_element(alpha)?;
        if alpha.is_zero() {
            return Err(Error::Domain("ord of 0".into()));
        }
        Ok(pi.ord(self.quad(), alpha))
    }

    /// Field norm `N_{K/ℚ}(α)`.
    pub fn norm(&self, alpha: &AlgNum) -> Result<BigRational> {
        self.require_element(alpha)?;
        Ok(alpha.norm_in(self.degree))
    }

    /// Short description, e.g. `Q`, `Q(sqrt(-5))`, `asserted(d=3)`.
    pub fn name(&self) -> String {
        match self.kind {
            FieldKind::Rational => "Q".into(),
            FieldKind::Quadratic(-1) => "Q(i)".into(),
            FieldKind::Quadratic(d) => format!("Q(sqrt({d}))"),
            FieldKind::Asserted => format!("asserted(d={})", self.degree),
        }
    }

    /// Whether every element is determined exactly (not asserted).
    pub fn is_computed(&self) -> bool {
        !self.is_asserted()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn rational_invariants() {
        let q = build_rational_field();
        assert_eq!((q.degree, q.unit_rank, q.class_number), (1, 0, 1));
        assert!(q.regulator(64).is_point());
        assert!(q.friedman_floor_holds());
    }

    #[test]
    fn quadratic_examples() {
        let k = build_quadratic_field(-1).unwrap();
        assert_eq!((k.degree, k.unit_rank, k.class_number, k.discriminant), (2, 0, 1, -4));
        let k = build_quadratic_field(5).unwrap();
        assert_eq!(k.fundamental_unit.as_ref().unwrap().to_string(), "(1+sqrt(5))/2");
        let r = k.regulator(128);
        assert!((r.mid_f64() - 0.481_211_825_059_603_4).abs() < 1e-15);
        assert_eq!(build_quadratic_field(-5).unwrap().class_number, 2);
        assert!(matches!(build_quadratic_field(12), Err(Error::NotSquarefree(12))));
    }

    #[test]
    fn splitting_examples() {
        let q = build_rational_field();
        assert_eq!(q.split_prime(7).unwrap()[0].norm, 7);
        assert_eq!(q.split_prime(8), Err(Error::NotPrime(8)));
        let k = build_quadratic_field(-1).unwrap();
        assert_eq!(k.split_prime(5).unwrap().len(), 2);
        assert_eq!(k.split_prime(3).unwrap()[0].norm, 9);
    }

    fn rec(d: u32, r: u32, reg: &str, h: u64) -> AssertedRecord {
        AssertedRecord { d, r, regulator: serde_json::Value::String(reg.into()), class_number: h, prime_ideal_norms: vec![] }
    }

    #[test]
    fn asserted_profiles() {
        let p = import_field_profile(&rec(3, 1, "0.85", 1)).unwrap();
        assert_eq!(p.regulator_exact(), Some(BigRational::new(17.into(), 20.into())));
        assert_eq!(p.split_prime(2), Err(Error::AssertedFieldUnsupported));
        assert!(matches!(import_field_profile(&rec(2, 2, "1", 1)), Err(Error::InconsistentInvariants(_))));
        assert!(matches!(import_field_profile(&rec(3, 1, "-1", 1)), Err(Error::InconsistentInvariants(_))));
        let q = import_field_profile(&rec(1, 0, "1", 1)).unwrap();
        let mut expect = build_rational_field();
        expect.kind = FieldKind::Asserted;
        expect.discriminant = 0;
        expect.provenance = FieldProvenance::all(Provenance::Asserted);
        assert_eq!(q, expect);
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_decimal("0.85"), Some(BigRational::new(17.into(), 20.into())));
        assert_eq!(parse_decimal("-1.5e2"), Some(BigRational::from_integer((-150).into())));
        assert_eq!(parse_decimal("2e-3"), Some(BigRational::new(1.into(), 500.into())));
        assert_eq!(parse_decimal("x"), None);
        assert!(BigRational::zero() < parse_decimal(".5").unwrap());
    }
}
