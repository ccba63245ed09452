//! Finite sets of places `S`, their statistics, S-norms and S-regulators.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::height::{abs_value, infinite_places, Place};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::nf::{s_unit_basis, AlgNum, FieldProfile, PrimeIdeal};

/// `s`, `t`, `P_S`, `P'_S`, `Q_S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceStats {
    pub s: usize,
    pub t: usize,
    #[serde(rename = "P_S")]
    pub p_s: u64,
    #[serde(rename = "P'_S")]
    pub p_prime_s: u64,
    #[serde(rename = "Q_S", serialize_with = "ser_big")]
    pub q_s: BigInt,
}

fn ser_big<S: serde::Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

/// A finite set of places containing every infinite place.
#[derive(Clone, Debug)]
pub struct SSpec {
    field: FieldProfile,
    places: Vec<Place>,
    stats: PlaceStats,
}

impl SSpec {
    /// Build from an explicit list of places; duplicates are merged and the
    /// order is canonicalized.
    pub fn from_places(field: &FieldProfile, places: Vec<Place>) -> Result<Self> {
        let set: BTreeSet<Place> = places.into_iter().collect();
        for v in infinite_places(field) {
            if !set.contains(&v) {
                return Err(Error::MissingInfinitePlace);
            }
        }
        let places: Vec<Place> = set.into_iter().collect();
        let stats = place_stats_of(&places);
        Ok(SSpec { field: field.clone(), places, stats })
    }

    /// Infinite places together with the given prime ideals.
    pub fn new(field: &FieldProfile, finite: Vec<PrimeIdeal>) -> Result<Self> {
        let mut places = infinite_places(field);
        places.extend(finite.into_iter().map(Place::Finite));
        Self::from_places(field, places)
    }

    /// `S = S_∞`.
    pub fn infinite(field: &FieldProfile) -> Self {
        Self::new(field, Vec::new()).expect("infinite places present")
    }

    /// Every prime ideal above each of the rational primes.
    pub fn from_primes(field: &FieldProfile, primes: &[u64]) -> Result<Self> {
        let mut finite = Vec::new();
        for &p in primes {
            finite.extend(field.split_prime(p)?);
        }
        Self::new(field, finite)
    }

    /// Prime ideals above `primes` whose labels are listed in `labels`.
    pub fn from_primes_selected(field: &FieldProfile, primes: &[u64], labels: &[String]) -> Result<Self> {
        let mut finite = Vec::new();
        let mut seen = BTreeSet::new();
        for &p in primes {
            for pi in field.split_prime(p)? {
                if labels.contains(&pi.label) {
                    seen.insert(pi.label.clone());
                    finite.push(pi);
                }
            }
        }
        if let Some(l) = labels.iter().find(|l| !seen.contains(*l)) {
            return Err(Error::Domain(format!("no prime ideal labelled `{l}` above the listed primes")));
        }
        Self::new(field, finite)
    }

    /// For asserted profiles: one placeholder ideal per supplied norm.
    pub fn from_norms(field: &FieldProfile, norms: &[u64]) -> Result<Self> {
        for &n in norms {
            let f = crate::arith::factor_u64(n);
            if n < 2 || f.len() != 1 || f[0].1 > field.degree {
                return Err(Error::Domain(format!("{n} is not the norm of a prime ideal of a degree {} field", field.degree)));
            }
        }
        // places are a set, but equal norms may belong to distinct ideals
        let mut places = infinite_places(field);
        let mut counts = std::collections::BTreeMap::<u64, usize>::new();
        for &n in norms {
            let k = counts.entry(n).or_default();
            let mut pi = PrimeIdeal::asserted(n);
            if *k > 0 {
                pi.label = format!("[N={n}]#{}", *k + 1);
            }
            *k += 1;
            places.push(Place::Finite(pi));
        }
        Self::from_places(field, places)
    }

    pub fn field(&self) -> &FieldProfile {
        &self.field
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn finite(&self) -> impl Iterator<Item = &PrimeIdeal> {
        self.places.iter().filter_map(|v| if let Place::Finite(p) = v { Some(p) } else { None })
    }

    pub fn norms(&self) -> Vec<u64> {
        self.finite().map(|p| p.norm).collect()
    }

    /// Distinct rational primes below the finite places.
    pub fn rational_primes(&self) -> Vec<u64> {
        let set: BTreeSet<u64> = self.finite().map(|p| p.p).collect();
        set.into_iter().collect()
    }

    pub fn stats(&self) -> &PlaceStats {
        &self.stats
    }

    pub fn s(&self) -> usize {
        self.stats.s
    }

    pub fn t(&self) -> usize {
        self.stats.t
    }

    pub fn contains(&self, v: &Place) -> bool {
        self.places.binary_search(v).is_ok()
    }
}

fn place_stats_of(places: &[Place]) -> PlaceStats {
    let mut norms: Vec<u64> = places.iter().filter_map(|v| if let Place::Finite(p) = v { Some(p.norm) } else { None }).collect();
    norms.sort_unstable_by(|a, b| b.cmp(a));
    let t = norms.len();
    PlaceStats {
        s: places.len(),
        t,
        p_s: norms.first().copied().unwrap_or(1),
        p_prime_s: if t >= 3 { norms[2] } else { 1 },
        q_s: norms.iter().fold(BigInt::one(), |acc, &n| acc * n),
    }
}

/// Statistics of `S`; errors when an infinite place is missing.
pub fn place_stats(field: &FieldProfile, places: &[Place]) -> Result<PlaceStats> {
    Ok(SSpec::from_places(field, places.to_vec())?.stats)
}

/// `N_S(α) = ∏_{v∈S} |α|_v`, computed as `|N(α)|·∏_{𝔭∈S} N(𝔭)^{−ord_𝔭 α}`.
pub fn s_norm(alpha: &AlgNum, s: &SSpec) -> Result<BigRational> {
    let field = s.field();
    if field.is_asserted() {
        return Err(Error::AssertedFieldUnsupported);
    }
    if alpha.is_zero() {
        return Err(Error::Domain("S-norm of 0".into()));
    }
    let mut acc = field.norm(alpha)?.abs();
    for pi in s.finite() {
        let k = field.ord(pi, alpha)?;
        let n = BigRational::from_integer(pi.norm.into());
        let f = num_traits::pow(n, k.unsigned_abs() as usize);
        acc = if k > 0 { acc / f } else { acc * f };
    }
    Ok(acc)
}

/// Whether `ord_𝔭 α ≥ 0` at every prime outside `S`.
pub fn is_s_integral(alpha: &AlgNum, s: &SSpec) -> Result<bool> {
    use num_traits::ToPrimitive;
    let field = s.field();
    if field.is_asserted() {
        return Err(Error::AssertedFieldUnsupported);
    }
    field.require_element(alpha)?;
    if alpha.is_zero() {
        return Ok(true);
    }
    let lead = alpha.min_poly()[0].clone();
    for (p, _) in crate::arith::factor(lead.magnitude()) {
        let p = p.to_u64().expect("prime fits u64");
        for pi in field.split_prime(p)? {
            if !s.contains(&Place::Finite(pi.clone())) && field.ord(&pi, alpha)? < 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `R_S = R_K·m·∏ log N(𝔭_i)` where `m` is the order of the subgroup of the
/// class group generated by the `𝔭_i`.
#[derive(Clone, Debug)]
pub struct SRegulatorExact {
    pub subgroup_index: u64,
    pub log_norms: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct SRegulator {
    pub value: Interval,
    /// Symbolic form; `None` for asserted profiles.
    pub exact: Option<SRegulatorExact>,
    /// `R_K·∏ log N(𝔭_i)` and `R_K·h_K·∏ log N(𝔭_i)`.
    pub lower: Interval,
    pub upper: Interval,
    /// Set when only the sandwich is known (asserted profiles).
    pub interval_only: bool,
    /// Laplace determinant of the log-absolute-value matrix of the
    /// fundamental S-units, for cross-checking `value`.
    pub determinant: Option<Interval>,
}

impl SRegulator {
    /// Whether `value` sits inside `[lower, upper]`.
    pub fn within_sandwich(&self) -> bool {
        self.value.lo() >= self.lower.lo() && self.value.hi() <= self.upper.hi()
    }
}

fn log_norm_product(s: &SSpec, prec: u32) -> Interval {
    s.finite().fold(Interval::one(prec), |acc, p| acc.mul(&Interval::ln_int(prec, &BigInt::from(p.norm))))
}

/// The S-regulator with its sandwich bounds.
pub fn s_regulator(s: &SSpec, prec: u32) -> Result<SRegulator> {
    let field = s.field();
    let r_k = field.regulator(prec);
    let logs = log_norm_product(s, prec);
    let lower = r_k.mul(&logs);
    let upper = lower.mul_int(field.class_number as i64);
    if field.is_asserted() {
        let value = Interval::new(lower.lo().clone(), upper.hi().clone());
        return Ok(SRegulator { value, exact: None, lower, upper, interval_only: true, determinant: None });
    }
    let finite: Vec<PrimeIdeal> = s.finite().cloned().collect();
    let (index, mut units) = match field.class_group() {
        None => (1, finite.iter().map(|p| AlgNum::from_int(p.p)).collect::<Vec<_>>()),
        Some(cg) => s_unit_basis(cg, &finite)?,
    };
    if let Some(e) = &field.fundamental_unit {
        units.insert(0, e.clone());
    }
    let value = lower.mul_int(index as i64);
    // drop the first infinite place
    let cols: Vec<&Place> = s.places().iter().skip(1).collect();
    debug_assert_eq!(cols.len(), units.len());
    let mut m = Vec::with_capacity(units.len());
    for u in &units {
        let mut row = Vec::with_capacity(cols.len());
        for v in &cols {
            row.push(abs_value(field, u, v, prec)?.ln());
        }
        m.push(row);
    }
    let determinant = if m.len() <= 8 { Some(crate::nf::interval_det(&m, prec).abs()) } else { None };
    if let Some(d) = &determinant {
        if !d.overlaps(&value) {
            return Err(Error::VerificationFailed(format!("S-regulator determinant {d} disagrees with {value}")));
        }
    }
    let exact = SRegulatorExact { subgroup_index: index, log_norms: s.norms() };
    Ok(SRegulator { value, exact: Some(exact), lower, upper, interval_only: false, determinant })
}
