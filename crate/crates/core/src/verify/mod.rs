//! Exhaustive enumeration over ℚ and checks of the bounds against it.

mod logcmp;
pub mod lemma3;
pub mod prop4;
pub mod prop5;
pub mod sunit;
pub mod thue;

use num_bigint::BigInt;
use serde::Serialize;

use crate::bounds::TaggedInterval;
use crate::error::{Error, Result};
use crate::heights::{SSpec, HeightValue};
use crate::interval::Interval;
use crate::nf::{AlgNum, FieldKind};

pub use lemma3::{check_lemma3_constructive, Lemma3Witness};
pub use logcmp::LogLin;
pub use prop4::{check_prop4, prop4_places, Prop4Witness};
pub use prop5::{sample_check_prop5, Prop5Sample};
pub use sunit::{check_bounds, enumerate_sunit_solutions, SolutionRecord};
pub use thue::{enumerate_thue_solutions, ThueBox, ThueSolution};

/// Exponent box for S-unit enumeration over ℚ: `x = ±∏ pᵢ^{aᵢ}`, `|aᵢ| ≤ a_max`.
#[derive(Clone, Debug, Serialize)]
pub struct EnumerationBox {
    pub a_max: u32,
    /// Signs of `x` to try.
    pub signs: Vec<i8>,
    /// Keep only records with `max(h(x), h(y)) ≤ log(cutoff)`.
    #[serde(serialize_with = "ser_opt_bigint")]
    pub height_cutoff: Option<BigInt>,
    /// Largest admissible number of candidates.
    pub budget: u128,
}

impl EnumerationBox {
    pub fn new(a_max: u32) -> Self {
        EnumerationBox { a_max, signs: vec![-1, 1], height_cutoff: None, budget: 100_000_000 }
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    /// Number of candidates for `t` primes.
    pub fn cardinality(&self, t: usize) -> u128 {
        (self.signs.len() as u128).saturating_mul((2 * self.a_max as u128 + 1).saturating_pow(t as u32))
    }

    fn check(&self, t: usize) -> Result<u128> {
        let c = self.cardinality(t);
        if c > self.budget {
            return Err(Error::BoxTooLarge { size: c, budget: self.budget });
        }
        Ok(c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditVerdict {
    Pass,
    Inconclusive,
}

/// `{instance, checked, worst_margin, witnesses, verdict}`.
#[derive(Clone, Debug, Serialize)]
pub struct Audit {
    pub instance: String,
    pub checked: usize,
    /// Smallest log-space margin seen; absent when nothing was checked.
    pub worst_margin: Option<TaggedInterval>,
    pub witnesses: Vec<serde_json::Value>,
    pub verdict: AuditVerdict,
}

impl Audit {
    fn new(instance: impl Into<String>) -> Self {
        Audit { instance: instance.into(), checked: 0, worst_margin: None, witnesses: Vec::new(), verdict: AuditVerdict::Pass }
    }
}

/// Running minimum of interval margins, ordered by lower endpoint.
#[derive(Default)]
pub(crate) struct WorstMargin(Option<Interval>);

impl WorstMargin {
    pub fn push(&mut self, m: &Interval) {
        if self.0.as_ref().map_or(true, |w| m.lo() < w.lo()) {
            self.0 = Some(m.clone());
        }
    }

    pub fn tagged(&self) -> Option<TaggedInterval> {
        self.0.as_ref().map(TaggedInterval::from)
    }
}

pub(crate) fn require_rational_field(s: &SSpec) -> Result<()> {
    if s.field().kind != FieldKind::Rational {
        return Err(Error::NotApplicable("exhaustive enumeration runs over ℚ".into()));
    }
    Ok(())
}

pub(crate) fn rational(x: &AlgNum, what: &str) -> Result<num_rational::BigRational> {
    x.to_rational().ok_or_else(|| Error::Domain(format!("{what} must be rational")))
}

pub(crate) fn ser_height<S: serde::Serializer>(h: &HeightValue, s: S) -> std::result::Result<S::Ok, S::Error> {
    TaggedInterval::from(&h.value).serialize(s)
}

pub(crate) fn ser_bigint<S: serde::Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_string())
}

fn ser_opt_bigint<S: serde::Serializer>(n: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n {
        Some(n) => s.serialize_str(&n.to_string()),
        None => s.serialize_none(),
    }
}
