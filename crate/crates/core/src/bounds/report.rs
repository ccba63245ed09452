//! Bound reports and their JSON form.

use std::fmt;

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::interval::{decimal, decimal_digits, Interval};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FormulaId {
    #[serde(rename = "thmA")]
    ThmA,
    #[serde(rename = "thmA_Sinf")]
    ThmASinf,
    #[serde(rename = "thmB")]
    ThmB,
    #[serde(rename = "thmC")]
    ThmC,
    #[serde(rename = "thm1")]
    Thm1,
    #[serde(rename = "thm2")]
    Thm2,
    #[serde(rename = "thm2_full_group")]
    Thm2FullGroup,
    #[serde(rename = "eq31")]
    Eq31,
    #[serde(rename = "lemma2")]
    Lemma2,
    #[serde(rename = "lemma3")]
    Lemma3,
    #[serde(rename = "prop5")]
    Prop5,
    #[serde(rename = "thm3")]
    Thm3,
    #[serde(rename = "corollary4")]
    Cor4,
}

impl FormulaId {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaId::ThmA => "thmA",
            FormulaId::ThmASinf => "thmA_Sinf",
            FormulaId::ThmB => "thmB",
            FormulaId::ThmC => "thmC",
            FormulaId::Thm1 => "thm1",
            FormulaId::Thm2 => "thm2",
            FormulaId::Thm2FullGroup => "thm2_full_group",
            FormulaId::Eq31 => "eq31",
            FormulaId::Lemma2 => "lemma2",
            FormulaId::Lemma3 => "lemma3",
            FormulaId::Prop5 => "prop5",
            FormulaId::Thm3 => "thm3",
            FormulaId::Cor4 => "corollary4",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        use FormulaId::*;
        [ThmA, ThmASinf, ThmB, ThmC, Thm1, Thm2, Thm2FullGroup, Eq31, Lemma2, Lemma3, Prop5, Thm3, Cor4]
            .into_iter()
            .find(|f| f.as_str() == s)
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A real number rendered as a decimal string with its rounding direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaggedReal {
    pub value: String,
    pub rounding: &'static str,
}

impl TaggedReal {
    pub fn up(x: &Interval) -> Self {
        if x.is_point() {
            return Self::exact(x);
        }
        TaggedReal { value: x.hi_decimal(decimal_digits(x.prec())), rounding: "up" }
    }

    pub fn down(x: &Interval) -> Self {
        if x.is_point() {
            return Self::exact(x);
        }
        TaggedReal { value: x.lo_decimal(decimal_digits(x.prec())), rounding: "down" }
    }

    /// A point interval whose endpoint is the exact value.
    fn exact(x: &Interval) -> Self {
        TaggedReal { value: decimal(x.lo(), decimal_digits(x.prec()), Round::Nearest), rounding: "exact" }
    }

    pub fn exact_str(s: impl Into<String>) -> Self {
        TaggedReal { value: s.into(), rounding: "exact" }
    }
}

/// `{"lower": …, "upper": …}` with outward rounding tags.
#[derive(Clone, Debug, Serialize)]
pub struct TaggedInterval {
    pub lower: TaggedReal,
    pub upper: TaggedReal,
}

impl From<&Interval> for TaggedInterval {
    fn from(x: &Interval) -> Self {
        TaggedInterval { lower: TaggedReal::down(x), upper: TaggedReal::up(x) }
    }
}

/// Upper-rounded scientific rendering of `exp(log)`, e.g. `3.1416e+12`.
pub fn scientific_from_log(log: &Interval, digits: usize) -> String {
    let p = log.prec();
    let hi = log.hi();
    if hi.is_infinite() {
        return if hi.is_sign_negative() { "0".into() } else { "inf".into() };
    }
    let ln10 = Float::with_val_round(p, Float::with_val(p, 10).ln_ref(), Round::Down).0;
    let l10 = Float::with_val_round(p, hi / &ln10, Round::Up).0;
    let e = l10.clone().floor();
    let frac = Float::with_val_round(p, &l10 - &e, Round::Up).0;
    let ten = Float::with_val(p, 10);
    let mant = Float::with_val_round(p, (&ten).pow(&frac), Round::Up).0;
    let exp = e.to_integer().expect("finite");
    let m = decimal(&mant, digits, Round::Up);
    // `decimal` may carry an exponent of its own for values like 9.99999 → 1.0e1
    let (mstr, extra) = match m.split_once('e') {
        Some((a, b)) => (a.to_string(), b.parse::<i64>().unwrap_or(0)),
        None => (m, 0),
    };
    let exp = exp + extra;
    format!("{mstr}e{}{}", if exp < rug::Integer::ZERO { "-" } else { "+" }, exp.abs())
}

/// One evaluated formula.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub formula: FormulaId,
    /// `ln |V|` of the bound value `V`; `None` when `V = 0`.
    pub log_value: Option<Interval>,
    /// Set when `V < 0` (lower bounds).
    pub negative: bool,
    /// `V` itself for height-scale quantities.
    pub linear: Option<Interval>,
    /// Inputs the formula consumed.
    pub inputs: Vec<(String, Interval)>,
    /// `ln c` for every constant involved (absent entries are zero).
    pub constants: Vec<(String, Option<Interval>)>,
    /// Named intermediate terms (log space unless the name says otherwise).
    pub terms: Vec<(String, Interval)>,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn new(formula: FormulaId, log_value: Interval) -> Self {
        BoundReport {
            formula,
            log_value: Some(log_value),
            negative: false,
            linear: None,
            inputs: Vec::new(),
            constants: Vec::new(),
            terms: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Report for a height-scale value that may be 0.
    pub fn from_linear(formula: FormulaId, value: Interval) -> Self {
        let log = (!(value.hi() <= &0)).then(|| value.ln());
        let mut r = Self::new(formula, Interval::zero(value.prec()));
        r.log_value = log;
        r.linear = Some(value);
        r
    }

    pub fn input(mut self, name: &str, v: &Interval) -> Self {
        self.inputs.push((name.into(), v.clone()));
        self
    }

    pub fn constant(mut self, c: &super::constants::ConstValue) -> Self {
        self.constants.push((c.name.clone(), c.log.clone()));
        self
    }

    pub fn term(mut self, name: &str, v: &Interval) -> Self {
        self.terms.push((name.into(), v.clone()));
        self
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    /// Upper end of `ln V`; `-inf` for `V = 0`.
    pub fn log_upper(&self) -> Float {
        match &self.log_value {
            Some(l) => l.hi().clone(),
            None => Float::with_val(64, rug::float::Special::NegInfinity),
        }
    }

    /// Whether a height `h ≥ 0` lies certainly below this (positive) bound.
    pub fn certainly_exceeds(&self, h: &Interval) -> bool {
        if self.negative {
            return false;
        }
        match &self.log_value {
            None => false,
            Some(l) => {
                if h.hi() <= &0 {
                    return true;
                }
                h.ln().certainly_lt(l)
            }
        }
    }

    /// Upper-rounded decimal rendering of `V` (lower-rounded when `V < 0`).
    pub fn decimal(&self) -> String {
        match &self.log_value {
            None => "0".into(),
            Some(l) => {
                let s = scientific_from_log(l, 8);
                if self.negative {
                    format!("-{s}")
                } else {
                    s
                }
            }
        }
    }
}

fn named_map<S: serde::Serializer>(items: &[(String, Interval)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(items.len()))?;
    for (k, v) in items {
        m.serialize_entry(k, &TaggedInterval::from(v))?;
    }
    m.end()
}

struct Named<'a>(&'a [(String, Interval)]);

impl Serialize for Named<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        named_map(self.0, s)
    }
}

struct Consts<'a>(&'a [(String, Option<Interval>)]);

impl Serialize for Consts<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            match v {
                Some(l) => m.serialize_entry(k, &TaggedInterval::from(l))?,
                None => m.serialize_entry(k, "zero")?,
            }
        }
        m.end()
    }
}

impl Serialize for BoundReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BoundReport", 9)?;
        st.serialize_field("formula", &self.formula)?;
        match &self.log_value {
            // a lower bound −exp(L) is rounded down when L is rounded up
            Some(l) => st.serialize_field("log_value", &TaggedReal::up(l))?,
            None => st.serialize_field("log_value", &Option::<TaggedReal>::None)?,
        }
        st.serialize_field("sign", if self.negative { "negative" } else { "positive" })?;
        st.serialize_field("decimal", &TaggedReal { value: self.decimal(), rounding: if self.negative { "down" } else { "up" } })?;
        match &self.linear {
            Some(v) => st.serialize_field("value", &TaggedInterval::from(v))?,
            None => st.serialize_field("value", &Option::<TaggedInterval>::None)?,
        }
        st.serialize_field("inputs", &Named(&self.inputs))?;
        st.serialize_field("constants", &Consts(&self.constants))?;
        st.serialize_field("terms", &Named(&self.terms))?;
        st.serialize_field("notes", &self.notes)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific() {
        let l = Interval::ln_int(128, &1000.into());
        let s = scientific_from_log(&l, 4);
        assert!(s == "1.000e+3" || s == "1.001e+3", "{s}");
        let l = Interval::ln_int(128, &12345.into());
        assert!(scientific_from_log(&l, 4).starts_with("1.235e+4") || scientific_from_log(&l, 4).starts_with("1.234e+4"));
    }

    #[test]
    fn formula_names_round_trip() {
        for f in ["thmA", "thmB", "thm1", "prop5", "corollary4"] {
            assert_eq!(FormulaId::parse(f).unwrap().as_str(), f);
        }
    }
}
