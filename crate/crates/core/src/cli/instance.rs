//! Instance files and their merge with command-line flags.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::forms::parse::{parse_element, parse_poly};
use crate::forms::{LinearForm, Poly};
use crate::heights::{infinite_places, Place, SSpec};
use crate::interval::precision_from_env;
use crate::nf::{build_quadratic_field, build_rational_field, import_field_profile, AlgNum, AssertedRecord, FieldKind, FieldProfile};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub field: Option<FieldSpec>,
    pub primes: Option<Vec<u64>>,
    pub equation: Option<Equation>,
    #[serde(default)]
    pub options: Options,
}

/// `"Q"`, `"Q(i)"`, `"Q(sqrt(D))"`, `"quadratic:D"`, or `{"asserted": {…}}`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Name(String),
    Asserted(AssertedWrapper),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssertedWrapper {
    pub asserted: AssertedRecord,
}

/// A linear factor: `"X1 - sqrt(2)*X2"` or a coefficient vector `[1, "-sqrt(2)"]`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Factor {
    Text(String),
    Coeffs(Vec<Scalar>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Factor {
    fn into_text(self) -> String {
        match self {
            Factor::Text(t) => t,
            Factor::Coeffs(cs) => {
                let terms: Vec<String> = cs
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| match c {
                        Scalar::Int(n) => format!("({n})*X{}", i + 1),
                        Scalar::Text(t) => format!("({t})*X{}", i + 1),
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join(" + ")
                }
            }
        }
    }
}

/// The factor list of `--factors`: inline forms, or the path of a JSON file
/// holding a list of factors.
pub fn factors_from_flag(values: &[String]) -> Result<Vec<String>> {
    if let [one] = values {
        let path = Path::new(one.trim());
        if path.is_file() {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let list: Vec<Factor> = serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
            return Ok(list.into_iter().map(Factor::into_text).collect());
        }
    }
    Ok(values.to_vec())
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Equation {
    UnitEq {
        alpha: String,
        beta: String,
    },
    GroupEq {
        generators: Vec<String>,
        alpha: String,
        beta: String,
    },
    Form {
        form: String,
        vars: Option<usize>,
        factors: Option<Vec<Factor>>,
        delta: Option<String>,
    },
    Thue {
        form: String,
        delta: String,
        factors: Option<Vec<Factor>>,
    },
    Prop5 {
        generators: Vec<String>,
        alpha: String,
        place: Option<String>,
    },
    Lemma3 {
        alpha: String,
        n: Option<u32>,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub precision: Option<u32>,
    #[serde(rename = "box")]
    pub box_size: Option<u32>,
    pub budget: Option<u128>,
    pub formula: Option<String>,
    pub trace: Option<bool>,
}

/// Values given on the command line; they override the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub field: Option<String>,
    pub primes: Option<Vec<u64>>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub delta: Option<String>,
    pub form: Option<String>,
    pub vars: Option<usize>,
    pub factors: Option<Vec<String>>,
    pub generators: Option<Vec<String>>,
    pub place: Option<String>,
    pub n: Option<u32>,
    pub formula: Option<String>,
    pub precision: Option<u32>,
    pub box_size: Option<u32>,
    pub budget: Option<u128>,
    pub trace: bool,
}

/// A fully resolved instance.
#[derive(Debug, Default, Clone)]
pub struct Params {
    pub field_text: Option<String>,
    pub asserted: Option<AssertedRecord>,
    pub primes: Option<Vec<u64>>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub delta: Option<String>,
    pub form: Option<String>,
    pub vars: Option<usize>,
    pub factors: Option<Vec<String>>,
    pub generators: Option<Vec<String>>,
    pub place: Option<String>,
    pub n: Option<u32>,
    pub formula: Option<String>,
    pub precision: u32,
    pub box_size: Option<u32>,
    pub budget: Option<u128>,
    pub trace: bool,
}

pub fn read_instance(path: &Path) -> Result<InstanceFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

fn set<T: Clone>(slot: &mut Option<T>, v: &Option<T>) {
    if v.is_some() {
        *slot = v.clone();
    }
}

impl Params {
    pub fn resolve(file: Option<InstanceFile>, o: &Overrides) -> Result<Params> {
        let mut p = Params::default();
        let file = file.unwrap_or_default();
        match file.field {
            Some(FieldSpec::Name(s)) => p.field_text = Some(s),
            Some(FieldSpec::Asserted(a)) => p.asserted = Some(a.asserted),
            None => {}
        }
        p.primes = file.primes;
        match file.equation {
            Some(Equation::UnitEq { alpha, beta }) => {
                p.alpha = Some(alpha);
                p.beta = Some(beta);
            }
            Some(Equation::GroupEq { generators, alpha, beta }) => {
                p.generators = Some(generators);
                p.alpha = Some(alpha);
                p.beta = Some(beta);
            }
            Some(Equation::Form { form, vars, factors, delta }) => {
                p.form = Some(form);
                p.vars = vars;
                p.factors = factors.map(|f| f.into_iter().map(Factor::into_text).collect());
                p.delta = delta;
            }
            Some(Equation::Thue { form, delta, factors }) => {
                p.form = Some(form);
                p.delta = Some(delta);
                p.factors = factors.map(|f| f.into_iter().map(Factor::into_text).collect());
                p.vars = Some(2);
            }
            Some(Equation::Prop5 { generators, alpha, place }) => {
                p.generators = Some(generators);
                p.alpha = Some(alpha);
                p.place = place;
            }
            Some(Equation::Lemma3 { alpha, n }) => {
                p.alpha = Some(alpha);
                p.n = n;
            }
            None => {}
        }
        let opt = file.options;
        p.formula = opt.formula;
        p.box_size = opt.box_size;
        p.budget = opt.budget;
        p.trace = opt.trace.unwrap_or(false);

        if o.field.is_some() {
            p.field_text = o.field.clone();
            p.asserted = None;
        }
        set(&mut p.primes, &o.primes);
        set(&mut p.alpha, &o.alpha);
        set(&mut p.beta, &o.beta);
        set(&mut p.delta, &o.delta);
        set(&mut p.form, &o.form);
        set(&mut p.vars, &o.vars);
        set(&mut p.factors, &o.factors);
        set(&mut p.generators, &o.generators);
        set(&mut p.place, &o.place);
        set(&mut p.n, &o.n);
        set(&mut p.formula, &o.formula);
        set(&mut p.box_size, &o.box_size);
        set(&mut p.budget, &o.budget);
        p.trace |= o.trace;
        p.precision = o.precision.or(opt.precision).unwrap_or_else(precision_from_env);
        if !(32..=65536).contains(&p.precision) {
            return Err(Error::Schema(format!("precision {} outside 32..=65536 bits", p.precision)));
        }
        Ok(p)
    }

    pub fn field(&self) -> Result<FieldProfile> {
        if let Some(rec) = &self.asserted {
            return import_field_profile(rec);
        }
        match &self.field_text {
            None => Ok(build_rational_field()),
            Some(t) => parse_field(t),
        }
    }

    /// `D` for `ℚ(√D)`, 0 for ℚ.
    pub fn radicand(field: &FieldProfile) -> Result<i64> {
        match field.kind {
            FieldKind::Rational => Ok(0),
            FieldKind::Quadratic(d) => Ok(d),
            FieldKind::Asserted => Err(Error::AssertedFieldUnsupported),
        }
    }

    /// `S` from the prime list; for asserted profiles the list holds norms.
    pub fn sspec(&self, field: &FieldProfile) -> Result<SSpec> {
        let primes = self.primes.clone().unwrap_or_default();
        if field.is_asserted() {
            SSpec::from_norms(field, &primes)
        } else {
            SSpec::from_primes(field, &primes)
        }
    }

    /// Elements of an asserted profile are read as rationals.
    pub fn element(&self, field: &FieldProfile, name: &str, v: &Option<String>) -> Result<AlgNum> {
        let text = v.as_ref().ok_or_else(|| Error::Schema(format!("missing {name}")))?;
        parse_element(text, Self::radicand(field).unwrap_or(0))
    }

    pub fn elements(&self, field: &FieldProfile, name: &str, v: &Option<Vec<String>>) -> Result<Vec<AlgNum>> {
        let list = v.as_ref().ok_or_else(|| Error::Schema(format!("missing {name}")))?;
        let d = Self::radicand(field).unwrap_or(0);
        list.iter().map(|t| parse_element(t, d)).collect()
    }

    /// The form, with `m` from `--vars` or the highest variable used.
    pub fn poly(&self, field: &FieldProfile) -> Result<Poly> {
        let text = self.form.as_ref().ok_or_else(|| Error::Schema("missing form".into()))?;
        let m = match self.vars {
            Some(m) => m,
            None => crate::forms::parse::max_variable(text)?,
        };
        parse_poly(text, m, Some(Self::radicand(field)?))
    }

    pub fn linear_factors(&self, field: &FieldProfile, m: usize) -> Result<Option<Vec<LinearForm>>> {
        let Some(list) = &self.factors else { return Ok(None) };
        let d = Self::radicand(field)?;
        let mut out = Vec::with_capacity(list.len());
        for t in list {
            let p = parse_poly(t, m, Some(d))?;
            if p.homogeneous_degree() != Some(1) {
                return Err(Error::Schema(format!("factor `{t}` is not a linear form")));
            }
            let coeffs = (0..m)
                .map(|i| {
                    let mut e = vec![0u32; m];
                    e[i] = 1;
                    p.terms().get(&e).cloned().unwrap_or_else(AlgNum::zero)
                })
                .collect();
            out.push(LinearForm::new(coeffs)?);
        }
        Ok(Some(out))
    }

    pub fn place(&self, field: &FieldProfile) -> Result<Place> {
        let text = self.place.as_deref().unwrap_or("inf").trim();
        let inf = infinite_places(field);
        match text {
            "inf" | "inf1" => return Ok(inf[0].clone()),
            "inf2" if inf.len() > 1 => return Ok(inf[1].clone()),
            _ => {}
        }
        if let Ok(p) = text.parse::<u64>() {
            let ideals = field.split_prime(p)?;
            return Ok(Place::Finite(ideals[0].clone()));
        }
        let p = text
            .trim_start_matches('(')
            .split([',', ')'])
            .next()
            .and_then(|s| s.trim().parse::<u64>().ok())
            .ok_or_else(|| Error::Schema(format!("unknown place `{text}`")))?;
        field
            .split_prime(p)?
            .into_iter()
            .find(|pi| pi.label == text)
            .map(Place::Finite)
            .ok_or_else(|| Error::Schema(format!("unknown place `{text}`")))
    }
}

/// `Q`, `rational`, `Q(i)`, `Q(sqrt(D))`, `quadratic:D`.
pub fn parse_field(text: &str) -> Result<FieldProfile> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    match t.as_str() {
        "Q" | "QQ" | "rational" => return Ok(build_rational_field()),
        "Q(i)" | "Q(sqrt(-1))" => return build_quadratic_field(-1),
        _ => {}
    }
    let d = t
        .strip_prefix("quadratic:")
        .or_else(|| t.strip_prefix("Q(sqrt(").and_then(|r| r.strip_suffix("))")))
        .and_then(|s| s.parse::<i64>().ok())
        .ok_or_else(|| Error::Schema(format!("unknown field `{text}`")))?;
    build_quadratic_field(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema() {
        let f = parse_instance(r#"{"field": "Q", "primes": [2, 3], "equation": {"type": "unit-eq", "alpha": "1", "beta": "1"}}"#).unwrap();
        assert!(matches!(f.equation, Some(Equation::UnitEq { .. })));
        assert!(matches!(parse_instance(r#"{"feild": "Q"}"#), Err(Error::Schema(_))));
        assert!(matches!(
            parse_instance(r#"{"equation": {"type": "unit-eq", "alpha": "1", "beta": "1", "gamma": "2"}}"#),
            Err(Error::Schema(_))
        ));
        assert!(matches!(parse_instance(r#"{"options": {"box": 3, "colour": 1}}"#), Err(Error::Schema(_))));
        assert_eq!(parse_field("Q(sqrt(5))").unwrap().kind, FieldKind::Quadratic(5));
        assert_eq!(parse_field("quadratic:-1").unwrap().kind, FieldKind::Quadratic(-1));
        assert!(parse_field("Q(x)").is_err());
    }
}
