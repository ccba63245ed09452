//! The `effbounds` command line.

pub mod instance;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::bounds::{
    best_unit_bound, bound_thm_1, bound_thm_2, bound_thm_2_full_group, bound_thm_a, bound_thm_a_sinf, bound_thm_b, bound_thm_c,
    eq31_s_factor, lemma2_bound, BoundInputs, BoundReport, FormulaId, GroupData, TaggedInterval,
};
use crate::error::{Error, Result};
use crate::forms::{bound_thm_3, reduce_to_unit_equations, FormSystem};
use crate::heights::{big_h, height, is_s_integral, s_regulator, SSpec};
use crate::interval::Interval;
use crate::nf::{AlgNum, FieldProfile};
use crate::verify::{
    check_bounds, check_lemma3_constructive, check_prop4, enumerate_sunit_solutions, enumerate_thue_solutions,
    sample_check_prop5, Audit, AuditVerdict, EnumerationBox, Prop5Sample, ThueBox,
};

use instance::{read_instance, Overrides, Params};

#[derive(Parser, Debug)]
#[command(name = "effbounds", version, about = "Explicit height bounds for S-unit, decomposable form and Thue equations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Field invariants and S-statistics.
    Invariants(Common),
    /// Evaluate height bounds.
    #[command(subcommand)]
    Bound(BoundCmd),
    /// Factor a decomposable form and report its graph conditions.
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Enumerate solutions over ℚ and check the bounds against them.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
enum BoundCmd {
    /// alpha*x + beta*y = 1 in S-units
    UnitEq(Common),
    /// alpha*x + beta*y = 1 in a finitely generated group
    GroupEq(Common),
    /// F(x, y) = delta in S-integers
    Thue(Common),
}

#[derive(Subcommand, Debug)]
enum AnalyzeCmd {
    /// Factorization, graphs, verdict and, if applicable, the height bound
    Form(Common),
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Enumerate S-unit solutions in a box and check every bound
    UnitEq(Common),
    /// Enumerate Thue solutions in a box and check the form bound
    Thue(Common),
    /// Find a local height witness for every enumerated solution
    Prop4(Common),
    /// Sample the lower bound for |1 - alpha*xi|_v over the group
    Prop5(Common),
    /// Search for an S-unit epsilon with small h(epsilon^n alpha)
    Lemma3(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Instance file (JSON); flags override its values.
    instance: Option<PathBuf>,
    /// `Q`, `Q(i)`, `Q(sqrt(D))` or `quadratic:D`.
    #[arg(long)]
    field: Option<String>,
    /// Rational primes below S (norms for asserted fields).
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Polynomial in X1..Xm.
    #[arg(long, allow_hyphen_values = true)]
    form: Option<String>,
    #[arg(long)]
    vars: Option<usize>,
    /// Linear factors separated by `;`, or a JSON file of coefficient vectors.
    #[arg(long, value_delimiter = ';', allow_hyphen_values = true)]
    factors: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    generators: Option<Vec<String>>,
    /// `inf`, `inf2`, a prime, or a prime ideal label.
    #[arg(long)]
    place: Option<String>,
    /// Exponent `n` for `verify lemma3`.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    formula: Option<String>,
    /// Working precision in bits.
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long = "box")]
    box_size: Option<u32>,
    #[arg(long)]
    budget: Option<u128>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include the derivation chain of the form bound.
    #[arg(long)]
    trace: bool,
    /// Human-readable summary instead of JSON.
    #[arg(long)]
    table: bool,
}

impl Common {
    fn params(&self) -> Result<Params> {
        let file = self.instance.as_deref().map(read_instance).transpose()?;
        let o = Overrides {
            field: self.field.clone(),
            primes: self.primes.clone(),
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            delta: self.delta.clone(),
            form: self.form.clone(),
            vars: self.vars,
            factors: self.factors.as_deref().map(instance::factors_from_flag).transpose()?,
            generators: self.generators.clone(),
            place: self.place.clone(),
            n: self.n,
            formula: self.formula.clone(),
            precision: self.precision,
            box_size: self.box_size,
            budget: self.budget,
            trace: self.trace,
        };
        Params::resolve(file, &o)
    }
}

/// Run the command line; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let (name, common) = match &cli.cmd {
        Cmd::Invariants(c) => ("invariants", c),
        Cmd::Bound(BoundCmd::UnitEq(c)) => ("bound unit-eq", c),
        Cmd::Bound(BoundCmd::GroupEq(c)) => ("bound group-eq", c),
        Cmd::Bound(BoundCmd::Thue(c)) => ("bound thue", c),
        Cmd::Analyze(AnalyzeCmd::Form(c)) => ("analyze form", c),
        Cmd::Verify(VerifyCmd::UnitEq(c)) => ("verify unit-eq", c),
        Cmd::Verify(VerifyCmd::Thue(c)) => ("verify thue", c),
        Cmd::Verify(VerifyCmd::Prop4(c)) => ("verify prop4", c),
        Cmd::Verify(VerifyCmd::Prop5(c)) => ("verify prop5", c),
        Cmd::Verify(VerifyCmd::Lemma3(c)) => ("verify lemma3", c),
    };
    let result = common.params().and_then(|p| dispatch(name, &p));
    match result {
        Ok(v) => {
            let text = if common.table { table(&v) } else { serde_json::to_string_pretty(&v).expect("serializable") + "\n" };
            match &common.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        return report_error(err, &Error::Io(format!("{}: {e}", path.display())));
                    }
                }
                None => {
                    let _ = out.write_all(text.as_bytes());
                }
            }
            0
        }
        Err(e) => report_error(err, &e),
    }
}

fn report_error(err: &mut dyn Write, e: &Error) -> i32 {
    let v = json!({"error": e.name(), "module": e.module(), "message": e.to_string()});
    let _ = writeln!(err, "{}", serde_json::to_string_pretty(&v).expect("serializable"));
    if e.is_violation() {
        2
    } else {
        1
    }
}

fn dispatch(name: &str, p: &Params) -> Result<Value> {
    let mut v = match name {
        "invariants" => invariants(p)?,
        "bound unit-eq" => bound_unit_eq(p)?,
        "bound group-eq" => bound_group_eq(p)?,
        "bound thue" => bound_thue(p)?,
        "analyze form" => analyze_form(p)?,
        "verify unit-eq" => audit_value(verify_unit_eq(p)?),
        "verify thue" => audit_value(verify_thue(p)?),
        "verify prop4" => audit_value(verify_prop4(p)?),
        "verify prop5" => audit_value(verify_prop5(p)?),
        "verify lemma3" => audit_value(verify_lemma3(p)?),
        _ => unreachable!("every command is dispatched"),
    };
    if let Value::Object(m) = &mut v {
        if !m.contains_key("instance") {
            m.shift_insert(0, "command".into(), Value::String(name.into()));
        }
    }
    Ok(v)
}

fn audit_value(a: Audit) -> Value {
    serde_json::to_value(a).expect("serializable")
}

fn ser<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn tagged(x: &Interval) -> Value {
    ser(&TaggedInterval::from(x))
}

fn s_labels(s: &SSpec) -> Vec<String> {
    s.places().iter().map(|v| v.label()).collect()
}

fn describe(field: &FieldProfile, s: &SSpec, rest: &[(&str, String)]) -> String {
    let mut out = format!("{} S={{{}}}", field.name(), s_labels(s).join(","));
    for (k, v) in rest {
        out.push_str(&format!(" {k}={v}"));
    }
    out
}

fn nonzero(x: &AlgNum, name: &str) -> Result<()> {
    if x.is_zero() {
        return Err(Error::Domain(format!("{name} must be nonzero")));
    }
    Ok(())
}

fn invariants(p: &Params) -> Result<Value> {
    let field = p.field()?;
    let prec = p.precision;
    let s = p.sspec(&field)?;
    let reg = s_regulator(&s, prec)?;
    Ok(json!({
        "field": {
            "name": field.name(),
            "d": field.degree,
            "r": field.unit_rank,
            "h_K": field.class_number,
            "discriminant": field.discriminant,
            "R_K": tagged(&field.regulator(prec)),
            "fundamental_unit": field.fundamental_unit.as_ref().map(|u| u.to_string()),
            "provenance": ser(&field.provenance),
        },
        "S": {
            "places": s_labels(&s),
            "stats": ser(s.stats()),
            "R_S": tagged(&reg.value),
            "R_S_lower": tagged(&reg.lower),
            "R_S_upper": tagged(&reg.upper),
            "within_sandwich": reg.within_sandwich(),
            "interval_only": reg.interval_only,
        },
    }))
}

fn single_formula(id: FormulaId, inp: &BoundInputs) -> Result<BoundReport> {
    match id {
        FormulaId::ThmA => bound_thm_a(inp),
        FormulaId::ThmASinf => bound_thm_a_sinf(inp),
        FormulaId::ThmB => bound_thm_b(inp),
        FormulaId::ThmC => bound_thm_c(inp),
        FormulaId::Thm1 => bound_thm_1(inp),
        FormulaId::Thm2FullGroup => bound_thm_2_full_group(inp),
        FormulaId::Lemma2 => lemma2_bound(inp),
        FormulaId::Eq31 => eq31_s_factor(inp),
        other => Err(Error::Schema(format!("formula {other} does not apply to unit equations"))),
    }
}

fn formula_id(text: &str) -> Result<FormulaId> {
    FormulaId::parse(text).ok_or_else(|| Error::Schema(format!("unknown formula `{text}`")))
}

fn unit_inputs(p: &Params) -> Result<(FieldProfile, SSpec, AlgNum, AlgNum, BoundInputs)> {
    let field = p.field()?;
    let s = p.sspec(&field)?;
    let alpha = p.element(&field, "alpha", &p.alpha)?;
    let beta = p.element(&field, "beta", &p.beta)?;
    nonzero(&alpha, "alpha")?;
    nonzero(&beta, "beta")?;
    let h = big_h(&alpha, &beta, p.precision)?;
    let inp = BoundInputs::from_sspec(&s, h.value)?;
    Ok((field, s, alpha, beta, inp))
}

fn bound_unit_eq(p: &Params) -> Result<Value> {
    let (field, s, alpha, beta, inp) = unit_inputs(p)?;
    let head = json!({
        "field": field.name(),
        "S": s_labels(&s),
        "alpha": alpha.to_string(),
        "beta": beta.to_string(),
        "H": tagged(&inp.h),
    });
    let mut v = head;
    let m = v.as_object_mut().expect("object");
    if let Some(f) = &p.formula {
        let r = single_formula(formula_id(f)?, &inp)?;
        m.insert("reports".into(), json!([ser(&r)]));
        m.insert("best".into(), ser(&r.formula));
    } else {
        let sel = best_unit_bound(&inp)?;
        m.insert("reports".into(), ser(&sel.reports));
        let skipped: Vec<Value> = sel.skipped.iter().map(|(f, why)| json!({"formula": ser(f), "reason": why})).collect();
        m.insert("skipped".into(), Value::Array(skipped));
        m.insert("best".into(), ser(&sel.best));
    }
    Ok(v)
}

/// Rational primes dividing the norms of the generators.
fn generator_primes(gens: &[AlgNum]) -> Vec<u64> {
    use num_traits::{Signed, ToPrimitive};
    let mut ps = std::collections::BTreeSet::new();
    for g in gens {
        let n = g.norm();
        for part in [n.numer().abs(), n.denom().clone()] {
            for (q, _) in crate::arith::factor(part.magnitude()) {
                if let Some(q) = q.to_u64() {
                    ps.insert(q);
                }
            }
        }
    }
    ps.into_iter().collect()
}

fn bound_group_eq(p: &Params) -> Result<Value> {
    let field = p.field()?;
    let prec = p.precision;
    let gens = p.elements(&field, "generators", &p.generators)?;
    if gens.is_empty() {
        return Err(Error::Schema("at least one generator".into()));
    }
    let mut p2 = p.clone();
    if p2.primes.is_none() {
        p2.primes = Some(generator_primes(&gens));
    }
    let s = p2.sspec(&field)?;
    let mut theta = Interval::one(prec);
    for g in &gens {
        nonzero(g, "generator")?;
        if !field.is_asserted() && (!is_s_integral(g, &s)? || !is_s_integral(&g.recip(), &s)?) {
            return Err(Error::Domain(format!("generator {g} is not an S-unit")));
        }
        theta = theta.mul(&height(g, prec)?.value);
    }
    let alpha = p.element(&field, "alpha", &p.alpha)?;
    let beta = p.element(&field, "beta", &p.beta)?;
    nonzero(&alpha, "alpha")?;
    nonzero(&beta, "beta")?;
    let h = big_h(&alpha, &beta, prec)?;
    let mut inp = BoundInputs::from_sspec(&s, h.value)?;
    inp.group = Some(GroupData { m: gens.len() as u32, theta: theta.clone() });
    let r = bound_thm_2(&inp)?;
    Ok(json!({
        "field": field.name(),
        "S": s_labels(&s),
        "generators": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "alpha": alpha.to_string(),
        "beta": beta.to_string(),
        "H": tagged(&inp.h),
        "theta": tagged(&theta),
        "reports": [ser(&r)],
        "best": ser(&r.formula),
    }))
}

fn form_system(p: &Params, field: &FieldProfile) -> Result<FormSystem> {
    let poly = p.poly(field)?;
    let factors = p.linear_factors(field, poly.nvars())?;
    FormSystem::build(&poly, Params::radicand(field)?, factors, p.precision)
}

fn thm3_value(p: &Params, sys: &FormSystem, delta: &AlgNum, s: &SSpec) -> Result<(Value, crate::forms::Thm3Report)> {
    let rep = bound_thm_3(sys, delta, s, p.precision)?;
    let mut v = ser(&rep);
    if !p.trace {
        if let Value::Object(m) = &mut v {
            m.shift_remove("trace");
        }
    }
    Ok((v, rep))
}

fn bound_thue(p: &Params) -> Result<Value> {
    let field = p.field()?;
    let s = p.sspec(&field)?;
    let mut p2 = p.clone();
    p2.vars = Some(2);
    let sys = form_system(&p2, &field)?;
    let delta = p.element(&field, "delta", &p.delta)?;
    let (bound, rep) = thm3_value(p, &sys, &delta, &s)?;
    Ok(json!({
        "field": field.name(),
        "S": s_labels(&s),
        "form": sys.form,
        "delta": delta.to_string(),
        "reports": [ser(&rep.report)],
        "best": ser(&rep.report.formula),
        "bound": bound,
    }))
}

fn analyze_form(p: &Params) -> Result<Value> {
    let field = p.field()?;
    let sys = form_system(p, &field)?;
    let mut v = json!({ "field": field.name(), "system": ser(&sys) });
    let m = v.as_object_mut().expect("object");
    if let (Some(_), Some(_)) = (&p.delta, &p.primes) {
        let s = p.sspec(&field)?;
        let delta = p.element(&field, "delta", &p.delta)?;
        m.insert("S".into(), json!(s_labels(&s)));
        if sys.verdict.applicable {
            m.insert("reduction".into(), ser(&reduce_to_unit_equations(&sys, &delta, &s, p.precision)?));
            if p.trace {
                let (b, _) = thm3_value(p, &sys, &delta, &s)?;
                m.insert("bound".into(), b);
            }
        }
    }
    Ok(v)
}

fn enum_box(p: &Params, default: u32) -> EnumerationBox {
    let mut b = EnumerationBox::new(p.box_size.unwrap_or(default));
    if let Some(budget) = p.budget {
        b.budget = budget;
    }
    b
}

fn verify_unit_eq(p: &Params) -> Result<Audit> {
    let (field, s, alpha, beta, inp) = unit_inputs(p)?;
    let bx = enum_box(p, 8);
    let recs = enumerate_sunit_solutions(&alpha, &beta, &s, &bx, p.precision)?;
    let sel = best_unit_bound(&inp)?;
    let reports: Vec<&BoundReport> = sel.reports.iter().collect();
    let desc = describe(&field, &s, &[("alpha", alpha.to_string()), ("beta", beta.to_string()), ("box", bx.a_max.to_string())]);
    let mut a = check_bounds(&desc, &recs, &reports)?;
    a.checked = recs.len();
    Ok(a)
}

fn verify_prop4(p: &Params) -> Result<Audit> {
    let (field, s, alpha, beta, _) = unit_inputs(p)?;
    let bx = enum_box(p, 8);
    let recs = enumerate_sunit_solutions(&alpha, &beta, &s, &bx, p.precision)?;
    let desc = describe(&field, &s, &[("alpha", alpha.to_string()), ("beta", beta.to_string()), ("box", bx.a_max.to_string())]);
    let mut witnesses = Vec::with_capacity(recs.len());
    let mut worst: Option<(String, TaggedInterval)> = None;
    let mut worst_lo = f64::INFINITY;
    for r in &recs {
        let w = check_prop4(&r.x, &r.y, &alpha, &beta, &s, p.precision)?;
        let lo: f64 = w.slack.lower.value.parse().unwrap_or(f64::INFINITY);
        if lo < worst_lo {
            worst_lo = lo;
            worst = Some((r.x.to_string(), w.slack.clone()));
        }
        witnesses.push(json!({"x": r.x.to_string(), "y": r.y.to_string(), "witness": ser(&w)}));
    }
    Ok(Audit { instance: desc, checked: recs.len(), worst_margin: worst.map(|w| w.1), witnesses, verdict: AuditVerdict::Pass })
}

fn verify_thue(p: &Params) -> Result<Audit> {
    let field = p.field()?;
    let s = p.sspec(&field)?;
    let mut p2 = p.clone();
    p2.vars = Some(2);
    let sys = form_system(&p2, &field)?;
    let delta = p.element(&field, "delta", &p.delta)?;
    let mut bx = ThueBox::new(p.box_size.unwrap_or(50));
    if let Some(b) = p.budget {
        bx.budget = b;
    }
    let sols = enumerate_thue_solutions(&sys.poly, &delta, &s, &bx, p.precision)?;
    let rep = bound_thm_3(&sys, &delta, &s, p.precision)?;
    let bound = rep.value();
    let desc = describe(&field, &s, &[("form", sys.form.clone()), ("delta", delta.to_string()), ("box", bx.num_max.to_string())]);
    let mut max_h = Interval::zero(p.precision);
    for t in &sols {
        if !t.h.value.certainly_lt(bound) {
            return Err(Error::BoundViolated(format!("({}, {}) has height {} against {}", t.x, t.y, t.h.value, bound)));
        }
        max_h = max_h.max(&t.h.value);
    }
    let margin = if max_h.hi() > &0 { Some(bound.ln().sub(&max_h.ln())) } else { None };
    Ok(Audit {
        instance: desc,
        checked: sols.len(),
        worst_margin: margin.as_ref().map(TaggedInterval::from),
        witnesses: sols.iter().map(ser).collect(),
        verdict: AuditVerdict::Pass,
    })
}

fn verify_prop5(p: &Params) -> Result<Audit> {
    let field = p.field()?;
    let gens = p.elements(&field, "generators", &p.generators)?;
    let alpha = p.element(&field, "alpha", &p.alpha)?;
    let v = p.place(&field)?;
    let sample = Prop5Sample { k_max: p.box_size.unwrap_or(10) };
    if let Some(b) = p.budget {
        let c = sample.cardinality(gens.len());
        if c > b {
            return Err(Error::BoxTooLarge { size: c, budget: b });
        }
    }
    sample_check_prop5(&field, &gens, &alpha, &v, &sample, p.precision)
}

fn verify_lemma3(p: &Params) -> Result<Audit> {
    let field = p.field()?;
    let s = p.sspec(&field)?;
    let alpha = p.element(&field, "alpha", &p.alpha)?;
    let n = p.n.unwrap_or(1);
    let e_max = p.box_size.unwrap_or(20);
    let desc = describe(&field, &s, &[("alpha", alpha.to_string()), ("n", n.to_string()), ("box", e_max.to_string())]);
    match check_lemma3_constructive(&alpha, n, &s, e_max, p.precision) {
        Ok(w) => {
            let margin = Interval::ln_ratio(p.precision, &num_rational::BigRational::new(w.bound_arg.clone(), w.height_arg.clone()));
            Ok(Audit {
                instance: desc,
                checked: 1,
                worst_margin: Some(TaggedInterval::from(&margin)),
                witnesses: vec![ser(&w)],
                verdict: AuditVerdict::Pass,
            })
        }
        Err(Error::WitnessNotFound) => {
            Ok(Audit { instance: desc, checked: 1, worst_margin: None, witnesses: Vec::new(), verdict: AuditVerdict::Inconclusive })
        }
        Err(e) => Err(e),
    }
}

fn table(v: &Value) -> String {
    let mut out = String::new();
    let s = |x: &Value| x.as_str().map(str::to_owned).unwrap_or_else(|| x.to_string());
    if let Some(reps) = v.get("reports").and_then(Value::as_array) {
        let best = v.get("best").map(s).unwrap_or_default();
        out.push_str(&format!("{:<18} {:>24}  {}\n", "formula", "bound", ""));
        for r in reps {
            let f = s(&r["formula"]);
            let mark = if f == best { "min" } else { "" };
            out.push_str(&format!("{:<18} {:>24}  {}\n", f, s(&r["decimal"]["value"]), mark));
        }
        if let Some(sk) = v.get("skipped").and_then(Value::as_array) {
            for r in sk {
                out.push_str(&format!("{:<18} {:>24}  {}\n", s(&r["formula"]), "-", s(&r["reason"])));
            }
        }
    } else if let Some(verdict) = v.get("verdict") {
        out.push_str(&format!("instance      {}\n", s(&v["instance"])));
        out.push_str(&format!("checked       {}\n", v["checked"]));
        let wm = v.get("worst_margin").and_then(|m| m.get("lower")).map(|l| s(&l["value"])).unwrap_or_else(|| "-".into());
        out.push_str(&format!("worst margin  {wm}\n"));
        out.push_str(&format!("verdict       {}\n", s(verdict)));
    } else {
        out = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    }
    out
}
