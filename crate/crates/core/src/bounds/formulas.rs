//! The height bounds for S-unit equations, in log space.

use num_bigint::BigInt;
use serde::Serialize;

use super::constants::{c1, c10, c11, c2, c3, c4, c5, c6, script_r, C3Variant};
use super::report::{BoundReport, FormulaId};
use crate::error::{Error, Result};
use crate::heights::{s_regulator, SSpec};
use crate::interval::Interval;

/// Data for the group equation `αx + βy = 1` in `x, y ∈ Γ`.
#[derive(Clone, Debug)]
pub struct GroupData {
    pub m: u32,
    /// `θ = h(ξ₁)⋯h(ξ_m)`.
    pub theta: Interval,
}

/// Everything the bound formulas read.
#[derive(Clone, Debug)]
pub struct BoundInputs {
    pub d: u32,
    pub r: u32,
    pub s: u32,
    pub t: u32,
    pub r_k: Interval,
    pub h_k: u64,
    pub r_s: Interval,
    pub p_s: u64,
    pub p_prime_s: u64,
    pub q_s: BigInt,
    /// `H = max(h(α), h(β), 1)`.
    pub h: Interval,
    pub group: Option<GroupData>,
    /// Set when `R_S` is only known up to the sandwich of its bounds.
    pub r_s_interval_only: bool,
}

impl BoundInputs {
    /// Inputs from a set of places and a value of `H`.
    pub fn from_sspec(s: &SSpec, h: Interval) -> Result<Self> {
        let prec = h.prec();
        let f = s.field();
        let st = s.stats();
        let reg = s_regulator(s, prec)?;
        Ok(BoundInputs {
            d: f.degree,
            r: f.unit_rank,
            s: st.s as u32,
            t: st.t as u32,
            r_k: f.regulator(prec),
            h_k: f.class_number,
            r_s: reg.value,
            p_s: st.p_s,
            p_prime_s: st.p_prime_s,
            q_s: st.q_s.clone(),
            h,
            group: None,
            r_s_interval_only: reg.interval_only,
        })
    }

    pub fn prec(&self) -> u32 {
        self.h.prec()
    }

    fn int(&self, n: u64) -> Interval {
        Interval::from_bigint(self.prec(), &BigInt::from(n))
    }

    /// Same inputs with `H` replaced.
    pub fn with_h(&self, h: Interval) -> Self {
        BoundInputs { h, ..self.clone() }
    }

    /// `𝓡` with the given reading of `c₃`.
    pub fn script_r(&self, variant: C3Variant) -> Interval {
        script_r(self.d, self.r, &self.r_k, self.h_k, variant)
    }

    fn echo(&self, mut r: BoundReport, names: &[&str]) -> BoundReport {
        let prec = self.prec();
        for &n in names {
            let v = match n {
                "d" => Interval::from_int(prec, self.d as i64),
                "r" => Interval::from_int(prec, self.r as i64),
                "s" => Interval::from_int(prec, self.s as i64),
                "t" => Interval::from_int(prec, self.t as i64),
                "R_K" => self.r_k.clone(),
                "h_K" => self.int(self.h_k),
                "R_S" => self.r_s.clone(),
                "P_S" => self.int(self.p_s),
                "P'_S" => self.int(self.p_prime_s),
                "Q_S" => Interval::from_bigint(prec, &self.q_s),
                "H" => self.h.clone(),
                "m" => Interval::from_int(prec, self.group.as_ref().map_or(0, |g| g.m) as i64),
                "theta" => self.group.as_ref().map(|g| g.theta.clone()).unwrap_or_else(|| Interval::zero(prec)),
                _ => unreachable!("unknown input {n}"),
            };
            r = r.input(n, &v);
        }
        if self.r_s_interval_only {
            r = r.note("R_S enclosed by its regulator sandwich (asserted field)");
        }
        r
    }

    fn check_h(&self) -> Result<()> {
        if self.h.lo() < &1 {
            return Err(Error::ParamOutOfRange("H must be at least 1".into()));
        }
        Ok(())
    }
}

/// `(P'/log* P')·(1 + log* log P / log* P')`.
pub fn improvement_factor(p_s: u64, p_prime_s: u64, prec: u32) -> Interval {
    let p = Interval::from_bigint(prec, &BigInt::from(p_s));
    let q = Interval::from_bigint(prec, &BigInt::from(p_prime_s));
    let lq = q.ln_star();
    let llp = p.ln().ln_star();
    q.div(&lq).mul(&Interval::one(prec).add(&llp.div(&lq)))
}

/// `ln(1 + log* R_S / log* P)`.
fn ln_one_plus_ratio(r_s: &Interval, p: &Interval) -> Interval {
    Interval::one(r_s.prec()).add(&r_s.ln_star().div(&p.ln_star())).ln()
}

/// Theorem A: `c₁(d,s)·P_S·(1 + log* R_S/log* P_S)·R_S·H`.
pub fn bound_thm_a(inp: &BoundInputs) -> Result<BoundReport> {
    inp.check_h()?;
    let prec = inp.prec();
    let c = c1(inp.d, inp.s, prec);
    let p = inp.int(inp.p_s);
    let lc = c.log.clone().unwrap();
    let ratio = ln_one_plus_ratio(&inp.r_s, &p);
    let v = lc.add(&p.ln()).add(&ratio).add(&inp.r_s.ln()).add(&inp.h.ln());
    let r = BoundReport::new(FormulaId::ThmA, v).constant(&c).term("ln(1+log*R_S/log*P_S)", &ratio);
    Ok(inp.echo(r, &["d", "s", "P_S", "R_S", "H"]))
}

/// The `S = S_∞` alternative to Theorem A: `c₂(d,r)·R_K·log* R_K·H`.
pub fn bound_thm_a_sinf(inp: &BoundInputs) -> Result<BoundReport> {
    inp.check_h()?;
    if inp.t != 0 {
        return Err(Error::NotApplicable("this variant is for S consisting of the infinite places only".into()));
    }
    let prec = inp.prec();
    let c = c2(inp.d, inp.r, prec);
    let v = c.log.clone().unwrap().add(&inp.r_k.ln()).add(&inp.r_k.ln_star().ln()).add(&inp.h.ln());
    let r = BoundReport::new(FormulaId::ThmASinf, v).constant(&c);
    Ok(inp.echo(r, &["d", "r", "R_K", "H"]))
}

/// Theorem B: `c₄(d,r,t)·𝓡^{t+5}·(P_S/log P_S)·R_S·H`, `t > 0`.
pub fn bound_thm_b(inp: &BoundInputs) -> Result<BoundReport> {
    inp.check_h()?;
    if inp.t == 0 {
        return Err(Error::RequiresFinitePlaces);
    }
    let prec = inp.prec();
    let c = c4(inp.d, inp.r, inp.t, prec);
    let sr = inp.script_r(C3Variant::Section2);
    let p = inp.int(inp.p_s);
    let v = c
        .log
        .clone()
        .unwrap()
        .add(&sr.ln().mul_int(inp.t as i64 + 5))
        .add(&p.ln())
        .sub(&p.ln().ln())
        .add(&inp.r_s.ln())
        .add(&inp.h.ln());
    let r = BoundReport::new(FormulaId::ThmB, v).constant(&c).constant(&c3(inp.d, inp.r, C3Variant::Section2, prec)).term("script_R", &sr);
    Ok(inp.echo(r, &["d", "r", "t", "R_K", "h_K", "P_S", "R_S", "H"]))
}

/// Theorem C: `c₁(d,s)·P'_S·(1 + log* R_S/log* P'_S)·R_S·H`.
pub fn bound_thm_c(inp: &BoundInputs) -> Result<BoundReport> {
    inp.check_h()?;
    let prec = inp.prec();
    let c = c1(inp.d, inp.s, prec);
    let p = inp.int(inp.p_prime_s);
    let ratio = ln_one_plus_ratio(&inp.r_s, &p);
    let v = c.log.clone().unwrap().add(&p.ln()).add(&ratio).add(&inp.r_s.ln()).add(&inp.h.ln());
    let r = BoundReport::new(FormulaId::ThmC, v).constant(&c).term("ln(1+log*R_S/log*P'_S)", &ratio);
    Ok(inp.echo(r, &["d", "s", "P'_S", "R_S", "H"]))
}

/// Theorem 1: `c₅(d,r,s,t)·𝓡^{t+4}·factor(P_S, P'_S)·R_S·H`, `t > 0`.
pub fn bound_thm_1(inp: &BoundInputs) -> Result<BoundReport> {
    inp.check_h()?;
    if inp.t == 0 {
        return Err(Error::RequiresFinitePlaces);
    }
    let prec = inp.prec();
    let c = c5(inp.d, inp.r, inp.s, inp.t, prec);
    let sr = inp.script_r(C3Variant::Section2);
    let fac = improvement_factor(inp.p_s, inp.p_prime_s, prec);
    let v = c
        .log
        .clone()
        .unwrap()
        .add(&sr.ln().mul_int(inp.t as i64 + 4))
        .add(&fac.ln())
        .add(&inp.r_s.ln())
        .add(&inp.h.ln());
    let r = BoundReport::new(FormulaId::Thm1, v)
        .constant(&c)
        .constant(&c3(inp.d, inp.r, C3Variant::Section2, prec))
        .term("script_R", &sr)
        .term("improvement_factor (linear)", &fac);
    Ok(inp.echo(r, &["d", "r", "s", "t", "R_K", "h_K", "P_S", "P'_S", "R_S", "H"]))
}

fn thm2_core(inp: &BoundInputs, m: u32, theta: &Interval, id: FormulaId) -> Result<BoundReport> {
    inp.check_h()?;
    if m == 0 {
        return Err(Error::ParamOutOfRange("m must be at least 1".into()));
    }
    if theta.lo() <= &0 {
        return Err(Error::ParamOutOfRange("θ must be positive".into()));
    }
    let prec = inp.prec();
    let c = c6(inp.d, m, prec);
    let lc = c.log.clone().unwrap();
    let s = Interval::from_int(prec, inp.s as i64);
    let p = inp.int(inp.p_prime_s);
    // max(log(c₆·s·P'_S), log* θ)
    let inner = lc.add(&s.ln()).add(&p.ln()).max(&theta.ln_star());
    let v = Interval::from_int(prec, 16)
        .ln()
        .add(&lc)
        .add(&s.ln())
        .add(&p.ln())
        .sub(&p.ln_star().ln())
        .add(&theta.ln())
        .add(&inner.ln())
        .add(&inp.h.ln());
    let r = BoundReport::new(id, v).constant(&c).term("max(log(c6*s*P'_S), log*theta) (linear)", &inner).input("m", &Interval::from_int(prec, m as i64)).input("theta", theta);
    Ok(inp.echo(r, &["d", "s", "P'_S", "H"]))
}

/// Theorem 2: `16c₆·s·(P'_S/log* P'_S)·θ·max(log(c₆sP'_S), log* θ)·H`.
pub fn bound_thm_2(inp: &BoundInputs) -> Result<BoundReport> {
    let g = inp.group.as_ref().ok_or_else(|| Error::ParamOutOfRange("group data (m, θ) required".into()))?;
    thm2_core(inp, g.m, &g.theta, FormulaId::Thm2)
        .map(|r| r.note("S must be the smallest set of places with Γ inside the S-units (caller-asserted)"))
}

/// Theorem 2 for `Γ = 𝒪_S^*` with `m = s − 1` and `θ ≤ c₁₀·R_S`.
pub fn bound_thm_2_full_group(inp: &BoundInputs) -> Result<BoundReport> {
    if inp.s < 2 {
        return Err(Error::ParamOutOfRange("the S-unit group has rank s − 1 ≥ 1 only when s ≥ 2".into()));
    }
    let prec = inp.prec();
    let c = c10(inp.d, inp.s, prec);
    let theta = c.value(prec).mul(&inp.r_s);
    Ok(thm2_core(inp, inp.s - 1, &theta, FormulaId::Thm2FullGroup)?.constant(&c))
}

/// Lemma 2: a fundamental system with `∏ h(εᵢ) ≤ c₁₀·R_S`.
pub fn lemma2_bound(inp: &BoundInputs) -> Result<BoundReport> {
    let prec = inp.prec();
    let c = c10(inp.d, inp.s.max(1), prec);
    let v = c.log.clone().unwrap().add(&inp.r_s.ln());
    let r = BoundReport::new(FormulaId::Lemma2, v).constant(&c);
    Ok(inp.echo(r, &["d", "s", "R_S"]))
}

/// The S-dependence of the earlier decomposable-form bound,
/// `(P_S/log* P_S)·log* Q_S·R_S`, reported with `c₇ = 1`.
pub fn eq31_s_factor(inp: &BoundInputs) -> Result<BoundReport> {
    let prec = inp.prec();
    let p = inp.int(inp.p_s);
    let q = Interval::from_bigint(prec, &inp.q_s);
    let v = p.ln().sub(&p.ln_star().ln()).add(&q.ln_star().ln()).add(&inp.r_s.ln());
    let r = BoundReport::new(FormulaId::Eq31, v).note("S-dependent factor only: c7 is not explicit and is set to 1 (c7^s omitted)");
    Ok(inp.echo(r, &["P_S", "Q_S", "R_S"]))
}

/// Lemma 3: `(1/d)·log N_S(α) + n·(c₃R_K + (h_K/d)·log Q_S)`.
///
/// `log_ns` is `log N_S(α)`. The lemma's own reading of `c₃` is used; the
/// other reading is recorded as a term.
pub fn lemma3_bound(inp: &BoundInputs, log_ns: &Interval, n: u32) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::ParamOutOfRange("n must be at least 1".into()));
    }
    let prec = inp.prec();
    let step = |variant| {
        let c = c3(inp.d, inp.r, variant, prec);
        let q = Interval::from_bigint(prec, &inp.q_s);
        let v = c.value(prec).mul(&inp.r_k).add(&q.ln().mul_int(inp.h_k as i64).div_int(inp.d as i64));
        (c, v)
    };
    let (c, per_n) = step(C3Variant::Lemma3);
    let (c_alt, per_n_alt) = step(C3Variant::Section2);
    let base = log_ns.div_int(inp.d as i64);
    let v = base.add(&per_n.mul_int(n as i64));
    let alt = base.add(&per_n_alt.mul_int(n as i64));
    let r = BoundReport::from_linear(FormulaId::Lemma3, v)
        .constant(&c)
        .constant(&c_alt)
        .term("log N_S(alpha)/d (linear)", &base)
        .term("per-n increment (linear)", &per_n)
        .term("value with the other c3 reading (linear)", &alt)
        .input("n", &Interval::from_int(prec, n as i64));
    Ok(inp.echo(r, &["d", "r", "R_K", "h_K", "Q_S"]))
}

/// Lower bound on `log |1 − αξ|_v`:
/// `−c₁₁·(N(v)/log N(v))·θ·H·log*(N(v)·h(ξ)/H)`.
pub fn prop5_lower_bound(d: u32, n_v: u64, m: u32, theta: &Interval, h: &Interval, h_xi: &Interval) -> Result<BoundReport> {
    if m == 0 {
        return Err(Error::ParamOutOfRange("m must be at least 1".into()));
    }
    if n_v < 2 {
        return Err(Error::ParamOutOfRange("N(v) is at least 2".into()));
    }
    if h.lo() < &1 {
        return Err(Error::ParamOutOfRange("H must be at least 1".into()));
    }
    let prec = h.prec();
    let c = c11(d, m, prec);
    let nv = Interval::from_bigint(prec, &BigInt::from(n_v));
    let arg = nv.mul(h_xi).div(h).ln_star();
    let v = c.log.clone().unwrap().add(&nv.ln()).sub(&nv.ln().ln()).add(&theta.ln()).add(&h.ln()).add(&arg.ln());
    let mut r = BoundReport::new(FormulaId::Prop5, v.clone())
        .constant(&c)
        .term("log*(N(v)h(xi)/H) (linear)", &arg)
        .input("d", &Interval::from_int(prec, d as i64))
        .input("N(v)", &nv)
        .input("m", &Interval::from_int(prec, m as i64))
        .input("theta", theta)
        .input("H", h)
        .input("h(xi)", h_xi)
        .note("implemented as a lower bound with a leading minus sign; the printed inequality has no sign");
    r.negative = true;
    r.linear = Some(v.exp().neg());
    Ok(r)
}

/// Every unit-equation formula applicable to the inputs, and the smallest.
#[derive(Clone, Debug, Serialize)]
pub struct Selection {
    pub reports: Vec<BoundReport>,
    /// Formulas that do not apply, with the reason.
    pub skipped: Vec<(FormulaId, String)>,
    pub best: Option<FormulaId>,
}

impl Selection {
    pub fn get(&self, f: FormulaId) -> Option<&BoundReport> {
        self.reports.iter().find(|r| r.formula == f)
    }

    pub fn best_report(&self) -> Option<&BoundReport> {
        self.best.and_then(|f| self.get(f))
    }
}

/// Evaluate Theorems A, B, C and 1 (the `S_∞` variant of A when `t = 0`)
/// and flag the minimum.
pub fn best_unit_bound(inp: &BoundInputs) -> Result<Selection> {
    inp.check_h()?;
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let a: (FormulaId, fn(&BoundInputs) -> Result<BoundReport>) =
        if inp.t == 0 { (FormulaId::ThmASinf, bound_thm_a_sinf) } else { (FormulaId::ThmA, bound_thm_a) };
    let list = [a, (FormulaId::ThmB, bound_thm_b), (FormulaId::ThmC, bound_thm_c), (FormulaId::Thm1, bound_thm_1)];
    for (id, f) in list {
        match f(inp) {
            Ok(r) => reports.push(r),
            Err(e @ (Error::RequiresFinitePlaces | Error::NotApplicable(_))) => skipped.push((id, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    let best = reports
        .iter()
        .min_by(|x, y| x.log_upper().partial_cmp(&y.log_upper()).expect("finite"))
        .map(|r| r.formula);
    Ok(Selection { reports, skipped, best })
}
