//! Acceptance criteria 1–9. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use effbounds::bounds::{
    bound_thm_a, bound_thm_b, bound_thm_c, bound_thm_1, constant, improvement_factor, BoundInputs, BoundReport, ConstParams,
    FormulaId,
};
use effbounds::cli::instance::{read_instance, Overrides, Params};
use effbounds::forms::parse::parse_poly;
use effbounds::forms::{bound_thm_3, FormSystem, LinearForm};
use effbounds::heights::{big_h, s_regulator, SSpec};
use effbounds::nf::{build_quadratic_field, build_rational_field};
use effbounds::verify::{
    check_bounds, check_lemma3_constructive, check_prop4, enumerate_sunit_solutions, enumerate_thue_solutions,
    sample_check_prop5, EnumerationBox, Prop5Sample, ThueBox,
};
use effbounds::{AlgNum, Interval};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;

const PREC: u32 = 128;
const ORACLE: &str = include_str!("oracle/values.txt");

type Outcome = Result<String, String>;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus(prefix: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(root().join("corpus"))
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_str().unwrap().starts_with(prefix))
        .collect();
    v.sort();
    v
}

fn params(path: &Path) -> Params {
    Params::resolve(Some(read_instance(path).unwrap()), &Overrides::default()).unwrap()
}

fn parse_float(s: &str) -> Float {
    Float::with_val(512, Float::parse(s).unwrap())
}

/// `oracle` lies in `x` widened by the oracle's own rounding, and `x` is
/// no wider than `2⁻⁶⁴` relative.
fn matches_oracle(x: &Interval, oracle: &str) -> Result<(), String> {
    let o = parse_float(oracle);
    let scale = Float::with_val(512, o.clone().abs().max(&Float::with_val(512, 1)));
    let slack = Float::with_val(512, &scale * Float::with_val(512, 1e-55));
    let lo = Float::with_val(512, x.lo()) - &slack;
    let hi = Float::with_val(512, x.hi()) + &slack;
    if o < lo || o > hi {
        return Err(format!("oracle {oracle} outside [{}, {}]", x.lo(), x.hi()));
    }
    let width = Float::with_val(512, x.hi()) - Float::with_val(512, x.lo());
    let tol = Float::with_val(512, &scale * Float::with_val(512, Float::i_exp(1, -64)));
    if width > tol {
        return Err(format!("interval width {width} exceeds 2^-64 relative"));
    }
    Ok(())
}

fn q_inputs(primes: &[u64], alpha: &AlgNum, beta: &AlgNum) -> BoundInputs {
    let s = SSpec::from_primes(&build_rational_field(), primes).unwrap();
    BoundInputs::from_sspec(&s, big_h(alpha, beta, PREC).unwrap().value).unwrap()
}

fn criterion_1() -> Outcome {
    let mut n = 0;
    for line in ORACLE.lines().filter(|l| l.starts_with("C ")) {
        let f: Vec<&str> = line.split_whitespace().collect();
        let p = ConstParams { d: f[1].parse().unwrap(), r: f[2].parse().unwrap(), s: f[3].parse().unwrap(), t: f[4].parse().unwrap(), m: f[5].parse().unwrap() };
        let c = constant(f[6], &p, PREC).map_err(|e| format!("{line}: {e}"))?;
        let log = c.log.ok_or_else(|| format!("{line}: constant is zero"))?;
        matches_oracle(&log, f[7]).map_err(|e| format!("{} at {:?}: {e}", f[6], p))?;
        n += 1;
    }
    // constants that vanish
    let zero = constant("c3", &ConstParams { d: 1, r: 0, s: 2, t: 1, m: 1 }, PREC).unwrap();
    if !zero.is_zero() {
        return Err("c3 with r = 0 is not zero".into());
    }
    // closed forms
    let c1 = constant("c1", &ConstParams { d: 1, r: 0, s: 3, t: 2, m: 1 }, PREC).unwrap();
    let twelve_log_48 = Interval::ln_int(PREC, &48.into()).mul_int(12);
    if !c1.log.unwrap().overlaps(&twelve_log_48) {
        return Err("c1(1,3) differs from 12 log 48".into());
    }
    let c10 = constant("c10", &ConstParams { d: 1, r: 0, s: 2, t: 1, m: 1 }, PREC).unwrap();
    if c10.exact != Some(num_rational::BigRational::from_integer(1.into())) {
        return Err("c10(d=1, s=2) is not 1".into());
    }
    for line in ORACLE.lines().filter(|l| l.starts_with("B ")) {
        let f: Vec<&str> = line.split_whitespace().collect();
        let inp = match f[1] {
            "Q:2,3,5:H=1" => q_inputs(&[2, 3, 5], &AlgNum::one(), &AlgNum::one()),
            "Q:2,3:H=log3" => q_inputs(&[2, 3], &AlgNum::from_int(2), &AlgNum::from_int(3)),
            "Q(sqrt(5)):2:H=1" => {
                let k = build_quadratic_field(5).unwrap();
                let s = SSpec::from_primes(&k, &[2]).unwrap();
                BoundInputs::from_sspec(&s, Interval::one(PREC)).unwrap()
            }
            other => return Err(format!("unknown oracle instance {other}")),
        };
        let rep = match f[2] {
            "thmA" => bound_thm_a(&inp),
            "thmB" => bound_thm_b(&inp),
            "thmC" => bound_thm_c(&inp),
            "thm1" => bound_thm_1(&inp),
            other => return Err(format!("unknown oracle formula {other}")),
        }
        .map_err(|e| format!("{line}: {e}"))?;
        matches_oracle(rep.log_value.as_ref().unwrap(), f[3]).map_err(|e| format!("{} {}: {e}", f[1], f[2]))?;
        n += 1;
    }
    Ok(format!("{n} oracle values matched"))
}

/// The S-sets of criterion 2: over ℚ and five quadratic fields, primes from
/// {2,…,97}, at most five finite places.
fn sandwich_corpus() -> Vec<SSpec> {
    let primes: Vec<u64> = (2..=97u64).filter(|&p| (2..p).all(|q| p % q != 0)).collect();
    let fields = [0i64, -1, -5, -23, 10, 5];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut out = Vec::new();
    for &d in &fields {
        let k = if d == 0 { build_rational_field() } else { build_quadratic_field(d).unwrap() };
        out.push(SSpec::infinite(&k));
        let mut made = 0;
        while made < 30 {
            let want = rng.gen_range(1..=5);
            let mut ps: Vec<u64> = Vec::new();
            while ps.len() < want {
                let p = primes[rng.gen_range(0..primes.len())];
                if !ps.contains(&p) {
                    ps.push(p);
                }
            }
            ps.sort();
            let s = SSpec::from_primes(&k, &ps).unwrap();
            if s.t() <= 5 {
                out.push(s);
                made += 1;
            }
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let specs = sandwich_corpus();
    for s in &specs {
        let reg = s_regulator(s, PREC).map_err(|e| e.to_string())?;
        let tag = || format!("{} S={:?}", s.field().name(), s.norms());
        if !reg.within_sandwich() {
            return Err(format!("{}: R_S outside its sandwich", tag()));
        }
        if let Some(det) = &reg.determinant {
            if !det.overlaps(&reg.value) {
                return Err(format!("{}: determinant {} disagrees with R_S {}", tag(), det.lo_f64(), reg.value.lo_f64()));
            }
        }
    }
    Ok(format!("{} S-sets over 6 fields", specs.len()))
}

fn criteria_3_4() -> (Outcome, Outcome) {
    let files = corpus("unit_eq_");
    let mut records = 0usize;
    let mut prop4 = 0usize;
    let mut err3 = None;
    let mut err4 = None;
    let mut violations: Vec<String> = Vec::new();
    let mut repaired = 0usize;
    for f in &files {
        let p = params(f);
        let k = p.field().unwrap();
        let s = p.sspec(&k).unwrap();
        let alpha = p.element(&k, "alpha", &p.alpha).unwrap();
        let beta = p.element(&k, "beta", &p.beta).unwrap();
        let name = f.file_name().unwrap().to_string_lossy().into_owned();
        let h = big_h(&alpha, &beta, PREC).unwrap();
        if h.value.hi_f64() > 20f64.ln() + 1e-12 {
            err3.get_or_insert(format!("{name}: H exceeds log 20"));
        }
        let bx = EnumerationBox::new(p.box_size.unwrap_or(12));
        if bx.a_max != 12 {
            err3.get_or_insert(format!("{name}: box is {}", bx.a_max));
        }
        let recs = match enumerate_sunit_solutions(&alpha, &beta, &s, &bx, PREC) {
            Ok(r) => r,
            Err(e) => {
                err3.get_or_insert(format!("{name}: {e}"));
                continue;
            }
        };
        let inp = BoundInputs::from_sspec(&s, h.value.clone()).unwrap();
        let mut reports: Vec<BoundReport> = vec![bound_thm_a(&inp).unwrap(), bound_thm_c(&inp).unwrap(), bound_thm_1(&inp).unwrap()];
        if s.t() > 0 {
            reports.push(bound_thm_b(&inp).unwrap());
        }
        let refs: Vec<&BoundReport> = reports.iter().collect();
        if let Err(e) = check_bounds(&name, &recs, &refs) {
            err3.get_or_insert(format!("{name}: {e}"));
        }
        records += recs.len();
        for r in &recs {
            match check_prop4(&r.x, &r.y, &alpha, &beta, &s, PREC) {
                Ok(_) => prop4 += 1,
                Err(e) if e.is_violation() => {
                    if e.to_string().contains("would give one") {
                        repaired += 1;
                    }
                    violations.push(format!("{name}: ({}, {})", r.x, r.y));
                }
                Err(e) => {
                    err4.get_or_insert(format!("{name}: ({}, {}): {e}", r.x, r.y));
                }
            }
        }
    }
    let c3 = if files.len() < 20 {
        Err(format!("only {} instances", files.len()))
    } else {
        match err3 {
            Some(e) => Err(e),
            None => Ok(format!("{} instances, {records} solutions, thmA/thmB/thmC/thm1 all above every H_script", files.len())),
        }
    };
    let c4 = match err4 {
        Some(e) => Err(e),
        None if !violations.is_empty() => Err(format!(
            "{} of {records} records have no witness in S'×A ({}); adding 1/(alpha*x) to A supplies one for {repaired} of them",
            violations.len(),
            violations.join(", ")
        )),
        None if prop4 == records => Ok(format!("{prop4} records, each with a witness (v, P)")),
        None => Err(format!("{prop4} of {records} records checked")),
    };
    (c3, c4)
}

fn criterion_5() -> Outcome {
    let mut checked = 0usize;
    let q = build_rational_field();
    let q_gens = vec![AlgNum::from_int(2), AlgNum::from_int(3)];
    let q_alphas = [AlgNum::from_int(3), AlgNum::from_int(5), AlgNum::from_int(-7), AlgNum::frac(1, 11), AlgNum::frac(13, 2)];
    let mut cases = Vec::new();
    for a in &q_alphas {
        for place in ["inf", "2", "3", "5", "7"] {
            cases.push((q.clone(), q_gens.clone(), a.clone(), place));
        }
    }
    let gi = build_quadratic_field(-1).unwrap();
    let el = |t: &str| effbounds::forms::parse::parse_element(t, -1).unwrap();
    let gi_gens = vec![el("1+i"), el("2+i")];
    for a in ["3", "2-i", "(1+2*i)/5", "7"] {
        for place in ["inf", "2", "5", "13"] {
            cases.push((gi.clone(), gi_gens.clone(), el(a), place));
        }
    }
    for (k, gens, alpha, place) in &cases {
        let p = Params { place: Some(place.to_string()), ..Default::default() };
        let v = p.place(k).map_err(|e| e.to_string())?;
        let a = sample_check_prop5(k, gens, alpha, &v, &Prop5Sample { k_max: 10 }, PREC)
            .map_err(|e| format!("{} alpha={alpha} v={place}: {e}", k.name()))?;
        checked += a.checked;
    }
    if checked < 10_000 {
        return Err(format!("only {checked} samples"));
    }
    Ok(format!("{checked} samples over Q and Q(i), {} (alpha, v) pairs", cases.len()))
}

fn criterion_6() -> Outcome {
    let mut values: Vec<u64> = vec![1];
    let mut x = 2f64;
    while x <= 1e6 {
        values.push(x as u64);
        x *= 1.07;
    }
    values.push(1_000_000);
    values.dedup();
    let mut n = 0;
    for &p in values.iter().filter(|&&p| p >= 2) {
        let lp = Interval::from_int(PREC, p as i64).ln();
        for &q in values.iter().filter(|&&q| q <= p) {
            let f = improvement_factor(p, q, PREC);
            let qi = Interval::from_int(PREC, q as i64);
            if q == 1 {
                let cap = lp.ln_star().mul_int(2);
                if !f.certainly_le(&cap) {
                    return Err(format!("P_S={p}, P'_S=1: factor exceeds 2 log* log P_S"));
                }
                n += 1;
            } else if qi.lo() > lp.hi() {
                let cap = qi.div(&qi.ln_star()).mul_int(2);
                if !f.certainly_le(&cap) {
                    return Err(format!("P_S={p}, P'_S={q}: factor exceeds 2 P'_S/log* P'_S"));
                }
                n += 1;
            }
        }
    }
    let specs = sandwich_corpus();
    for s in &specs {
        let inp = BoundInputs::from_sspec(s, Interval::one(PREC)).unwrap();
        let a = bound_thm_a(&inp).unwrap();
        let c = bound_thm_c(&inp).unwrap();
        let (lc, la) = (c.log_value.as_ref().unwrap(), a.log_value.as_ref().unwrap());
        // P'_S = P_S makes the two formulas coincide term by term
        let same = inp.p_prime_s == inp.p_s && lc.lo() == la.lo() && lc.hi() == la.hi();
        if !same && !lc.certainly_le(la) {
            return Err(format!("{} S={:?}: thmC above thmA", s.field().name(), s.norms()));
        }
        if s.t() > 0 {
            let lhs = Interval::from_int(PREC, inp.p_s as i64).ln().ln_star();
            let rhs = inp.r_s.ln_star().add(&Interval::from_int(PREC, 5).ln());
            if !lhs.certainly_le(&rhs) {
                return Err(format!("{} S={:?}: log* log P_S > log* R_S + log 5", s.field().name(), s.norms()));
            }
        }
        n += 2;
    }
    Ok(format!("{n} inequalities on a grid up to 10^6 and {} S-sets", specs.len()))
}

fn criterion_7() -> Outcome {
    let q = build_rational_field();
    let sys = |text: &str, m: usize, radicand: i64, factors: Option<Vec<Vec<i64>>>| -> Result<FormSystem, String> {
        let poly = parse_poly(text, m, Some(radicand)).map_err(|e| e.to_string())?;
        let lf = factors.map(|fs| fs.into_iter().map(|c| LinearForm::new(c.into_iter().map(AlgNum::from_int).collect()).unwrap()).collect());
        FormSystem::build(&poly, radicand, lf, PREC).map_err(|e| e.to_string())
    };
    for text in ["X1*X2*(X1+X2)", "X1*X2*(X1+X2)*(X1-X2)"] {
        let s = sys(text, 2, 0, None)?;
        if !s.graph_g.triangularly_connected || !s.verdict.applicable {
            return Err(format!("{text} is not reported triangularly connected"));
        }
    }
    let norm = sys("X1^2 - 2*X2^2", 2, 2, None)?;
    if norm.verdict.applicable || norm.verdict.k != 2 {
        return Err(format!("norm form over Q(sqrt 2): applicable={} k={}", norm.verdict.applicable, norm.verdict.k));
    }
    let vdm = sys("(X1+X2+X3)*(X1+2*X2+4*X3)*(X1+3*X2+9*X3)", 3, 0, Some(vec![vec![1, 1, 1], vec![1, 2, 4], vec![1, 3, 9]]))?;
    if vdm.verdict.applicable || vdm.verdict.k != 3 {
        return Err(format!("Vandermonde cubic: applicable={} k={}", vdm.verdict.applicable, vdm.verdict.k));
    }
    let thue = sys("X1*X2*(X1+X2)", 2, 0, None)?;
    let s = SSpec::from_primes(&q, &[2, 3]).unwrap();
    let mut total = 0;
    for delta in [1, 6] {
        let d = AlgNum::from_int(delta);
        let bound = bound_thm_3(&thue, &d, &s, PREC).map_err(|e| e.to_string())?;
        let sols = enumerate_thue_solutions(&thue.poly, &d, &s, &ThueBox::new(50), PREC).map_err(|e| e.to_string())?;
        for t in &sols {
            if !t.h.value.certainly_lt(bound.value()) {
                return Err(format!("delta={delta}: ({}, {}) reaches the bound", t.x, t.y));
            }
        }
        if bound.report.formula != FormulaId::Cor4 && bound.report.formula != FormulaId::Thm3 {
            return Err(format!("unexpected formula {:?}", bound.report.formula));
        }
        total += sols.len();
    }
    Ok(format!("graph verdicts as expected; {total} Thue solutions below the bound"))
}

fn criterion_8() -> Outcome {
    let q = build_rational_field();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut found = 0;
    for _ in 0..50 {
        let primes: Vec<u64> = [2u64, 3, 5].into_iter().filter(|_| rng.gen_bool(0.6)).collect();
        let s = SSpec::from_primes(&q, &primes).unwrap();
        let mut num = num_bigint::BigInt::from(rng.gen_range(1..=60i64) * if rng.gen_bool(0.5) { 1 } else { -1 });
        let mut den = num_bigint::BigInt::from(1);
        for &p in &primes {
            let e: i32 = rng.gen_range(-8..=8);
            let pe = num_traits::pow(num_bigint::BigInt::from(p), e.unsigned_abs() as usize);
            if e >= 0 {
                num *= pe;
            } else {
                den *= pe;
            }
        }
        let alpha = AlgNum::from_ratio(&num_rational::BigRational::new(num, den));
        let n = rng.gen_range(1..=3);
        match check_lemma3_constructive(&alpha, n, &s, 20, PREC) {
            Ok(_) => found += 1,
            Err(e) => return Err(format!("alpha={alpha}, n={n}, S={primes:?}: {e}")),
        }
    }
    Ok(format!("{found}/50 witnesses at box 20"))
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = effbounds::cli::run(std::iter::once("effbounds").chain(args.iter().copied()), &mut out, &mut err);
    out.extend_from_slice(&err);
    (code, out)
}

fn cli_process(args: &[&str]) -> (i32, Vec<u8>) {
    let o = std::process::Command::new(env!("CARGO_BIN_EXE_effbounds")).args(args).output().expect("run effbounds");
    let mut out = o.stdout;
    out.extend_from_slice(&o.stderr);
    (o.status.code().unwrap_or(-1), out)
}

fn criterion_9() -> Outcome {
    let mut runs = 0;
    for f in corpus("") {
        let path = f.to_str().unwrap();
        let name = f.file_name().unwrap().to_string_lossy().into_owned();
        let commands: Vec<Vec<&str>> = if name.starts_with("unit_eq_") || name.starts_with("quad_unit_eq") {
            let mut c = vec![vec!["bound", "unit-eq", path], vec!["invariants", path]];
            if name.starts_with("unit_eq_") {
                c.push(vec!["verify", "unit-eq", path, "--box", "6"]);
                c.push(vec!["verify", "prop4", path, "--box", "4"]);
            }
            c
        } else if name.starts_with("group_eq") {
            vec![vec!["bound", "group-eq", path]]
        } else if name.starts_with("thue_") {
            vec![vec!["bound", "thue", path, "--trace"], vec!["verify", "thue", path], vec!["analyze", "form", path]]
        } else if name.starts_with("form_") {
            vec![vec!["analyze", "form", path, "--trace"]]
        } else if name.starts_with("prop5_") {
            vec![vec!["verify", "prop5", path]]
        } else if name.starts_with("lemma3") {
            vec![vec!["verify", "lemma3", path]]
        } else {
            return Err(format!("corpus file {name} has no command"));
        };
        for args in commands {
            let a = cli(&args);
            let b = cli_process(&args);
            let c = cli(&args);
            if a.0 == 1 {
                return Err(format!("{} exited 1: {}", args.join(" "), String::from_utf8_lossy(&a.1)));
            }
            if a != b || a != c {
                return Err(format!("{}: output differs between runs", args.join(" ")));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} commands, three runs each, byte-identical"))
}

fn main() {
    let mut failed = 0;
    let mut line = |n: &str, what: &str, r: Outcome, t: Duration, limit: Duration| {
        let (ok, msg) = match r {
            Ok(m) if t <= limit => (true, m),
            Ok(m) => (false, format!("{m}; took {:.1?}, limit {:.0?}", t, limit)),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!("criterion {n} [{}] {what}: {msg} ({:.2?})", if ok { "PASS" } else { "FAIL" }, t);
    };
    let timed = |f: fn() -> Outcome| {
        let t = Instant::now();
        let r = f();
        (r, t.elapsed())
    };
    let s = |x: u64| Duration::from_secs(x);

    let (r, t) = timed(criterion_1);
    line("1", "formula fidelity", r, t, s(1));
    let (r, t) = timed(criterion_2);
    line("2", "S-regulator sandwich", r, t, s(10));
    let t0 = Instant::now();
    let (r3, r4) = criteria_3_4();
    let t = t0.elapsed();
    line("3", "enumeration vs bounds", r3, t, s(300));
    line("4", "local height witness sweep", r4, t, s(300));
    let (r, t) = timed(criterion_5);
    line("5", "group lower bound sampling", r, t, s(60));
    let (r, t) = timed(criterion_6);
    line("6", "improvement factor", r, t, s(10));
    let (r, t) = timed(criterion_7);
    line("7", "forms pipeline", r, t, s(120));
    let (r, t) = timed(criterion_8);
    line("8", "small twist search", r, t, s(30));
    let (r, t) = timed(criterion_9);
    line("9", "determinism", r, t, Duration::MAX);

    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
