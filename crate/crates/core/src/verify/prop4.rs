use std::cmp::Ordering;

use num_rational::BigRational;
use serde::Serialize;

use super::logcmp::LogLin;
use crate::bounds::TaggedInterval;
use crate::error::{Error, Result};
use crate::heights::{big_h, height, local_height, max_heights, HeightValue, Place, SSpec};
use crate::interval::Interval;
use crate::nf::AlgNum;

#[derive(Clone, Debug, Serialize)]
pub struct Prop4Witness {
    pub place: Place,
    /// `alpha*x`, `beta*y`, or `beta*y/(alpha*x)`.
    pub which: &'static str,
    pub p: AlgNum,
    /// `(d_v/d)·h_v(P)`.
    pub lhs: TaggedInterval,
    /// `(𝓗 − 3H)/|S|`.
    pub rhs: TaggedInterval,
    pub slack: TaggedInterval,
    /// Decided by an exact comparison of rational powers.
    pub exact: bool,
}

/// `S'`: `S` without its two largest-norm prime ideals, or `S_∞` when `t ≤ 2`.
pub fn prop4_places(s: &SSpec) -> Vec<Place> {
    let places = s.places();
    let (inf, mut fin): (Vec<Place>, Vec<Place>) = places.iter().cloned().partition(|v| v.is_infinite());
    if fin.len() <= 2 {
        return inf;
    }
    fin.sort_by(|a, b| b.n_v().cmp(&a.n_v()).then_with(|| b.cmp(a)));
    let mut kept: Vec<Place> = inf.into_iter().chain(fin.into_iter().skip(2)).collect();
    kept.sort();
    kept
}

/// Find `(v, P) ∈ S'×A` maximizing `(d_v/d)h_v(P)` and check
/// `(d_v/d)h_v(P) ≥ (max(h(x), h(y)) − 3H)/|S|`.
pub fn check_prop4(x: &AlgNum, y: &AlgNum, alpha: &AlgNum, beta: &AlgNum, s: &SSpec, prec: u32) -> Result<Prop4Witness> {
    let field = s.field();
    if field.is_asserted() {
        return Err(Error::AssertedFieldUnsupported);
    }
    let ax = alpha * x;
    let by = beta * y;
    if &ax + &by != AlgNum::one() {
        return Err(Error::Domain(format!("({x}, {y}) does not solve the equation")));
    }
    if ax.is_zero() || by.is_zero() {
        return Err(Error::Domain("x and y must be nonzero".into()));
    }
    let cands = vec![("alpha*x", ax.clone()), ("beta*y", by.clone()), ("beta*y/(alpha*x)", &by / &ax)];
    let script_h = max_heights(&[height(x, prec)?, height(y, prec)?]);
    let h = big_h(alpha, beta, prec)?;
    match search(s, &cands, &script_h, &h, prec)? {
        Search::Found(w) => Ok(w),
        Search::Undecided => Err(Error::VerificationFailed(format!("local height comparison undecided at ({x}, {y})"))),
        Search::None(rhs) => {
            // whether the point at infinity, 1/(alpha*x), would have supplied a witness
            let extra = vec![("1/(alpha*x)", ax.recip())];
            let note = match search(s, &extra, &script_h, &h, prec)? {
                Search::Found(w) => format!("1/(alpha*x) at {} would give one", w.place.label()),
                _ => "1/(alpha*x) gives none either".to_string(),
            };
            Err(Error::Prop4Violated(format!("no (v, P) in S'×A for ({x}, {y}); rhs = {rhs}; {note}")))
        }
    }
}

enum Search {
    Found(Prop4Witness),
    Undecided,
    None(Interval),
}

fn search(s: &SSpec, cands: &[(&'static str, AlgNum)], script_h: &HeightValue, h: &HeightValue, prec: u32) -> Result<Search> {
    let field = s.field();
    let d = field.degree as i64;
    let big_s = s.s() as i64;
    // s·(d_v/d)·h_v(P) − 𝓗 + 3H ≥ 0
    let base = LogLin::from_height(h).scale(&BigRational::from_integer(3.into())).sub(&LogLin::from_height(script_h));
    let rhs = script_h.value.sub(&h.value.mul_int(3)).div_int(big_s);

    let mut scored: Vec<(Place, &'static str, AlgNum, HeightValue, BigRational, Interval)> = Vec::new();
    for v in prop4_places(s) {
        for (name, p) in cands {
            let hv = local_height(field, p, &v, prec)?;
            let w = BigRational::new(v.local_degree().into(), d.into());
            let lhs = hv.value.mul_ratio(&w);
            scored.push((v.clone(), name, p.clone(), hv, w, lhs));
        }
    }
    // stable: ties keep place-then-candidate order
    scored.sort_by(|a, b| b.5.mid_f64().partial_cmp(&a.5.mid_f64()).unwrap_or(Ordering::Equal));

    let mut undecided = false;
    for (v, name, p, hv, w, lhs) in scored {
        let diff = LogLin::from_height(&hv).scale(&(w * BigRational::from_integer(big_s.into()))).add(&base);
        match diff.sign() {
            Some(Ordering::Greater | Ordering::Equal) => {
                return Ok(Search::Found(Prop4Witness {
                    place: v,
                    which: name,
                    p,
                    slack: TaggedInterval::from(&lhs.sub(&rhs)),
                    lhs: TaggedInterval::from(&lhs),
                    rhs: TaggedInterval::from(&rhs),
                    exact: diff.is_exact(),
                }))
            }
            Some(Ordering::Less) => {}
            None => undecided = true,
        }
    }
    Ok(if undecided { Search::Undecided } else { Search::None(rhs) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::build_rational_field;

    #[test]
    fn nine_minus_eight() {
        let q = build_rational_field();
        let s = SSpec::from_primes(&q, &[2, 3]).unwrap();
        assert_eq!(prop4_places(&s), vec![Place::Real(0)]);
        let one = AlgNum::one();
        let w = check_prop4(&AlgNum::from_int(9), &AlgNum::from_int(-8), &one, &one, &s, 128).unwrap();
        assert_eq!(w.place, Place::Real(0));
        assert_eq!(w.which, "beta*y/(alpha*x)");
        assert!(w.exact);
        let s = SSpec::from_primes(&q, &[2, 3, 5, 7]).unwrap();
        let sp = prop4_places(&s);
        assert_eq!(sp.len(), 3);
        assert!(!sp.iter().any(|v| v.n_v() == 7 || v.n_v() == 5 && !v.is_infinite()));
    }

    #[test]
    fn printed_set_has_gaps() {
        // all the smallness of x sits at 5 and of y, y/x at 3, both outside S'
        let q = build_rational_field();
        let s = SSpec::from_primes(&q, &[2, 3, 5]).unwrap();
        let one = AlgNum::one();
        let e = check_prop4(&AlgNum::frac(-25, 2), &AlgNum::frac(27, 2), &one, &one, &s, 128).unwrap_err();
        assert!(e.is_violation());
        assert!(e.to_string().contains("1/(alpha*x) at inf would give one"), "{e}");
    }
}
