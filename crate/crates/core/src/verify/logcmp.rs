//! Signs of real numbers of the form `Σ cᵢ·ln(qᵢ) + e + (interval)`.
//!
//! With no constant and no inexact part the sign is decided exactly as a
//! comparison of rational powers. A nonzero constant `e` alongside rational
//! logarithms can never give zero (`e^e` would be rational), so the interval
//! evaluation is refined until it separates from zero.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::heights::HeightValue;
use crate::interval::Interval;

const PRECISIONS: [u32; 6] = [128, 256, 512, 1024, 2048, 4096];

#[derive(Clone, Debug, Default)]
pub struct LogLin {
    terms: Vec<(BigRational, BigRational)>,
    e: BigRational,
    approx: Option<Interval>,
}

impl LogLin {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(e: BigRational) -> Self {
        LogLin { e, ..Self::default() }
    }

    pub fn log(q: BigRational) -> Self {
        LogLin { terms: vec![(BigRational::one(), q)], ..Self::default() }
    }

    /// Exact logs stay exact; a point value of 1 becomes the constant 1.
    pub fn from_height(h: &HeightValue) -> Self {
        if let Some(x) = &h.exact {
            return LogLin { terms: vec![(BigRational::new(1.into(), x.root.into()), x.arg.clone())], ..Self::default() };
        }
        if h.value.is_point() && h.value.lo() == &1 {
            return Self::constant(BigRational::one());
        }
        LogLin { approx: Some(h.value.clone()), ..Self::default() }
    }

    pub fn is_exact(&self) -> bool {
        self.approx.is_none()
    }

    pub fn add(&self, o: &LogLin) -> LogLin {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        let approx = match (&self.approx, &o.approx) {
            (Some(a), Some(b)) => Some(a.add(b)),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        LogLin { terms, e: &self.e + &o.e, approx }
    }

    pub fn scale(&self, k: &BigRational) -> LogLin {
        LogLin {
            terms: self.terms.iter().map(|(c, q)| (c * k, q.clone())).collect(),
            e: &self.e * k,
            approx: self.approx.as_ref().map(|a| a.mul_ratio(k)),
        }
    }

    pub fn sub(&self, o: &LogLin) -> LogLin {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn eval(&self, prec: u32) -> Interval {
        let mut acc = Interval::from_ratio(prec, &self.e);
        for (c, q) in &self.terms {
            acc = acc.add(&Interval::ln_ratio(prec, q).mul_ratio(c));
        }
        if let Some(a) = &self.approx {
            acc = acc.add(&a.with_prec(prec.max(a.prec())));
        }
        acc
    }

    /// The sign, or `None` when the interval part cannot be resolved.
    pub fn sign(&self) -> Option<Ordering> {
        if self.approx.is_none() && self.e.is_zero() {
            return Some(self.exact_sign());
        }
        let tries: &[u32] = if self.approx.is_some() { &PRECISIONS[..1] } else { &PRECISIONS };
        for &p in tries {
            let p = self.approx.as_ref().map_or(p, |a| a.prec().max(p));
            let v = self.eval(p);
            if v.lo() > &0 {
                return Some(Ordering::Greater);
            }
            if v.hi() < &0 {
                return Some(Ordering::Less);
            }
        }
        None
    }

    /// `∏ qᵢ^{L·cᵢ}` against 1, with `L` clearing the denominators of `cᵢ`.
    fn exact_sign(&self) -> Ordering {
        let l = self.terms.iter().fold(BigInt::one(), |l, (c, _)| l.lcm(c.denom()));
        let mut num = BigRational::one();
        let mut den = BigRational::one();
        for (c, q) in &self.terms {
            let k = (c * BigRational::from_integer(l.clone())).to_integer();
            let e: usize = k.abs().try_into().expect("exponent fits usize");
            let p = num_traits::pow(q.clone(), e);
            if k.is_positive() {
                num *= p;
            } else {
                den *= p;
            }
        }
        num.cmp(&den)
    }
}
