//! Closed real intervals with outward (directed) rounding on MPFR floats.
//!
//! Every operation returns an interval that contains the exact result of
//! applying the operation to any points of its operands. Lower endpoints
//! are rounded toward -inf, upper endpoints toward +inf.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use rug::float::{Round, Special};
use rug::integer::Order;
use rug::{Float, Integer, Rational};

/// Working precision (bits) used when the caller does not choose one.
pub const DEFAULT_PRECISION: u32 = 128;

/// Precision from `EFFBOUNDS_PRECISION`, else [`DEFAULT_PRECISION`].
pub fn precision_from_env() -> u32 {
    std::env::var("EFFBOUNDS_PRECISION")
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .filter(|&p| (32..=4096).contains(&p))
        .unwrap_or(DEFAULT_PRECISION)
}

#[derive(Clone, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

pub(crate) fn to_rug_int(n: &BigInt) -> Integer {
    let (sign, bytes) = n.to_bytes_le();
    let mut out = Integer::from_digits(&bytes, Order::Lsf);
    if sign == Sign::Minus {
        out = -out;
    }
    out
}

fn to_rug_ratio(q: &BigRational) -> Rational {
    Rational::from((to_rug_int(q.numer()), to_rug_int(q.denom())))
}

macro_rules! down {
    ($p:expr, $v:expr) => {
        Float::with_val_round($p, $v, Round::Down).0
    };
}

macro_rules! up {
    ($p:expr, $v:expr) => {
        Float::with_val_round($p, $v, Round::Up).0
    };
}

fn nan_to(f: Float, fallback: Special) -> Float {
    if f.is_nan() {
        Float::with_val(f.prec(), fallback)
    } else {
        f
    }
}

impl Interval {
    fn from_parts(lo: Float, hi: Float) -> Self {
        let prec = lo.prec().max(hi.prec());
        let lo = nan_to(lo, Special::NegInfinity);
        let hi = nan_to(hi, Special::Infinity);
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo: Float::with_val_round(prec, &lo, Round::Down).0, hi: Float::with_val_round(prec, &hi, Round::Up).0 }
    }

    pub fn from_int(prec: u32, n: i64) -> Self {
        Interval { lo: down!(prec, n), hi: up!(prec, n) }
    }

    pub fn from_bigint(prec: u32, n: &BigInt) -> Self {
        let n = to_rug_int(n);
        Interval { lo: down!(prec, &n), hi: up!(prec, &n) }
    }

    pub fn from_ratio(prec: u32, q: &BigRational) -> Self {
        let q = to_rug_ratio(q);
        Interval { lo: down!(prec, &q), hi: up!(prec, &q) }
    }

    /// Interval with the given endpoints; panics if `lo > hi`.
    pub fn new(lo: Float, hi: Float) -> Self {
        assert!(lo <= hi, "inverted interval");
        Self::from_parts(lo, hi)
    }

    pub fn zero(prec: u32) -> Self {
        Self::from_int(prec, 0)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_int(prec, 1)
    }

    /// The whole extended real line.
    pub fn entire(prec: u32) -> Self {
        Interval {
            lo: Float::with_val(prec, Special::NegInfinity),
            hi: Float::with_val(prec, Special::Infinity),
        }
    }

    /// `ln x` for a positive rational.
    pub fn ln_ratio(prec: u32, q: &BigRational) -> Self {
        Self::from_ratio(prec, q).ln()
    }

    /// `ln n` for a positive integer.
    pub fn ln_int(prec: u32, n: &BigInt) -> Self {
        Self::from_bigint(prec, n).ln()
    }

    pub fn ln2(prec: u32) -> Self {
        let lo = Float::with_val_round(prec, rug::float::Constant::Log2, Round::Down).0;
        let hi = Float::with_val_round(prec, rug::float::Constant::Log2, Round::Up).0;
        Interval { lo, hi }
    }

    pub fn pi(prec: u32) -> Self {
        let lo = Float::with_val_round(prec, rug::float::Constant::Pi, Round::Down).0;
        let hi = Float::with_val_round(prec, rug::float::Constant::Pi, Round::Up).0;
        Interval { lo, hi }
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Interval { lo: down!(prec, &self.lo), hi: up!(prec, &self.hi) }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let p = self.prec().max(other.prec());
        Self::from_parts(down!(p, &self.lo + &other.lo), up!(p, &self.hi + &other.hi))
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        let p = self.prec().max(other.prec());
        Self::from_parts(down!(p, &self.lo - &other.hi), up!(p, &self.hi - &other.lo))
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: Float::with_val(self.lo.prec(), -&self.hi), hi: Float::with_val(self.hi.prec(), -&self.lo) }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let p = self.prec().max(other.prec());
        let ends = [(&self.lo, &other.lo), (&self.lo, &other.hi), (&self.hi, &other.lo), (&self.hi, &other.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in ends {
            // 0 * inf contributes 0 (the endpoint is a limit, not a member).
            let (l, h) = if (a.is_zero() && b.is_infinite()) || (b.is_zero() && a.is_infinite()) {
                (Float::new(p), Float::new(p))
            } else {
                (down!(p, a * b), up!(p, a * b))
            };
            lo = Some(match lo {
                Some(cur) if cur <= l => cur,
                _ => l,
            });
            hi = Some(match hi {
                Some(cur) if cur >= h => cur,
                _ => h,
            });
        }
        Self::from_parts(lo.unwrap(), hi.unwrap())
    }

    pub fn div(&self, other: &Interval) -> Interval {
        let p = self.prec().max(other.prec());
        if other.contains_zero() {
            return Interval::entire(p);
        }
        let ends = [(&self.lo, &other.lo), (&self.lo, &other.hi), (&self.hi, &other.lo), (&self.hi, &other.hi)];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in ends {
            let l = down!(p, a / b);
            let h = up!(p, a / b);
            lo = Some(match lo {
                Some(cur) if cur <= l => cur,
                _ => l,
            });
            hi = Some(match hi {
                Some(cur) if cur >= h => cur,
                _ => h,
            });
        }
        Self::from_parts(lo.unwrap(), hi.unwrap())
    }

    pub fn mul_int(&self, k: i64) -> Interval {
        self.mul(&Interval::from_int(self.prec(), k))
    }

    pub fn div_int(&self, k: i64) -> Interval {
        self.div(&Interval::from_int(self.prec(), k))
    }

    pub fn mul_ratio(&self, q: &BigRational) -> Interval {
        self.mul(&Interval::from_ratio(self.prec(), q))
    }

    /// Natural logarithm. Parts of the operand at or below zero map to -inf.
    pub fn ln(&self) -> Interval {
        let p = self.prec();
        let lo = if self.lo.is_sign_negative() || self.lo.is_zero() {
            Float::with_val(p, Special::NegInfinity)
        } else {
            Float::with_val_round(p, self.lo.ln_ref(), Round::Down).0
        };
        let hi = if self.hi.is_sign_negative() || self.hi.is_zero() {
            Float::with_val(p, Special::NegInfinity)
        } else {
            Float::with_val_round(p, self.hi.ln_ref(), Round::Up).0
        };
        Interval { lo, hi }
    }

    /// `log* x = max(ln x, 1)`.
    pub fn ln_star(&self) -> Interval {
        self.ln().max(&Interval::one(self.prec()))
    }

    pub fn exp(&self) -> Interval {
        let p = self.prec();
        Interval {
            lo: Float::with_val_round(p, self.lo.exp_ref(), Round::Down).0,
            hi: Float::with_val_round(p, self.hi.exp_ref(), Round::Up).0,
        }
    }

    pub fn sqrt(&self) -> Interval {
        let p = self.prec();
        let lo = if self.lo.is_sign_negative() {
            Float::new(p)
        } else {
            Float::with_val_round(p, self.lo.sqrt_ref(), Round::Down).0
        };
        let hi = Float::with_val_round(p, self.hi.sqrt_ref(), Round::Up).0;
        Interval { lo, hi }
    }

    pub fn max(&self, other: &Interval) -> Interval {
        let lo = if self.lo >= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi >= other.hi { self.hi.clone() } else { other.hi.clone() };
        Self::from_parts(lo, hi)
    }

    pub fn min(&self, other: &Interval) -> Interval {
        let lo = if self.lo <= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi <= other.hi { self.hi.clone() } else { other.hi.clone() };
        Self::from_parts(lo, hi)
    }

    /// `log+ x = max(ln x, 0)`.
    pub fn ln_plus(&self) -> Interval {
        self.ln().max(&Interval::zero(self.prec()))
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_sign_negative() {
            self.clone()
        } else if self.hi.is_sign_negative() || self.hi.is_zero() {
            self.neg()
        } else {
            let m = if -self.lo.clone() >= self.hi { -self.lo.clone() } else { self.hi.clone() };
            Self::from_parts(Float::new(self.prec()), m)
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    /// Whether `other` lies inside `self`.
    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_ratio(&self, q: &BigRational) -> bool {
        let q = to_rug_ratio(q);
        self.lo <= q && q <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Certain ordering: `Some(Less)` when every point of `self` is below
    /// every point of `other`, `Some(Greater)` for the reverse, `None` when
    /// the intervals overlap.
    pub fn certainly_cmp(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && other.lo == other.hi && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    /// Every point of `self` is at most every point of `other`.
    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, other: &Interval) -> Interval {
        let lo = if self.lo <= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi >= other.hi { self.hi.clone() } else { other.hi.clone() };
        Self::from_parts(lo, hi)
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> Float {
        up!(self.prec(), &self.hi - &self.lo)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64_round(Round::Down)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64_round(Round::Up)
    }

    pub fn mid_f64(&self) -> f64 {
        let m = Float::with_val(self.prec(), &self.lo + &self.hi) / 2u32;
        m.to_f64()
    }

    /// Decimal rendering of the lower endpoint, rounded toward -inf.
    pub fn lo_decimal(&self, digits: usize) -> String {
        decimal(&self.lo, digits, Round::Down)
    }

    /// Decimal rendering of the upper endpoint, rounded toward +inf.
    pub fn hi_decimal(&self, digits: usize) -> String {
        decimal(&self.hi, digits, Round::Up)
    }
}

/// Significant decimal digits that carry information at `prec` bits.
pub fn decimal_digits(prec: u32) -> usize {
    ((prec as f64) * std::f64::consts::LOG10_2).floor() as usize
}

/// Scientific rendering with explicit rounding direction, e.g. `1.2345e3`.
pub fn decimal(f: &Float, digits: usize, round: Round) -> String {
    if f.is_infinite() {
        return if f.is_sign_negative() { "-inf".into() } else { "inf".into() };
    }
    if f.is_zero() {
        return "0".into();
    }
    f.to_string_radix_round(10, Some(digits.max(2)), round)
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_decimal(20), self.hi_decimal(20))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_decimal(12), self.hi_decimal(12))
    }
}
