//! Exact elements of ℚ and of quadratic fields ℚ(√D).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{exact_sqrt, squarefree_decomposition};
use crate::error::{Error, Result};
use crate::interval::Interval;

/// `(a + b·√D)/c` in lowest terms with `c > 0`.
///
/// Rational values always carry `b = 0` and `radicand = 0`, so a rational
/// number has the same representation whichever field it was built in.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgNum {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    radicand: i64,
}

fn common_radicand(x: i64, y: i64) -> Result<i64> {
    match (x, y) {
        (0, y) => Ok(y),
        (x, 0) => Ok(x),
        (x, y) if x == y => Ok(x),
        _ => Err(Error::FieldMismatch),
    }
}

impl AlgNum {
    /// Build and normalize `(a + b√D)/c`. `D` must be squarefree and not 0 or 1
    /// whenever `b ≠ 0`.
    pub fn from_parts(a: BigInt, b: BigInt, c: BigInt, radicand: i64) -> Self {
        assert!(!c.is_zero(), "zero denominator");
        let (mut a, mut b, mut c) = (a, b, c);
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        let radicand = if b.is_zero() { 0 } else { radicand };
        debug_assert!(b.is_zero() || (radicand != 0 && radicand != 1));
        AlgNum { a, b, c, radicand }
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        AlgNum { a: n.into(), b: BigInt::zero(), c: BigInt::one(), radicand: 0 }
    }

    pub fn from_ratio(q: &BigRational) -> Self {
        Self::from_parts(q.numer().clone(), BigInt::zero(), q.denom().clone(), 0)
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_parts(n.into(), BigInt::zero(), d.into(), 0)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `√k` for any integer `k`, simplified: `√12 = 2√3`, `√-1 = i`, `√9 = 3`.
    pub fn sqrt_of(k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        let (core, root) = squarefree_decomposition(&BigInt::from(k));
        if core.is_one() {
            return Self::from_int(root);
        }
        let core = core.to_i64().expect("squarefree part fits");
        Self::from_parts(BigInt::zero(), root, BigInt::one(), core)
    }

    /// The generator `√D` of a quadratic field.
    pub fn sqrt_radicand(radicand: i64) -> Self {
        Self::from_parts(BigInt::zero(), BigInt::one(), BigInt::one(), radicand)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// Squarefree `D` for irrational elements, 0 for rationals.
    pub fn radicand(&self) -> i64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one() && self.c.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| BigRational::new(self.a.clone(), self.c.clone()))
    }

    /// Whether this element may be combined with elements of `ℚ(√radicand)`.
    pub fn fits_field(&self, radicand: i64) -> bool {
        self.radicand == 0 || self.radicand == radicand
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        let d = common_radicand(self.radicand, o.radicand)?;
        Ok(Self::from_parts(
            &self.a * &o.c + &o.a * &self.c,
            &self.b * &o.c + &o.b * &self.c,
            &self.c * &o.c,
            d,
        ))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        let d = common_radicand(self.radicand, o.radicand)?;
        Ok(Self::from_parts(
            &self.a * &o.a + &self.b * &o.b * d,
            &self.a * &o.b + &o.a * &self.b,
            &self.c * &o.c,
            d,
        ))
    }

    pub fn conj(&self) -> Self {
        AlgNum { a: self.a.clone(), b: -&self.b, c: self.c.clone(), radicand: self.radicand }
    }

    /// Norm from a quadratic field to ℚ, `(a² − b²D)/c²` (so `x²` for rational `x`).
    pub fn norm(&self) -> BigRational {
        let n = &self.a * &self.a - &self.b * &self.b * self.radicand;
        BigRational::new(n, &self.c * &self.c)
    }

    /// Norm from a field of the given degree (1 or 2) containing `self`.
    pub fn norm_in(&self, degree: u32) -> BigRational {
        if degree == 1 {
            self.to_rational().expect("irrational element of ℚ")
        } else {
            self.norm()
        }
    }

    pub fn trace(&self) -> BigRational {
        BigRational::new(&self.a * 2, self.c.clone())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        let n = &self.a * &self.a - &self.b * &self.b * self.radicand;
        Self::from_parts(&self.a * &self.c, -&self.b * &self.c, n, self.radicand)
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        self.checked_mul(&o.recip())
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Primitive integer minimal polynomial, leading coefficient first and
    /// positive.
    pub fn min_poly(&self) -> Vec<BigInt> {
        if self.is_rational() {
            return vec![self.c.clone(), -&self.a];
        }
        let c2 = &self.c * &self.c;
        let c1 = -BigInt::from(2) * &self.a * &self.c;
        let c0 = &self.a * &self.a - &self.b * &self.b * self.radicand;
        let g = c2.gcd(&c1).gcd(&c0);
        vec![c2 / &g, c1 / &g, c0 / &g]
    }

    /// Degree over ℚ (1 or 2).
    pub fn degree(&self) -> u32 {
        if self.is_rational() {
            1
        } else {
            2
        }
    }

    /// Whether the element is an algebraic integer.
    pub fn is_integral(&self) -> bool {
        self.min_poly()[0].is_one()
    }

    /// Exact sign of `a + s·b√D` (s = ±1) for real fields or rationals.
    fn sign_of(a: &BigInt, b: &BigInt, radicand: i64) -> i32 {
        let sa = a.signum().to_i32().unwrap();
        let sb = b.signum().to_i32().unwrap();
        if sb == 0 || sa == sb {
            return if sa != 0 { sa } else { sb };
        }
        if sa == 0 {
            return sb;
        }
        let lhs = a * a;
        let rhs = b * b * radicand;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }

    /// Exact sign of the real embedding `√D ↦ sign·√D` (real fields and ℚ).
    pub fn real_sign(&self, embedding: usize) -> i32 {
        assert!(self.radicand >= 0, "real_sign in an imaginary field");
        let b = if embedding == 0 { self.b.clone() } else { -&self.b };
        Self::sign_of(&self.a, &b, self.radicand)
    }

    /// Exact comparison `self > other` in the given real embedding.
    pub fn real_gt(&self, other: &Self, embedding: usize) -> bool {
        (self - other).real_sign(embedding) > 0
    }

    /// Enclosure of the real embedding `√D ↦ +√D` (embedding 0) or `−√D`
    /// (embedding 1). The cancelling conjugate is computed as norm / other so
    /// the enclosure stays tight.
    pub fn real_embedding(&self, prec: u32, embedding: usize) -> Interval {
        assert!(self.radicand >= 0, "real embedding of an imaginary element");
        if self.is_rational() {
            return Interval::from_ratio(prec, &BigRational::new(self.a.clone(), self.c.clone()));
        }
        let b = if embedding == 0 { self.b.clone() } else { -&self.b };
        let root = Interval::from_int(prec, self.radicand).sqrt();
        let cancels = self.a.signum() == -b.signum() && !self.a.is_zero();
        let c = Interval::from_bigint(prec, &self.c);
        if !cancels {
            let num = Interval::from_bigint(prec, &self.a).add(&Interval::from_bigint(prec, &b).mul(&root));
            return num.div(&c);
        }
        // (a + b√D)/c = (a² − b²D) / (c·(a − b√D))
        let n = &self.a * &self.a - &b * &b * self.radicand;
        let other = Interval::from_bigint(prec, &self.a).sub(&Interval::from_bigint(prec, &b).mul(&root));
        Interval::from_bigint(prec, &n).div(&c.mul(&other))
    }

    /// `|σ(α)|` at the archimedean place with index `embedding`; for imaginary
    /// fields there is one place and the modulus is `√N(α)`.
    pub fn abs_embedding(&self, prec: u32, embedding: usize) -> Interval {
        if self.radicand < 0 {
            Interval::from_ratio(prec, &self.norm()).sqrt()
        } else {
            self.real_embedding(prec, embedding).abs()
        }
    }

    /// Parse the textual grammar used throughout the toolkit, e.g.
    /// `(1+sqrt(5))/2`, `3/4`, `2-i`.
    pub fn parse(text: &str) -> Result<Self> {
        crate::forms::parse::parse_constant(text)
    }

    /// Coordinates `(x, y)` with `self = x + y·√D`.
    pub fn coords(&self) -> (BigRational, BigRational) {
        (BigRational::new(self.a.clone(), self.c.clone()), BigRational::new(self.b.clone(), self.c.clone()))
    }

    pub fn from_coords(x: &BigRational, y: &BigRational, radicand: i64) -> Self {
        let c = x.denom().lcm(y.denom());
        let a = x.numer() * (&c / x.denom());
        let b = y.numer() * (&c / y.denom());
        Self::from_parts(a, b, c, radicand)
    }

    /// Square root inside the field generated by `self` and `radicand`,
    /// if one exists.
    pub fn sqrt_in_field(&self, radicand: i64) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(q) = self.to_rational() {
            let n = q.numer() * q.denom();
            if let Some(r) = exact_sqrt(&n) {
                return Some(Self::from_parts(r, BigInt::zero(), q.denom().clone(), 0));
            }
            if radicand == 0 {
                return None;
            }
            // q = D·w² for rational w  ⇒ √q = w√D
            let qd = &q / BigRational::from_integer(radicand.into());
            let n = qd.numer() * qd.denom();
            return exact_sqrt(&n).map(|r| Self::from_parts(BigInt::zero(), r, qd.denom().clone(), radicand));
        }
        // (x + y√D)² = x² + Dy² + 2xy√D with 2xy = v, x² + Dy² = u.
        let d = self.radicand;
        let (u, v) = self.coords();
        let nrm = &u * &u - &v * &v * BigRational::from_integer(d.into());
        let nn = nrm.numer() * nrm.denom();
        let s = exact_sqrt(&nn)?;
        let s = BigRational::new(s, nrm.denom().clone());
        for sgn in [1, -1] {
            let x2 = (&u + &s * BigRational::from_integer(sgn.into())) / BigRational::from_integer(2.into());
            if x2.is_negative() {
                continue;
            }
            let prod = x2.numer() * x2.denom();
            if let Some(r) = exact_sqrt(&prod) {
                let x = BigRational::new(r, x2.denom().clone());
                if x.is_zero() {
                    continue;
                }
                let y = &v / (&x * BigRational::from_integer(2.into()));
                let cand = Self::from_coords(&x, &y, d);
                if &(&cand * &cand) == self {
                    return Some(cand);
                }
            }
        }
        None
    }
}

impl Default for AlgNum {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for AlgNum {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigInt> for AlgNum {
    fn from(n: BigInt) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for AlgNum {
    fn from(q: BigRational) -> Self {
        Self::from_ratio(&q)
    }
}

impl Add for &AlgNum {
    type Output = AlgNum;
    fn add(self, o: &AlgNum) -> AlgNum {
        self.checked_add(o).expect("field mismatch")
    }
}

impl Sub for &AlgNum {
    type Output = AlgNum;
    fn sub(self, o: &AlgNum) -> AlgNum {
        self.checked_add(&-o).expect("field mismatch")
    }
}

impl Mul for &AlgNum {
    type Output = AlgNum;
    fn mul(self, o: &AlgNum) -> AlgNum {
        self.checked_mul(o).expect("field mismatch")
    }
}

impl Div for &AlgNum {
    type Output = AlgNum;
    fn div(self, o: &AlgNum) -> AlgNum {
        self.checked_div(o).expect("field mismatch or division by zero")
    }
}

impl Neg for &AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        AlgNum { a: -&self.a, b: -&self.b, c: self.c.clone(), radicand: self.radicand }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for AlgNum {
            type Output = AlgNum;
            fn $m(self, o: AlgNum) -> AlgNum {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        -&self
    }
}

impl fmt::Display for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return if self.c.is_one() { write!(f, "{}", self.a) } else { write!(f, "{}/{}", self.a, self.c) };
        }
        let root = if self.radicand == -1 { "i".to_string() } else { format!("sqrt({})", self.radicand) };
        let irr = if self.b.is_one() {
            root
        } else if self.b == -BigInt::one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", self.b)
        };
        let num = if self.a.is_zero() {
            irr
        } else if irr.starts_with('-') {
            format!("{}{irr}", self.a)
        } else {
            format!("{}+{irr}", self.a)
        };
        if self.c.is_one() {
            write!(f, "{num}")
        } else if self.a.is_zero() && !num.contains('+') && !num[1..].contains('-') {
            write!(f, "{num}/{}", self.c)
        } else {
            write!(f, "({num})/{}", self.c)
        }
    }
}

impl fmt::Debug for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for AlgNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> AlgNum {
        AlgNum::from_parts(1.into(), 1.into(), 2.into(), 5)
    }

    #[test]
    fn golden_ratio_identities() {
        let g = golden();
        assert_eq!(&g * &g, &g + &AlgNum::one());
        assert_eq!(g.norm(), BigRational::from_integer((-1).into()));
        assert_eq!(g.min_poly(), vec![1.into(), (-1).into(), (-1).into()]);
        assert!(g.is_integral());
    }

    #[test]
    fn canonical_form_is_unique() {
        let x = AlgNum::from_parts(2.into(), 2.into(), 4.into(), 5);
        assert_eq!(x, golden());
        let y = AlgNum::from_parts((-3).into(), 0.into(), (-6).into(), 7);
        assert_eq!(y, AlgNum::frac(1, 2));
        assert_eq!(y.radicand(), 0);
    }

    #[test]
    fn reciprocal_and_powers() {
        let x = AlgNum::from_parts(3.into(), (-2).into(), 5.into(), -7);
        assert!((&x * &x.recip()).is_one());
        assert_eq!(x.pow(3), &(&x * &x) * &x);
        assert_eq!(x.pow(-2), (&x * &x).recip());
    }

    #[test]
    fn sqrt_simplifies() {
        assert_eq!(AlgNum::sqrt_of(12), AlgNum::from_parts(0.into(), 2.into(), 1.into(), 3));
        assert_eq!(AlgNum::sqrt_of(-4), AlgNum::from_parts(0.into(), 2.into(), 1.into(), -1));
        assert_eq!(AlgNum::sqrt_of(49), AlgNum::from_int(7));
    }

    #[test]
    fn mismatched_fields_error() {
        let a = AlgNum::sqrt_radicand(2);
        let b = AlgNum::sqrt_radicand(3);
        assert_eq!(a.checked_add(&b), Err(Error::FieldMismatch));
    }

    #[test]
    fn embeddings_avoid_cancellation() {
        // 1 + √2 and its tiny conjugate-power (1 − √2)^40
        let u = AlgNum::from_parts((-1).into(), 1.into(), 1.into(), 2).pow(40);
        let small = u.real_embedding(128, 0);
        assert!(small.lo_f64() > 0.0);
        let expect = (2f64.sqrt() - 1.0).powi(40);
        assert!((small.mid_f64() / expect - 1.0).abs() < 1e-12);
        assert!(small.width() < 1e-50);
    }

    #[test]
    fn display_round_trip_shapes() {
        assert_eq!(golden().to_string(), "(1+sqrt(5))/2");
        assert_eq!(AlgNum::from_parts(1.into(), (-1).into(), 1.into(), -1).to_string(), "1-i");
        assert_eq!(AlgNum::from_parts(0.into(), (-3).into(), 2.into(), 2).to_string(), "-3*sqrt(2)/2");
        assert_eq!(AlgNum::frac(-3, 4).to_string(), "-3/4");
    }

    #[test]
    fn square_roots_in_field() {
        let x = AlgNum::from_parts(3.into(), 2.into(), 1.into(), 2); // (1+√2)²
        let r = x.sqrt_in_field(2).unwrap();
        assert_eq!(&r * &r, x);
        assert_eq!(AlgNum::from_int(2).sqrt_in_field(2), Some(AlgNum::sqrt_radicand(2)));
        assert_eq!(AlgNum::from_int(2).sqrt_in_field(0), None);
        assert_eq!(AlgNum::frac(9, 4).sqrt_in_field(0), Some(AlgNum::frac(3, 2)));
    }

    #[test]
    fn real_sign_exact() {
        let x = AlgNum::from_parts((-7).into(), 5.into(), 1.into(), 2); // 5√2 − 7 ≈ 0.0711
        assert_eq!(x.real_sign(0), 1);
        assert_eq!(x.real_sign(1), -1);
    }
}
