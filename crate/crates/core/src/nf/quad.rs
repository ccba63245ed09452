//! The maximal order of ℚ(√D): integral basis {1, ω}, norms, and the
//! fundamental unit by continued fractions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::alg::AlgNum;
use crate::error::{Error, Result};

/// Arithmetic data of a quadratic field `ℚ(√D)`.
///
/// `ω = (δ + √Δ)/2` with `δ = Δ mod 2`, so `ω² = δω + k` where
/// `k = (Δ − δ²)/4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadField {
    pub radicand: i64,
    pub disc: i64,
    pub delta: i64,
}

impl QuadField {
    pub fn new(radicand: i64) -> Self {
        let disc = if radicand.rem_euclid(4) == 1 { radicand } else { 4 * radicand };
        QuadField { radicand, disc, delta: disc.rem_euclid(2) }
    }

    /// `k` in `ω² = δω + k`.
    pub fn k(&self) -> i64 {
        (self.disc - self.delta * self.delta) / 4
    }

    pub fn is_real(&self) -> bool {
        self.radicand > 0
    }

    /// `√Δ = m·√D` with `m ∈ {1, 2}`.
    fn disc_root_mult(&self) -> i64 {
        if self.disc == self.radicand {
            1
        } else {
            2
        }
    }

    pub fn omega(&self) -> AlgNum {
        AlgNum::from_parts(self.delta.into(), self.disc_root_mult().into(), 2.into(), self.radicand)
    }

    /// `x + y·ω`.
    pub fn from_basis(&self, x: &BigInt, y: &BigInt) -> AlgNum {
        let m = self.disc_root_mult();
        AlgNum::from_parts(x * 2 + y * self.delta, y * m, 2.into(), self.radicand)
    }

    pub fn from_basis_ratio(&self, x: &BigRational, y: &BigRational) -> AlgNum {
        let two = BigRational::from_integer(2.into());
        let m = BigRational::from_integer(self.disc_root_mult().into());
        let a = (x * &two + y * BigRational::from_integer(self.delta.into())) / &two;
        let b = y * m / two;
        AlgNum::from_coords(&a, &b, self.radicand)
    }

    /// `(P + √Δ)/Q`.
    pub fn theta(&self, p: &BigInt, q: &BigInt) -> AlgNum {
        AlgNum::from_parts(p.clone(), self.disc_root_mult().into(), q.clone(), self.radicand)
    }

    /// Rational coordinates of `α` in the basis `{1, ω}`.
    pub fn basis_coords(&self, alpha: &AlgNum) -> (BigRational, BigRational) {
        assert!(alpha.fits_field(self.radicand), "element outside the field");
        // √D = (2ω − δ)/m
        let m = self.disc_root_mult();
        let (u, v) = alpha.coords();
        let mq = BigRational::from_integer(m.into());
        let y = &v * BigRational::from_integer(2.into()) / &mq;
        let x = &u - &v * BigRational::from_integer(self.delta.into()) / &mq;
        (x, y)
    }

    /// Smallest positive `L` with `L·α` integral, together with the integral
    /// coordinates of `L·α`.
    pub fn integral_numerator(&self, alpha: &AlgNum) -> (BigInt, BigInt, BigInt) {
        let (x, y) = self.basis_coords(alpha);
        let l = x.denom().lcm(y.denom());
        let xi = x.numer() * (&l / x.denom());
        let yi = y.numer() * (&l / y.denom());
        (l, xi, yi)
    }

    /// `N(x + yω) = x² + δxy + y²(δ² − Δ)/4`.
    pub fn basis_norm(&self, x: &BigInt, y: &BigInt) -> BigInt {
        x * x + x * y * self.delta - y * y * self.k()
    }

    /// Product in basis coordinates.
    pub fn basis_mul(&self, (x1, y1): (&BigInt, &BigInt), (x2, y2): (&BigInt, &BigInt)) -> (BigInt, BigInt) {
        let yy = y1 * y2;
        (x1 * x2 + &yy * self.k(), x1 * y2 + x2 * y1 + yy * self.delta)
    }

    /// Fundamental unit `ε₀ > 1` of a real quadratic field, from the
    /// continued fraction of `ω`: the first convergent `p/q` whose
    /// `p − qω` is a unit gives `ε₀ = ±((p − qδ) + qω)`.
    pub fn fundamental_unit(&self, budget: u64) -> Result<AlgNum> {
        self.unit_convergents(budget, true).map(|mut v| v.pop().expect("unit found").1)
    }

    /// Convergents `p/q` of `ω` up to and including the first unit, with the
    /// corresponding unit (`None` for non-unit convergents).
    pub fn unit_convergents(&self, budget: u64, stop_at_unit: bool) -> Result<Vec<((BigInt, BigInt), AlgNum)>> {
        assert!(self.is_real());
        let disc = BigInt::from(self.disc);
        let mut p_cf = BigInt::from(self.delta);
        let mut q_cf = BigInt::from(2);
        let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
        let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
        let mut out = Vec::new();
        for _ in 0..budget {
            let a = floor_quad(&p_cf, &q_cf, &disc);
            let p_next = &a * &p_cur + &p_prev;
            let q_next = &a * &q_cur + &q_prev;
            p_prev = std::mem::replace(&mut p_cur, p_next);
            q_prev = std::mem::replace(&mut q_cur, q_next);
            let n = self.basis_norm(&p_cur, &(-&q_cur));
            if n.abs().is_one() {
                let eps = self.from_basis(&(&p_cur - &q_cur * self.delta), &q_cur);
                let eps = if eps.real_sign(0) < 0 { -eps } else { eps };
                out.push(((p_cur.clone(), q_cur.clone()), eps));
                if stop_at_unit {
                    return Ok(out);
                }
            }
            let p_new = &a * &q_cf - &p_cf;
            let q_new = (&disc - &p_new * &p_new) / &q_cf;
            p_cf = p_new;
            q_cf = q_new;
        }
        if stop_at_unit {
            Err(Error::LimitExceeded(format!("no unit within {budget} continued-fraction steps")))
        } else {
            Ok(out)
        }
    }
}

/// `⌊(P + √Δ)/Q⌋` for a non-square `Δ > 0` and `Q ≠ 0`.
pub fn floor_quad(p: &BigInt, q: &BigInt, disc: &BigInt) -> BigInt {
    let s = disc.sqrt();
    if q.is_positive() {
        (p + &s).div_floor(q)
    } else {
        let num: BigInt = -p - &s - 1;
        num.div_floor(&-q)
    }
}
