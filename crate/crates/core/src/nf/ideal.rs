//! Prime ideals, valuations, and fractional ideals of quadratic orders.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::alg::AlgNum;
use super::quad::QuadField;
use crate::arith::{kronecker_prime, quadratic_roots_mod_p, valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Rational,
    Split,
    Inert,
    Ramified,
    /// Supplied by an asserted profile: only the norm is known.
    Asserted,
}

/// A nonzero prime ideal of ℚ or of a quadratic order.
///
/// For split and ramified primes `𝔭 = (p, ω − root)`; inert primes are `(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub p: u64,
    pub norm: u64,
    pub splitting: Splitting,
    pub root: Option<u64>,
    /// Label used in reports, e.g. `(5, i-2)`.
    pub label: String,
}

impl Serialize for PrimeIdeal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PrimeIdeal", 4)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("norm", &self.norm)?;
        st.serialize_field("splitting", &self.splitting)?;
        st.end()
    }
}

impl PrimeIdeal {
    pub fn rational(p: u64) -> Self {
        PrimeIdeal { p, norm: p, splitting: Splitting::Rational, root: None, label: format!("({p})") }
    }

    /// Placeholder ideal of an asserted profile, known only by its norm.
    pub fn asserted(norm: u64) -> Self {
        let p = crate::arith::factor_u64(norm)[0].0;
        PrimeIdeal { p, norm, splitting: Splitting::Asserted, root: None, label: format!("[N={norm}]") }
    }

    /// Ramification index `e(𝔭 | p)`.
    pub fn ramification(&self) -> u32 {
        if self.splitting == Splitting::Ramified {
            2
        } else {
            1
        }
    }

    /// Local degree `[K_𝔭 : ℚ_p] = e·f`.
    pub fn local_degree(&self) -> u32 {
        match self.splitting {
            Splitting::Rational | Splitting::Split => 1,
            Splitting::Inert | Splitting::Ramified => 2,
            Splitting::Asserted => crate::arith::factor_u64(self.norm)[0].1,
        }
    }

    /// `ord_𝔭(α)` for nonzero `α`.
    pub fn ord(&self, field: Option<&QuadField>, alpha: &AlgNum) -> i64 {
        assert!(!alpha.is_zero(), "ord of zero");
        let Some(f) = field else {
            let q = alpha.to_rational().expect("irrational element over ℚ");
            return valuation(q.numer(), self.p) as i64 - valuation(q.denom(), self.p) as i64;
        };
        let (l, x, y) = f.integral_numerator(alpha);
        let e = self.ramification() as i64;
        self.ord_integral(f, &x, &y) - e * valuation(&l, self.p) as i64
    }

    /// `ord_𝔭(x + yω)` for a nonzero algebraic integer.
    pub fn ord_integral(&self, f: &QuadField, x: &BigInt, y: &BigInt) -> i64 {
        let p = BigInt::from(self.p);
        match self.splitting {
            Splitting::Rational | Splitting::Asserted => unreachable!("ord needs a modeled prime ideal"),
            Splitting::Ramified => valuation(&f.basis_norm(x, y), self.p) as i64,
            Splitting::Inert | Splitting::Split => {
                let vx = if x.is_zero() { u32::MAX } else { valuation(x, self.p) };
                let vy = if y.is_zero() { u32::MAX } else { valuation(y, self.p) };
                let k = vx.min(vy);
                if self.splitting == Splitting::Inert {
                    return k as i64;
                }
                let pk = num_traits::pow(p.clone(), k as usize);
                let (x1, y1) = (x / &pk, y / &pk);
                let r = BigInt::from(self.root.expect("split prime root"));
                let in_ideal = (&x1 + &y1 * &r).mod_floor(&p).is_zero();
                let extra = if in_ideal { valuation(&f.basis_norm(&x1, &y1), self.p) as i64 } else { 0 };
                k as i64 + extra
            }
        }
    }

    /// The ideal as a lattice.
    pub fn to_ideal(&self, f: &QuadField) -> Ideal {
        match self.splitting {
            Splitting::Inert => Ideal::from_parts(BigRational::from_integer(self.p.into()), BigInt::one(), BigInt::zero()),
            _ => {
                let r = BigInt::from(self.root.expect("root"));
                let p = BigInt::from(self.p);
                Ideal::primitive(f, p.clone(), (-r).mod_floor(&p))
            }
        }
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Prime ideals above `p` in ascending root order.
pub fn split_prime_quadratic(f: &QuadField, p: u64) -> Vec<PrimeIdeal> {
    let disc = BigInt::from(f.disc);
    let kron = kronecker_prime(&disc, p);
    let omega = f.omega();
    let label = |r: u64| format!("({p}, {})", &omega - &AlgNum::from_int(r));
    match kron {
        -1 => vec![PrimeIdeal { p, norm: p * p, splitting: Splitting::Inert, root: None, label: format!("({p})") }],
        0 => {
            let roots = quadratic_roots_mod_p(f.delta, &BigInt::from(f.k()), p);
            let r = roots[0];
            vec![PrimeIdeal { p, norm: p, splitting: Splitting::Ramified, root: Some(r), label: label(r) }]
        }
        _ => quadratic_roots_mod_p(f.delta, &BigInt::from(f.k()), p)
            .into_iter()
            .map(|r| PrimeIdeal { p, norm: p, splitting: Splitting::Split, root: Some(r), label: label(r) })
            .collect(),
    }
}

/// Fractional ideal `scale·(aℤ + (b + ω)ℤ)` with `a > 0`, `0 ≤ b < a` and
/// `a | N(b + ω)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    pub scale: BigRational,
    pub a: BigInt,
    pub b: BigInt,
}

/// Hermite normal form of a rank-2 sublattice of ℤ² spanned by `gens`:
/// returns `(A, B, C)` with basis `(A, 0), (B, C)`, `A, C > 0`, `0 ≤ B < A`.
fn hnf2(gens: Vec<(BigInt, BigInt)>) -> (BigInt, BigInt, BigInt) {
    let mut vs: Vec<(BigInt, BigInt)> = gens.into_iter().filter(|(x, y)| !(x.is_zero() && y.is_zero())).collect();
    // Euclid on the second coordinate.
    loop {
        let nz: Vec<usize> = (0..vs.len()).filter(|&i| !vs[i].1.is_zero()).collect();
        if nz.len() <= 1 {
            break;
        }
        let piv = *nz.iter().min_by_key(|&&i| vs[i].1.abs()).unwrap();
        let (px, py) = vs[piv].clone();
        for &i in &nz {
            if i != piv {
                let q = vs[i].1.div_floor(&py);
                vs[i].0 -= &q * &px;
                vs[i].1 -= &q * &py;
            }
        }
    }
    let piv = vs.iter().position(|v| !v.1.is_zero()).expect("rank-2 lattice");
    let (mut bx, mut c) = vs[piv].clone();
    if c.is_negative() {
        bx = -bx;
        c = -c;
    }
    let a = vs
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != piv)
        .fold(BigInt::zero(), |g, (_, v)| g.gcd(&v.0));
    assert!(!a.is_zero(), "rank-2 lattice");
    (a.clone(), bx.mod_floor(&a), c)
}

impl Ideal {
    pub fn from_parts(scale: BigRational, a: BigInt, b: BigInt) -> Self {
        let b = b.mod_floor(&a);
        Ideal { scale, a, b }
    }

    pub fn unit() -> Self {
        Self::from_parts(BigRational::one(), BigInt::one(), BigInt::zero())
    }

    /// `aℤ + (b + ω)ℤ`.
    pub fn primitive(f: &QuadField, a: BigInt, b: BigInt) -> Self {
        debug_assert!(f.basis_norm(&b, &BigInt::one()).mod_floor(&a).is_zero());
        Self::from_parts(BigRational::one(), a, b)
    }

    /// Principal ideal `(α)`.
    pub fn principal(f: &QuadField, alpha: &AlgNum) -> Self {
        let (l, x, y) = f.integral_numerator(alpha);
        // (x + yω)·{1, ω}
        let w = (BigInt::zero(), BigInt::one());
        let g1 = (x.clone(), y.clone());
        let g2 = f.basis_mul((&x, &y), (&w.0, &w.1));
        let mut id = Self::from_gens(vec![g1, g2]);
        id.scale /= BigRational::from_integer(l);
        id
    }

    fn from_gens(gens: Vec<(BigInt, BigInt)>) -> Self {
        let (a, b, c) = hnf2(gens);
        debug_assert!(a.mod_floor(&c).is_zero() && b.mod_floor(&c).is_zero());
        Self::from_parts(BigRational::from_integer(c.clone()), &a / &c, &b / &c)
    }

    pub fn norm(&self) -> BigRational {
        &self.scale * &self.scale * BigRational::from_integer(self.a.clone())
    }

    pub fn mul(&self, other: &Ideal, f: &QuadField) -> Ideal {
        let one = BigInt::one();
        let g1 = [(self.a.clone(), BigInt::zero()), (self.b.clone(), one.clone())];
        let g2 = [(other.a.clone(), BigInt::zero()), (other.b.clone(), one)];
        let mut gens = Vec::with_capacity(4);
        for u in &g1 {
            for v in &g2 {
                gens.push(f.basis_mul((&u.0, &u.1), (&v.0, &v.1)));
            }
        }
        let mut id = Self::from_gens(gens);
        id.scale *= &self.scale * &other.scale;
        id
    }

    pub fn conj(&self, f: &QuadField) -> Ideal {
        Self::from_parts(self.scale.clone(), self.a.clone(), -&self.b - f.delta)
    }

    pub fn inverse(&self, f: &QuadField) -> Ideal {
        let mut c = self.conj(f);
        c.scale = BigRational::one() / (&self.scale * BigRational::from_integer(self.a.clone()));
        c
    }

    pub fn pow(&self, e: i64, f: &QuadField) -> Ideal {
        let base = if e < 0 { self.inverse(f) } else { self.clone() };
        let mut acc = Ideal::unit();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base, f);
        }
        acc
    }

    /// Whether `α ∈ self`.
    pub fn contains(&self, f: &QuadField, alpha: &AlgNum) -> bool {
        // α/scale = u·a + v·(b + ω) with u, v ∈ ℤ
        let beta = alpha / &AlgNum::from_ratio(&self.scale);
        let (x, y) = f.basis_coords(&beta);
        if !y.is_integer() {
            return false;
        }
        let rest = x - &y * BigRational::from_integer(self.b.clone());
        (rest / BigRational::from_integer(self.a.clone())).is_integer()
    }

    /// `θ = (P + √Δ)/Q` and `μ` with `self = μ·(ℤ + θℤ)`.
    pub fn theta_form(&self, f: &QuadField) -> (BigInt, BigInt, AlgNum) {
        let p = &self.b * 2 + f.delta;
        let q = &self.a * 2;
        let mu = AlgNum::from_ratio(&(&self.scale * BigRational::from_integer(self.a.clone())));
        (p, q, mu)
    }

    /// Primitive ideal `(Q/2)ℤ + ((P − δ)/2 + ω)ℤ` of a form with `2Q | Δ − P²`.
    pub fn from_theta(f: &QuadField, p: &BigInt, q: &BigInt) -> Ideal {
        let a = q.abs() / 2;
        let b = (p - f.delta) / 2;
        Self::from_parts(BigRational::one(), a, b)
    }

    pub fn is_integral(&self) -> bool {
        // scale·a and scale·(b + ω) integral ⇔ scale ∈ ℤ
        self.scale.is_integer()
    }

    pub fn norm_u64(&self) -> Option<u64> {
        let n = self.norm();
        n.is_integer().then(|| n.to_integer().to_u64()).flatten()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;

    #[test]
    fn gaussian_splitting() {
        let f = QuadField::new(-1);
        let five = split_prime_quadratic(&f, 5);
        assert_eq!(five.len(), 2);
        assert!(five.iter().all(|p| p.norm == 5 && p.splitting == Splitting::Split));
        let three = split_prime_quadratic(&f, 3);
        assert_eq!(three.len(), 1);
        assert_eq!(three[0].norm, 9);
        let two = split_prime_quadratic(&f, 2);
        assert_eq!(two[0].splitting, Splitting::Ramified);
    }

    #[test]
    fn norms_multiply_to_p_squared() {
        for d in [-23i64, -5, -1, 2, 5, 10, 15, 79] {
            let f = QuadField::new(d);
            for p in primes_up_to(60) {
                let ideals = split_prime_quadratic(&f, p);
                let prod: u64 = ideals.iter().map(|i| i.norm.pow(i.ramification())).product();
                assert_eq!(prod, p * p, "D={d} p={p}");
                // (p) = ∏ 𝔭^e as lattices
                let mut acc = Ideal::unit();
                for i in &ideals {
                    acc = acc.mul(&i.to_ideal(&f).pow(i.ramification() as i64, &f), &f);
                }
                assert_eq!(acc, Ideal::principal(&f, &AlgNum::from_int(p as i64)), "D={d} p={p}");
            }
        }
    }

    #[test]
    fn valuations_match_ideal_membership() {
        let f = QuadField::new(-5);
        let alphas = ["2+sqrt(-5)", "6", "(1+sqrt(-5))/3", "3-sqrt(-5)", "9/2"];
        for p in [2u64, 3, 5, 7] {
            for pi in split_prime_quadratic(&f, p) {
                let ideal = pi.to_ideal(&f);
                for s in alphas {
                    let y: AlgNum = crate::forms::parse::parse_constant(s).unwrap();
                    // clear denominators, then compare with the membership test
                    let (l, _, _) = f.integral_numerator(&y);
                    let x = &y * &AlgNum::from_int(l.clone());
                    let v = pi.ord(Some(&f), &x);
                    let shift = pi.ramification() as i64 * valuation(&l, p) as i64;
                    assert_eq!(pi.ord(Some(&f), &y), v - shift);
                    // x ∈ 𝔭^v and x ∉ 𝔭^(v+1)
                    assert!(ideal.pow(v, &f).contains(&f, &x), "{s} {pi} {v}");
                    assert!(!ideal.pow(v + 1, &f).contains(&f, &x), "{s} {pi} {v}");
                }
            }
        }
    }

    #[test]
    fn norm_of_principal_ideal() {
        let f = QuadField::new(10);
        let x = AlgNum::from_parts(7.into(), 3.into(), 2.into(), 10);
        let id = Ideal::principal(&f, &x);
        assert_eq!(id.norm(), x.norm().abs());
        let inv = id.inverse(&f);
        assert_eq!(id.mul(&inv, &f), Ideal::unit());
    }
}
