//! Linear forms and the factorization of decomposable forms.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;

use super::poly::Poly;
use crate::arith::divisors;
use crate::error::{Error, Result};
use crate::nf::AlgNum;

/// `ℓ = Σ aᵢ Xᵢ`, not identically zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    coeffs: Vec<AlgNum>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<AlgNum>) -> Result<Self> {
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::Domain("the zero linear form".into()));
        }
        Ok(LinearForm { coeffs })
    }

    pub fn coeffs(&self) -> &[AlgNum] {
        &self.coeffs
    }

    pub fn m(&self) -> usize {
        self.coeffs.len()
    }

    pub fn to_poly(&self) -> Poly {
        Poly::linear(&self.coeffs)
    }

    pub fn eval(&self, x: &[AlgNum]) -> AlgNum {
        self.coeffs.iter().zip(x).fold(AlgNum::zero(), |acc, (a, b)| &acc + &(a * b))
    }

    pub fn scaled(&self, c: &AlgNum) -> LinearForm {
        LinearForm { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// `μ` with `self = μ·other`, if the two are proportional.
    pub fn ratio_to(&self, other: &LinearForm) -> Option<AlgNum> {
        let mut mu: Option<AlgNum> = None;
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            match (a.is_zero(), b.is_zero()) {
                (true, true) => {}
                (false, false) => {
                    let r = a / b;
                    match &mu {
                        None => mu = Some(r),
                        Some(q) if *q == r => {}
                        _ => return None,
                    }
                }
                _ => return None,
            }
        }
        mu
    }

    /// A multiple with algebraic-integer coefficients: `(σ, σ·self)`.
    pub fn integral(&self) -> (AlgNum, LinearForm) {
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.c()));
        let s = AlgNum::from_int(den);
        (s.clone(), self.scaled(&s))
    }

    /// Number of nonzero coefficients.
    pub fn support(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    fn sort_key(&self) -> (usize, usize, Vec<AlgNum>) {
        let first = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
        (self.support(), first, self.coeffs.clone())
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for LinearForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LinearForm", 2)?;
        st.serialize_field("form", &self.to_string())?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}

/// `F = scalar·∏ factors`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub scalar: AlgNum,
    pub factors: Vec<LinearForm>,
}

/// Check `F = c·∏ factors` by expansion and return `c`.
pub fn verify_factors(form: &Poly, factors: Vec<LinearForm>) -> Result<Factorization> {
    let m = form.nvars();
    if factors.is_empty() {
        return Err(Error::VerificationFailed("empty factor list".into()));
    }
    if let Some(bad) = factors.iter().find(|l| l.m() != m) {
        return Err(Error::VerificationFailed(format!("factor {bad} has {} coefficients, expected {m}", bad.m())));
    }
    let mut prod = Poly::constant(m, AlgNum::one());
    for l in &factors {
        prod = prod.mul(&l.to_poly())?;
    }
    let scalar = form
        .ratio_to(&prod)
        .ok_or_else(|| Error::VerificationFailed("the supplied factors do not multiply back to the form".into()))?;
    Ok(Factorization { scalar, factors })
}

/// Factor `F` into linear forms over `ℚ(√radicand)` (`radicand = 0` for ℚ).
///
/// Binary and unary forms are factored automatically; forms in three or more
/// variables need `supplied` factors, which are verified.
pub fn factorize(form: &Poly, radicand: i64, supplied: Option<Vec<LinearForm>>) -> Result<Factorization> {
    if form.is_zero() {
        return Err(Error::Domain("the zero form".into()));
    }
    if form.homogeneous_degree().is_none() {
        return Err(Error::NotHomogeneous);
    }
    if let Some(fs) = supplied {
        if let Some(bad) = fs.iter().flat_map(|l| l.coeffs()).find(|c| !c.fits_field(radicand)) {
            return Err(Error::UnsupportedCoefficientField(bad.to_string()));
        }
        return verify_factors(form, fs);
    }
    match form.nvars() {
        1 => {
            let n = form.homogeneous_degree().unwrap();
            verify_factors(form, vec![LinearForm::new(vec![AlgNum::one()])?; n as usize])
        }
        2 => factor_binary(form, radicand),
        _ => Err(Error::FactorsRequired),
    }
}

fn factor_binary(form: &Poly, radicand: i64) -> Result<Factorization> {
    let n = form.homogeneous_degree().unwrap() as usize;
    // g(x) = F(x, 1), ascending coefficients
    let mut g = vec![AlgNum::zero(); n + 1];
    for (e, c) in form.terms() {
        g[e[0] as usize] = c.clone();
    }
    while g.last().is_some_and(|c| c.is_zero()) {
        g.pop();
    }
    let x2_mult = n + 1 - g.len();
    let roots = roots_in_field(g, radicand)?;
    let mut factors: Vec<LinearForm> = roots.iter().map(|r| LinearForm { coeffs: vec![AlgNum::one(), -r] }).collect();
    factors.extend(std::iter::repeat(LinearForm { coeffs: vec![AlgNum::zero(), AlgNum::one()] }).take(x2_mult));
    factors.sort_by_key(|l| l.sort_key());
    verify_factors(form, factors)
}

fn eval_uni(g: &[AlgNum], x: &AlgNum) -> AlgNum {
    g.iter().rev().fold(AlgNum::zero(), |acc, c| &(&acc * x) + c)
}

/// Divide by `x − r`; `None` if the remainder is nonzero.
fn deflate(g: &[AlgNum], r: &AlgNum) -> Option<Vec<AlgNum>> {
    let deg = g.len() - 1;
    let mut q = vec![AlgNum::zero(); deg];
    let mut carry = AlgNum::zero();
    for i in (0..=deg).rev() {
        let v = &g[i] + &(&carry * r);
        if i == 0 {
            return v.is_zero().then_some(q);
        }
        q[i - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

/// All roots of `g` in the field, with multiplicity; `DoesNotSplit` if some
/// root lies outside it.
fn roots_in_field(mut g: Vec<AlgNum>, radicand: i64) -> Result<Vec<AlgNum>> {
    let mut roots = Vec::new();
    loop {
        match g.len() {
            0 | 1 => return Ok(roots),
            2 => {
                roots.push(-&(&g[0] / &g[1]));
                return Ok(roots);
            }
            3 => {
                let (c, b, a) = (&g[0], &g[1], &g[2]);
                let disc = &(b * b) - &(&(a * c) * &AlgNum::from_int(4));
                let s = disc.sqrt_in_field(radicand).ok_or(Error::DoesNotSplit)?;
                let two_a = a * &AlgNum::from_int(2);
                roots.push(&(&-b + &s) / &two_a);
                roots.push(&(&-b - &s) / &two_a);
                return Ok(roots);
            }
            _ => {
                let r = find_root(&g, radicand).ok_or(Error::DoesNotSplit)?;
                while g.len() > 1 {
                    match deflate(&g, &r) {
                        Some(q) => {
                            roots.push(r.clone());
                            g = q;
                        }
                        None => break,
                    }
                }
            }
        }
    }
}

fn find_root(g: &[AlgNum], radicand: i64) -> Option<AlgNum> {
    if g[0].is_zero() {
        return Some(AlgNum::zero());
    }
    if g.iter().all(|c| c.is_rational()) {
        if let Some(r) = rational_root(g) {
            return Some(r);
        }
        if radicand == 0 {
            return None;
        }
    }
    numeric_root(g, radicand)
}

/// Rational root search on a polynomial with rational coefficients.
fn rational_root(g: &[AlgNum]) -> Option<AlgNum> {
    let qs: Vec<BigRational> = g.iter().map(|c| c.to_rational().unwrap()).collect();
    let den = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    let (a0, an) = (&ints[0], ints.last().unwrap());
    let ps = divisors(a0);
    let qd = divisors(an);
    for q in &qd {
        for p in &ps {
            for sign in [1, -1] {
                let cand = AlgNum::from_ratio(&BigRational::new(p * sign, q.clone()));
                if eval_uni(g, &cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// Candidate roots from floating-point approximations, each verified exactly.
///
/// With integral coefficients and leading coefficient `a`, `a·β` is an
/// algebraic integer `(u + v√D)/2`, and `u, v` are read off the embeddings.
fn numeric_root(g: &[AlgNum], radicand: i64) -> Option<AlgNum> {
    let den = g.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.c()));
    let s = AlgNum::from_int(den);
    let gi: Vec<AlgNum> = g.iter().map(|c| c * &s).collect();
    let lead = gi.last().unwrap().clone();
    let rd = (radicand.unsigned_abs() as f64).sqrt();
    let embed = |x: &AlgNum, sign: f64| -> Complex64 {
        let (a, b) = x.coords();
        let (a, b) = (a.to_f64().unwrap_or(f64::NAN), b.to_f64().unwrap_or(f64::NAN));
        if radicand < 0 {
            Complex64::new(a, sign * b * rd)
        } else {
            Complex64::new(a + sign * b * rd, 0.0)
        }
    };
    let build = |u: f64, v: f64| -> Option<AlgNum> {
        if !u.is_finite() || !v.is_finite() || u.abs() > 1e15 || v.abs() > 1e15 {
            return None;
        }
        let (u, v) = (BigInt::from(u.round() as i64), BigInt::from(v.round() as i64));
        let b = AlgNum::from_parts(u, v, 2.into(), radicand);
        let cand = &b / &lead;
        eval_uni(&gi, &cand).is_zero().then_some(cand)
    };
    let roots1 = complex_roots(&gi.iter().map(|c| embed(c, 1.0)).collect::<Vec<_>>());
    let a1 = embed(&lead, 1.0);
    if radicand <= 0 {
        for z in roots1 {
            let w = z * a1;
            let v = if radicand == 0 { 0.0 } else { 2.0 * w.im / rd };
            if let Some(r) = build(2.0 * w.re, v) {
                return Some(r);
            }
        }
        return None;
    }
    let roots2 = complex_roots(&gi.iter().map(|c| embed(c, -1.0)).collect::<Vec<_>>());
    let a2 = embed(&lead, -1.0);
    let real = |z: &Complex64| z.im.abs() <= 1e-6 * (1.0 + z.re.abs());
    for z1 in roots1.iter().filter(|z| real(z)) {
        for z2 in roots2.iter().filter(|z| real(z)) {
            let (w1, w2) = ((z1 * a1).re, (z2 * a2).re);
            if let Some(r) = build(w1 + w2, (w1 - w2) / rd) {
                return Some(r);
            }
        }
    }
    None
}

/// Durand–Kerner iteration; ascending coefficients, nonzero leading term.
fn complex_roots(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let a: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let radius = 1.0 + a[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32 + 1) * radius).collect();
    let eval = |x: Complex64| a.iter().rev().fold(Complex64::zero(), |acc, &ci| acc * x + ci);
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::one();
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-12, 0.0);
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

impl Factorization {
    /// `(Σ multiplicities)` = degree.
    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn is_rational(&self) -> bool {
        self.scalar.is_rational() && self.factors.iter().all(|l| l.coeffs().iter().all(|c| c.is_rational()))
    }
}
