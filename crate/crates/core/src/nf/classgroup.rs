//! Ideal classes of quadratic orders via reduction of `θ = (P + √Δ)/Q`.
//!
//! An ideal `μ·(ℤ + θℤ)` is tracked together with `μ`, so that reduction also
//! produces a generator whenever the class is trivial. Imaginary fields use
//! the usual fundamental domain for `SL₂(ℤ)`; real fields use the cycle of
//! reduced continued-fraction complete quotients (equivalence under `GL₂(ℤ)`,
//! i.e. classes in the wide sense).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::alg::AlgNum;
use super::ideal::{Ideal, PrimeIdeal, Splitting};
use super::quad::{floor_quad, QuadField};
use crate::arith::primes_up_to;
use crate::error::{Error, Result};
use crate::interval::Interval;

type Key = (BigInt, BigInt);

pub struct ClassGroup {
    f: QuadField,
    budget: u64,
    disc: BigInt,
    isqrt: BigInt,
    /// Reduced `(P, Q)` of the unit class with `𝒪 = factor·(ℤ + θℤ)`.
    principal: HashMap<Key, AlgNum>,
    principal_key: Key,
    unit: Option<AlgNum>,
}

/// Subgroup of the class group generated by a list of ideals.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub order: u64,
    /// Row basis (Hermite form) of the exponent vectors `e` with `∏ 𝔞ᵢ^{eᵢ}`
    /// principal.
    pub relations: Vec<Vec<i64>>,
}

impl ClassGroup {
    pub fn new(f: &QuadField, unit: Option<AlgNum>, budget: u64) -> Result<Self> {
        let disc = BigInt::from(f.disc);
        let isqrt = if f.disc > 0 { disc.sqrt() } else { BigInt::zero() };
        let mut cg = ClassGroup {
            f: f.clone(),
            budget,
            disc,
            isqrt,
            principal: HashMap::new(),
            principal_key: (BigInt::zero(), BigInt::zero()),
            unit,
        };
        let (p, q, mu) = Ideal::unit().theta_form(f);
        let (p, q, mu) = cg.reduce(p, q, Some(mu))?;
        let mu = mu.unwrap();
        if f.is_real() {
            let cycle = cg.cycle(&p, &q, Some(mu))?;
            cg.principal_key = cycle.iter().map(|(k, _)| k.clone()).min().unwrap();
            cg.principal = cycle.into_iter().map(|(k, m)| (k, m.unwrap())).collect();
        } else {
            cg.principal_key = (p.clone(), q.clone());
            cg.principal.insert((p, q), mu);
        }
        Ok(cg)
    }

    pub fn field(&self) -> &QuadField {
        &self.f
    }

    fn theta(&self, p: &BigInt, q: &BigInt) -> AlgNum {
        self.f.theta(p, q)
    }

    fn over_budget(&self, what: &str) -> Error {
        Error::LimitExceeded(format!("{what} exceeded {} steps", self.budget))
    }

    fn is_reduced_real(&self, p: &BigInt, q: &BigInt) -> bool {
        let s = &self.isqrt;
        q.is_positive() && p <= s && &(p + q) > s && q <= &(p + s)
    }

    /// One continued-fraction step `θ ↦ 1/(θ − ⌊θ⌋)`.
    fn cf_step(&self, p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
        let a = floor_quad(p, q, &self.disc);
        let p2 = &a * q - p;
        let q2 = (&self.disc - &p2 * &p2) / q;
        (p2, q2)
    }

    /// Reduce `θ`; with `mu` supplied, returns `μ'` such that
    /// `μ·(ℤ + θℤ) = μ'·(ℤ + θ'ℤ)`.
    pub fn reduce(&self, p: BigInt, q: BigInt, mu: Option<AlgNum>) -> Result<(BigInt, BigInt, Option<AlgNum>)> {
        let (mut p, mut q, mut mu) = (p, q, mu);
        if self.f.is_real() {
            let mut steps = 0;
            while !self.is_reduced_real(&p, &q) {
                steps += 1;
                if steps > self.budget {
                    return Err(self.over_budget("reduction"));
                }
                let (p2, q2) = self.cf_step(&p, &q);
                if let Some(m) = mu.as_mut() {
                    *m = &*m / &self.theta(&p2, &q2);
                }
                p = p2;
                q = q2;
            }
            return Ok((p, q, mu));
        }
        if q.is_negative() {
            q = -q;
        }
        let mut steps = 0;
        loop {
            steps += 1;
            if steps > self.budget {
                return Err(self.over_budget("reduction"));
            }
            let half = &q / 2;
            p = BigInt::mod_floor(&(&p + &half), &q) - &half;
            let q2 = (&p * &p - &self.disc) / &q;
            if q2 < q || (q2 == q && p.is_positive()) {
                if let Some(m) = mu.as_mut() {
                    *m = &*m * &self.theta(&p, &q);
                }
                p = -p;
                q = q2;
                continue;
            }
            return Ok((p, q, mu));
        }
    }

    /// The cycle of reduced forms through a reduced `(P, Q)`, with factors
    /// relative to the starting lattice.
    fn cycle(&self, p: &BigInt, q: &BigInt, mu: Option<AlgNum>) -> Result<Vec<(Key, Option<AlgNum>)>> {
        let start = (p.clone(), q.clone());
        let mut out = vec![(start.clone(), mu.clone())];
        let (mut cp, mut cq, mut cm) = (p.clone(), q.clone(), mu);
        for _ in 0..self.budget {
            let (p2, q2) = self.cf_step(&cp, &cq);
            if let Some(m) = cm.as_mut() {
                *m = &*m / &self.theta(&p2, &q2);
            }
            if (p2.clone(), q2.clone()) == start {
                return Ok(out);
            }
            out.push(((p2.clone(), q2.clone()), cm.clone()));
            cp = p2;
            cq = q2;
        }
        Err(self.over_budget("cycle traversal"))
    }

    /// Canonical key of the class of an ideal.
    pub fn class_key(&self, ideal: &Ideal) -> Result<Key> {
        let (p, q, _) = ideal.theta_form(&self.f);
        let (p, q, _) = self.reduce(p, q, None)?;
        if self.f.is_real() {
            Ok(self.cycle(&p, &q, None)?.into_iter().map(|(k, _)| k).min().unwrap())
        } else {
            Ok((p, q))
        }
    }

    pub fn principal_key(&self) -> &Key {
        &self.principal_key
    }

    /// Small primitive integral ideal in the class with the given key.
    pub fn representative(&self, key: &Key) -> Ideal {
        Ideal::from_theta(&self.f, &key.0, &key.1)
    }

    /// A generator of `ideal` when it is principal.
    pub fn principal_generator(&self, ideal: &Ideal) -> Result<Option<AlgNum>> {
        let (p, q, mu) = ideal.theta_form(&self.f);
        let (p, q, mu) = self.reduce(p, q, Some(mu))?;
        let mu = mu.unwrap();
        let gen = if self.f.is_real() {
            let mut found = None;
            for (k, m) in self.cycle(&p, &q, Some(mu))? {
                if let Some(fo) = self.principal.get(&k) {
                    found = Some(&m.unwrap() / fo);
                    break;
                }
            }
            found
        } else {
            self.principal.get(&(p, q)).map(|fo| &mu / fo)
        };
        let Some(g) = gen else { return Ok(None) };
        let g = self.balance(g);
        if Ideal::principal(&self.f, &g) != *ideal {
            return Err(Error::VerificationFailed(format!("generator {g} does not generate the ideal")));
        }
        Ok(Some(g))
    }

    /// Multiply by the power of the fundamental unit that brings the two
    /// archimedean absolute values closest together.
    pub fn balance(&self, g: AlgNum) -> AlgNum {
        let Some(eps) = &self.unit else { return g };
        let prec = 64;
        let l1 = g.abs_embedding(prec, 0).ln().mid_f64();
        let l2 = g.abs_embedding(prec, 1).ln().mid_f64();
        let r = eps.real_embedding(prec, 0).ln().mid_f64();
        let k = ((l2 - l1) / (2.0 * r)).round();
        if !k.is_finite() || k == 0.0 {
            return g;
        }
        &g * &eps.pow(k as i64)
    }

    /// Class number: reduced forms for imaginary fields, closure of the
    /// classes of primes below the Minkowski bound `√Δ/2` for real fields.
    pub fn class_number(&self) -> Result<u64> {
        if !self.f.is_real() {
            return count_reduced_forms(self.f.disc, self.budget);
        }
        let bound = (self.f.disc as f64).sqrt() / 2.0;
        let mut gens = Vec::new();
        for p in primes_up_to(bound.floor() as u64) {
            for pi in super::ideal::split_prime_quadratic(&self.f, p) {
                if pi.splitting != Splitting::Inert {
                    gens.push(pi.to_ideal(&self.f));
                }
            }
        }
        Ok(self.closure(&gens, false)?.0)
    }

    /// BFS over the classes reachable from 1 by multiplying with `gens`.
    /// Returns the order and (optionally) the Schreier relations.
    fn closure(&self, gens: &[Ideal], relations: bool) -> Result<(u64, Vec<Vec<i64>>)> {
        let t = gens.len();
        let start = self.principal_key.clone();
        let mut index: HashMap<Key, usize> = HashMap::new();
        let mut classes: Vec<(Ideal, Vec<i64>)> = vec![(Ideal::unit(), vec![0; t])];
        index.insert(start, 0);
        let mut rels = Vec::new();
        let mut head = 0;
        while head < classes.len() {
            if classes.len() as u64 > self.budget {
                return Err(self.over_budget("class enumeration"));
            }
            let (rep, word) = classes[head].clone();
            for (i, g) in gens.iter().enumerate() {
                let prod = rep.mul(g, &self.f);
                let key = self.class_key(&prod)?;
                let mut w = word.clone();
                w[i] += 1;
                match index.get(&key) {
                    Some(&j) => {
                        if relations {
                            let r: Vec<i64> = w.iter().zip(&classes[j].1).map(|(a, b)| a - b).collect();
                            if r.iter().any(|&x| x != 0) {
                                rels.push(r);
                            }
                        }
                    }
                    None => {
                        index.insert(key.clone(), classes.len());
                        classes.push((self.representative(&key), w));
                    }
                }
            }
            head += 1;
        }
        Ok((classes.len() as u64, rels))
    }

    /// Subgroup generated by `gens`, with a basis of its relation lattice.
    pub fn subgroup(&self, gens: &[Ideal]) -> Result<Subgroup> {
        let (order, rels) = self.closure(gens, true)?;
        let t = gens.len();
        let mut relations = hnf_rows(rels, t);
        if relations.len() != t {
            // t = 0, or the relations did not reach full rank (cannot happen
            // for a finite group, kept as a guard)
            relations.truncate(t);
        }
        let det: i64 = (0..relations.len()).map(|i| relations[i][i]).product();
        if t > 0 && det.unsigned_abs() != order {
            return Err(Error::VerificationFailed(format!("relation lattice index {det} differs from subgroup order {order}")));
        }
        Ok(Subgroup { order, relations })
    }
}

/// Number of reduced positive definite forms of discriminant `disc < 0`.
pub fn count_reduced_forms(disc: i64, budget: u64) -> Result<u64> {
    assert!(disc < 0);
    let n = -disc;
    let mut count = 0u64;
    let mut steps = 0u64;
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            steps += 1;
            if steps > budget.saturating_mul(64) {
                return Err(Error::LimitExceeded("reduced form count".into()));
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                count += 1;
            }
        }
        a += 1;
    }
    Ok(count)
}

/// Row Hermite normal form over ℤ; returns the nonzero rows, upper
/// triangular with positive pivots.
pub fn hnf_rows(rows: Vec<Vec<i64>>, n: usize) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i128>> = rows.into_iter().map(|r| r.into_iter().map(|x| x as i128).collect()).collect();
    let mut out: Vec<Vec<i128>> = Vec::new();
    for col in 0..n {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            let pr = rows[piv].clone();
            for &i in &nz {
                if i != piv {
                    let q = rows[i][col].div_euclid(pr[col]);
                    for (x, y) in rows[i].iter_mut().zip(&pr) {
                        *x -= q * y;
                    }
                }
            }
        }
        if let Some(i) = rows.iter().position(|r| r[col] != 0) {
            let mut r = rows.remove(i);
            if r[col] < 0 {
                r.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(r);
        }
        rows.retain(|r| r.iter().any(|&x| x != 0));
    }
    // Reduce entries above pivots.
    for i in 0..out.len() {
        let col = out[i].iter().position(|&x| x != 0).unwrap();
        for j in 0..i {
            let q = out[j][col].div_euclid(out[i][col]);
            if q != 0 {
                let ri = out[i].clone();
                for (x, y) in out[j].iter_mut().zip(&ri) {
                    *x -= q * y;
                }
            }
        }
    }
    out.into_iter().map(|r| r.into_iter().map(|x| x as i64).collect()).collect()
}

/// Fundamental S-units beyond the ordinary units, one per basis vector of
/// the relation lattice of the classes of `primes`, together with the index
/// `[ℤᵗ : Λ]`.
pub fn s_unit_basis(cg: &ClassGroup, primes: &[PrimeIdeal]) -> Result<(u64, Vec<AlgNum>)> {
    let f = cg.field();
    let ideals: Vec<Ideal> = primes.iter().map(|p| p.to_ideal(f)).collect();
    let sub = cg.subgroup(&ideals)?;
    let mut units = Vec::with_capacity(primes.len());
    for row in &sub.relations {
        let mut j = Ideal::unit();
        for (e, id) in row.iter().zip(&ideals) {
            if *e != 0 {
                j = j.mul(&id.pow(*e, f), f);
            }
        }
        let g = cg
            .principal_generator(&j)?
            .ok_or_else(|| Error::VerificationFailed("relation ideal is not principal".into()))?;
        units.push(g);
    }
    Ok((sub.order, units))
}

/// `|det|` of an `n × n` interval matrix by Laplace expansion (n ≤ 8).
pub fn interval_det(m: &[Vec<Interval>], prec: u32) -> Interval {
    let n = m.len();
    if n == 0 {
        return Interval::one(prec);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Interval::zero(prec);
    for j in 0..n {
        let minor: Vec<Vec<Interval>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = m[0][j].mul(&interval_det(&minor, prec));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}
