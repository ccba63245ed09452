//! Multivariate polynomials with exact coefficients in ℚ or ℚ(√D).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::nf::AlgNum;

/// Sparse polynomial; monomials are exponent vectors of length `nvars`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, AlgNum>,
}

fn mismatch(_: Error) -> Error {
    Error::UnsupportedCoefficientField("coefficients from two different quadratic fields".into())
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: AlgNum) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// The variable `X_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, AlgNum::one());
        p
    }

    /// `Σ cᵢ Xᵢ`.
    pub fn linear(coeffs: &[AlgNum]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, AlgNum> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value of a polynomial without variables.
    pub fn as_constant(&self) -> Option<AlgNum> {
        match self.terms.len() {
            0 => Some(AlgNum::zero()),
            1 => self.terms.get(&vec![0; self.nvars]).cloned(),
            _ => None,
        }
    }

    fn insert_add(&mut self, e: Vec<u32>, c: AlgNum) -> Result<()> {
        let entry = self.terms.remove(&e);
        let sum = match entry {
            Some(old) => old.checked_add(&c).map_err(mismatch)?,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
        Ok(())
    }

    pub fn add(&self, o: &Poly) -> Result<Poly> {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.insert_add(e.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Result<Poly> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Result<Poly> {
        assert_eq!(self.nvars, o.nvars);
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_add(e, c1.checked_mul(c2).map_err(mismatch)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &AlgNum) -> Result<Poly> {
        self.mul(&Poly::constant(self.nvars, c.clone()))
    }

    pub fn pow(&self, k: u32) -> Result<Poly> {
        let mut acc = Poly::constant(self.nvars, AlgNum::one());
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Total degree of each monomial, if they all agree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[AlgNum]) -> Result<AlgNum> {
        assert_eq!(x.len(), self.nvars);
        let mut acc = AlgNum::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = t.checked_mul(&xi.pow(k as i64)).map_err(mismatch)?;
                }
            }
            acc = acc.checked_add(&t).map_err(mismatch)?;
        }
        Ok(acc)
    }

    /// Quadratic radicand used by the coefficients, 0 if all are rational.
    pub fn radicand(&self) -> i64 {
        self.terms.values().map(|c| c.radicand()).find(|&d| d != 0).unwrap_or(0)
    }

    /// Whether the coefficient-wise ratio `self / o` is a constant; returns it.
    pub fn ratio_to(&self, o: &Poly) -> Option<AlgNum> {
        if self.terms.len() != o.terms.len() || self.is_zero() {
            return None;
        }
        let mut ratio: Option<AlgNum> = None;
        for (e, c) in &self.terms {
            let d = o.terms.get(e)?;
            let r = c.checked_div(d).ok()?;
            match &ratio {
                None => ratio = Some(r),
                Some(q) if *q == r => {}
                _ => return None,
            }
        }
        ratio
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // Highest exponent of X1 first reads naturally for binary forms.
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("X{}", i + 1) } else { format!("X{}^{k}", i + 1) })
                .collect();
            let cs = c.to_string();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if c.is_rational() || !rest.contains(['+', '-']) => (true, rest.to_string()),
                _ => (false, cs.clone()),
            };
            let body = if body.contains(['+', '-']) && !body.starts_with('(') { format!("({body})") } else { body };
            let term = if mono.is_empty() {
                body
            } else if body == "1" {
                mono.join("*")
            } else {
                format!("{body}*{}", mono.join("*"))
            };
            if first {
                write!(f, "{}{term}", if neg { "-" } else { "" })?;
            } else {
                write!(f, " {} {term}", if neg { "-" } else { "+" })?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
