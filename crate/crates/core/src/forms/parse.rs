//! Grammar for polynomials and constants.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/')? unary)*        juxtaposition multiplies
//! unary   := ('+' | '-') unary | power
//! power   := atom ('^' '-'? integer)?
//! atom    := integer | variable | 'i' | 'sqrt' '(' '-'? integer ')' | '(' expr ')'
//! variable:= 'X' digits | 'X' | 'Y' | 'Z'   (lower case accepted)
//! ```
//!
//! `X`, `Y`, `Z` are aliases for `X1`, `X2`, `X3`. Division is only by
//! nonzero constants; negative exponents only on constants.

use super::poly::Poly;
use crate::error::{Error, Result};
use crate::nf::AlgNum;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Var(usize),
    I,
    Sqrt,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push((st, Tok::Int(s[st..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            let word = &s[st..i];
            let lower = word.to_ascii_lowercase();
            let tok = match lower.as_str() {
                "i" => Tok::I,
                "sqrt" => Tok::Sqrt,
                "x" => Tok::Var(0),
                "y" => Tok::Var(1),
                "z" => Tok::Var(2),
                w if w.starts_with('x') && w[1..].chars().all(|c| c.is_ascii_digit()) => {
                    let k: usize = w[1..].parse().map_err(|_| Error::Syntax { pos: st, msg: format!("bad variable `{word}`") })?;
                    if k == 0 {
                        return Err(Error::Syntax { pos: st, msg: "variables are numbered from X1".into() });
                    }
                    Tok::Var(k - 1)
                }
                _ => return Err(Error::Syntax { pos: st, msg: format!("unknown identifier `{word}`") }),
            };
            out.push((st, tok));
        } else {
            return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    nvars: usize,
    radicand: Option<i64>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn constant(&self, c: AlgNum) -> Result<Poly> {
        if let Some(d) = self.radicand {
            if !c.fits_field(d) {
                let field = if d == 0 { "Q".to_string() } else { format!("Q(sqrt({d}))") };
                return Err(Error::UnsupportedCoefficientField(format!("{c} is not in {field}")));
            }
        }
        Ok(Poly::constant(self.nvars, c))
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { acc.add(&rhs)? } else { acc.sub(&rhs)? };
        }
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Int(_) | Tok::Var(_) | Tok::I | Tok::Sqrt | Tok::Op('(')))
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.mul(&rhs)?;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let at = self.offset();
                    let rhs = self.unary()?;
                    let Some(c) = rhs.as_constant() else {
                        return Err(Error::Syntax { pos: at, msg: "division by a non-constant".into() });
                    };
                    if c.is_zero() {
                        return Err(Error::Syntax { pos: at, msg: "division by zero".into() });
                    }
                    acc = acc.scale(&c.recip())?;
                }
                _ if self.starts_atom() => {
                    let rhs = self.power()?;
                    acc = acc.mul(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let neg = if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.peek().cloned() {
            Some(Tok::Int(s)) => {
                self.pos += 1;
                let v: i64 = s.parse().map_err(|_| Error::Syntax { pos: self.offset(), msg: "integer too large".into() })?;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected an integer"),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Op('^')) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.offset();
        let k = self.integer()?;
        if k < 0 {
            let Some(c) = base.as_constant() else {
                return Err(Error::Syntax { pos: at, msg: "negative exponent on a non-constant".into() });
            };
            if c.is_zero() {
                return Err(Error::Syntax { pos: at, msg: "division by zero".into() });
            }
            return self.constant(c.pow(k));
        }
        if k > 4096 {
            return Err(Error::Syntax { pos: at, msg: "exponent too large".into() });
        }
        base.pow(k as u32)
    }

    fn atom(&mut self) -> Result<Poly> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(s)) => {
                self.pos += 1;
                let v: num_bigint::BigInt = s.parse().expect("digits");
                self.constant(AlgNum::from_int(v))
            }
            Some(Tok::Var(k)) => {
                self.pos += 1;
                if k >= self.nvars {
                    return Err(Error::Syntax { pos: at, msg: format!("variable X{} outside X1..X{}", k + 1, self.nvars) });
                }
                Ok(Poly::var(self.nvars, k))
            }
            Some(Tok::I) => {
                self.pos += 1;
                self.constant(AlgNum::sqrt_of(-1))
            }
            Some(Tok::Sqrt) => {
                self.pos += 1;
                self.expect('(')?;
                let k = self.integer()?;
                self.expect(')')?;
                self.constant(AlgNum::sqrt_of(k))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => self.err("expected a number, variable or `(`"),
        }
    }
}

fn run(text: &str, nvars: usize, radicand: Option<i64>) -> Result<Poly> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Syntax { pos: 0, msg: "empty input".into() });
    }
    let mut p = Parser { toks, pos: 0, end: text.len(), nvars, radicand };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

/// Highest variable index used (1-based), for inferring `m`.
pub fn max_variable(text: &str) -> Result<usize> {
    Ok(tokenize(text)?
        .into_iter()
        .filter_map(|(_, t)| if let Tok::Var(k) = t { Some(k + 1) } else { None })
        .max()
        .unwrap_or(0))
}

/// Parse a polynomial in `X1..Xm`. With `radicand = Some(D)` every
/// coefficient must lie in `ℚ(√D)` (`Some(0)` means ℚ).
pub fn parse_poly(text: &str, nvars: usize, radicand: Option<i64>) -> Result<Poly> {
    run(text, nvars, radicand)
}

/// Parse a constant such as `(1+sqrt(5))/2` or `-3/4`.
pub fn parse_constant(text: &str) -> Result<AlgNum> {
    let p = run(text, 0, None)?;
    p.as_constant().ok_or_else(|| Error::Syntax { pos: 0, msg: "expected a constant".into() })
}

/// Parse a constant that must lie in `ℚ(√D)` (`D = 0` for ℚ).
pub fn parse_element(text: &str, radicand: i64) -> Result<AlgNum> {
    let p = run(text, 0, Some(radicand))?;
    p.as_constant().ok_or_else(|| Error::Syntax { pos: 0, msg: "expected a constant".into() })
}
