//! Polynomials in the two mode indices `m` and `n`.
//!
//! Bracket rules are written as text such as `"(m - n)"` or `"c/12*(m^3 - m)"`
//! style coefficients (the central factor is kept separately). The parser
//! accepts integers, `m`, `n`, `+ - * / ^` and parentheses; division is only
//! allowed by a nonzero constant.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_scalar, qi, Scalar};

/// `Σ coeff · m^i n^j`, keyed by `(i, j)`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct IndexPoly {
    terms: BTreeMap<(u32, u32), Scalar>,
}

impl IndexPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(s: Scalar) -> Self {
        let mut p = Self::default();
        if !s.is_zero() {
            p.terms.insert((0, 0), s);
        }
        p
    }

    pub fn m() -> Self {
        let mut p = Self::default();
        p.terms.insert((1, 0), Scalar::one());
        p
    }

    pub fn n() -> Self {
        let mut p = Self::default();
        p.terms.insert((0, 1), Scalar::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, m: i64, n: i64) -> Scalar {
        let (m, n) = (qi(m), qi(n));
        let mut acc = Scalar::zero();
        for (&(i, j), a) in &self.terms {
            acc += a * pow(&m, i) * pow(&n, j);
        }
        acc
    }

    /// Evaluate where the result is known to be an integer, e.g. a mode index.
    pub fn eval_int(&self, m: i64, n: i64) -> i64 {
        let v = self.eval(m, n);
        assert!(v.is_integer(), "index expression did not evaluate to an integer");
        i64::try_from(v.to_integer()).expect("mode index overflow")
    }

    /// Swap the roles of `m` and `n`.
    pub fn swapped(&self) -> Self {
        IndexPoly {
            terms: self.terms.iter().map(|(&(i, j), a)| ((j, i), a.clone())).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, a) in &rhs.terms {
            let e = out.terms.entry(*k).or_insert_with(Scalar::zero);
            *e += a;
            if e.is_zero() {
                out.terms.remove(k);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        IndexPoly {
            terms: self.terms.iter().map(|(k, a)| (*k, -a)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = IndexPoly::zero();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &rhs.terms {
                out = out.add(&IndexPoly {
                    terms: [((i1 + i2, j1 + j2), a * b)].into_iter().collect(),
                });
            }
        }
        out
    }

    fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(out)
    }
}

fn pow(x: &Scalar, e: u32) -> Scalar {
    num_traits::pow(x.clone(), e as usize)
}

impl fmt::Debug for IndexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IndexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (&(i, j), a)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " {} ", if a.is_negative() { "-" } else { "+" })?;
            } else if a.is_negative() {
                write!(f, "-")?;
            }
            let mag = a.abs();
            let mut factors = Vec::new();
            if !mag.is_one() || (i == 0 && j == 0) {
                factors.push(format_scalar(&mag));
            }
            for (var, e) in [("m", i), ("n", j)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            line: 1,
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<IndexPoly> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { acc.add(&rhs) } else { acc.add(&rhs.neg()) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IndexPoly> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            if op == b'*' {
                acc = acc.mul(&rhs);
            } else {
                let d = rhs
                    .as_constant()
                    .filter(|d| !d.is_zero())
                    .ok_or_else(|| self.error("division by a non-constant or zero"))?;
                acc = acc.mul(&IndexPoly::constant(d.recip()));
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<IndexPoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<IndexPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| self.error("expected a non-negative integer exponent"))?;
            let mut out = IndexPoly::constant(Scalar::one());
            for _ in 0..e {
                out = out.mul(&base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<IndexPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'm') => {
                self.pos += 1;
                Ok(IndexPoly::m())
            }
            Some(b'n') => {
                self.pos += 1;
                Ok(IndexPoly::n())
            }
            Some(d) if d.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                let v: num_bigint::BigInt = text.parse().map_err(|_| self.error("bad integer"))?;
                Ok(IndexPoly::constant(Scalar::from_integer(v)))
            }
            _ => Err(self.error("expected a number, `m`, `n` or `(`")),
        }
    }
}
