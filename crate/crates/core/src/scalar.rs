//! Exact coefficients.
//!
//! Every number in the crate is an exact rational. Computations that carry the
//! central charge as a free parameter use [`CPoly`], a polynomial in `c` with
//! rational coefficients; everything else uses [`Scalar`] directly. Both
//! implement [`Coeff`], which is what the Fock-space kernel is generic over.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Scalar = BigRational;

/// Shorthand for the rational `n/d`.
pub fn q(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for the integer `n` as a rational.
pub fn qi(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Parse `"n"`, `"-n"` or `"n/d"`.
pub fn parse_scalar(s: &str) -> Result<Scalar, Error> {
    let t = s.trim();
    let bad = || Error::Parse {
        line: 0,
        column: 0,
        message: format!("not an exact rational: {s:?}"),
    };
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::new(n, d))
        }
        None => Ok(Scalar::from_integer(BigInt::from_str(t).map_err(|_| bad())?)),
    }
}

/// Render a rational as `"n"` or `"n/d"`.
pub fn format_scalar(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Ring of coefficients used by vectors and operators.
pub trait Coeff: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_scalar(s: Scalar) -> Self;
    /// The value of the formal central element `c` in this ring, if any.
    fn central_symbol() -> Option<Self>;
    fn add_assign(&mut self, rhs: &Self);
    fn sub_assign(&mut self, rhs: &Self);
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, s: &Scalar) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_scalar(qi(n))
    }
    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
    fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_scalar(s: Scalar) -> Self {
        s
    }
    fn central_symbol() -> Option<Self> {
        None
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn sub_assign(&mut self, rhs: &Self) {
        *self -= rhs;
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, s: &Scalar) -> Self {
        self * s
    }
}

/// Polynomial in the central charge `c` with exact rational coefficients.
///
/// `coeffs[k]` multiplies `c^k`; trailing zeros are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CPoly {
    coeffs: Vec<Scalar>,
}

impl CPoly {
    pub fn constant(s: Scalar) -> Self {
        let mut p = CPoly { coeffs: vec![s] };
        p.trim();
        p
    }

    /// The indeterminate `c`.
    pub fn c() -> Self {
        CPoly {
            coeffs: vec![Zero::zero(), One::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        let mut p = CPoly { coeffs };
        p.trim();
        p
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, c: &Scalar) -> Scalar {
        let mut acc = <Scalar as Zero>::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc * c + a;
        }
        acc
    }

    /// True when `(c - root)` divides the polynomial.
    pub fn vanishes_at(&self, root: &Scalar) -> bool {
        Zero::is_zero(&self.eval(root))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate().rev() {
            if Zero::is_zero(a) {
                continue;
            }
            let sign = if a.is_negative() { "-" } else { "+" };
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = a.abs();
            let unit = mag.is_one() && k > 0;
            if !unit {
                write!(f, "{}", format_scalar(&mag))?;
            }
            match k {
                0 => {}
                1 if unit => write!(f, "c")?,
                1 => write!(f, "*c")?,
                _ if unit => write!(f, "c^{k}")?,
                _ => write!(f, "*c^{k}")?,
            }
        }
        Ok(())
    }
}

impl Coeff for CPoly {
    fn zero() -> Self {
        CPoly::default()
    }
    fn one() -> Self {
        CPoly::constant(One::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn from_scalar(s: Scalar) -> Self {
        CPoly::constant(s)
    }
    fn central_symbol() -> Option<Self> {
        Some(CPoly::c())
    }
    fn add_assign(&mut self, rhs: &Self) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Zero::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        self.trim();
    }
    fn sub_assign(&mut self, rhs: &Self) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Zero::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        self.trim();
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return CPoly::default();
        }
        let mut out = vec![<Scalar as Zero>::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly::from_coeffs(out)
    }
    fn neg(&self) -> Self {
        CPoly {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
    fn scale(&self, s: &Scalar) -> Self {
        CPoly::from_coeffs(self.coeffs.iter().map(|a| a * s).collect())
    }
}

/// Serde adapters that write rationals as exact `"n/d"` strings.
pub mod exact {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_scalar, parse_scalar, Scalar};

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        parse_scalar(&s).map_err(serde::de::Error::custom)
    }

    /// For `Vec<(i64, Scalar)>`.
    pub mod indexed {
        use serde::ser::SerializeSeq;
        use serde::Serializer;

        use super::super::{format_scalar, Scalar};

        pub fn serialize<S: Serializer>(xs: &[(i64, Scalar)], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for (i, x) in xs {
                seq.serialize_element(&(i, format_scalar(x)))?;
            }
            seq.end()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "7", "-3/4", "26"] {
            assert_eq!(format_scalar(&parse_scalar(s).unwrap()), s);
        }
        assert_eq!(parse_scalar("6/8").unwrap(), q(3, 4));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn cpoly_arithmetic() {
        let c = CPoly::c();
        let p = c.sub(&CPoly::from_int(26)); // c - 26
        let sq = p.mul(&p);
        assert_eq!(sq.degree(), Some(2));
        assert!(sq.vanishes_at(&qi(26)));
        assert!(!sq.vanishes_at(&qi(25)));
        assert_eq!(sq.eval(&qi(27)), qi(1));
        assert!(p.sub(&p).is_zero());
        assert_eq!(format!("{}", p), "c - 26");
        assert_eq!(format!("{}", c.scale(&q(1, 12))), "1/12*c");
    }
}
