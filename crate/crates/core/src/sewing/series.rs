use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::{format_scalar, qi, Scalar};

/// A variable of the coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// `A_j^(0)`, coordinate at infinity of the left factor.
    A0(u16),
    /// `A_j^(1)`, coordinate at zero of the left factor.
    A1(u16),
    B0(u16),
    B1(u16),
    /// `a_0`, a unit; may carry negative exponents.
    UnitA,
    /// `b_0`, a unit; may carry negative exponents.
    UnitB,
    /// Bookkeeping parameter for numeric points: each entry carries one `t`.
    T,
    /// A tangent direction. `ε² = 0` and `ε` does not count toward the degree.
    Eps,
}

impl Var {
    /// Contribution to the truncation degree.
    pub fn degree(self) -> i32 {
        match self {
            Var::A0(_) | Var::A1(_) | Var::B0(_) | Var::B1(_) | Var::T => 1,
            _ => 0,
        }
    }

    /// Weight: `-j` on the `(0)` coordinates, `j` on the `(1)` coordinates.
    pub fn weight(self) -> i64 {
        match self {
            Var::A0(j) | Var::B0(j) => -(j as i64),
            Var::A1(j) | Var::B1(j) => j as i64,
            _ => 0,
        }
    }

    pub fn is_unit(self) -> bool {
        matches!(self, Var::UnitA | Var::UnitB)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::A0(j) => write!(f, "A0_{j}"),
            Var::A1(j) => write!(f, "A1_{j}"),
            Var::B0(j) => write!(f, "B0_{j}"),
            Var::B1(j) => write!(f, "B1_{j}"),
            Var::UnitA => write!(f, "a0"),
            Var::UnitB => write!(f, "b0"),
            Var::T => write!(f, "t"),
            Var::Eps => write!(f, "eps"),
        }
    }
}

/// A monomial: variables with nonzero exponents, sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(SmallVec<[(Var, i32); 4]>);

impl Mono {
    pub fn one() -> Self {
        Mono(SmallVec::new())
    }

    pub fn var(v: Var, e: i32) -> Self {
        let mut m = Mono::one();
        if e != 0 {
            m.0.push((v, e));
        }
        m
    }

    pub fn factors(&self) -> &[(Var, i32)] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|(v, e)| v.degree() * e).sum()
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().map(|(v, e)| v.weight() * *e as i64).sum()
    }

    /// `(degree, ε-exponent)`; the solver proceeds through these grades.
    pub fn grade(&self) -> (i32, i32) {
        (self.degree(), self.exponent(Var::Eps))
    }

    fn mul(&self, other: &Mono) -> Mono {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Mono(out)
    }

    fn without(&self, v: Var) -> Mono {
        Mono(self.0.iter().copied().filter(|(w, _)| *w != v).collect())
    }

    fn with_exponent(&self, v: Var, e: i32) -> Mono {
        self.without(v).mul(&Mono::var(v, e))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A polynomial in the moduli variables, truncated at total degree `degree`
/// in the `A`, `B` and `t` variables, with `ε² = 0`. Units `a_0`, `b_0` are
/// Laurent variables of degree 0.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightedSeries {
    terms: BTreeMap<Mono, Scalar>,
    degree: i32,
}

impl WeightedSeries {
    pub fn zero(degree: i32) -> Self {
        WeightedSeries {
            terms: BTreeMap::new(),
            degree,
        }
    }

    pub fn constant(c: Scalar, degree: i32) -> Self {
        Self::term(Mono::one(), c, degree)
    }

    pub fn one(degree: i32) -> Self {
        Self::constant(Scalar::one(), degree)
    }

    pub fn var(v: Var, degree: i32) -> Self {
        Self::term(Mono::var(v, 1), Scalar::one(), degree)
    }

    pub fn term(m: Mono, c: Scalar, degree: i32) -> Self {
        let mut s = Self::zero(degree);
        s.add_term(m, c);
        s
    }

    pub fn truncation_degree(&self) -> i32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    fn admits(&self, m: &Mono) -> bool {
        m.degree() <= self.degree && m.exponent(Var::Eps) <= 1
    }

    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() || !self.admits(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.degree = self.degree.min(other.degree);
        self.terms.retain(|m, _| m.degree() <= self.degree);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&qi(-1))
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        if k.is_zero() {
            return Self::zero(self.degree);
        }
        WeightedSeries {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
            degree: self.degree,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree.min(other.degree));
        let other_terms: Vec<(&Mono, &Scalar, i32, i32)> = other
            .terms
            .iter()
            .map(|(m, c)| (m, c, m.degree(), m.exponent(Var::Eps)))
            .collect();
        for (m1, c1) in &self.terms {
            let (d1, e1) = (m1.degree(), m1.exponent(Var::Eps));
            for (m2, c2, d2, e2) in &other_terms {
                if d1 + d2 > out.degree || e1 + e2 > 1 {
                    continue;
                }
                out.add_term(m1.mul(m2), c1 * *c2);
            }
        }
        out
    }

    /// Same series at a lower truncation degree.
    pub fn truncate(&self, degree: i32) -> Self {
        let degree = degree.min(self.degree);
        WeightedSeries {
            terms: self.terms.iter().filter(|(m, _)| m.degree() <= degree).map(|(m, c)| (m.clone(), c.clone())).collect(),
            degree,
        }
    }

    /// Part with all terms of degree at most `d` (the truncation is kept).
    pub fn up_to_degree(&self, d: i32) -> Self {
        WeightedSeries {
            terms: self.terms.iter().filter(|(m, _)| m.degree() <= d).map(|(m, c)| (m.clone(), c.clone())).collect(),
            degree: self.degree,
        }
    }

    pub fn grade_part(&self, grade: (i32, i32)) -> Self {
        WeightedSeries {
            terms: self.terms.iter().filter(|(m, _)| m.grade() == grade).map(|(m, c)| (m.clone(), c.clone())).collect(),
            degree: self.degree,
        }
    }

    /// Coefficient of `ε`.
    pub fn eps_part(&self) -> Self {
        WeightedSeries {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(Var::Eps) == 1)
                .map(|(m, c)| (m.without(Var::Eps), c.clone()))
                .collect(),
            degree: self.degree,
        }
    }

    /// Whether every term is of grade `(0, 0)` or higher in both components
    /// and the grade-`(0, 0)` part vanishes.
    pub fn is_nilpotent(&self) -> bool {
        self.terms.keys().all(|m| m.grade() != (0, 0))
    }

    /// Minimal degree of a term, `None` for zero.
    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().map(Mono::degree).min()
    }

    pub fn derivative(&self, v: Var) -> Self {
        let mut out = Self::zero(self.degree);
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e != 0 {
                out.add_term(m.with_exponent(v, e - 1), c * qi(e as i64));
            }
        }
        out
    }

    /// Sets `v = 0`; terms with a negative power of `v` are not allowed.
    pub fn at_zero(&self, v: Var) -> Self {
        WeightedSeries {
            terms: self.terms.iter().filter(|(m, _)| m.exponent(v) == 0).map(|(m, c)| (m.clone(), c.clone())).collect(),
            degree: self.degree,
        }
    }

    /// Weights of the terms, in increasing order.
    pub fn weights(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self.terms.keys().map(Mono::weight).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// Sum of a nilpotent power series `Σ a_k s^k`; stops at the first zero power.
    fn power_series(&self, coeff: impl Fn(usize) -> Scalar) -> Result<Self> {
        if !self.is_nilpotent() {
            return Err(Error::NonUnitLeadingCoefficient);
        }
        let mut out = Self::constant(coeff(0), self.degree);
        let mut p = Self::one(self.degree);
        for k in 1.. {
            p = p.mul(self);
            if p.is_zero() {
                break;
            }
            out.add_assign(&p.scale(&coeff(k)));
        }
        Ok(out)
    }

    /// `exp(s)` for nilpotent `s`.
    pub fn exp(&self) -> Result<Self> {
        self.power_series(|k| {
            let mut f = Scalar::one();
            for i in 1..=k {
                f /= qi(i as i64);
            }
            f
        })
    }

    /// `log(1 + s)` for nilpotent `s`.
    pub fn log1p(&self) -> Result<Self> {
        self.power_series(|k| match k {
            0 => Scalar::zero(),
            _ => qi(if k % 2 == 1 { 1 } else { -1 }) / qi(k as i64),
        })
    }

    /// Splits off the grade-`(0, 0)` part, which must be a single unit monomial.
    pub fn leading_unit(&self) -> Result<(Mono, Scalar)> {
        let mut lead = self.terms.iter().filter(|(m, _)| m.grade() == (0, 0));
        match (lead.next(), lead.next()) {
            (Some((m, c)), None) if m.factors().iter().all(|(v, _)| v.is_unit()) => Ok((m.clone(), c.clone())),
            _ => Err(Error::NonUnitLeadingCoefficient),
        }
    }

    /// Multiplicative inverse of `u (1 + n)` with `u` a unit monomial and `n`
    /// nilpotent.
    pub fn inverse(&self) -> Result<Self> {
        let (m, c) = self.leading_unit()?;
        let inv_lead = Self::term(invert_mono(&m), c.recip(), self.degree);
        let rest = self.sub(&Self::term(m, c, self.degree)).mul(&inv_lead);
        let geom = rest.power_series(|k| qi(if k % 2 == 0 { 1 } else { -1 }))?;
        Ok(geom.mul(&inv_lead))
    }

    /// Evaluates all variables except `keep` at the given rationals.
    pub fn substitute(&self, values: &dyn Fn(Var) -> Option<Scalar>) -> Self {
        let mut out = Self::zero(self.degree);
        for (m, c) in &self.terms {
            let mut k = c.clone();
            let mut rest = Mono::one();
            for (v, e) in m.factors() {
                match values(*v) {
                    Some(x) => k *= pow_i(&x, *e),
                    None => rest = rest.mul(&Mono::var(*v, *e)),
                }
            }
            out.add_term(rest, k);
        }
        out
    }
}

fn pow_i(x: &Scalar, e: i32) -> Scalar {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

fn invert_mono(m: &Mono) -> Mono {
    Mono(m.0.iter().map(|(v, e)| (*v, -e)).collect())
}

impl fmt::Display for WeightedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.0.is_empty() {
                    format_scalar(c)
                } else if c.is_one() {
                    m.to_string()
                } else {
                    format!("{}*{m}", format_scalar(c))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for WeightedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [deg <= {}]", self.degree)
    }
}

impl Serialize for WeightedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
