use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::{qi, Scalar};

use super::series::WeightedSeries as Series;

/// A Laurent series `Σ f_k x^k` with finitely many terms and coefficients in
/// the truncated series ring.
///
/// With an x-order cap `N`, terms above `x^N` are dropped and the series
/// stands for a power series known modulo `x^(N+1)`; composition and
/// inversion stay valid within that window as long as the maps involved have
/// no constant term. Without a cap the series is exact, which is what the
/// Laurent computations need, and termination rests on nilpotency of the
/// coefficients instead.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalMap {
    coeffs: BTreeMap<i32, Series>,
    order: Option<i32>,
    degree: i32,
}

impl FormalMap {
    pub fn zero(degree: i32, order: Option<i32>) -> Self {
        FormalMap {
            coeffs: BTreeMap::new(),
            order,
            degree,
        }
    }

    /// The identity map `x`.
    pub fn x(degree: i32, order: Option<i32>) -> Self {
        Self::monomial(1, Series::one(degree), order)
    }

    pub fn monomial(k: i32, c: Series, order: Option<i32>) -> Self {
        let mut f = Self::zero(c.truncation_degree(), order);
        f.add_at(k, &c);
        f
    }

    /// `Σ_{k ≥ 1} f_k x^k` from the list `[f_1, f_2, ...]`.
    pub fn from_coefficients(fs: &[Series], degree: i32, order: Option<i32>) -> Self {
        let mut f = Self::zero(degree, order);
        for (i, c) in fs.iter().enumerate() {
            f.add_at(i as i32 + 1, c);
        }
        f
    }

    pub fn order(&self) -> Option<i32> {
        self.order
    }

    pub fn truncation_degree(&self) -> i32 {
        self.degree
    }

    pub fn with_order(&self, order: Option<i32>) -> Self {
        let mut f = Self::zero(self.degree, order);
        for (k, c) in &self.coeffs {
            f.add_at(*k, c);
        }
        f
    }

    pub fn coeff(&self, k: i32) -> Series {
        self.coeffs.get(&k).cloned().unwrap_or_else(|| Series::zero(self.degree))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Series)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_power(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    fn add_at(&mut self, k: i32, c: &Series) {
        if self.order.is_some_and(|n| k > n) || c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_insert_with(|| Series::zero(self.degree));
        slot.add_assign(c);
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    fn combined_order(&self, other: &Self) -> Option<i32> {
        match (self.order, other.order) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree.min(other.degree), self.combined_order(other));
        for (k, c) in self.coeffs.iter().chain(&other.coeffs) {
            out.add_at(*k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Series::constant(qi(-1), other.degree)))
    }

    /// Multiplies every coefficient by `s`.
    pub fn scale(&self, s: &Series) -> Self {
        let mut out = Self::zero(self.degree.min(s.truncation_degree()), self.order);
        for (k, c) in &self.coeffs {
            out.add_at(*k, &c.mul(s));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree.min(other.degree), self.combined_order(other));
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                if out.order.is_some_and(|n| i + j > n) {
                    continue;
                }
                out.add_at(i + j, &a.mul(b));
            }
        }
        out
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.degree, self.order);
        for (k, c) in &self.coeffs {
            out.add_at(k - 1, &c.scale(&qi(*k as i64)));
        }
        out
    }

    /// Part of every coefficient in one `(degree, ε)` grade.
    pub fn grade_part(&self, grade: (i32, i32)) -> Self {
        let mut out = Self::zero(self.degree, self.order);
        for (k, c) in &self.coeffs {
            out.add_at(*k, &c.grade_part(grade));
        }
        out
    }

    /// `f(1/x)`; only meaningful without an x-order cap.
    pub fn at_reciprocal_argument(&self) -> Self {
        let mut out = Self::zero(self.degree, None);
        for (k, c) in &self.coeffs {
            out.add_at(-k, c);
        }
        out
    }

    /// Multiplicative inverse `1/f` of an exact Laurent series with a single
    /// term whose coefficient is not nilpotent, that coefficient being a unit.
    pub fn reciprocal(&self) -> Result<Self> {
        if self.order.is_some() {
            return Err(Error::InconsistentTruncation(
                "reciprocal of a series with an x-order cap".into(),
            ));
        }
        let mut lead = self.coeffs.iter().filter(|(_, c)| !c.is_nilpotent());
        let (p, u) = match (lead.next(), lead.next()) {
            (Some((p, c)), None) => (*p, c.grade_part((0, 0))),
            _ => return Err(Error::NonUnitLeadingCoefficient),
        };
        let inv = Self::monomial(-p, u.inverse()?, None);
        // f = u x^p (1 + n), n nilpotent
        let n = self.sub(&Self::monomial(p, u, None)).mul(&inv);
        let mut out = Self::monomial(0, Series::one(self.degree), None);
        let mut power = out.clone();
        loop {
            power = power.mul(&n).scale(&Series::constant(qi(-1), self.degree));
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        Ok(out.mul(&inv))
    }

    /// `f(g(x))`. With an x-order cap, `g` must have no constant term; without
    /// one, negative powers of `f` need `g` to be invertible.
    pub fn compose(&self, g: &FormalMap) -> Result<Self> {
        let order = self.combined_order(g);
        let degree = self.degree.min(g.degree);
        if order.is_some() && g.min_power().is_some_and(|p| p < 1) {
            return Err(Error::InconsistentTruncation(
                "composition with a map that has a constant term".into(),
            ));
        }
        let one = Self::monomial(0, Series::one(degree), order);
        let g = g.with_order(order);
        let mut out = Self::zero(degree, order);
        let (lo, hi) = match (self.min_power(), self.coeffs.keys().next_back()) {
            (Some(lo), Some(hi)) => (lo, *hi),
            _ => return Ok(out),
        };
        let mut power = one.clone();
        for k in 0..=hi.max(0) {
            if k >= lo {
                out = out.add(&power.scale(&self.coeff(k)));
            }
            power = power.mul(&g);
        }
        if lo < 0 {
            let ginv = g.reciprocal()?;
            let mut power = one;
            for k in 1..=-lo {
                power = power.mul(&ginv);
                out = out.add(&power.scale(&self.coeff(-k)));
            }
        }
        Ok(out)
    }

    /// Inverse of a power series `f_1 x + f_2 x^2 + ...` with `f_1` a unit,
    /// up to the x-order cap, found coefficient by coefficient.
    pub fn compositional_inverse(&self) -> Result<Self> {
        let n = self.order.ok_or_else(|| {
            Error::InconsistentTruncation("compositional inverse needs an x-order cap".into())
        })?;
        if self.min_power().is_some_and(|p| p < 1) {
            return Err(Error::NonUnitLeadingCoefficient);
        }
        let f1 = self.coeff(1);
        let f1_inv = f1.inverse()?;
        let mut g = Self::monomial(1, f1_inv.clone(), Some(n));
        for k in 2..=n {
            // x^k coefficient of f(g(x)) depends on g_k through f_1 g_k
            let r = self.compose(&g)?.coeff(k);
            g.add_at(k, &r.mul(&f1_inv).scale(&qi(-1)));
        }
        Ok(g)
    }

    /// Coefficient list `[f_1, ..., f_n]`.
    pub fn coefficients(&self, n: usize) -> Vec<Series> {
        (1..=n as i32).map(|k| self.coeff(k)).collect()
    }
}

/// `Σ_j A_j x^{j+1} f'(x)`, the vector field with coefficients `A` applied to `f`.
fn apply_field(a: &[Series], f: &FormalMap) -> FormalMap {
    let df = f.derivative();
    let mut out = FormalMap::zero(f.degree, f.order);
    for (i, aj) in a.iter().enumerate() {
        if !aj.is_zero() {
            out = out.add(&df.mul(&FormalMap::monomial(i as i32 + 2, aj.clone(), f.order)));
        }
    }
    out
}

/// `e_A(x) = exp(Σ_{j>0} A_j x^{j+1} d/dx) x`, summed term by term.
///
/// Each application of the field raises the x-order, so with a cap the sum
/// is finite; without one the entries of `A` must be nilpotent.
pub fn exp_vector_field(a: &[Series], degree: i32, order: Option<i32>) -> Result<FormalMap> {
    if order.is_none() && a.iter().any(|c| !c.is_nilpotent()) {
        return Err(Error::InconsistentTruncation(
            "exponential of a non-nilpotent field without an x-order cap".into(),
        ));
    }
    let mut out = FormalMap::x(degree, order);
    let mut term = out.clone();
    for n in 1.. {
        term = apply_field(a, &term).scale(&Series::constant(Scalar::one() / qi(n), degree));
        if term.is_zero() {
            break;
        }
        out = out.add(&term);
    }
    Ok(out)
}

/// The sequence `A` with `e_A(x) = f(x)` in its first `n` entries; `f` must
/// start `x + ...`.
pub fn sequence_of(f: &FormalMap, n: usize) -> Result<Vec<Series>> {
    if f.min_power().is_some_and(|p| p < 1) || f.coeff(1) != Series::one(f.degree) {
        return Err(Error::NonUnitLeadingCoefficient);
    }
    let mut a: Vec<Series> = Vec::with_capacity(n);
    for k in 1..=n {
        let k1 = k as i32 + 1;
        // A_k enters the x^{k+1} coefficient linearly and alone
        let e = exp_vector_field(&a, f.degree, Some(k1))?;
        a.push(f.coeff(k1).sub(&e.coeff(k1)));
    }
    Ok(a)
}

impl fmt::Display for FormalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(k, c)| format!("({c}) x^{k}")).collect();
        write!(f, "{}", parts.join(" + "))?;
        if let Some(n) = self.order {
            write!(f, " + O(x^{})", n + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for FormalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
