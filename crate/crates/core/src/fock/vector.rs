use std::collections::btree_map::{self, Entry};
use std::collections::BTreeMap;

use crate::scalar::{Coeff, Scalar};

use super::mode::Monomial;

/// Finite linear combination of canonical monomials. Zero coefficients are
/// never stored, so equality is structural.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<C: Coeff> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Default for Vector<C> {
    fn default() -> Self {
        Vector {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: Coeff> Vector<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::monomial(Monomial::vacuum())
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, C::one())
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut v = Self::zero();
        v.add_term(m, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Monomial, C> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += k * other`.
    pub fn axpy(&mut self, k: &C, other: &Self) {
        if k.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.mul(k));
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.neg());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn neg(&self) -> Self {
        Vector {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.mul(k));
        }
        out
    }

    pub fn scale_by(&self, k: &Scalar) -> Self {
        self.scale(&C::from_scalar(k.clone()))
    }

    /// Apply `f` to each coefficient, dropping terms that become zero.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Vector<D> {
        let mut out = Vector::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl<C: Coeff> FromIterator<(Monomial, C)> for Vector<C> {
    fn from_iter<I: IntoIterator<Item = (Monomial, C)>>(iter: I) -> Self {
        let mut v = Vector::zero();
        for (m, c) in iter {
            v.add_term(m, c);
        }
        v
    }
}

impl<'a, C: Coeff> IntoIterator for &'a Vector<C> {
    type Item = (&'a Monomial, &'a C);
    type IntoIter = btree_map::Iter<'a, Monomial, C>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}
