//! The BRST complex `M(c) ⊗ Λ`: differential, ghost number, the dual
//! differential, cohomology and the algebraic structure on cohomology.
//!
//! The complex is realized as a single mode algebra with symbols `L`, `b`, `c`,
//! where `L` commutes with both ghosts. Canonical monomials are then
//! `L(..)..L(..) b(..)..b(..) c(..)..c(..) 1`, the usual tensor basis.

mod cohomology;
mod gerstenhaber;

pub use cohomology::{CohomologyBlock, CohomologyTable, Complex};
pub use gerstenhaber::{BvStructure, LeibnizSign};

use dashmap::DashMap;

use crate::error::Result;
use crate::fock::{Algebra, BracketTable, Mode, Monomial, RuleSpec, Vector};
use crate::ghost::{self, Ghosts};
use crate::scalar::Coeff;
use crate::virasoro;

/// Bracket table of the matter Virasoro algebra together with the ghosts.
pub fn tensor_table() -> BracketTable {
    let mut symbols = vec![virasoro::symbol()];
    symbols.extend(ghost::symbols());
    let mut rules = vec![virasoro::rule()];
    rules.extend(ghost::rules());
    rules.push(RuleSpec::new("L", "b"));
    rules.push(RuleSpec::new("L", "c"));
    BracketTable::new(symbols, rules).expect("tensor table is well formed")
}

/// `M(c) ⊗ Λ` with matter central charge `c`.
pub fn tensor_algebra<C: Coeff>(c: C) -> Algebra<C> {
    Algebra::new(tensor_table(), c).expect("tensor algebra is well formed")
}

/// The differential and ghost-number operator on `M(c) ⊗ Λ`.
pub struct Brst<'a, C: Coeff> {
    alg: &'a Algebra<C>,
    ghosts: Ghosts<'a, C>,
    l: u16,
    cache: DashMap<Monomial, Vector<C>>,
}

impl<'a, C: Coeff> Brst<'a, C> {
    pub fn new(alg: &'a Algebra<C>) -> Result<Self> {
        Ok(Brst {
            alg,
            ghosts: Ghosts::new(alg)?,
            l: alg.table().symbol_id("L")?,
            cache: DashMap::new(),
        })
    }

    pub fn algebra(&self) -> &'a Algebra<C> {
        self.alg
    }

    pub fn ghosts(&self) -> &Ghosts<'a, C> {
        &self.ghosts
    }

    pub fn l(&self, n: i64) -> Mode {
        Mode::new(self.l, n)
    }

    /// Index window that contains every contributing summand of `δ` on a
    /// monomial of weight `w`.
    pub fn index_bound(&self, w: i64) -> i64 {
        (w - self.alg.min_weight()).max(0) + 3
    }

    /// `δ = Σ_j L(j) c(-j) - ½ Σ_{i,j} (i - j) :b(i+j) c(-i) c(-j):`.
    pub fn delta(&self, v: &Vector<C>) -> Vector<C> {
        let mut out = Vector::zero();
        for (m, k) in v {
            out.axpy(k, &self.delta_monomial(m));
        }
        out
    }

    fn delta_monomial(&self, m: &Monomial) -> Vector<C> {
        if let Some(v) = self.cache.get(m) {
            return v.clone();
        }
        let bound = self.index_bound(self.alg.monomial_grade(m).weight);
        let out = self.delta_with_bound(&Vector::monomial(m.clone()), bound);
        self.cache.insert(m.clone(), out.clone());
        out
    }

    /// `δ` with every mode index restricted to `[-bound, bound]`.
    pub fn delta_with_bound(&self, v: &Vector<C>, bound: i64) -> Vector<C> {
        let g = &self.ghosts;
        let mut out = Vector::zero();
        for j in -bound..=bound {
            let cv = self.alg.apply(g.c(-j), v);
            if !cv.is_zero() {
                out.add_assign(&self.alg.apply(self.l(j), &cv));
            }
        }
        // The summand is symmetric in (i, j), so ½ Σ_{i,j} = Σ_{i<j}.
        for i in -bound..=bound {
            for j in i + 1..=bound {
                let word = [g.b(i + j), g.c(-i), g.c(-j)];
                let t = g.apply_normal_ordered(&word, v);
                if !t.is_zero() {
                    out.axpy(&C::from_int(-(i - j)), &t);
                }
            }
        }
        out
    }

    pub fn ghost_number_operator(&self, v: &Vector<C>) -> Vector<C> {
        self.ghosts.ghost_number_operator(v)
    }

    pub fn ghost_number(&self, v: &Vector<C>) -> Result<i64> {
        self.ghosts.ghost_number(v)
    }

    /// Total Virasoro operator `L(n) + L_∧(n)` on the complex.
    pub fn total_virasoro(&self, n: i64, v: &Vector<C>) -> Vector<C> {
        self.alg.apply(self.l(n), v).add(&self.ghosts.l_wedge(n, v))
    }
}
