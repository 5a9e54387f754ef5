//! The bc ghost system of semi-infinite forms.
//!
//! `c(j)` and `b(j)` are odd with `[c(i), b(j)] = δ_{i+j,0}`; `b(j)1 = 0` for
//! `j >= -1` and `c(j)1 = 0` for `j >= 2`. The operators here work on any
//! [`Algebra`] that contains the two symbols, so they serve both the ghost
//! algebra on its own and its tensor product with a matter sector.

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::fock::{Algebra, BracketTable, Mode, Monomial, RuleSpec, Symbol, Vector};
use crate::scalar::Coeff;

pub fn symbols() -> Vec<Symbol> {
    vec![
        Symbol::new("b", true, 2, -1, -1),
        Symbol::new("c", true, -1, 1, 2),
    ]
}

pub fn rules() -> Vec<RuleSpec> {
    vec![
        RuleSpec::new("b", "b"),
        RuleSpec::new("c", "c"),
        RuleSpec::new("c", "b").scalar("1"),
    ]
}

pub fn table() -> BracketTable {
    BracketTable::new(symbols(), rules()).expect("ghost table is well formed")
}

/// The ghost vertex algebra on its own. There is no central element, so the
/// value passed for it is irrelevant.
pub fn ghost_module<C: Coeff>() -> Algebra<C> {
    Algebra::new(table(), C::zero()).expect("ghost module is well formed")
}

/// A product of two ghost modes with a sign, in the order it is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderedPair {
    pub negated: bool,
    pub first: Mode,
    pub second: Mode,
}

/// Ghost-mode operators on an algebra containing `b` and `c`.
pub struct Ghosts<'a, C: Coeff> {
    alg: &'a Algebra<C>,
    b: u16,
    c: u16,
    l_cache: DashMap<(i64, Monomial), Vector<C>>,
}

impl<'a, C: Coeff> Ghosts<'a, C> {
    pub fn new(alg: &'a Algebra<C>) -> Result<Self> {
        let b = alg.table().symbol_id("b")?;
        let c = alg.table().symbol_id("c")?;
        Ok(Ghosts {
            alg,
            b,
            c,
            l_cache: DashMap::new(),
        })
    }

    pub fn algebra(&self) -> &'a Algebra<C> {
        self.alg
    }

    pub fn b(&self, j: i64) -> Mode {
        Mode::new(self.b, j)
    }

    pub fn c(&self, i: i64) -> Mode {
        Mode::new(self.c, i)
    }

    /// `:c(i) b(j):`, moving `b(j)` to the left with a sign when `j < -1`.
    pub fn normal_order_pair(&self, i: i64, j: i64) -> OrderedPair {
        if j < -1 {
            OrderedPair {
                negated: true,
                first: self.b(j),
                second: self.c(i),
            }
        } else {
            OrderedPair {
                negated: false,
                first: self.c(i),
                second: self.b(j),
            }
        }
    }

    /// Applies an ordered pair to `v`: `second` first, then `first`.
    pub fn apply_pair(&self, p: OrderedPair, v: &Vector<C>) -> Vector<C> {
        let out = self.alg.apply(p.first, &self.alg.apply(p.second, v));
        if p.negated {
            out.neg()
        } else {
            out
        }
    }

    /// Apply a normal-ordered product of modes: creation modes to the left,
    /// annihilation modes to the right, with the sign of the odd permutation.
    pub fn apply_normal_ordered(&self, word: &[Mode], v: &Vector<C>) -> Vector<C> {
        let (ordered, negated) = normal_order(self.alg, word);
        let out = self.alg.apply_word(&ordered, v);
        if negated {
            out.neg()
        } else {
            out
        }
    }

    /// Index bound outside which no summand of an infinite mode sum can act
    /// on `v`: `|i| <= (w - min) + |j| + 2` for the top weight `w` of `v`.
    fn support_bound(&self, v: &Vector<C>, j: i64) -> i64 {
        let w = v
            .monomials()
            .map(|m| self.alg.monomial_grade(m).weight)
            .max()
            .unwrap_or(0);
        (w - self.alg.min_weight()).max(0) + j.abs() + 2
    }

    fn l_wedge_term(&self, i: i64, j: i64, v: &Vector<C>) -> Vector<C> {
        if i == j {
            return Vector::zero();
        }
        self.apply_pair(self.normal_order_pair(-i, i + j), v)
            .scale(&C::from_int(i - j))
    }

    /// `L_∧(j) = Σ_i (i - j) :c(-i) b(i + j):`, with the central term of the
    /// Witt bracket dropped inside the contraction.
    pub fn l_wedge(&self, j: i64, v: &Vector<C>) -> Vector<C> {
        let mut out = Vector::zero();
        for (m, k) in v {
            out.axpy(k, &self.l_wedge_monomial(j, m));
        }
        out
    }

    fn l_wedge_monomial(&self, j: i64, m: &Monomial) -> Vector<C> {
        let key = (j, m.clone());
        if let Some(v) = self.l_cache.get(&key) {
            return v.clone();
        }
        let v = Vector::monomial(m.clone());
        let bound = self.support_bound(&v, j);
        let mut out = Vector::zero();
        for i in -bound..=bound {
            out.add_assign(&self.l_wedge_term(i, j, &v));
        }
        if cfg!(debug_assertions) {
            for i in [-bound - 2, -bound - 1, bound + 1, bound + 2] {
                assert!(
                    self.l_wedge_term(i, j, &v).is_zero(),
                    "L_wedge support bound violated"
                );
            }
        }
        self.l_cache.insert(key, out.clone());
        out
    }

    /// `:c(x) d/dx b(x): + 2 :(d/dx c(x)) b(x):`, the `x^{-n-2}` coefficient,
    /// assembled from the two normal-ordered double sums separately.
    pub fn stress_tensor_mode(&self, n: i64, v: &Vector<C>) -> Vector<C> {
        let bound = self.support_bound(v, n);
        let mut out = Vector::zero();
        for i in -bound..=bound {
            let j = n - i;
            // c(x) = Σ c(i) x^{1-i},  b'(x) = Σ (-j-2) b(j) x^{-j-3}
            let first = -j - 2;
            // c'(x) = Σ (1-i) c(i) x^{-i},  b(x) = Σ b(j) x^{-j-2}
            let second = 2 * (1 - i);
            let k = first + second;
            if k != 0 {
                out.axpy(&C::from_int(k), &self.apply_pair(self.normal_order_pair(i, j), v));
            }
        }
        out
    }

    /// `U = Σ_j :c(-j) b(j):`.
    pub fn ghost_number_operator(&self, v: &Vector<C>) -> Vector<C> {
        let bound = self.support_bound(v, 0);
        let mut out = Vector::zero();
        for j in -bound..=bound {
            out.add_assign(&self.apply_pair(self.normal_order_pair(-j, j), v));
        }
        out
    }

    /// Eigenvalue of `U` on `v`. The candidate is read off the first monomial
    /// and then confirmed on the whole vector.
    pub fn ghost_number(&self, v: &Vector<C>) -> Result<i64> {
        let Some(m) = v.monomials().next() else {
            return Ok(0);
        };
        let cand = self.alg.monomial_grade(m).fermion;
        if self.ghost_number_operator(v) == v.scale(&C::from_int(cand)) {
            Ok(cand)
        } else {
            Err(Error::NotEigenvector)
        }
    }

    /// `ω_∧ = 2 c(0) b(-2) 1 + c(1) b(-3) 1`.
    pub fn omega_wedge(&self) -> Vector<C> {
        let mut w = self
            .alg
            .canonicalize(&[self.c(0), self.b(-2)])
            .scale(&C::from_int(2));
        w.add_assign(&self.alg.canonicalize(&[self.c(1), self.b(-3)]));
        w
    }

    /// `b = b(-2)1`.
    pub fn b_state(&self) -> Vector<C> {
        self.alg.canonicalize(&[self.b(-2)])
    }

    /// `c = c(1)1`.
    pub fn c_state(&self) -> Vector<C> {
        self.alg.canonicalize(&[self.c(1)])
    }
}

/// Stable reordering of a word with creation modes first. Returns the new word
/// and whether the permutation of odd modes was odd.
pub fn normal_order<C: Coeff>(alg: &Algebra<C>, word: &[Mode]) -> (Vec<Mode>, bool) {
    let mut creators = Vec::new();
    let mut annihilators = Vec::new();
    let mut negated = false;
    // Moving an odd annihilator right past each odd creator after it flips the sign.
    let mut odd_annihilators_seen = 0usize;
    for &m in word {
        if alg.kills_vacuum(m) {
            if alg.is_odd(m) {
                odd_annihilators_seen += 1;
            }
            annihilators.push(m);
        } else {
            if alg.is_odd(m) && odd_annihilators_seen % 2 == 1 {
                negated = !negated;
            }
            creators.push(m);
        }
    }
    creators.extend(annihilators);
    (creators, negated)
}

/// Generating-function count of ghost basis monomials per (weight, fermion):
/// `Π_{j>=2} (1 + y^{-1} q^j) Π_{i<=1} (1 + y q^{-i})`, truncated at `max_weight`.
/// Returned as a map from `(weight, fermion)` to a count.
pub fn character(max_weight: i64) -> std::collections::BTreeMap<(i64, i64), u64> {
    use std::collections::BTreeMap;
    let mut series: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    series.insert((0, 0), 1);
    let mut factors: Vec<(i64, i64)> = Vec::new();
    // b(j), weight -j, fermion -1; c(i), weight -i, fermion +1.
    for j in 2..=max_weight + 1 {
        factors.push((j, -1));
    }
    for i in -(max_weight + 1)..=1 {
        factors.push((-i, 1));
    }
    for (w, f) in factors {
        let mut next = series.clone();
        for (&(sw, sf), &n) in &series {
            if sw + w <= max_weight + 1 {
                *next.entry((sw + w, sf + f)).or_default() += n;
            }
        }
        series = next;
    }
    series.retain(|&(w, _), _| w <= max_weight);
    series
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{BiGrade, Grade};
    use crate::scalar::{q, qi, Scalar};
    use crate::virasoro::relation_residual;

    fn setup() -> Algebra<Scalar> {
        ghost_module()
    }

    #[test]
    fn canonicalize_examples() {
        let alg = setup();
        let g = Ghosts::new(&alg).unwrap();
        // c(2) b(-2) 1 = [c(2), b(-2)] 1 = 1
        assert_eq!(alg.canonicalize(&[g.c(2), g.b(-2)]), Vector::vacuum());
        assert!(alg.canonicalize(&[g.b(-2), g.b(-2)]).is_zero());
        // c(0) b(-2) 1 = -b(-2) c(0) 1
        let cb = alg.canonicalize(&[g.c(0), g.b(-2)]);
        let bc = alg.canonicalize(&[g.b(-2), g.c(0)]);
        assert_eq!(cb, bc.neg());
    }

    #[test]
    fn grades() {
        let alg = setup();
        let g = Ghosts::new(&alg).unwrap();
        assert_eq!(alg.grade_of(&g.b_state()), Grade::Homogeneous(BiGrade::new(2, -1)));
        assert_eq!(alg.grade_of(&Vector::vacuum()), Grade::Homogeneous(BiGrade::new(0, 0)));
        assert_eq!(alg.grade_of(&Vector::zero()), Grade::AllGrades);
        assert_eq!(alg.grade_of(&g.omega_wedge()), Grade::Homogeneous(BiGrade::new(2, 0)));
        assert_eq!(alg.min_weight(), -1);
    }

    #[test]
    fn normal_ordering_matches_the_case_split() {
        let alg = setup();
        let g = Ghosts::new(&alg).unwrap();
        let p = g.normal_order_pair(0, -2);
        assert!(p.negated && p.first == g.b(-2) && p.second == g.c(0));
        let p = g.normal_order_pair(0, 0);
        assert!(!p.negated && p.first == g.c(0) && p.second == g.b(0));
        let p = g.normal_order_pair(0, -1);
        assert!(!p.negated && p.first == g.c(0) && p.second == g.b(-1));
        // The generic creators-left ordering agrees as an operator.
        for i in -4..=4 {
            for j in -4..=4 {
                for w in 0..=3 {
                    for m in alg.basis(w).iter() {
                        let v = Vector::monomial(m.clone());
                        assert_eq!(
                            g.apply_pair(g.normal_order_pair(i, j), &v),
                            g.apply_normal_ordered(&[g.c(i), g.b(j)], &v)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn l_wedge_examples() {
        let alg = setup();
        let g = Ghosts::new(&alg).unwrap();
        let one = Vector::vacuum();
        for j in -1..=4 {
            assert!(g.l_wedge(j, &one).is_zero());
        }
        assert_eq!(g.l_wedge(0, &g.b_state()), g.b_state().scale(&qi(2)));
        let w = g.omega_wedge();
        assert_eq!(g.l_wedge(-2, &one), w);
        assert_eq!(g.l_wedge(2, &w), one.scale(&qi(-13)));
        assert!(g.l_wedge(1, &w).is_zero());
    }

    #[test]
    fn ghost_number_examples() {
        let alg = setup();
        let g = Ghosts::new(&alg).unwrap();
        assert_eq!(g.ghost_number(&Vector::vacuum()).unwrap(), 0);
        assert_eq!(g.ghost_number(&g.c_state()).unwrap(), 1);
        assert_eq!(g.ghost_number(&g.b_state()).unwrap(), -1);
        let mixed = g.c_state().add(&g.b_state());
        assert!(g.ghost_number(&mixed).is_err());
        for w in -1..=5 {
            for m in alg.basis(w).iter() {
                let v = Vector::monomial(m.clone());
                assert_eq!(
                    g.ghost_number(&v).unwrap(),
                    alg.monomial_grade(m).fermion,
                    "{}",
                    alg.format_monomial(m)
                );
            }
        }
    }

    #[test]
    fn fields_of_generators_are_the_modes() {
        let alg = setup();
        let g = Ghosts::new(&alg).unwrap();
        let (b, c) = (g.b_state(), g.c_state());
        for w in -1..=4 {
            for m in alg.basis(w).iter() {
                let v = Vector::monomial(m.clone());
                for j in -5..=5 {
                    // Y(b, x) = Σ b(j) x^{-j-2}: b(j) is the (j+1)-th mode
                    assert_eq!(alg.field_mode(&b, j + 1, &v), alg.apply(g.b(j), &v));
                    // Y(c, x) = Σ c(j) x^{-j+1}: c(j) is the (j-2)-th mode
                    assert_eq!(alg.field_mode(&c, j - 2, &v), alg.apply(g.c(j), &v));
                }
            }
        }
    }

    #[test]
    fn stress_tensor_agrees_three_ways() {
        let alg = setup();
        let g = Ghosts::new(&alg).unwrap();
        let w = g.omega_wedge();
        let y = alg.field_mode(&w, 1, &g.b_state());
        assert_eq!(y, g.b_state().scale(&qi(2)));
        for wt in -1..=6 {
            for m in alg.basis(wt).iter() {
                let v = Vector::monomial(m.clone());
                for n in -4..=4 {
                    let by_recursion = alg.field_mode(&w, n + 1, &v);
                    assert_eq!(by_recursion, g.l_wedge(n, &v), "n={n}");
                    assert_eq!(by_recursion, g.stress_tensor_mode(n, &v), "n={n}");
                }
            }
        }
    }

    #[test]
    fn l_wedge_has_central_charge_minus_26() {
        let alg = setup();
        let g = Ghosts::new(&alg).unwrap();
        let l = |n: i64, v: &Vector<Scalar>| g.l_wedge(n, v);
        for wt in -1..=5 {
            for m in alg.basis(wt).iter() {
                let v = Vector::monomial(m.clone());
                for a in -3..=3 {
                    for b in -3..=3 {
                        assert!(relation_residual(&l, &qi(-26), a, b, &v).is_zero());
                    }
                }
            }
        }
        // A wrong central charge is detected.
        let v = Vector::vacuum();
        assert!(!relation_residual(&l, &q(-25, 1), 2, -2, &v).is_zero());
    }

    #[test]
    fn dimensions_match_the_character() {
        let alg = setup();
        let chi = character(8);
        for w in -1..=8 {
            let mut counts = std::collections::BTreeMap::new();
            for m in alg.basis(w).iter() {
                *counts.entry(alg.monomial_grade(m).fermion).or_insert(0u64) += 1;
            }
            let expect: std::collections::BTreeMap<i64, u64> = chi
                .iter()
                .filter(|((cw, _), _)| *cw == w)
                .map(|((_, f), n)| (*f, *n))
                .collect();
            assert_eq!(counts, expect, "weight {w}");
        }
        assert!(alg.basis(-2).is_empty());
    }
}
