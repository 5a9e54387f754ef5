//! The mode Lie superalgebra itself, independent of any module: finite
//! combinations of modes plus a central part, and the graded antisymmetry and
//! Jacobi identities of a bracket table.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Coeff;

use super::algebra::Algebra;
use super::mode::Mode;

/// `Σ k_i X_i(n_i) + k · Id`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSum<C: Coeff> {
    pub modes: BTreeMap<Mode, C>,
    pub identity: C,
}

impl<C: Coeff> ModeSum<C> {
    pub fn zero() -> Self {
        ModeSum {
            modes: BTreeMap::new(),
            identity: C::zero(),
        }
    }

    pub fn mode(m: Mode) -> Self {
        let mut s = Self::zero();
        s.modes.insert(m, C::one());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty() && self.identity.is_zero()
    }

    pub fn axpy(&mut self, k: &C, other: &Self) {
        for (m, c) in &other.modes {
            let slot = self.modes.entry(*m).or_insert_with(C::zero);
            slot.add_assign(&k.mul(c));
            if slot.is_zero() {
                self.modes.remove(m);
            }
        }
        self.identity.add_assign(&k.mul(&other.identity));
    }
}

/// Displays through an algebra so that symbol names resolve.
pub struct DisplayModeSum<'a, C: Coeff>(pub &'a Algebra<C>, pub &'a ModeSum<C>);

impl<C: Coeff> fmt::Display for DisplayModeSum<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .1
            .modes
            .iter()
            .map(|(m, k)| format!("({k}) {}", self.0.format_mode(*m)))
            .collect();
        if !self.1.identity.is_zero() || parts.is_empty() {
            parts.push(format!("({}) Id", self.1.identity));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Coeff> Algebra<C> {
    /// Parity of a sum all of whose modes share one parity.
    fn sum_is_odd(&self, x: &ModeSum<C>) -> bool {
        x.modes.keys().next().is_some_and(|m| self.is_odd(*m))
    }

    /// The bracket of two modes as an element of the Lie superalgebra.
    pub fn mode_bracket(&self, a: Mode, b: Mode) -> ModeSum<C> {
        let v = self.bracket(a, b);
        let mut out = ModeSum::zero();
        for (k, m) in &v.modes {
            out.axpy(k, &ModeSum::mode(*m));
        }
        out.identity = v.scalar;
        out
    }

    /// Bilinear extension of the bracket; the identity part is central.
    pub fn sum_bracket(&self, x: &ModeSum<C>, y: &ModeSum<C>) -> ModeSum<C> {
        let mut out = ModeSum::zero();
        for (a, ka) in &x.modes {
            for (b, kb) in &y.modes {
                out.axpy(&ka.mul(kb), &self.mode_bracket(*a, *b));
            }
        }
        out
    }

    fn sign(&self, x: &ModeSum<C>, y: &ModeSum<C>) -> C {
        if self.sum_is_odd(x) && self.sum_is_odd(y) {
            C::one()
        } else {
            C::from_int(-1)
        }
    }

    /// `[a, b] + (-1)^{|a||b|} [b, a]`.
    pub fn antisymmetry_residual(&self, a: Mode, b: Mode) -> ModeSum<C> {
        let (x, y) = (ModeSum::mode(a), ModeSum::mode(b));
        let mut r = self.sum_bracket(&x, &y);
        // sign() is -(-1)^{|a||b|}
        r.axpy(&self.sign(&x, &y).neg(), &self.sum_bracket(&y, &x));
        r
    }

    /// `[a, [b, c]] - [[a, b], c] - (-1)^{|a||b|} [b, [a, c]]`.
    pub fn jacobi_residual(&self, a: Mode, b: Mode, c: Mode) -> ModeSum<C> {
        let (x, y, z) = (ModeSum::mode(a), ModeSum::mode(b), ModeSum::mode(c));
        let mut r = self.sum_bracket(&x, &self.sum_bracket(&y, &z));
        r.axpy(&C::from_int(-1), &self.sum_bracket(&self.sum_bracket(&x, &y), &z));
        let s = self.sign(&x, &y);
        r.axpy(&s, &self.sum_bracket(&y, &self.sum_bracket(&x, &z)));
        r
    }

    /// First violation of graded antisymmetry or Jacobi among all modes with
    /// indices in `range`, together with the number of cases examined.
    pub fn check_lie_identities(&self, range: std::ops::RangeInclusive<i64>) -> LieCheck<C> {
        let syms = self.table().symbols().len() as u16;
        let modes: Vec<Mode> = (0..syms)
            .flat_map(|s| range.clone().map(move |n| Mode::new(s, n)))
            .collect();
        let mut out = LieCheck {
            pairs: 0,
            triples: 0,
            failure: None,
        };
        for &a in &modes {
            for &b in &modes {
                out.pairs += 1;
                let r = self.antisymmetry_residual(a, b);
                if !r.is_zero() {
                    out.failure = Some((vec![a, b], r));
                    return out;
                }
            }
        }
        for &a in &modes {
            for &b in &modes {
                for &c in &modes {
                    out.triples += 1;
                    let r = self.jacobi_residual(a, b, c);
                    if !r.is_zero() {
                        out.failure = Some((vec![a, b, c], r));
                        return out;
                    }
                }
            }
        }
        out
    }
}

/// Outcome of [`Algebra::check_lie_identities`].
#[derive(Clone, Debug)]
pub struct LieCheck<C: Coeff> {
    pub pairs: usize,
    pub triples: usize,
    /// Offending modes and the nonzero residual.
    pub failure: Option<(Vec<Mode>, ModeSum<C>)>,
}

impl<C: Coeff> LieCheck<C> {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{BracketTable, RuleSpec, Symbol};
    use crate::scalar::{qi, CPoly, Scalar};

    #[test]
    fn virasoro_and_ghost_tables_satisfy_jacobi() {
        let vir = crate::virasoro::vacuum_module(CPoly::c());
        assert!(vir.check_lie_identities(-4..=4).passed());
        let gh = crate::ghost::ghost_module::<Scalar>();
        assert!(gh.check_lie_identities(-4..=4).passed());
        let t = crate::brst::tensor_algebra(CPoly::c());
        let r = t.check_lie_identities(-2..=2);
        assert!(r.passed());
        assert_eq!(r.pairs, 15 * 15);
    }

    #[test]
    fn broken_structure_constants_are_caught() {
        // m^5 is antisymmetric but not a 2-cocycle of the Witt algebra
        let table = BracketTable::new(
            vec![Symbol::new("L", false, 2, 0, -1)],
            vec![RuleSpec::new("L", "L").term("m - n", "L", "m + n").central("m^5/12")],
        )
        .unwrap();
        let alg = Algebra::new(table, qi(1)).unwrap();
        let r = alg.check_lie_identities(-3..=3);
        assert!(!r.passed());
        let (_, res) = r.failure.unwrap();
        assert!(res.modes.is_empty());
        assert!(!res.identity.is_zero());

        // a rule that is not graded antisymmetric
        let table = BracketTable::new(
            vec![Symbol::new("L", false, 2, 0, -1)],
            vec![RuleSpec::new("L", "L").term("m", "L", "m + n")],
        )
        .unwrap();
        let alg = Algebra::new(table, qi(0)).unwrap();
        let r = alg.check_lie_identities(-1..=1);
        assert_eq!(r.triples, 0);
        let (modes, res) = r.failure.unwrap();
        assert_eq!(modes.len(), 2);
        assert!(!res.is_zero());
        assert!(DisplayModeSum(&alg, &res).to_string().contains("L("));
    }
}
