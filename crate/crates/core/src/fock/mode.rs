use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// A generating field of a mode algebra.
///
/// Mode `n` of a symbol is the coefficient `a_(n + offset)` of the field of the
/// generator state, where `offset = -vacuum_from`. It kills the vacuum exactly
/// when `n >= vacuum_from`, and lowers the grading weight by
/// `n - vacuum_from + 1 - weight`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub odd: bool,
    /// Grading weight of the generator state `a_(-1) 1`.
    pub weight: i64,
    pub fermion: i64,
    /// Smallest mode index that annihilates the vacuum.
    pub vacuum_from: i64,
}

impl Symbol {
    pub fn new(name: &str, odd: bool, weight: i64, fermion: i64, vacuum_from: i64) -> Self {
        Symbol {
            name: name.to_string(),
            odd,
            weight,
            fermion,
            vacuum_from,
        }
    }

    /// Shift from the symbol's own index to the vertex-operator index.
    pub fn offset(&self) -> i64 {
        -self.vacuum_from
    }

    pub fn mode_weight(&self, index: i64) -> i64 {
        self.weight - (index + self.offset()) - 1
    }

    /// Index of the mode that creates the generator state from the vacuum.
    pub fn generator_index(&self) -> i64 {
        self.vacuum_from - 1
    }
}

/// A single mode `X(n)`: a symbol slot in an [`super::Algebra`] plus an index.
///
/// The derived order is the canonical one: by symbol (symbols are stored sorted
/// by name), then by index descending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mode {
    pub sym: u16,
    pub index: i32,
}

impl Mode {
    pub fn new(sym: u16, index: i64) -> Self {
        Mode {
            sym,
            index: i32::try_from(index).expect("mode index out of range"),
        }
    }

    pub fn idx(self) -> i64 {
        self.index as i64
    }
}

impl Ord for Mode {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sym
            .cmp(&other.sym)
            .then_with(|| other.index.cmp(&self.index))
    }
}

impl PartialOrd for Mode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A canonical word of creation modes; `[x1, x2, ..]` stands for `x1 x2 .. 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub SmallVec<[Mode; 8]>);

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn from_modes(modes: &[Mode]) -> Self {
        Monomial(SmallVec::from_slice(modes))
    }

    pub fn modes(&self) -> &[Mode] {
        &self.0
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn prepend(&self, m: Mode) -> Self {
        let mut v = SmallVec::with_capacity(self.0.len() + 1);
        v.push(m);
        v.extend_from_slice(&self.0);
        Monomial(v)
    }
}

/// Weight and fermion number.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BiGrade {
    pub weight: i64,
    pub fermion: i64,
}

impl BiGrade {
    pub const fn new(weight: i64, fermion: i64) -> Self {
        BiGrade { weight, fermion }
    }
}

impl Add for BiGrade {
    type Output = BiGrade;
    fn add(self, rhs: BiGrade) -> BiGrade {
        BiGrade::new(self.weight + rhs.weight, self.fermion + rhs.fermion)
    }
}

impl fmt::Display for BiGrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(weight {}, fermion {})", self.weight, self.fermion)
    }
}

/// Result of asking for the grade of a vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grade {
    /// The zero vector lies in every graded piece.
    AllGrades,
    Homogeneous(BiGrade),
    NotHomogeneous,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_puts_most_negative_last() {
        let a = Mode::new(0, -2);
        let b = Mode::new(0, -5);
        let c = Mode::new(1, 3);
        assert!(a < b && b < c);
    }

    #[test]
    fn weights_follow_offsets() {
        let l = Symbol::new("L", false, 2, 0, -1);
        let c = Symbol::new("c", true, -1, 1, 2);
        let gp = Symbol::new("Gplus", true, 1, 1, -1);
        let gm = Symbol::new("Gminus", true, 2, -1, 0);
        assert_eq!(l.mode_weight(-2), 2);
        assert_eq!(c.mode_weight(1), -1);
        assert_eq!(c.generator_index(), 1);
        assert_eq!(gp.mode_weight(-2), 1);
        assert_eq!(gm.mode_weight(-1), 2);
        assert_eq!(gm.generator_index(), -1);
    }
}
