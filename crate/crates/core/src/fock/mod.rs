//! Exact kernel: modes, canonical monomials, sparse vectors and the rewriting
//! of mode words against a bracket table.

mod algebra;
mod index_poly;
mod lie;
mod mode;
mod operator;
mod table;
mod vector;
mod vertex;

pub use algebra::{Algebra, BracketValue};
pub use index_poly::IndexPoly;
pub use lie::{DisplayModeSum, LieCheck, ModeSum};
pub use mode::{BiGrade, Grade, Mode, Monomial, Symbol};
pub use operator::Operator;
pub use table::{BracketTable, RuleSpec, TermSpec};
pub use vector::Vector;
pub use vertex::binomial;
