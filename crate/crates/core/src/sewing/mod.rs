//! Formal calculus on the moduli space of spheres with one incoming and one
//! outgoing puncture with local coordinates.

mod fields;
mod map;
mod moduli;
mod psi;
mod series;

pub use fields::{
    negative_field_from_psi, vector_field, vector_field_at, witt_check, witt_setup, CentralFit, FieldSetup, PairResult,
    VectorField, WittReport,
};
pub use map::{exp_vector_field, sequence_of, FormalMap};
pub use moduli::{associativity_defect, default_order, differences, sample_point, sew, ModuliElement, ScaleReading, Sewn};
pub use psi::{solve_psi, PsiSolution};
pub use series::{Mono, Var, WeightedSeries};
