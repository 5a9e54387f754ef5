pub mod brst;
pub mod cli;
pub mod decl;
pub mod error;
pub mod fock;
pub mod ghost;
pub mod linalg;
pub mod n2;
pub mod report;
pub mod scalar;
pub mod sewing;
pub mod suite;
pub mod tvoa;
pub mod virasoro;

pub use error::{Error, Result};
pub use scalar::{CPoly, Coeff, Scalar};
