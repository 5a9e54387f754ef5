use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{Algebra, BiGrade, Vector};
use crate::linalg::{Coordinates, Matrix};
use crate::scalar::Scalar;

use super::Brst;

/// Cohomology of one bigraded block.
#[derive(Clone, Debug)]
pub struct CohomologyBlock {
    pub weight: i64,
    pub ghost: i64,
    pub chain_dim: usize,
    pub dim: usize,
    /// Closed vectors whose classes form a basis.
    pub representatives: Vec<Vector<Scalar>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyRow {
    pub weight: i64,
    pub ghost: i64,
    pub chain_dim: usize,
    pub dim: usize,
}

/// Dimensions for all blocks up to a weight, with Euler characteristics.
#[derive(Clone, Debug, Serialize)]
pub struct CohomologyTable {
    pub rows: Vec<CohomologyRow>,
    /// weight → (Σ (-1)^g dim C^g, Σ (-1)^g dim H^g)
    pub euler: BTreeMap<i64, (i64, i64)>,
}

/// The BRST complex at a rational central charge, split into finite blocks.
pub struct Complex<'a> {
    brst: Brst<'a, Scalar>,
}

impl<'a> Complex<'a> {
    pub fn new(alg: &'a Algebra<Scalar>) -> Result<Self> {
        Ok(Complex { brst: Brst::new(alg)? })
    }

    pub fn brst(&self) -> &Brst<'a, Scalar> {
        &self.brst
    }

    pub fn algebra(&self) -> &'a Algebra<Scalar> {
        self.brst.algebra()
    }

    pub fn block(&self, weight: i64, ghost: i64) -> Coordinates {
        Coordinates::new(self.algebra().basis_bigraded(BiGrade::new(weight, ghost)))
    }

    /// Ghost numbers occurring at a weight.
    pub fn ghost_range(&self, weight: i64) -> Vec<i64> {
        self.algebra().fermion_numbers(weight)
    }

    /// Matrix of `δ` from grade `(w, g)` to `(w, g + 1)`.
    pub fn delta_matrix(&self, weight: i64, ghost: i64) -> Matrix {
        let src = self.block(weight, ghost);
        let dst = self.block(weight, ghost + 1);
        let cols: Vec<Vec<Scalar>> = src
            .basis()
            .iter()
            .map(|m| dst.coords(&self.brst.delta(&Vector::monomial(m.clone()))))
            .collect();
        Matrix::from_columns(dst.dim(), &cols)
    }

    /// Matrix of the dual differential `d` from `(w, g + 1)*` to `(w, g)*`
    /// in the dual monomial bases.
    pub fn dual_matrix(&self, weight: i64, ghost: i64) -> Matrix {
        self.delta_matrix(weight, ghost).transpose()
    }

    /// `d φ` for a functional on grade `(w, g + 1)`, given by its values on
    /// the monomial basis.
    pub fn dual_differential(&self, weight: i64, ghost: i64, phi: &[Scalar]) -> Vec<Scalar> {
        self.dual_matrix(weight, ghost).mul_vec(phi)
    }

    /// Fails with the offending grade if `δ²` is nonzero at this weight.
    pub fn check_square(&self, weight: i64) -> Result<()> {
        for g in self.ghost_range(weight) {
            let sq = self.delta_matrix(weight, g + 1).mul(&self.delta_matrix(weight, g));
            if !sq.is_zero() {
                return Err(Error::NotACochainComplex { weight, ghost: g });
            }
        }
        Ok(())
    }

    pub fn cohomology(&self, weight: i64, ghost: i64) -> Result<CohomologyBlock> {
        self.check_square(weight)?;
        let block = self.block(weight, ghost);
        let out = self.delta_matrix(weight, ghost);
        let inc = self.delta_matrix(weight, ghost - 1);
        let kernel = out.nullspace();
        let image_rank = inc.rank();
        // Extend a basis of the image greedily by kernel vectors.
        let mut cols: Vec<Vec<Scalar>> = (0..inc.cols()).map(|j| inc.column(j)).collect();
        let mut rank = image_rank;
        let mut representatives = Vec::new();
        for k in kernel.iter() {
            cols.push(k.clone());
            let r = Matrix::from_columns(block.dim(), &cols).rank();
            if r > rank {
                rank = r;
                representatives.push(block.vector(k));
            } else {
                cols.pop();
            }
        }
        debug_assert_eq!(representatives.len(), kernel.len() - image_rank);
        Ok(CohomologyBlock {
            weight,
            ghost,
            chain_dim: block.dim(),
            dim: representatives.len(),
            representatives,
        })
    }

    pub fn table(&self, max_weight: i64) -> Result<CohomologyTable> {
        let mut rows = Vec::new();
        let mut euler = BTreeMap::new();
        for w in self.algebra().min_weight()..=max_weight {
            let (mut ec, mut eh) = (0i64, 0i64);
            for g in self.ghost_range(w) {
                let b = self.cohomology(w, g)?;
                let sign = if g.rem_euclid(2) == 0 { 1 } else { -1 };
                ec += sign * b.chain_dim as i64;
                eh += sign * b.dim as i64;
                rows.push(CohomologyRow {
                    weight: w,
                    ghost: g,
                    chain_dim: b.chain_dim,
                    dim: b.dim,
                });
            }
            euler.insert(w, (ec, eh));
        }
        Ok(CohomologyTable { rows, euler })
    }

    pub fn is_closed(&self, v: &Vector<Scalar>) -> bool {
        self.brst.delta(v).is_zero()
    }

    /// Whether a homogeneous vector lies in the image of `δ`.
    pub fn is_exact(&self, v: &Vector<Scalar>) -> bool {
        self.preimage(v).is_some()
    }

    /// Some `x` with `δx = v`, if one exists.
    pub fn preimage(&self, v: &Vector<Scalar>) -> Option<Vector<Scalar>> {
        let Some(m) = v.monomials().next() else {
            return Some(Vector::zero());
        };
        let g = self.algebra().monomial_grade(m);
        let dst = self.block(g.weight, g.fermion);
        let src = self.block(g.weight, g.fermion - 1);
        let x = self
            .delta_matrix(g.weight, g.fermion - 1)
            .solve(&dst.coords(v))?;
        Some(src.vector(&x))
    }

    /// Splits `v` as a combination of the block's representatives plus an
    /// exact remainder; returns the combination coefficients.
    pub fn class_coordinates(&self, block: &CohomologyBlock, v: &Vector<Scalar>) -> Option<Vec<Scalar>> {
        let chains = self.block(block.weight, block.ghost);
        let inc = self.delta_matrix(block.weight, block.ghost - 1);
        let mut cols: Vec<Vec<Scalar>> = block.representatives.iter().map(|r| chains.coords(r)).collect();
        cols.extend((0..inc.cols()).map(|j| inc.column(j)));
        let x = Matrix::from_columns(chains.dim(), &cols).solve(&chains.coords(v))?;
        Some(x[..block.representatives.len()].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brst::tensor_algebra;
    use crate::scalar::qi;
    use num_traits::Zero;

    #[test]
    fn dual_differential_squares_to_zero_and_is_adjoint() {
        let alg = tensor_algebra(qi(26));
        let cx = Complex::new(&alg).unwrap();
        for w in -1..=4 {
            for g in cx.ghost_range(w) {
                let d1 = cx.dual_matrix(w, g);
                let d2 = cx.dual_matrix(w, g + 1);
                assert!(d1.mul(&d2).is_zero());
                // ⟨dφ, v⟩ = ⟨φ, δv⟩ for dual basis φ and basis v.
                let src = cx.block(w, g);
                let dst = cx.block(w, g + 1);
                for (i, m) in src.basis().iter().enumerate() {
                    let dv = dst.coords(&cx.brst().delta(&Vector::monomial(m.clone())));
                    for k in 0..dst.dim() {
                        let mut phi = vec![Scalar::zero(); dst.dim()];
                        phi[k] = qi(1);
                        assert_eq!(cx.dual_differential(w, g, &phi)[i], dv[k]);
                    }
                }
            }
        }
    }

    #[test]
    fn vacuum_class_and_euler_characteristic() {
        let alg = tensor_algebra(qi(26));
        let cx = Complex::new(&alg).unwrap();
        let h = cx.cohomology(0, 0).unwrap();
        assert!(h.dim >= 1);
        assert!(cx.class_coordinates(&h, &Vector::vacuum()).unwrap().iter().any(|x| !x.is_zero()));
        assert!(cx.block(0, -1).dim() == 0);
        let t = cx.table(4).unwrap();
        for (_, (ec, eh)) in &t.euler {
            assert_eq!(ec, eh);
        }
        // L_tot(0) is exact, so only weight 0 can carry cohomology.
        for row in &t.rows {
            if row.weight != 0 {
                assert_eq!(row.dim, 0, "{row:?}");
            }
        }
    }

    #[test]
    fn anomalous_charge_is_rejected() {
        let alg = tensor_algebra(qi(25));
        let cx = Complex::new(&alg).unwrap();
        assert!(matches!(cx.check_square(2), Err(Error::NotACochainComplex { weight: 2, .. })));
        assert!(cx.table(2).is_err());
    }
}
