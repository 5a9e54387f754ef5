//! Factorization of the sewing map.
//!
//! Operators `exp(Σ A_j x^{j+1} d/dx)` act on functions by composition with
//! `e_A(x)`, so a product of operators corresponds to the composite of their
//! maps taken in reverse order. Written as maps, the sewing equation reads
//!
//! ```text
//! 1 / e_{-B}(1 / (α e_A(x)))  =  λ g(h(x)),
//! g = e_{-Ψ⁺},   h(x) = 1 / e_{Ψ⁻}(1/x),   λ = α e^{-Ψ_0},
//! ```
//!
//! with `g` a power series `x + O(x²)` and `h = x + Σ_{k≥0} h_k x^{-k}`. The
//! unknowns are found grade by grade in `(degree, ε)`: at each grade the
//! residual is linear in the new parts of `g`, `ℓ = e^{-Ψ_0} - 1` and `h`,
//! which occupy disjoint powers of `x`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::qi;

use super::map::{exp_vector_field, sequence_of, FormalMap};
use super::series::WeightedSeries as Series;

/// `Ψ_j` for `1 ≤ |j| ≤ J` together with `Ψ_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiSolution {
    /// `Ψ_1, ..., Ψ_J`.
    pub plus: Vec<Series>,
    /// `Ψ_{-1}, ..., Ψ_{-J}`.
    pub minus: Vec<Series>,
    pub zero: Series,
}

impl PsiSolution {
    /// `Ψ_j` for any `j` in range.
    pub fn get(&self, j: i64) -> &Series {
        match j {
            0 => &self.zero,
            j if j > 0 => &self.plus[j as usize - 1],
            j => &self.minus[(-j) as usize - 1],
        }
    }

    /// Weight set of each `Ψ_j`, `j = -J..=J`.
    pub fn weights(&self) -> Vec<(i64, Vec<i64>)> {
        let n = self.plus.len() as i64;
        (-n..=n).map(|j| (j, self.get(j).weights())).collect()
    }
}

/// Solves the sewing equation for sequences `a`, `b` and a unit `alpha`, all
/// at truncation degree `degree`, returning `Ψ_j` for `|j| ≤ j_max`.
pub fn solve_psi(a: &[Series], alpha: &Series, b: &[Series], degree: i32, j_max: usize) -> Result<PsiSolution> {
    let trunc = |s: &Series| s.truncate(degree);
    let a: Vec<Series> = a.iter().map(trunc).collect();
    let b: Vec<Series> = b.iter().map(trunc).collect();
    let alpha = alpha.truncate(degree);
    let alpha0 = alpha.grade_part((0, 0));
    let alpha0_inv = alpha0.inverse()?;
    if !alpha.sub(&alpha0).is_nilpotent() {
        return Err(Error::NonUnitLeadingCoefficient);
    }

    let ea = exp_vector_field(&a, degree, None)?;
    let neg_b: Vec<Series> = b.iter().map(Series::neg).collect();
    let e_neg_b = exp_vector_field(&neg_b, degree, None)?;
    let inner = ea.scale(&alpha).reciprocal()?;
    let lhs = e_neg_b.compose(&inner)?.reciprocal()?;

    let mut g = FormalMap::x(degree, None);
    let mut h = FormalMap::x(degree, None);
    let mut ell = Series::zero(degree);
    let rhs = |g: &FormalMap, h: &FormalMap, ell: &Series| -> Result<FormalMap> {
        let lambda = alpha.mul(&Series::one(degree).add(ell));
        Ok(g.compose(h)?.scale(&lambda))
    };

    for d in 0..=degree {
        for e in 0..=1 {
            if (d, e) == (0, 0) {
                continue;
            }
            let r = lhs.sub(&rhs(&g, &h, &ell)?).grade_part((d, e));
            for (k, c) in r.terms() {
                let delta = c.mul(&alpha0_inv);
                let bump = FormalMap::monomial(k, delta.clone(), None);
                match k {
                    k if k >= 2 => g = g.add(&bump),
                    1 => ell.add_assign(&delta),
                    _ => h = h.add(&bump),
                }
            }
        }
    }
    let residual = lhs.sub(&rhs(&g, &h, &ell)?);
    if !residual.is_zero() {
        return Err(Error::InconsistentTruncation(format!(
            "sewing equation has residual {residual} after the last grade"
        )));
    }

    let plus = sequence_of(&g, j_max)?.iter().map(Series::neg).collect();
    // e_{Ψ⁻}(y) = 1 / h(1/y)
    let e_minus = h.at_reciprocal_argument().reciprocal()?;
    let minus = sequence_of(&e_minus, j_max)?;
    let zero = ell.log1p()?.scale(&qi(-1));
    Ok(PsiSolution { plus, minus, zero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sewing::series::Var;

    fn vars(f: fn(u16) -> Var, n: u16, d: i32) -> Vec<Series> {
        (1..=n).map(|j| Series::var(f(j), d)).collect()
    }

    #[test]
    fn trivial_data_gives_zero() {
        let d = 3;
        let a0 = Series::var(Var::UnitA, d);
        let psi = solve_psi(&[], &a0, &[], d, 3).unwrap();
        assert!(psi.plus.iter().chain(&psi.minus).all(Series::is_zero));
        assert!(psi.zero.is_zero());
    }

    #[test]
    fn linear_terms() {
        let d = 3;
        let alpha = Series::var(Var::UnitA, d);
        let a = vars(Var::A1, 3, d);
        let b = vars(Var::B0, 3, d);
        let psi = solve_psi(&a, &alpha, &b, d, 3).unwrap();
        for j in 1..=3 {
            assert_eq!(psi.plus[j - 1].up_to_degree(1), a[j - 1].neg());
            let scale = Series::term(super::super::series::Mono::var(Var::UnitA, -(j as i32)), qi(-1), d);
            assert_eq!(psi.minus[j - 1].up_to_degree(1), b[j - 1].mul(&scale));
        }
        assert!(psi.zero.up_to_degree(1).is_zero());
        // the first cross term: Ψ_0 = -A_1 B_1 / a_0 + ...
        assert!(!psi.zero.is_zero());
    }

    #[test]
    fn psi_is_weight_homogeneous() {
        let d = 4;
        let alpha = Series::var(Var::UnitA, d);
        let psi = solve_psi(&vars(Var::A1, 3, d), &alpha, &vars(Var::B0, 3, d), d, 4).unwrap();
        for (j, w) in psi.weights() {
            assert!(w.is_empty() || w == vec![j], "Ψ_{j} has weights {w:?}");
        }
    }

    #[test]
    fn raising_the_degree_only_adds_higher_terms() {
        let alpha = |d| Series::var(Var::UnitA, d);
        let low = solve_psi(&vars(Var::A1, 2, 3), &alpha(3), &vars(Var::B0, 2, 3), 3, 3).unwrap();
        let high = solve_psi(&vars(Var::A1, 2, 5), &alpha(5), &vars(Var::B0, 2, 5), 5, 3).unwrap();
        for j in -3..=3 {
            assert_eq!(high.get(j).truncate(3), *low.get(j));
        }
    }
}
