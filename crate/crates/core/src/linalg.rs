//! Dense exact linear algebra over the rationals.
//!
//! Blocks in this crate are at most a few hundred rows, so dense storage is
//! simplest. Rank uses fraction-free (Bareiss) elimination on an integer
//! rescaling; kernels and solves use reduced row echelon form.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::fock::{Monomial, Vector};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn from_columns(rows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, xj) in x.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !xj.is_zero() {
                        acc += a * xj;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Clear denominators row by row; rank is unchanged.
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let l = row
                    .iter()
                    .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();
        bareiss_rank(&mut a, self.cols)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let idx = r * m.cols + j;
                m.data[idx] = &m.data[idx] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let sub = &f * m.get(r, j);
                    if !sub.is_zero() {
                        let idx = i * m.cols + j;
                        m.data[idx] -= sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the kernel.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut x = vec![Scalar::zero(); self.cols];
            x[free] = Scalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = -r.get(row, free);
            }
            basis.push(x);
        }
        basis
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Some(x)
    }
}

fn bareiss_rank(a: &mut [Vec<BigInt>], cols: usize) -> usize {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                // Exact by Sylvester's identity.
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Coordinates of vectors against an ordered monomial basis.
#[derive(Clone, Debug)]
pub struct Coordinates {
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl Coordinates {
    pub fn new(basis: Vec<Monomial>) -> Self {
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Coordinates { basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// Panics if `v` has a monomial outside the basis, which would mean a
    /// grading bug upstream.
    pub fn coords(&self, v: &Vector<Scalar>) -> Vec<Scalar> {
        let mut x = vec![Scalar::zero(); self.basis.len()];
        for (m, c) in v {
            let i = *self.index.get(m).expect("vector leaves its graded block");
            x[i] = c.clone();
        }
        x
    }

    pub fn vector(&self, x: &[Scalar]) -> Vector<Scalar> {
        self.basis
            .iter()
            .zip(x)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect()
    }
}

/// Incrementally grown span of sparse vectors, kept in fully reduced
/// echelon form keyed by pivot monomials.
#[derive(Clone, Debug, Default)]
pub struct SparseSpan {
    basis: Vec<(Monomial, Vector<Scalar>)>,
}

impl SparseSpan {
    pub fn new() -> Self {
        SparseSpan::default()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn reduce(&self, v: &Vector<Scalar>) -> Vector<Scalar> {
        let mut r = v.clone();
        for (p, b) in &self.basis {
            let k = r.coeff(p);
            if !k.is_zero() {
                r.axpy(&-k, b);
            }
        }
        r
    }

    pub fn contains(&self, v: &Vector<Scalar>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &Vector<Scalar>) -> bool {
        let r = self.reduce(v);
        let Some((p, k)) = r.iter().next_back().map(|(m, k)| (m.clone(), k.clone())) else {
            return false;
        };
        let r = r.scale_by(&k.recip());
        for (_, b) in &mut self.basis {
            let k = b.coeff(&p);
            if !k.is_zero() {
                b.axpy(&-k, &r);
            }
        }
        self.basis.push((p, r));
        true
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vector<Scalar>> {
        self.basis.iter().map(|(_, b)| b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..rows[0].len())
            .map(|j| rows.iter().map(|r| qi(r[j])).collect())
            .collect();
        Matrix::from_columns(rows.len(), &cols)
    }

    #[test]
    fn rank_and_kernel_small_cases() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.nullspace();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(Zero::is_zero));
        assert_eq!(Matrix::zeros(3, 4).rank(), 0);
        let b = vec![qi(6), qi(12), qi(2)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert!(a.solve(&[qi(1), qi(0), qi(0)]).is_none());
    }

    #[test]
    fn rank_with_fractions() {
        let mut m = Matrix::zeros(2, 2);
        m.set(0, 0, q(1, 2));
        m.set(0, 1, q(1, 3));
        m.set(1, 0, q(3, 2));
        m.set(1, 1, qi(1));
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn sparse_span_tracks_dimension() {
        use crate::fock::Mode;
        let m = |i: i64| Monomial::from_modes(&[Mode::new(0, i)]);
        let v = |a: i64, b: i64, c: i64| -> Vector<Scalar> {
            [(m(-2), qi(a)), (m(-3), qi(b)), (m(-4), qi(c))]
                .into_iter()
                .filter(|(_, k)| !k.is_zero())
                .collect()
        };
        let mut s = SparseSpan::new();
        assert!(s.insert(&v(1, 2, 0)));
        assert!(s.insert(&v(0, 1, 1)));
        assert!(!s.insert(&v(1, 3, 1)));
        assert!(!s.insert(&Vector::zero()));
        assert!(s.contains(&v(2, 5, 1)));
        assert!(s.insert(&v(0, 0, 1)));
        assert_eq!(s.dim(), 3);
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-3i64..=3, 20), rows in 1usize..5) {
            let cols = 20 / rows;
            let mut m = Matrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(i, j, qi(entries[i * cols + j]));
                }
            }
            let rank = m.rank();
            let (_, piv) = m.rref();
            prop_assert_eq!(rank, piv.len());
            let ker = m.nullspace();
            prop_assert_eq!(rank + ker.len(), cols);
            for x in &ker {
                prop_assert!(m.mul_vec(x).iter().all(Zero::is_zero));
            }
            prop_assert_eq!(m.transpose().rank(), rank);
        }
    }
}
