//! Modes of the vertex operator `Y(u, x) = Σ u_(k) x^(-k-1)` on a vacuum module.
//!
//! For `u = a_(p) u'` with `a_(p)` the leftmost creation mode of a canonical
//! monomial, the iterate formula
//!
//! ```text
//! (a_(p) u')_(k) = Σ_{i≥0} (-1)^i C(p,i) [ a_(p-i) u'_(k+i)
//!                                         - (-1)^p (-1)^{|a||u'|} u'_(p+k-i) a_(i) ]
//! ```
//!
//! reduces everything to generator modes, with `1_(k) = δ_{k,-1}`. The sums are
//! finite because every summand lands in a weight block that is empty below
//! [`Algebra::min_weight`].

use num_bigint::BigInt;

use crate::scalar::{Coeff, Scalar};

use super::algebra::Algebra;
use super::mode::{Mode, Monomial};
use super::vector::Vector;

/// Generalized binomial coefficient `C(p, i)` for any integer `p`.
pub fn binomial(p: i64, i: i64) -> BigInt {
    assert!(i >= 0);
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for t in 0..i {
        num *= p - t;
        den *= t + 1;
    }
    num / den
}

impl<C: Coeff> Algebra<C> {
    /// The `k`-th mode of the field of `u`, applied to `w`.
    pub fn field_mode(&self, u: &Vector<C>, k: i64, w: &Vector<C>) -> Vector<C> {
        let mut out = Vector::zero();
        for (um, uc) in u {
            for (wm, wc) in w {
                out.axpy(&uc.mul(wc), &self.field_mode_monomial(um, k, wm));
            }
        }
        out
    }

    /// The field mode `u_(k)` for a monomial `u` on a monomial `w`.
    pub fn field_mode_monomial(&self, u: &Monomial, k: i64, w: &Monomial) -> Vector<C> {
        let wt = self.monomial_grade(u).weight + self.monomial_grade(w).weight - k - 1;
        if wt < self.min_weight() {
            return Vector::zero();
        }
        let Some((&lead, tail)) = u.modes().split_first() else {
            return if k == -1 {
                Vector::monomial(w.clone())
            } else {
                Vector::zero()
            };
        };
        let sym = self.symbol(lead);
        let offset = sym.offset();
        let p = lead.idx() + offset;
        if tail.is_empty() && p == -1 {
            return self.apply_to_monomial(Mode::new(lead.sym, k - offset), w);
        }
        let key = (u.clone(), k, w.clone());
        if let Some(v) = self.field_cache.get(&key) {
            return v.clone();
        }
        let rest = Monomial::from_modes(tail);
        let rest_wt = self.monomial_grade(&rest).weight;
        let gen_wt = sym.weight;
        let w_wt = self.monomial_grade(w).weight;
        let min = self.min_weight();
        let rest_odd = self.monomial_odd(&rest);
        let cross = if sym.odd && rest_odd { -1 } else { 1 };
        let p_sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };

        let mut out = Vector::zero();
        let w_vec = Vector::monomial(w.clone());

        // a_(p-i) (u'_(k+i) w): needs weight of u'_(k+i) w at least min.
        let max_i1 = rest_wt + w_wt - k - 1 - min;
        for i in 0..=max_i1.max(-1) {
            let inner = self.field_mode_monomial(&rest, k + i, w);
            if inner.is_zero() {
                continue;
            }
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let coef = Scalar::from_integer(binomial(p, i) * sign);
            let a = Mode::new(lead.sym, p - i - offset);
            out.axpy(&C::from_scalar(coef), &self.apply(a, &inner));
        }
        // u'_(p+k-i) (a_(i) w): needs weight of a_(i) w at least min.
        let max_i2 = gen_wt + w_wt - 1 - min;
        for i in 0..=max_i2.max(-1) {
            let a = Mode::new(lead.sym, i - offset);
            let aw = self.apply(a, &w_vec);
            if aw.is_zero() {
                continue;
            }
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let coef = Scalar::from_integer(binomial(p, i) * (-sign * p_sign * cross));
            let mut acc = Vector::zero();
            for (m, c) in &aw {
                acc.axpy(c, &self.field_mode_monomial(&rest, p + k - i, m));
            }
            out.axpy(&C::from_scalar(coef), &acc);
        }
        self.field_cache.insert(key, out.clone());
        out
    }

    /// `Σ_k` window of field modes `u_(k) w` for `k` in `lo..=hi`.
    pub fn field_modes(&self, u: &Vector<C>, w: &Vector<C>, lo: i64, hi: i64) -> Vec<(i64, Vector<C>)> {
        (lo..=hi).map(|k| (k, self.field_mode(u, k, w))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generalized_binomials() {
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(-2, 2), BigInt::from(3));
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 3), BigInt::from(0));
        assert_eq!(binomial(7, 0), BigInt::from(1));
    }
}
