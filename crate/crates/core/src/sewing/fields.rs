//! The left-invariant vector fields `𝕃(j)` at a generic point, their
//! commutators, and the central term of the Virasoro relations.
//!
//! `𝕃(j)` is the derivative of `P ↦ sew(P, Q)` along the curve of `Q`
//! through the identity in direction `j` (`B¹_j` for `j > 0`, `b₀` for
//! `j = 0`, `B⁰_{-j}` for `j < 0`), with a minus sign. The derivative is read
//! off from the `ε` part of a sewing with `ε² = 0`.
//!
//! The `C ∂/∂C` component of `𝕃(-j)` is `c γ_j(a₀, A¹)`, where `γ_j` is the
//! first-order part of the determinant-line factor. It is not computed from
//! a closed form: `γ_j` is expanded in monomials `a₀^{-j} A¹_λ` with unknown
//! coefficients, and the Virasoro relations themselves fix them up to an
//! overall scale and a gauge freedom.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::linalg::Matrix;
use crate::scalar::{format_scalar, qi, Scalar};

use super::map::{exp_vector_field, sequence_of};
use super::moduli::{sew, ModuliElement, ScaleReading};
use super::psi::solve_psi;
use super::series::{Mono, Var, WeightedSeries as Series};

/// Where the fields are computed: the generic point with `vars` coordinates
/// on each side, at truncation degree `degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FieldSetup {
    pub vars: u16,
    pub degree: i32,
    pub reading: ScaleReading,
}

/// `Σ_k a0_k ∂/∂A⁰_k + Σ_k a1_k ∂/∂A¹_k + unit ∂/∂a₀`.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct VectorField {
    pub a0: Vec<Series>,
    pub a1: Vec<Series>,
    pub unit: Series,
}

impl VectorField {
    fn zero(n: usize, degree: i32) -> Self {
        VectorField {
            a0: vec![Series::zero(degree); n],
            a1: vec![Series::zero(degree); n],
            unit: Series::zero(degree),
        }
    }

    fn from_tangent(t: &ModuliElement, n: usize, degree: i32) -> Self {
        let pick = |v: &[Series]| (0..n).map(|k| v.get(k).map_or(Series::zero(degree), |s| s.eps_part().neg())).collect();
        VectorField {
            a0: pick(&t.a0),
            a1: pick(&t.a1),
            unit: t.unit.eps_part().neg(),
        }
    }

    /// Applies the field to a function of the coordinates.
    pub fn apply(&self, f: &Series) -> Series {
        let mut out = self.unit.mul(&f.derivative(Var::UnitA));
        for (k, c) in self.a0.iter().enumerate() {
            out.add_assign(&c.mul(&f.derivative(Var::A0(k as u16 + 1))));
        }
        for (k, c) in self.a1.iter().enumerate() {
            out.add_assign(&c.mul(&f.derivative(Var::A1(k as u16 + 1))));
        }
        out
    }

    /// Coefficient of `a₀ ∂/∂a₀`.
    pub fn euler_coefficient(&self) -> Result<Series> {
        Ok(self.unit.mul(&Series::var(Var::UnitA, self.unit.truncation_degree()).inverse()?))
    }

    fn combine(&self, other: &Self, k: &Scalar) -> Self {
        let f = |x: &[Series], y: &[Series]| x.iter().zip(y).map(|(a, b)| a.add(&b.scale(k))).collect();
        VectorField {
            a0: f(&self.a0, &other.a0),
            a1: f(&self.a1, &other.a1),
            unit: self.unit.add(&other.unit.scale(k)),
        }
    }

    /// `[X, Y]` coordinate by coordinate: `X(Y^i) - Y(X^i)`.
    pub fn bracket(&self, other: &Self) -> Self {
        let c = |y: &Series, x: &Series| self.apply(y).sub(&other.apply(x));
        VectorField {
            a0: self.a0.iter().zip(&other.a0).map(|(x, y)| c(y, x)).collect(),
            a1: self.a1.iter().zip(&other.a1).map(|(x, y)| c(y, x)).collect(),
            unit: c(&other.unit, &self.unit),
        }
    }

    /// Coordinates `k ≤ n`, terms of degree at most `d`.
    pub fn window(&self, n: usize, d: i32) -> Self {
        let w = |v: &[Series]| v.iter().take(n).map(|s| s.up_to_degree(d)).collect();
        VectorField {
            a0: w(&self.a0),
            a1: w(&self.a1),
            unit: self.unit.up_to_degree(d),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a0.iter().chain(&self.a1).all(Series::is_zero) && self.unit.is_zero()
    }

    /// Nonzero components, for reports.
    pub fn components(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (name, v) in [("A0", &self.a0), ("A1", &self.a1)] {
            for (k, s) in v.iter().enumerate() {
                if !s.is_zero() {
                    out.push((format!("d/d{name}_{}", k + 1), s.to_string()));
                }
            }
        }
        if !self.unit.is_zero() {
            out.push(("d/da0".into(), self.unit.to_string()));
        }
        out
    }
}

impl std::fmt::Debug for VectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.components().into_iter().map(|(d, c)| format!("({c}) {d}")).collect();
        write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

fn direction(j: i64, degree: i32) -> ModuliElement {
    let eps = Series::var(Var::Eps, degree);
    let zero = Series::zero(degree);
    let slot = |k: usize| {
        let mut v = vec![zero.clone(); k];
        v[k - 1] = eps.clone();
        v
    };
    let one = Series::one(degree);
    match j {
        0 => ModuliElement::new(vec![], one.add(&eps), vec![], one),
        j if j > 0 => ModuliElement::new(vec![], one.clone(), slot(j as usize), one),
        j => ModuliElement::new(slot((-j) as usize), one.clone(), vec![], one),
    }
}

/// `𝕃(j)` at the generic point, without its `C ∂/∂C` component.
pub fn vector_field(j: i64, setup: &FieldSetup) -> Result<VectorField> {
    vector_field_at(j, &ModuliElement::symbolic(setup.vars, setup.degree), setup)
}

/// `𝕃(j)` at a given point, coordinates `k ≤ setup.vars`.
pub fn vector_field_at(j: i64, point: &ModuliElement, setup: &FieldSetup) -> Result<VectorField> {
    let n = setup.vars as usize;
    let sewn = sew(point, &direction(j, setup.degree), Some(n), setup.reading)?;
    Ok(VectorField::from_tangent(&sewn.element, n, setup.degree))
}

/// `𝕃(-j)`, `j > 0`, assembled from the derivatives of `Ψ` and `C⁰` in
/// `B⁰_j`: `Σ ∂Ψ_k ∂/∂A¹_k + ∂Ψ_0 a₀ ∂/∂a₀ - Σ ∂C⁰_k ∂/∂A⁰_k`.
pub fn negative_field_from_psi(j: usize, point: &ModuliElement, setup: &FieldSetup) -> Result<VectorField> {
    let (n, d) = (setup.vars as usize, setup.degree);
    let b = direction(-(j as i64), d).a0;
    let psi = solve_psi(&point.a1, &point.unit, &b, d, n)?;
    let cap = Some(n as i32 + 1);
    let neg_minus: Vec<Series> = psi.minus.iter().map(Series::neg).collect();
    let outgoing = exp_vector_field(&point.a0, d, cap)?.compose(&exp_vector_field(&neg_minus, d, cap)?)?;
    let c0 = sequence_of(&outgoing, n)?;
    let mut out = VectorField::zero(n, d);
    for k in 0..n {
        out.a1[k] = psi.plus[k].eps_part();
        out.a0[k] = c0[k].eps_part().neg();
    }
    out.unit = point.unit.mul(&psi.zero.eps_part());
    Ok(out)
}

/// Outcome of one pair in [`witt_check`].
#[derive(Clone, Debug, Serialize)]
pub struct PairResult {
    pub m: i64,
    pub n: i64,
    /// Components of `[𝕃(m), 𝕃(n)] - (m - n) 𝕃(m + n)` inside the exact window.
    pub residual: Vec<(String, String)>,
}

impl PairResult {
    pub fn passed(&self) -> bool {
        self.residual.is_empty()
    }
}

/// The central term, fitted.
#[derive(Clone, Debug, Serialize)]
pub struct CentralFit {
    #[serde(with = "crate::scalar::exact")]
    pub declared: Scalar,
    /// Coefficients of `γ_j` plus one `κ_m` per `m`.
    pub unknowns: usize,
    pub equations: usize,
    pub nullity: usize,
    /// Rank of the solution space projected onto the `κ_m`. The linear
    /// cocycle `κ_m = m` is a coboundary (it comes from rescaling `C` by a
    /// power of `a₀`), so up to 2 is expected.
    pub kappa_rank: usize,
    /// Whether every solution has `12 (κ_m - m κ_1) / (m³ - m)` independent
    /// of `m`.
    pub uniform: bool,
    /// `κ_m` for `m = 1..=M` of one solution, scaled so that
    /// `κ_2 - 2 κ_1 = 1/2`; this fixes the overall scale of `γ` from the
    /// `m = 2` relation.
    #[serde(serialize_with = "crate::scalar::exact::indexed::serialize")]
    pub kappa: Vec<(i64, Scalar)>,
    /// `c · 12 (κ_m - m κ_1) / (m³ - m)` for `m ≥ 2`.
    #[serde(serialize_with = "crate::scalar::exact::indexed::serialize")]
    pub fitted: Vec<(i64, Scalar)>,
}

impl CentralFit {
    pub fn consistent(&self) -> bool {
        (1..=2).contains(&self.kappa_rank)
            && self.uniform
            && self.fitted.len() >= 2
            && self.fitted.iter().all(|(_, c)| *c == self.declared)
    }
}

/// Result of [`witt_check`].
#[derive(Clone, Debug, Serialize)]
pub struct WittReport {
    pub setup: FieldSetup,
    pub range: i64,
    /// Coordinates `k ≤ exact_index` and degrees `≤ exact_degree` are free of
    /// truncation effects and are the ones compared.
    pub exact_index: usize,
    pub exact_degree: i32,
    pub pairs: Vec<PairResult>,
    pub central: CentralFit,
}

impl WittReport {
    pub fn noncentral_passed(&self) -> bool {
        self.pairs.iter().all(PairResult::passed)
    }

    pub fn passed(&self) -> bool {
        self.noncentral_passed() && self.central.consistent()
    }
}

/// Setup used by [`witt_check`] for range `m`: enough coordinates for the
/// fields `𝕃(j)`, `|j| < 2m`, and a window of `m` exact coordinates.
pub fn witt_setup(range: i64, degree: i32, reading: ScaleReading) -> FieldSetup {
    FieldSetup {
        vars: 2 * range.max(1) as u16,
        degree,
        reading,
    }
}

fn partitions(n: usize, max_part: usize, max_len: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    if max_len == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(n)).rev() {
        for mut rest in partitions(n - first, first, max_len - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `[𝕃(m), 𝕃(n)] = (m - n) 𝕃(m + n) + (c/12)(m³ - m) δ_{m+n,0} 𝕂` for all
/// `m < n` with `|m|, |n| ≤ range`.
///
/// Fields are computed at the generic point with `2 range` coordinates,
/// which makes coordinates `k ≤ range` of every commutator exact; the
/// comparison drops the top degree, which a derivative cannot see.
pub fn witt_check(range: i64, degree: i32, central_charge: &Scalar, reading: ScaleReading) -> Result<WittReport> {
    let setup = witt_setup(range, degree, reading);
    let top = 2 * range - 1;
    let fields: BTreeMap<i64, VectorField> = std::thread::scope(|s| {
        let handles: Vec<_> = (-top..=top).map(|j| (j, s.spawn(move || vector_field(j, &setup)))).collect();
        handles
            .into_iter()
            .map(|(j, h)| Ok((j, h.join().expect("field computation panicked")?)))
            .collect::<Result<_>>()
    })?;
    let exact_index = setup.vars as usize - range as usize;
    let exact_degree = degree - 1;

    let mut pairs = Vec::new();
    for m in -range..=range {
        for n in m + 1..=range {
            let lhs = fields[&m].bracket(&fields[&n]);
            let rhs = &fields[&(m + n)];
            let r = lhs.combine(rhs, &qi(-(m - n))).window(exact_index, exact_degree);
            pairs.push(PairResult {
                m,
                n,
                residual: r.components(),
            });
        }
    }
    let central = fit_central(range, &fields, &setup, central_charge)?;
    Ok(WittReport {
        setup,
        range,
        exact_index,
        exact_degree,
        pairs,
        central,
    })
}

fn fit_central(range: i64, fields: &BTreeMap<i64, VectorField>, setup: &FieldSetup, c: &Scalar) -> Result<CentralFit> {
    let d = setup.degree;
    let top = (2 * range - 1) as usize;
    // unknown u = (j, λ): γ_j ∋ a₀^{-j} A¹_λ
    let mut basis: Vec<(usize, Series)> = Vec::new();
    for j in 1..=top {
        for lambda in partitions(j, setup.vars as usize, d.max(0) as usize) {
            let mut s = Series::term(Mono::var(Var::UnitA, -(j as i32)), qi(1), d);
            for part in lambda {
                s = s.mul(&Series::var(Var::A1(part as u16), d));
            }
            basis.push((j, s));
        }
    }
    let n_u = basis.len();
    let n_k = range as usize;
    let gamma = |u: usize, idx: i64| -> Option<&Series> {
        let (j, s) = &basis[u];
        (idx < 0 && (-idx) as usize == *j).then_some(s)
    };

    // one row per (pair, monomial)
    let mut rows: BTreeMap<(i64, i64, Mono), BTreeMap<usize, Scalar>> = BTreeMap::new();
    for m in -range..=range {
        for n in m + 1..=range {
            if m >= 0 {
                continue;
            }
            for u in 0..n_u {
                let mut r = Series::zero(d);
                if let Some(g) = gamma(u, n) {
                    r.add_assign(&fields[&m].apply(g));
                }
                if let Some(g) = gamma(u, m) {
                    r.add_assign(&fields[&n].apply(g).neg());
                }
                if let Some(g) = gamma(u, m + n) {
                    r.add_assign(&g.scale(&qi(-(m - n))));
                }
                for (mono, k) in r.up_to_degree(d - 1).terms() {
                    rows.entry((m, n, mono.clone())).or_default().insert(u, k.clone());
                }
            }
            if m + n == 0 {
                // the residual is κ_m = -κ_n on the constant monomial
                rows.entry((m, n, Mono::one())).or_default().insert(n_u + n as usize - 1, qi(1));
            }
        }
    }
    let mut mat = Matrix::zeros(rows.len(), n_u + n_k);
    for (i, row) in rows.values().enumerate() {
        for (col, k) in row {
            mat.set(i, *col, k.clone());
        }
    }
    let null = mat.nullspace();
    let kappa_cols: Vec<Vec<Scalar>> = null.iter().map(|v| v[n_u..].to_vec()).collect();
    let kappa_rank = if kappa_cols.is_empty() {
        0
    } else {
        Matrix::from_columns(n_k, &kappa_cols).rank()
    };
    // κ_m = β m is a coboundary; the class is read from κ_m - m κ_1
    let reduced = |k: &[Scalar], m: i64| -> Scalar {
        let i = m as usize - 1;
        (&k[i] - &k[0] * qi(m)) * qi(12) / qi(m * m * m - m)
    };
    let mut kappa = Vec::new();
    let mut fitted = Vec::new();
    let mut uniform = n_k >= 2;
    if n_k >= 2 {
        for k in &kappa_cols {
            let a2 = reduced(k, 2);
            uniform &= (3..=n_k as i64).all(|m| reduced(k, m) == a2);
        }
    }
    if let Some(k) = kappa_cols.iter().find(|k| k.len() >= 2 && !num_traits::Zero::is_zero(&reduced(k, 2))) {
        let norm = qi(1) / reduced(k, 2);
        let k: Vec<Scalar> = k.iter().map(|x| x * &norm).collect();
        for m in 1..=n_k as i64 {
            if m >= 2 {
                fitted.push((m, c * reduced(&k, m)));
            }
            kappa.push((m, k[m as usize - 1].clone()));
        }
    }
    Ok(CentralFit {
        declared: c.clone(),
        unknowns: n_u + n_k,
        equations: rows.len(),
        nullity: null.len(),
        kappa_rank,
        uniform,
        kappa,
        fitted,
    })
}

impl std::fmt::Display for CentralFit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let fitted: Vec<String> = self.fitted.iter().map(|(m, c)| format!("m={m}: {}", format_scalar(c))).collect();
        write!(
            f,
            "declared c = {}, fitted {} (kappa rank {}, nullity {}, uniform {})",
            format_scalar(&self.declared),
            fitted.join(", "),
            self.kappa_rank,
            self.nullity,
            self.uniform
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn setup(vars: u16, degree: i32) -> FieldSetup {
        FieldSetup {
            vars,
            degree,
            reading: ScaleReading::Full,
        }
    }

    #[test]
    fn zero_mode_is_minus_euler_field() {
        let s = setup(3, 3);
        let l0 = vector_field(0, &s).unwrap();
        assert_eq!(l0.euler_coefficient().unwrap(), Series::constant(qi(-1), 3));
        assert!(l0.a0.iter().chain(&l0.a1).all(Series::is_zero));
    }

    #[test]
    fn positive_field_at_a_point_without_incoming_coordinate() {
        let s = setup(4, 3);
        let d = s.degree;
        let mut p = ModuliElement::symbolic(4, d);
        p.a1.clear();
        let l2 = vector_field_at(2, &p, &s).unwrap();
        let a0sq = Series::var(Var::UnitA, d).mul(&Series::var(Var::UnitA, d));
        assert_eq!(l2.a1[1], a0sq.neg());
        assert!(l2.a1.iter().enumerate().all(|(k, c)| k == 1 || c.is_zero()));
        assert!(l2.a0.iter().all(Series::is_zero) && l2.unit.is_zero());
    }

    #[test]
    fn minus_one_field_at_identity() {
        let s = setup(3, 3);
        let l = vector_field_at(-1, &ModuliElement::identity(3), &s).unwrap();
        assert_eq!(l.a0[0], Series::constant(qi(-1), 3));
        assert!(l.a0[1..].iter().chain(&l.a1).all(Series::is_zero) && l.unit.is_zero());
    }

    #[test]
    fn negative_fields_match_the_psi_formula() {
        let s = setup(3, 3);
        let p = ModuliElement::symbolic(3, 3);
        for j in 1..=3 {
            assert_eq!(vector_field(-(j as i64), &s).unwrap(), negative_field_from_psi(j, &p, &s).unwrap());
        }
    }

    #[test]
    fn partitions_are_listed() {
        assert_eq!(partitions(4, 4, 4).len(), 5);
        assert_eq!(partitions(4, 2, 4), vec![vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(partitions(4, 4, 2).len(), 3);
    }

    #[test]
    fn witt_relations_at_small_range() {
        let r = witt_check(2, 3, &q(26, 1), ScaleReading::Full).unwrap();
        assert!(r.noncentral_passed(), "{:?}", r.pairs);
        assert_eq!(r.pairs.len(), 10);
        // one fitted value only: nothing to compare it with
        assert!(!r.central.consistent());
        assert_eq!(r.central.fitted, vec![(2, q(26, 1))]);
    }

    #[test]
    fn witt_relations_with_central_fit() {
        for reading in [ScaleReading::Full, ScaleReading::BareA0] {
            let r = witt_check(3, 5, &q(26, 1), reading).unwrap();
            assert!(r.noncentral_passed(), "{:?}", r.pairs);
            assert!(r.central.consistent(), "{}", r.central);
            assert_eq!(r.central.fitted, vec![(2, q(26, 1)), (3, q(26, 1))]);
        }
    }

    #[test]
    fn sample_brackets() {
        let s = setup(6, 5);
        let f = |j| vector_field(j, &s).unwrap();
        let window = |x: &VectorField| x.window(3, 4);
        // [L(2), L(1)] = L(3)
        assert_eq!(window(&f(2).bracket(&f(1))), window(&f(3)));
        // [L(1), L(-1)] = 2 L(0), no central term
        let l0 = f(0);
        assert_eq!(window(&f(1).bracket(&f(-1))), window(&l0.combine(&l0, &qi(1))));
    }

    #[test]
    fn readings_give_the_same_fields() {
        let mut s = setup(4, 3);
        for j in [-2, 0, 2] {
            let full = vector_field(j, &s).unwrap();
            s.reading = ScaleReading::BareA0;
            assert_eq!(vector_field(j, &s).unwrap(), full);
            s.reading = ScaleReading::Full;
        }
    }
}
