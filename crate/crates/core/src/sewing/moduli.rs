use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{q, Scalar};

use super::map::{exp_vector_field, sequence_of};
use super::psi::{solve_psi, PsiSolution};
use super::series::{Var, WeightedSeries as Series};

/// A point `(A⁰, (a₀, A¹))` of the moduli space, plus the coordinate `C` of
/// the determinant line.
///
/// Sewing multiplies the `C` slots and leaves out the factor `e^{cΓ}`, whose
/// closed form is not computed here; the central term of the vector fields
/// is recovered separately (see [`super::witt_check`]).
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct ModuliElement {
    /// `A⁰_1, A⁰_2, ...`: the local coordinate at the outgoing puncture.
    pub a0: Vec<Series>,
    /// `a₀`.
    pub unit: Series,
    /// `A¹_1, A¹_2, ...`: the local coordinate at the incoming puncture.
    pub a1: Vec<Series>,
    pub c: Series,
}

/// How the rescaling in the incoming coordinate of a sewn element is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleReading {
    /// `C¹` from `b₀ e_{B¹}(a₀ e^{-Ψ₀} e_{-Ψ⁺}(x))`, normalized by `c₀`.
    #[default]
    Full,
    /// `C¹` from `b₀ e_{B¹}(a₀ e_{-Ψ⁺}(x))`, normalized by its own leading
    /// coefficient; `c₀` is unchanged.
    BareA0,
}

fn trim(mut v: Vec<Series>) -> Vec<Series> {
    while v.last().is_some_and(Series::is_zero) {
        v.pop();
    }
    v
}

impl ModuliElement {
    pub fn new(a0: Vec<Series>, unit: Series, a1: Vec<Series>, c: Series) -> Self {
        ModuliElement {
            a0: trim(a0),
            unit,
            a1: trim(a1),
            c,
        }
    }

    /// `(0, (1, 0))` with `C = 1`.
    pub fn identity(degree: i32) -> Self {
        Self::new(vec![], Series::one(degree), vec![], Series::one(degree))
    }

    /// A numeric point. Every entry of `A⁰` and `A¹` carries one factor of the
    /// bookkeeping variable `t`, so truncating at degree `D` keeps products of
    /// at most `D` entries.
    pub fn numeric(a0: &[Scalar], unit: Scalar, a1: &[Scalar], degree: i32) -> Self {
        let t = Series::var(Var::T, degree);
        let lift = |xs: &[Scalar]| xs.iter().map(|x| t.scale(x)).collect();
        Self::new(lift(a0), Series::constant(unit, degree), lift(a1), Series::one(degree))
    }

    /// The generic point with variables `A⁰_k`, `A¹_k` for `k ≤ n` and `a₀`.
    pub fn symbolic(n: u16, degree: i32) -> Self {
        Self::new(
            (1..=n).map(|k| Series::var(Var::A0(k), degree)).collect(),
            Series::var(Var::UnitA, degree),
            (1..=n).map(|k| Series::var(Var::A1(k), degree)).collect(),
            Series::one(degree),
        )
    }

    /// Same as [`Self::symbolic`] with the `B` variables.
    pub fn symbolic_b(n: u16, degree: i32) -> Self {
        Self::new(
            (1..=n).map(|k| Series::var(Var::B0(k), degree)).collect(),
            Series::var(Var::UnitB, degree),
            (1..=n).map(|k| Series::var(Var::B1(k), degree)).collect(),
            Series::one(degree),
        )
    }

    pub fn truncation_degree(&self) -> i32 {
        self.unit.truncation_degree()
    }

    pub fn truncate(&self, degree: i32) -> Self {
        let t = |v: &[Series]| v.iter().map(|s| s.truncate(degree)).collect();
        Self::new(t(&self.a0), self.unit.truncate(degree), t(&self.a1), self.c.truncate(degree))
    }

    /// Coordinates beyond index `n` dropped.
    pub fn restrict(&self, n: usize) -> Self {
        let r = |v: &[Series]| v.iter().take(n).cloned().collect();
        Self::new(r(&self.a0), self.unit.clone(), r(&self.a1), self.c.clone())
    }

    fn entries(&self) -> impl Iterator<Item = (usize, &Series)> {
        self.a0.iter().enumerate().chain(self.a1.iter().enumerate()).map(|(i, s)| (i + 1, s))
    }

    /// Largest `k / d` over nonzero entries `X_k` whose lowest degree is `d`.
    /// `None` if some nonzero entry has a degree-0 part.
    pub fn shift_ratio(&self) -> Option<Ratio<i64>> {
        let mut best = Ratio::zero();
        for (k, s) in self.entries() {
            match s.min_degree() {
                None => {}
                Some(0) => return None,
                Some(d) => best = best.max(Ratio::new(k as i64, d as i64)),
            }
        }
        Some(best)
    }

    /// Weight of every entry: `A⁰_k` should have weight `-k`, `A¹_k` weight `k`.
    pub fn weight_defects(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |name: &str, k: usize, s: &Series, w: i64| {
            let ws = s.weights();
            if !(ws.is_empty() || ws == [w]) {
                out.push(format!("{name}_{k} has weights {ws:?}, expected {w}"));
            }
        };
        for (i, s) in self.a0.iter().enumerate() {
            check("C0", i + 1, s, -(i as i64 + 1));
        }
        for (i, s) in self.a1.iter().enumerate() {
            check("C1", i + 1, s, i as i64 + 1);
        }
        check("c0", 0, &self.unit, 0);
        out
    }
}

impl fmt::Display for ModuliElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Series]| v.iter().map(|s| format!("[{s}]")).collect::<Vec<_>>().join(", ");
        write!(f, "(({}), ([{}], ({})); C = {})", list(&self.a0), self.unit, list(&self.a1), self.c)
    }
}

impl fmt::Debug for ModuliElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Result of sewing, with the factorization that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct Sewn {
    pub element: ModuliElement,
    pub psi: PsiSolution,
    /// x-order to which the coordinates were computed.
    pub order: usize,
}

/// Default x-order: with every entry `X_k` of degree at least `k / s`, no
/// coordinate beyond `s D` survives truncation at degree `D`.
pub fn default_order(p: &ModuliElement, q: &ModuliElement, degree: i32) -> Result<usize> {
    let (Some(sp), Some(sq)) = (p.shift_ratio(), q.shift_ratio()) else {
        return Err(Error::InconsistentTruncation(
            "entries with a degree-0 part need an explicit x-order".into(),
        ));
    };
    let n = (sp.max(sq) * Ratio::from_integer(degree as i64)).floor().to_integer();
    Ok(n.max(1) as usize)
}

/// Sews the incoming puncture of `p` to the outgoing puncture of `q`.
///
/// `C⁰` and `C¹` are computed through
/// `e_{C⁰} = e_{A⁰} ∘ e_{-Ψ⁻}` and `c₀ e_{C¹} = b₀ e_{B¹} ∘ (λ e_{-Ψ⁺})`,
/// where `Ψ` solves the sewing equation for `(A¹, a₀, B⁰)` and
/// `c₀ = a₀ b₀ e^{-Ψ₀}`.
pub fn sew(p: &ModuliElement, q: &ModuliElement, order: Option<usize>, reading: ScaleReading) -> Result<Sewn> {
    let degree = p.truncation_degree().min(q.truncation_degree());
    let n = match order {
        Some(n) => n,
        None => default_order(p, q, degree)?,
    };
    let cap = Some(n as i32 + 1);
    let psi = solve_psi(&p.a1, &p.unit, &q.a0, degree, n)?;
    let neg = |v: &[Series]| v.iter().map(Series::neg).collect::<Vec<_>>();

    let outgoing = exp_vector_field(&p.a0, degree, cap)?.compose(&exp_vector_field(&neg(&psi.minus), degree, cap)?)?;
    let c0_seq = sequence_of(&outgoing, n)?;

    let scale = psi.zero.neg().exp()?;
    let unit = p.unit.mul(&q.unit).mul(&scale);
    let lambda = match reading {
        ScaleReading::Full => p.unit.mul(&scale),
        ScaleReading::BareA0 => p.unit.clone(),
    };
    let inner = exp_vector_field(&neg(&psi.plus), degree, cap)?.scale(&lambda);
    let incoming = exp_vector_field(&q.a1, degree, cap)?.compose(&inner)?.scale(&q.unit);
    let lead = incoming.coeff(1);
    let c1_seq = sequence_of(&incoming.scale(&lead.inverse()?), n)?;

    let element = ModuliElement::new(c0_seq, unit, c1_seq, p.c.mul(&q.c));
    Ok(Sewn { element, psi, order: n })
}

/// `sew(sew(P, Q), R)` against `sew(P, sew(Q, R))`, entrywise differences.
pub fn associativity_defect(
    p: &ModuliElement,
    q: &ModuliElement,
    r: &ModuliElement,
    reading: ScaleReading,
) -> Result<Vec<String>> {
    let degree = p.truncation_degree().min(q.truncation_degree()).min(r.truncation_degree());
    let n = [default_order(p, q, degree)?, default_order(q, r, degree)?, default_order(p, r, degree)?]
        .into_iter()
        .max()
        .unwrap_or(1);
    let left = sew(&sew(p, q, Some(n), reading)?.element, r, Some(n), reading)?.element;
    let right = sew(p, &sew(q, r, Some(n), reading)?.element, Some(n), reading)?.element;
    Ok(differences(&left, &right))
}

/// Named entries in which two elements differ.
pub fn differences(x: &ModuliElement, y: &ModuliElement) -> Vec<String> {
    let mut out = Vec::new();
    let zero = Series::zero(x.truncation_degree());
    let mut cmp = |name: &str, u: &[Series], v: &[Series]| {
        for k in 0..u.len().max(v.len()) {
            let (a, b) = (u.get(k).unwrap_or(&zero), v.get(k).unwrap_or(&zero));
            if a != b {
                out.push(format!("{name}_{}: {} vs {}", k + 1, a, b));
            }
        }
    };
    cmp("C0", &x.a0, &y.a0);
    cmp("C1", &x.a1, &y.a1);
    if x.unit != y.unit {
        out.push(format!("c0: {} vs {}", x.unit, y.unit));
    }
    out
}

/// A numeric point with entries in `[-1/8, 1/8]` and `a₀` in `[1/2, 3/2]`,
/// deterministic in `seed`.
pub fn sample_point(seed: u64, len: usize, degree: i32) -> ModuliElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = |n: usize| -> Vec<Scalar> { (0..n).map(|_| q(rng.gen_range(-8..=8), 64)).collect() };
    let a0 = entries(len);
    let a1 = entries(len);
    let unit = Scalar::one() + q(rng.gen_range(-8..=8), 16);
    ModuliElement::numeric(&a0, unit, &a1, degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_laws() {
        let d = 4;
        let p = ModuliElement::symbolic(3, d);
        let id = ModuliElement::identity(d);
        let left = sew(&id, &p, Some(3), ScaleReading::Full).unwrap().element;
        let right = sew(&p, &id, Some(3), ScaleReading::Full).unwrap().element;
        assert_eq!(left, p);
        assert_eq!(right, p);
    }

    #[test]
    fn sewing_unit_is_product_at_lowest_order() {
        let d = 3;
        let p = ModuliElement::numeric(&[], q(3, 2), &[q(1, 8)], d);
        let r = ModuliElement::numeric(&[q(-1, 8)], q(1, 2), &[], d);
        let s = sew(&p, &r, None, ScaleReading::Full).unwrap();
        assert_eq!(s.element.unit.up_to_degree(0), Series::constant(q(3, 4), d));
    }

    #[test]
    fn sewn_coordinates_have_their_weights() {
        let d = 3;
        let s = sew(&ModuliElement::symbolic(2, d), &ModuliElement::symbolic_b(2, d), Some(3), ScaleReading::Full).unwrap();
        assert!(s.element.weight_defects().is_empty());
        assert!(!s.element.a1[2].is_zero());
    }

    #[test]
    fn readings_differ_on_generic_points() {
        let d = 3;
        let (p, q, r) = (sample_point(4, 2, d), sample_point(5, 2, d), sample_point(6, 2, d));
        let full = sew(&p, &q, None, ScaleReading::Full).unwrap().element;
        let bare = sew(&p, &q, None, ScaleReading::BareA0).unwrap().element;
        assert_eq!(full.unit, bare.unit);
        assert_ne!(full.a1, bare.a1);
        assert!(!associativity_defect(&p, &q, &r, ScaleReading::BareA0).unwrap().is_empty());
    }

    #[test]
    fn associativity_on_samples() {
        let d = 3;
        let (p, q, r) = (sample_point(1, 2, d), sample_point(2, 2, d), sample_point(3, 2, d));
        assert!(associativity_defect(&p, &q, &r, ScaleReading::Full).unwrap().is_empty());
    }

    #[test]
    fn missing_order_for_tangent_entries() {
        let d = 2;
        let p = ModuliElement::symbolic(1, d);
        let q = ModuliElement::new(vec![Series::var(Var::Eps, d)], Series::one(d), vec![], Series::one(d));
        assert!(matches!(sew(&p, &q, None, ScaleReading::Full), Err(Error::InconsistentTruncation(_))));
    }
}
