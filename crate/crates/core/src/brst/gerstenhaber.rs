//! Product, BV operator and bracket on BRST cohomology, with the axioms of a
//! Gerstenhaber algebra checked modulo exact vectors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{Mode, Vector};
use crate::scalar::{qi, Scalar};

use super::cohomology::Complex;

/// Sign convention for the Leibniz rule `[a, bc] = [a, b]c ± b[a, c]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeibnizSign {
    /// `(-1)^{(|a|-1)|b|}`: the bracket has degree -1 and moves past `b`.
    Shifted,
    /// `(-1)^{|a|(|b|-1)}`.
    Transposed,
}

impl LeibnizSign {
    fn exponent(self, a: bool, b: bool) -> bool {
        match self {
            LeibnizSign::Shifted => !a && b,
            LeibnizSign::Transposed => a && !b,
        }
    }
}

/// Outcome of one identity over all sampled elements.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub cases: usize,
    pub passed: bool,
    /// Description of the first failing case, if any.
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GerstenhaberReport {
    pub max_weight: i64,
    pub classes: usize,
    pub checks: Vec<IdentityCheck>,
    /// Leibniz conventions that hold on the sample.
    pub leibniz_holds: Vec<LeibnizSign>,
}

impl GerstenhaberReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Dot product `u·v = u_(-1) v`, BV operator `Δ = b(0)` and the bracket
/// `[u, v] = (-1)^{|u|} (Δ(uv) - (Δu)v - (-1)^{|u|} u(Δv))`.
pub struct BvStructure<'c, 'a> {
    cx: &'c Complex<'a>,
    delta_mode: Mode,
}

impl<'c, 'a> BvStructure<'c, 'a> {
    pub fn new(cx: &'c Complex<'a>) -> Result<Self> {
        let delta_mode = cx.brst().ghosts().b(0);
        let bv = BvStructure { cx, delta_mode };
        bv.check_strong(2)?;
        Ok(bv)
    }

    /// `Δ² = 0` on every block up to `max_weight`.
    pub fn check_strong(&self, max_weight: i64) -> Result<()> {
        let alg = self.cx.algebra();
        for w in alg.min_weight()..=max_weight {
            for m in alg.basis(w).iter() {
                let v = Vector::monomial(m.clone());
                if !self.bv(&self.bv(&v)).is_zero() {
                    return Err(Error::NotStrong);
                }
            }
        }
        Ok(())
    }

    pub fn complex(&self) -> &'c Complex<'a> {
        self.cx
    }

    fn weight(&self, v: &Vector<Scalar>) -> i64 {
        v.monomials()
            .next()
            .map_or(0, |m| self.cx.algebra().monomial_grade(m).weight)
    }

    fn odd(&self, v: &Vector<Scalar>) -> bool {
        self.cx.algebra().parity_of(v)
    }

    pub fn dot(&self, u: &Vector<Scalar>, v: &Vector<Scalar>) -> Vector<Scalar> {
        self.cx.algebra().field_mode(u, -1, v)
    }

    /// Product of two closed vectors; fails if either is not closed.
    pub fn dot_classes(&self, u: &Vector<Scalar>, v: &Vector<Scalar>) -> Result<Vector<Scalar>> {
        if !self.cx.is_closed(u) || !self.cx.is_closed(v) {
            return Err(Error::NotClosed);
        }
        Ok(self.dot(u, v))
    }

    pub fn bv(&self, u: &Vector<Scalar>) -> Vector<Scalar> {
        self.cx.algebra().apply(self.delta_mode, u)
    }

    pub fn bracket(&self, u: &Vector<Scalar>, v: &Vector<Scalar>) -> Vector<Scalar> {
        let ou = self.odd(u);
        let mut t = self.bv(&self.dot(u, v));
        t.sub_assign(&self.dot(&self.bv(u), v));
        let uv = self.dot(u, &self.bv(v));
        if ou {
            t.add_assign(&uv);
            t.neg()
        } else {
            t.sub(&uv)
        }
    }

    fn sign(neg: bool) -> Scalar {
        qi(if neg { -1 } else { 1 })
    }

    /// Representatives of all nonzero classes of weight at most `max_weight`.
    pub fn classes(&self, max_weight: i64) -> Result<Vec<Vector<Scalar>>> {
        let mut out = Vec::new();
        for w in self.cx.algebra().min_weight()..=max_weight {
            for g in self.cx.ghost_range(w) {
                out.extend(self.cx.cohomology(w, g)?.representatives);
            }
        }
        Ok(out)
    }

    /// Exact perturbations `δx` of the block of `u`, one per basis vector `x`.
    fn perturbations(&self, u: &Vector<Scalar>) -> Vec<Vector<Scalar>> {
        let Some(m) = u.monomials().next() else {
            return Vec::new();
        };
        let g = self.cx.algebra().monomial_grade(m);
        let block = self.cx.block(g.weight, g.fermion - 1);
        block
            .basis()
            .iter()
            .map(|x| self.cx.brst().delta(&Vector::monomial(x.clone())))
            .filter(|d| !d.is_zero())
            .collect()
    }

    /// Class representatives together with a basis of all closed vectors of
    /// weight at most `max_weight`. Exact members represent the zero class,
    /// so identities on them test independence of representatives.
    pub fn closed_samples(&self, max_weight: i64) -> Result<Vec<Vector<Scalar>>> {
        let mut out = self.classes(max_weight)?;
        for w in self.cx.algebra().min_weight()..=max_weight {
            for g in self.cx.ghost_range(w) {
                let block = self.cx.block(w, g);
                for k in self.cx.delta_matrix(w, g).nullspace() {
                    let v = block.vector(&k);
                    if !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Runs every identity on class representatives up to `max_weight`,
    /// and on all closed vectors up to `closed_weight`.
    pub fn check_axioms(&self, max_weight: i64, closed_weight: i64) -> Result<GerstenhaberReport> {
        let mut cls = self.classes(max_weight)?;
        for v in self.closed_samples(closed_weight)? {
            if !cls.contains(&v) {
                cls.push(v);
            }
        }
        let alg = self.cx.algebra();
        let fmt = |v: &Vector<Scalar>| alg.format_vector(v);
        let mut checks = Vec::new();
        let mut run = |name: &str, cases: Vec<(String, bool)>| {
            let counterexample = cases.iter().find(|c| !c.1).map(|c| c.0.clone());
            checks.push(IdentityCheck {
                name: name.into(),
                cases: cases.len(),
                passed: counterexample.is_none(),
                counterexample,
            });
        };
        let exact = |v: &Vector<Scalar>| self.cx.is_exact(v);
        let closed = |v: &Vector<Scalar>| self.cx.is_closed(v);

        let mut c = Vec::new();
        for u in &cls {
            c.push((fmt(u), closed(u) && self.dot(&Vector::vacuum(), u) == *u));
        }
        run("vacuum is the unit", c);

        let mut c = Vec::new();
        for u in &cls {
            for v in &cls {
                c.push((format!("{} · {}", fmt(u), fmt(v)), closed(&self.dot(u, v))));
            }
        }
        run("product of closed vectors is closed", c);

        let mut c = Vec::new();
        for u in &cls {
            for v in &cls {
                let uv = self.dot(u, v);
                for e in self.perturbations(u) {
                    let d = self.dot(&u.add(&e), v).sub(&uv);
                    c.push((format!("({} + exact) · {}", fmt(u), fmt(v)), exact(&d)));
                }
                for e in self.perturbations(v) {
                    let d = self.dot(u, &v.add(&e)).sub(&uv);
                    c.push((format!("{} · ({} + exact)", fmt(u), fmt(v)), exact(&d)));
                }
            }
        }
        run("product is independent of representatives", c);

        let mut c = Vec::new();
        for u in &cls {
            for v in &cls {
                let s = Self::sign(self.odd(u) && self.odd(v));
                let d = self.dot(u, v).sub(&self.dot(v, u).scale(&s));
                c.push((format!("{} , {}", fmt(u), fmt(v)), exact(&d)));
            }
        }
        run("product is graded commutative", c);

        let mut c = Vec::new();
        for u in &cls {
            for v in &cls {
                for w in &cls {
                    let d = self.dot(&self.dot(u, v), w).sub(&self.dot(u, &self.dot(v, w)));
                    c.push((format!("{} , {} , {}", fmt(u), fmt(v), fmt(w)), exact(&d)));
                }
            }
        }
        run("product is associative", c);

        // δΔ + Δδ = L(0) + L_∧(0), so Δ is a chain map only on the weight-0
        // subcomplex, which carries all of the cohomology.
        let mut c = Vec::new();
        for u in cls.iter().filter(|u| self.weight(u) == 0) {
            let du = self.bv(u);
            let shift = match (alg.grade_of(u), alg.grade_of(&du)) {
                (_, crate::fock::Grade::AllGrades) => true,
                (crate::fock::Grade::Homogeneous(a), crate::fock::Grade::Homogeneous(b)) => {
                    b.fermion == a.fermion - 1 && b.weight == a.weight
                }
                _ => false,
            };
            c.push((fmt(u), shift && closed(&du) && self.bv(&du).is_zero()));
            for e in self.perturbations(u) {
                c.push((format!("Δ({} + exact)", fmt(u)), exact(&self.bv(&e))));
            }
        }
        run("Δ descends to cohomology, lowers ghost number, squares to zero", c);

        let mut c = Vec::new();
        for u in &cls {
            for v in &cls {
                let b = self.bracket(u, v);
                let mut ok = closed(&b);
                for e in self.perturbations(u) {
                    ok &= exact(&self.bracket(&u.add(&e), v).sub(&b));
                }
                for e in self.perturbations(v) {
                    ok &= exact(&self.bracket(u, &v.add(&e)).sub(&b));
                }
                c.push((format!("[{}, {}]", fmt(u), fmt(v)), ok));
            }
        }
        run("bracket is well defined on classes", c);

        let mut c = Vec::new();
        for u in &cls {
            for v in &cls {
                // The bracket has degree -1, so its parity sign uses |a| - 1.
                let s = Self::sign(!self.odd(u) && !self.odd(v));
                let d = self.bracket(u, v).add(&self.bracket(v, u).scale(&s));
                c.push((format!("[{}, {}]", fmt(u), fmt(v)), exact(&d)));
            }
        }
        run("bracket antisymmetry", c);

        let mut c = Vec::new();
        for a in &cls {
            for b in &cls {
                for w in &cls {
                    let s = Self::sign(!self.odd(a) && !self.odd(b));
                    let lhs = self.bracket(a, &self.bracket(b, w));
                    let rhs = self
                        .bracket(&self.bracket(a, b), w)
                        .add(&self.bracket(b, &self.bracket(a, w)).scale(&s));
                    c.push((format!("{} , {} , {}", fmt(a), fmt(b), fmt(w)), exact(&lhs.sub(&rhs))));
                }
            }
        }
        run("bracket Jacobi identity", c);

        let mut leibniz_holds = Vec::new();
        for sign in [LeibnizSign::Shifted, LeibnizSign::Transposed] {
            let mut c = Vec::new();
            for a in &cls {
                for b in &cls {
                    for w in &cls {
                        let s = Self::sign(sign.exponent(self.odd(a), self.odd(b)));
                        let lhs = self.bracket(a, &self.dot(b, w));
                        let rhs = self
                            .dot(&self.bracket(a, b), w)
                            .add(&self.dot(b, &self.bracket(a, w)).scale(&s));
                        c.push((format!("{} , {} , {}", fmt(a), fmt(b), fmt(w)), exact(&lhs.sub(&rhs))));
                    }
                }
            }
            if c.iter().all(|x| x.1) {
                leibniz_holds.push(sign);
            }
            if sign == LeibnizSign::Shifted {
                run("bracket Leibniz rule", c);
            }
        }

        Ok(GerstenhaberReport {
            max_weight,
            classes: cls.len(),
            checks,
            leibniz_holds,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brst::tensor_algebra;

    #[test]
    fn gerstenhaber_axioms_on_low_weight_classes() {
        let alg = tensor_algebra(qi(26));
        let cx = Complex::new(&alg).unwrap();
        let bv = BvStructure::new(&cx).unwrap();
        let report = bv.check_axioms(2, 1).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{}: {:?}", c.name, c.counterexample);
        }
        assert!(report.classes >= 1);
        assert!(report.leibniz_holds.contains(&LeibnizSign::Shifted));
        assert!(bv.bv(&Vector::vacuum()).is_zero());
    }
}
