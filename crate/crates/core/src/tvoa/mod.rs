//! Topological vertex operator algebras: instances given by a mode algebra
//! and four distinguished elements, the axiom checker, and the operator
//! identities that follow from the axioms.
//!
//! Named modes follow the field weights: `L(n) = ω_(n+1)`, `g(n) = g_(n+1)`,
//! `Q = q_(0)` and `f_0 = f_(0)`, where `u_(k)` is the coefficient of
//! `x^(-k-1)` in `Y(u, x)`.

mod checks;
mod span;

pub use crate::report::{AxiomEntry, AxiomReport, Bounds, Check, Counterexample, Status};
pub use span::{LocalGrading, OperatorKind};

use serde::{Deserialize, Serialize};

use crate::brst::{self, Brst};
use crate::error::{Error, Result};
use crate::fock::{Algebra, Operator, Vector};
use crate::scalar::{qi, Scalar};
use crate::virasoro;

/// A candidate TVOA. Grades of the distinguished elements are never taken
/// from the declaration; the checker recomputes them.
pub struct TvoaInstance {
    pub name: String,
    pub algebra: Algebra<Scalar>,
    pub omega: Vector<Scalar>,
    pub f: Vector<Scalar>,
    pub q: Vector<Scalar>,
    pub g: Vector<Scalar>,
    pub strong: bool,
    pub type_k: Option<i64>,
}

impl TvoaInstance {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        algebra: Algebra<Scalar>,
        omega: Vector<Scalar>,
        f: Vector<Scalar>,
        q: Vector<Scalar>,
        g: Vector<Scalar>,
        strong: bool,
        type_k: Option<i64>,
    ) -> Self {
        TvoaInstance {
            name: name.into(),
            algebra,
            omega,
            f,
            q,
            g,
            strong,
            type_k,
        }
    }

    pub fn field(&self, u: &Vector<Scalar>, k: i64, v: &Vector<Scalar>) -> Vector<Scalar> {
        self.algebra.field_mode(u, k, v)
    }

    pub fn l(&self, n: i64, v: &Vector<Scalar>) -> Vector<Scalar> {
        self.field(&self.omega, n + 1, v)
    }

    pub fn g_mode(&self, n: i64, v: &Vector<Scalar>) -> Vector<Scalar> {
        self.field(&self.g, n + 1, v)
    }

    pub fn big_q(&self, v: &Vector<Scalar>) -> Vector<Scalar> {
        self.field(&self.q, 0, v)
    }

    pub fn f0(&self, v: &Vector<Scalar>) -> Vector<Scalar> {
        self.field(&self.f, 0, v)
    }

    pub(crate) fn operator(&self, kind: OperatorKind, index: i64) -> Operator<'_, Scalar> {
        match kind {
            OperatorKind::L => Operator::new(false, move |v| self.l(index, v)),
            OperatorKind::G => Operator::new(true, move |v| self.g_mode(index, v)),
            OperatorKind::Q => Operator::new(true, move |v| self.big_q(v)),
            OperatorKind::F0 => Operator::new(false, move |v| self.f0(v)),
        }
    }

    fn weight_of(&self, v: &Vector<Scalar>) -> Option<i64> {
        v.monomials()
            .next()
            .map(|m| self.algebra.monomial_grade(m).weight)
    }

    /// Recomputes the residual of `check` on `input`.
    pub fn residual(
        &self,
        check: Check,
        params: &[i64],
        input: &Vector<Scalar>,
        aux: Option<&Vector<Scalar>>,
    ) -> Result<Vector<Scalar>> {
        let need = |k: usize| -> Result<()> {
            if params.len() == k {
                Ok(())
            } else {
                Err(Error::Declaration(format!(
                    "check {check:?} takes {k} parameters, got {}",
                    params.len()
                )))
            }
        };
        let v = input;
        Ok(match check {
            Check::FermionGrading => {
                need(1)?;
                self.f0(v).sub(&v.scale(&qi(params[0])))
            }
            Check::Weight => {
                need(1)?;
                self.l(0, v).sub(&v.scale(&qi(params[0])))
            }
            Check::QSquare => {
                need(0)?;
                self.big_q(&self.big_q(v))
            }
            Check::LowersToZero => {
                need(1)?;
                self.l(params[0], v)
            }
            Check::QgIsOmega => {
                need(0)?;
                self.big_q(v).sub(&self.omega)
            }
            Check::StrongG0 => {
                need(0)?;
                self.g_mode(0, &self.g_mode(0, v))
            }
            Check::TypeK => {
                need(1)?;
                match self.weight_of(v) {
                    Some(w) if w < params[0] => v.clone(),
                    _ => Vector::zero(),
                }
            }
            Check::GLBracket => {
                need(2)?;
                let (i, j) = (params[0], params[1]);
                let mut r = self.g_mode(i, &self.l(j, v));
                r.sub_assign(&self.l(j, &self.g_mode(i, v)));
                r.axpy(&qi(-(i - j)), &self.g_mode(i + j, v));
                r
            }
            Check::QQField => {
                need(1)?;
                let u = aux.ok_or_else(|| Error::Declaration("QQField needs a field vector".into()))?;
                let n = params[0];
                let odd = self.algebra.parity_of(u);
                let x = Operator::new(odd, move |w: &Vector<Scalar>| self.field(u, n, w));
                let q = self.operator(OperatorKind::Q, 0);
                q.bracket(&q.bracket(&x)).apply(v)
            }
            Check::QGG => {
                need(2)?;
                let gi = self.operator(OperatorKind::G, params[0]);
                let gj = self.operator(OperatorKind::G, params[1]);
                let q = self.operator(OperatorKind::Q, 0);
                q.bracket(&gi.bracket(&gj)).apply(v)
            }
            Check::GG => {
                need(2)?;
                let gi = self.operator(OperatorKind::G, params[0]);
                let gj = self.operator(OperatorKind::G, params[1]);
                gi.bracket(&gj).apply(v)
            }
            Check::Virasoro => {
                need(2)?;
                let l = |n: i64, w: &Vector<Scalar>| self.l(n, w);
                virasoro::relation_residual(&l, &qi(0), params[0], params[1], v)
            }
            Check::CentralCharge => {
                need(0)?;
                let mut r = self.l(2, &self.l(-2, v));
                r.sub_assign(&self.l(-2, &self.l(2, v)));
                r.axpy(&qi(-4), &self.l(0, v));
                r
            }
            Check::PoissonSkew | Check::PoissonJacobi | Check::PoissonDerivation => {
                let ops = span::decode_operators(self, params)?;
                span::poisson_residual(check, &ops, v)?
            }
            Check::QIsBrst => {
                need(0)?;
                let b = Brst::new(&self.algebra)?;
                self.big_q(v).sub(&b.delta(v))
            }
            Check::FIsGhostNumber => {
                need(0)?;
                let b = Brst::new(&self.algebra)?;
                self.f0(v).sub(&b.ghost_number_operator(v))
            }
            other => {
                return Err(Error::Declaration(format!(
                    "check {other:?} is not evaluated on an instance"
                )))
            }
        })
    }

    /// Central charge of `ω`, read off from `[L(2), L(-2)] 1 = (c/2) 1`.
    pub fn central_charge(&self) -> Result<Scalar> {
        let r = self.residual(Check::CentralCharge, &[], &Vector::vacuum(), None)?;
        let k = r.coeff(&crate::fock::Monomial::vacuum());
        if r.len() > usize::from(!num_traits::Zero::is_zero(&k)) {
            return Err(Error::ConstructionFailure(
                "[L(2), L(-2)] 1 - 4 L(0) 1 is not a multiple of the vacuum".into(),
            ));
        }
        Ok(k * qi(2))
    }
}

/// Choice of the weight-1 current `q` for the matter ⊗ ghost instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TensorCurrent {
    /// `L(-2)c(1)1 + b(-2)c(1)c(0)1 + 3c(-1)1`, a primary field.
    Primary,
    /// `L(-2)c(1)1 + b(-2)c(1)c(0)1` alone. Same zero mode, but
    /// `L(1)q = 3c(0)1` and `L(2)q = 9c(1)1`, so `L(n)q = 0` fails.
    Bare,
}

/// The matter ⊗ ghost instance with `g = b(-2)1`, `f = c(1)b(-2)1` and
/// `ω = L(-2)1 + 2c(0)b(-2)1 + c(1)b(-3)1`.
///
/// The term `3c(-1)1` of the primary current is a total derivative
/// (`c(-1)1` is proportional to `L(-1)c(0)1`), so `q_0` is the BRST
/// differential for either choice.
pub fn tensor_instance(matter_central_charge: Scalar, current: TensorCurrent) -> TvoaInstance {
    let alg = brst::tensor_algebra(matter_central_charge.clone());
    let p = |s: &str| alg.parse_vector(s).expect("built-in element parses");
    let g = p("b(-2)");
    let q = match current {
        TensorCurrent::Primary => p("L(-2) c(1) + b(-2) c(1) c(0) + 3 c(-1)"),
        TensorCurrent::Bare => p("L(-2) c(1) + b(-2) c(1) c(0)"),
    };
    let f = p("c(1) b(-2)");
    let omega = p("L(-2) + 2 c(0) b(-2) + c(1) b(-3)");
    let suffix = match current {
        TensorCurrent::Primary => "",
        TensorCurrent::Bare => "-bare",
    };
    TvoaInstance::new(
        format!("tensor-{}{suffix}", crate::scalar::format_scalar(&matter_central_charge)),
        alg,
        omega,
        f,
        q,
        g,
        true,
        Some(-1),
    )
}

#[cfg(test)]
mod tests;
