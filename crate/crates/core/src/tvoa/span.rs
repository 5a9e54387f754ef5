use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{Grade, Operator, Vector};
use crate::linalg::SparseSpan;
use crate::scalar::{qi, Scalar};

use super::{Check, TvoaInstance};

/// Operators sampled for the graded Poisson laws on `End V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorKind {
    L,
    G,
    Q,
    F0,
}

impl OperatorKind {
    pub fn code(self) -> i64 {
        match self {
            OperatorKind::L => 0,
            OperatorKind::G => 1,
            OperatorKind::Q => 2,
            OperatorKind::F0 => 3,
        }
    }

    fn from_code(c: i64) -> Result<Self> {
        Ok(match c {
            0 => OperatorKind::L,
            1 => OperatorKind::G,
            2 => OperatorKind::Q,
            3 => OperatorKind::F0,
            _ => return Err(Error::Declaration(format!("unknown operator code {c}"))),
        })
    }
}

pub(super) fn decode_operators<'i>(inst: &'i TvoaInstance, params: &[i64]) -> Result<Vec<Operator<'i, Scalar>>> {
    if params.len() % 2 != 0 || params.is_empty() {
        return Err(Error::Declaration("operator parameters come in (kind, index) pairs".into()));
    }
    params
        .chunks(2)
        .map(|p| Ok(inst.operator(OperatorKind::from_code(p[0])?, p[1])))
        .collect()
}

pub(super) fn poisson_residual(check: Check, ops: &[Operator<'_, Scalar>], v: &Vector<Scalar>) -> Result<Vector<Scalar>> {
    let sign = |a: &Operator<'_, Scalar>, b: &Operator<'_, Scalar>| qi(if a.is_odd() && b.is_odd() { -1 } else { 1 });
    let arity = if check == Check::PoissonSkew { 2 } else { 3 };
    if ops.len() != arity {
        return Err(Error::Declaration(format!("{check:?} takes {arity} operators")));
    }
    let (a, b) = (&ops[0], &ops[1]);
    Ok(match check {
        Check::PoissonSkew => a.bracket(b).apply(v).add(&b.bracket(a).apply(v).scale(&sign(a, b))),
        Check::PoissonJacobi => {
            let c = &ops[2];
            let mut r = a.bracket(&b.bracket(c)).apply(v);
            r.sub_assign(&a.bracket(b).bracket(c).apply(v));
            r.sub_assign(&b.bracket(&a.bracket(c)).apply(v).scale(&sign(a, b)));
            r
        }
        Check::PoissonDerivation => {
            let c = &ops[2];
            let mut r = a.bracket(&b.then_after(c)).apply(v);
            r.sub_assign(&a.bracket(b).then_after(c).apply(v));
            r.sub_assign(&b.then_after(&a.bracket(c)).apply(v).scale(&sign(a, b)));
            r
        }
        _ => unreachable!("not a Poisson law"),
    })
}

/// Dimensions of a submodule enumerated weight by weight up to a bound.
#[derive(Clone, Debug, Serialize)]
pub struct LocalGrading {
    pub max_weight: i64,
    pub lowest_weight: Option<i64>,
    pub dims: BTreeMap<i64, usize>,
    /// First weight whose dimension passed the ceiling, if any.
    pub exceeded_at: Option<i64>,
}

impl LocalGrading {
    pub fn passed(&self) -> bool {
        self.exceeded_at.is_none()
    }
}

impl TvoaInstance {
    /// Closure of `seeds` under `images`, which returns the images of a
    /// weight-homogeneous vector. Vectors above `max_weight` are discarded.
    fn close_under(
        &self,
        seeds: &[Vector<Scalar>],
        max_weight: i64,
        ceiling: usize,
        images: impl Fn(&Vector<Scalar>, i64) -> Vec<Vector<Scalar>>,
    ) -> Result<(LocalGrading, BTreeMap<i64, SparseSpan>)> {
        let mut st = Closure {
            inst: self,
            max_weight,
            ceiling,
            spans: BTreeMap::new(),
            queue: VecDeque::new(),
            exceeded_at: None,
        };
        for s in seeds {
            st.push(s.clone())?;
        }
        while let Some((w, v)) = st.queue.pop_front() {
            if st.exceeded_at.is_some() {
                break;
            }
            for img in images(&v, w) {
                st.push(img)?;
            }
        }
        let (spans, exceeded_at) = (st.spans, st.exceeded_at);
        let dims: BTreeMap<i64, usize> = spans.iter().map(|(w, s)| (*w, s.dim())).filter(|(_, d)| *d > 0).collect();
        let lg = LocalGrading {
            max_weight,
            lowest_weight: dims.keys().next().copied(),
            dims,
            exceeded_at,
        };
        Ok((lg, spans))
    }

    /// Virasoro submodule generated by a homogeneous element, up to a weight.
    pub fn local_grading_check(&self, element: &Vector<Scalar>, max_weight: i64, ceiling: usize) -> Result<LocalGrading> {
        if self.algebra.grade_of(element) == Grade::NotHomogeneous {
            return Err(Error::NotHomogeneous);
        }
        let min = self.algebra.min_weight();
        let (lg, _) = self.close_under(std::slice::from_ref(element), max_weight, ceiling, |v, w| {
            (w - max_weight..=w - min).map(|n| self.l(n, v)).collect()
        })?;
        Ok(lg)
    }

    /// Vertex subalgebra generated by `ω, q, f, g`, up to a weight. It is
    /// spanned by generator modes applied repeatedly to the vacuum.
    pub fn generated_subalgebra(&self, max_weight: i64, ceiling: usize) -> Result<LocalGrading> {
        Ok(self.generated_subalgebra_spans(max_weight, ceiling)?.0)
    }

    pub(super) fn generated_subalgebra_spans(
        &self,
        max_weight: i64,
        ceiling: usize,
    ) -> Result<(LocalGrading, BTreeMap<i64, SparseSpan>)> {
        let min = self.algebra.min_weight();
        let gens: Vec<(i64, &Vector<Scalar>)> = [&self.omega, &self.q, &self.f, &self.g]
            .into_iter()
            .map(|u| (self.weight_of(u).unwrap_or(0), u))
            .collect();
        self.close_under(&[Vector::vacuum()], max_weight, ceiling, |v, w| {
            let mut out = Vec::new();
            for (wu, u) in &gens {
                // weight of u_(k) v is wu + w - k - 1
                for k in wu + w - 1 - max_weight..=wu + w - 1 - min {
                    out.push(self.field(u, k, v));
                }
            }
            out
        })
    }
}

struct Closure<'i> {
    inst: &'i TvoaInstance,
    max_weight: i64,
    ceiling: usize,
    spans: BTreeMap<i64, SparseSpan>,
    queue: VecDeque<(i64, Vector<Scalar>)>,
    exceeded_at: Option<i64>,
}

impl Closure<'_> {
    fn push(&mut self, v: Vector<Scalar>) -> Result<()> {
        let weights: Vec<i64> = v.monomials().map(|m| self.inst.algebra.monomial_grade(m).weight).collect();
        let Some(&w) = weights.first() else {
            return Ok(());
        };
        // Mixed fermion numbers are harmless; mixed weights are not.
        if weights.iter().any(|&x| x != w) {
            return Err(Error::NotHomogeneous);
        }
        if w > self.max_weight {
            return Ok(());
        }
        let span = self.spans.entry(w).or_default();
        if span.insert(&v) {
            if span.dim() > self.ceiling && self.exceeded_at.is_none() {
                self.exceeded_at = Some(w);
            }
            self.queue.push_back((w, v));
        }
        Ok(())
    }
}
