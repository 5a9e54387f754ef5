//! Check suites that turn the identities of each part of the crate into
//! report entries, and the re-evaluation of stored counterexamples.

mod brst;
mod ghost;
mod sewing;
mod twist;

pub use self::brst::{brst_suite, gerstenhaber_suite, BrstOutcome, BrstSuite};
pub use self::ghost::{ghost_suite, GhostSuite};
pub use self::sewing::{sewing_suite, SewingOptions, SewingOutcome, SewingSuite};
pub use self::twist::{ns_relations_suite, twisted_virasoro_suite, TwistSuite};

use serde::{Deserialize, Serialize};

use crate::decl::InstanceDeclaration;
use crate::error::{Error, Result};
use crate::fock::{Algebra, Vector};
use crate::n2::{self, TwistedG};
use crate::report::Counterexample;
use crate::scalar::{format_scalar, parse_scalar, Coeff};
use crate::sewing::ScaleReading;
use crate::tvoa::{self, TensorCurrent, TvoaInstance};

/// Where an instance comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum InstanceSource {
    /// Matter Virasoro module tensored with the ghosts.
    Tensor { central_charge: String, current: TensorCurrent },
    /// The twisted N=2 vacuum module.
    Twist { central_charge: String, g: TwistedG },
    /// A declaration, stored verbatim.
    Declaration { text: String },
}

impl InstanceSource {
    /// Built-in instances by name: `tensor-<c>`, `tensor-<c>-bare` and
    /// `n2-twist-<c>` for a rational `c` written with `_` in place of `/`.
    pub fn builtin(name: &str) -> Option<Self> {
        let rational = |s: &str| parse_scalar(&s.replace('_', "/")).ok().map(|c| format_scalar(&c));
        if let Some(rest) = name.strip_prefix("tensor-") {
            let (c, current) = match rest.strip_suffix("-bare") {
                Some(c) => (c, TensorCurrent::Bare),
                None => (rest, TensorCurrent::Primary),
            };
            return rational(c).map(|central_charge| InstanceSource::Tensor { central_charge, current });
        }
        let c = name.strip_prefix("n2-twist-")?;
        rational(c).map(|central_charge| InstanceSource::Twist {
            central_charge,
            g: TwistedG::Half,
        })
    }

    pub fn build(&self) -> Result<TvoaInstance> {
        Ok(match self {
            InstanceSource::Tensor { central_charge, current } => {
                tvoa::tensor_instance(parse_scalar(central_charge)?, *current)
            }
            InstanceSource::Twist { central_charge, g } => n2::twist(parse_scalar(central_charge)?, *g),
            InstanceSource::Declaration { text } => InstanceDeclaration::parse(text)?.build()?,
        })
    }
}

/// Everything needed to recompute the residuals of one report section.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Context {
    Ghost,
    Brst {
        central_charge: String,
    },
    Instance {
        source: InstanceSource,
    },
    /// N=2 vacuum module; `central_charge` is a rational or `c` for symbolic.
    N2 {
        central_charge: String,
    },
    Sewing {
        degree: i32,
        range: i64,
        central_charge: String,
        reading: ScaleReading,
    },
}

impl Context {
    /// Recomputes the residual of a stored case; `None` means the identity
    /// now holds.
    pub fn evaluate(&self, cx: &Counterexample) -> Result<Option<String>> {
        let aux = cx.aux.as_deref();
        match self {
            Context::Ghost => GhostSuite::new().evaluate(cx.check, &cx.params, &cx.input),
            Context::Brst { central_charge } => {
                BrstSuite::new(parse_scalar(central_charge)?).evaluate(cx.check, &cx.params, &cx.input, aux)
            }
            Context::Instance { source } => {
                let inst = source.build()?;
                // Dimension overflows of the grading enumeration are not residuals.
                if cx.residual.contains("exceeds the ceiling") {
                    return Ok(Some(cx.residual.clone()));
                }
                let r = inst.replay(cx)?;
                Ok((!r.is_zero()).then(|| inst.algebra.format_vector(&r)))
            }
            Context::N2 { central_charge } => TwistSuite::from_text(central_charge)?.evaluate(cx.check, &cx.params, &cx.input),
            Context::Sewing {
                degree,
                range,
                central_charge,
                reading,
            } => SewingSuite::new(SewingOptions {
                degree: *degree,
                witt_range: *range,
                central_charge: parse_scalar(central_charge)?,
                reading: *reading,
                samples: 0,
            })
            .evaluate(cx.check, &cx.params, &cx.input),
        }
    }
}

/// All canonical monomials of weights `lo..=hi`, as vectors.
pub(crate) fn basis_vectors<C: Coeff>(alg: &Algebra<C>, lo: i64, hi: i64) -> Vec<Vector<C>> {
    (lo..=hi)
        .flat_map(|w| alg.basis(w).iter().cloned().collect::<Vec<_>>())
        .map(Vector::monomial)
        .collect()
}

pub(crate) fn need(check: crate::report::Check, params: &[i64], k: usize) -> Result<()> {
    if params.len() == k {
        Ok(())
    } else {
        Err(Error::Declaration(format!(
            "check {check:?} takes {k} parameters, got {}",
            params.len()
        )))
    }
}

pub(crate) fn not_here(check: crate::report::Check, what: &str) -> Error {
    Error::Declaration(format!("check {check:?} is not evaluated in a {what} context"))
}
