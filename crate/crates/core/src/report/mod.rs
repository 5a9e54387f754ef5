//! Structured outcomes of identity checks.
//!
//! Every check produces entries that either pass or carry a counterexample
//! naming the identity, its integer parameters and its input in text form, so
//! that the residual can be recomputed later from the report alone.

mod document;

pub use document::{digest, Report, Section, SCHEMA_VERSION};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Weight bound for test vectors and index range `[-r, r]` for modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_weight: i64,
    pub index_range: i64,
}

impl Bounds {
    pub fn new(max_weight: i64, index_range: i64) -> Self {
        Bounds { max_weight, index_range }
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        -self.index_range..=self.index_range
    }
}

/// A failing case in replayable form: vectors are stored in the text syntax
/// accepted by [`crate::fock::Algebra::parse_vector`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub check: Check,
    pub params: Vec<i64>,
    pub input: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux: Option<String>,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail { counterexample: Counterexample },
    /// Only a finite part of an unbounded condition was examined.
    VerifiedUpToBound { weight: i64 },
    Skipped { reason: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxiomEntry {
    pub id: String,
    pub description: String,
    pub cases: u64,
    #[serde(flatten)]
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl AxiomEntry {
    pub fn failed(&self) -> bool {
        matches!(self.status, Status::Fail { .. })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxiomReport {
    pub instance: String,
    pub bounds: Bounds,
    pub entries: Vec<AxiomEntry>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| !e.failed())
    }

    pub fn entry(&self, id: &str) -> Option<&AxiomEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn first_failure(&self) -> Option<&AxiomEntry> {
        self.entries.iter().find(|e| e.failed())
    }
}


/// The identity a residual measures. Each residual vanishes exactly when the
/// identity holds on the given input, so failures can be replayed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// `f_0 v - m v`, params `[m]`.
    FermionGrading,
    /// `L(0) v - w v`, params `[w]`.
    Weight,
    /// `Q² v`.
    QSquare,
    /// `L(n) v`, params `[n]`; the input is `q` or `g`.
    LowersToZero,
    /// `Q v - ω`; the input is `g`.
    QgIsOmega,
    /// `g(0)² v`.
    StrongG0,
    /// The input itself if its weight is below `k`, params `[k]`.
    TypeK,
    /// `[g(i), L(j)] v - (i - j) g(i + j) v`, params `[i, j]`.
    GLBracket,
    /// `[Q, [Q, u_(n)]] v` with `u` the auxiliary vector, params `[n]`.
    QQField,
    /// `[Q, [g(i), g(j)]] v`, params `[i, j]`.
    QGG,
    /// `[g(i), g(j)] v`, params `[i, j]`.
    GG,
    /// Virasoro relation residual with central charge 0, params `[m, n]`.
    Virasoro,
    /// `([L(2), L(-2)] - 4 L(0)) v`; equals `(c/2) v` on the vacuum.
    CentralCharge,
    /// `[A, B] + (-1)^{|A||B|} [B, A]`, params encode the operators.
    PoissonSkew,
    /// `[A, [B, C]] - [[A, B], C] - (-1)^{|A||B|} [B, [A, C]]`.
    PoissonJacobi,
    /// `[A, BC] - [A, B] C - (-1)^{|A||B|} B [A, C]`.
    PoissonDerivation,
    /// `q_(0) v - δ v` on a matter ⊗ ghost algebra.
    QIsBrst,
    /// `f_0 v - U v` on a matter ⊗ ghost algebra.
    FIsGhostNumber,
    /// `[X(i), Y(j)] v - δ v` for ghost modes, params `[kind, i, j]` with
    /// kind 0 for `(c, b)`, 1 for `(b, b)`, 2 for `(c, c)`.
    GhostAnticommutator,
    /// Virasoro relation residual of `L_∧` with central charge -26, params `[m, n]`.
    GhostVirasoro,
    /// `:c(i) b(j): v` by the case split minus the generic reordering, params `[i, j]`.
    NormalOrdering,
    /// A field mode against the mode it should equal, params `[which, j]`:
    /// 0 for `b`, 1 for `c`, 2 for `ω_∧` against `L_∧(j)`.
    GhostField,
    /// Mode `n` of `Y(ω_∧, x)` minus the normal-ordered double sums, params `[n]`.
    StressTensor,
    /// Ghost basis count at weight `w` minus the generating-function count, params `[w]`.
    GhostCharacter,
    /// `δ² v`.
    DeltaSquare,
    /// Terms of `δ² v` at symbolic `c` whose coefficient does not vanish at 26.
    DeltaAnomaly,
    /// `δ² v` minus the symbolic `δ² v` evaluated at the central charge.
    AnomalyFactor,
    /// `U δ v - δ U v - δ v`.
    GhostNumberShift,
    /// `d² φ` for the dual basis functional of the input, params `[w, g]`.
    DualSquare,
    /// `Σ_φ (⟨dφ, v⟩ - ⟨φ, δv⟩) φ` over the dual basis of `(w, g + 1)`, params `[w, g]`.
    Adjointness,
    /// Euler characteristic of the complex minus that of its cohomology, params `[w]`.
    EulerCharacteristic,
    /// Identity `k` of the cohomology algebra, params `[k, class weight, closed weight]`.
    Gerstenhaber,
    /// Graded antisymmetry of the mode bracket, params `[s, i, t, j]`.
    ModeSkew,
    /// Graded Jacobi identity of the mode bracket, params `[s, i, t, j, u, k]`.
    ModeJacobi,
    /// Twisted mode by recursion minus the closed form, params `[n]`.
    TwistClosedForm,
    /// Virasoro residual of the twisted modes with central charge 0, params `[m, n]`.
    TwistVirasoro,
    /// Twisted central charge read off from the vacuum.
    TwistCentralCharge,
    /// Weights of `Ψ_j` other than `j`, params `[j, degree]`.
    PsiWeight,
    /// Sewing with the identity, params `[side]`: 0 on the left, 1 on the right.
    IdentityLaw,
    /// Associativity defect of sampled points, params `[seed]`.
    Associativity,
    /// `f(g(x)) - x` and `g(f(x)) - x` for a sampled map and its inverse, params `[seed]`.
    InverseRoundTrip,
    /// Degree-`d'` results truncated to `d` against degree-`d` results, params `[d, d']`.
    TruncationCoherence,
    /// Non-central Witt residual, params `[m, n]`.
    WittPair,
    /// Fitted central charges against the declared one.
    CentralFit,
}

/// What a failing case recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub input: String,
    pub aux: Option<String>,
    pub residual: String,
}

impl Witness {
    pub fn new(input: impl Into<String>, residual: impl Into<String>) -> Self {
        Witness {
            input: input.into(),
            aux: None,
            residual: residual.into(),
        }
    }

    pub fn with_aux(mut self, aux: impl Into<String>) -> Self {
        self.aux = Some(aux.into());
        self
    }
}

/// Accumulates the cases of one entry, keeping the first failure.
#[derive(Debug)]
pub struct EntryBuilder {
    id: String,
    description: String,
    cases: u64,
    fail: Option<Counterexample>,
    notes: Vec<String>,
}

impl EntryBuilder {
    pub fn new(id: impl Into<String>, description: impl Into<String>) -> Self {
        EntryBuilder {
            id: id.into(),
            description: description.into(),
            cases: 0,
            fail: None,
            notes: Vec::new(),
        }
    }

    pub fn failed(&self) -> bool {
        self.fail.is_some()
    }

    /// Evaluates one case unless a failure is already recorded. `eval`
    /// returns `None` when the identity holds.
    pub fn case(&mut self, check: Check, params: &[i64], eval: impl FnOnce() -> Result<Option<Witness>>) -> Result<()> {
        if self.fail.is_some() {
            return Ok(());
        }
        self.cases += 1;
        if let Some(w) = eval()? {
            self.fail = Some(Counterexample {
                check,
                params: params.to_vec(),
                input: w.input,
                aux: w.aux,
                residual: w.residual,
            });
        }
        Ok(())
    }

    /// Counts cases settled without a residual, e.g. by grading.
    pub fn count(&mut self, n: u64) {
        self.cases += n;
    }

    pub fn fail_with(&mut self, cx: Counterexample) {
        if self.fail.is_none() {
            self.fail = Some(cx);
        }
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn push_note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn finish(self) -> AxiomEntry {
        self.finish_with(Status::Pass)
    }

    /// Uses `ok` as the status when no case failed.
    pub fn finish_with(self, ok: Status) -> AxiomEntry {
        AxiomEntry {
            id: self.id,
            description: self.description,
            cases: self.cases,
            status: match self.fail {
                Some(counterexample) => Status::Fail { counterexample },
                None => ok,
            },
            notes: self.notes,
        }
    }

    pub fn skipped(self, reason: impl Into<String>) -> AxiomEntry {
        AxiomEntry {
            id: self.id,
            description: self.description,
            cases: self.cases,
            status: Status::Skipped { reason: reason.into() },
            notes: self.notes,
        }
    }
}
