use std::collections::BTreeMap;

use crate::error::Result;
use crate::fock::{Algebra, Vector};
use crate::ghost::{self, Ghosts};
use crate::report::{AxiomReport, Bounds, Check, EntryBuilder, Witness};
use crate::scalar::{qi, Scalar};
use crate::virasoro::relation_residual;

use super::{basis_vectors, need, not_here};

/// Field identities are checked up to this weight at most.
const FIELD_WEIGHT: i64 = 6;

/// Identities of the ghost vertex algebra.
pub struct GhostSuite {
    alg: Algebra<Scalar>,
}

impl Default for GhostSuite {
    fn default() -> Self {
        Self::new()
    }
}

impl GhostSuite {
    pub fn new() -> Self {
        GhostSuite {
            alg: ghost::ghost_module(),
        }
    }

    pub fn algebra(&self) -> &Algebra<Scalar> {
        &self.alg
    }

    fn ghosts(&self) -> Ghosts<'_, Scalar> {
        Ghosts::new(&self.alg).expect("ghost symbols present")
    }

    /// Vector-valued residual of `check` on `v`.
    pub fn residual(&self, g: &Ghosts<'_, Scalar>, check: Check, params: &[i64], v: &Vector<Scalar>) -> Result<Vector<Scalar>> {
        let alg = &self.alg;
        Ok(match check {
            Check::GhostAnticommutator => {
                need(check, params, 3)?;
                let (i, j) = (params[1], params[2]);
                let (x, y, delta) = match params[0] {
                    0 => (g.c(i), g.b(j), i + j == 0),
                    1 => (g.b(i), g.b(j), false),
                    _ => (g.c(i), g.c(j), false),
                };
                let mut r = alg.apply(x, &alg.apply(y, v));
                r.add_assign(&alg.apply(y, &alg.apply(x, v)));
                if delta {
                    r.sub_assign(v);
                }
                r
            }
            Check::GhostVirasoro => {
                need(check, params, 2)?;
                let l = |n: i64, w: &Vector<Scalar>| g.l_wedge(n, w);
                relation_residual(&l, &qi(-26), params[0], params[1], v)
            }
            Check::NormalOrdering => {
                need(check, params, 2)?;
                let (i, j) = (params[0], params[1]);
                g.apply_pair(g.normal_order_pair(i, j), v)
                    .sub(&g.apply_normal_ordered(&[g.c(i), g.b(j)], v))
            }
            Check::GhostField => {
                need(check, params, 2)?;
                let j = params[1];
                match params[0] {
                    // Y(b, x) = Σ b(j) x^{-j-2}
                    0 => alg.field_mode(&g.b_state(), j + 1, v).sub(&alg.apply(g.b(j), v)),
                    // Y(c, x) = Σ c(j) x^{-j+1}
                    1 => alg.field_mode(&g.c_state(), j - 2, v).sub(&alg.apply(g.c(j), v)),
                    _ => alg.field_mode(&g.omega_wedge(), j + 1, v).sub(&g.l_wedge(j, v)),
                }
            }
            Check::StressTensor => {
                need(check, params, 1)?;
                let n = params[0];
                alg.field_mode(&g.omega_wedge(), n + 1, v).sub(&g.stress_tensor_mode(n, v))
            }
            other => return Err(not_here(other, "ghost")),
        })
    }

    fn character_residual(&self, w: i64) -> Option<String> {
        let mut counted: BTreeMap<i64, u64> = BTreeMap::new();
        for m in self.alg.basis(w).iter() {
            *counted.entry(self.alg.monomial_grade(m).fermion).or_default() += 1;
        }
        let expected: BTreeMap<i64, u64> = ghost::character(w.max(0))
            .into_iter()
            .filter(|((cw, _), _)| *cw == w)
            .map(|((_, f), n)| (f, n))
            .collect();
        (counted != expected).then(|| format!("basis counts by ghost number {counted:?}, generating function {expected:?}"))
    }

    /// Recomputes a stored case.
    pub fn evaluate(&self, check: Check, params: &[i64], input: &str) -> Result<Option<String>> {
        if check == Check::GhostCharacter {
            need(check, params, 1)?;
            return Ok(self.character_residual(params[0]));
        }
        let v = self.alg.parse_vector(input)?;
        let r = self.residual(&self.ghosts(), check, params, &v)?;
        Ok((!r.is_zero()).then(|| self.alg.format_vector(&r)))
    }
}

/// Anticommutators, the Virasoro relations of `L_∧` at central charge -26,
/// normal ordering, field identities and basis counts, on all basis vectors
/// of weight at most `max_weight`.
///
/// Anticommutators use mode indices up to `max(index_range, max_weight)`;
/// the Virasoro and ordering checks use `index_range`.
pub fn ghost_suite(max_weight: i64, index_range: i64) -> Result<AxiomReport> {
    let suite = GhostSuite::new();
    let alg = suite.algebra();
    let g = suite.ghosts();
    let vs = basis_vectors(alg, alg.min_weight(), max_weight);
    let field_vs = basis_vectors(alg, alg.min_weight(), max_weight.min(FIELD_WEIGHT));
    let r = index_range;
    let wide = r.max(max_weight);
    let mut entries = Vec::new();

    let run = |e: &mut EntryBuilder, check: Check, params: &[i64], vs: &[Vector<Scalar>]| -> Result<()> {
        for v in vs {
            e.case(check, params, || {
                let res = suite.residual(&g, check, params, v)?;
                Ok((!res.is_zero()).then(|| Witness::new(alg.format_vector(v), alg.format_vector(&res))))
            })?;
        }
        Ok(())
    };

    let mut e = EntryBuilder::new("anticommutators", "[c(i), b(j)] = δ_{i+j,0}, [b(i), b(j)] = [c(i), c(j)] = 0");
    for kind in 0..3 {
        for i in -wide..=wide {
            for j in -wide..=wide {
                run(&mut e, Check::GhostAnticommutator, &[kind, i, j], &vs)?;
            }
        }
    }
    entries.push(e.note(format!("mode indices in [-{wide}, {wide}]")).finish());

    let mut e = EntryBuilder::new(
        "virasoro",
        "[L_∧(m), L_∧(n)] = (m - n) L_∧(m + n) + (-26/12)(m^3 - m) δ_{m+n,0}",
    );
    for m in -r..=r {
        for n in -r..=r {
            run(&mut e, Check::GhostVirasoro, &[m, n], &vs)?;
        }
    }
    entries.push(e.finish());

    let mut e = EntryBuilder::new(
        "normal-ordering",
        ":c(i) b(j): = -b(j) c(i) for j < -1 and c(i) b(j) for j >= -1",
    );
    for i in -r..=r {
        for j in -r..=r {
            run(&mut e, Check::NormalOrdering, &[i, j], &vs)?;
        }
    }
    let e = e.note("compared with the ordering that moves every creation mode to the left");
    entries.push(e.finish());

    let mut e = EntryBuilder::new(
        "fields",
        "Y(b, x) has modes b(j), Y(c, x) has modes c(j), Y(ω_∧, x) has modes L_∧(j)",
    );
    for which in 0..3 {
        for j in -r..=r {
            run(&mut e, Check::GhostField, &[which, j], &field_vs)?;
        }
    }
    entries.push(e.note(format!("vectors of weight at most {}", max_weight.min(FIELD_WEIGHT))).finish());

    let mut e = EntryBuilder::new(
        "stress-tensor",
        "Y(ω_∧, x) = :c(x) b'(x): + 2 :c'(x) b(x):",
    );
    for n in -r..=r {
        run(&mut e, Check::StressTensor, &[n], &field_vs)?;
    }
    entries.push(e.note(format!("vectors of weight at most {}", max_weight.min(FIELD_WEIGHT))).finish());

    let mut e = EntryBuilder::new(
        "character",
        "weight spaces vanish below -1 and match the two fermionic towers",
    );
    for w in alg.min_weight() - 1..=max_weight {
        e.case(Check::GhostCharacter, &[w], || {
            Ok(suite.character_residual(w).map(|r| Witness::new("1", r)))
        })?;
    }
    let dims: Vec<String> = (alg.min_weight()..=max_weight)
        .map(|w| format!("{w}:{}", alg.basis(w).len()))
        .collect();
    entries.push(e.note(format!("dimensions {{{}}}", dims.join(", "))).finish());

    Ok(AxiomReport {
        instance: "ghosts".into(),
        bounds: Bounds::new(max_weight, index_range),
        entries,
    })
}
