use num_traits::Zero;

use crate::brst::{tensor_algebra, BvStructure, Brst, CohomologyTable, Complex};
use crate::error::{Error, Result};
use crate::fock::{Algebra, Vector};
use crate::linalg::Matrix;
use crate::report::{AxiomReport, Bounds, Check, EntryBuilder, Witness};
use crate::scalar::{format_scalar, qi, CPoly, Scalar};

use super::{basis_vectors, need, not_here};

/// The BRST complex of the Virasoro vacuum module at a rational central
/// charge, with a copy at symbolic central charge for anomaly checks.
pub struct BrstSuite {
    c: Scalar,
    alg: Algebra<Scalar>,
    sym: Algebra<CPoly>,
}

/// Suite entries plus the cohomology table when it exists.
#[derive(Debug)]
pub struct BrstOutcome {
    pub report: AxiomReport,
    pub table: Option<CohomologyTable>,
}

impl BrstSuite {
    pub fn new(c: Scalar) -> Self {
        BrstSuite {
            alg: tensor_algebra(c.clone()),
            sym: tensor_algebra(CPoly::c()),
            c,
        }
    }

    pub fn algebra(&self) -> &Algebra<Scalar> {
        &self.alg
    }

    /// `d² φ` for every dual basis functional of grade `(w, g + 2)`, as the
    /// columns of a matrix into the dual basis of `(w, g)`.
    fn dual_square(&self, cx: &Complex<'_>, w: i64, g: i64) -> Matrix {
        cx.dual_matrix(w, g).mul(&cx.dual_matrix(w, g + 1))
    }

    fn column_vector(&self, cx: &Complex<'_>, w: i64, g: i64, col: &[Scalar]) -> Vector<Scalar> {
        cx.block(w, g).vector(col)
    }

    fn euler(&self, cx: &Complex<'_>, w: i64) -> Result<(i64, i64)> {
        let (mut ec, mut eh) = (0i64, 0i64);
        for g in cx.ghost_range(w) {
            let b = cx.cohomology(w, g)?;
            let s = if g.rem_euclid(2) == 0 { 1 } else { -1 };
            ec += s * b.chain_dim as i64;
            eh += s * b.dim as i64;
        }
        Ok((ec, eh))
    }

    /// Vector-valued residual of `check` on `v`.
    pub fn residual(&self, check: Check, params: &[i64], v: &Vector<Scalar>) -> Result<Vector<Scalar>> {
        let brst = Brst::new(&self.alg)?;
        Ok(match check {
            Check::DeltaSquare => {
                need(check, params, 0)?;
                brst.delta(&brst.delta(v))
            }
            Check::AnomalyFactor => {
                need(check, params, 0)?;
                let sym = Brst::new(&self.sym)?;
                let sv = v.map_coeffs(|k| CPoly::constant(k.clone()));
                let at_c = sym.delta(&sym.delta(&sv)).map_coeffs(|k| k.eval(&self.c));
                brst.delta(&brst.delta(v)).sub(&at_c)
            }
            Check::GhostNumberShift => {
                need(check, params, 0)?;
                let dv = brst.delta(v);
                let mut r = brst.ghost_number_operator(&dv);
                r.sub_assign(&brst.delta(&brst.ghost_number_operator(v)));
                r.sub_assign(&dv);
                r
            }
            Check::DualSquare | Check::Adjointness => {
                need(check, params, 2)?;
                let (w, g) = (params[0], params[1]);
                let cx = Complex::new(&self.alg)?;
                let top = if check == Check::DualSquare { g + 2 } else { g };
                let block = cx.block(w, top);
                let Some(m) = v.monomials().next().filter(|_| v.len() == 1) else {
                    return Err(Error::Declaration("expected a single basis monomial".into()));
                };
                let idx = block
                    .basis()
                    .iter()
                    .position(|b| b == m)
                    .ok_or_else(|| Error::Declaration(format!("monomial is not in block ({w}, {top})")))?;
                if check == Check::DualSquare {
                    let sq = self.dual_square(&cx, w, g);
                    self.column_vector(&cx, w, g, &sq.column(idx))
                } else {
                    // ⟨dφ_k, v⟩ through the dual matrix, ⟨φ_k, δv⟩ directly.
                    let target = cx.block(w, g + 1);
                    let mut e = vec![Scalar::zero(); target.dim()];
                    let mut diff = Vec::with_capacity(target.dim());
                    let direct = target.coords(&brst.delta(v));
                    for k in 0..target.dim() {
                        e[k] = qi(1);
                        let dphi = cx.dual_differential(w, g, &e);
                        e[k] = Scalar::zero();
                        diff.push(&dphi[idx] - &direct[k]);
                    }
                    target.vector(&diff)
                }
            }
            other => return Err(not_here(other, "BRST")),
        })
    }

    fn anomaly_residual(&self, v: &Vector<Scalar>) -> Result<Vector<CPoly>> {
        let sym = Brst::new(&self.sym)?;
        let sv = v.map_coeffs(|k| CPoly::constant(k.clone()));
        let sq = sym.delta(&sym.delta(&sv));
        let mut out = Vector::zero();
        for (m, k) in &sq {
            if !k.vanishes_at(&qi(26)) {
                out.add_term(m.clone(), k.clone());
            }
        }
        Ok(out)
    }

    /// Recomputes a stored case.
    pub fn evaluate(&self, check: Check, params: &[i64], input: &str, _aux: Option<&str>) -> Result<Option<String>> {
        match check {
            Check::DeltaAnomaly => {
                need(check, params, 0)?;
                let v = self.alg.parse_vector(input)?;
                let r = self.anomaly_residual(&v)?;
                Ok((!r.is_zero()).then(|| self.sym.format_vector(&r)))
            }
            Check::EulerCharacteristic => {
                need(check, params, 1)?;
                let cx = Complex::new(&self.alg)?;
                let (ec, eh) = self.euler(&cx, params[0])?;
                Ok((ec != eh).then(|| format!("{}", ec - eh)))
            }
            Check::Gerstenhaber => {
                need(check, params, 3)?;
                let cx = Complex::new(&self.alg)?;
                let bv = BvStructure::new(&cx)?;
                let report = bv.check_axioms(params[1], params[2])?;
                let k = usize::try_from(params[0]).map_err(|_| Error::Declaration("negative identity index".into()))?;
                let c = report
                    .checks
                    .get(k)
                    .ok_or_else(|| Error::Declaration(format!("no identity with index {k}")))?;
                Ok(c.counterexample.clone())
            }
            _ => {
                let v = self.alg.parse_vector(input)?;
                let r = self.residual(check, params, &v)?;
                Ok((!r.is_zero()).then(|| self.alg.format_vector(&r)))
            }
        }
    }
}

/// Nilpotency, the anomaly at symbolic central charge, the dual differential,
/// ghost-number bookkeeping and the cohomology table, on all blocks of weight
/// at most `max_weight`.
///
/// With `expect_anomaly`, the suite passes when `δ²` is nonzero and every
/// nonzero entry matches the symbolic anomaly evaluated at `c`.
pub fn brst_suite(c: &Scalar, max_weight: i64, expect_anomaly: bool) -> Result<BrstOutcome> {
    let suite = BrstSuite::new(c.clone());
    let alg = suite.algebra();
    let cx = Complex::new(alg)?;
    let vs = basis_vectors(alg, alg.min_weight(), max_weight);
    let fmt = |v: &Vector<Scalar>| alg.format_vector(v);
    let mut entries = Vec::new();

    let vector_case = |e: &mut EntryBuilder, check: Check, params: &[i64], v: &Vector<Scalar>| -> Result<()> {
        e.case(check, params, || {
            let r = suite.residual(check, params, v)?;
            Ok((!r.is_zero()).then(|| Witness::new(fmt(v), fmt(&r))))
        })
    };

    // δ² everywhere, remembering the first nonzero square.
    let brst = Brst::new(alg)?;
    let mut first_anomaly = None;
    let mut squares = EntryBuilder::new("delta-squared", "δ² = 0");
    for v in &vs {
        if first_anomaly.is_none() {
            let sq = brst.delta(&brst.delta(v));
            if !sq.is_zero() {
                first_anomaly = Some((v.clone(), sq));
            }
        }
        if !expect_anomaly {
            vector_case(&mut squares, Check::DeltaSquare, &[], v)?;
        }
    }
    if expect_anomaly {
        let mut e = EntryBuilder::new("anomaly-detected", "δ² ≠ 0 away from c = 26");
        e.count(vs.len() as u64);
        match &first_anomaly {
            Some((v, sq)) => {
                e.push_note(format!("δ² {} = {}", fmt(v), fmt(sq)));
                entries.push(e.finish());
            }
            None => {
                e.fail_with(crate::report::Counterexample {
                    check: Check::DeltaSquare,
                    params: vec![],
                    input: "1".into(),
                    aux: None,
                    residual: "δ² vanishes on every block checked".into(),
                });
                entries.push(e.finish());
            }
        }
        let mut e = EntryBuilder::new(
            "anomaly-factor",
            "δ² at this central charge equals the symbolic δ² evaluated there",
        );
        for v in &vs {
            vector_case(&mut e, Check::AnomalyFactor, &[], v)?;
        }
        entries.push(e.finish());
    } else {
        entries.push(squares.finish());
    }

    let mut e = EntryBuilder::new(
        "anomaly-divisible",
        "with c symbolic, every coefficient of δ² is divisible by c - 26",
    );
    for v in &vs {
        e.case(Check::DeltaAnomaly, &[], || {
            let r = suite.anomaly_residual(v)?;
            Ok((!r.is_zero()).then(|| Witness::new(fmt(v), suite.sym.format_vector(&r))))
        })?;
    }
    entries.push(e.note("a polynomial vanishing at 26 is divisible by c - 26").finish());

    let mut e = EntryBuilder::new("ghost-number", "U δ = δ U + δ: δ raises the ghost number by one");
    for v in &vs {
        vector_case(&mut e, Check::GhostNumberShift, &[], v)?;
    }
    entries.push(e.finish());

    let mut dual = EntryBuilder::new("dual-squared", "d² = 0 for the adjoint d of δ");
    let mut adj = EntryBuilder::new("adjointness", "⟨dφ, v⟩ = ⟨φ, δv⟩");
    for w in alg.min_weight()..=max_weight {
        for g in cx.ghost_range(w) {
            let sq = suite.dual_square(&cx, w, g);
            let top = cx.block(w, g + 2);
            for (k, m) in top.basis().iter().enumerate() {
                let col = sq.column(k);
                dual.case(Check::DualSquare, &[w, g], || {
                    let r = suite.column_vector(&cx, w, g, &col);
                    Ok((!r.is_zero()).then(|| Witness::new(alg.format_monomial(m), fmt(&r))))
                })?;
            }
            let d = cx.dual_matrix(w, g);
            let target = cx.block(w, g + 1);
            for (idx, m) in cx.block(w, g).basis().iter().enumerate() {
                adj.case(Check::Adjointness, &[w, g], || {
                    let v = Vector::monomial(m.clone());
                    let direct = target.coords(&brst.delta(&v));
                    let diff: Vec<Scalar> = (0..target.dim()).map(|k| d.get(idx, k) - &direct[k]).collect();
                    let r = target.vector(&diff);
                    Ok((!r.is_zero()).then(|| Witness::new(fmt(&v), fmt(&r))))
                })?;
            }
        }
    }
    if expect_anomaly {
        entries.push(dual.skipped("d² is the adjoint of δ², which is expected to be nonzero"));
    } else {
        entries.push(dual.note("functionals are written as their dual basis monomials").finish());
    }
    entries.push(adj.finish());

    let mut table = None;
    let mut e = EntryBuilder::new(
        "euler-characteristic",
        "Σ_g (-1)^g dim H^g = Σ_g (-1)^g dim C^g at each weight",
    );
    if first_anomaly.is_none() {
        let t = cx.table(max_weight)?;
        for (&w, &(ec, eh)) in &t.euler {
            e.case(Check::EulerCharacteristic, &[w], || {
                Ok((ec != eh).then(|| Witness::new("1", format!("{}", ec - eh))))
            })?;
        }
        let vac = Vector::vacuum();
        e.push_note(format!(
            "the vacuum is closed and {}",
            if cx.is_exact(&vac) { "exact" } else { "not exact, so its class is nonzero" }
        ));
        table = Some(t);
        entries.push(e.finish());
    } else {
        entries.push(e.skipped(format!(
            "δ² ≠ 0 at c = {}, so there is no cohomology",
            format_scalar(c)
        )));
    }

    Ok(BrstOutcome {
        report: AxiomReport {
            instance: format!("brst-{}", format_scalar(c)),
            bounds: Bounds::new(max_weight, 0),
            entries,
        },
        table,
    })
}

/// The cohomology algebra axioms on classes of weight at most `class_weight`
/// and closed vectors of weight at most `closed_weight`, at `c = 26`.
pub fn gerstenhaber_suite(class_weight: i64, closed_weight: i64) -> Result<AxiomReport> {
    let alg = tensor_algebra(qi(26));
    let cx = Complex::new(&alg)?;
    let bv = BvStructure::new(&cx)?;
    let report = bv.check_axioms(class_weight, closed_weight)?;
    let mut entries = Vec::new();
    for (k, c) in report.checks.iter().enumerate() {
        let id = c.name.to_lowercase().replace([' ', ','], "-").replace("--", "-");
        let mut e = EntryBuilder::new(id, c.name.clone());
        e.count(c.cases.saturating_sub(1) as u64);
        e.case(Check::Gerstenhaber, &[k as i64, class_weight, closed_weight], || {
            Ok(c.counterexample.clone().map(|r| Witness::new("1", r)))
        })?;
        entries.push(e.finish());
    }
    let mut summary = EntryBuilder::new("classes", "class representatives and Leibniz conventions");
    summary.push_note(format!("{} classes and closed vectors sampled", report.classes));
    summary.push_note(format!("Leibniz rule holds with signs {:?}", report.leibniz_holds));
    entries.push(summary.finish());
    Ok(AxiomReport {
        instance: "brst-26".into(),
        bounds: Bounds::new(class_weight, closed_weight),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn critical_suite_passes_with_a_table() {
        let out = brst_suite(&qi(26), 3, false).unwrap();
        assert!(out.report.passed(), "{:?}", out.report.first_failure());
        let t = out.table.unwrap();
        assert!(t.rows.iter().any(|r| (r.weight, r.ghost) == (0, 0) && r.dim >= 1));
    }

    #[test]
    fn off_critical_square_fails_and_replays() {
        let out = brst_suite(&qi(25), 2, false).unwrap();
        let e = out.report.entry("delta-squared").unwrap();
        let Status::Fail { counterexample } = &e.status else {
            panic!("δ² should fail at c = 25")
        };
        let suite = BrstSuite::new(qi(25));
        let again = suite
            .evaluate(counterexample.check, &counterexample.params, &counterexample.input, None)
            .unwrap();
        assert_eq!(again.as_deref(), Some(counterexample.residual.as_str()));
        assert!(out.table.is_none());
        // d² fails too, and the symbolic anomaly still vanishes at 26.
        assert!(out.report.entry("dual-squared").unwrap().failed());
        assert!(!out.report.entry("anomaly-divisible").unwrap().failed());
    }

    #[test]
    fn expected_anomaly_passes() {
        let out = brst_suite(&qi(25), 2, true).unwrap();
        assert!(out.report.passed(), "{:?}", out.report.first_failure());
        let out = brst_suite(&qi(26), 2, true).unwrap();
        assert!(out.report.entry("anomaly-detected").unwrap().failed());
    }

    #[test]
    fn adjointness_matches_direct_evaluation() {
        let suite = BrstSuite::new(qi(26));
        let r = suite.evaluate(Check::Adjointness, &[2, 0], "L(-2)", None).unwrap();
        assert_eq!(r, None);
        // c(-2)1 has grade (2, 1), the top of the pair of steps from ghost -1.
        assert_eq!(suite.evaluate(Check::DualSquare, &[2, -1], "c(-2)", None).unwrap(), None);
        assert!(suite.evaluate(Check::DualSquare, &[2, 0], "c(-2)", None).is_err());
    }
}
