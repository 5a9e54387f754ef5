use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::report::{AxiomReport, Bounds, Check, Counterexample, EntryBuilder, Witness};
use crate::scalar::{format_scalar, q, Scalar};
use crate::sewing::{
    associativity_defect, differences, sample_point, sew, solve_psi, witt_check, FormalMap, ModuliElement,
    PsiSolution, ScaleReading, Var, WeightedSeries as Series, WittReport,
};

use super::{need, not_here};

/// Coordinates per factor in the symbolic checks.
const VARS: u16 = 3;
/// Entries per sampled point.
const SAMPLE_LEN: usize = 2;
/// x-order cap of the round-trip maps.
const ROUND_TRIP_ORDER: i32 = 8;

/// Bounds and choices for the sewing checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SewingOptions {
    /// Truncation degree `D`. Weights are checked at `D + 1`.
    pub degree: i32,
    /// Witt pairs `m < n` with `|m|, |n| ≤ witt_range`.
    pub witt_range: i64,
    pub central_charge: Scalar,
    pub reading: ScaleReading,
    /// Seeds used by the sampled checks.
    pub samples: usize,
}

impl Default for SewingOptions {
    fn default() -> Self {
        SewingOptions {
            degree: 5,
            witt_range: 3,
            central_charge: q(26, 1),
            reading: ScaleReading::Full,
            samples: 4,
        }
    }
}

pub struct SewingSuite {
    opts: SewingOptions,
}

fn symbolic_psi(degree: i32, j_max: usize) -> Result<PsiSolution> {
    let a: Vec<Series> = (1..=VARS).map(|k| Series::var(Var::A1(k), degree)).collect();
    let b: Vec<Series> = (1..=VARS).map(|k| Series::var(Var::B0(k), degree)).collect();
    solve_psi(&a, &Series::var(Var::UnitA, degree), &b, degree, j_max)
}

fn truncated(psi: &PsiSolution, degree: i32) -> PsiSolution {
    let t = |v: &[Series]| v.iter().map(|s| s.truncate(degree)).collect();
    PsiSolution {
        plus: t(&psi.plus),
        minus: t(&psi.minus),
        zero: psi.zero.truncate(degree),
    }
}

/// `f_1 x + f_2 x^2 + f_3 x^3` with nonzero rational `f_k`.
fn random_map(seed: u64, degree: i32) -> FormalMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nonzero = || loop {
        let n: i64 = rng.gen_range(-9..=9);
        if n != 0 {
            return q(n, rng.gen_range(1..=8));
        }
    };
    let fs: Vec<Series> = (0..3).map(|_| Series::constant(nonzero(), degree)).collect();
    FormalMap::from_coefficients(&fs, degree, Some(ROUND_TRIP_ORDER))
}

fn map_text(f: &FormalMap) -> String {
    let cs: Vec<String> = f.coefficients(3).iter().map(|c| c.to_string()).collect();
    format!("{} x + {} x^2 + {} x^3", cs[0], cs[1], cs[2])
}

fn joined(ds: Vec<String>) -> Option<String> {
    (!ds.is_empty()).then(|| ds.join("; "))
}

fn u64_param(p: i64) -> Result<u64> {
    u64::try_from(p).map_err(|_| Error::Declaration(format!("seed {p} is negative")))
}

fn i32_param(p: i64) -> Result<i32> {
    i32::try_from(p).map_err(|_| Error::Declaration(format!("degree {p} is out of range")))
}

impl SewingSuite {
    pub fn new(opts: SewingOptions) -> Self {
        SewingSuite { opts }
    }

    pub fn options(&self) -> &SewingOptions {
        &self.opts
    }

    /// `Ψ_j` has weight `j` at the given degree.
    fn psi_weight(&self, psi: &PsiSolution, j: i64) -> Option<String> {
        let ws = psi.get(j).weights();
        (!(ws.is_empty() || ws == [j])).then(|| format!("weights {ws:?}"))
    }

    /// Side 0 sews the identity on the left, side 1 on the right.
    fn identity_law(&self, side: i64) -> Result<Option<String>> {
        let d = self.opts.degree;
        let p = ModuliElement::symbolic(VARS, d);
        let id = ModuliElement::identity(d);
        let (l, r) = if side == 0 { (&id, &p) } else { (&p, &id) };
        let s = sew(l, r, Some(VARS as usize), self.opts.reading)?;
        Ok(joined(differences(&s.element, &p)))
    }

    fn sample_triple(&self, seed: u64) -> [ModuliElement; 3] {
        let d = self.opts.degree;
        [0, 1, 2].map(|i| sample_point(3 * seed + i, SAMPLE_LEN, d))
    }

    fn associativity(&self, seed: u64) -> Result<Option<String>> {
        let [p, q, r] = self.sample_triple(seed);
        Ok(joined(associativity_defect(&p, &q, &r, self.opts.reading)?))
    }

    fn round_trip(&self, seed: u64) -> Result<Option<String>> {
        let f = random_map(seed, self.opts.degree);
        let g = f.compositional_inverse()?;
        let x = FormalMap::x(self.opts.degree, Some(ROUND_TRIP_ORDER));
        let n = ROUND_TRIP_ORDER as usize;
        let mut out = Vec::new();
        for (name, h) in [("f(f^-1(x))", f.compose(&g)?), ("f^-1(f(x))", g.compose(&f)?)] {
            if h.coefficients(n) != x.coefficients(n) {
                out.push(format!("{name} = {h}"));
            }
        }
        Ok(joined(out))
    }

    /// Kind 0 solves for `Ψ` symbolically, kind 1 sews a sampled pair; both
    /// at degrees `low` and `high`, the latter truncated back to `low`.
    fn coherence(&self, kind: i64, low: i32, high: i32) -> Result<Option<String>> {
        if kind == 0 {
            let j = VARS as usize;
            let a = symbolic_psi(low, j)?;
            let b = truncated(&symbolic_psi(high, j)?, low);
            let mut out = Vec::new();
            for i in -(j as i64)..=j as i64 {
                if a.get(i) != b.get(i) {
                    out.push(format!("Ψ_{i}: {} vs {}", a.get(i), b.get(i)));
                }
            }
            return Ok(joined(out));
        }
        let [p, q, _] = self.sample_triple(0);
        let (ph, qh) = (p.truncate(high), q.truncate(high));
        let (pl, ql) = (p.truncate(low), q.truncate(low));
        let order = crate::sewing::default_order(&ph, &qh, high)?;
        let a = sew(&pl, &ql, Some(order), self.opts.reading)?.element;
        let b = sew(&ph, &qh, Some(order), self.opts.reading)?.element.truncate(low);
        Ok(joined(differences(&a, &b)))
    }

    fn witt(&self) -> Result<WittReport> {
        witt_check(self.opts.witt_range, self.opts.degree, &self.opts.central_charge, self.opts.reading)
    }

    /// Recomputes a stored case.
    pub fn evaluate(&self, check: Check, params: &[i64], _input: &str) -> Result<Option<String>> {
        match check {
            Check::PsiWeight => {
                need(check, params, 3)?;
                let psi = symbolic_psi(i32_param(params[1])?, params[2].unsigned_abs() as usize)?;
                if params[0].unsigned_abs() > params[2].unsigned_abs() {
                    return Err(Error::Declaration(format!("Ψ_{} is beyond the solved range", params[0])));
                }
                Ok(self.psi_weight(&psi, params[0]))
            }
            Check::IdentityLaw => {
                need(check, params, 1)?;
                self.identity_law(params[0])
            }
            Check::Associativity => {
                need(check, params, 1)?;
                self.associativity(u64_param(params[0])?)
            }
            Check::InverseRoundTrip => {
                need(check, params, 1)?;
                self.round_trip(u64_param(params[0])?)
            }
            Check::TruncationCoherence => {
                need(check, params, 3)?;
                self.coherence(params[0], i32_param(params[1])?, i32_param(params[2])?)
            }
            Check::WittPair => {
                need(check, params, 2)?;
                let w = self.witt()?;
                let pair = w
                    .pairs
                    .iter()
                    .find(|p| p.m == params[0] && p.n == params[1])
                    .ok_or_else(|| Error::Declaration(format!("pair {params:?} is outside the range")))?;
                Ok(pair_residual(&pair.residual))
            }
            Check::CentralFit => {
                need(check, params, 0)?;
                Ok(fit_residual(&self.witt()?))
            }
            other => Err(not_here(other, "sewing")),
        }
    }
}

fn pair_residual(r: &[(String, String)]) -> Option<String> {
    joined(r.iter().map(|(slot, v)| format!("{slot}: {v}")).collect())
}

fn fit_residual(w: &WittReport) -> Option<String> {
    let c = &w.central;
    (!c.consistent()).then(|| {
        let fitted: Vec<String> = c.fitted.iter().map(|(m, v)| format!("{m}:{}", format_scalar(v))).collect();
        format!(
            "declared {}, fitted {{{}}}, kappa rank {}, uniform {}",
            format_scalar(&c.declared),
            fitted.join(", "),
            c.kappa_rank,
            c.uniform
        )
    })
}

/// The report together with the full Witt computation.
pub struct SewingOutcome {
    pub report: AxiomReport,
    pub witt: WittReport,
}

/// Weights of `Ψ`, identity and sampled associativity laws, compositional
/// inverses, truncation coherence and the Virasoro relations of the vector
/// fields with their fitted central charge.
pub fn sewing_suite(opts: SewingOptions) -> Result<SewingOutcome> {
    let suite = SewingSuite::new(opts);
    let o = suite.options().clone();
    let d = o.degree;
    let mut entries = Vec::new();

    let wd = d + 1;
    let j_max = VARS as usize + 1;
    let psi = symbolic_psi(wd, j_max)?;
    let mut e = EntryBuilder::new("psi-weights", "Ψ_j is homogeneous of weight j");
    for j in -(j_max as i64)..=j_max as i64 {
        e.case(Check::PsiWeight, &[j, wd as i64, j_max as i64], || {
            Ok(suite.psi_weight(&psi, j).map(|r| Witness::new(format!("Ψ_{j}"), r)))
        })?;
    }
    entries.push(e.note(format!("degree {wd}, {VARS} coordinates per factor")).finish());

    let mut e = EntryBuilder::new("identity", "sewing with the identity element returns the other factor");
    for side in 0..2 {
        e.case(Check::IdentityLaw, &[side], || {
            let input = if side == 0 { "I, P" } else { "P, I" };
            Ok(suite.identity_law(side)?.map(|r| Witness::new(input, r)))
        })?;
    }
    entries.push(e.note(format!("generic P with {VARS} coordinates per puncture")).finish());

    let mut e = EntryBuilder::new("associativity", "sewing is associative on sampled rational points");
    for seed in 0..o.samples as u64 {
        e.case(Check::Associativity, &[seed as i64], || {
            Ok(suite
                .associativity(seed)?
                .map(|r| Witness::new(format!("samples {}, {}, {}", 3 * seed, 3 * seed + 1, 3 * seed + 2), r)))
        })?;
    }
    entries.push(e.finish());

    let mut e = EntryBuilder::new("inverse", "f(f^-1(x)) = f^-1(f(x)) = x for random maps with three terms");
    for seed in 0..(4 * o.samples.max(1)) as u64 {
        e.case(Check::InverseRoundTrip, &[seed as i64], || {
            Ok(suite
                .round_trip(seed)?
                .map(|r| Witness::new(map_text(&random_map(seed, d)), r)))
        })?;
    }
    entries.push(e.note(format!("compared up to x^{ROUND_TRIP_ORDER}")).finish());

    let mut e = EntryBuilder::new("truncation", "results at a higher degree truncate to the results at the lower one");
    for (kind, what) in [(0, "Ψ"), (1, "sewn samples")] {
        e.case(Check::TruncationCoherence, &[kind, d as i64 - 1, d as i64], || {
            Ok(suite
                .coherence(kind, d - 1, d)?
                .map(|r| Witness::new(format!("{what} at degrees {} and {d}", d - 1), r)))
        })?;
    }
    entries.push(e.finish());

    let witt = suite.witt()?;
    let mut e = EntryBuilder::new("witt", "[L(m), L(n)] = (m - n) L(m + n) away from the central slot");
    for p in &witt.pairs {
        e.case(Check::WittPair, &[p.m, p.n], || {
            Ok(pair_residual(&p.residual).map(|r| Witness::new(format!("L({}), L({})", p.m, p.n), r)))
        })?;
    }
    entries.push(
        e.note(format!("coordinates up to {} and degrees up to {} compared", witt.exact_index, witt.exact_degree))
            .finish(),
    );

    let mut e = EntryBuilder::new(
        "central-charge",
        "the central term fitted from each pair m + n = 0 equals the declared central charge",
    );
    e.count(1);
    if let Some(r) = fit_residual(&witt) {
        e.fail_with(Counterexample {
            check: Check::CentralFit,
            params: vec![],
            input: "fit".into(),
            aux: None,
            residual: r,
        });
    }
    let fitted: Vec<String> = witt.central.fitted.iter().map(|(m, c)| format!("{m}:{}", format_scalar(c))).collect();
    entries.push(e.note(format!("fitted {{{}}}", fitted.join(", "))).finish());

    Ok(SewingOutcome {
        report: AxiomReport {
            instance: format!("sewing-{}", format_scalar(&o.central_charge)),
            bounds: Bounds::new(d as i64, o.witt_range),
            entries,
        },
        witt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SewingOptions {
        SewingOptions {
            degree: 3,
            witt_range: 3,
            samples: 1,
            ..SewingOptions::default()
        }
    }

    #[test]
    fn small_suite_passes() {
        let out = sewing_suite(small()).unwrap();
        assert!(out.report.passed(), "{:?}", out.report.first_failure());
        assert!(out.witt.passed());
    }

    #[test]
    fn cases_replay() {
        let s = SewingSuite::new(small());
        assert_eq!(s.evaluate(Check::InverseRoundTrip, &[7], "").unwrap(), None);
        assert_eq!(s.evaluate(Check::IdentityLaw, &[1], "").unwrap(), None);
        assert_eq!(s.evaluate(Check::PsiWeight, &[-2, 3, 2], "").unwrap(), None);
        assert!(s.evaluate(Check::Associativity, &[-1], "").is_err());
        assert!(s.evaluate(Check::DeltaSquare, &[], "").is_err());
    }

    #[test]
    fn bare_reading_breaks_associativity() {
        let s = SewingSuite::new(SewingOptions {
            reading: ScaleReading::BareA0,
            ..small()
        });
        assert!(s.associativity(1).unwrap().is_some());
    }
}
