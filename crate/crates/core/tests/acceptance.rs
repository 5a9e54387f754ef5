//! End-to-end acceptance run at the full default bounds. Prints one line per
//! criterion and exits nonzero if any of them fails.

use std::process::Command;

use tvoa::n2::{twist, TwistedG};
use tvoa::report::{AxiomEntry, AxiomReport, Bounds, Status};
use tvoa::scalar::qi;
use tvoa::sewing::ScaleReading;
use tvoa::suite::{
    brst_suite, gerstenhaber_suite, ghost_suite, ns_relations_suite, sewing_suite, twisted_virasoro_suite,
    SewingOptions,
};
use tvoa::tvoa::{tensor_instance, TensorCurrent};
use tvoa::Result;

/// Ok when the entry exists, was examined, and holds.
fn holds(r: &AxiomReport, id: &str) -> std::result::Result<(), String> {
    match r.entry(id) {
        None => Err(format!("{}: no entry `{id}`", r.instance)),
        Some(AxiomEntry { status: Status::Pass | Status::VerifiedUpToBound { .. }, cases, .. }) if *cases > 0 => Ok(()),
        Some(e) => Err(format!("{}/{id}: {:?} after {} cases", r.instance, e.status, e.cases)),
    }
}

/// Every entry holds, none skipped.
fn all_hold(r: &AxiomReport) -> std::result::Result<(), String> {
    r.entries.iter().try_for_each(|e| holds(r, &e.id))
}

/// Like [`all_hold`], but entries that do not apply may be skipped.
fn none_fail(r: &AxiomReport) -> std::result::Result<(), String> {
    match r.first_failure() {
        Some(e) => Err(format!("{}/{}: {:?}", r.instance, e.id, e.status)),
        None => Ok(()),
    }
}

type Verdict = std::result::Result<(), String>;

fn ghosts() -> Result<(Verdict, Verdict)> {
    let r = ghost_suite(8, 4)?;
    let anti = holds(&r, "anticommutators").and_then(|_| {
        // Indices run over [-8, 8].
        let per_vector = r.entry("anticommutators").unwrap().cases % (3 * 17 * 17);
        (per_vector == 0).then_some(()).ok_or("anticommutator index range is not [-8, 8]".to_string())
    });
    Ok((anti, holds(&r, "virasoro")))
}

fn nilpotency() -> Result<Verdict> {
    let out = brst_suite(&qi(26), 6, false)?;
    let r = &out.report;
    Ok(["delta-squared", "anomaly-divisible", "dual-squared", "adjointness"]
        .into_iter()
        .try_for_each(|id| holds(r, id)))
}

fn tensor() -> Result<(Verdict, Verdict)> {
    let inst = tensor_instance(qi(26), TensorCurrent::Primary);
    let b = Bounds::new(5, 4);
    let axioms = all_hold(&inst.check_axioms(b)?);
    let derived = all_hold(&inst.derived_identities(b)?).and_then(|_| match inst.central_charge() {
        Ok(c) if c == qi(0) => Ok(()),
        Ok(c) => Err(format!("total central charge {c}")),
        Err(e) => Err(e.to_string()),
    });
    Ok((axioms, derived))
}

fn gerstenhaber() -> Result<Verdict> {
    let r = gerstenhaber_suite(2, 1)?;
    let laws = [
        "product-is-graded-commutative",
        "product-is-associative",
        "bracket-antisymmetry",
        "bracket-jacobi-identity",
        "bracket-leibniz-rule",
        "δ-descends-to-cohomology-lowers-ghost-number-squares-to-zero",
    ];
    Ok(none_fail(&r).and_then(|_| laws.into_iter().try_for_each(|id| holds(&r, id))))
}

fn n2_twist() -> Result<Verdict> {
    let mut verdicts = Vec::new();
    for c in ["c", "9"] {
        verdicts.push(all_hold(&ns_relations_suite(c, 3)?));
        verdicts.push(all_hold(&twisted_virasoro_suite(c, 5, 3)?));
    }
    let inst = twist(qi(9), TwistedG::Half);
    if !inst.strong {
        verdicts.push(Err("twisted instance is not strong".into()));
    }
    let b = Bounds::new(4, 3);
    verdicts.push(all_hold(&inst.check_axioms(b)?));
    verdicts.push(all_hold(&inst.derived_identities(b)?));
    verdicts.push(none_fail(&inst.poisson_laws(b, 11)?));
    Ok(verdicts.into_iter().collect())
}

fn sewing() -> Result<(Verdict, Verdict)> {
    let opts = SewingOptions::default();
    assert_eq!((opts.degree, opts.witt_range, opts.reading), (5, 3, ScaleReading::Full));
    let out = sewing_suite(opts)?;
    let r = &out.report;
    let calculus = ["psi-weights", "identity", "associativity", "witt", "central-charge"]
        .into_iter()
        .try_for_each(|id| holds(r, id))
        .and_then(|_| {
            let fit = &out.witt.central;
            let expected: Vec<i64> = (2..=3).collect();
            let got: Vec<i64> = fit.fitted.iter().map(|(m, _)| *m).collect();
            (got == expected && fit.consistent() && fit.declared == qi(26))
                .then_some(())
                .ok_or(format!("central fit {:?}", fit.fitted))
        });
    let round_trips = ["inverse", "truncation"].into_iter().try_for_each(|id| holds(r, id));
    Ok((calculus, round_trips))
}

fn reruns_match() -> Verdict {
    let runs = [
        &["check-ghost"][..],
        &["check-brst", "--central-charge", "26"][..],
        &["sew"][..],
    ];
    for args in runs {
        let run = || Command::new(env!("CARGO_BIN_EXE_tvoa")).args(args).env_remove("TVOA_CEILINGS").output();
        let (a, b) = (run().map_err(|e| e.to_string())?, run().map_err(|e| e.to_string())?);
        if a.status.code() != Some(0) {
            return Err(format!("{args:?} exited with {:?}", a.status.code()));
        }
        if a.stdout != b.stdout {
            return Err(format!("{args:?}: reports differ between runs"));
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    let (anti, wedge) = ghosts()?;
    let (axioms, derived) = tensor()?;
    let (calculus, round_trips) = sewing()?;
    let determinism = round_trips.and_then(|_| reruns_match());
    let lines = [
        ("ghost anticommutators", anti),
        ("L_∧ Virasoro relations at central charge -26", wedge),
        ("BRST nilpotency dichotomy", nilpotency()?),
        ("TVOA axioms on the c = 26 tensor instance", axioms),
        ("derived identities and vanishing central charge", derived),
        ("Gerstenhaber structure on cohomology", gerstenhaber()?),
        ("N=2 twist", n2_twist()?),
        ("sewing calculus and fitted central charge", calculus),
        ("round trips, truncation coherence, deterministic reports", determinism),
    ];
    let mut failed = 0;
    for (i, (name, verdict)) in lines.iter().enumerate() {
        match verdict {
            Ok(()) => println!("{} PASS {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("{} FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} passed", lines.len() - failed, lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
    Ok(())
}
