//! Axioms and derived identities for the c = 26 matter ⊗ ghost algebra.
//!
//! Usage: `cargo run --example tensor_tvoa -- [max_weight] [index_range]`

use std::time::Instant;

use tvoa::scalar::qi;
use tvoa::tvoa::{tensor_instance, AxiomReport, Bounds, Status, TensorCurrent};

fn show(report: &AxiomReport) {
    for e in &report.entries {
        let status = match &e.status {
            Status::Pass => "pass".to_string(),
            Status::Fail { counterexample } => format!("FAIL residual {}", counterexample.residual),
            Status::VerifiedUpToBound { weight } => format!("verified up to weight {weight}"),
            Status::Skipped { reason } => format!("skipped ({reason})"),
        };
        println!("  [{:>14}] {:<70} {:>7} cases  {status}", e.id, e.description, e.cases);
    }
}

fn main() -> tvoa::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<i64>().expect("integer argument"));
    let bounds = Bounds::new(args.next().unwrap_or(4), args.next().unwrap_or(3));
    let inst = tensor_instance(qi(26), TensorCurrent::Primary);

    let t = Instant::now();
    println!("axioms:");
    show(&inst.check_axioms(bounds)?);
    println!("q_0 and f_0 against the BRST complex:");
    show(&inst.brst_consistency(bounds.max_weight)?);
    println!("derived identities:");
    show(&inst.derived_identities(bounds)?);
    println!("graded Poisson laws on End V:");
    show(&inst.poisson_laws(Bounds::new(bounds.max_weight.min(3), 3), 11)?);
    println!("central charge: {}", inst.central_charge()?);
    eprintln!("elapsed {:?}", t.elapsed());

    let bare = tensor_instance(qi(26), TensorCurrent::Bare);
    println!("without the derivative term in q:");
    show(&bare.check_axioms(Bounds::new(2, 2))?);
    Ok(())
}
