//! A failing run, serialized to JSON, read back and re-evaluated: the stored
//! counterexample reproduces exactly.

use std::collections::BTreeMap;

use tvoa::report::{Report, Section, Status};
use tvoa::scalar::qi;
use tvoa::suite::{brst_suite, Context};

fn main() -> tvoa::Result<()> {
    let out = brst_suite(&qi(25), 2, false)?;
    let mut report = Report::new("example", BTreeMap::new(), b"");
    report.push(Section::new("brst", Context::Brst { central_charge: "25".into() }, out.report));
    let json = report.to_json();
    println!("report is {} bytes, passed = {}", json.len(), report.passed);

    let back = Report::from_json(&json)?;
    for sec in &back.sections {
        for e in &sec.report.entries {
            if let Status::Fail { counterexample } = &e.status {
                let again = sec.context.evaluate(counterexample)?;
                println!(
                    "{}: stored {} / recomputed {} / reproduced {}",
                    e.id,
                    counterexample.residual,
                    again.as_deref().unwrap_or("nothing"),
                    again.as_deref() == Some(counterexample.residual.as_str())
                );
            }
        }
    }
    Ok(())
}
