//! Loading an instance from a declaration and checking it, including what a
//! malformed declaration reports.

use tvoa::decl::InstanceDeclaration;
use tvoa::tvoa::Bounds;

const TENSOR: &str = include_str!("../declarations/tensor-26.json");

fn main() -> tvoa::Result<()> {
    let inst = InstanceDeclaration::parse(TENSOR)?.build()?;
    let report = inst.check_axioms(Bounds::new(3, 2))?;
    for e in &report.entries {
        println!("{:>2} {:<60} {}", e.id, e.description, if e.failed() { "FAILED" } else { "ok" });
    }

    let broken = TENSOR.replace("\"q\": \"L(-2)", "\"q\": \"M(-2)");
    match InstanceDeclaration::parse(&broken).and_then(|d| d.build()) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => println!("unexpectedly accepted"),
    }
    Ok(())
}
