//! BRST cohomology of the c = 26 Virasoro vacuum module tensored with ghosts,
//! and the Gerstenhaber structure on its low-weight classes.

use tvoa::brst::{tensor_algebra, BvStructure, Complex};
use tvoa::scalar::qi;

fn main() -> tvoa::Result<()> {
    let alg = tensor_algebra(qi(26));
    let cx = Complex::new(&alg)?;

    println!("weight ghost chains cohomology");
    for row in cx.table(4)?.rows {
        println!("{:>6} {:>5} {:>6} {:>10}", row.weight, row.ghost, row.chain_dim, row.dim);
    }

    for g in cx.ghost_range(0) {
        for rep in cx.cohomology(0, g)?.representatives {
            println!("class at ghost number {g}: {}", alg.format_vector(&rep));
        }
    }

    let bv = BvStructure::new(&cx)?;
    let report = bv.check_axioms(2, 1)?;
    for c in &report.checks {
        println!("{:<64} {:>5} cases  {}", c.name, c.cases, if c.passed { "ok" } else { "FAILED" });
    }
    println!("Leibniz conventions satisfied: {:?}", report.leibniz_holds);

    let anomalous = tensor_algebra(qi(25));
    let cx25 = Complex::new(&anomalous)?;
    match cx25.check_square(2) {
        Err(e) => println!("c = 25: {e}"),
        Ok(()) => println!("c = 25: unexpectedly nilpotent"),
    }
    Ok(())
}
