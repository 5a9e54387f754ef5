//! The bc ghost system: its weight spaces, a few brackets and the Virasoro
//! relations of `L_∧` with central charge -26.

use tvoa::fock::Vector;
use tvoa::ghost::{self, Ghosts};
use tvoa::scalar::{qi, Scalar};
use tvoa::suite::ghost_suite;
use tvoa::virasoro::relation_residual;

fn main() -> tvoa::Result<()> {
    let alg = ghost::ghost_module::<Scalar>();
    let g = Ghosts::new(&alg)?;

    for w in -1..=3 {
        let basis: Vec<String> = alg.basis(w).iter().map(|m| alg.format_monomial(m)).collect();
        println!("weight {w:>2}: {}", basis.join(", "));
    }

    let omega = g.omega_wedge();
    println!("ω_∧ = {}", alg.format_vector(&omega));
    println!("L_∧(0) ω_∧ = {}", alg.format_vector(&g.l_wedge(0, &omega)));

    let vac = Vector::vacuum();
    let l = |n: i64, v: &Vector<Scalar>| g.l_wedge(n, v);
    for (m, n) in [(2, -2), (3, -3), (1, -1)] {
        let r = relation_residual(&l, &qi(-26), m, n, &vac);
        println!("[L_∧({m}), L_∧({n})] on 1 with c = -26: residual {}", alg.format_vector(&r));
    }

    let report = ghost_suite(4, 3)?;
    for e in &report.entries {
        println!("{:<16} {:>6} cases  {}", e.id, e.cases, if e.failed() { "FAILED" } else { "ok" });
    }
    Ok(())
}
