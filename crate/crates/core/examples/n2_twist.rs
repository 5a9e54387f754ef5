//! Twisting the N=2 superconformal vacuum module: the twisted Virasoro
//! field has central charge 0 for every c, and the twist is a strong
//! topological vertex operator algebra.

use tvoa::fock::DisplayModeSum;
use tvoa::n2::{self, TwistedG};
use tvoa::scalar::{q, CPoly};
use tvoa::tvoa::Bounds;

fn main() -> tvoa::Result<()> {
    let c = q(9, 1);
    let alg = n2::vacuum_module(c.clone());
    for (x, y) in [(("Gplus", 1), ("Gminus", -1)), (("J", 1), ("J", -1)), (("L", 1), ("Gplus", -1))] {
        let b = n2::ns_bracket(&alg, x, y)?;
        println!("[{}({}), {}({})] = {}", x.0, x.1, y.0, y.1, DisplayModeSum(&alg, &b));
    }

    println!("ω_T = {}", alg.format_vector(&n2::twisted_omega(&alg)));
    let rational = n2::check_twisted_virasoro(&alg, 3, 3);
    println!("c = 9: twisted central charge {}, {} cases", rational.central_charge, rational.cases);
    let symbolic = n2::check_twisted_virasoro(&n2::vacuum_module(CPoly::c()), 2, 2);
    println!("symbolic c: twisted central charge {}", symbolic.central_charge);

    let inst = n2::twist(c, TwistedG::Half);
    let axioms = inst.check_axioms(Bounds::new(3, 2))?;
    let derived = inst.derived_identities(Bounds::new(3, 2))?;
    println!("{}: axioms {}, derived identities {}", inst.name, verdict(axioms.passed()), verdict(derived.passed()));
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}
