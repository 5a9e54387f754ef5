//! The formal sewing calculus: solving for Ψ, sewing sampled points, and the
//! Virasoro relations of the left-invariant vector fields.

use tvoa::scalar::{format_scalar, qi};
use tvoa::sewing::{associativity_defect, sample_point, sew, solve_psi, witt_check, ScaleReading, Var, WeightedSeries};

fn main() -> tvoa::Result<()> {
    let d = 3;
    let a: Vec<_> = (1..=2).map(|k| WeightedSeries::var(Var::A1(k), d)).collect();
    let b: Vec<_> = (1..=2).map(|k| WeightedSeries::var(Var::B0(k), d)).collect();
    let psi = solve_psi(&a, &WeightedSeries::var(Var::UnitA, d), &b, d, 2)?;
    for j in -2..=2 {
        println!("Ψ_{j} = {}", psi.get(j));
    }

    let (p, q, r) = (sample_point(1, 2, 4), sample_point(2, 2, 4), sample_point(3, 2, 4));
    let s = sew(&p, &q, None, ScaleReading::Full)?;
    println!("sewn unit: {}", s.element.unit);
    let defect = associativity_defect(&p, &q, &r, ScaleReading::Full)?;
    println!("associativity defects at degree 4: {}", defect.len());

    let w = witt_check(3, 5, &qi(26), ScaleReading::Full)?;
    let bad = w.pairs.iter().filter(|p| !p.passed()).count();
    println!("{} Witt pairs, {bad} with a residual", w.pairs.len());
    for (m, c) in &w.central.fitted {
        println!("central charge fitted from m = {m}: {}", format_scalar(c));
    }
    Ok(())
}
