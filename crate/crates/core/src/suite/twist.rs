use crate::error::{Error, Result};
use crate::fock::{Algebra, DisplayModeSum, Mode, Monomial, Vector};
use crate::n2;
use crate::report::{AxiomReport, Bounds, Check, EntryBuilder, Witness};
use crate::scalar::{parse_scalar, CPoly, Coeff, Scalar};
use crate::virasoro::relation_residual;

use super::{basis_vectors, need, not_here};

/// The N=2 vacuum module at a rational or symbolic central charge.
pub enum TwistSuite {
    Rational(Algebra<Scalar>),
    Symbolic(Algebra<CPoly>),
}

impl TwistSuite {
    /// `c` gives the symbolic module, anything else must be a rational.
    pub fn from_text(central_charge: &str) -> Result<Self> {
        Ok(if central_charge.trim() == "c" {
            TwistSuite::Symbolic(n2::vacuum_module(CPoly::c()))
        } else {
            TwistSuite::Rational(n2::vacuum_module(parse_scalar(central_charge)?))
        })
    }

    pub fn evaluate(&self, check: Check, params: &[i64], input: &str) -> Result<Option<String>> {
        match self {
            TwistSuite::Rational(a) => evaluate_in(a, check, params, input),
            TwistSuite::Symbolic(a) => evaluate_in(a, check, params, input),
        }
    }
}

fn mode_of<C: Coeff>(alg: &Algebra<C>, sym: i64, index: i64) -> Result<Mode> {
    let n = alg.table().symbols().len() as i64;
    if !(0..n).contains(&sym) {
        return Err(Error::Declaration(format!("no symbol with slot {sym}")));
    }
    Ok(Mode::new(sym as u16, index))
}

fn central_charge_of<C: Coeff>(alg: &Algebra<C>) -> C {
    let omega_t = n2::twisted_omega(alg);
    let lt = |n: i64, v: &Vector<C>| n2::twisted_l(alg, &omega_t, n, v);
    let vac = Vector::vacuum();
    let mut r = lt(2, &lt(-2, &vac));
    r.sub_assign(&lt(-2, &lt(2, &vac)));
    r.axpy(&C::from_int(-4), &lt(0, &vac));
    r.coeff(&Monomial::vacuum()).scale(&crate::scalar::qi(2))
}

/// Residual as text, `None` when the identity holds.
fn residual_in<C: Coeff>(alg: &Algebra<C>, check: Check, params: &[i64], v: &Vector<C>) -> Result<Option<String>> {
    let omega_t = n2::twisted_omega(alg);
    let lt = |n: i64, w: &Vector<C>| n2::twisted_l(alg, &omega_t, n, w);
    let vector = |r: Vector<C>| (!r.is_zero()).then(|| alg.format_vector(&r));
    Ok(match check {
        Check::ModeSkew => {
            need(check, params, 4)?;
            let r = alg.antisymmetry_residual(mode_of(alg, params[0], params[1])?, mode_of(alg, params[2], params[3])?);
            (!r.is_zero()).then(|| DisplayModeSum(alg, &r).to_string())
        }
        Check::ModeJacobi => {
            need(check, params, 6)?;
            let r = alg.jacobi_residual(
                mode_of(alg, params[0], params[1])?,
                mode_of(alg, params[2], params[3])?,
                mode_of(alg, params[4], params[5])?,
            );
            (!r.is_zero()).then(|| DisplayModeSum(alg, &r).to_string())
        }
        Check::TwistClosedForm => {
            need(check, params, 1)?;
            vector(lt(params[0], v).sub(&n2::twisted_l_closed_form(alg, params[0], v)))
        }
        Check::TwistVirasoro => {
            need(check, params, 2)?;
            vector(relation_residual(&lt, &C::zero(), params[0], params[1], v))
        }
        Check::TwistCentralCharge => {
            need(check, params, 0)?;
            let c = central_charge_of(alg);
            (!c.is_zero()).then(|| c.to_string())
        }
        other => return Err(not_here(other, "N=2")),
    })
}

fn evaluate_in<C: Coeff>(alg: &Algebra<C>, check: Check, params: &[i64], input: &str) -> Result<Option<String>> {
    let v = if matches!(check, Check::ModeSkew | Check::ModeJacobi) {
        Vector::vacuum()
    } else {
        alg.parse_vector(input)?
    };
    residual_in(alg, check, params, &v)
}

fn label(c: &str) -> String {
    format!("n2-{c}")
}

/// Graded antisymmetry and Jacobi for all modes with indices in
/// `[-index_range, index_range]`.
pub fn ns_relations_suite(central_charge: &str, index_range: i64) -> Result<AxiomReport> {
    match TwistSuite::from_text(central_charge)? {
        TwistSuite::Rational(a) => ns_relations_in(&a, central_charge, index_range),
        TwistSuite::Symbolic(a) => ns_relations_in(&a, central_charge, index_range),
    }
}

fn ns_relations_in<C: Coeff>(alg: &Algebra<C>, c: &str, r: i64) -> Result<AxiomReport> {
    let n = alg.table().symbols().len() as i64;
    let modes: Vec<(i64, i64)> = (0..n).flat_map(|s| (-r..=r).map(move |i| (s, i))).collect();
    let name = |(s, i): (i64, i64)| alg.format_mode(Mode::new(s as u16, i));
    let mut skew = EntryBuilder::new("skew-symmetry", "[X, Y] = -(-1)^{|X||Y|} [Y, X] in the mode algebra");
    for &a in &modes {
        for &b in &modes {
            let p = [a.0, a.1, b.0, b.1];
            skew.case(Check::ModeSkew, &p, || {
                Ok(residual_in(alg, Check::ModeSkew, &p, &Vector::vacuum())?
                    .map(|r| Witness::new(format!("{}, {}", name(a), name(b)), r)))
            })?;
        }
    }
    let mut jac = EntryBuilder::new(
        "jacobi",
        "[X, [Y, Z]] = [[X, Y], Z] + (-1)^{|X||Y|} [Y, [X, Z]] in the mode algebra",
    );
    for &a in &modes {
        for &b in &modes {
            for &d in &modes {
                let p = [a.0, a.1, b.0, b.1, d.0, d.1];
                jac.case(Check::ModeJacobi, &p, || {
                    Ok(residual_in(alg, Check::ModeJacobi, &p, &Vector::vacuum())?
                        .map(|r| Witness::new(format!("{}, {}, {}", name(a), name(b), name(d)), r)))
                })?;
            }
        }
    }
    Ok(AxiomReport {
        instance: label(c),
        bounds: Bounds::new(0, r),
        entries: vec![skew.finish(), jac.finish()],
    })
}

/// The twisted modes against their closed form, their Virasoro relations
/// with central charge 0, and the central charge read off the vacuum.
pub fn twisted_virasoro_suite(central_charge: &str, max_weight: i64, index_range: i64) -> Result<AxiomReport> {
    match TwistSuite::from_text(central_charge)? {
        TwistSuite::Rational(a) => twisted_in(&a, central_charge, max_weight, index_range),
        TwistSuite::Symbolic(a) => twisted_in(&a, central_charge, max_weight, index_range),
    }
}

fn twisted_in<C: Coeff>(alg: &Algebra<C>, c: &str, w: i64, r: i64) -> Result<AxiomReport> {
    let vs = basis_vectors(alg, 0, w);
    let run = |e: &mut EntryBuilder, check: Check, p: &[i64], v: &Vector<C>| -> Result<()> {
        e.case(check, p, || {
            Ok(residual_in(alg, check, p, v)?.map(|res| Witness::new(alg.format_vector(v), res)))
        })
    };
    let mut closed = EntryBuilder::new(
        "closed-form",
        "modes of Y(ω + J(-2)1/2, x) equal L(n) - ((n + 1)/2) J(n)",
    );
    let mut vir = EntryBuilder::new("virasoro", "twisted modes satisfy the Virasoro relations with central charge 0");
    for v in &vs {
        for n in -r..=r {
            run(&mut closed, Check::TwistClosedForm, &[n], v)?;
        }
        for m in -r..=r {
            for n in -r..=r {
                run(&mut vir, Check::TwistVirasoro, &[m, n], v)?;
            }
        }
    }
    let mut cc = EntryBuilder::new("central-charge", "[L_T(2), L_T(-2)] 1 - 4 L_T(0) 1 = 0");
    run(&mut cc, Check::TwistCentralCharge, &[], &Vector::vacuum())?;
    let cc = cc.note(format!("twisted central charge {}", central_charge_of(alg)));
    Ok(AxiomReport {
        instance: label(c),
        bounds: Bounds::new(w, r),
        entries: vec![closed.finish(), vir.finish(), cc.finish()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbolic_and_rational_twists_close() {
        for c in ["c", "9"] {
            let r = twisted_virasoro_suite(c, 2, 2).unwrap();
            assert!(r.passed(), "{c}: {:?}", r.first_failure());
            let r = ns_relations_suite(c, 1).unwrap();
            assert!(r.passed(), "{c}: {:?}", r.first_failure());
            assert_eq!(r.entry("jacobi").unwrap().cases, 12 * 12 * 12);
        }
    }

    #[test]
    fn replay_recomputes_single_cases() {
        let suite = TwistSuite::from_text("9").unwrap();
        assert_eq!(suite.evaluate(Check::TwistCentralCharge, &[], "1").unwrap(), None);
        assert_eq!(suite.evaluate(Check::TwistVirasoro, &[2, -2], "J(-1)").unwrap(), None);
        assert!(suite.evaluate(Check::ModeJacobi, &[9, 0, 0, 0, 0, 0], "").is_err());
    }
}
