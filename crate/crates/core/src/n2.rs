//! The N=2 Neveu-Schwarz superalgebra, its vacuum module and the topological
//! twist.
//!
//! Half-integer modes are stored by an integer: `Gplus(n)` is `G+_{n+1/2}` and
//! `Gminus(n)` is `G-_{n-1/2}`. With these conventions the field of
//! `τ+ = G+_{-3/2}1` has modes `τ+_(k) = G+_{k-1/2}` and `τ- = G-_{-3/2}1` has
//! `τ-_(k) = G-_{k-1/2}`.
//!
//! The module is graded by the twisted weight `L(0) - J(0)/2`, which is an
//! integer on every mode. The vacuum is killed by `L(n)`, `n >= -1`, by
//! `J(n)`, `n >= 0`, and by `G±_r`, `r >= -1/2`; those modes span a
//! subalgebra, so the induced module has the creation monomials as a basis.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{Algebra, BracketTable, ModeSum, RuleSpec, Symbol, Vector};
use crate::scalar::{q, qi, Coeff, Scalar};
use crate::tvoa::TvoaInstance;
use crate::virasoro;

pub const SYMBOLS: [&str; 4] = ["L", "J", "Gplus", "Gminus"];

pub fn symbols() -> Vec<Symbol> {
    vec![
        Symbol::new("L", false, 2, 0, -1),
        Symbol::new("J", false, 1, 0, 0),
        Symbol::new("Gplus", true, 1, 1, -1),
        Symbol::new("Gminus", true, 2, -1, 0),
    ]
}

pub fn rules() -> Vec<RuleSpec> {
    vec![
        RuleSpec::new("L", "L").term("m - n", "L", "m + n").central("(m^3 - m)/12"),
        RuleSpec::new("J", "J").central("m/3"),
        RuleSpec::new("L", "J").term("-n", "J", "m + n"),
        RuleSpec::new("L", "Gplus").term("m/2 - n - 1/2", "Gplus", "m + n"),
        RuleSpec::new("L", "Gminus").term("m/2 - n + 1/2", "Gminus", "m + n"),
        RuleSpec::new("J", "Gplus").term("1", "Gplus", "m + n"),
        RuleSpec::new("J", "Gminus").term("-1", "Gminus", "m + n"),
        RuleSpec::new("Gplus", "Gminus")
            .term("2", "L", "m + n")
            .term("m - n + 1", "J", "m + n")
            .central("(m^2 + m)/3"),
        RuleSpec::new("Gplus", "Gplus"),
        RuleSpec::new("Gminus", "Gminus"),
    ]
}

pub fn table() -> BracketTable {
    BracketTable::new(symbols(), rules()).expect("N=2 table is well formed")
}

/// The vacuum module with central charge `c`.
pub fn vacuum_module<C: Coeff>(c: C) -> Algebra<C> {
    Algebra::new(table(), c).expect("N=2 vacuum module is well formed")
}

/// `[X(m), Y(n)]` from the table, central term included.
pub fn ns_bracket<C: Coeff>(alg: &Algebra<C>, x: (&str, i64), y: (&str, i64)) -> Result<ModeSum<C>> {
    for name in [x.0, y.0] {
        if !SYMBOLS.contains(&name) {
            return Err(Error::UnknownSymbol(name.to_string()));
        }
    }
    Ok(alg.mode_bracket(alg.mode(x.0, x.1)?, alg.mode(y.0, y.1)?))
}

/// `ω_T = L(-2)1 + ½ J(-2)1`.
pub fn twisted_omega<C: Coeff>(alg: &Algebra<C>) -> Vector<C> {
    let l = alg.canonicalize(&[alg.mode("L", -2).expect("L present")]);
    let j = alg.canonicalize(&[alg.mode("J", -2).expect("J present")]);
    l.add(&j.scale(&C::from_scalar(q(1, 2))))
}

/// Mode `L_T(n)` of `Y(ω_T, x)`, computed by the vertex operator recursion.
pub fn twisted_l<C: Coeff>(alg: &Algebra<C>, omega_t: &Vector<C>, n: i64, v: &Vector<C>) -> Vector<C> {
    alg.field_mode(omega_t, n + 1, v)
}

/// `L(n) v - ((n + 1)/2) J(n) v`, the closed form the recursion should match.
pub fn twisted_l_closed_form<C: Coeff>(alg: &Algebra<C>, n: i64, v: &Vector<C>) -> Vector<C> {
    let l = alg.apply(alg.mode("L", n).expect("L present"), v);
    let j = alg.apply(alg.mode("J", n).expect("J present"), v);
    l.sub(&j.scale(&C::from_scalar(q(n + 1, 2))))
}

/// Outcome of the twisted Virasoro checks on one module.
#[derive(Clone, Debug, Serialize)]
pub struct TwistReport {
    pub max_weight: i64,
    pub index_range: i64,
    pub vectors: usize,
    /// `(m, n)` pairs times basis vectors.
    pub cases: u64,
    /// First disagreement between the recursion and the closed form.
    pub closed_form_failure: Option<String>,
    /// First failing Virasoro relation with central charge 0.
    pub virasoro_failure: Option<String>,
    /// Value of `c` read off from `[L_T(2), L_T(-2)] 1 = (c/2) 1`.
    pub central_charge: String,
}

impl TwistReport {
    pub fn passed(&self) -> bool {
        self.closed_form_failure.is_none() && self.virasoro_failure.is_none() && self.central_charge == "0"
    }
}

/// Compares the recursion-computed `L_T(n)` with the closed form and checks
/// the Virasoro relations with central charge 0, for `m, n` in
/// `[-index_range, index_range]` on all basis vectors of weight `<= max_weight`.
pub fn check_twisted_virasoro<C: Coeff>(alg: &Algebra<C>, max_weight: i64, index_range: i64) -> TwistReport {
    let omega_t = twisted_omega(alg);
    let lt = |n: i64, v: &Vector<C>| twisted_l(alg, &omega_t, n, v);
    let vectors: Vec<Vector<C>> = (0..=max_weight)
        .flat_map(|w| alg.basis(w).iter().cloned().collect::<Vec<_>>())
        .map(Vector::monomial)
        .collect();
    let range = -index_range..=index_range;
    let mut closed_form_failure = None;
    let mut virasoro_failure = None;
    let mut cases = 0;
    'outer: for v in &vectors {
        for n in range.clone() {
            if closed_form_failure.is_none() && lt(n, v) != twisted_l_closed_form(alg, n, v) {
                closed_form_failure = Some(format!("L_T({n}) on {}", alg.format_vector(v)));
            }
        }
        for m in range.clone() {
            for n in range.clone() {
                cases += 1;
                let r = virasoro::relation_residual(&lt, &C::zero(), m, n, v);
                if !r.is_zero() {
                    virasoro_failure = Some(format!(
                        "[L_T({m}), L_T({n})] on {}: residual {}",
                        alg.format_vector(v),
                        alg.format_vector(&r)
                    ));
                    break 'outer;
                }
            }
        }
    }
    let vac = Vector::vacuum();
    let mut r = lt(2, &lt(-2, &vac));
    r.sub_assign(&lt(-2, &lt(2, &vac)));
    r.axpy(&C::from_int(-4), &lt(0, &vac));
    let half_c = r.coeff(&crate::fock::Monomial::vacuum());
    TwistReport {
        max_weight,
        index_range,
        vectors: vectors.len(),
        cases,
        closed_form_failure,
        virasoro_failure,
        central_charge: half_c.scale(&qi(2)).to_string(),
    }
}

/// Normalization of the distinguished element `g` of the twisted instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwistedG {
    /// `g = ½ τ-`, so that `Q g = ω_T` with `{G+, G-} = 2L + ...`.
    Half,
    /// `g = τ-`; then `Q g = 2 ω_T`.
    Unscaled,
}

/// The twisted N=2 vacuum module as a TVOA: `ω_T`, `f = J(-1)1`, `q = τ+`.
pub fn twist(c: Scalar, g: TwistedG) -> TvoaInstance {
    let alg = vacuum_module(c.clone());
    let omega = twisted_omega(&alg);
    let p = |s: &str| alg.parse_vector(s).expect("built-in element parses");
    let f = p("J(-1)");
    let q_vec = p("Gplus(-2)");
    let tau_minus = p("Gminus(-1)");
    let (g_vec, suffix) = match g {
        TwistedG::Half => (tau_minus.scale(&q(1, 2)), ""),
        TwistedG::Unscaled => (tau_minus, "-unscaled-g"),
    };
    TvoaInstance::new(
        format!("n2-twist-{}{suffix}", crate::scalar::format_scalar(&c)),
        alg,
        omega,
        f,
        q_vec,
        g_vec,
        true,
        Some(0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Monomial;
    use crate::scalar::CPoly;
    use crate::tvoa::{Bounds, Check, Status};

    fn term<C: Coeff>(alg: &Algebra<C>, name: &str, n: i64, k: C) -> ModeSum<C> {
        let mut s = ModeSum::zero();
        s.axpy(&k, &ModeSum::mode(alg.mode(name, n).unwrap()));
        s
    }

    #[test]
    fn bracket_examples() {
        let alg = vacuum_module(CPoly::c());
        let jj = ns_bracket(&alg, ("J", 1), ("J", -1)).unwrap();
        assert!(jj.modes.is_empty());
        assert_eq!(jj.identity, CPoly::c().scale(&q(1, 3)));

        // G+_{1/2} G-_{-1/2}
        let gg = ns_bracket(&alg, ("Gplus", 0), ("Gminus", 0)).unwrap();
        let mut expect = term(&alg, "L", 0, CPoly::from_int(2));
        expect.axpy(&CPoly::one(), &term(&alg, "J", 0, CPoly::one()));
        assert_eq!(gg, expect);

        assert!(ns_bracket(&alg, ("Gplus", 0), ("Gplus", 0)).unwrap().is_zero());
        assert!(matches!(ns_bracket(&alg, ("b", 0), ("J", 0)), Err(Error::UnknownSymbol(_))));

        // [G-_{n-1/2}, G+_{m+1/2}] = [G+_{m+1/2}, G-_{n-1/2}] for odd modes
        for (m, n) in [(1, -1), (2, 0), (-3, 3)] {
            assert_eq!(
                ns_bracket(&alg, ("Gminus", n), ("Gplus", m)).unwrap(),
                ns_bracket(&alg, ("Gplus", m), ("Gminus", n)).unwrap()
            );
        }
    }

    #[test]
    fn table_satisfies_lie_identities() {
        let sym = vacuum_module(CPoly::c()).check_lie_identities(-3..=3);
        assert!(sym.passed(), "{:?}", sym.failure);
        assert_eq!(sym.triples, 28 * 28 * 28);
        assert!(vacuum_module(qi(9)).check_lie_identities(-3..=3).passed());
    }

    #[test]
    fn untwisted_and_twisted_weights_of_generators() {
        let alg = vacuum_module(qi(9));
        let tau_plus = alg.parse_vector("Gplus(-2)").unwrap();
        let tau_minus = alg.parse_vector("Gminus(-1)").unwrap();
        let l0 = |v: &Vector<Scalar>| alg.apply(alg.mode("L", 0).unwrap(), v);
        let j0 = |v: &Vector<Scalar>| alg.apply(alg.mode("J", 0).unwrap(), v);
        assert_eq!(l0(&tau_plus), tau_plus.scale(&q(3, 2)));
        assert_eq!(l0(&tau_minus), tau_minus.scale(&q(3, 2)));
        assert_eq!(j0(&tau_plus), tau_plus);
        assert_eq!(j0(&tau_minus), tau_minus.neg());
        let wt = twisted_omega(&alg);
        assert_eq!(twisted_l(&alg, &wt, 0, &tau_plus), tau_plus);
        assert_eq!(twisted_l(&alg, &wt, 0, &tau_minus), tau_minus.scale(&qi(2)));
        // G±_{-1/2} kill the vacuum
        assert!(alg.canonicalize(&[alg.mode("Gplus", -1).unwrap()]).is_zero());
        assert!(alg.canonicalize(&[alg.mode("Gminus", 0).unwrap()]).is_zero());
    }

    #[test]
    fn block_dimensions_match_character() {
        // ∏ (1 + q^n)(1 + q^(n+1)) / ((1 - q^n)(1 - q^(n+1))) over n >= 1,
        // in the twisted grading: G+ from weight 1, G- and L from 2, J from 1.
        let max = 7usize;
        let mut series = vec![0i64; max + 1];
        series[0] = 1;
        let fermion = |series: &mut Vec<i64>, k: usize| {
            for w in (k..=max).rev() {
                series[w] += series[w - k];
            }
        };
        for k in 1..=max {
            fermion(&mut series, k);
            if k >= 2 {
                fermion(&mut series, k);
            }
        }
        for k in 1..=max {
            let mut boson = |k: usize| {
                for w in k..=max {
                    series[w] += series[w - k];
                }
            };
            boson(k);
            if k >= 2 {
                boson(k);
            }
        }
        let alg = vacuum_module(qi(9));
        for (w, &d) in series.iter().enumerate() {
            assert_eq!(alg.basis(w as i64).len() as i64, d, "weight {w}");
        }
    }

    #[test]
    fn twisted_virasoro_has_central_charge_zero() {
        let sym = check_twisted_virasoro(&vacuum_module(CPoly::c()), 4, 3);
        assert!(sym.passed(), "{sym:?}");
        let nine = check_twisted_virasoro(&vacuum_module(qi(9)), 5, 3);
        assert!(nine.passed(), "{nine:?}");
        assert_eq!(nine.cases, nine.vectors as u64 * 49);
        // the untwisted Virasoro element keeps its central charge
        let alg = vacuum_module(CPoly::c());
        let l2 = alg.apply(alg.mode("L", 2).unwrap(), &alg.parse_vector("L(-2)").unwrap());
        assert_eq!(l2.coeff(&Monomial::vacuum()), CPoly::c().scale(&q(1, 2)));
    }

    #[test]
    fn twisted_instance_is_a_strong_tvoa() {
        let inst = twist(qi(9), TwistedG::Half);
        let report = inst.check_axioms(Bounds::new(3, 3)).unwrap();
        for e in &report.entries {
            assert!(!e.failed(), "{} failed: {:?}", e.id, e.status);
        }
        let derived = inst.derived_identities(Bounds::new(2, 3)).unwrap();
        assert!(derived.passed(), "{:?}", derived.first_failure());
        assert!(num_traits::Zero::is_zero(&inst.central_charge().unwrap()));
    }

    #[test]
    fn unscaled_g_gives_twice_omega() {
        let inst = twist(qi(9), TwistedG::Unscaled);
        let r = inst.residual(Check::QgIsOmega, &[], &inst.g, None).unwrap();
        assert_eq!(r, inst.omega);
        let report = inst.check_axioms(Bounds::new(2, 2)).unwrap();
        let failing: Vec<&str> = report.entries.iter().filter(|e| e.failed()).map(|e| e.id.as_str()).collect();
        assert_eq!(failing, ["e"]);
        let Status::Fail { counterexample } = &report.entry("e").unwrap().status else {
            unreachable!()
        };
        assert_eq!(inst.replay(counterexample).unwrap(), inst.omega);
    }
}
