//! Randomized checks of the mode algebras: canonical forms, brackets,
//! gradings, the ghost system, the BRST differential and the N=2 algebra.

use proptest::prelude::*;

use tvoa::brst::{tensor_algebra, Brst, Complex};
use tvoa::fock::{Algebra, Grade, Mode, Monomial, Vector};
use tvoa::ghost::{ghost_module, Ghosts};
use tvoa::n2;
use tvoa::scalar::{q, qi, CPoly, Coeff, Scalar};
use tvoa::virasoro;

fn basis_vector<C: Coeff>(alg: &Algebra<C>, weight: i64, pick: usize) -> Option<Vector<C>> {
    let b = alg.basis(weight);
    (!b.is_empty()).then(|| Vector::monomial(b[pick % b.len()].clone()))
}

/// `[L(m), L(n)] v - (m - n) L(m + n) v - (c/12)(m^3 - m) δ_{m+n,0} v`, from
/// single-mode actions only.
fn virasoro_defect<C: Coeff>(alg: &Algebra<C>, c: &C, m: i64, n: i64, v: &Vector<C>) -> Vector<C> {
    let l = |k: i64, w: &Vector<C>| virasoro::act(alg, k, w);
    let mut r = l(m, &l(n, v));
    r.sub_assign(&l(n, &l(m, v)));
    r.axpy(&C::from_int(-(m - n)), &l(m + n, v));
    if m + n == 0 {
        let k = c.scale(&q(m * m * m - m, 12));
        r.sub_assign(&v.scale(&k));
    }
    r
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn canonical_form_is_a_projection(word in prop::collection::vec((0u16..3, -6i64..=6), 0..=6)) {
        let alg = tensor_algebra(qi(26));
        let modes: Vec<Mode> = word.iter().map(|&(s, i)| Mode::new(s, i)).collect();
        let v = alg.canonicalize(&modes);
        for (m, _) in v.iter() {
            prop_assert_eq!(alg.canonicalize(m.modes()), Vector::monomial(m.clone()));
        }
    }

    #[test]
    fn brackets_match_commutators(
        a in (0u16..3, -4i64..=4), b in (0u16..3, -4i64..=4), c in (0u16..3, -4i64..=4),
        w in 0i64..=3, pick in any::<usize>(),
    ) {
        let alg = tensor_algebra(CPoly::c());
        let (x, y, z) = (Mode::new(a.0, a.1), Mode::new(b.0, b.1), Mode::new(c.0, c.1));
        prop_assert!(alg.jacobi_residual(x, y, z).is_zero());
        prop_assert!(alg.antisymmetry_residual(x, y).is_zero());
        let Some(v) = basis_vector(&alg, w, pick) else { return Ok(()) };
        // x y v - (-1)^{|x||y|} y x v against the table value of [x, y] on v.
        let sign = if alg.is_odd(x) && alg.is_odd(y) { 1 } else { -1 };
        let mut commutator = alg.apply(x, &alg.apply(y, &v));
        commutator.axpy(&CPoly::constant(qi(sign)), &alg.apply(y, &alg.apply(x, &v)));
        let bracket = alg.mode_bracket(x, y);
        let mut from_table = v.scale(&bracket.identity);
        for (m, k) in &bracket.modes {
            from_table.axpy(k, &alg.apply(*m, &v));
        }
        prop_assert_eq!(commutator, from_table);
    }

    #[test]
    fn modes_shift_grades_additively(s in 0u16..3, i in -5i64..=5, w in -1i64..=4, pick in any::<usize>()) {
        let alg = tensor_algebra(qi(26));
        let Some(v) = basis_vector(&alg, w, pick) else { return Ok(()) };
        let m = Mode::new(s, i);
        let out = alg.apply(m, &v);
        if let (Grade::Homogeneous(g), Grade::Homogeneous(h)) = (alg.grade_of(&v), alg.grade_of(&out)) {
            prop_assert_eq!(h, g + alg.mode_grade(m));
        }
    }

    #[test]
    fn virasoro_relations_at_sample_charges(
        m in -4i64..=4, n in -4i64..=4, w in 0i64..=8, pick in any::<usize>(),
        which in 0usize..4, num in -30i64..=30, den in 1i64..=7,
    ) {
        let c = [qi(0), qi(26), qi(-26), q(num, den)][which].clone();
        let alg = virasoro::vacuum_module(c.clone());
        let Some(v) = basis_vector(&alg, w, pick) else { return Ok(()) };
        prop_assert!(virasoro_defect(&alg, &c, m, n, &v).is_zero());
    }

    #[test]
    fn virasoro_relations_with_symbolic_charge(m in -4i64..=4, n in -4i64..=4, w in 0i64..=6, pick in any::<usize>()) {
        let alg = virasoro::vacuum_module(CPoly::c());
        let Some(v) = basis_vector(&alg, w, pick) else { return Ok(()) };
        prop_assert!(virasoro_defect(&alg, &CPoly::c(), m, n, &v).is_zero());
    }

    #[test]
    fn ghost_anticommutators(i in -8i64..=8, j in -8i64..=8, w in -1i64..=8, pick in any::<usize>()) {
        let alg = ghost_module::<Scalar>();
        let g = Ghosts::new(&alg).unwrap();
        let Some(v) = basis_vector(&alg, w, pick) else { return Ok(()) };
        let anti = |x: Mode, y: Mode| alg.apply(x, &alg.apply(y, &v)).add(&alg.apply(y, &alg.apply(x, &v)));
        let expected = if i + j == 0 { v.clone() } else { Vector::zero() };
        prop_assert_eq!(anti(g.c(i), g.b(j)), expected);
        prop_assert!(anti(g.b(i), g.b(j)).is_zero());
        prop_assert!(anti(g.c(i), g.c(j)).is_zero());
    }

    #[test]
    fn wedge_virasoro_has_central_charge_minus_26(m in -4i64..=4, n in -4i64..=4, w in -1i64..=8, pick in any::<usize>()) {
        let alg = ghost_module::<Scalar>();
        let g = Ghosts::new(&alg).unwrap();
        let Some(v) = basis_vector(&alg, w, pick) else { return Ok(()) };
        let l = |k: i64, u: &Vector<Scalar>| g.l_wedge(k, u);
        let mut r = l(m, &l(n, &v)).sub(&l(n, &l(m, &v)));
        r.axpy(&qi(-(m - n)), &l(m + n, &v));
        if m + n == 0 {
            r.axpy(&(q(26, 12) * qi(m * m * m - m)), &v);
        }
        prop_assert!(r.is_zero());
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn delta_raises_ghost_number_by_one(w in -1i64..=5, pick in any::<usize>()) {
        let alg = tensor_algebra(qi(26));
        let brst = Brst::new(&alg).unwrap();
        let Some(v) = basis_vector(&alg, w, pick) else { return Ok(()) };
        let dv = brst.delta(&v);
        // U δ v = δ U v + δ v, and δ preserves the weight.
        let lhs = brst.ghost_number_operator(&dv);
        let rhs = brst.delta(&brst.ghost_number_operator(&v)).add(&dv);
        prop_assert_eq!(lhs, rhs);
        if let (Grade::Homogeneous(g), Grade::Homogeneous(h)) = (alg.grade_of(&v), alg.grade_of(&dv)) {
            prop_assert_eq!((h.weight, h.fermion), (g.weight, g.fermion + 1));
        }
    }

    #[test]
    fn symbolic_delta_squared_vanishes_at_26(w in -1i64..=4, pick in any::<usize>()) {
        let alg = tensor_algebra(CPoly::c());
        let brst = Brst::new(&alg).unwrap();
        let Some(v) = basis_vector(&alg, w, pick) else { return Ok(()) };
        let sq = brst.delta(&brst.delta(&v));
        for (_, k) in sq.iter() {
            prop_assert!(k.vanishes_at(&qi(26)), "{} does not vanish at 26", k);
        }
    }

    #[test]
    fn dual_differential_is_adjoint(w in 0i64..=4, gi in any::<usize>(), vi in any::<usize>(), fi in any::<usize>()) {
        let alg = tensor_algebra(qi(26));
        let cx = Complex::new(&alg).unwrap();
        let brst = Brst::new(&alg).unwrap();
        let gs = cx.ghost_range(w);
        let g = gs[gi % gs.len()];
        let (src, dst) = (cx.block(w, g), cx.block(w, g + 1));
        if src.dim() == 0 || dst.dim() == 0 {
            return Ok(());
        }
        let (vi, k) = (vi % src.dim(), fi % dst.dim());
        let mut phi = vec![qi(0); dst.dim()];
        phi[k] = qi(1);
        let dphi = cx.dual_differential(w, g, &phi);
        let v = Vector::monomial(src.basis()[vi].clone());
        let direct = dst.coords(&brst.delta(&v))[k].clone();
        prop_assert_eq!(dphi[vi].clone(), direct);
    }

    #[test]
    fn n2_modes_satisfy_jacobi(
        a in (0i64..4, -3i64..=3), b in (0i64..4, -3i64..=3), c in (0i64..4, -3i64..=3), symbolic in any::<bool>(),
    ) {
        let mode = |(s, i): (i64, i64)| Mode::new(s as u16, i);
        if symbolic {
            let alg = n2::vacuum_module(CPoly::c());
            prop_assert!(alg.jacobi_residual(mode(a), mode(b), mode(c)).is_zero());
            prop_assert!(alg.antisymmetry_residual(mode(a), mode(b)).is_zero());
        } else {
            let alg = n2::vacuum_module(qi(9));
            prop_assert!(alg.jacobi_residual(mode(a), mode(b), mode(c)).is_zero());
        }
    }

    #[test]
    fn twisted_virasoro_is_centerless(m in -3i64..=3, n in -3i64..=3, w in 0i64..=5, pick in any::<usize>()) {
        let alg = n2::vacuum_module(CPoly::c());
        let Some(v) = basis_vector(&alg, w, pick) else { return Ok(()) };
        let omega = n2::twisted_omega(&alg);
        let l = |k: i64, u: &Vector<CPoly>| n2::twisted_l(&alg, &omega, k, u);
        let mut r = l(m, &l(n, &v)).sub(&l(n, &l(m, &v)));
        r.axpy(&CPoly::constant(qi(-(m - n))), &l(m + n, &v));
        prop_assert!(r.is_zero());
    }
}

#[test]
fn canonical_monomials_are_fixed() {
    let alg = tensor_algebra(qi(26));
    for w in -1..=4 {
        for m in alg.basis(w).iter() {
            assert_eq!(alg.canonicalize(m.modes()), Vector::monomial(m.clone()));
        }
    }
    assert_eq!(alg.canonicalize(&[]), Vector::monomial(Monomial::vacuum()));
}
