//! Randomized checks of the sewing calculus: compositional inverses,
//! truncation coherence, weights of Ψ and the identity law.

use proptest::prelude::*;

use tvoa::scalar::{q, Scalar};
use tvoa::sewing::{
    associativity_defect, differences, sample_point, sew, solve_psi, FormalMap, ModuliElement, ScaleReading, Var,
    WeightedSeries as Series,
};

fn rational() -> impl Strategy<Value = Scalar> {
    (-12i64..=12, 1i64..=9).prop_map(|(n, d)| q(n, d))
}

fn nonzero() -> impl Strategy<Value = Scalar> {
    rational().prop_filter("nonzero", |x| *x != q(0, 1))
}

/// `Σ_k r_k A1_k` style sequences: random rational multiples of the variables.
fn scaled(vars: impl Fn(u16) -> Var, rs: &[Scalar], degree: i32) -> Vec<Series> {
    rs.iter()
        .enumerate()
        .map(|(k, r)| Series::var(vars(k as u16 + 1), degree).scale(r))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn compositional_inverse_round_trips(f1 in nonzero(), f2 in nonzero(), f3 in nonzero(), order in 3i32..=9) {
        let d = 2;
        let fs: Vec<Series> = [f1, f2, f3].into_iter().map(|c| Series::constant(c, d)).collect();
        let f = FormalMap::from_coefficients(&fs, d, Some(order));
        let g = f.compositional_inverse().unwrap();
        let x = FormalMap::x(d, Some(order));
        let n = order as usize;
        prop_assert_eq!(f.compose(&g).unwrap().coefficients(n), x.coefficients(n));
        prop_assert_eq!(g.compose(&f).unwrap().coefficients(n), x.coefficients(n));
    }

    #[test]
    fn psi_has_weight_j(ra in prop::collection::vec(nonzero(), 1..=3), rb in prop::collection::vec(nonzero(), 1..=3)) {
        let d = 4;
        let psi = solve_psi(&scaled(Var::A1, &ra, d), &Series::var(Var::UnitA, d), &scaled(Var::B0, &rb, d), d, 4).unwrap();
        for (j, w) in psi.weights() {
            prop_assert!(w.is_empty() || w == vec![j], "Ψ_{} has weights {:?}", j, w);
        }
    }

    #[test]
    fn psi_is_coherent_under_truncation(ra in prop::collection::vec(rational(), 2), rb in prop::collection::vec(rational(), 2)) {
        let (low, high) = (2, 4);
        let solve = |d: i32| {
            solve_psi(&scaled(Var::A1, &ra, d), &Series::var(Var::UnitA, d), &scaled(Var::B0, &rb, d), d, 2).unwrap()
        };
        let (a, b) = (solve(low), solve(high));
        for j in -2..=2 {
            prop_assert_eq!(a.get(j), &b.get(j).truncate(low));
        }
    }

    #[test]
    fn sewing_is_coherent_under_truncation(seed in 0u64..1000) {
        let (p, r) = (sample_point(seed, 2, 4), sample_point(seed + 1, 2, 4));
        let order = 8;
        let high = sew(&p, &r, Some(order), ScaleReading::Full).unwrap().element.truncate(2);
        let low = sew(&p.truncate(2), &r.truncate(2), Some(order), ScaleReading::Full).unwrap().element;
        prop_assert!(differences(&low, &high).is_empty());
    }

    #[test]
    fn identity_is_neutral_on_samples(seed in 0u64..1000) {
        let p = sample_point(seed, 3, 3);
        let id = ModuliElement::identity(3);
        prop_assert!(differences(&sew(&id, &p, None, ScaleReading::Full).unwrap().element, &p).is_empty());
        prop_assert!(differences(&sew(&p, &id, None, ScaleReading::Full).unwrap().element, &p).is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn sampled_sewing_is_associative(seed in 0u64..1000) {
        let pts: Vec<_> = (0..3).map(|i| sample_point(seed * 3 + i, 2, 3)).collect();
        prop_assert!(associativity_defect(&pts[0], &pts[1], &pts[2], ScaleReading::Full).unwrap().is_empty());
    }
}

#[test]
fn sewn_generic_points_keep_their_weights() {
    let d = 3;
    let s = sew(&ModuliElement::symbolic(2, d), &ModuliElement::symbolic_b(2, d), Some(3), ScaleReading::Full).unwrap();
    assert!(s.element.weight_defects().is_empty(), "{:?}", s.element.weight_defects());
}
