use super::*;
use crate::scalar::q;

fn small() -> Bounds {
    Bounds::new(3, 3)
}

#[test]
fn tensor_instance_elements_have_expected_grades() {
    let inst = tensor_instance(qi(26), TensorCurrent::Primary);
    let alg = &inst.algebra;
    use crate::fock::{BiGrade, Grade};
    assert_eq!(alg.grade_of(&inst.q), Grade::Homogeneous(BiGrade::new(1, 1)));
    assert_eq!(alg.grade_of(&inst.g), Grade::Homogeneous(BiGrade::new(2, -1)));
    assert_eq!(alg.grade_of(&inst.f), Grade::Homogeneous(BiGrade::new(1, 0)));
    assert_eq!(alg.grade_of(&inst.omega), Grade::Homogeneous(BiGrade::new(2, 0)));
    assert!(inst.big_q(&Vector::vacuum()).is_zero());
    // The ghost part of ω in canonical order.
    let ghost_part = inst.omega.sub(&alg.parse_vector("L(-2)").unwrap());
    assert_eq!(ghost_part, alg.parse_vector("-2 b(-2) c(0) - b(-3) c(1)").unwrap());
}

#[test]
fn tensor_instance_passes_axioms() {
    let inst = tensor_instance(qi(26), TensorCurrent::Primary);
    let report = inst.check_axioms(small()).unwrap();
    for e in &report.entries {
        assert!(!e.failed(), "{} failed: {:?}", e.id, e.status);
    }
    assert!(matches!(report.entry("h").unwrap().status, Status::VerifiedUpToBound { .. }));
    let consistency = inst.brst_consistency(3).unwrap();
    assert!(consistency.passed(), "{consistency:?}");
}

#[test]
fn derived_identities_and_poisson_laws_hold() {
    let inst = tensor_instance(qi(26), TensorCurrent::Primary);
    let b = Bounds::new(2, 3);
    let report = inst.derived_identities(b).unwrap();
    for e in &report.entries {
        assert!(!e.failed(), "{} failed: {:?}", e.id, e.status);
    }
    assert_eq!(inst.central_charge().unwrap(), qi(0));
    let laws = inst.poisson_laws(Bounds::new(1, 2), 7).unwrap();
    assert!(laws.passed(), "{laws:?}");
    let skew = laws.entry("skew-symmetry").unwrap();
    assert!(skew.notes[0].contains("fails"));
}

#[test]
fn doubled_g_breaks_qg_with_omega_as_witness() {
    let mut inst = tensor_instance(qi(26), TensorCurrent::Primary);
    inst.g = inst.g.scale_by(&qi(2));
    let report = inst.check_axioms(Bounds::new(1, 2)).unwrap();
    let Status::Fail { counterexample } = &report.entry("e").unwrap().status else {
        panic!("Qg = ω should fail");
    };
    let omega = inst.algebra.format_vector(&inst.omega);
    assert_eq!(counterexample.residual, omega);
    assert_eq!(inst.replay(counterexample).unwrap(), inst.omega);
}

#[test]
fn anomalous_matter_breaks_q_square_at_weight_two() {
    let inst = tensor_instance(qi(25), TensorCurrent::Primary);
    let report = inst.check_axioms(Bounds::new(2, 2)).unwrap();
    let Status::Fail { counterexample } = &report.entry("b").unwrap().status else {
        panic!("Q^2 = 0 should fail at c = 25");
    };
    assert!(!inst.replay(counterexample).unwrap().is_zero());
    // A weight-2 witness: Q² b(-2)1 = ((c - 26)/2) c(-2)1.
    let b = inst.algebra.parse_vector("b(-2)").unwrap();
    let r = inst.residual(Check::QSquare, &[], &b, None).unwrap();
    assert_eq!(r, inst.algebra.parse_vector("-1/2 c(-2)").unwrap());
    assert_eq!(inst.central_charge().unwrap(), qi(-1));
}

#[test]
fn local_grading_examples() {
    let inst = tensor_instance(qi(26), TensorCurrent::Primary);
    let vac = inst.local_grading_check(&Vector::vacuum(), 8, 1000).unwrap();
    assert_eq!(vac.lowest_weight, Some(0));
    for (w, d) in &vac.dims {
        assert_eq!(*d as u64, virasoro::weight_dimension(*w).unwrap());
    }
    let c = inst.algebra.parse_vector("c(1)").unwrap();
    let lg = inst.local_grading_check(&c, 4, 1000).unwrap();
    assert_eq!(lg.lowest_weight, Some(-1));
    for (w, d) in &lg.dims {
        assert!(*d <= inst.algebra.basis(*w).len());
    }
    let zero = inst.local_grading_check(&Vector::zero(), 4, 1000).unwrap();
    assert!(zero.dims.is_empty());
    let tight = inst.local_grading_check(&Vector::vacuum(), 8, 1).unwrap();
    assert_eq!(tight.exceeded_at, Some(8));
}

#[test]
fn type_k_below_the_algebra_is_vacuous_and_above_fails() {
    let mut inst = tensor_instance(qi(26), TensorCurrent::Primary);
    let r = inst.check_axioms(Bounds::new(2, 2)).unwrap();
    assert_eq!(r.entry("i").unwrap().status, Status::Pass);
    inst.type_k = Some(0);
    let r = inst.check_axioms(Bounds::new(2, 2)).unwrap();
    let Status::Fail { counterexample } = &r.entry("i").unwrap().status else {
        panic!("the subalgebra reaches weight -1");
    };
    assert!(!inst.replay(counterexample).unwrap().is_zero());
}

#[test]
fn counterexamples_round_trip_through_text() {
    let inst = tensor_instance(q(51, 2), TensorCurrent::Primary);
    let v = inst.algebra.parse_vector("1/2 b(-3) c(1) - 2 L(-2) + 1").unwrap();
    let text = inst.algebra.format_vector(&v);
    assert_eq!(inst.algebra.parse_vector(&text).unwrap(), v);
}

#[test]
fn bare_current_is_not_primary_but_has_the_same_zero_mode() {
    let bare = tensor_instance(qi(26), TensorCurrent::Bare);
    let report = bare.check_axioms(Bounds::new(2, 2)).unwrap();
    let Status::Fail { counterexample } = &report.entry("c").unwrap().status else {
        panic!("L(1) q = 0 should fail for the bare current");
    };
    assert_eq!(counterexample.params, vec![1]);
    assert_eq!(counterexample.residual, "3*c(0)1");
    assert!(!report.entry("b").unwrap().failed());
    assert!(!report.entry("e").unwrap().failed());
    let primary = tensor_instance(qi(26), TensorCurrent::Primary);
    for v in primary.test_vectors(3) {
        assert_eq!(bare.big_q(&v), primary.big_q(&v));
    }
    assert!(bare.brst_consistency(3).unwrap().passed());
}
