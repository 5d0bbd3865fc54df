mod common;

use proptest::prelude::*;
use qsteenrod::quantum_model::{
    qt_of_class, validate_quantum, QTElement, QTerm, QuantumStructure, StructureConstant, ValidationFailure,
};
use qsteenrod::ring_model::Class;

#[test]
fn shipped_structures_validate() {
    for m in common::quantum_shipped() {
        validate_quantum(m.quantum.as_ref().unwrap()).unwrap();
    }
}

#[test]
fn dropping_quantum_constants_recovers_cup() {
    for m in common::quantum_shipped() {
        let q = m.quantum.as_ref().unwrap();
        let classical: Vec<StructureConstant> = q.constants().into_iter().filter(|c| c.k == 0).collect();
        let stripped =
            QuantumStructure::from_constants(m.ring.clone(), q.minimal_chern(), q.curves().to_vec(), classical).unwrap();
        for a in 0..m.ring.dim() {
            for b in 0..m.ring.dim() {
                let prod = stripped.quantum_product(&qt_of_class(&Class::single(a)), &qt_of_class(&Class::single(b)));
                assert_eq!(prod, qt_of_class(m.ring.cup_basis(a, b)));
            }
        }
    }
}

#[test]
fn products_are_commutative_associative_and_homogeneous() {
    for m in common::quantum_shipped() {
        let q = m.quantum.as_ref().unwrap();
        let ring = &m.ring;
        let n = ring.dim();
        let e = |c: usize| qt_of_class(&Class::single(c));
        for a in 0..n {
            for b in 0..n {
                let ab = q.quantum_product(&e(a), &e(b));
                assert_eq!(ab, q.quantum_product(&e(b), &e(a)));
                for t in &ab {
                    assert_eq!(ring.degree(t.class) + q.t_degree() * t.t, ring.degree(a) + ring.degree(b));
                }
                for c in 0..n {
                    let l = q.quantum_product(&ab, &e(c));
                    let r = q.quantum_product(&e(a), &q.quantum_product(&e(b), &e(c)));
                    assert_eq!(l, r, "{} ({a} {b}) {c}", ring.name());
                }
            }
        }
    }
}

#[test]
fn cpn_powers_wrap_to_t() {
    for n in 1..=10u32 {
        let m = qsteenrod::builtins::cpn(n).unwrap();
        let q = m.quantum.as_ref().unwrap();
        let x = qt_of_class(&Class::single(common::xpow(&m, 1)));
        let top = qt_of_class(&Class::single(common::xpow(&m, n)));
        assert_eq!(q.quantum_product(&x, &top), QTElement::single(QTerm { class: 0, t: 1 }), "CP^{n}");
    }
}

#[test]
fn corrupted_constant_fails_validation() {
    let m = qsteenrod::builtins::cpn(2).unwrap();
    let q = m.quantum.as_ref().unwrap();
    let mut cs = q.constants();
    // x * x^2 -> x instead of 1: wrong degree.
    let x = common::xpow(&m, 1);
    let x2 = common::xpow(&m, 2);
    for c in cs.iter_mut() {
        if c.k == 1 && c.a == x && c.b == x2 {
            c.out = x;
        }
    }
    let bad = QuantumStructure::from_constants(m.ring.clone(), 3, q.curves().to_vec(), cs).unwrap();
    assert!(matches!(validate_quantum(&bad), Err(ValidationFailure::Degree { .. })));
}

#[test]
fn asymmetric_constant_fails_validation() {
    let m = qsteenrod::builtins::p1xp1().unwrap();
    let q = m.quantum.as_ref().unwrap();
    let mut cs = q.constants();
    let x = m.ring.generator_class(0);
    let x = *x.iter().next().unwrap();
    let pos = cs.iter().position(|c| c.k == 1 && c.a == x && c.b == x).unwrap();
    cs.remove(pos);
    let bad = QuantumStructure::from_constants(m.ring.clone(), 2, q.curves().to_vec(), cs).unwrap();
    assert!(validate_quantum(&bad).is_err());
}

proptest! {
    #[test]
    fn products_are_t_linear(a in 0usize..4, b in 0usize..4, s in 0u32..3, t in 0u32..3) {
        let m = qsteenrod::builtins::cpn(3).unwrap();
        let q = m.quantum.as_ref().unwrap();
        let lhs = q.quantum_product(&QTElement::single(QTerm { class: a, t: s }), &QTElement::single(QTerm { class: b, t }));
        let base = q.quantum_product(&QTElement::single(QTerm { class: a, t: 0 }), &QTElement::single(QTerm { class: b, t: 0 }));
        let shifted: QTElement = base
            .iter()
            .filter(|u| u.t + s + t <= q.j_max())
            .map(|u| QTerm { class: u.class, t: u.t + s + t })
            .collect();
        prop_assert_eq!(lhs, shifted);
    }
}
