//! Adem relations through the dihedral-to-symmetric pullback, and the
//! quantum Adem defect.
//!
//! `BD8 = Z/2[e, s1, s2]/(e s1)` with degrees 1, 1, 2 and
//! `BS4 = Z/2[n1, n2, c3]/(n1 c3)` with degrees 1, 2, 3. The pullback sends
//! `n1 -> s1`, `n2 -> s2 + e^2`, `c3 -> e s2`.

use crate::gf2_poly::{lucas_binom, Gf2Poly, Monomial};
use crate::gf2vec::Gf2Vec;
use crate::linalg::Gf2Matrix;
use crate::qsteenrod::QsEngine;
use crate::quantum_model::{QTElement, QTerm};
use crate::ring_model::{Class, ClassId, RingPresentation};
use crate::steenrod::SqTable;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

pub const BD8_DEGREES: [u32; 3] = [1, 1, 2];
pub const BS4_DEGREES: [u32; 3] = [1, 2, 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdemError {
    #[error("Adem relation needs p, q > 0 and q < 2p (got p = {p}, q = {q})")]
    NotAdmissible { p: u32, q: u32 },
    #[error("element of degree {degree} for class `{class}` is not in the span of (e^2+s2)^a (e s2)^b")]
    NotInImage { class: String, degree: u32 },
    #[error("input is not homogeneous")]
    Inhomogeneous,
}

fn mono3(a: u32, b: u32, c: u32) -> Monomial {
    Monomial::from_exponents(&[a, b, c]).unwrap()
}

/// Drop monomials divisible by `e s1`.
pub fn bd8_normal_form(p: &Gf2Poly) -> Gf2Poly {
    Gf2Poly::from_monomials(
        3,
        p.terms()
            .filter(|m| !(m.exponent(0) > 0 && m.exponent(1) > 0))
            .cloned(),
    )
}

/// Drop monomials divisible by `n1 c3`.
pub fn bs4_normal_form(p: &Gf2Poly) -> Gf2Poly {
    Gf2Poly::from_monomials(
        3,
        p.terms()
            .filter(|m| !(m.exponent(0) > 0 && m.exponent(2) > 0))
            .cloned(),
    )
}

/// Pullback along `D8 -> S4`.
pub fn pi_star(p: &Gf2Poly) -> Gf2Poly {
    let images = [
        Gf2Poly::monomial(mono3(0, 1, 0)),
        Gf2Poly::from_monomials(3, [mono3(0, 0, 1), mono3(2, 0, 0)]),
        Gf2Poly::monomial(mono3(1, 0, 1)),
    ];
    bd8_normal_form(&p.substitute(&images, 3).expect("pullback"))
}

/// `n2^a c3^b` in BS4 coordinates.
pub fn bs4_reduced_monomial(a: u32, b: u32) -> Monomial {
    mono3(0, a, b)
}

/// Pairs `(a, b)` with `2a + 3b = d`.
fn reduced_exponents(d: u32) -> Vec<(u32, u32)> {
    (0..=d / 3)
        .filter(|b| (d - 3 * b).is_multiple_of(2))
        .map(|b| ((d - 3 * b) / 2, b))
        .collect()
}

/// Rank check: `π*` is injective on the subalgebra generated by `n2, c3` in
/// every degree up to `max_degree`.
pub fn pi_star_injective_up_to(max_degree: u32) -> bool {
    (0..=max_degree).all(|d| {
        let pairs = reduced_exponents(d);
        let images: Vec<Gf2Poly> = pairs
            .iter()
            .map(|&(a, b)| pi_star(&Gf2Poly::monomial(bs4_reduced_monomial(a, b))))
            .collect();
        let mut cols: Vec<Monomial> = images.iter().flat_map(|p| p.terms().cloned()).collect();
        cols.sort();
        cols.dedup();
        let mut mat = Gf2Matrix::zeros(images.len(), cols.len());
        for (i, p) in images.iter().enumerate() {
            for m in p.terms() {
                mat.set(i, cols.binary_search(m).unwrap(), true);
            }
        }
        mat.rank() == pairs.len()
    })
}

/// Expansion coefficient of `e^{2i} s2^j` in `(e^2+s2)^{i+j-3k} (e s2)^{2k}`.
pub fn pullback_expansion_coefficient(i: u32, j: u32, k: u32) -> u8 {
    let (i, j, k) = (i as i64, j as i64, k as i64);
    lucas_binom(i + j - 3 * k, i - k)
}

/// `C(3s+m, s+m) = Σ_l C(m+l-1, 2l) C(3s+m, s-l)` mod 2, for `m >= 1`.
pub fn binomial_identity_check(m: u32, s: u32) -> bool {
    assert!(m >= 1, "identity is stated for m >= 1");
    let (m, s) = (m as i64, s as i64);
    let lhs = lucas_binom(3 * s + m, s + m);
    let rhs = (0..=s).fold(0u8, |acc, l| {
        acc ^ (lucas_binom(m + l - 1, 2 * l) & lucas_binom(3 * s + m, s - l))
    });
    lhs == rhs
}

/// Right side of `Sq^q Sq^p = Σ_s C(p-s-1, q-2s) Sq^{p+q-s} Sq^s`, keeping
/// only odd coefficients. Pairs are `(outer, inner)`.
pub fn adem_rhs(p: u32, q: u32) -> Result<Vec<(u32, u32)>, AdemError> {
    if p == 0 || q == 0 || q >= 2 * p {
        return Err(AdemError::NotAdmissible { p, q });
    }
    Ok((0..=q / 2)
        .filter(|&s| lucas_binom(p as i64 - s as i64 - 1, q as i64 - 2 * s as i64) == 1)
        .map(|s| (p + q - s, s))
        .collect())
}

/// Admissible pairs `(p, q)` with `p + q <= max_sum`.
pub fn admissible_pairs(max_sum: u32) -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for p in 1..max_sum {
        for q in 1..(2 * p).min(max_sum - p + 1) {
            v.push((p, q));
        }
    }
    v
}

/// Result of checking one Adem relation on every basis class.
#[derive(Clone, Debug, Serialize)]
pub struct AdemReport {
    pub p: u32,
    pub q: u32,
    pub failures: Vec<ClassId>,
}

impl AdemReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Sum of `Sq^{outer} Sq^{inner}` over the right side of the relation.
pub fn adem_rhs_value(sq: &SqTable, a: &Class, p: u32, q: u32) -> Result<Class, AdemError> {
    let mut out = Class::zero();
    for (outer, inner) in adem_rhs(p, q)? {
        out.add_assign(&sq.compose(a, inner, outer));
    }
    Ok(out)
}

/// Compare `Sq^q Sq^p` with the right side by direct composition.
pub fn verify_adem(ring: &RingPresentation, sq: &SqTable, p: u32, q: u32) -> Result<AdemReport, AdemError> {
    let mut failures = Vec::new();
    for c in 0..ring.dim() {
        let a = Class::single(c);
        if sq.compose(&a, p, q) != adem_rhs_value(sq, &a, p, q)? {
            failures.push(c);
        }
    }
    Ok(AdemReport { p, q, failures })
}

/// `class e^e s2^s2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QqTerm {
    pub class: ClassId,
    pub e: u32,
    pub s2: u32,
}

/// Element of `H*(M) ⊗ H*(BD8)` in the variables `e, s2`.
pub type QqElement = Gf2Vec<QqTerm>;

/// `Σ_{p,q} Sq^q Sq^p(α) e^{|α|+p-q} s2^{|α|-p}`.
pub fn qq_classical(ring: &RingPresentation, sq: &SqTable, alpha: &Class) -> Result<QqElement, AdemError> {
    let d = ring.class_degree(alpha).ok_or(AdemError::Inhomogeneous)?;
    let mut out = QqElement::zero();
    for p in 0..=d {
        for q in 0..=d + p {
            for &c in &sq.compose(alpha, p, q) {
                out.toggle(QqTerm {
                    class: c,
                    e: d + p - q,
                    s2: d - p,
                });
            }
        }
    }
    Ok(out)
}

/// The class multiplying `e^i s2^j`.
pub fn qq_coefficient(qq: &QqElement, i: i64, j: i64) -> Class {
    if i < 0 || j < 0 {
        return Class::zero();
    }
    qq.iter()
        .filter(|t| t.e as i64 == i && t.s2 as i64 == j)
        .map(|t| t.class)
        .collect()
}

pub fn render_qq(ring: &RingPresentation, qq: &QqElement) -> String {
    if qq.is_zero() {
        return "0".into();
    }
    qq.iter()
        .map(|t| {
            let mut s = ring.render_basis(t.class);
            match t.e {
                0 => {}
                1 => s.push_str(" e"),
                n => s.push_str(&format!(" e^{n}")),
            }
            match t.s2 {
                0 => {}
                1 => s.push_str(" s2"),
                n => s.push_str(&format!(" s2^{n}")),
            }
            s
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Write a BD8 polynomial as `Σ c_{ab} (e^2+s2)^a (e s2)^b`, returning the
/// preimage `Σ c_{ab} n2^a c3^b`, or `None` if it is not in that span.
pub fn pullback_preimage_poly(p: &Gf2Poly) -> Option<Gf2Poly> {
    let mut by_degree: BTreeMap<u32, Vec<Monomial>> = BTreeMap::new();
    for m in p.terms() {
        by_degree.entry(m.degree(&BD8_DEGREES)).or_default().push(m.clone());
    }
    let mut pre = Gf2Poly::zero(3);
    for (d, ms) in by_degree {
        let pairs = reduced_exponents(d);
        let images: Vec<Gf2Poly> = pairs
            .iter()
            .map(|&(a, b)| pi_star(&Gf2Poly::monomial(bs4_reduced_monomial(a, b))))
            .collect();
        let mut rows: Vec<Monomial> = images.iter().flat_map(|q| q.terms().cloned()).chain(ms.clone()).collect();
        rows.sort();
        rows.dedup();
        let mut mat = Gf2Matrix::zeros(rows.len(), pairs.len());
        for (j, img) in images.iter().enumerate() {
            for m in img.terms() {
                mat.set(rows.binary_search(m).unwrap(), j, true);
            }
        }
        let rhs: Vec<bool> = rows.iter().map(|m| ms.contains(m)).collect();
        let x = mat.solve(&rhs)?;
        for (j, &on) in x.iter().enumerate() {
            if on {
                pre.toggle(bs4_reduced_monomial(pairs[j].0, pairs[j].1));
            }
        }
    }
    Some(pre)
}

/// Preimages of each class component of a classical `QQ` element.
pub fn pullback_preimage(ring: &RingPresentation, qq: &QqElement) -> Result<BTreeMap<ClassId, Gf2Poly>, AdemError> {
    let mut parts: BTreeMap<ClassId, Gf2Poly> = BTreeMap::new();
    for t in qq {
        parts
            .entry(t.class)
            .or_insert_with(|| Gf2Poly::zero(3))
            .toggle(mono3(t.e, 0, t.s2));
    }
    let mut out = BTreeMap::new();
    for (c, p) in parts {
        match pullback_preimage_poly(&p) {
            Some(pre) => {
                out.insert(c, pre);
            }
            None => {
                return Err(AdemError::NotInImage {
                    class: ring.render_basis(c),
                    degree: p.terms().next().map_or(0, |m| m.degree(&BD8_DEGREES)),
                })
            }
        }
    }
    Ok(out)
}

/// Coefficient of `e^i s2^j` in `π*(pre)`, read off from the preimage:
/// `(e^2+s2)^a (e s2)^b` contributes `C(a, t)` when `i = 2t + b` and
/// `j = a - t + b`.
pub fn reconstruct_coefficient(pre: &Gf2Poly, i: i64, j: i64) -> u8 {
    let mut acc = 0u8;
    for m in pre.terms() {
        let (a, b) = (m.exponent(1) as i64, m.exponent(2) as i64);
        if i < b || (i - b) % 2 != 0 {
            continue;
        }
        let t = (i - b) / 2;
        if a - t + b == j {
            acc ^= lucas_binom(a, t);
        }
    }
    acc
}

/// `Sq^q Sq^p(α)` recovered from the preimage of `QQ(α)` alone.
pub fn reconstruct_composite(
    ring: &RingPresentation,
    sq: &SqTable,
    alpha: &Class,
    p: u32,
    q: u32,
) -> Result<Class, AdemError> {
    let d = ring.class_degree(alpha).ok_or(AdemError::Inhomogeneous)?;
    let pre = pullback_preimage(ring, &qq_classical(ring, sq, alpha)?)?;
    Ok(reconstruct_from_preimage(&pre, d, p, q))
}

/// As [`reconstruct_composite`], from an already solved preimage of a class
/// of degree `d`.
pub fn reconstruct_from_preimage(pre: &BTreeMap<ClassId, Gf2Poly>, d: u32, p: u32, q: u32) -> Class {
    let d = d as i64;
    pre.iter()
        .filter(|(_, poly)| reconstruct_coefficient(poly, d + p as i64 - q as i64, d - p as i64) == 1)
        .map(|(&c, _)| c)
        .collect()
}

/// The Adem relation as an identity among coefficients of `QQ(α)`:
/// `qq_{|α|+p-q, |α|-p} = Σ_s C(p-s-1, q-2s) qq_{|α|+2s-p-q, |α|-s}`.
pub fn energy_zero_identity(
    ring: &RingPresentation,
    sq: &SqTable,
    alpha: &Class,
    p: u32,
    q: u32,
) -> Result<bool, AdemError> {
    let d = ring.class_degree(alpha).ok_or(AdemError::Inhomogeneous)? as i64;
    let qq = qq_classical(ring, sq, alpha)?;
    let (p, q) = (p as i64, q as i64);
    let lhs = qq_coefficient(&qq, d + p - q, d - p);
    let mut rhs = Class::zero();
    for s in 0..=q / 2 {
        if lucas_binom(p - s - 1, q - 2 * s) == 1 {
            rhs.add_assign(&qq_coefficient(&qq, d + 2 * s - p - q, d - s));
        }
    }
    Ok(lhs == rhs)
}

/// Quantum Adem defect with its split by energy (the T-exponent).
#[derive(Clone, Debug)]
pub struct DefectReport {
    pub lhs: QTElement,
    pub rhs: QTElement,
    pub total: QTElement,
}

impl DefectReport {
    pub fn energy_part(&self, k: u32) -> QTElement {
        self.total.filter(|t| t.t == k)
    }

    pub fn energies(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.total.iter().map(|t| t.t).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// `Σ_{b,d} QS^{outer-2bN, b} ∘ QS^{inner-2dN, d}(α)`.
pub fn quantum_composite(eng: &QsEngine, alpha: &QTElement, inner: u32, outer: u32) -> QTElement {
    let n2 = eng.quantum().t_degree() as i64;
    let jm = eng.quantum().j_max();
    let mut out = QTElement::zero();
    for d in 0..=jm {
        let mid = eng.qs_component_ab(alpha, inner as i64 - n2 * d as i64, d);
        if mid.is_zero() {
            continue;
        }
        for b in 0..=jm {
            out.add_assign(&eng.qs_component_ab(&mid, outer as i64 - n2 * b as i64, b));
        }
    }
    out
}

/// `QS^q∘QS^p(α) - Σ_s C(p-s-1, q-2s) QS^{p+q-s}∘QS^s(α)`, with each `QS^r`
/// summed over all T-shifts.
pub fn quantum_adem_defect(eng: &QsEngine, alpha: &QTElement, p: u32, q: u32) -> Result<DefectReport, AdemError> {
    let lhs = quantum_composite(eng, alpha, p, q);
    let mut rhs = QTElement::zero();
    for (outer, inner) in adem_rhs(p, q)? {
        rhs.add_assign(&quantum_composite(eng, alpha, inner, outer));
    }
    let total = lhs.sum(&rhs);
    Ok(DefectReport { lhs, rhs, total })
}

/// Same defect computed from the h-graded pieces of `QS` directly.
pub fn quantum_adem_defect_direct(eng: &QsEngine, alpha: &QTElement, p: u32, q: u32) -> Result<QTElement, AdemError> {
    let comp = |a: &QTElement, i: u32, o: u32| eng.quantum_sq(&eng.quantum_sq(a, i), o);
    let mut out = comp(alpha, p, q);
    for (outer, inner) in adem_rhs(p, q)? {
        out.add_assign(&comp(alpha, inner, outer));
    }
    Ok(out)
}

/// Embed a term `class T^t`.
pub fn qt(class: ClassId, t: u32) -> QTElement {
    QTElement::single(QTerm { class, t })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adem_rhs_examples() {
        assert_eq!(adem_rhs(2, 1).unwrap(), vec![(3, 0)]);
        assert_eq!(adem_rhs(1, 1).unwrap(), vec![]);
        assert_eq!(adem_rhs(3, 2).unwrap(), vec![(5, 0), (4, 1)]);
        assert!(adem_rhs(1, 2).is_err());
        assert!(adem_rhs(0, 1).is_err());
    }

    #[test]
    fn pullback_examples() {
        let n2sq = pi_star(&Gf2Poly::monomial(mono3(0, 2, 0)));
        assert_eq!(n2sq, Gf2Poly::from_monomials(3, [mono3(0, 0, 2), mono3(4, 0, 0)]));
        let c3sq = pi_star(&Gf2Poly::monomial(mono3(0, 0, 2)));
        assert_eq!(c3sq, Gf2Poly::monomial(mono3(2, 0, 2)));
        assert_eq!(pi_star(&Gf2Poly::monomial(mono3(1, 0, 0))), Gf2Poly::monomial(mono3(0, 1, 0)));
    }

    #[test]
    fn lone_e_is_not_in_span() {
        assert!(pullback_preimage_poly(&Gf2Poly::monomial(mono3(1, 0, 0))).is_none());
        let p = Gf2Poly::from_monomials(3, [mono3(0, 0, 2), mono3(4, 0, 0)]);
        assert_eq!(pullback_preimage_poly(&p).unwrap(), Gf2Poly::monomial(mono3(0, 2, 0)));
    }

    #[test]
    fn admissible_pairs_small() {
        assert_eq!(admissible_pairs(3), vec![(1, 1), (2, 1)]);
    }
}
