//! Small quantum cohomology `QH*(M) = H*(M)[T]` with `T = t^N`, `|T| = 2N`.
//!
//! Structure constants are labelled by a curve class (a multiplicity vector
//! over the listed generating classes of `H_2`) and its energy `k`, where the
//! first Chern number of the curve is `kN`.

use crate::gf2_poly::{buchberger, Gf2Poly, GroebnerBasis, Monomial, MonomialOrder, PolyError};
use crate::gf2vec::Gf2Vec;
use crate::ring_model::{render_term, Class, ClassId, RingPresentation};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use thiserror::Error;

/// Multiplicities over the listed curve classes; all zeros is the zero class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CurveKey(pub Vec<u32>);

impl CurveKey {
    pub fn zero(n: usize) -> Self {
        CurveKey(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        CurveKey(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn plus(&self, other: &CurveKey) -> CurveKey {
        CurveKey(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// A listed generator of `H_2(M)` with its first Chern number and its
/// intersection numbers mod 2 with degree-2 basis classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveClass {
    pub label: String,
    pub chern: u32,
    pub intersections: BTreeMap<ClassId, u8>,
}

/// `a * b` contains `out T^k` through curve `curve`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StructureConstant {
    pub a: ClassId,
    pub b: ClassId,
    pub out: ClassId,
    pub curve: CurveKey,
    pub k: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LTerm {
    pub class: ClassId,
    pub curve: CurveKey,
    pub k: u32,
}

pub type Labeled = Gf2Vec<LTerm>;

/// `class T^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QTerm {
    pub class: ClassId,
    pub t: u32,
}

pub type QTElement = Gf2Vec<QTerm>;

/// `class T^t h^h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HTTerm {
    pub class: ClassId,
    pub t: u32,
    pub h: u32,
}

pub type HTElement = Gf2Vec<HTTerm>;

/// Embed a class at `T^0`.
pub fn qt_of_class(c: &Class) -> QTElement {
    c.map(|&class| QTerm { class, t: 0 })
}

/// Embed `c T^0 h^0`.
pub fn ht_of_qt(e: &QTElement) -> HTElement {
    e.map(|q| HTTerm {
        class: q.class,
        t: q.t,
        h: 0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationFailure {
    #[error("degree mismatch in {a} * {b} -> {out} T^{k}")]
    Degree { a: String, b: String, out: String, k: u32 },
    #[error("energy {k} does not match the curve class in {a} * {b} -> {out}")]
    Energy { a: String, b: String, out: String, k: u32 },
    #[error("energy-zero part of {a} * {b} differs from the cup product")]
    Classical { a: String, b: String },
    #[error("{a} * {b} != {b} * {a}")]
    Commutativity { a: String, b: String },
    #[error("({a} * {b}) * {c} != {a} * ({b} * {c})")]
    Associativity { a: String, b: String, c: String },
    #[error("1 * {a} != {a}")]
    Unit { a: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantumError {
    #[error("minimal Chern number must be positive")]
    ZeroMinimalChern,
    #[error("curve `{label}` has c1 = {chern}, not a positive multiple of N = {n}")]
    CurveChern { label: String, chern: u32, n: u32 },
    #[error("curve index {0} out of range")]
    UnknownCurve(usize),
    #[error("restricted product asks for energy {k} but the curve has energy {actual:?}")]
    EnergyMismatch { k: u32, actual: Option<u32> },
    #[error("quantum relations do not deform the classical ring flatly")]
    NotFlat,
    #[error("completed product {a} * {b} disagrees with the supplied constants")]
    Inconsistent { a: String, b: String },
    #[error("quantum structure failed validation: {0}")]
    Validation(#[from] ValidationFailure),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Default truncation `ceil(2 top / 2N) + 2` for the T-exponent.
pub fn default_j_max(top_degree: u32, minimal_chern: u32) -> u32 {
    top_degree.div_ceil(minimal_chern) + 2
}

#[derive(Clone, Debug)]
pub struct QuantumStructure {
    ring: Arc<RingPresentation>,
    minimal_chern: u32,
    curves: Vec<CurveClass>,
    table: Vec<Vec<Labeled>>,
    j_max: u32,
}

impl QuantumStructure {
    /// Build directly from a full list of structure constants, without checks.
    /// Call [`QuantumStructure::validate`] before trusting the result.
    pub fn from_constants(
        ring: Arc<RingPresentation>,
        minimal_chern: u32,
        curves: Vec<CurveClass>,
        constants: impl IntoIterator<Item = StructureConstant>,
    ) -> Result<Self, QuantumError> {
        if minimal_chern == 0 {
            return Err(QuantumError::ZeroMinimalChern);
        }
        let n = ring.dim();
        let mut table = vec![vec![Labeled::zero(); n]; n];
        for s in constants {
            if s.curve.0.len() != curves.len() {
                return Err(QuantumError::UnknownCurve(s.curve.0.len()));
            }
            table[s.a][s.b].toggle(LTerm {
                class: s.out,
                curve: s.curve,
                k: s.k,
            });
        }
        let j_max = default_j_max(ring.top_degree(), minimal_chern);
        Ok(QuantumStructure {
            ring,
            minimal_chern,
            curves,
            table,
            j_max,
        })
    }

    /// Complete the product from generator data.
    ///
    /// `supplied` lists quantum (`k >= 1`) constants and optionally classical
    /// ones. Constants are symmetric in `a, b`; pairs that are consulted but
    /// not listed have no quantum part. The products of generators with
    /// lower-degree basis classes determine how basis monomials lift to
    /// quantum polynomials, and the relations evaluated with the quantum
    /// product give the deformed ideal; the full table is read off from
    /// normal forms in that ideal.
    pub fn complete(
        ring: Arc<RingPresentation>,
        minimal_chern: u32,
        curves: Vec<CurveClass>,
        supplied: &[StructureConstant],
    ) -> Result<Self, QuantumError> {
        let n_big = minimal_chern;
        if n_big == 0 {
            return Err(QuantumError::ZeroMinimalChern);
        }
        for c in &curves {
            if c.chern == 0 || c.chern % n_big != 0 {
                return Err(QuantumError::CurveChern {
                    label: c.label.clone(),
                    chern: c.chern,
                    n: n_big,
                });
            }
        }
        let nc = curves.len();
        let probe = QuantumStructure::from_constants(ring.clone(), n_big, curves.clone(), [])?;
        let mut quantum_part: BTreeMap<(ClassId, ClassId), BTreeSet<LTerm>> = BTreeMap::new();
        for s in supplied {
            if s.curve.0.len() != nc {
                return Err(QuantumError::UnknownCurve(s.curve.0.len()));
            }
            probe.check_constant(s.a, s.b, &LTerm {
                class: s.out,
                curve: s.curve.clone(),
                k: s.k,
            })?;
            if s.k == 0 {
                if !ring.cup_basis(s.a, s.b).contains(&s.out) {
                    return Err(ValidationFailure::Classical {
                        a: ring.render_basis(s.a),
                        b: ring.render_basis(s.b),
                    }
                    .into());
                }
                continue;
            }
            let t = LTerm {
                class: s.out,
                curve: s.curve.clone(),
                k: s.k,
            };
            quantum_part.entry((s.a, s.b)).or_default().insert(t.clone());
            quantum_part.entry((s.b, s.a)).or_default().insert(t);
        }
        let supplied_q = |a: ClassId, b: ClassId| -> Labeled {
            quantum_part
                .get(&(a, b))
                .map(|s| s.iter().cloned().collect())
                .unwrap_or_default()
        };

        let ng = ring.ngens();
        let nv = ng + nc;
        let mut weights = ring.weights();
        let mut primary = weights.clone();
        for c in &curves {
            weights.push(2 * c.chern);
            primary.push(0);
        }
        let order = MonomialOrder::with_primary(weights, primary);
        let qmono = |curve: &CurveKey| -> Monomial {
            let mut e = vec![0u32; ng];
            e.extend(curve.0.iter().copied());
            Monomial::from_exponents(&e).expect("curve exponent")
        };

        let mut consulted: BTreeSet<(ClassId, ClassId)> = BTreeSet::new();
        // generator i acting on basis class c
        let act = |i: usize, c: ClassId, consulted: &mut BTreeSet<(ClassId, ClassId)>| -> Labeled {
            let mut out = Labeled::zero();
            for &g in &ring.generator_class(i) {
                for &o in ring.cup_basis(g, c) {
                    out.toggle(LTerm {
                        class: o,
                        curve: CurveKey::zero(nc),
                        k: 0,
                    });
                }
                consulted.insert((g, c));
                out.add_assign(&supplied_q(g, c));
            }
            out
        };

        // lifts of basis classes to quantum polynomials
        let mut lift: Vec<Gf2Poly> = Vec::with_capacity(ring.dim());
        for c in 0..ring.dim() {
            let m = ring.monomial(c);
            let Some(g) = m.first_var() else {
                lift.push(Gf2Poly::one(nv));
                continue;
            };
            let rest = Monomial::var(ng, g).quotient_of(m).unwrap();
            let rest_id = ring.class_id(&rest).expect("divisor of a standard monomial");
            let gid = ring
                .class_id(&Monomial::var(ng, g))
                .expect("generator dividing a standard monomial");
            consulted.insert((gid, rest_id));
            let mut p = lift[rest_id].try_mul(&Gf2Poly::var(nv, g))?;
            for t in &supplied_q(gid, rest_id) {
                p = p.try_add(&lift[t.class].try_mul_monomial(&qmono(&t.curve))?)?;
            }
            lift.push(p);
        }

        // deformed relations
        let mut qrels = Vec::new();
        for r in ring.relations() {
            let mut big = r.extend(nc);
            for m in r.terms() {
                let mut val = Labeled::single(LTerm {
                    class: ring.unit(),
                    curve: CurveKey::zero(nc),
                    k: 0,
                });
                for i in 0..ng {
                    for _ in 0..m.exponent(i) {
                        let mut next = Labeled::zero();
                        for t in &val {
                            next.add_assign(&act(i, t.class, &mut consulted).map(|u| LTerm {
                                class: u.class,
                                curve: u.curve.plus(&t.curve),
                                k: u.k + t.k,
                            }));
                        }
                        val = next;
                    }
                }
                for t in &val {
                    big = big.try_add(&lift[t.class].try_mul_monomial(&qmono(&t.curve))?)?;
                }
            }
            qrels.push(big);
        }
        let qgb = buchberger(&qrels, &order)?;
        check_flat(&ring, &qgb, ng)?;

        let lift_nf: Vec<Gf2Poly> = lift.iter().map(|p| qgb.normal_form(p)).collect();
        let chern_of = |curve: &CurveKey| -> u32 {
            curve.0.iter().zip(&curves).map(|(m, c)| m * c.chern).sum()
        };
        let dim = ring.dim();
        let mut table = vec![vec![Labeled::zero(); dim]; dim];
        for a in 0..dim {
            for b in a..dim {
                let mut f = qgb.normal_form(&lift[a].try_mul(&lift[b])?);
                let mut out = Labeled::zero();
                while let Some(lead) = f.leading(&order).cloned() {
                    let m = lead.truncate(ng);
                    let curve = CurveKey(lead.exponents()[ng..].iter().map(|&e| e as u32).collect());
                    let c = ring.class_id(&m).ok_or(QuantumError::NotFlat)?;
                    let ch = chern_of(&curve);
                    out.toggle(LTerm {
                        class: c,
                        curve: curve.clone(),
                        k: ch / n_big,
                    });
                    f = f.try_add(&lift_nf[c].try_mul_monomial(&qmono(&curve))?)?;
                }
                table[a][b] = out.clone();
                table[b][a] = out;
            }
        }

        let qs = QuantumStructure {
            j_max: default_j_max(ring.top_degree(), n_big),
            ring,
            minimal_chern: n_big,
            curves,
            table,
        };
        let listed: BTreeSet<(ClassId, ClassId)> = quantum_part.keys().copied().collect();
        for &(a, b) in consulted.union(&listed) {
            let got = qs.table[a][b].filter(|t| t.k > 0);
            if got != supplied_q(a, b) {
                return Err(QuantumError::Inconsistent {
                    a: qs.ring.render_basis(a),
                    b: qs.ring.render_basis(b),
                });
            }
        }
        qs.validate()?;
        Ok(qs)
    }

    pub fn ring(&self) -> &RingPresentation {
        &self.ring
    }

    pub fn ring_arc(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn minimal_chern(&self) -> u32 {
        self.minimal_chern
    }

    /// Degree of `T`.
    pub fn t_degree(&self) -> u32 {
        2 * self.minimal_chern
    }

    pub fn curves(&self) -> &[CurveClass] {
        &self.curves
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn set_j_max(&mut self, j: u32) {
        self.j_max = j;
    }

    pub fn chern(&self, curve: &CurveKey) -> u32 {
        curve.0.iter().zip(&self.curves).map(|(m, c)| m * c.chern).sum()
    }

    /// Energy `k` with `c1 = kN`, if integral.
    pub fn energy(&self, curve: &CurveKey) -> Option<u32> {
        let c = self.chern(curve);
        c.is_multiple_of(self.minimal_chern).then_some(c / self.minimal_chern)
    }

    /// Intersection number `n(x, curve)` mod 2, linear in both arguments.
    pub fn intersection(&self, x: &Class, curve: &CurveKey) -> u8 {
        let mut s = 0u32;
        for (m, c) in curve.0.iter().zip(&self.curves) {
            for &b in x {
                s += m * *c.intersections.get(&b).unwrap_or(&0) as u32;
            }
        }
        (s % 2) as u8
    }

    pub fn curve_label(&self, curve: &CurveKey) -> String {
        if curve.is_zero() {
            return "0".into();
        }
        curve
            .0
            .iter()
            .zip(&self.curves)
            .filter(|(m, _)| **m > 0)
            .map(|(m, c)| {
                if *m == 1 {
                    c.label.clone()
                } else {
                    format!("{m}{}", c.label)
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }

    pub fn product_basis(&self, a: ClassId, b: ClassId) -> &Labeled {
        &self.table[a][b]
    }

    /// All structure constants in a deterministic order.
    pub fn constants(&self) -> Vec<StructureConstant> {
        let mut v = Vec::new();
        for a in 0..self.ring.dim() {
            for b in 0..self.ring.dim() {
                for t in &self.table[a][b] {
                    v.push(StructureConstant {
                        a,
                        b,
                        out: t.class,
                        curve: t.curve.clone(),
                        k: t.k,
                    });
                }
            }
        }
        v
    }

    /// Every curve class that occurs with positive energy in the table.
    pub fn occurring_curves(&self) -> BTreeSet<CurveKey> {
        self.table
            .iter()
            .flatten()
            .flat_map(|l| l.iter())
            .filter(|t| t.k > 0)
            .map(|t| t.curve.clone())
            .collect()
    }

    /// Quantum product, with T-exponents above `j_max` dropped.
    pub fn quantum_product(&self, a: &QTElement, b: &QTElement) -> QTElement {
        let mut out = QTElement::zero();
        for x in a {
            for y in b {
                for t in &self.table[x.class][y.class] {
                    let e = x.t + y.t + t.k;
                    if e <= self.j_max {
                        out.toggle(QTerm { class: t.class, t: e });
                    }
                }
            }
        }
        out
    }

    /// The `(curve, k)` part of the product, returned without its `T^k`
    /// factor. Input T-exponents still add.
    pub fn product_restricted(
        &self,
        a: &QTElement,
        b: &QTElement,
        curve: &CurveKey,
        k: u32,
    ) -> Result<QTElement, QuantumError> {
        if curve.0.len() != self.curves.len() {
            return Err(QuantumError::UnknownCurve(curve.0.len()));
        }
        let actual = self.energy(curve);
        if actual != Some(k) {
            return Err(QuantumError::EnergyMismatch { k, actual });
        }
        let mut out = QTElement::zero();
        for x in a {
            for y in b {
                for t in &self.table[x.class][y.class] {
                    if &t.curve == curve && t.k == k && x.t + y.t <= self.j_max {
                        out.toggle(QTerm {
                            class: t.class,
                            t: x.t + y.t,
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Quantum product extended h-linearly.
    pub fn product_ht(&self, a: &HTElement, b: &HTElement) -> HTElement {
        let mut out = HTElement::zero();
        for x in a {
            for y in b {
                for t in &self.table[x.class][y.class] {
                    let e = x.t + y.t + t.k;
                    if e <= self.j_max {
                        out.toggle(HTTerm {
                            class: t.class,
                            t: e,
                            h: x.h + y.h,
                        });
                    }
                }
            }
        }
        out
    }

    fn check_constant(&self, a: ClassId, b: ClassId, t: &LTerm) -> Result<(), ValidationFailure> {
        let r = &self.ring;
        let names = || (r.render_basis(a), r.render_basis(b), r.render_basis(t.class));
        if r.degree(t.class) + 2 * t.k * self.minimal_chern != r.degree(a) + r.degree(b) {
            let (a, b, out) = names();
            return Err(ValidationFailure::Degree { a, b, out, k: t.k });
        }
        let energy_ok = if t.k == 0 {
            t.curve.is_zero()
        } else {
            !t.curve.is_zero() && self.chern(&t.curve) == t.k * self.minimal_chern
        };
        if !energy_ok {
            let (a, b, out) = names();
            return Err(ValidationFailure::Energy { a, b, out, k: t.k });
        }
        Ok(())
    }

    fn triple_product(&self, a: ClassId, b: ClassId, c: ClassId, left: bool) -> Labeled {
        let mut out = Labeled::zero();
        let first = if left { &self.table[a][b] } else { &self.table[b][c] };
        for t in first {
            let second = if left { &self.table[t.class][c] } else { &self.table[a][t.class] };
            for u in second {
                out.toggle(LTerm {
                    class: u.class,
                    curve: u.curve.plus(&t.curve),
                    k: u.k + t.k,
                });
            }
        }
        out
    }

    /// Degree homogeneity, energy labels, agreement with the cup product at
    /// energy zero, commutativity, associativity on all basis triples and
    /// the unit. Reports the first offending pair or triple.
    pub fn validate(&self) -> Result<(), ValidationFailure> {
        let r = &self.ring;
        let n = r.dim();
        let name = |c: ClassId| r.render_basis(c);
        for a in 0..n {
            for b in 0..n {
                for t in &self.table[a][b] {
                    self.check_constant(a, b, t)?;
                }
                let classical: Class = self.table[a][b].filter(|t| t.k == 0).map(|t| t.class);
                if &classical != r.cup_basis(a, b) {
                    return Err(ValidationFailure::Classical { a: name(a), b: name(b) });
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if self.table[a][b] != self.table[b][a] {
                    return Err(ValidationFailure::Commutativity { a: name(a), b: name(b) });
                }
            }
        }
        let unit = r.unit();
        for a in 0..n {
            let expect = Labeled::single(LTerm {
                class: a,
                curve: CurveKey::zero(self.curves.len()),
                k: 0,
            });
            if self.table[unit][a] != expect || self.table[a][unit] != expect {
                return Err(ValidationFailure::Unit { a: name(a) });
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.triple_product(a, b, c, true) != self.triple_product(a, b, c, false) {
                        return Err(ValidationFailure::Associativity {
                            a: name(a),
                            b: name(b),
                            c: name(c),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn render_qt(&self, e: &QTElement) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<&QTerm> = e.iter().collect();
        terms.sort_by(|a, b| a.t.cmp(&b.t).then(a.class.cmp(&b.class)));
        terms
            .iter()
            .map(|q| render_term(&self.ring, q.class, q.t, 0))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Terms ordered by descending h, then ascending T, then basis order.
    pub fn render_ht(&self, e: &HTElement) -> String {
        render_ht(&self.ring, e)
    }
}

pub fn render_ht(ring: &RingPresentation, e: &HTElement) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<&HTTerm> = e.iter().collect();
    terms.sort_by(|a, b| b.h.cmp(&a.h).then(a.t.cmp(&b.t)).then(a.class.cmp(&b.class)));
    terms
        .iter()
        .map(|q| render_term(ring, q.class, q.t, q.h))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn check_flat(ring: &RingPresentation, qgb: &GroebnerBasis, ng: usize) -> Result<(), QuantumError> {
    for lead in qgb.leading_monomials() {
        if lead.exponents()[ng..].iter().any(|&e| e > 0) {
            return Err(QuantumError::NotFlat);
        }
        if ring.groebner().is_standard(&lead.truncate(ng)) {
            return Err(QuantumError::NotFlat);
        }
    }
    let nc = qgb.order().nvars() - ng;
    for lead in ring.groebner().leading_monomials() {
        if qgb.is_standard(&lead.extend(nc)) {
            return Err(QuantumError::NotFlat);
        }
    }
    Ok(())
}

/// Cup product of two classes embedded in `QH*` at `T^0`.
pub fn classical_product(ring: &RingPresentation, a: &Class, b: &Class) -> QTElement {
    qt_of_class(&ring.cup(a, b))
}

/// Validate a quantum structure; see [`QuantumStructure::validate`].
pub fn validate_quantum(q: &QuantumStructure) -> Result<(), ValidationFailure> {
    q.validate()
}

/// Product of two classes.
pub fn quantum_product(q: &QuantumStructure, a: &QTElement, b: &QTElement) -> QTElement {
    q.quantum_product(a, b)
}

/// Restricted product; see [`QuantumStructure::product_restricted`].
pub fn product_restricted(
    q: &QuantumStructure,
    a: &QTElement,
    b: &QTElement,
    curve: &CurveKey,
    k: u32,
) -> Result<QTElement, QuantumError> {
    q.product_restricted(a, b, curve, k)
}
