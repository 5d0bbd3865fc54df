//! Quantum Steenrod square `QS: QH* -> QH*[h]` on manifolds whose cohomology
//! is generated in degree 2.
//!
//! Three independent routes are provided for projective spaces: the closed
//! binomial formula, the recurrence in the power of the hyperplane class, and
//! the general engine that builds `QS` of every basis class from
//! `QS(x) = x h^2 + x*x` and the quantum Cartan relation
//! `QS(b*x) = QS(b)*QS(x) + q(b, x)`.

use crate::gf2_poly::{lucas_binom, Monomial};
use crate::quantum_model::{
    qt_of_class, CurveKey, HTElement, HTTerm, QTElement, QTerm, QuantumError, QuantumStructure,
};
use crate::ring_model::{Class, ClassId};
use crate::steenrod::SqTable;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QsError {
    #[error("basis class `{0}` is not reachable by multiplying degree-2 generators")]
    NotReachable(String),
    #[error("correction term for `{class}` would need h^{h}, below h^2")]
    ForcedH { class: String, h: i64 },
    #[error("input is not homogeneous")]
    Inhomogeneous,
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    ClosedForm,
    Recurrence,
    CartanRecursion,
}

/// `QS` of each basis class, with the route that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QsTable {
    pub rows: Vec<HTElement>,
    pub provenance: Provenance,
}

fn binom(n: i64, k: i64) -> u8 {
    lucas_binom(n, k)
}

/// `x^p` in `QH*(CP^n)` as `(class index, T-exponent)`, valid for `p <= 2n+1`.
fn cpn_power(p: u32, n: u32) -> (ClassId, u32) {
    if p > n {
        ((p - n - 1) as ClassId, 1)
    } else {
        (p as ClassId, 0)
    }
}

/// Closed form of `QS(x^i)` on `CP^n` for `0 <= i <= n`. Basis index `k`
/// stands for `x^k`.
pub fn qs_cpn_closed(i: u32, n: u32) -> HTElement {
    assert!(i <= n);
    let (i, n) = (i as i64, n as i64);
    let mut out = HTElement::zero();
    for j in 0..=i {
        let mut c = binom(i, j) as u32;
        for k in 0..=(n / 2 + 1) {
            c += (binom(n - k, k) * binom(i - (n + 1 - k), j - k)) as u32;
        }
        if c % 2 == 1 {
            let (class, t) = cpn_power((i + j) as u32, n as u32);
            out.toggle(HTTerm {
                class,
                t,
                h: (2 * (i - j)) as u32,
            });
        }
    }
    out
}

pub fn qs_cpn_closed_table(n: u32) -> QsTable {
    QsTable {
        rows: (0..=n).map(|i| qs_cpn_closed(i, n)).collect(),
        provenance: Provenance::ClosedForm,
    }
}

/// Coefficients `l^i_j` of `QS(x^i) = Σ_j l^i_j x^{i+j} h^{2(i-j)}` from the
/// recurrence starting at `l^0 = (1)`.
pub fn cpn_recurrence_coefficients(n: u32) -> Vec<Vec<u8>> {
    let n = n as i64;
    let mut rows = vec![vec![1u8]];
    for i in 0..n {
        let l = &rows[i as usize];
        let get = |j: i64| -> u8 {
            if j < 0 || j as usize >= l.len() {
                0
            } else {
                l[j as usize]
            }
        };
        let next: Vec<u8> = (0..=i + 1)
            .map(|j| {
                let mut v = get(j) ^ get(j - 1);
                if j == n - i {
                    v ^= binom(i, n - i);
                }
                v
            })
            .collect();
        rows.push(next);
    }
    rows
}

pub fn qs_cpn_recurrence(n: u32) -> QsTable {
    let rows = cpn_recurrence_coefficients(n)
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let mut e = HTElement::zero();
            for (j, &c) in l.iter().enumerate() {
                if c == 1 {
                    let (class, t) = cpn_power((i + j) as u32, n);
                    e.toggle(HTTerm {
                        class,
                        t,
                        h: 2 * (i - j) as u32,
                    });
                }
            }
            e
        })
        .collect();
    QsTable {
        rows,
        provenance: Provenance::Recurrence,
    }
}

/// Expected value of the correction `q(x^i, x)` on `CP^n`:
/// zero when `2i < n`, otherwise `C(i, n-i) T h^{4i+2-2n}`.
pub fn cpn_correction_value(i: u32, n: u32) -> HTElement {
    let mut e = HTElement::zero();
    if 2 * i >= n && binom(i as i64, (n - i) as i64) == 1 {
        e.toggle(HTTerm {
            class: 0,
            t: 1,
            h: 4 * i + 2 - 2 * n,
        });
    }
    e
}

/// Total degree of a homogeneous element of `QH*`.
pub fn qt_degree(q: &QuantumStructure, a: &QTElement) -> Option<u32> {
    let mut it = a.iter().map(|t| q.ring().degree(t.class) + q.t_degree() * t.t);
    let d = it.next()?;
    it.all(|e| e == d).then_some(d)
}

/// Outcome of checking `QS(b*x) = QS(b)*QS(x) + q(b, x)`.
#[derive(Clone, Debug)]
pub struct CartanReport {
    pub lhs: HTElement,
    pub rhs: HTElement,
    pub correction: HTElement,
    /// `lhs + rhs`; empty when the relation holds.
    pub mismatch: HTElement,
}

impl CartanReport {
    pub fn holds(&self) -> bool {
        self.mismatch.is_zero()
    }
}

/// `QS` of every basis class, built by the quantum Cartan recursion.
#[derive(Clone, Debug)]
pub struct QsEngine<'a> {
    q: &'a QuantumStructure,
    rows: Vec<HTElement>,
}

fn shift(e: &HTElement, dt: u32, dh: u32) -> HTElement {
    e.map(|t| HTTerm {
        class: t.class,
        t: t.t + dt,
        h: t.h + dh,
    })
}

fn qs_with(q: &QuantumStructure, rows: &[HTElement], a: &QTElement) -> HTElement {
    let mut out = HTElement::zero();
    for t in a {
        for u in &rows[t.class] {
            let e = u.t + 2 * t.t;
            if e <= q.j_max() {
                out.toggle(HTTerm {
                    class: u.class,
                    t: e,
                    h: u.h,
                });
            }
        }
    }
    out
}

fn correction_with(
    q: &QuantumStructure,
    qs_b: &HTElement,
    b_degree: u32,
    x: &Class,
) -> Result<HTElement, QsError> {
    let ring = q.ring();
    let mut out = HTElement::zero();
    for curve in q.occurring_curves() {
        if q.intersection(x, &curve) == 0 {
            continue;
        }
        let k = q.energy(&curve).expect("validated energy");
        for z in qs_b {
            let zq = QTElement::single(QTerm { class: z.class, t: 0 });
            let prod = q.product_restricted(&zq, &qt_of_class(x), &curve, k)?;
            for o in &prod {
                let t = z.t + k;
                let h = 2 * (b_degree as i64 + 2) - (ring.degree(o.class) + q.t_degree() * t) as i64;
                if h < 2 {
                    return Err(QsError::ForcedH {
                        class: ring.render_basis(o.class),
                        h,
                    });
                }
                if t <= q.j_max() {
                    out.toggle(HTTerm {
                        class: o.class,
                        t,
                        h: h as u32,
                    });
                }
            }
        }
    }
    Ok(out)
}

impl<'a> QsEngine<'a> {
    /// Build with the default factorization: peel off the first generator.
    pub fn new(q: &'a QuantumStructure) -> Result<Self, QsError> {
        Self::with_factorization(q, |m| m.first_var().unwrap())
    }

    /// Build, choosing for each basis monomial of degree above 2 the
    /// generator `g` with `m = (m / g) * g`.
    pub fn with_factorization(
        q: &'a QuantumStructure,
        choose: impl Fn(&Monomial) -> usize,
    ) -> Result<Self, QsError> {
        let ring = q.ring();
        let ng = ring.ngens();
        let mut rows: Vec<HTElement> = Vec::with_capacity(ring.dim());
        for c in 0..ring.dim() {
            let m = ring.monomial(c);
            if m.is_one() {
                rows.push(HTElement::single(HTTerm { class: c, t: 0, h: 0 }));
                continue;
            }
            let g = choose(m);
            if m.exponent(g) == 0 || ring.generators()[g].degree != 2 {
                return Err(QsError::NotReachable(ring.render_basis(c)));
            }
            let gid = ring
                .class_id(&Monomial::var(ng, g))
                .ok_or_else(|| QsError::NotReachable(ring.render_basis(c)))?;
            if gid == c {
                let xq = qt_of_class(&Class::single(c));
                let mut e = HTElement::single(HTTerm { class: c, t: 0, h: 2 });
                for t in &q.quantum_product(&xq, &xq) {
                    e.toggle(HTTerm {
                        class: t.class,
                        t: t.t,
                        h: 0,
                    });
                }
                rows.push(e);
                continue;
            }
            let rest = Monomial::var(ng, g).quotient_of(m).unwrap();
            let rid = ring
                .class_id(&rest)
                .ok_or_else(|| QsError::NotReachable(ring.render_basis(c)))?;
            let mut e = q.product_ht(&rows[rid], &rows[gid]);
            e.add_assign(&correction_with(q, &rows[rid], ring.degree(rid), &Class::single(gid))?);
            let quantum_part: QTElement = q
                .product_basis(rid, gid)
                .filter(|t| t.k > 0)
                .map(|t| QTerm { class: t.class, t: t.k });
            e.add_assign(&qs_with(q, &rows, &quantum_part));
            rows.push(e);
        }
        Ok(QsEngine { q, rows })
    }

    pub fn quantum(&self) -> &QuantumStructure {
        self.q
    }

    pub fn qs_basis(&self, c: ClassId) -> &HTElement {
        &self.rows[c]
    }

    pub fn table(&self) -> QsTable {
        QsTable {
            rows: self.rows.clone(),
            provenance: Provenance::CartanRecursion,
        }
    }

    /// `QS` extended additively with `QS(a T^j) = QS(a) T^{2j}`.
    pub fn qs(&self, a: &QTElement) -> HTElement {
        qs_with(self.q, &self.rows, a)
    }

    pub fn qs_class(&self, a: &Class) -> HTElement {
        self.qs(&qt_of_class(a))
    }

    /// `q(b, x)` for a degree-2 class `x`: for every component `z T^l h^i`
    /// of `QS(b)` and curve `μ` of energy `k`, add
    /// `n(x, μ) (z *_{μ,k} x) T^{l+k}` with the h-exponent fixed by degree.
    pub fn q_correction(&self, b: &QTElement, x: &Class) -> Result<HTElement, QsError> {
        let d = qt_degree(self.q, b).ok_or(QsError::Inhomogeneous)?;
        correction_with(self.q, &self.qs(b), d, x)
    }

    /// The same correction computed from whole restricted products
    /// `n(x, μ) (QS(b) *_{μ,k} x)`, one h-level at a time, then shifted by
    /// `T^k h^2`.
    pub fn simplified_correction(&self, b: &QTElement, x: &Class) -> Result<HTElement, QsError> {
        let qs_b = self.qs(b);
        let xq = qt_of_class(x);
        let mut out = HTElement::zero();
        let hs: std::collections::BTreeSet<u32> = qs_b.iter().map(|t| t.h).collect();
        for curve in self.q.occurring_curves() {
            if self.q.intersection(x, &curve) == 0 {
                continue;
            }
            let k = self.q.energy(&curve).unwrap();
            for &h in &hs {
                let level: QTElement = qs_b
                    .filter(|t| t.h == h)
                    .map(|t| QTerm { class: t.class, t: t.t });
                for o in &self.q.product_restricted(&level, &xq, &curve, k)? {
                    if o.t + k <= self.q.j_max() {
                        out.toggle(HTTerm {
                            class: o.class,
                            t: o.t + k,
                            h: h + 2,
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Check the quantum Cartan relation for `b` and a degree-2 class `x`.
    pub fn verify_quantum_cartan(&self, b: &QTElement, x: &Class) -> Result<CartanReport, QsError> {
        let xq = qt_of_class(x);
        let lhs = self.qs(&self.q.quantum_product(b, &xq));
        let correction = self.q_correction(b, x)?;
        let mut rhs = self.q.product_ht(&self.qs(b), &self.qs(&xq));
        rhs.add_assign(&correction);
        let mismatch = lhs.sum(&rhs);
        Ok(CartanReport {
            lhs,
            rhs,
            correction,
            mismatch,
        })
    }

    /// `QS_{i,j}(a)`: the class multiplying `T^j h^i` in `QS(a)`.
    pub fn qs_component(&self, a: &QTElement, i: u32, j: u32) -> Class {
        self.qs(a)
            .iter()
            .filter(|t| t.h == i && t.t == j)
            .map(|t| t.class)
            .collect()
    }

    /// `QS^{a,b}(x T^i)`: the part of `QS(x T^i)` lying in
    /// `T^{b+i} H^{|x|+a}`, for each term `x T^i` of the input.
    pub fn qs_component_ab(&self, input: &QTElement, a_shift: i64, b_shift: u32) -> QTElement {
        let ring = self.q.ring();
        let mut out = QTElement::zero();
        for term in input {
            let target_deg = ring.degree(term.class) as i64 + a_shift;
            let target_t = b_shift + term.t;
            for u in &self.qs(&QTElement::single(*term)) {
                if u.t == target_t && ring.degree(u.class) as i64 == target_deg {
                    out.toggle(QTerm { class: u.class, t: u.t });
                }
            }
        }
        out
    }

    /// The part of `QS(a)` raising total degree by `q`, i.e. the coefficient
    /// of `h^{|a|-q}`, summed over all T-shifts.
    pub fn quantum_sq(&self, a: &QTElement, q: u32) -> QTElement {
        let ring = self.q.ring();
        let mut out = QTElement::zero();
        for term in a {
            let total = ring.degree(term.class) + self.q.t_degree() * term.t;
            if q > total {
                continue;
            }
            for u in &self.qs(&QTElement::single(*term)) {
                if u.h == total - q {
                    out.toggle(QTerm { class: u.class, t: u.t });
                }
            }
        }
        out
    }

    /// `w_Q = Σ_y QS(y) <Sq(y^∨), [M]>` with the h-linear pairing.
    pub fn quantum_stiefel_whitney(&self, sq: &SqTable) -> HTElement {
        let ring = self.q.ring();
        let mut out = HTElement::zero();
        for y in 0..ring.dim() {
            for &e in ring.pairing_h(&sq.sq(ring.dual(y))).iter() {
                out.add_assign(&shift(&self.rows[y], 0, e));
            }
        }
        out
    }
}

/// Curves occurring in the table, as a convenience for reports.
pub fn correction_curves(q: &QuantumStructure) -> Vec<CurveKey> {
    q.occurring_curves().into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn render(q: &QuantumStructure, e: &HTElement) -> String {
        q.render_ht(e)
    }

    #[test]
    fn low_dimensional_tables() {
        let m = builtins::cpn(1).unwrap();
        let q = m.quantum.as_ref().unwrap();
        let eng = QsEngine::new(q).unwrap();
        assert_eq!(render(q, eng.qs_basis(1)), "x h^2 + T");

        let m = builtins::cpn(2).unwrap();
        let q = m.quantum.as_ref().unwrap();
        let eng = QsEngine::new(q).unwrap();
        assert_eq!(render(q, eng.qs_basis(2)), "x^2 h^4 + T h^2 + x T");
    }

    #[test]
    fn recurrence_and_closed_form_small() {
        for n in 1..=4 {
            assert_eq!(qs_cpn_closed_table(n).rows, qs_cpn_recurrence(n).rows, "n = {n}");
        }
    }

    #[test]
    fn component_indexing() {
        let m = builtins::cpn(2).unwrap();
        let q = m.quantum.as_ref().unwrap();
        let eng = QsEngine::new(q).unwrap();
        let x2 = qt_of_class(&Class::single(2));
        // QS^{2-2N,1}(x^2) = T with N = 3
        let got = eng.qs_component_ab(&x2, 2 - 6, 1);
        assert_eq!(got, QTElement::single(QTerm { class: 0, t: 1 }));
        assert_eq!(eng.qs_component(&x2, 2, 1), Class::single(0));
    }
}
