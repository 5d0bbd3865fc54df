//! Total Steenrod square `Sq: H* -> H*[h]` for rings generated in degree 2.
//!
//! On a degree-2 generator `Sq(x) = x h^2 + x^2`; everything else follows from
//! multiplicativity and additivity. The coefficient of `h^{|a|-i}` in `Sq(a)`
//! is `Sq^i(a)`.

use crate::gf2_poly::{Gf2Poly, Monomial};
use crate::ring_model::{Class, ClassId, HElement, HTerm, RingPresentation};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SqError {
    #[error("generator `{name}` has degree {degree}; only degree-2 generators are supported")]
    UnsupportedDegree { name: String, degree: u32 },
    #[error("relation {relation} is not closed under Sq: the h^{h} component is not in the ideal")]
    NotClosed { relation: usize, h: u32 },
}

/// `Sq` on the free polynomial ring: returns the h-components of the image of
/// `p` under `x_i -> x_i h^2 + x_i^2`.
pub fn free_sq(p: &Gf2Poly) -> BTreeMap<u32, Gf2Poly> {
    let n = p.nvars();
    let images: Vec<Gf2Poly> = (0..n)
        .map(|i| {
            let mut e = vec![0u32; n + 1];
            e[i] = 1;
            e[n] = 2;
            let a = Monomial::from_exponents(&e).unwrap();
            e[i] = 2;
            e[n] = 0;
            let b = Monomial::from_exponents(&e).unwrap();
            Gf2Poly::from_monomials(n + 1, [a, b])
        })
        .collect();
    let img = p.substitute(&images, n + 1).expect("free Sq");
    let mut out: BTreeMap<u32, Gf2Poly> = BTreeMap::new();
    for m in img.terms() {
        out.entry(m.exponent(n))
            .or_insert_with(|| Gf2Poly::zero(n))
            .toggle(m.truncate(n));
    }
    out
}

/// Every h-component of `Sq(r)` must lie in the ideal for each relation `r`.
pub fn check_relation_closure(ring: &RingPresentation) -> Result<(), SqError> {
    for (i, r) in ring.relations().iter().enumerate() {
        for (h, comp) in free_sq(r) {
            if !ring.groebner().contains(&comp) {
                return Err(SqError::NotClosed { relation: i, h });
            }
        }
    }
    Ok(())
}

/// Sq of every basis class, checked for well-definedness at construction.
#[derive(Clone, Debug)]
pub struct SqTable {
    rows: Vec<HElement>,
    degrees: Vec<u32>,
}

impl SqTable {
    pub fn new(ring: &RingPresentation) -> Result<Self, SqError> {
        if let Some(g) = ring.generators().iter().find(|g| g.degree != 2) {
            return Err(SqError::UnsupportedDegree {
                name: g.name.clone(),
                degree: g.degree,
            });
        }
        check_relation_closure(ring)?;
        let rows = (0..ring.dim())
            .map(|c| {
                let p = Gf2Poly::monomial(ring.monomial(c).clone());
                let mut e = HElement::zero();
                for (h, comp) in free_sq(&p) {
                    for &k in &ring.class_of_poly(&comp) {
                        e.toggle(HTerm { class: k, h });
                    }
                }
                e
            })
            .collect();
        Ok(SqTable {
            rows,
            degrees: (0..ring.dim()).map(|c| ring.degree(c)).collect(),
        })
    }

    pub fn sq_basis(&self, c: ClassId) -> &HElement {
        &self.rows[c]
    }

    pub fn sq(&self, a: &Class) -> HElement {
        let mut out = HElement::zero();
        for &c in a {
            out.add_assign(&self.rows[c]);
        }
        out
    }

    /// `Sq^i(a)`: the coefficient of `h^{|b|-i}` for each basis term `b` of `a`.
    pub fn sq_component(&self, a: &Class, i: u32) -> Class {
        let mut out = Class::zero();
        for &c in a {
            let d = self.degrees[c];
            if i > d {
                continue;
            }
            for t in &self.rows[c] {
                if t.h == d - i {
                    out.toggle(t.class);
                }
            }
        }
        out
    }

    /// `Sq^q Sq^p (a)`.
    pub fn compose(&self, a: &Class, p: u32, q: u32) -> Class {
        self.sq_component(&self.sq_component(a, p), q)
    }
}

/// `Sq(x) = x h^2 + x^2` for generator `i`.
pub fn sq_generator(ring: &RingPresentation, sq: &SqTable, i: usize) -> HElement {
    sq.sq(&ring.generator_class(i))
}
