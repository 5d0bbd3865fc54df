//! Presented GF(2) cohomology rings with Poincaré duality.

use crate::gf2_poly::{buchberger, Gf2Poly, GroebnerBasis, Monomial, MonomialOrder, PolyError};
use crate::gf2vec::Gf2Vec;
use crate::linalg::Gf2Matrix;
use crate::steenrod::SqTable;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

/// Index of a basis class in [`RingPresentation::basis`].
pub type ClassId = usize;

/// A cohomology class as a GF(2) combination of basis classes.
pub type Class = Gf2Vec<ClassId>;

/// `class * h^h` with `|h| = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HTerm {
    pub class: ClassId,
    pub h: u32,
}

/// Element of `H*(M)[h]`.
pub type HElement = Gf2Vec<HTerm>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator {
            name: name.into(),
            degree,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisClass {
    pub monomial: Monomial,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` must have positive degree")]
    ZeroDegree(String),
    #[error("nonzero classes above the top degree (degree {0})")]
    NonzeroAboveTop(u32),
    #[error("top degree {degree} has dimension {dim}, expected 1")]
    TopNotOneDimensional { degree: u32, dim: usize },
    #[error("dim H^{degree} = {dim} but dim H^{dual_degree} = {dual_dim}")]
    NotPoincare {
        degree: u32,
        dim: usize,
        dual_degree: u32,
        dual_dim: usize,
    },
    #[error("intersection pairing is singular in degree {0}")]
    SingularPairing(u32),
}

/// A quotient `Z/2[generators]/(relations)` that is a Poincaré duality algebra
/// with fundamental class in `top_degree`.
#[derive(Clone, Debug)]
pub struct RingPresentation {
    name: String,
    generators: Vec<Generator>,
    relations: Vec<Gf2Poly>,
    top_degree: u32,
    gb: GroebnerBasis,
    basis: Vec<BasisClass>,
    index: HashMap<Monomial, ClassId>,
    top_class: ClassId,
    cup_table: Vec<Vec<Class>>,
    duals: Vec<Class>,
}

fn monomials_of_degree(weights: &[u32], d: u32) -> Vec<Vec<u32>> {
    fn go(weights: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i];
        for e in 0..=left / w {
            cur.push(e);
            go(weights, i + 1, left - e * w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(weights, 0, d, &mut Vec::new(), &mut out);
    out
}

/// Standard monomials of `gb` up to `top_degree`, sorted by degree and, within
/// a degree, from largest to smallest in the order.
///
/// Checks that nothing survives above `top_degree`, that the top degree is
/// one-dimensional and that dimensions are symmetric.
pub fn build_basis(gb: &GroebnerBasis, top_degree: u32) -> Result<Vec<BasisClass>, RingError> {
    let weights = gb.order().weights().to_vec();
    let max_w = weights.iter().copied().max().unwrap_or(1);
    let mut basis = Vec::new();
    for d in 0..=top_degree + max_w {
        let mut here: Vec<Monomial> = monomials_of_degree(&weights, d)
            .into_iter()
            .map(|e| Monomial::from_exponents(&e))
            .collect::<Result<_, _>>()?;
        here.retain(|m| gb.is_standard(m));
        if d > top_degree && !here.is_empty() {
            return Err(RingError::NonzeroAboveTop(d));
        }
        here.sort_by(|a, b| gb.order().cmp(b, a));
        basis.extend(here.into_iter().map(|monomial| BasisClass { monomial, degree: d }));
    }
    let dim = |d: u32| basis.iter().filter(|b| b.degree == d).count();
    let top_dim = dim(top_degree);
    if top_dim != 1 {
        return Err(RingError::TopNotOneDimensional {
            degree: top_degree,
            dim: top_dim,
        });
    }
    for d in 0..=top_degree {
        let (a, b) = (dim(d), dim(top_degree - d));
        if a != b {
            return Err(RingError::NotPoincare {
                degree: d,
                dim: a,
                dual_degree: top_degree - d,
                dual_dim: b,
            });
        }
    }
    Ok(basis)
}

impl RingPresentation {
    pub fn new(
        name: impl Into<String>,
        generators: Vec<Generator>,
        relations: Vec<Gf2Poly>,
        top_degree: u32,
    ) -> Result<Self, RingError> {
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(RingError::ZeroDegree(g.name.clone()));
            }
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(RingError::DuplicateGenerator(g.name.clone()));
            }
        }
        let weights: Vec<u32> = generators.iter().map(|g| g.degree).collect();
        let gb = buchberger(&relations, &MonomialOrder::grlex(weights))?;
        let basis = build_basis(&gb, top_degree)?;
        let index: HashMap<Monomial, ClassId> = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.monomial.clone(), i))
            .collect();
        let top_class = basis.iter().position(|b| b.degree == top_degree).unwrap();
        let mut ring = RingPresentation {
            name: name.into(),
            generators,
            relations,
            top_degree,
            gb,
            basis,
            index,
            top_class,
            cup_table: Vec::new(),
            duals: Vec::new(),
        };
        ring.cup_table = (0..ring.dim())
            .map(|a| {
                (0..ring.dim())
                    .map(|b| {
                        let m = ring.basis[a]
                            .monomial
                            .try_mul(&ring.basis[b].monomial)
                            .expect("basis product");
                        ring.class_of_poly(&Gf2Poly::monomial(m))
                    })
                    .collect()
            })
            .collect();
        ring.duals = dual_basis(&ring)?;
        Ok(ring)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn weights(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn relations(&self) -> &[Gf2Poly] {
        &self.relations
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn groebner(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn basis(&self) -> &[BasisClass] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, c: ClassId) -> u32 {
        self.basis[c].degree
    }

    pub fn monomial(&self, c: ClassId) -> &Monomial {
        &self.basis[c].monomial
    }

    pub fn basis_in_degree(&self, d: u32) -> Vec<ClassId> {
        (0..self.dim()).filter(|&c| self.basis[c].degree == d).collect()
    }

    /// Dimensions of the nonzero graded pieces.
    pub fn dims(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for b in &self.basis {
            *m.entry(b.degree).or_insert(0) += 1;
        }
        m
    }

    /// The unit class.
    pub fn unit(&self) -> ClassId {
        0
    }

    pub fn top_class(&self) -> ClassId {
        self.top_class
    }

    pub fn class_id(&self, m: &Monomial) -> Option<ClassId> {
        self.index.get(m).copied()
    }

    pub fn class_of_poly(&self, p: &Gf2Poly) -> Class {
        self.gb
            .normal_form(p)
            .terms()
            .map(|m| self.index[m])
            .collect()
    }

    pub fn poly_of_class(&self, c: &Class) -> Gf2Poly {
        Gf2Poly::from_monomials(self.ngens(), c.iter().map(|&i| self.basis[i].monomial.clone()))
    }

    /// Class of generator `i`, which may be a combination if relations are linear.
    pub fn generator_class(&self, i: usize) -> Class {
        self.class_of_poly(&Gf2Poly::var(self.ngens(), i))
    }

    /// Degree shared by all terms, or `None` for zero or mixed degrees.
    pub fn class_degree(&self, c: &Class) -> Option<u32> {
        let mut it = c.iter().map(|&i| self.degree(i));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn cup_basis(&self, a: ClassId, b: ClassId) -> &Class {
        &self.cup_table[a][b]
    }

    pub fn cup(&self, a: &Class, b: &Class) -> Class {
        let mut out = Class::zero();
        for &i in a {
            for &j in b {
                out.add_assign(&self.cup_table[i][j]);
            }
        }
        out
    }

    /// `<c, [M]>`: the coefficient of the top basis class.
    pub fn pairing(&self, c: &Class) -> u8 {
        c.contains(&self.top_class) as u8
    }

    /// `<y, [M]>` with h-linear extension: returns the h-polynomial as the set
    /// of h-exponents with coefficient 1.
    pub fn pairing_h(&self, e: &HElement) -> Gf2Vec<u32> {
        e.iter()
            .filter(|t| t.class == self.top_class)
            .map(|t| t.h)
            .collect()
    }

    /// Dual basis: `<b_i ∪ dual(b_j), [M]> = δ_ij`.
    pub fn dual_basis(&self) -> &[Class] {
        &self.duals
    }

    pub fn dual(&self, c: ClassId) -> &Class {
        &self.duals[c]
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let n = &self.generators[i].name;
                if e == 1 {
                    n.clone()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn render_basis(&self, c: ClassId) -> String {
        self.render_monomial(&self.basis[c].monomial)
    }

    pub fn render_class(&self, c: &Class) -> String {
        if c.is_zero() {
            return "0".to_string();
        }
        c.iter()
            .map(|&i| self.render_basis(i))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn render_h(&self, e: &HElement) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<&HTerm> = e.iter().collect();
        terms.sort_by(|a, b| b.h.cmp(&a.h).then(a.class.cmp(&b.class)));
        terms
            .iter()
            .map(|t| render_term(self, t.class, 0, t.h))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Render `class T^t h^h` in the compact form used across the crate,
/// e.g. `x^2 h^4`, `T h^2`, `x T`, `1`.
pub fn render_term(ring: &RingPresentation, class: ClassId, t: u32, h: u32) -> String {
    let mut parts = Vec::new();
    if class != ring.unit() || (t == 0 && h == 0) {
        parts.push(ring.render_basis(class));
    }
    match t {
        0 => {}
        1 => parts.push("T".into()),
        _ => parts.push(format!("T^{t}")),
    }
    match h {
        0 => {}
        1 => parts.push("h".into()),
        _ => parts.push(format!("h^{h}")),
    }
    parts.join(" ")
}

/// Cup product of two classes.
pub fn cup(ring: &RingPresentation, a: &Class, b: &Class) -> Class {
    ring.cup(a, b)
}

/// Dual basis via inversion of the pairing matrix in each degree.
pub fn dual_basis(ring: &RingPresentation) -> Result<Vec<Class>, RingError> {
    let mut duals = vec![Class::zero(); ring.dim()];
    let top = ring.top_degree();
    for &d in ring.dims().keys() {
        let rows = ring.basis_in_degree(d);
        let cols = ring.basis_in_degree(top - d);
        let mut p = Gf2Matrix::zeros(rows.len(), cols.len());
        for (i, &a) in rows.iter().enumerate() {
            for (j, &b) in cols.iter().enumerate() {
                if ring.pairing(ring.cup_basis(a, b)) == 1 {
                    p.set(i, j, true);
                }
            }
        }
        let inv = p.inverse().ok_or(RingError::SingularPairing(d))?;
        for (i, &a) in rows.iter().enumerate() {
            duals[a] = cols
                .iter()
                .enumerate()
                .filter(|&(j, _)| inv.get(j, i))
                .map(|(_, &b)| b)
                .collect();
        }
    }
    Ok(duals)
}

/// h-graded Wu class `v = Σ_y y <Sq(y^∨), [M]>`, using
/// `<a h^i, [M]> = <a, [M]> h^i`.
pub fn wu_class(ring: &RingPresentation, sq: &SqTable) -> HElement {
    let mut v = HElement::zero();
    for y in 0..ring.dim() {
        for h in ring.pairing_h(&sq.sq(ring.dual(y))).iter() {
            v.toggle(HTerm { class: y, h: *h });
        }
    }
    v
}

/// Total Stiefel-Whitney class `w = Sq(v)`, applied h-linearly.
pub fn stiefel_whitney(ring: &RingPresentation, sq: &SqTable) -> HElement {
    let v = wu_class(ring, sq);
    let mut w = HElement::zero();
    for t in &v {
        let s = sq.sq(&Class::single(t.class));
        w.add_assign(&s.map(|u| HTerm {
            class: u.class,
            h: u.h + t.h,
        }));
    }
    w
}

/// Forget the h-grading: the class obtained by setting `h = 1`.
pub fn collapse_h(e: &HElement) -> Class {
    e.map(|t| t.class)
}
