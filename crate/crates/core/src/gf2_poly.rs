//! Polynomials over GF(2) and Gröbner bases for homogeneous ideals.
//!
//! Monomials are exponent vectors; a polynomial is the set of monomials with
//! coefficient 1. Orders are graded lexicographic with respect to a weight
//! vector, optionally refined by a primary weight used to keep one group of
//! variables dominant.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

pub type Exponent = u16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("generator count mismatch: {left} vs {right}")]
    GeneratorMismatch { left: usize, right: usize },
    #[error("exponent overflow (limit {})", Exponent::MAX)]
    ExponentOverflow,
    #[error("relation {index} is not homogeneous")]
    Inhomogeneous { index: usize },
    #[error("weight vector has {weights} entries for {nvars} generators")]
    WeightMismatch { weights: usize, nvars: usize },
}

/// An exponent vector. The derived ordering is pure lex with generator 0 most
/// significant; graded orders live in [`MonomialOrder`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<Exponent>);

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{:?}", self.0)
    }
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self, PolyError> {
        exps.iter()
            .map(|&e| Exponent::try_from(e).map_err(|_| PolyError::ExponentOverflow))
            .collect::<Result<Vec<_>, _>>()
            .map(Monomial)
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i] as u32
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, weights: &[u32]) -> u32 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u32 * w)
            .sum()
    }

    pub fn try_mul(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        if self.0.len() != other.0.len() {
            return Err(PolyError::GeneratorMismatch {
                left: self.0.len(),
                right: other.0.len(),
            });
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(PolyError::ExponentOverflow))
            .collect::<Result<Vec<_>, _>>()
            .map(Monomial)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        self.divides(other)
            .then(|| Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// First generator with a positive exponent.
    pub fn first_var(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    /// Drop trailing variables, keeping the first `n`.
    pub fn truncate(&self, n: usize) -> Monomial {
        Monomial(self.0[..n].to_vec())
    }

    /// Append zero exponents for `extra` new variables.
    pub fn extend(&self, extra: usize) -> Monomial {
        let mut e = self.0.clone();
        e.extend(std::iter::repeat_n(0, extra));
        Monomial(e)
    }
}

/// Graded lex order: compare the optional primary weight, then the weighted
/// degree, then lex with generator 0 largest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    weights: Vec<u32>,
    primary: Option<Vec<u32>>,
}

type OrderKey = (u32, u32, Monomial);

impl MonomialOrder {
    pub fn grlex(weights: Vec<u32>) -> Self {
        MonomialOrder {
            weights,
            primary: None,
        }
    }

    /// Order that first compares the `primary` weight. Used to keep the
    /// variables with positive primary weight ahead of the rest.
    pub fn with_primary(weights: Vec<u32>, primary: Vec<u32>) -> Self {
        assert_eq!(weights.len(), primary.len());
        MonomialOrder {
            weights,
            primary: Some(primary),
        }
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    fn key(&self, m: &Monomial) -> OrderKey {
        let p = self.primary.as_ref().map_or(0, |p| m.degree(p));
        (p, m.degree(&self.weights), m.clone())
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }
}

/// A polynomial over GF(2): the set of monomials with coefficient 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Poly {
    nvars: usize,
    terms: BTreeSet<Monomial>,
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.terms.iter()).finish()
    }
}

impl Gf2Poly {
    pub fn zero(nvars: usize) -> Self {
        Gf2Poly {
            nvars,
            terms: BTreeSet::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(Monomial::one(nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i))
    }

    pub fn monomial(m: Monomial) -> Self {
        let nvars = m.nvars();
        Gf2Poly {
            nvars,
            terms: BTreeSet::from([m]),
        }
    }

    /// Sum of the given monomials; repeats cancel.
    pub fn from_monomials(nvars: usize, ms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Self::zero(nvars);
        for m in ms {
            assert_eq!(m.nvars(), nvars, "monomial has wrong generator count");
            p.toggle(m);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = &Monomial> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    fn check_vars(&self, other: &Gf2Poly) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::GeneratorMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Gf2Poly) -> Result<Gf2Poly, PolyError> {
        self.check_vars(other)?;
        let terms = self
            .terms
            .symmetric_difference(&other.terms)
            .cloned()
            .collect();
        Ok(Gf2Poly {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn try_mul(&self, other: &Gf2Poly) -> Result<Gf2Poly, PolyError> {
        self.check_vars(other)?;
        let mut out = Gf2Poly::zero(self.nvars);
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.try_mul(b)?);
            }
        }
        Ok(out)
    }

    pub fn try_mul_monomial(&self, m: &Monomial) -> Result<Gf2Poly, PolyError> {
        let mut out = Gf2Poly::zero(self.nvars);
        for a in &self.terms {
            out.toggle(a.try_mul(m)?);
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Gf2Poly {
        let mut acc = Gf2Poly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Frobenius square: every exponent doubled.
    pub fn square(&self) -> Result<Gf2Poly, PolyError> {
        let mut out = Gf2Poly::zero(self.nvars);
        for m in &self.terms {
            out.toggle(m.try_mul(m)?);
        }
        Ok(out)
    }

    pub fn is_homogeneous(&self, weights: &[u32]) -> bool {
        let mut degs = self.terms.iter().map(|m| m.degree(weights));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Weighted degree of a nonzero homogeneous polynomial.
    pub fn degree(&self, weights: &[u32]) -> Option<u32> {
        if self.is_zero() || !self.is_homogeneous(weights) {
            return None;
        }
        self.terms.first().map(|m| m.degree(weights))
    }

    pub fn leading<'a>(&'a self, order: &MonomialOrder) -> Option<&'a Monomial> {
        self.terms.iter().max_by(|a, b| order.cmp(a, b))
    }

    /// Ring homomorphism sending generator `i` to `images[i]`.
    pub fn substitute(&self, images: &[Gf2Poly], target_nvars: usize) -> Result<Gf2Poly, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::GeneratorMismatch {
                left: self.nvars,
                right: images.len(),
            });
        }
        let mut out = Gf2Poly::zero(target_nvars);
        for m in &self.terms {
            let mut t = Gf2Poly::one(target_nvars);
            for (i, img) in images.iter().enumerate() {
                for _ in 0..m.exponent(i) {
                    t = t.try_mul(img)?;
                }
            }
            out = out.try_add(&t)?;
        }
        Ok(out)
    }

    /// Re-embed into a ring with `extra` additional trailing variables.
    pub fn extend(&self, extra: usize) -> Gf2Poly {
        Gf2Poly::from_monomials(self.nvars + extra, self.terms.iter().map(|m| m.extend(extra)))
    }
}

/// Panics on generator mismatch; use [`Gf2Poly::try_add`] for a checked sum.
impl std::ops::Add for &Gf2Poly {
    type Output = Gf2Poly;
    fn add(self, rhs: &Gf2Poly) -> Gf2Poly {
        self.try_add(rhs).expect("polynomial addition")
    }
}

/// Panics on generator mismatch or exponent overflow.
impl std::ops::Mul for &Gf2Poly {
    type Output = Gf2Poly;
    fn mul(self, rhs: &Gf2Poly) -> Gf2Poly {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

/// Polynomial product with checked generator counts.
pub fn poly_mul(a: &Gf2Poly, b: &Gf2Poly) -> Result<Gf2Poly, PolyError> {
    a.try_mul(b)
}

/// Parity of the binomial coefficient `C(n, k)` by Lucas' theorem.
/// Out-of-range arguments (negative, or `k > n`) give 0.
pub fn lucas_binom(n: i64, k: i64) -> u8 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    (k & n == k) as u8
}

/// Reduced Gröbner basis of a homogeneous ideal.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    polys: Vec<Gf2Poly>,
    leads: Vec<Monomial>,
}

impl GroebnerBasis {
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn polys(&self) -> &[Gf2Poly] {
        &self.polys
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leads
    }

    /// True when `m` is divisible by no leading monomial.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.leads.iter().any(|l| l.divides(m))
    }

    /// Unique remainder of `p` modulo the ideal.
    ///
    /// Panics if an exponent overflows during reduction.
    pub fn normal_form(&self, p: &Gf2Poly) -> Gf2Poly {
        reduce(p, &self.polys, &self.leads, &self.order)
    }

    pub fn contains(&self, p: &Gf2Poly) -> bool {
        self.normal_form(p).is_zero()
    }
}

fn reduce(p: &Gf2Poly, polys: &[Gf2Poly], leads: &[Monomial], order: &MonomialOrder) -> Gf2Poly {
    let mut work: BTreeSet<OrderKey> = p.terms.iter().map(|m| order.key(m)).collect();
    let mut out = Gf2Poly::zero(p.nvars);
    while let Some(key) = work.pop_last() {
        let m = key.2;
        match leads.iter().position(|l| l.divides(&m)) {
            Some(i) => {
                let q = leads[i].quotient_of(&m).unwrap();
                for t in polys[i].terms() {
                    if t == &leads[i] {
                        continue;
                    }
                    let k = order.key(&t.try_mul(&q).expect("exponent overflow in reduction"));
                    if !work.remove(&k) {
                        work.insert(k);
                    }
                }
            }
            None => {
                out.terms.insert(m);
            }
        }
    }
    out
}

/// Buchberger's algorithm over GF(2). Rejects relations that are not
/// homogeneous for the order's weights and returns the reduced basis.
pub fn buchberger(relations: &[Gf2Poly], order: &MonomialOrder) -> Result<GroebnerBasis, PolyError> {
    let nvars = order.nvars();
    for (i, r) in relations.iter().enumerate() {
        if r.nvars != nvars {
            return Err(PolyError::GeneratorMismatch {
                left: nvars,
                right: r.nvars,
            });
        }
        if !r.is_homogeneous(order.weights()) {
            return Err(PolyError::Inhomogeneous { index: i });
        }
    }
    let mut polys: Vec<Gf2Poly> = Vec::new();
    let mut leads: Vec<Monomial> = Vec::new();
    for r in relations {
        let nf = reduce(r, &polys, &leads, order);
        if let Some(l) = nf.leading(order) {
            leads.push(l.clone());
            polys.push(nf);
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..polys.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    while let Some((i, j)) = pairs.pop() {
        if leads[i].is_coprime(&leads[j]) {
            continue;
        }
        let l = leads[i].lcm(&leads[j]);
        let s = polys[i]
            .try_mul_monomial(&leads[i].quotient_of(&l).unwrap())?
            .try_add(&polys[j].try_mul_monomial(&leads[j].quotient_of(&l).unwrap())?)?;
        let nf = reduce(&s, &polys, &leads, order);
        if let Some(lead) = nf.leading(order) {
            let n = polys.len();
            leads.push(lead.clone());
            polys.push(nf);
            pairs.extend((0..n).map(|i| (i, n)));
        }
    }
    Ok(interreduce(polys, leads, order))
}

fn interreduce(polys: Vec<Gf2Poly>, leads: Vec<Monomial>, order: &MonomialOrder) -> GroebnerBasis {
    // keep generators whose leading monomial is minimal; ties keep the first
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..polys.len() {
        let redundant = (0..polys.len()).any(|j| {
            j != i && leads[j].divides(&leads[i]) && (leads[j] != leads[i] || j < i)
        });
        if !redundant {
            keep.push(i);
        }
    }
    keep.sort_by(|&a, &b| order.cmp(&leads[a], &leads[b]));
    let min_leads: Vec<Monomial> = keep.iter().map(|&i| leads[i].clone()).collect();
    let min_polys: Vec<Gf2Poly> = keep.iter().map(|&i| polys[i].clone()).collect();
    let mut out = Vec::with_capacity(keep.len());
    for (i, p) in min_polys.iter().enumerate() {
        let mut tail = p.clone();
        tail.toggle(min_leads[i].clone());
        let others: Vec<usize> = (0..min_polys.len()).filter(|&j| j != i).collect();
        let op: Vec<Gf2Poly> = others.iter().map(|&j| min_polys[j].clone()).collect();
        let ol: Vec<Monomial> = others.iter().map(|&j| min_leads[j].clone()).collect();
        let mut r = reduce(&tail, &op, &ol, order);
        r.toggle(min_leads[i].clone());
        out.push(r);
    }
    GroebnerBasis {
        order: order.clone(),
        polys: out,
        leads: min_leads,
    }
}

/// Normal form of `p` with respect to `gb`.
pub fn normal_form(gb: &GroebnerBasis, p: &Gf2Poly) -> Gf2Poly {
    gb.normal_form(p)
}
