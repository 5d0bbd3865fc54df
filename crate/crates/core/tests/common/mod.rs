#![allow(dead_code)]

use qsteenrod::builtins;
use qsteenrod::manifold::Manifold;

/// Every shipped manifold, CP^n for the full built-in range.
pub fn shipped() -> Vec<Manifold> {
    static CACHE: std::sync::OnceLock<Vec<Manifold>> = std::sync::OnceLock::new();
    CACHE.get_or_init(build_shipped).clone()
}

fn build_shipped() -> Vec<Manifold> {
    let mut v: Vec<Manifold> = (1..=10).map(|n| builtins::cpn(n).unwrap()).collect();
    v.push(builtins::p1xp1().unwrap());
    v.push(builtins::p1cubed().unwrap());
    v.push(builtins::m05bar().unwrap());
    v.push(builtins::point().unwrap());
    v
}

/// Shipped manifolds with quantum data.
pub fn quantum_shipped() -> Vec<Manifold> {
    shipped().into_iter().filter(|m| m.quantum.is_some()).collect()
}

/// `x^k` on a CP^n built-in as a class id.
pub fn xpow(m: &Manifold, k: u32) -> usize {
    let ring = &m.ring;
    let mono = qsteenrod::gf2_poly::Monomial::from_exponents(&[k]).unwrap();
    ring.class_id(&mono).unwrap()
}
