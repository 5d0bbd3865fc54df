//! A ring presentation together with optional quantum data, built from a spec.

use crate::cli::spec_file::ManifoldSpec;
use crate::gf2_poly::Gf2Poly;
use crate::quantum_model::{CurveClass, CurveKey, QuantumError, QuantumStructure, StructureConstant};
use crate::ring_model::{ClassId, Generator, RingError, RingPresentation};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifoldError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error("quantum data given without `minimal_chern`")]
    MissingMinimalChern,
    #[error("`{0}` is not a basis class")]
    NotBasisClass(String),
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
}

#[derive(Clone, Debug)]
pub struct Manifold {
    pub spec: ManifoldSpec,
    pub ring: Arc<RingPresentation>,
    pub quantum: Option<QuantumStructure>,
}

impl Manifold {
    pub fn from_spec(spec: ManifoldSpec) -> Result<Self, ManifoldError> {
        let gens: Vec<Generator> = spec
            .generators
            .iter()
            .map(|(n, d)| Generator::new(n.clone(), *d))
            .collect();
        let ring = Arc::new(RingPresentation::new(
            spec.name.clone(),
            gens,
            spec.relations.clone(),
            spec.top_degree,
        )?);
        let quantum = if spec.curves.is_empty() && spec.constants.iter().all(|c| c.curve.is_none()) {
            None
        } else {
            let n = spec.minimal_chern.ok_or(ManifoldError::MissingMinimalChern)?;
            let basis_of = |m: &crate::gf2_poly::Monomial| -> Result<ClassId, ManifoldError> {
                let c = ring.class_of_poly(&Gf2Poly::monomial(m.clone()));
                match c.iter().collect::<Vec<_>>().as_slice() {
                    [&id] => Ok(id),
                    _ => Err(ManifoldError::NotBasisClass(ring.render_monomial(m))),
                }
            };
            let mut curves = Vec::new();
            for c in &spec.curves {
                let mut inter = BTreeMap::new();
                for (g, v) in &c.intersections {
                    let i = ring.generator_index(g).expect("resolved at parse time");
                    let id = basis_of(&crate::gf2_poly::Monomial::var(ring.ngens(), i))?;
                    if *v == 1 {
                        inter.insert(id, 1);
                    }
                }
                curves.push(CurveClass {
                    label: c.label.clone(),
                    chern: c.chern,
                    intersections: inter,
                });
            }
            let nc = curves.len();
            let mut supplied = Vec::new();
            for c in &spec.constants {
                let curve = match &c.curve {
                    None => CurveKey::zero(nc),
                    Some(l) => {
                        let i = spec
                            .curves
                            .iter()
                            .position(|s| &s.label == l)
                            .ok_or_else(|| ManifoldError::UnknownCurve(l.clone()))?;
                        CurveKey::unit(nc, i)
                    }
                };
                supplied.push(StructureConstant {
                    a: basis_of(&c.a)?,
                    b: basis_of(&c.b)?,
                    out: basis_of(&c.out)?,
                    curve,
                    k: c.k,
                });
            }
            Some(QuantumStructure::complete(ring.clone(), n, curves, &supplied)?)
        };
        Ok(Manifold { spec, ring, quantum })
    }

    /// The quantum structure, or for ring-only manifolds the structure with
    /// no curves, whose quantum square is the classical one.
    pub fn quantum_or_classical(&self) -> QuantumStructure {
        match &self.quantum {
            Some(q) => q.clone(),
            None => {
                let n = self
                    .spec
                    .minimal_chern
                    .unwrap_or(self.ring.top_degree() / 2 + 1);
                QuantumStructure::complete(self.ring.clone(), n, Vec::new(), &[])
                    .expect("curve-free structure")
            }
        }
    }
}
