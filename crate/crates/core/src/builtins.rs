//! Built-in manifolds: complex projective spaces, products of projective
//! lines, the moduli space of stable genus-zero curves with five marked
//! points, and a point.

use crate::cli::spec_file::{parse_spec, ConstantSpec, CurveSpec, ManifoldSpec};
use crate::gf2_poly::{Gf2Poly, Monomial};
use crate::manifold::{Manifold, ManifoldError};

fn mono(e: &[u32]) -> Monomial {
    Monomial::from_exponents(e).unwrap()
}

fn poly(n: usize, ms: &[&[u32]]) -> Gf2Poly {
    Gf2Poly::from_monomials(n, ms.iter().map(|e| mono(e)))
}

pub fn cpn_spec(n: u32) -> ManifoldSpec {
    assert!(n >= 1);
    ManifoldSpec {
        name: format!("cp{n}"),
        top_degree: 2 * n,
        minimal_chern: Some(n + 1),
        generators: vec![("x".into(), 2)],
        relations: vec![poly(1, &[&[n + 1]])],
        curves: vec![CurveSpec {
            label: "line".into(),
            chern: n + 1,
            intersections: vec![("x".into(), 1)],
        }],
        constants: vec![ConstantSpec {
            a: mono(&[1]),
            b: mono(&[n]),
            out: mono(&[0]),
            curve: Some("line".into()),
            k: 1,
        }],
    }
}

/// Product of `k` projective lines with generators `x, y, z, ...`.
pub fn p1_power_spec(k: usize) -> ManifoldSpec {
    let names = ["x", "y", "z", "u", "v", "w"];
    assert!((1..=names.len()).contains(&k));
    let unit = |i: usize, e: u32| {
        let mut v = vec![0; k];
        v[i] = e;
        v
    };
    let mut constants = Vec::new();
    for i in 0..k {
        constants.push(ConstantSpec {
            a: mono(&unit(i, 1)),
            b: mono(&unit(i, 1)),
            out: mono(&vec![0; k]),
            curve: Some(format!("mu{}", i + 1)),
            k: 1,
        });
    }
    // products of distinct generators with standard monomials in later ones
    for i in 0..k {
        for mask in 1u32..(1 << k) {
            if mask & ((1 << (i + 1)) - 1) != 0 {
                continue;
            }
            let rest: Vec<u32> = (0..k).map(|j| (mask >> j) & 1).collect();
            let mut all = rest.clone();
            all[i] = 1;
            constants.push(ConstantSpec {
                a: mono(&unit(i, 1)),
                b: mono(&rest),
                out: mono(&all),
                curve: None,
                k: 0,
            });
        }
    }
    ManifoldSpec {
        name: match k {
            2 => "p1xp1".into(),
            3 => "p1cubed".into(),
            _ => format!("p1^{k}"),
        },
        top_degree: 2 * k as u32,
        minimal_chern: Some(2),
        generators: names[..k].iter().map(|n| (n.to_string(), 2)).collect(),
        relations: (0..k).map(|i| poly(k, &[&unit(i, 2)])).collect(),
        curves: (0..k)
            .map(|i| CurveSpec {
                label: format!("mu{}", i + 1),
                chern: 2,
                intersections: names[..k]
                    .iter()
                    .enumerate()
                    .map(|(j, n)| (n.to_string(), (i == j) as u8))
                    .collect(),
            })
            .collect(),
        constants,
    }
}

const M05BAR: &str = "\
[manifold]
name = m05bar
top_degree = 4

[generators]
d1 = 2
d2 = 2
w0 = 2
w1 = 2
winf = 2

[relations]
d1^2
d2^2
w0^3
w1^3
winf^3
w0^2 + d1*d2
w1^2 + d1*d2
winf^2 + d1*d2
d1*w0
d1*w1
d1*winf
d2*w0
d2*w1
d2*winf
w0*w1
w0*winf
w1*winf
";

pub fn m05bar_spec() -> ManifoldSpec {
    parse_spec(M05BAR).expect("built-in spec parses")
}

pub fn point_spec() -> ManifoldSpec {
    ManifoldSpec {
        name: "point".into(),
        top_degree: 0,
        minimal_chern: None,
        generators: vec![],
        relations: vec![],
        curves: vec![],
        constants: vec![],
    }
}

pub fn cpn(n: u32) -> Result<Manifold, ManifoldError> {
    Manifold::from_spec(cpn_spec(n))
}

pub fn p1xp1() -> Result<Manifold, ManifoldError> {
    Manifold::from_spec(p1_power_spec(2))
}

pub fn p1cubed() -> Result<Manifold, ManifoldError> {
    Manifold::from_spec(p1_power_spec(3))
}

pub fn m05bar() -> Result<Manifold, ManifoldError> {
    Manifold::from_spec(m05bar_spec())
}

pub fn point() -> Result<Manifold, ManifoldError> {
    Manifold::from_spec(point_spec())
}

/// Spec for a built-in name: `cpn:N` (1 <= N <= 10), `p1xp1`, `p1cubed`,
/// `m05bar`, `point`.
pub fn builtin_spec(name: &str) -> Option<ManifoldSpec> {
    if let Some(n) = name.strip_prefix("cpn:") {
        let n: u32 = n.parse().ok()?;
        return (1..=10).contains(&n).then(|| cpn_spec(n));
    }
    match name {
        "p1xp1" => Some(p1_power_spec(2)),
        "p1cubed" => Some(p1_power_spec(3)),
        "m05bar" => Some(m05bar_spec()),
        "point" => Some(point_spec()),
        _ => None,
    }
}

pub const BUILTIN_NAMES: &[&str] = &["cpn:N (1..=10)", "p1xp1", "p1cubed", "m05bar", "point"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::spec_file::render_spec;

    #[test]
    fn m05bar_dimensions() {
        let m = m05bar().unwrap();
        let dims: Vec<(u32, usize)> = m.ring.dims().into_iter().collect();
        assert_eq!(dims, vec![(0, 1), (2, 5), (4, 1)]);
        assert!(m.quantum.is_none());
    }

    #[test]
    fn builtin_specs_round_trip() {
        for name in ["cpn:1", "cpn:4", "p1xp1", "p1cubed", "m05bar", "point"] {
            let s = builtin_spec(name).unwrap();
            assert_eq!(parse_spec(&render_spec(&s)).unwrap(), s, "{name}");
        }
    }

    #[test]
    fn cpn_range() {
        assert!(builtin_spec("cpn:0").is_none());
        assert!(builtin_spec("cpn:11").is_none());
        assert!(builtin_spec("cpn:10").is_some());
    }
}
