//! Acceptance criteria. One PASS/FAIL line per criterion; exits nonzero if
//! any criterion fails.

mod common;

use qsteenrod::adem::{
    admissible_pairs, energy_zero_identity, pullback_preimage, binomial_identity_check, qq_classical, quantum_adem_defect, qt,
    reconstruct_from_preimage, verify_adem,
};
use qsteenrod::builtins;
use qsteenrod::cli::{parse_spec, run_command};
use qsteenrod::qsteenrod::{qs_cpn_closed_table, qs_cpn_recurrence, QsEngine};
use qsteenrod::quantum_model::{qt_of_class, validate_quantum, HTElement, HTTerm, QuantumStructure};
use qsteenrod::ring_model::{stiefel_whitney, Class, Generator, HElement, HTerm, RingPresentation};
use qsteenrod::steenrod::{check_relation_closure, SqError, SqTable};
use std::time::{Duration, Instant};

const LIMIT_FAST: Duration = Duration::from_secs(1);
const LIMIT_ORACLES: Duration = Duration::from_secs(10);
const LIMIT_ADEM: Duration = Duration::from_secs(30);

type Outcome = Result<(), String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Exact binomial coefficient, independent of the Lucas routine.
fn binom_u128(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * (n as u128 - i) / (i + 1);
    }
    c
}

fn x_class(m: &qsteenrod::manifold::Manifold) -> Class {
    Class::single(common::xpow(m, 1))
}

fn criterion_1() -> Outcome {
    let expect: [(&[&str], &[&str]); 4] = [
        (&["qs", "cpn:1"], &["QS(x) = x h^2 + T"]),
        (&["qs", "cpn:1", "T"], &["QS(T) = T^2"]),
        (&["qs", "cpn:2"], &["QS(x) = x h^2 + x^2", "QS(x^2) = x^2 h^4 + T h^2 + x T"]),
        (&["qs", "cpn:3"], &["QS(x^2) = x^2 h^4 + T", "QS(x^3) = x^3 h^6 + T h^4 + x T h^2 + x^2 T"]),
    ];
    for (args, lines) in expect {
        let out = run_command(args.iter().copied());
        for line in lines {
            ensure(out.stdout.lines().any(|l| l == *line), || {
                format!("`{}` lacks `{line}`:\n{}", args.join(" "), out.stdout)
            })?;
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    for n in 1..=8u32 {
        let m = builtins::cpn(n).map_err(|e| e.to_string())?;
        let eng = QsEngine::new(m.quantum.as_ref().unwrap()).map_err(|e| e.to_string())?;
        let closed = qs_cpn_closed_table(n);
        let rec = qs_cpn_recurrence(n);
        for i in 0..=n {
            let c = common::xpow(&m, i);
            ensure(closed.rows[i as usize] == rec.rows[i as usize], || format!("closed vs recurrence, CP^{n} i={i}"))?;
            ensure(eng.qs_basis(c) == &closed.rows[i as usize], || format!("closed vs engine, CP^{n} i={i}"))?;
        }
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    for n in 1..=8i64 {
        let m = builtins::cpn(n as u32).map_err(|e| e.to_string())?;
        let eng = QsEngine::new(m.quantum.as_ref().unwrap()).map_err(|e| e.to_string())?;
        for i in 0..=n {
            let b = qt_of_class(&Class::single(common::xpow(&m, i as u32)));
            let got = eng.q_correction(&b, &x_class(&m)).map_err(|e| e.to_string())?;
            let mut expected = HTElement::zero();
            if 2 * i >= n && binom_u128(i, n - i) % 2 == 1 {
                expected.toggle(HTTerm {
                    class: 0,
                    t: 1,
                    h: (4 * i + 2 - 2 * n) as u32,
                });
            }
            ensure(got == expected, || {
                format!("CP^{n} i={i}: got {}", m.quantum.as_ref().unwrap().render_ht(&got))
            })?;
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    for n in 1..=8u32 {
        let m = builtins::cpn(n).map_err(|e| e.to_string())?;
        let eng = QsEngine::new(m.quantum.as_ref().unwrap()).map_err(|e| e.to_string())?;
        for i in 0..=n {
            let b = qt_of_class(&Class::single(common::xpow(&m, i)));
            let r = eng.verify_quantum_cartan(&b, &x_class(&m)).map_err(|e| e.to_string())?;
            ensure(r.holds(), || format!("CP^{n} (x^{i}, x)"))?;
        }
    }
    let m = builtins::p1xp1().map_err(|e| e.to_string())?;
    let eng = QsEngine::new(m.quantum.as_ref().unwrap()).map_err(|e| e.to_string())?;
    let r = eng
        .verify_quantum_cartan(&qt_of_class(&m.ring.generator_class(0)), &m.ring.generator_class(1))
        .map_err(|e| e.to_string())?;
    ensure(r.holds() && r.correction.is_zero(), || "CP^1 x CP^1 (x, y)".into())
}

fn h_product(ring: &RingPresentation, a: &HElement, b: &HElement) -> HElement {
    let mut out = HElement::zero();
    for s in a {
        for t in b {
            for &c in ring.cup_basis(s.class, t.class) {
                out.toggle(HTerm { class: c, h: s.h + t.h });
            }
        }
    }
    out
}

fn criterion_5() -> Outcome {
    for n in 1..=10u32 {
        let m = builtins::cpn(n).map_err(|e| e.to_string())?;
        let sq = SqTable::new(&m.ring).map_err(|e| e.to_string())?;
        for i in 0..=n {
            let x = Class::single(common::xpow(&m, i));
            for j in 0..=i {
                let got = sq.sq_component(&x, 2 * j);
                let want = if i + j <= n && binom_u128(i as i64, j as i64) % 2 == 1 {
                    Class::single(common::xpow(&m, i + j))
                } else {
                    Class::zero()
                };
                ensure(got == want, || format!("CP^{n} Sq^{} x^{i}", 2 * j))?;
            }
        }
    }
    for m in common::shipped() {
        let ring = &m.ring;
        let sq = SqTable::new(ring).map_err(|e| e.to_string())?;
        for a in 0..ring.dim() {
            let d = ring.degree(a);
            let e = sq.sq_basis(a);
            let at = |h: u32| -> Class { e.iter().filter(|t| t.h == h).map(|t| t.class).collect() };
            ensure(at(d) == Class::single(a), || format!("{}: Sq^0 on {a}", ring.name()))?;
            ensure(at(0) == *ring.cup_basis(a, a), || format!("{}: top square on {a}", ring.name()))?;
            ensure(e.iter().all(|t| t.h <= d), || format!("{}: Sq^i above degree on {a}", ring.name()))?;
            for b in 0..ring.dim() {
                let lhs = sq.sq(ring.cup_basis(a, b));
                ensure(lhs == h_product(ring, e, sq.sq_basis(b)), || format!("{}: Cartan on ({a}, {b})", ring.name()))?;
            }
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    for n in 1..=10u32 {
        let m = builtins::cpn(n).map_err(|e| e.to_string())?;
        let sq = SqTable::new(&m.ring).map_err(|e| e.to_string())?;
        let w = stiefel_whitney(&m.ring, &sq);
        let mut expected = HElement::zero();
        for k in 0..=n {
            if binom_u128(n as i64 + 1, k as i64) % 2 == 1 {
                expected.toggle(HTerm {
                    class: common::xpow(&m, k),
                    h: 2 * (n - k),
                });
            }
        }
        ensure(w == expected, || format!("w(CP^{n})"))?;
    }
    for m in common::quantum_shipped() {
        let q = m.quantum.as_ref().unwrap();
        if 2 * q.minimal_chern() <= m.ring.top_degree() {
            continue;
        }
        let sq = SqTable::new(&m.ring).map_err(|e| e.to_string())?;
        let eng = QsEngine::new(q).map_err(|e| e.to_string())?;
        let w: HTElement = stiefel_whitney(&m.ring, &sq)
            .iter()
            .map(|t| HTTerm { class: t.class, t: 0, h: t.h })
            .collect();
        ensure(eng.quantum_stiefel_whitney(&sq) == w, || format!("w_Q != w on {}", m.ring.name()))?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let rings = [
        builtins::cpn(5).map_err(|e| e.to_string())?,
        builtins::p1xp1().map_err(|e| e.to_string())?,
        builtins::m05bar().map_err(|e| e.to_string())?,
    ];
    for m in &rings {
        let sq = SqTable::new(&m.ring).map_err(|e| e.to_string())?;
        for (p, q) in admissible_pairs(12) {
            let r = verify_adem(&m.ring, &sq, p, q).map_err(|e| e.to_string())?;
            ensure(r.holds(), || format!("{}: Sq^{q} Sq^{p}", m.ring.name()))?;
        }
    }
    for mm in 1..=30 {
        for s in 0..=30 {
            ensure(binomial_identity_check(mm, s), || format!("binomial identity at m={mm}, s={s}"))?;
        }
    }
    for m in common::shipped() {
        let sq = SqTable::new(&m.ring).map_err(|e| e.to_string())?;
        for c in 0..m.ring.dim() {
            let a = Class::single(c);
            let qq = qq_classical(&m.ring, &sq, &a).map_err(|e| e.to_string())?;
            let pre = pullback_preimage(&m.ring, &qq).map_err(|e| format!("{}: {e}", m.ring.name()))?;
            let d = m.ring.degree(c);
            for p in 0..=d {
                for q in 0..=d + p {
                    ensure(reconstruct_from_preimage(&pre, d, p, q) == sq.compose(&a, p, q), || {
                        format!("{}: reconstructed Sq^{q} Sq^{p} {}", m.ring.name(), m.ring.render_basis(c))
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let m = builtins::cpn(2).map_err(|e| e.to_string())?;
    let eng = QsEngine::new(m.quantum.as_ref().unwrap()).map_err(|e| e.to_string())?;
    let r = quantum_adem_defect(&eng, &qt(common::xpow(&m, 1), 0), 2, 2).map_err(|e| e.to_string())?;
    ensure(!r.total.is_zero(), || "CP^2 defect vanishes".into())?;
    ensure(r.energy_part(1) == qt(0, 1), || "CP^2 energy-1 defect is not T".into())?;
    for m in common::quantum_shipped() {
        let eng = QsEngine::new(m.quantum.as_ref().unwrap()).map_err(|e| e.to_string())?;
        for c in 0..m.ring.dim() {
            for (p, q) in admissible_pairs(12) {
                let r = quantum_adem_defect(&eng, &qt(c, 0), p, q).map_err(|e| e.to_string())?;
                ensure(r.energy_part(0).is_zero(), || {
                    format!("{}: energy-0 defect at ({}, {p}, {q})", m.ring.name(), m.ring.render_basis(c))
                })?;
            }
        }
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    for m in common::shipped() {
        let sq = SqTable::new(&m.ring).map_err(|e| e.to_string())?;
        for c in 0..m.ring.dim() {
            for (p, q) in admissible_pairs(12) {
                let ok = energy_zero_identity(&m.ring, &sq, &Class::single(c), p, q).map_err(|e| e.to_string())?;
                ensure(ok, || format!("{} {} ({p}, {q})", m.ring.name(), m.ring.render_basis(c)))?;
            }
        }
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let inhomogeneous = "[manifold]\nname = bad\ntop_degree = 4\n\n[generators]\nx = 2\ny = 2\n\n[relations]\nx^2\ny^2 + x\n";
    match parse_spec(inhomogeneous) {
        Err(e) => ensure(e.line == 11, || format!("inhomogeneous relation reported at line {}", e.line))?,
        Ok(_) => return Err("inhomogeneous spec accepted".into()),
    }

    let m = builtins::cpn(2).map_err(|e| e.to_string())?;
    let q = m.quantum.as_ref().unwrap();
    let mut cs = q.constants();
    let (x, x2) = (common::xpow(&m, 1), common::xpow(&m, 2));
    for c in cs.iter_mut().filter(|c| c.k == 1 && c.a == x && c.b == x2) {
        c.out = x;
    }
    let bad = QuantumStructure::from_constants(m.ring.clone(), q.minimal_chern(), q.curves().to_vec(), cs)
        .map_err(|e| e.to_string())?;
    ensure(validate_quantum(&bad).is_err(), || "corrupted constants validated".into())?;

    let gens = ["x", "y", "z"].map(|g| Generator::new(g, 2)).to_vec();
    let rels = ["x^2 + y^2 + y*z", "y^2 + x*z + z^2", "x^2 + x*y + y^2 + y*z + z^2"];
    let text = format!(
        "[manifold]\nname = open\ntop_degree = 6\n\n[generators]\nx = 2\ny = 2\nz = 2\n\n[relations]\n{}\n",
        rels.join("\n")
    );
    let spec = parse_spec(&text).map_err(|e| e.to_string())?;
    let ring = RingPresentation::new("open", gens, spec.relations, 6).map_err(|e| e.to_string())?;
    ensure(matches!(check_relation_closure(&ring), Err(SqError::NotClosed { .. })), || {
        "non-closed ideal passed the closure check".into()
    })?;
    ensure(SqTable::new(&ring).is_err(), || "Sq table built on a non-closed ideal".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 CP^n explicit tables", LIMIT_FAST, criterion_1),
        ("2 closed form, recurrence and engine agree", LIMIT_ORACLES, criterion_2),
        ("3 CP^n correction values", LIMIT_ORACLES, criterion_3),
        ("4 quantum Cartan relation", LIMIT_ORACLES, criterion_4),
        ("5 classical Steenrod squares", LIMIT_ORACLES, criterion_5),
        ("6 Stiefel-Whitney classes", LIMIT_ORACLES, criterion_6),
        ("7 Adem relations and pullback", LIMIT_ADEM, criterion_7),
        ("8 quantum Adem defect", LIMIT_ADEM, criterion_8),
        ("9 energy-zero qq identity", LIMIT_ADEM, criterion_9),
        ("10 malformed input rejected", LIMIT_FAST, criterion_10),
    ];
    let mut failed = 0;
    for (name, limit, f) in criteria {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let res = res.and_then(|()| {
            ensure(took <= limit, || format!("took {:.2}s, limit {}s", took.as_secs_f64(), limit.as_secs()))
        });
        match res {
            Ok(()) => println!("PASS {name} ({:.3}s)", took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {name} ({:.3}s): {why}", took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
