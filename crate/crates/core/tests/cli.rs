use qsteenrod::builtins::{builtin_spec, cpn_spec, m05bar_spec, p1_power_spec, point_spec};
use qsteenrod::cli::{parse_spec, render_spec, run_command, EXIT_INPUT, EXIT_OK, EXIT_VERIFY};
use std::process::Command;

fn run(args: &[&str]) -> qsteenrod::cli::CommandOutput {
    run_command(args.iter().copied())
}

fn tmp_spec(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("qsq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const BUILTINS: &[&str] = &[
    "cpn:1", "cpn:2", "cpn:3", "cpn:4", "cpn:5", "cpn:6", "cpn:7", "cpn:8", "cpn:9", "cpn:10", "p1xp1", "p1cubed",
    "m05bar", "point",
];

#[test]
fn explicit_tables_print_verbatim() {
    let out = run(&["qs", "cpn:1"]);
    assert_eq!(out.stdout, "QS(1) = 1\nQS(x) = x h^2 + T\n");
    assert_eq!(run(&["qs", "cpn:1", "T"]).stdout, "QS(T) = T^2\n");
    let out = run(&["qs", "cpn:2"]).stdout;
    assert!(out.contains("QS(x) = x h^2 + x^2\n"));
    assert!(out.contains("QS(x^2) = x^2 h^4 + T h^2 + x T\n"));
    let out = run(&["qs", "cpn:3"]).stdout;
    assert!(out.contains("QS(x^2) = x^2 h^4 + T\n"));
    assert!(out.contains("QS(x^3) = x^3 h^6 + T h^4 + x T h^2 + x^2 T\n"));
}

#[test]
fn every_builtin_passes_verification() {
    for m in BUILTINS {
        let c = run(&["verify", "cartan", m]);
        assert_eq!(c.code, EXIT_OK, "{m}: {}{}", c.stdout, c.stderr);
        assert!(c.stdout.ends_with("PASS\n"));
        let a = run(&["verify", "adem", m, "--pmax", "6"]);
        assert_eq!(a.code, EXIT_OK, "{m}: {}{}", a.stdout, a.stderr);
        assert!(!a.stdout.contains("FAIL"));
    }
}

#[test]
fn cp1_cartan_reports_correction() {
    let out = run(&["verify", "cartan", "cpn:1"]);
    assert!(out.stdout.contains("correction T h^4 at (x, x)"));
}

#[test]
fn cp2_defect_contains_t() {
    let out = run(&["defect", "cpn:2", "x", "2", "2"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("defect = T\n"));
    assert!(out.stdout.contains("energy 0: 0\n"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["qs", "p1cubed"],
        vec!["table", "m05bar", "--format", "json"],
        vec!["verify", "cartan", "p1xp1"],
        vec!["qq", "cpn:3", "x^2"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a, b);
    }
}

#[test]
fn table_formats() {
    let csv = run(&["table", "cpn:1", "--format", "csv"]).stdout;
    assert_eq!(csv, "input,class,h,t,coeff\n1,1,0,0,1\nx,1,0,1,1\nx,x,2,0,1\n");
    let json = run(&["table", "cpn:2", "x^2", "--format", "json"]).stdout;
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert_eq!(r["coeff"], 1);
        assert!(r.get("input").is_none());
    }
    let text = run(&["table", "cpn:1"]).stdout;
    assert!(text.starts_with("input  class  h  t  coeff\n"));
}

#[test]
fn spec_round_trip_for_builtins() {
    let mut specs = vec![m05bar_spec(), point_spec(), p1_power_spec(2), p1_power_spec(3)];
    specs.extend((1..=10).map(cpn_spec));
    for s in specs {
        let text = render_spec(&s);
        assert_eq!(parse_spec(&text).unwrap(), s, "{text}");
        assert_eq!(render_spec(&parse_spec(&text).unwrap()), text);
    }
    assert!(builtin_spec("cpn:11").is_none());
    assert!(builtin_spec("cpn:0").is_none());
}

#[test]
fn spec_file_loads_like_builtin() {
    let text = run(&["spec", "p1xp1"]).stdout;
    let path = tmp_spec("p1xp1.qsq", &text);
    let from_file = run(&["qs", path.to_str().unwrap()]);
    assert_eq!(from_file.code, EXIT_OK);
    assert_eq!(from_file.stdout, run(&["qs", "p1xp1"]).stdout);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["qs", "nowhere"]).code, EXIT_INPUT);
    assert_eq!(run(&["qs", "cpn:2", "y"]).code, EXIT_INPUT);
    assert_eq!(run(&["qs", "cpn:2", "x + x^2"]).code, EXIT_INPUT);
    assert_eq!(run(&["sq", "cpn:2", "T"]).code, EXIT_INPUT);
    assert_eq!(run(&["frobnicate"]).code, EXIT_INPUT);
    assert_eq!(run(&["defect", "cpn:2", "x", "1", "2"]).code, EXIT_INPUT);
    assert_eq!(run(&["table", "cpn:2", "--format", "xml"]).code, EXIT_INPUT);
}

#[test]
fn inhomogeneous_spec_reports_position() {
    let text = "[manifold]\nname = bad\ntop_degree = 4\n\n[generators]\nx = 2\ny = 2\n\n[relations]\nx^2\ny^2 + x\n";
    let path = tmp_spec("bad.qsq", text);
    let out = run(&["sq", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("bad.qsq:11:1:"), "{}", out.stderr);
}

#[test]
fn invalid_quantum_spec_is_an_input_error() {
    let text = "[manifold]\nname = bad\ntop_degree = 2\nminimal_chern = 2\n\n[generators]\nx = 2\n\n[relations]\nx^2\n\n[h2]\nline: c1=2 x=1\n\n[quantum]\nx, x -> x via line k=1\n";
    let path = tmp_spec("badq.qsq", text);
    let out = run(&["qs", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT, "{}{}", out.stdout, out.stderr);
}

#[test]
fn non_closed_ring_is_rejected() {
    let text = "[manifold]\nname = open\ntop_degree = 6\n\n[generators]\nx = 2\ny = 2\nz = 2\n\n[relations]\nx^2 + y^2 + y*z\ny^2 + x*z + z^2\nx^2 + x*y + y^2 + y*z + z^2\n";
    let path = tmp_spec("open.qsq", text);
    let out = run(&["sq", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("is not closed under Sq"), "{}", out.stderr);
}

#[test]
fn qq_reports_preimages() {
    let out = run(&["qq", "cpn:2", "x"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("QQ(x) = x e^2 s2^2 + x^2 s2^2 + x^2 e^4"));
    assert!(out.stdout.contains("preimage of x part: c3^2"));
    assert!(out.stdout.contains("preimage of x^2 part: n2^2"));
}

#[test]
fn binary_exit_codes_and_truncation_override() {
    let bin = env!("CARGO_BIN_EXE_qsq");
    let ok = Command::new(bin).args(["qs", "cpn:1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "QS(1) = 1\nQS(x) = x h^2 + T\n");

    let bad = Command::new(bin).args(["qs", "nowhere"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INPUT));
    assert!(!bad.stderr.is_empty());

    // With no T powers kept, QS(x) on CP^1 loses its T term.
    let cut = Command::new(bin).env("QSQ_JMAX", "0").args(["qs", "cpn:1", "x"]).output().unwrap();
    assert_eq!(String::from_utf8_lossy(&cut.stdout), "QS(x) = x h^2\n");
    let junk = Command::new(bin).env("QSQ_JMAX", "lots").args(["qs", "cpn:1"]).output().unwrap();
    assert_eq!(junk.status.code(), Some(EXIT_INPUT));
}

#[test]
fn wrong_intersection_number_fails_cartan() {
    let text = render_spec(&cpn_spec(1)).replace("c1=2 x=1", "c1=2 x=0");
    assert!(text.contains("x=0"));
    let path = tmp_spec("cp1-wrong.qsq", &text);
    let out = run(&["verify", "cartan", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_VERIFY, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("FAIL (x, x): mismatch T h^4"), "{}", out.stdout);
}
