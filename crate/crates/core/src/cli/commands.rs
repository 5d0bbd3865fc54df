use super::report::{Format, ReportRow, ReportTable};
use super::spec_file::{parse_poly_ast, parse_spec, resolve_poly};
use crate::adem::{self, admissible_pairs};
use crate::builtins::{builtin_spec, BUILTIN_NAMES};
use crate::gf2_poly::Gf2Poly;
use crate::manifold::Manifold;
use crate::qsteenrod::{qt_degree, QsEngine};
use crate::quantum_model::{qt_of_class, HTElement, QTElement, QTerm, QuantumStructure};
use crate::ring_model::{collapse_h, stiefel_whitney, wu_class, Class, RingPresentation};
use crate::steenrod::SqTable;
use clap::{Parser, Subcommand};
use std::fmt::Write as _;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable overriding the T-exponent truncation.
pub const JMAX_VAR: &str = "QSQ_JMAX";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Parser, Debug)]
#[command(name = "qsq", about = "Classical and quantum Steenrod squares on small cohomology rings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Total Steenrod square of a class, or of every basis class.
    Sq { manifold: String, class: Option<String> },
    /// Quantum Steenrod square of a class (may involve T), or of every basis class.
    Qs { manifold: String, class: Option<String> },
    /// h-graded Wu class.
    Wu { manifold: String },
    /// Total Stiefel-Whitney class.
    Sw { manifold: String },
    /// Quantum Stiefel-Whitney class.
    Qsw { manifold: String },
    /// Classical QQ of a class and its preimage under the pullback.
    Qq { manifold: String, class: String },
    /// Check identities.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Quantum Adem defect of Sq^q Sq^p on a class.
    Defect { manifold: String, class: String, p: u32, q: u32 },
    /// Table of QS; on ring-only manifolds this is Sq.
    Table {
        manifold: String,
        class: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print a manifold in the file format accepted by the other commands.
    Spec { manifold: String },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Quantum Cartan relation for every basis class and degree-2 class.
    Cartan { manifold: String },
    /// Adem relations Sq^q Sq^p with p <= pmax and q < 2p.
    Adem {
        manifold: String,
        #[arg(long, default_value_t = 6)]
        pmax: u32,
    },
}

struct InputError(String);

type CmdResult = Result<(String, i32), InputError>;

/// Load a built-in by name or a spec file by path.
pub fn load_manifold(name: &str) -> Result<Manifold, String> {
    let spec = match builtin_spec(name) {
        Some(s) => s,
        None => {
            let text = std::fs::read_to_string(name).map_err(|e| {
                format!(
                    "`{name}` is neither a built-in ({}) nor a readable file: {e}",
                    BUILTIN_NAMES.join(", ")
                )
            })?;
            parse_spec(&text).map_err(|e| format!("{name}:{}:{}: {}", e.line, e.col, e.message))?
        }
    };
    let mut m = Manifold::from_spec(spec).map_err(|e| format!("{name}: {e}"))?;
    if let (Ok(v), Some(q)) = (std::env::var(JMAX_VAR), m.quantum.as_mut()) {
        let j: u32 = v
            .trim()
            .parse()
            .map_err(|_| format!("{JMAX_VAR} must be a non-negative integer, got `{v}`"))?;
        q.set_j_max(j);
    }
    Ok(m)
}

/// Parse a class such as `x^2 + y` or `x*T^2`. `T` is accepted when
/// `allow_t` is set.
pub fn parse_class(ring: &RingPresentation, src: &str, allow_t: bool) -> Result<QTElement, String> {
    let mut names: Vec<String> = ring.generators().iter().map(|g| g.name.clone()).collect();
    let t_index = names.len();
    if allow_t {
        names.push("T".into());
    }
    let ast = parse_poly_ast(src, 1, 1).map_err(|e| format!("column {}: {}", e.col, e.message))?;
    let p = resolve_poly(&ast, &names, 1).map_err(|e| format!("column {}: {}", e.col, e.message))?;
    let ng = ring.ngens();
    let mut out = QTElement::zero();
    for m in p.terms() {
        let t = if allow_t { m.exponent(t_index) } else { 0 };
        let base = if allow_t { m.truncate(ng) } else { m.clone() };
        for &c in &ring.class_of_poly(&Gf2Poly::monomial(base)) {
            out.toggle(QTerm { class: c, t });
        }
    }
    Ok(out)
}

fn sq_table(m: &Manifold) -> Result<SqTable, InputError> {
    SqTable::new(&m.ring).map_err(|e| InputError(format!("{}: {e}", m.ring.name())))
}


fn classical_input(m: &Manifold, src: &str) -> Result<Class, InputError> {
    let e = parse_class(&m.ring, src, false).map_err(InputError)?;
    let c: Class = e.map(|t| t.class);
    if !c.is_zero() && m.ring.class_degree(&c).is_none() {
        return Err(InputError(format!("class `{src}` is not homogeneous")));
    }
    Ok(c)
}

fn quantum_input(q: &QuantumStructure, src: &str) -> Result<QTElement, InputError> {
    let e = parse_class(q.ring(), src, true).map_err(InputError)?;
    if !e.is_zero() && qt_degree(q, &e).is_none() {
        return Err(InputError(format!("class `{src}` is not homogeneous")));
    }
    Ok(e)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn ht_rows(ring: &RingPresentation, input: Option<String>, e: &HTElement) -> Vec<ReportRow> {
    let mut terms: Vec<_> = e.iter().collect();
    terms.sort_by_key(|t| (t.class, t.h, t.t));
    terms
        .into_iter()
        .map(|t| ReportRow {
            input: input.clone(),
            class: ring.render_basis(t.class),
            h: t.h,
            t: t.t,
            coeff: 1,
        })
        .collect()
}

fn execute(cmd: Cmd) -> CmdResult {
    let load = |name: &str| load_manifold(name).map_err(InputError);
    let mut out = String::new();
    match cmd {
        Cmd::Sq { manifold, class } => {
            let m = load(&manifold)?;
            let sq = sq_table(&m)?;
            match class {
                Some(src) => {
                    let c = classical_input(&m, &src)?;
                    writeln!(out, "Sq({src}) = {}", m.ring.render_h(&sq.sq(&c))).unwrap();
                }
                None => {
                    for c in 0..m.ring.dim() {
                        let e = sq.sq_basis(c);
                        writeln!(out, "Sq({}) = {}", m.ring.render_basis(c), m.ring.render_h(e)).unwrap();
                    }
                }
            }
        }
        Cmd::Qs { manifold, class } => {
            let m = load(&manifold)?;
            let q = &m.quantum_or_classical();
            let eng = QsEngine::new(q).map_err(|e| InputError(e.to_string()))?;
            match class {
                Some(src) => {
                    let a = quantum_input(q, &src)?;
                    writeln!(out, "QS({src}) = {}", q.render_ht(&eng.qs(&a))).unwrap();
                }
                None => {
                    for c in 0..m.ring.dim() {
                        writeln!(out, "QS({}) = {}", m.ring.render_basis(c), q.render_ht(eng.qs_basis(c))).unwrap();
                    }
                }
            }
        }
        Cmd::Wu { manifold } => {
            let m = load(&manifold)?;
            let sq = sq_table(&m)?;
            let v = wu_class(&m.ring, &sq);
            writeln!(out, "v = {}", m.ring.render_h(&v)).unwrap();
            writeln!(out, "v at h = 1: {}", m.ring.render_class(&collapse_h(&v))).unwrap();
        }
        Cmd::Sw { manifold } => {
            let m = load(&manifold)?;
            let sq = sq_table(&m)?;
            let w = stiefel_whitney(&m.ring, &sq);
            writeln!(out, "w = {}", m.ring.render_h(&w)).unwrap();
            writeln!(out, "w at h = 1: {}", m.ring.render_class(&collapse_h(&w))).unwrap();
        }
        Cmd::Qsw { manifold } => {
            let m = load(&manifold)?;
            let q = &m.quantum_or_classical();
            let sq = sq_table(&m)?;
            let eng = QsEngine::new(q).map_err(|e| InputError(e.to_string()))?;
            let wq = eng.quantum_stiefel_whitney(&sq);
            let w = stiefel_whitney(&m.ring, &sq);
            let w_ht: HTElement = w.map(|t| crate::quantum_model::HTTerm {
                class: t.class,
                t: 0,
                h: t.h,
            });
            writeln!(out, "w_Q = {}", q.render_ht(&wq)).unwrap();
            writeln!(out, "equals w: {}", yes_no(wq == w_ht)).unwrap();
            if m.quantum.is_some() {
                writeln!(out, "N > dim/2: {}", yes_no(2 * q.minimal_chern() > m.ring.top_degree())).unwrap();
            }
        }
        Cmd::Qq { manifold, class } => {
            let m = load(&manifold)?;
            let sq = sq_table(&m)?;
            let c = classical_input(&m, &class)?;
            let qq = adem::qq_classical(&m.ring, &sq, &c).map_err(|e| InputError(e.to_string()))?;
            writeln!(out, "QQ({class}) = {}", adem::render_qq(&m.ring, &qq)).unwrap();
            match adem::pullback_preimage(&m.ring, &qq) {
                Ok(pre) => {
                    let names = ["n1".to_string(), "n2".to_string(), "c3".to_string()];
                    for (cl, p) in pre {
                        writeln!(
                            out,
                            "preimage of {} part: {}",
                            m.ring.render_basis(cl),
                            super::spec_file::render_poly(&p, &names)
                        )
                        .unwrap();
                    }
                }
                Err(e) => {
                    writeln!(out, "not in the image: {e}").unwrap();
                    return Ok((out, EXIT_VERIFY));
                }
            }
        }
        Cmd::Verify { what: VerifyCmd::Cartan { manifold } } => {
            let m = load(&manifold)?;
            let q = &m.quantum_or_classical();
            let eng = QsEngine::new(q).map_err(|e| InputError(e.to_string()))?;
            let mut ok = true;
            for x in m.ring.basis_in_degree(2) {
                for b in 0..m.ring.dim() {
                    let bq = qt_of_class(&Class::single(b));
                    let r = eng
                        .verify_quantum_cartan(&bq, &Class::single(x))
                        .map_err(|e| InputError(e.to_string()))?;
                    let pair = format!("({}, {})", m.ring.render_basis(b), m.ring.render_basis(x));
                    if r.holds() {
                        writeln!(out, "PASS {pair}").unwrap();
                    } else {
                        ok = false;
                        writeln!(out, "FAIL {pair}: mismatch {}", q.render_ht(&r.mismatch)).unwrap();
                    }
                    if !r.correction.is_zero() {
                        writeln!(out, "  correction {} at {pair}", q.render_ht(&r.correction)).unwrap();
                    }
                }
            }
            writeln!(out, "{}", if ok { "PASS" } else { "FAIL" }).unwrap();
            return Ok((out, if ok { EXIT_OK } else { EXIT_VERIFY }));
        }
        Cmd::Verify {
            what: VerifyCmd::Adem { manifold, pmax },
        } => {
            let m = load(&manifold)?;
            let sq = sq_table(&m)?;
            let mut ok = true;
            for (p, q) in admissible_pairs(3 * pmax).into_iter().filter(|&(p, _)| p <= pmax) {
                let r = adem::verify_adem(&m.ring, &sq, p, q).map_err(|e| InputError(e.to_string()))?;
                if r.holds() {
                    writeln!(out, "PASS Sq^{q} Sq^{p}").unwrap();
                } else {
                    ok = false;
                    let names: Vec<String> = r.failures.iter().map(|&c| m.ring.render_basis(c)).collect();
                    writeln!(out, "FAIL Sq^{q} Sq^{p} on {}", names.join(", ")).unwrap();
                }
            }
            writeln!(out, "{}", if ok { "PASS" } else { "FAIL" }).unwrap();
            return Ok((out, if ok { EXIT_OK } else { EXIT_VERIFY }));
        }
        Cmd::Defect { manifold, class, p, q: qq } => {
            let m = load(&manifold)?;
            let q = &m.quantum_or_classical();
            let eng = QsEngine::new(q).map_err(|e| InputError(e.to_string()))?;
            let a = quantum_input(q, &class)?;
            let r = adem::quantum_adem_defect(&eng, &a, p, qq).map_err(|e| InputError(e.to_string()))?;
            writeln!(out, "defect = {}", q.render_qt(&r.total)).unwrap();
            for k in 0..=q.j_max() {
                let part = r.energy_part(k);
                if k == 0 || !part.is_zero() {
                    writeln!(out, "energy {k}: {}", q.render_qt(&part)).unwrap();
                }
            }
        }
        Cmd::Table {
            manifold,
            class,
            format,
        } => {
            let m = load(&manifold)?;
            let mut table = ReportTable::default();
            let q = &m.quantum_or_classical();
            let eng = QsEngine::new(q).map_err(|e| InputError(e.to_string()))?;
            match class {
                Some(src) => {
                    let a = quantum_input(q, &src)?;
                    table.rows = ht_rows(&m.ring, None, &eng.qs(&a));
                }
                None => {
                    for c in 0..m.ring.dim() {
                        table
                            .rows
                            .extend(ht_rows(&m.ring, Some(m.ring.render_basis(c)), eng.qs_basis(c)));
                    }
                }
            }
            out.push_str(&table.render(format));
        }
        Cmd::Spec { manifold } => {
            let m = load(&manifold)?;
            out.push_str(&super::spec_file::render_spec(&m.spec));
        }
    }
    Ok((out, EXIT_OK))
}

/// Run the command line `args` (without the program name).
pub fn run_command<I, S>(args: I) -> CommandOutput
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = std::iter::once("qsq".to_string())
        .chain(args.into_iter().map(Into::into))
        .collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                CommandOutput {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                CommandOutput {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            };
        }
    };
    match execute(cli.cmd) {
        Ok((stdout, code)) => CommandOutput {
            stdout,
            stderr: String::new(),
            code,
        },
        Err(InputError(msg)) => CommandOutput {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: EXIT_INPUT,
        },
    }
}
