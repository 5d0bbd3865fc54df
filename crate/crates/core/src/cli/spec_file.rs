//! Sectioned text format describing a manifold's cohomology and quantum data.
//!
//! ```text
//! [manifold]
//! name = cp2
//! top_degree = 4
//! minimal_chern = 3
//!
//! [generators]
//! x = 2
//!
//! [relations]
//! x^3
//!
//! [h2]
//! line: c1=3 x=1
//!
//! [quantum]
//! x, x^2 -> 1 via line k=1
//! ```
//!
//! A quantum line `a, b -> out via label k=K` lists one structure constant;
//! `a, b -> out classical` lists an energy-zero one.

use crate::gf2_poly::{Gf2Poly, Monomial};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    pub label: String,
    pub chern: u32,
    pub intersections: Vec<(String, u8)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantSpec {
    pub a: Monomial,
    pub b: Monomial,
    pub out: Monomial,
    /// `None` for an energy-zero constant.
    pub curve: Option<String>,
    pub k: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldSpec {
    pub name: String,
    pub top_degree: u32,
    pub minimal_chern: Option<u32>,
    pub generators: Vec<(String, u32)>,
    pub relations: Vec<Gf2Poly>,
    pub curves: Vec<CurveSpec>,
    pub constants: Vec<ConstantSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Caret,
    Plus,
    Star,
}

/// Tokens with their 1-based columns.
fn tokenize(src: &str, line: usize, col0: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[s..i].iter().collect()), col));
        } else if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[s..i].iter().collect();
            let v = text
                .parse()
                .map_err(|_| ParseError::new(line, col, format!("integer `{text}` out of range")))?;
            out.push((Tok::Int(v), col));
        } else {
            let t = match c {
                '^' => Tok::Caret,
                '+' => Tok::Plus,
                '*' => Tok::Star,
                _ => return Err(ParseError::new(line, col, format!("unexpected character `{c}`"))),
            };
            out.push((t, col));
            i += 1;
        }
    }
    Ok(out)
}

/// A parsed term: parity of the integer coefficient and `(name, exponent, column)` factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermAst {
    pub odd: bool,
    pub factors: Vec<(String, u32, usize)>,
}

/// Parse `term (+ term)*` where `term = factor (* factor)*` and
/// `factor = ident [^ int] | int`.
pub fn parse_poly_ast(src: &str, line: usize, col0: usize) -> Result<Vec<TermAst>, ParseError> {
    let toks = tokenize(src, line, col0)?;
    let end_col = col0 + src.chars().count();
    if toks.is_empty() {
        return Err(ParseError::new(line, col0, "expected a polynomial"));
    }
    let mut terms = Vec::new();
    let mut i = 0;
    let err_at = |i: usize, msg: &str| {
        let col = toks.get(i).map_or(end_col, |t| t.1);
        ParseError::new(line, col, msg)
    };
    loop {
        let mut term = TermAst {
            odd: true,
            factors: Vec::new(),
        };
        loop {
            match toks.get(i) {
                Some((Tok::Ident(name), col)) => {
                    i += 1;
                    let mut e = 1u32;
                    if let Some((Tok::Caret, _)) = toks.get(i) {
                        i += 1;
                        match toks.get(i) {
                            Some((Tok::Int(v), ecol)) => {
                                e = u32::try_from(*v)
                                    .map_err(|_| ParseError::new(line, *ecol, "exponent too large"))?;
                                i += 1;
                            }
                            _ => return Err(err_at(i, "expected an integer exponent after `^`")),
                        }
                    }
                    term.factors.push((name.clone(), e, *col));
                }
                Some((Tok::Int(v), _)) => {
                    i += 1;
                    term.odd &= v % 2 == 1;
                }
                _ => return Err(err_at(i, "expected a generator name or integer")),
            }
            match toks.get(i) {
                Some((Tok::Star, _)) => i += 1,
                _ => break,
            }
        }
        terms.push(term);
        match toks.get(i) {
            None => break,
            Some((Tok::Plus, _)) => i += 1,
            Some(_) => return Err(err_at(i, "expected `+`, `*` or end of input")),
        }
    }
    Ok(terms)
}

/// Resolve parsed terms against generator names.
pub fn resolve_poly(terms: &[TermAst], gens: &[String], line: usize) -> Result<Gf2Poly, ParseError> {
    let n = gens.len();
    let mut p = Gf2Poly::zero(n);
    for t in terms {
        if !t.odd {
            continue;
        }
        let mut e = vec![0u32; n];
        for (name, exp, col) in &t.factors {
            let i = gens
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| ParseError::new(line, *col, format!("unknown generator `{name}`")))?;
            e[i] += exp;
        }
        let m = Monomial::from_exponents(&e).map_err(|er| ParseError::new(line, 1, er.to_string()))?;
        p.toggle(m);
    }
    Ok(p)
}

fn resolve_monomial(src: &str, gens: &[String], line: usize, col0: usize) -> Result<Monomial, ParseError> {
    let ast = parse_poly_ast(src, line, col0)?;
    if ast.len() != 1 || !ast[0].odd {
        return Err(ParseError::new(line, col0, "expected a single monomial"));
    }
    let p = resolve_poly(&ast, gens, line)?;
    let m = p.terms().next().unwrap().clone();
    Ok(m)
}

pub fn render_monomial(m: &Monomial, gens: &[String]) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { gens[i].clone() } else { format!("{}^{e}", gens[i]) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub fn render_poly(p: &Gf2Poly, gens: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    p.terms()
        .rev()
        .map(|m| render_monomial(m, gens))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

fn parse_u32(v: &str, line: usize, col: usize) -> Result<u32, ParseError> {
    v.trim()
        .parse()
        .map_err(|_| ParseError::new(line, col, format!("expected a non-negative integer, got `{}`", v.trim())))
}

/// Column (1-based) of byte offset `off` in `line`.
fn col_of(line: &str, off: usize) -> usize {
    line[..off].chars().count() + 1
}

/// Parse the spec format. Relations are checked for homogeneity here so the
/// diagnostic can point at the offending line.
pub fn parse_spec(text: &str) -> Result<ManifoldSpec, ParseError> {
    let mut sections: BTreeMap<&str, Vec<(usize, &str)>> = BTreeMap::new();
    let mut current: Option<&str> = None;
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let body = raw.split('#').next().unwrap();
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| {
                ParseError::new(ln, col_of(raw, raw.len() - raw.trim_start().len()), "unterminated section header")
            })?;
            let name = name.trim();
            let known = ["manifold", "generators", "relations", "h2", "quantum"];
            let Some(&k) = known.iter().find(|&&k| k == name) else {
                return Err(ParseError::new(ln, 1, format!("unknown section `{name}`")));
            };
            if sections.contains_key(k) {
                return Err(ParseError::new(ln, 1, format!("duplicate section `{name}`")));
            }
            sections.insert(k, Vec::new());
            current = Some(k);
            continue;
        }
        let Some(sec) = current else {
            return Err(ParseError::new(ln, 1, "content before the first section header"));
        };
        sections.get_mut(sec).unwrap().push((ln, body));
    }

    let mut name = None;
    let mut top = None;
    let mut chern = None;
    for &(ln, line) in sections.get("manifold").map(|v| v.as_slice()).unwrap_or(&[]) {
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ParseError::new(ln, 1, "expected `key = value`"))?;
        let vcol = col_of(line, k.len() + 1);
        match k.trim() {
            "name" => name = Some(v.trim().to_string()),
            "top_degree" => top = Some(parse_u32(v, ln, vcol)?),
            "minimal_chern" => chern = Some(parse_u32(v, ln, vcol)?),
            other => return Err(ParseError::new(ln, 1, format!("unknown key `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| ParseError::new(1, 1, "missing `name` in [manifold]"))?;
    let top_degree = top.ok_or_else(|| ParseError::new(1, 1, "missing `top_degree` in [manifold]"))?;

    let mut generators = Vec::new();
    for &(ln, line) in sections.get("generators").map(|v| v.as_slice()).unwrap_or(&[]) {
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ParseError::new(ln, 1, "expected `name = degree`"))?;
        let g = k.trim();
        let gcol = col_of(line, line.len() - line.trim_start().len());
        if !is_ident(g) || g == "T" || g == "h" {
            return Err(ParseError::new(ln, gcol, format!("invalid generator name `{g}`")));
        }
        if generators.iter().any(|(n, _): &(String, u32)| n == g) {
            return Err(ParseError::new(ln, gcol, format!("duplicate generator `{g}`")));
        }
        let d = parse_u32(v, ln, col_of(line, k.len() + 1))?;
        if d == 0 {
            return Err(ParseError::new(ln, col_of(line, k.len() + 1), "generator degree must be positive"));
        }
        generators.push((g.to_string(), d));
    }
    let gen_names: Vec<String> = generators.iter().map(|g| g.0.clone()).collect();
    let weights: Vec<u32> = generators.iter().map(|g| g.1).collect();

    let mut relations = Vec::new();
    for &(ln, line) in sections.get("relations").map(|v| v.as_slice()).unwrap_or(&[]) {
        let c0 = col_of(line, line.len() - line.trim_start().len());
        let ast = parse_poly_ast(line.trim(), ln, c0)?;
        let p = resolve_poly(&ast, &gen_names, ln)?;
        if !p.is_homogeneous(&weights) {
            return Err(ParseError::new(ln, c0, "relation is not homogeneous"));
        }
        if p.is_zero() {
            return Err(ParseError::new(ln, c0, "relation is zero"));
        }
        relations.push(p);
    }

    let mut curves = Vec::new();
    for &(ln, line) in sections.get("h2").map(|v| v.as_slice()).unwrap_or(&[]) {
        let (label, rest) = line
            .split_once(':')
            .ok_or_else(|| ParseError::new(ln, 1, "expected `label: c1=N gen=0|1 ...`"))?;
        let label = label.trim();
        if !is_ident(label) {
            return Err(ParseError::new(ln, 1, format!("invalid curve label `{label}`")));
        }
        let mut c1 = None;
        let mut inter = Vec::new();
        let mut off = label.len() + 1;
        for item in rest.split_whitespace() {
            let pos = line[off..].find(item).unwrap() + off;
            off = pos + item.len();
            let col = col_of(line, pos);
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| ParseError::new(ln, col, "expected `key=value`"))?;
            let val = parse_u32(v, ln, col)?;
            if k == "c1" {
                c1 = Some(val);
            } else if gen_names.iter().any(|g| g == k) {
                inter.push((k.to_string(), (val % 2) as u8));
            } else {
                return Err(ParseError::new(ln, col, format!("unknown generator `{k}`")));
            }
        }
        let chern = c1.ok_or_else(|| ParseError::new(ln, 1, "missing `c1=`"))?;
        curves.push(CurveSpec {
            label: label.to_string(),
            chern,
            intersections: inter,
        });
    }

    let mut constants = Vec::new();
    for &(ln, line) in sections.get("quantum").map(|v| v.as_slice()).unwrap_or(&[]) {
        let (lhs, rhs) = line
            .split_once("->")
            .ok_or_else(|| ParseError::new(ln, 1, "expected `a, b -> out ...`"))?;
        let (a_src, b_src) = lhs
            .split_once(',')
            .ok_or_else(|| ParseError::new(ln, 1, "expected `a, b` before `->`"))?;
        let a = resolve_monomial(a_src.trim(), &gen_names, ln, col_of(line, lhs.find(a_src.trim()).unwrap_or(0)))?;
        let b_off = a_src.len() + 1;
        let b = resolve_monomial(
            b_src.trim(),
            &gen_names,
            ln,
            col_of(line, b_off + b_src.len() - b_src.trim_start().len()),
        )?;
        let rhs_off = lhs.len() + 2;
        let words: Vec<&str> = rhs.split_whitespace().collect();
        let (out_src, curve, k) = if let Some(pos) = words.iter().position(|w| *w == "via") {
            let label = words
                .get(pos + 1)
                .ok_or_else(|| ParseError::new(ln, col_of(line, rhs_off), "expected a curve label after `via`"))?;
            if !curves.iter().any(|c: &CurveSpec| c.label == *label) {
                let col = col_of(line, rhs_off + rhs.find(label).unwrap());
                return Err(ParseError::new(ln, col, format!("unknown curve `{label}`")));
            }
            let kw = words.get(pos + 2).and_then(|w| w.strip_prefix("k=")).ok_or_else(|| {
                ParseError::new(ln, col_of(line, rhs_off), "expected `k=<energy>` after the curve label")
            })?;
            let k = parse_u32(kw, ln, col_of(line, rhs_off))?;
            if k == 0 {
                return Err(ParseError::new(ln, col_of(line, rhs_off), "quantum constants need k >= 1"));
            }
            if words.len() > pos + 3 {
                return Err(ParseError::new(ln, col_of(line, rhs_off), "trailing input"));
            }
            (words[..pos].join(" "), Some(label.to_string()), k)
        } else if words.last() == Some(&"classical") {
            (words[..words.len() - 1].join(" "), None, 0)
        } else {
            return Err(ParseError::new(
                ln,
                col_of(line, rhs_off),
                "expected `via <curve> k=<energy>` or `classical`",
            ));
        };
        let out = resolve_monomial(&out_src, &gen_names, ln, col_of(line, rhs_off))?;
        constants.push(ConstantSpec { a, b, out, curve, k });
    }

    Ok(ManifoldSpec {
        name,
        top_degree,
        minimal_chern: chern,
        generators,
        relations,
        curves,
        constants,
    })
}

/// Render in the format accepted by [`parse_spec`].
pub fn render_spec(spec: &ManifoldSpec) -> String {
    spec.to_string()
}

impl fmt::Display for ManifoldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.0.clone()).collect();
        writeln!(f, "[manifold]")?;
        writeln!(f, "name = {}", self.name)?;
        writeln!(f, "top_degree = {}", self.top_degree)?;
        if let Some(n) = self.minimal_chern {
            writeln!(f, "minimal_chern = {n}")?;
        }
        writeln!(f, "\n[generators]")?;
        for (g, d) in &self.generators {
            writeln!(f, "{g} = {d}")?;
        }
        writeln!(f, "\n[relations]")?;
        for r in &self.relations {
            writeln!(f, "{}", render_poly(r, &gens))?;
        }
        if !self.curves.is_empty() {
            writeln!(f, "\n[h2]")?;
            for c in &self.curves {
                write!(f, "{}: c1={}", c.label, c.chern)?;
                for (g, v) in &c.intersections {
                    write!(f, " {g}={v}")?;
                }
                writeln!(f)?;
            }
        }
        if !self.constants.is_empty() {
            writeln!(f, "\n[quantum]")?;
            for c in &self.constants {
                let a = render_monomial(&c.a, &gens);
                let b = render_monomial(&c.b, &gens);
                let o = render_monomial(&c.out, &gens);
                match &c.curve {
                    Some(l) => writeln!(f, "{a}, {b} -> {o} via {l} k={}", c.k)?,
                    None => writeln!(f, "{a}, {b} -> {o} classical")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CP2: &str = "\
[manifold]
name = cp2
top_degree = 4
minimal_chern = 3

[generators]
x = 2   # hyperplane

[relations]
x^3

[h2]
line: c1=3 x=1

[quantum]
x, x^2 -> 1 via line k=1
";

    #[test]
    fn parses_cp2() {
        let s = parse_spec(CP2).unwrap();
        assert_eq!(s.generators, vec![("x".to_string(), 2)]);
        assert_eq!(s.constants.len(), 1);
        assert_eq!(s.constants[0].k, 1);
        assert_eq!(parse_spec(&render_spec(&s)).unwrap(), s);
    }

    #[test]
    fn inhomogeneous_relation_points_at_line() {
        let text = CP2.replace("x^3", "x^2 + y").replace("x = 2   # hyperplane", "x = 2\ny = 2");
        let e = parse_spec(&text).unwrap_err();
        assert_eq!((e.line, e.col), (11, 1));
        assert!(e.message.contains("homogeneous"), "{e}");
    }

    #[test]
    fn unknown_generator_column() {
        let e = parse_spec(&CP2.replace("x^3", "x^2*z")).unwrap_err();
        assert_eq!((e.line, e.col), (10, 5));
        assert!(e.message.contains("unknown generator `z`"));
    }

    #[test]
    fn syntax_error_column() {
        let e = parse_spec(&CP2.replace("x^3", "x^^3")).unwrap_err();
        assert_eq!((e.line, e.col), (10, 3));
    }

    #[test]
    fn coefficients_reduce_mod_two() {
        let ast = parse_poly_ast("2*x + 3*x*y + x*y", 1, 1).unwrap();
        let p = resolve_poly(&ast, &["x".into(), "y".into()], 1).unwrap();
        assert!(p.is_zero());
    }
}
