//! Text files holding one chain each.
//!
//! ```text
//! format 1
//! carrier box
//! ambient 2
//! dim 2
//! p 2
//! cell 0 1 0 1 1
//! ```
//!
//! The header lists `format`, `carrier` (`abstract`, `box`, `curves` or
//! `simplicial`), then `ambient`, `dim` and an optional `p`. Blank lines and
//! everything after `#` are ignored. Payload lines per carrier:
//!
//! - box: `cell lo1 hi1 ... loN hiN coeff`
//! - curves: `curve id start end mass`
//! - simplicial: `simplex x,y,... ; x,y,... ; coeff`
//! - abstract: `dimension d` followed by `cell id vol` and
//!   `face cell child sign` lines for that dimension, then `coeff cell value`
//!
//! Reals are written in the shortest form that parses back to the same
//! double, so serialization round-trips exactly.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::chain::{validate_complex, Complex, ComplexDescription, ComplexViolation, IntChain, Modulus, RawCell};
use crate::cone::{Simplex, SimplicialChain};
use crate::cubical::{BoxCell, BoxChain};
use crate::onedim::{CurveItem, CurveSystem};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid complex: {0}")]
    Complex(#[from] ComplexViolation),
    #[error("cell label `{0}` cannot be written (empty or contains whitespace or `#`)")]
    BadLabel(String),
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// A chain on an explicitly listed complex; the complex is validated only
/// when [`AbstractChain::build`] is called.
#[derive(Clone, Debug, PartialEq)]
pub struct AbstractChain {
    pub complex: ComplexDescription,
    pub dim: usize,
    pub coeffs: Vec<(String, BigInt)>,
}

impl AbstractChain {
    pub fn from_chain(t: &IntChain) -> Self {
        AbstractChain {
            complex: t.complex().describe(),
            dim: t.dim(),
            coeffs: t
                .iter()
                .map(|(i, g)| (t.complex().cells(t.dim())[i].label().to_string(), g.clone()))
                .collect(),
        }
    }

    pub fn build(&self) -> Result<(Arc<Complex>, IntChain), IoError> {
        let complex = Arc::new(validate_complex(&self.complex)?);
        let chain = IntChain::from_labels(&complex, self.dim, self.coeffs.iter().map(|(l, g)| (l.as_str(), g.clone())))
            .map_err(|e| perr(0, 0, e.to_string()))?;
        Ok((complex, chain))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Abstract(AbstractChain),
    Box(BoxChain),
    Curves(CurveSystem),
    Simplicial(SimplicialChain),
}

impl Payload {
    pub fn carrier(&self) -> &'static str {
        match self {
            Payload::Abstract(_) => "abstract",
            Payload::Box(_) => "box",
            Payload::Curves(_) => "curves",
            Payload::Simplicial(_) => "simplicial",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainFile {
    pub p: Option<Modulus>,
    pub payload: Payload,
}

impl ChainFile {
    pub fn new(payload: Payload) -> Self {
        ChainFile { p: None, payload }
    }

    pub fn with_p(mut self, p: Modulus) -> Self {
        self.p = Some(p);
        self
    }
}

struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
    text: &'a str,
}

fn tokenize(number: usize, raw: &str) -> Line<'_> {
    let text = raw.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push((s, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push((s, &text[s..]));
    }
    Line { number, tokens, text }
}

impl<'a> Line<'a> {
    fn col(&self, byte: usize) -> usize {
        self.text[..byte].chars().count() + 1
    }

    fn err(&self, token: usize, message: impl Into<String>) -> IoError {
        let byte = self.tokens.get(token).map_or(self.text.len(), |t| t.0);
        perr(self.number, self.col(byte), message)
    }

    fn arity(&self, n: usize) -> Result<(), IoError> {
        if self.tokens.len() < n {
            return Err(self.err(self.tokens.len(), format!("`{}` expects {} values", self.tokens[0].1, n - 1)));
        }
        if self.tokens.len() > n {
            return Err(self.err(n, "unexpected extra value"));
        }
        Ok(())
    }

    fn real(&self, i: usize) -> Result<f64, IoError> {
        parse_real(self.tokens[i].1).ok_or_else(|| self.err(i, "real number expected"))
    }

    fn int(&self, i: usize) -> Result<BigInt, IoError> {
        parse_int(self.tokens[i].1).ok_or_else(|| self.err(i, "integer expected"))
    }

    fn count(&self, i: usize) -> Result<usize, IoError> {
        self.tokens[i]
            .1
            .parse::<usize>()
            .map_err(|_| self.err(i, "nonnegative integer expected"))
    }
}

fn parse_real(s: &str) -> Option<f64> {
    let ok = !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || "+-.eE".contains(c));
    ok.then(|| s.parse::<f64>().ok()).flatten().filter(|x| x.is_finite())
}

fn parse_int(s: &str) -> Option<BigInt> {
    BigInt::from_str(s).ok()
}

/// Shortest decimal that parses back to `x`.
pub fn fmt_real(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x}")
}

pub fn parse(text: &str) -> Result<ChainFile, IoError> {
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, l)| tokenize(i + 1, l))
        .filter(|l| !l.tokens.is_empty())
        .collect();
    let mut it = lines.iter().peekable();
    let mut header = |key: &str, required: bool| -> Result<Option<&Line>, IoError> {
        match it.peek() {
            Some(l) if l.tokens[0].1 == key => {
                let l = it.next().expect("peeked");
                l.arity(2)?;
                Ok(Some(l))
            }
            Some(l) if required => Err(l.err(0, format!("`{key}` expected"))),
            None if required => Err(perr(text.lines().count() + 1, 1, format!("`{key}` expected"))),
            _ => Ok(None),
        }
    };
    let f = header("format", true)?.expect("required");
    if f.tokens[1].1 != FORMAT_VERSION.to_string() {
        return Err(f.err(1, format!("unsupported format version (expected {FORMAT_VERSION})")));
    }
    let c = header("carrier", true)?.expect("required");
    let carrier = c.tokens[1].1;
    if !["abstract", "box", "curves", "simplicial"].contains(&carrier) {
        return Err(c.err(1, format!("unknown carrier `{carrier}`")));
    }
    let needs_shape = carrier != "curves";
    let ambient = match header("ambient", needs_shape)? {
        Some(l) => Some(l.count(1)?),
        None => None,
    };
    let dim = match header("dim", needs_shape)? {
        Some(l) => Some(l.count(1)?),
        None => None,
    };
    let p = match header("p", false)? {
        Some(l) => Some(
            l.tokens[1]
                .1
                .parse::<u64>()
                .ok()
                .and_then(|v| Modulus::new(v).ok())
                .ok_or_else(|| l.err(1, "modulus p ≥ 2 expected"))?,
        ),
        None => None,
    };
    let rest: Vec<&Line> = it.collect();
    let payload = match carrier {
        "box" => Payload::Box(parse_box(&rest, ambient.expect("required"), dim.expect("required"))?),
        "curves" => Payload::Curves(parse_curves(&rest)?),
        "simplicial" => Payload::Simplicial(parse_simplicial(&rest, ambient.expect("required"), dim.expect("required"))?),
        _ => Payload::Abstract(parse_abstract(&rest, ambient.expect("required"), dim.expect("required"))?),
    };
    Ok(ChainFile { p, payload })
}

fn expect_keyword(l: &Line, key: &str) -> Result<(), IoError> {
    if l.tokens[0].1 == key {
        Ok(())
    } else {
        Err(l.err(0, format!("`{key}` line expected, found `{}`", l.tokens[0].1)))
    }
}

fn parse_box(lines: &[&Line], n: usize, k: usize) -> Result<BoxChain, IoError> {
    let mut items = Vec::new();
    for l in lines {
        expect_keyword(l, "cell")?;
        l.arity(2 * n + 2)?;
        let mut bounds = Vec::with_capacity(n);
        let mut extended = 0;
        for j in 0..n {
            let (lo, hi) = (l.real(1 + 2 * j)?, l.real(2 + 2 * j)?);
            if lo > hi {
                return Err(l.err(1 + 2 * j, format!("interval on axis {} has lo > hi", j + 1)));
            }
            if lo < hi {
                extended += 1;
            }
            bounds.push((lo, hi));
        }
        if extended != k {
            return Err(l.err(0, format!("cell has dimension {extended}, header says {k}")));
        }
        let g = l.int(2 * n + 1)?;
        items.push((BoxCell::new(bounds).map_err(|e| l.err(0, e.to_string()))?, g));
    }
    BoxChain::new(n, k, items).map_err(|e| perr(0, 0, e.to_string()))
}

fn parse_curves(lines: &[&Line]) -> Result<CurveSystem, IoError> {
    let mut items = Vec::new();
    for l in lines {
        expect_keyword(l, "curve")?;
        l.arity(5)?;
        let id = l.count(1)?;
        if id != items.len() + 1 {
            return Err(l.err(1, format!("curve id {} expected", items.len() + 1)));
        }
        let mass = l.real(4)?;
        if mass < 0.0 {
            return Err(l.err(4, "nonnegative mass expected"));
        }
        items.push(CurveItem {
            id,
            start: l.tokens[2].1.to_string(),
            end: l.tokens[3].1.to_string(),
            mass,
        });
    }
    CurveSystem::from_items(items).map_err(|e| perr(0, 0, e.to_string()))
}

fn parse_simplicial(lines: &[&Line], n: usize, k: usize) -> Result<SimplicialChain, IoError> {
    let mut items = Vec::new();
    for l in lines {
        expect_keyword(l, "simplex")?;
        let body_start = l.tokens[0].0 + "simplex".len();
        let mut parts: Vec<(usize, &str)> = Vec::new();
        let mut offset = body_start;
        for part in l.text[body_start..].split(';') {
            let lead = part.len() - part.trim_start().len();
            parts.push((offset + lead, part.trim()));
            offset += part.len() + 1;
        }
        if parts.len() != k + 2 {
            return Err(perr(l.number, l.col(body_start), format!("{} vertices and a coefficient expected", k + 1)));
        }
        let at = |byte: usize, message: &str| perr(l.number, l.col(byte), message);
        let (cpos, ctext) = parts[k + 1];
        let g = parse_int(ctext).ok_or_else(|| at(cpos, "integer expected"))?;
        let mut verts = Vec::with_capacity(k + 1);
        for &(pos, text) in &parts[..=k] {
            let coords: Option<Vec<f64>> = text.split(',').map(|x| parse_real(x.trim())).collect();
            let coords = coords.ok_or_else(|| at(pos, "comma-separated real coordinates expected"))?;
            if coords.len() != n {
                return Err(at(pos, &format!("vertex with {n} coordinates expected")));
            }
            verts.push(coords);
        }
        items.push((Simplex::new(verts).map_err(|e| at(body_start, &e.to_string()))?, g));
    }
    SimplicialChain::new(n, k, items).map_err(|e| perr(0, 0, e.to_string()))
}

fn parse_abstract(lines: &[&Line], n: usize, k: usize) -> Result<AbstractChain, IoError> {
    let mut desc = ComplexDescription::new(n);
    let mut current: Option<usize> = None;
    let mut coeffs = Vec::new();
    for l in lines {
        match l.tokens[0].1 {
            "dimension" => {
                l.arity(2)?;
                let d = l.count(1)?;
                if current.map_or(d != 0, |c| d != c + 1) || !coeffs.is_empty() {
                    return Err(l.err(1, "dimensions must be listed in order 0, 1, 2, ... before coefficients"));
                }
                desc.cells.push(Vec::new());
                current = Some(d);
            }
            "cell" => {
                l.arity(3)?;
                let d = current.ok_or_else(|| l.err(0, "`dimension` line expected first"))?;
                if !coeffs.is_empty() {
                    return Err(l.err(0, "cells must precede coefficients"));
                }
                desc.push(d, RawCell::new(l.tokens[1].1, l.real(2)?));
            }
            "face" => {
                l.arity(4)?;
                let d = current.ok_or_else(|| l.err(0, "`dimension` line expected first"))?;
                let sign = l.int(3)?;
                let sign = i64::try_from(sign).map_err(|_| l.err(3, "incidence out of range"))?;
                let cell = desc.cells[d]
                    .iter_mut()
                    .find(|c| c.label == l.tokens[1].1)
                    .ok_or_else(|| l.err(1, format!("no cell `{}` in dimension {d}", l.tokens[1].1)))?;
                cell.faces.push((l.tokens[2].1.to_string(), sign));
            }
            "coeff" => {
                l.arity(3)?;
                coeffs.push((l.tokens[1].1.to_string(), l.int(2)?));
            }
            other => return Err(l.err(0, format!("unknown keyword `{other}`"))),
        }
    }
    Ok(AbstractChain {
        complex: desc,
        dim: k,
        coeffs,
    })
}

fn check_label(label: &str) -> Result<(), IoError> {
    if label.is_empty() || label.contains(char::is_whitespace) || label.contains('#') {
        Err(IoError::BadLabel(label.to_string()))
    } else {
        Ok(())
    }
}

pub fn serialize(file: &ChainFile) -> Result<String, IoError> {
    let mut s = String::new();
    let _ = writeln!(s, "format {FORMAT_VERSION}");
    let _ = writeln!(s, "carrier {}", file.payload.carrier());
    let shape = match &file.payload {
        Payload::Abstract(a) => Some((a.complex.ambient_dim, a.dim)),
        Payload::Box(b) => Some((b.ambient_dim(), b.dim())),
        Payload::Simplicial(c) => Some((c.ambient_dim(), c.dim())),
        Payload::Curves(_) => None,
    };
    if let Some((n, k)) = shape {
        let _ = writeln!(s, "ambient {n}");
        let _ = writeln!(s, "dim {k}");
    }
    if let Some(p) = file.p {
        let _ = writeln!(s, "p {}", p.get());
    }
    match &file.payload {
        Payload::Box(b) => {
            for (cell, g) in b.iter() {
                let coords: Vec<String> = cell
                    .bounds()
                    .iter()
                    .flat_map(|&(lo, hi)| [fmt_real(lo), fmt_real(hi)])
                    .collect();
                let _ = writeln!(s, "cell {} {g}", coords.join(" "));
            }
        }
        Payload::Curves(sys) => {
            for c in sys.items() {
                check_label(&c.start)?;
                check_label(&c.end)?;
                let _ = writeln!(s, "curve {} {} {} {}", c.id, c.start, c.end, fmt_real(c.mass));
            }
        }
        Payload::Simplicial(t) => {
            for (simplex, g) in t.iter() {
                let verts: Vec<String> = simplex
                    .vertices()
                    .iter()
                    .map(|v| v.iter().map(|&x| fmt_real(x)).collect::<Vec<_>>().join(","))
                    .collect();
                let _ = writeln!(s, "simplex {} ; {g}", verts.join(" ; "));
            }
        }
        Payload::Abstract(a) => {
            for (d, cells) in a.complex.cells.iter().enumerate() {
                let _ = writeln!(s, "dimension {d}");
                for c in cells {
                    check_label(&c.label)?;
                    let _ = writeln!(s, "cell {} {}", c.label, fmt_real(c.volume));
                }
                for c in cells {
                    for (face, sign) in &c.faces {
                        check_label(face)?;
                        let _ = writeln!(s, "face {} {face} {sign}", c.label);
                    }
                }
            }
            for (label, g) in &a.coeffs {
                check_label(label)?;
                let _ = writeln!(s, "coeff {label} {g}");
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests;
