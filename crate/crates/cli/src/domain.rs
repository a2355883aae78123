//! Domain files: one polynomial `P` plus optional `map { .. }` and
//! `flow { .. }` declarations.
//!
//! ```text
//! # comment
//! P = z1*cz1 + z2*cz2
//! map { g1 = z2; g2 = z1 }
//! flow { kind = type4; a = i; b = 2*i }
//! ```
//!
//! Statements end at `;` or at a newline outside parentheses.

use std::fmt;

use modelkit_core::coeff::{fmt_coeff, Coeff, Rational};
use modelkit_core::flows::{FlowKind, FlowSpec};
use modelkit_core::poly::{parse_with_limit, HoloPoly, ModelMap, PolyMap, RPoly, Var};
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, Default)]
pub struct DomainFile {
    pub p: Option<RPoly>,
    pub maps: Vec<ModelMap>,
    pub flows: Vec<FlowSpec>,
}

/// A slice of the source with its byte offset.
#[derive(Debug, Clone, Copy)]
struct Span<'a> {
    text: &'a str,
    at: usize,
}

impl<'a> Span<'a> {
    fn trim(self) -> Span<'a> {
        let start = self.text.len() - self.text.trim_start().len();
        Span { text: self.text.trim(), at: self.at + start }
    }

    fn slice(self, from: usize, to: usize) -> Span<'a> {
        Span { text: &self.text[from..to], at: self.at + from }
    }
}

struct Parser<'a> {
    src: &'a str,
    max_terms: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, at: usize, message: impl Into<String>) -> FileError {
        let before = &self.src[..at.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        FileError { line, column, message: message.into() }
    }

    /// Splits at `;` and at newlines outside parentheses.
    fn statements(&self, body: Span<'a>) -> Vec<Span<'a>> {
        let mut out = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, ch) in body.text.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                ';' => {
                    out.push(body.slice(start, i));
                    start = i + 1;
                }
                '\n' if depth <= 0 => {
                    out.push(body.slice(start, i));
                    start = i + 1;
                }
                _ => {}
            }
        }
        out.push(body.slice(start, body.text.len()));
        out.into_iter().map(Span::trim).filter(|s| !s.text.is_empty()).collect()
    }

    fn poly(&self, s: Span<'a>) -> Result<RPoly, FileError> {
        parse_with_limit(s.text, self.max_terms)
            .map_err(|e| self.error(s.at + e.position, format!("parse error: {}", e.kind)))
    }

    fn holo(&self, s: Span<'a>) -> Result<HoloPoly, FileError> {
        let p = self.poly(s)?;
        if p.has_params() {
            return Err(self.error(s.at, format!("unexpected parameter in {p}")));
        }
        HoloPoly::new(p).map_err(|e| self.error(s.at, e.to_string()))
    }

    fn constant(&self, s: Span<'a>) -> Result<Coeff, FileError> {
        let p = self.poly(s)?;
        if !p.is_constant() {
            return Err(self.error(s.at, format!("expected a constant, got {p}")));
        }
        Ok(p.constant_term())
    }

    fn rational(&self, s: Span<'a>) -> Result<Rational, FileError> {
        let c = self.constant(s)?;
        if !c.im.is_zero() {
            return Err(self.error(s.at, format!("expected a real constant, got {}", fmt_coeff(&c))));
        }
        Ok(c.re)
    }

    /// `key = value` pairs of a block body.
    fn fields(&self, body: Span<'a>, allowed: &[&str]) -> Result<Vec<(&'a str, Span<'a>)>, FileError> {
        let mut out: Vec<(&'a str, Span<'a>)> = Vec::new();
        for st in self.statements(body) {
            let Some(eq) = st.text.find('=') else {
                return Err(self.error(st.at, "expected 'name = value'"));
            };
            let key = st.slice(0, eq).trim();
            let value = st.slice(eq + 1, st.text.len()).trim();
            if !allowed.contains(&key.text) {
                return Err(self.error(key.at, format!("unknown field '{}', expected one of {}", key.text, allowed.join(", "))));
            }
            if out.iter().any(|(k, _)| *k == key.text) {
                return Err(self.error(key.at, format!("field '{}' given twice", key.text)));
            }
            if value.text.is_empty() {
                return Err(self.error(value.at, "missing value"));
            }
            out.push((key.text, value));
        }
        Ok(out)
    }

    fn map_block(&self, body: Span<'a>) -> Result<ModelMap, FileError> {
        let mut g1 = HoloPoly::z(Var::Z1);
        let mut g2 = HoloPoly::z(Var::Z2);
        let mut mu = Rational::one();
        let mut phi = HoloPoly::zero();
        for (key, value) in self.fields(body, &["g1", "g2", "mu", "phi"])? {
            match key {
                "g1" => g1 = self.holo(value)?,
                "g2" => g2 = self.holo(value)?,
                "mu" => mu = self.rational(value)?,
                _ => phi = self.holo(value)?,
            }
        }
        Ok(ModelMap::new(PolyMap::new(g1, g2), mu, phi))
    }

    fn flow_block(&self, body: Span<'a>) -> Result<FlowSpec, FileError> {
        let fields = self.fields(body, &["kind", "a", "b", "p", "d", "beta3"])?;
        let get = |name: &str| fields.iter().find(|(k, _)| *k == name).map(|(_, v)| *v);
        let require = |name: &str, kind: &str| {
            get(name).ok_or_else(|| self.error(body.at, format!("{kind} flow needs field '{name}'")))
        };
        let kind_span = get("kind").ok_or_else(|| self.error(body.at, "flow needs a 'kind'"))?;
        let label = kind_span.text;
        let kind = match label {
            "type1" => FlowKind::Type1 { b: self.constant(require("b", label)?)? },
            "type2a" => FlowKind::Type2a { b: self.constant(require("b", label)?)? },
            "type2b" => FlowKind::Type2b,
            "type3" => FlowKind::Type3 { p: self.holo(require("p", label)?)? },
            "type4" => FlowKind::Type4 {
                a: self.constant(require("a", label)?)?,
                b: self.constant(require("b", label)?)?,
            },
            "type5" => {
                let d_span = require("d", label)?;
                let d = d_span
                    .text
                    .parse::<u32>()
                    .map_err(|_| self.error(d_span.at, format!("d must be a positive integer, got '{}'", d_span.text)))?;
                FlowKind::Type5 { a: self.constant(require("a", label)?)?, d }
            }
            other => {
                return Err(self.error(
                    kind_span.at,
                    format!("unknown flow kind '{other}', expected type1, type2a, type2b, type3, type4 or type5"),
                ))
            }
        };
        let expected: &[&str] = match label {
            "type1" | "type2a" => &["kind", "b", "beta3"],
            "type2b" => &["kind", "beta3"],
            "type3" => &["kind", "p", "beta3"],
            "type4" => &["kind", "a", "b", "beta3"],
            _ => &["kind", "a", "d", "beta3"],
        };
        if let Some((k, v)) = fields.iter().find(|(k, _)| !expected.contains(k)) {
            return Err(self.error(v.at, format!("field '{k}' does not apply to {label}")));
        }
        let beta3 = get("beta3").map(|s| self.rational(s)).transpose()?.unwrap_or_else(Rational::zero);
        FlowSpec::new(kind, beta3).map_err(|e| self.error(body.at, e.to_string()))
    }

    fn file(&self) -> Result<DomainFile, FileError> {
        let mut out = DomainFile::default();
        let bytes = self.src.as_bytes();
        let mut pos = 0;
        let mut statement_start = 0;
        let mut depth = 0i32;
        while pos < bytes.len() {
            let rest = &self.src[pos..];
            let at_statement_start = self.src[statement_start..pos].trim().is_empty();
            if at_statement_start {
                if let Some(keyword) = ["map", "flow"].into_iter().find(|k| block_keyword(rest, k)) {
                    let open = pos + rest.find('{').expect("checked by block_keyword");
                    let Some(close) = self.src[open..].find('}').map(|i| open + i) else {
                        return Err(self.error(open, "unclosed '{'"));
                    };
                    let body = Span { text: &self.src[open + 1..close], at: open + 1 };
                    if keyword == "map" {
                        out.maps.push(self.map_block(body)?);
                    } else {
                        out.flows.push(self.flow_block(body)?);
                    }
                    pos = close + 1;
                    statement_start = pos;
                    continue;
                }
            }
            let ch = rest.chars().next().unwrap();
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '{' | '}' => return Err(self.error(pos, format!("unexpected '{ch}'"))),
                _ => {}
            }
            if ch == ';' || (ch == '\n' && depth <= 0) {
                self.polynomial_statement(Span { text: &self.src[statement_start..pos], at: statement_start }, &mut out)?;
                statement_start = pos + 1;
                depth = 0;
            }
            pos += ch.len_utf8();
        }
        self.polynomial_statement(Span { text: &self.src[statement_start..], at: statement_start }, &mut out)?;
        Ok(out)
    }

    fn polynomial_statement(&self, st: Span<'a>, out: &mut DomainFile) -> Result<(), FileError> {
        let st = st.trim();
        if st.text.is_empty() {
            return Ok(());
        }
        let expr = match st.text.find('=') {
            Some(eq) => {
                let name = st.slice(0, eq).trim();
                if name.text != "P" {
                    return Err(self.error(name.at, format!("expected 'P = ...', found '{}'", name.text)));
                }
                st.slice(eq + 1, st.text.len()).trim()
            }
            None => st,
        };
        if out.p.is_some() {
            return Err(self.error(st.at, "P is defined twice"));
        }
        if expr.text.is_empty() {
            return Err(self.error(expr.at, "missing polynomial"));
        }
        let p = self.poly(expr)?;
        if p.has_params() {
            return Err(self.error(expr.at, format!("P must not contain parameters: {p}")));
        }
        if !p.is_real() {
            return Err(self.error(expr.at, format!("P is not real-valued: {p}")));
        }
        out.p = Some(p);
        Ok(())
    }
}

fn block_keyword(rest: &str, keyword: &str) -> bool {
    rest.strip_prefix(keyword).is_some_and(|after| after.trim_start().starts_with('{'))
}

/// Blanks out `#` comments, keeping byte offsets.
fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|line| match line.find('#') {
            Some(i) => format!("{}{}", &line[..i], " ".repeat(line.len() - i)),
            None => line.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn parse_file(text: &str, max_terms: usize) -> Result<DomainFile, FileError> {
    let clean = strip_comments(text);
    Parser { src: &clean, max_terms }.file()
}
