//! Recursive-descent parser for the polynomial grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'i' | variable | parameter | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Variables are `z1, z2, cz1, cz2`; `re(..)`, `im(..)`, `conj(..)` are
//! accepted as conveniences. Any other lowercase identifier is a formal real
//! parameter. Division is only by nonzero constants.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{Monomial, RPoly};
use crate::coeff::{imag_unit, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {kind}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    Expected(&'static str),
    IrrationalLiteral(String),
    UnknownVariable(String),
    NonConstantDivisor,
    DivisionByZero,
    BadExponent,
    TermLimit(usize),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character '{c}'"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::Expected(what) => write!(f, "expected {what}"),
            ParseErrorKind::IrrationalLiteral(s) => {
                write!(f, "literal '{s}' is not a rational or Gaussian-rational number")
            }
            ParseErrorKind::UnknownVariable(s) => write!(f, "unknown variable '{s}'"),
            ParseErrorKind::NonConstantDivisor => write!(f, "division by a non-constant expression"),
            ParseErrorKind::DivisionByZero => write!(f, "division by zero"),
            ParseErrorKind::BadExponent => write!(f, "exponent must be a non-negative integer"),
            ParseErrorKind::TermLimit(n) => write!(f, "expression expands to more than {n} terms"),
        }
    }
}

const IRRATIONAL_NAMES: &[&str] = &["pi", "e", "sqrt", "exp", "log", "ln", "sin", "cos", "tan"];

pub fn parse(text: &str) -> Result<RPoly, ParseError> {
    parse_with_limit(text, usize::MAX)
}

/// Like [`parse`], failing once an intermediate result exceeds `max_terms`.
pub fn parse_with_limit(text: &str, max_terms: usize) -> Result<RPoly, ParseError> {
    let mut parser = Parser { src: text, bytes: text.as_bytes(), pos: 0, max_terms };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.bytes.len() {
        return Err(parser.unexpected());
    }
    Ok(p)
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    max_terms: usize,
}

impl Parser<'_> {
    fn err(&self, position: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { position, kind }
    }

    fn unexpected(&self) -> ParseError {
        match self.src[self.pos..].chars().next() {
            Some(c) => self.err(self.pos, ParseErrorKind::UnexpectedChar(c)),
            None => self.err(self.pos, ParseErrorKind::UnexpectedEnd),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bounded(&self, p: RPoly, at: usize) -> Result<RPoly, ParseError> {
        if p.len() > self.max_terms {
            Err(self.err(at, ParseErrorKind::TermLimit(self.max_terms)))
        } else {
            Ok(p)
        }
    }

    fn expr(&mut self) -> Result<RPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            let at = self.pos;
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = self.bounded(&acc + &rhs, at)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = self.bounded(&acc - &rhs, at)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            let at = self.pos;
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.bounded(&acc * &rhs, at)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let divisor_at = self.pos;
                    let rhs = self.unary()?;
                    if !rhs.terms().all(|(m, _)| *m == Monomial::one()) {
                        return Err(self.err(divisor_at, ParseErrorKind::NonConstantDivisor));
                    }
                    let c = rhs.constant_term();
                    if c.is_zero() {
                        return Err(self.err(divisor_at, ParseErrorKind::DivisionByZero));
                    }
                    acc = acc.scale(&(crate::coeff::c_int(1) / c));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RPoly, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            let at = self.pos;
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err(start, ParseErrorKind::BadExponent));
            }
            let e: u32 = self.src[start..self.pos]
                .parse()
                .map_err(|_| self.err(start, ParseErrorKind::BadExponent))?;
            return self.bounded(base.pow(e), at);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RPoly, ParseError> {
        let start = match self.peek() {
            Some(_) => self.pos,
            None => return Err(self.err(self.pos, ParseErrorKind::UnexpectedEnd)),
        };
        let c = self.bytes[start];
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            self.expect(b')', "')'")?;
            return Ok(inner);
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number();
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let ident = self.ident().to_string();
            return self.named(ident, start);
        }
        Err(self.unexpected())
    }

    fn expect(&mut self, byte: u8, what: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(self.pos, ParseErrorKind::Expected(what)))
        }
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<RPoly, ParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_digit()
                || self.bytes[self.pos] == b'.'
                || self.bytes[self.pos] == b'e'
                || self.bytes[self.pos] == b'E')
        {
            self.pos += 1;
        }
        let lit = &self.src[start..self.pos];
        if !lit.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.err(start, ParseErrorKind::IrrationalLiteral(lit.to_string())));
        }
        let n: BigInt = lit.parse().expect("digits parse as an integer");
        Ok(RPoly::rational(Rational::from_integer(n)))
    }

    fn named(&mut self, ident: String, start: usize) -> Result<RPoly, ParseError> {
        match ident.as_str() {
            "z1" => return Ok(RPoly::z1()),
            "z2" => return Ok(RPoly::z2()),
            "cz1" => return Ok(RPoly::cz1()),
            "cz2" => return Ok(RPoly::cz2()),
            "i" => return Ok(RPoly::constant(imag_unit())),
            "re" | "im" | "conj" if self.peek() == Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')', "')'")?;
                return Ok(match ident.as_str() {
                    "re" => inner.real_part(),
                    "im" => inner.imag_part(),
                    _ => inner.conjugate(),
                });
            }
            _ => {}
        }
        if IRRATIONAL_NAMES.contains(&ident.as_str()) {
            return Err(self.err(start, ParseErrorKind::IrrationalLiteral(ident)));
        }
        let looks_like_coordinate = {
            let rest = ident.strip_prefix("cz").or_else(|| ident.strip_prefix('z'));
            rest.is_some_and(|r| r.is_empty() || r.bytes().all(|b| b.is_ascii_digit()))
        };
        if looks_like_coordinate || !ident.bytes().next().is_some_and(|b| b.is_ascii_lowercase()) {
            return Err(self.err(start, ParseErrorKind::UnknownVariable(ident)));
        }
        if self.peek() == Some(b'(') {
            return Err(self.err(start, ParseErrorKind::UnknownVariable(ident)));
        }
        Ok(RPoly::param(&ident))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::c_rat;

    #[test]
    fn spec_examples_parse() {
        let p = parse("z1*cz1 + z2*cz2").unwrap();
        assert_eq!(p, RPoly::abs_sq(crate::poly::Var::Z1) + RPoly::abs_sq(crate::poly::Var::Z2));
        let re_cube = parse("(1/2)*z1^3 + (1/2)*cz1^3").unwrap();
        assert!(re_cube.is_real());
        assert_eq!(re_cube, parse("re(z1^3)").unwrap());
        assert!(parse("i*z1*cz2 - i*cz1*z2").unwrap().is_real());
    }

    #[test]
    fn precedence_and_whitespace() {
        assert_eq!(parse("-z1^2").unwrap(), -parse("z1*z1").unwrap());
        assert_eq!(parse(" 3 / 4 * z1 ").unwrap(), parse("z1*3/4").unwrap());
        assert_eq!(parse("(z1+z2)/2").unwrap().coeff(&Monomial::new(1, 0, 0, 0)), c_rat(1, 2));
        assert_eq!(parse("im(z1)^2").unwrap(), parse("-1/4*(z1 - cz1)^2").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("z1 + * z2").unwrap_err();
        assert_eq!(e.position, 5);
        let e = parse("1.5*z1").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::IrrationalLiteral(_)));
        let e = parse("sqrt(2)*z1").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::IrrationalLiteral(_)));
        let e = parse("z3 + z1").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable("z3".into()));
        let e = parse("z1/z2").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NonConstantDivisor);
        let e = parse("(z1 + z2").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Expected("')'"));
        assert!(parse("").is_err());
    }

    #[test]
    fn parameters_are_real() {
        let p = parse("s*z1 + s*cz1").unwrap();
        assert!(p.is_real());
        assert!(p.has_params());
    }

    #[test]
    fn term_limit_is_enforced() {
        let e = parse_with_limit("(z1 + z2 + cz1)^6", 20).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::TermLimit(20)));
    }
}
