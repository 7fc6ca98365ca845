//! Quantity literals such as `1.5e-14 N^(1/2) m`.
//!
//! ```text
//! literal     ::= significand { ws unit }
//! significand ::= decimal [ ("e" | "E") int ]
//! unit        ::= token [ "^" ( "(" int [ "/" int ] ")" | int ) ]
//! token       ::= "kg" | "m" | "s" | "K" | "N" | "J"
//! ```
//!
//! Division is not supported; write negative exponents instead.

use crate::dimensions::{rat, DimVec, Quantity, Rational};
use crate::error::ParseError;

const TOKENS: &str = "kg, m, s, K, N, J";

fn token_dim(token: &str) -> Option<DimVec> {
    match token {
        "kg" => Some(DimVec::MASS),
        "m" => Some(DimVec::LENGTH),
        "s" => Some(DimVec::TIME),
        "K" => Some(DimVec::TEMPERATURE),
        "N" => Some(DimVec::FORCE),
        "J" => Some(DimVec::ENERGY),
        _ => None,
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) -> bool {
        let start = self.pos;
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
        self.pos > start
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&pred) {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.pos, message)
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        if self.peek() == Some('-') || self.peek() == Some('+') {
            self.bump();
        }
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            self.pos = start;
            return Err(self.error("expected integer"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| ParseError::new(start, "integer out of range"))
    }
}

/// Returns `log10` of the significand.
fn significand(cur: &mut Cursor<'_>) -> Result<f64, ParseError> {
    let start = cur.pos;
    let whole = cur.take_while(|c| c.is_ascii_digit());
    let mut frac = "";
    if cur.eat('.') {
        frac = cur.take_while(|c| c.is_ascii_digit());
    }
    if whole.is_empty() && frac.is_empty() {
        cur.pos = start;
        return Err(cur.error("expected significand (decimal number)"));
    }
    let mantissa_end = cur.pos;
    let mut decade = 0i64;
    if cur.peek() == Some('e') || cur.peek() == Some('E') {
        cur.bump();
        decade = cur
            .int()
            .map_err(|e| ParseError::new(e.offset, "expected exponent after `e`"))?;
    }
    let mantissa: f64 = cur.src[start..mantissa_end]
        .parse()
        .map_err(|_| ParseError::new(start, "malformed decimal"))?;
    if mantissa <= 0.0 {
        return Err(ParseError::new(start, "magnitude must be positive"));
    }
    Ok(mantissa.log10() + decade as f64)
}

fn exponent(cur: &mut Cursor<'_>) -> Result<Rational, ParseError> {
    if cur.eat('(') {
        cur.skip_ws();
        let num = cur.int()?;
        cur.skip_ws();
        let mut den = 1;
        if cur.eat('/') {
            cur.skip_ws();
            let at = cur.pos;
            den = cur.int()?;
            if den == 0 {
                return Err(ParseError::new(at, "zero denominator"));
            }
            cur.skip_ws();
        }
        if !cur.eat(')') {
            return Err(cur.error("expected `)` or `/`"));
        }
        Ok(rat(num, den))
    } else {
        let num = cur
            .int()
            .map_err(|e| ParseError::new(e.offset, "expected `(` or integer exponent"))?;
        Ok(rat(num, 1))
    }
}

fn unit(cur: &mut Cursor<'_>) -> Result<DimVec, ParseError> {
    let start = cur.pos;
    let token = cur.take_while(|c| c.is_ascii_alphabetic());
    if token.is_empty() {
        return Err(cur.error(format!("expected unit token ({TOKENS})")));
    }
    let dim = token_dim(token)
        .ok_or_else(|| ParseError::new(start, format!("unknown unit `{token}`, expected one of {TOKENS}")))?;
    if cur.eat('^') {
        Ok(dim.pow(exponent(cur)?))
    } else {
        Ok(dim)
    }
}

fn units(cur: &mut Cursor<'_>, mut dim: DimVec, need_sep: bool) -> Result<DimVec, ParseError> {
    let mut first = true;
    loop {
        let had_ws = cur.skip_ws();
        if cur.at_end() {
            return Ok(dim);
        }
        if !had_ws && (need_sep || !first) {
            return Err(cur.error("expected whitespace between units"));
        }
        dim = dim * unit(cur)?;
        first = false;
    }
}

/// Parses a unit expression with no significand, e.g. `kg m^(2) s^(-1)`.
/// The empty string is dimensionless.
pub fn parse_unit_expr(text: &str) -> Result<DimVec, ParseError> {
    let mut cur = Cursor::new(text);
    units(&mut cur, DimVec::DIMENSIONLESS, false)
}

/// Parses a quantity literal, reducing N and J to base dimensions.
pub fn parse_quantity(text: &str) -> Result<Quantity, ParseError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    let log10 = significand(&mut cur)?;
    let dim = units(&mut cur, DimVec::DIMENSIONLESS, true)?;
    Ok(Quantity::from_log10(log10, dim))
}

/// Renders a quantity as a literal that parses back to the same value.
pub fn render_quantity(q: &Quantity) -> String {
    let (sig, decade) = q.sci_parts();
    let unit = q.dim.unit_string();
    if unit.is_empty() {
        format!("{sig:.16}e{decade}")
    } else {
        format!("{sig:.16}e{decade} {unit}")
    }
}
