//! Text grammar for polynomials, multi-indices, fractions, and points.
//!
//! Polynomials: terms joined by `+`/`-`; a term is an optional integer
//! coefficient and `*`-joined powers `name^e` (`^e` omitted means 1);
//! identifiers match `[a-zA-Z][a-zA-Z0-9_]*`; whitespace is insignificant.
//! Example: `x^2 + 3*v*y^2 - 1`.
//!
//! Multi-indices: `name:exp` pairs joined by commas, e.g. `v:1,x:2`; the
//! empty string is the zero index.
//!
//! Points: `name=value` pairs joined by commas; a value is a fraction
//! `num/den` whose sides are polynomials in the base parameters,
//! parenthesized when they contain a top-level `+` or `-`, e.g.
//! `x=(v+1)/v,y=0`.
//!
//! Printing is canonical: coefficients are reduced residues, terms are
//! ordered with geometric variables taking precedence, and
//! `parse(print(f)) == f` always holds.

use std::fmt;

use crate::polyring::{Fraction, FpScalar, MultiIndex, Point, Polynomial, RingContext};

/// A parse failure with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownIdentifier(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => {
                write!(f, "syntax error at {}:{}: {}", self.line, self.col, msg)
            }
            ParseErrorKind::UnknownIdentifier(name) => write!(
                f,
                "unknown identifier `{}` at {}:{}",
                name, self.line, self.col
            ),
        }
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            text,
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn error_at(&self, at: usize, kind: ParseErrorKind) -> ParseError {
        let mut line = 1;
        let mut col = 1;
        for &b in &self.bytes[..at.min(self.bytes.len())] {
            if b == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        ParseError { kind, line, col }
    }

    fn syntax(&self, msg: &str) -> ParseError {
        self.error_at(self.pos, ParseErrorKind::Syntax(msg.to_string()))
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn integer(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected an integer"));
        }
        self.text[start..self.pos]
            .parse::<u64>()
            .map_err(|_| self.error_at(start, ParseErrorKind::Syntax("integer too large".into())))
    }

    fn identifier(&mut self) -> Result<(String, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.bytes.len() || !self.bytes[self.pos].is_ascii_alphabetic() {
            return Err(self.syntax("expected an identifier"));
        }
        self.pos += 1;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        Ok((self.text[start..self.pos].to_string(), start))
    }
}

fn parse_term(cur: &mut Cursor, ring: &RingContext) -> Result<(MultiIndex, FpScalar), ParseError> {
    let p = ring.modulus();
    let mut coeff = FpScalar::one(p);
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    if matches!(cur.peek(), Some(b) if b.is_ascii_digit()) {
        coeff = FpScalar::new(cur.integer()? % p, p);
        if !cur.eat(b'*') {
            return Ok((MultiIndex::zero(), coeff));
        }
    }
    loop {
        let (name, start) = cur.identifier()?;
        let pos = ring.position_of(&name).ok_or_else(|| {
            cur.error_at(start, ParseErrorKind::UnknownIdentifier(name.clone()))
        })?;
        let exp = if cur.eat(b'^') {
            let e = cur.integer()?;
            u32::try_from(e).map_err(|_| cur.syntax("exponent too large"))?
        } else {
            1
        };
        pairs.push((pos, exp));
        if !cur.eat(b'*') {
            break;
        }
        if matches!(cur.peek(), Some(b) if b.is_ascii_digit()) {
            // grammar puts the coefficient first; reject `x*2`
            return Err(cur.syntax("coefficient must precede the powers"));
        }
    }
    Ok((MultiIndex::from_pairs(pairs), coeff))
}

fn parse_poly_body(cur: &mut Cursor, ring: &RingContext) -> Result<Polynomial, ParseError> {
    let mut acc = Polynomial::zero(ring);
    let mut negate = false;
    if cur.eat(b'-') {
        negate = true;
    } else {
        cur.eat(b'+');
    }
    loop {
        let (idx, coeff) = parse_term(cur, ring)?;
        let signed = if negate { -coeff } else { coeff };
        acc = &acc + &Polynomial::term(ring, idx, signed);
        if cur.eat(b'+') {
            negate = false;
        } else if cur.eat(b'-') {
            negate = true;
        } else {
            break;
        }
    }
    Ok(acc)
}

/// Parses a polynomial in the grammar above; coefficients are reduced
/// modulo p and unknown identifiers are rejected with their position.
pub fn parse_polynomial(text: &str, ring: &RingContext) -> Result<Polynomial, ParseError> {
    let mut cur = Cursor::new(text);
    let poly = parse_poly_body(&mut cur, ring)?;
    if !cur.at_end() {
        return Err(cur.syntax("unexpected trailing input"));
    }
    Ok(poly)
}

/// Parses a `;`-separated list of polynomials.
pub fn parse_generators(text: &str, ring: &RingContext) -> Result<Vec<Polynomial>, ParseError> {
    let mut out = Vec::new();
    let mut cur = Cursor::new(text);
    loop {
        out.push(parse_poly_body(&mut cur, ring)?);
        if !cur.eat(b';') {
            break;
        }
    }
    if !cur.at_end() {
        return Err(cur.syntax("unexpected trailing input"));
    }
    Ok(out)
}

/// Parses `name:exp` pairs joined by commas; the empty string is the zero
/// index.
pub fn parse_multiindex(text: &str, ring: &RingContext) -> Result<MultiIndex, ParseError> {
    let mut cur = Cursor::new(text);
    if cur.at_end() {
        return Ok(MultiIndex::zero());
    }
    let mut pairs = Vec::new();
    loop {
        let (name, start) = cur.identifier()?;
        let pos = ring
            .position_of(&name)
            .ok_or_else(|| cur.error_at(start, ParseErrorKind::UnknownIdentifier(name.clone())))?;
        if !cur.eat(b':') {
            return Err(cur.syntax("expected `:` after the basis name"));
        }
        let exp = cur.integer()?;
        let exp = u32::try_from(exp).map_err(|_| cur.syntax("exponent too large"))?;
        pairs.push((pos, exp));
        if !cur.eat(b',') {
            break;
        }
    }
    if !cur.at_end() {
        return Err(cur.syntax("unexpected trailing input"));
    }
    Ok(MultiIndex::from_pairs(pairs))
}

fn strip_outer_parens(s: &str) -> Option<&str> {
    let t = s.trim();
    if !t.starts_with('(') || !t.ends_with(')') {
        return None;
    }
    // The first '(' must match the final ')'.
    let mut depth = 0;
    for (i, c) in t.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i != t.len() - 1 {
                    return None;
                }
            }
            _ => {}
        }
    }
    Some(&t[1..t.len() - 1])
}

fn parse_fraction_side(
    text: &str,
    ring: &RingContext,
    in_fraction: bool,
) -> Result<Polynomial, ParseError> {
    if let Some(inner) = strip_outer_parens(text) {
        return parse_polynomial(inner, ring);
    }
    let body = text.trim();
    if in_fraction && body.chars().skip(1).any(|c| c == '+' || c == '-') {
        return Err(ParseError {
            kind: ParseErrorKind::Syntax(
                "ambiguous fraction; parenthesize the numerator or denominator".into(),
            ),
            line: 1,
            col: 1,
        });
    }
    parse_polynomial(text, ring)
}

/// Parses a coordinate value `num` or `num/den` into a fraction over the
/// base parameters. Sides containing `+`/`-` must be parenthesized when a
/// `/` is present, as in `(v+1)/v`.
pub fn parse_fraction(text: &str, ring: &RingContext) -> Result<Fraction, ParseError> {
    let mut depth = 0i32;
    let mut slash = None;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => {
                if slash.is_some() {
                    return Err(ParseError {
                        kind: ParseErrorKind::Syntax("multiple `/` in a fraction".into()),
                        line: 1,
                        col: 1,
                    });
                }
                slash = Some(i);
            }
            _ => {}
        }
    }
    let to_frac = |num: Polynomial, den: Polynomial| {
        Fraction::new(num, den).map_err(|e| ParseError {
            kind: ParseErrorKind::Syntax(e.to_string()),
            line: 1,
            col: 1,
        })
    };
    match slash {
        None => {
            let num = parse_fraction_side(text, ring, false)?;
            to_frac(num, Polynomial::one(ring))
        }
        Some(i) => {
            let num = parse_fraction_side(&text[..i], ring, true)?;
            let den = parse_fraction_side(&text[i + 1..], ring, true)?;
            to_frac(num, den)
        }
    }
}

/// Parses `name=value` pairs joined by commas into a rational point.
pub fn parse_point(text: &str, ring: &RingContext) -> Result<Point, ParseError> {
    let mut assignments = Vec::new();
    for chunk in text.split(',') {
        let Some(eq) = chunk.find('=') else {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax(format!("expected `name=value`, got `{chunk}`")),
                line: 1,
                col: 1,
            });
        };
        let name = chunk[..eq].trim();
        let pos = ring.position_of(name).ok_or_else(|| ParseError {
            kind: ParseErrorKind::UnknownIdentifier(name.to_string()),
            line: 1,
            col: 1,
        })?;
        let value = parse_fraction(&chunk[eq + 1..], ring)?;
        assignments.push((pos, value));
    }
    Point::new(ring, assignments).map_err(|e| ParseError {
        kind: ParseErrorKind::Syntax(e.to_string()),
        line: 1,
        col: 1,
    })
}

// ---------------------------------------------------------------------
// Canonical printing.

/// Comparison used for printing: geometric exponents first (lexicographic
/// in basis order), then parameter exponents. This puts `x^2` before
/// `v*y^2` in `x^2 + v*y^2`.
fn print_cmp(ring: &RingContext, a: &MultiIndex, b: &MultiIndex) -> std::cmp::Ordering {
    for pos in ring.geometric_positions() {
        match a.get(pos).cmp(&b.get(pos)) {
            std::cmp::Ordering::Equal => {}
            ord => return ord,
        }
    }
    for pos in ring.parameter_positions() {
        match a.get(pos).cmp(&b.get(pos)) {
            std::cmp::Ordering::Equal => {}
            ord => return ord,
        }
    }
    std::cmp::Ordering::Equal
}

fn term_to_text(ring: &RingContext, idx: &MultiIndex, coeff: FpScalar) -> String {
    if idx.is_zero() {
        return coeff.value().to_string();
    }
    let powers: Vec<String> = idx
        .iter()
        .map(|(pos, exp)| {
            let name = ring.element(pos).name();
            if exp == 1 {
                name.to_string()
            } else {
                format!("{name}^{exp}")
            }
        })
        .collect();
    let body = powers.join("*");
    if coeff.value() == 1 {
        body
    } else {
        format!("{}*{}", coeff.value(), body)
    }
}

/// Canonical text form; `parse_polynomial` is a left inverse.
pub fn polynomial_to_text(f: &Polynomial) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let ring = f.ring();
    let mut terms: Vec<(&MultiIndex, FpScalar)> = f.terms().collect();
    terms.sort_by(|(a, _), (b, _)| print_cmp(ring, b, a));
    terms
        .iter()
        .map(|(idx, c)| term_to_text(ring, idx, *c))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Canonical `name:exp` form; the zero index prints as the empty string.
pub fn multiindex_to_text(idx: &MultiIndex, ring: &RingContext) -> String {
    idx.iter()
        .map(|(pos, exp)| format!("{}:{}", ring.element(pos).name(), exp))
        .collect::<Vec<_>>()
        .join(",")
}

/// Canonical fraction form: the numerator, then `/den` when the
/// denominator is not 1, with parenthesized multi-term sides.
pub fn fraction_to_text(f: &Fraction) -> String {
    let wrap = |p: &Polynomial| {
        let s = polynomial_to_text(p);
        if p.num_terms() > 1 {
            format!("({s})")
        } else {
            s
        }
    };
    if f.as_polynomial().is_some() {
        polynomial_to_text(f.num())
    } else {
        format!("{}/{}", wrap(f.num()), wrap(f.den()))
    }
}

/// Canonical point form `x=...,y=...` in basis order.
pub fn point_to_text(pt: &Point) -> String {
    pt.coords()
        .map(|(pos, value)| {
            format!(
                "{}={}",
                pt.ring().element(pos).name(),
                fraction_to_text(value)
            )
        })
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for Polynomial {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", polynomial_to_text(self))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", fraction_to_text(self))
    }
}
