//! Canonical text form of a superposition.
//!
//! ```text
//! [
//!   {amp: [6.00000000000e-1, 0.00000000000e0], register: 0, pc: 0, fuel: 0, mem: {0: 1}, input: [], output: []},
//!   {amp: [8.00000000000e-1, 0.00000000000e0], register: 0, pc: 0, fuel: 0, mem: {1: 1}, input: [], output: []}
//! ]
//! ```
//!
//! Records appear in canonical state order. Amplitude parts are written in
//! scientific notation with 12 significant digits. The empty superposition
//! is `[]`. On input, every field except `amp` may be omitted (defaults to
//! zero or empty) and fields may come in any order.

use std::fmt::Write as _;

use num_bigint::BigUint;

use super::{Amplitude, BasisState, Superposition};
use crate::error::ParseError;

/// Formats a float with 12 significant digits in scientific notation.
pub(crate) fn sci12(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{:.11e}", x)
}

/// Formats a float like C's `%.12g`: 12 significant digits, trailing zeros
/// removed, scientific notation only for very large or small magnitudes.
pub(crate) fn short(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        let fixed = format!("{:.*}", decimals, x);
        trim_fraction(&fixed).to_string()
    } else {
        format!("{}e{}", trim_fraction(mantissa), exp)
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn list<T: ToString>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

pub(crate) fn record(amp: Amplitude, s: &BasisState) -> String {
    let mut out = String::new();
    write!(
        out,
        "{{amp: [{}, {}], register: {}, pc: {}, fuel: {}, mem: {{",
        sci12(amp.re),
        sci12(amp.im),
        s.register,
        s.pc,
        s.fuel
    )
    .unwrap();
    let cells: Vec<String> = s.memory().map(|(a, v)| format!("{a}: {v}")).collect();
    out.push_str(&cells.join(", "));
    write!(out, "}}, input: {}, output: {}}}", list(&s.input), list(&s.output)).unwrap();
    out
}

/// Renders a superposition in the canonical text form.
pub fn serialize(s: &Superposition) -> String {
    if s.is_empty() {
        return "[]".to_string();
    }
    let records: Vec<String> = s.terms().iter().map(|(a, st)| format!("  {}", record(*a, st))).collect();
    format!("[\n{}\n]", records.join(",\n"))
}

/// Parses the canonical text form. Duplicate states are merged.
pub fn deserialize(text: &str) -> Result<Superposition, ParseError> {
    let mut p = Parser::new(text);
    p.skip_ws();
    p.expect('[')?;
    let mut terms = Vec::new();
    p.skip_ws();
    if p.peek() == Some(']') {
        p.bump();
    } else {
        loop {
            terms.push(p.record()?);
            p.skip_ws();
            match p.peek() {
                Some(',') => {
                    p.bump();
                    p.skip_ws();
                    if p.peek() == Some(']') {
                        p.bump();
                        break;
                    }
                }
                Some(']') => {
                    p.bump();
                    break;
                }
                _ => return Err(p.error("expected `,` or `]`")),
            }
        }
    }
    p.skip_ws();
    if p.peek().is_some() {
        return Err(p.error("trailing characters after `]`"));
    }
    Ok(Superposition::merge(terms))
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.column, message)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of input"))),
        }
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let mut w = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '+' | '-') {
                w.push(c);
                self.bump();
            } else {
                break;
            }
        }
        w
    }

    fn float(&mut self) -> Result<f64, ParseError> {
        let (line, column) = (self.line, self.column);
        let w = self.word();
        let v: f64 = w
            .parse()
            .map_err(|_| ParseError::new(line, column, format!("malformed number `{w}`")))?;
        if !v.is_finite() {
            return Err(ParseError::new(line, column, "amplitude must be finite"));
        }
        Ok(v)
    }

    fn natural(&mut self) -> Result<BigUint, ParseError> {
        let (line, column) = (self.line, self.column);
        let w = self.word();
        if w.is_empty() || !w.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseError::new(
                line,
                column,
                format!("expected nonnegative integer, found `{w}`"),
            ));
        }
        Ok(w.parse().expect("digits"))
    }

    fn address(&mut self) -> Result<u64, ParseError> {
        let (line, column) = (self.line, self.column);
        let v = self.natural()?;
        u64::try_from(&v).map_err(|_| ParseError::new(line, column, "address does not fit in 64 bits"))
    }

    fn naturals(&mut self) -> Result<Vec<BigUint>, ParseError> {
        self.expect('[')?;
        let mut out = Vec::new();
        self.skip_ws();
        if self.peek() == Some(']') {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.natural()?);
            self.skip_ws();
            match self.bump() {
                Some(',') => continue,
                Some(']') => return Ok(out),
                _ => return Err(self.error("expected `,` or `]` in list")),
            }
        }
    }

    fn record(&mut self) -> Result<(Amplitude, BasisState), ParseError> {
        self.expect('{')?;
        let (start_line, start_col) = (self.line, self.column);
        let mut amp = None;
        let mut state = BasisState::ground();
        let mut seen: Vec<String> = Vec::new();
        self.skip_ws();
        if self.peek() == Some('}') {
            return Err(self.error("record has no `amp` field"));
        }
        loop {
            let (line, column) = (self.line, self.column);
            let key = self.word();
            if key.is_empty() {
                return Err(self.error("expected field name"));
            }
            if seen.contains(&key) {
                return Err(ParseError::new(line, column, format!("duplicate field `{key}`")));
            }
            self.expect(':')?;
            match key.as_str() {
                "amp" => {
                    self.expect('[')?;
                    let re = self.float()?;
                    self.expect(',')?;
                    let im = self.float()?;
                    self.expect(']')?;
                    amp = Some(Amplitude::new(re, im));
                }
                "register" => state.register = self.natural()?,
                "pc" => state.pc = self.natural()?,
                "fuel" => state.fuel = self.natural()?,
                "input" => state.input = self.naturals()?,
                "output" => state.output = self.naturals()?,
                "mem" => {
                    self.expect('{')?;
                    self.skip_ws();
                    if self.peek() == Some('}') {
                        self.bump();
                    } else {
                        loop {
                            let (l, c) = (self.line, self.column);
                            let addr = self.address()?;
                            if state.mem_ref(addr).is_some() {
                                return Err(ParseError::new(l, c, format!("duplicate address {addr}")));
                            }
                            self.expect(':')?;
                            let v = self.natural()?;
                            state.set_mem(addr, v);
                            self.skip_ws();
                            match self.bump() {
                                Some(',') => continue,
                                Some('}') => break,
                                _ => return Err(self.error("expected `,` or `}` in mem")),
                            }
                        }
                    }
                }
                other => {
                    return Err(ParseError::new(line, column, format!("unknown field `{other}`")));
                }
            }
            seen.push(key);
            self.skip_ws();
            match self.bump() {
                Some(',') => continue,
                Some('}') => break,
                _ => return Err(self.error("expected `,` or `}` after field")),
            }
        }
        let amp = amp.ok_or_else(|| ParseError::new(start_line, start_col, "record has no `amp` field"))?;
        Ok((amp, state))
    }
}
