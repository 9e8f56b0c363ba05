use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;

use super::{is_halt, Program};
use crate::error::ParseError;
use crate::isa::{Instruction, Opcode, Operand};

enum RawOperand {
    None,
    Numeric(u64),
    Symbol(String),
    Immediate(BigUint),
    Shift(i64),
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Splits a line into tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (line[..byte].chars().count() + 1, tok))
        .collect()
}

fn operand(op: Opcode, col: usize, tok: &str, line: usize) -> Result<RawOperand, ParseError> {
    let err = |msg: String| ParseError::new(line, col, msg);
    if op == Opcode::Shift {
        return tok
            .parse::<i64>()
            .map(RawOperand::Shift)
            .map_err(|_| err(format!("SHIFT takes a signed integer, found `{tok}`")));
    }
    if let Some(k) = tok.strip_prefix('#') {
        if !op.accepts_immediate() {
            return Err(err(format!("{op} does not accept an immediate operand")));
        }
        if !is_digits(k) {
            return Err(err(format!("malformed immediate `{tok}`")));
        }
        return Ok(RawOperand::Immediate(k.parse().expect("digits")));
    }
    if is_digits(tok) {
        return tok
            .parse::<u64>()
            .map(RawOperand::Numeric)
            .map_err(|_| err(format!("address `{tok}` does not fit in 64 bits")));
    }
    if is_identifier(tok) {
        return Ok(RawOperand::Symbol(tok.to_string()));
    }
    Err(err(format!("malformed operand `{tok}`")))
}

/// Parses assembly text. Symbols get addresses in order of first use,
/// starting at 0 and skipping any address written numerically.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut raw: Vec<(Opcode, RawOperand)> = Vec::new();
    for (idx, full) in text.lines().enumerate() {
        let line_no = idx + 1;
        let code = full.split(';').next().unwrap_or("");
        let mut toks = tokens(code);
        if toks.is_empty() {
            continue;
        }
        if toks.len() > 1 && is_digits(toks[0].1) {
            toks.remove(0);
        }
        let (col, name) = toks[0];
        let op = Opcode::from_mnemonic(name)
            .ok_or_else(|| ParseError::new(line_no, col, format!("unknown opcode `{name}`")))?;
        let wants_operand = op != Opcode::Not && op != Opcode::Halt;
        let operand = match (wants_operand, toks.get(1)) {
            (false, None) => RawOperand::None,
            (false, Some((c, _))) => {
                return Err(ParseError::new(line_no, *c, format!("{op} takes no operand")));
            }
            (true, None) => {
                let end = code.trim_end().chars().count() + 1;
                return Err(ParseError::new(line_no, end, format!("{op} requires an operand")));
            }
            (true, Some((c, tok))) => operand(op, *c, tok, line_no)?,
        };
        if let Some((c, tok)) = toks.get(2) {
            return Err(ParseError::new(line_no, *c, format!("unexpected token `{tok}`")));
        }
        raw.push((op, operand));
    }
    if raw.is_empty() {
        return Err(ParseError::new(1, 1, "program has no instructions"));
    }

    let numeric: BTreeSet<u64> = raw
        .iter()
        .filter_map(|(_, o)| match o {
            RawOperand::Numeric(a) => Some(*a),
            _ => None,
        })
        .collect();
    let mut symbols: Vec<(String, u64)> = Vec::new();
    let mut lookup: HashMap<String, u64> = HashMap::new();
    let mut next = 0u64;
    let mut instructions = Vec::with_capacity(raw.len());
    for (op, o) in raw {
        let operand = match o {
            RawOperand::None => Operand::None,
            RawOperand::Numeric(a) => Operand::Address(a),
            RawOperand::Immediate(k) => Operand::Immediate(k),
            RawOperand::Shift(k) => Operand::ShiftCount(k),
            RawOperand::Symbol(name) => {
                let addr = *lookup.entry(name.clone()).or_insert_with(|| {
                    while numeric.contains(&next) {
                        next += 1;
                    }
                    let a = next;
                    next += 1;
                    symbols.push((name, a));
                    a
                });
                Operand::Address(addr)
            }
        };
        instructions.push(Instruction::new(op, operand));
    }
    if !instructions.iter().any(is_halt) {
        let last = text.lines().count().max(1);
        return Err(ParseError::new(last, 1, "program has no HALT instruction"));
    }
    Ok(Program::with_symbols(instructions, symbols))
}
