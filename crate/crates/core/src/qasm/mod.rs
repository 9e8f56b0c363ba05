//! The word-level assembly language.
//!
//! ```text
//! 1 INPUT x     ; optional line numbers are ignored
//! 2 INPUT y
//! 3 LOAD x
//! 4 ADD y
//! 5 STORE z
//! 6 OUTPUT z
//! 7 HALT
//! ```
//!
//! Programs run either on the classical [`interpret`]er or, after
//! compilation to an operator expression, through the algebraic evaluator
//! ([`run_algebraic`]). Both paths must agree on every deterministic program.

mod compile;
mod interp;
mod parse;
mod superposed;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::fock::{BasisState, Superposition};
use crate::isa::{Instruction, Opcode, Operand};

pub use compile::{
    compile_guarded, compile_sequential, instruction_factor, literal_add_form, run_algebraic,
    run_algebraic_from, CompiledProgram, PROGRAM_LABEL,
};
pub use interp::{interpret, interpret_from, DEFAULT_STEP_LIMIT};
pub use parse::parse_program;
pub use superposed::run_superposed;

/// An assembled program. Instruction `i` (1-based) sits at `instructions[i - 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    pub instructions: Vec<Instruction>,
    /// Symbol names in first-use order with their addresses.
    pub symbols: Vec<(String, u64)>,
    /// Constant pool: each distinct immediate and the address holding it.
    pub pool: Vec<(BigUint, u64)>,
}

impl Program {
    /// Builds a program from instructions with numeric addresses, laying out
    /// the constant pool after the highest address in use.
    pub fn from_instructions(instructions: Vec<Instruction>) -> Self {
        Self::with_symbols(instructions, Vec::new())
    }

    pub fn with_symbols(instructions: Vec<Instruction>, symbols: Vec<(String, u64)>) -> Self {
        let next = instructions
            .iter()
            .filter_map(Instruction::address)
            .chain(symbols.iter().map(|(_, a)| *a))
            .max()
            .map_or(0, |a| a + 1);
        let mut pool: Vec<(BigUint, u64)> = Vec::new();
        for instr in &instructions {
            if let Operand::Immediate(k) = &instr.operand {
                if !pool.iter().any(|(v, _)| v == k) {
                    let addr = next + pool.len() as u64;
                    pool.push((k.clone(), addr));
                }
            }
        }
        Program {
            instructions,
            symbols,
            pool,
        }
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Instruction at 1-based index `i`.
    pub fn get(&self, i: u64) -> Option<&Instruction> {
        let i = usize::try_from(i).ok()?;
        i.checked_sub(1).and_then(|k| self.instructions.get(k))
    }

    pub fn address_of(&self, name: &str) -> Option<u64> {
        self.symbols.iter().find(|(n, _)| n == name).map(|(_, a)| *a)
    }

    pub fn pool_address(&self, value: &BigUint) -> Option<u64> {
        self.pool.iter().find(|(v, _)| v == value).map(|(_, a)| *a)
    }

    pub fn has_jumps(&self) -> bool {
        self.instructions.iter().any(|i| i.opcode.is_jump())
    }

    /// All-zero machine with the constant pool loaded and `input` queued.
    pub fn initial_state(&self, input: &[BigUint]) -> BasisState {
        let mut s = BasisState::with_input(input.iter().cloned());
        for (v, a) in &self.pool {
            s.set_mem(*a, v.clone());
        }
        s
    }

    /// Numbered listing with symbolic names restored where known.
    pub fn listing(&self) -> String {
        let names: BTreeMap<u64, &str> = self.symbols.iter().map(|(n, a)| (*a, n.as_str())).collect();
        let width = self.len().to_string().len();
        let mut out = String::new();
        for (i, instr) in self.instructions.iter().enumerate() {
            write!(out, "{:>width$} {}", i + 1, instr.opcode).unwrap();
            match &instr.operand {
                Operand::None => {}
                Operand::Address(a) => match names.get(a) {
                    Some(n) => write!(out, " {n}").unwrap(),
                    None => write!(out, " {a}").unwrap(),
                },
                Operand::Immediate(k) => write!(out, " #{k}").unwrap(),
                Operand::ShiftCount(k) => write!(out, " {k}").unwrap(),
            }
            out.push('\n');
        }
        out
    }

    /// Listing with numeric addresses and the symbol name as a comment.
    pub fn numeric_listing(&self) -> String {
        let names: BTreeMap<u64, &str> = self.symbols.iter().map(|(n, a)| (*a, n.as_str())).collect();
        let mut out = String::new();
        for (i, instr) in self.instructions.iter().enumerate() {
            write!(out, "{} {}", i + 1, instr).unwrap();
            if let Some(n) = instr.address().and_then(|a| names.get(&a)) {
                write!(out, " ; {n}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Outcome of running a program.
#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub final_state: Superposition,
    /// Halt flag for each term of `final_state`, in the same order.
    pub halted: Vec<bool>,
    pub steps_executed: u64,
    /// Output stream of each term of `final_state`.
    pub outputs: Vec<Vec<BigUint>>,
    /// Program counters in execution order (classical runs only).
    pub trace: Option<Vec<u64>>,
}

impl RunResult {
    /// The final basis state when the result is a single term.
    pub fn single(&self) -> Option<&BasisState> {
        match self.final_state.terms() {
            [(_, s)] => Some(s),
            _ => None,
        }
    }

    pub(crate) fn from_terms(terms: Vec<(crate::fock::Amplitude, BasisState, bool)>, steps: u64) -> Self {
        let halted = terms.iter().map(|t| t.2).collect();
        let outputs = terms.iter().map(|t| t.1.output.clone()).collect();
        RunResult {
            final_state: Superposition::merge_with_tolerance(terms.into_iter().map(|t| (t.0, t.1)), 0.0),
            halted,
            steps_executed: steps,
            outputs,
            trace: None,
        }
    }
}

pub(crate) fn is_halt(instr: &Instruction) -> bool {
    instr.opcode == Opcode::Halt
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pool_follows_highest_address() {
        let p = Program::from_instructions(vec![
            Instruction::imm(Opcode::Load, 5u32),
            Instruction::addr(Opcode::Store, 3),
            Instruction::imm(Opcode::Add, 5u32),
            Instruction::imm(Opcode::Subtract, 1u32),
            Instruction::bare(Opcode::Halt),
        ]);
        assert_eq!(p.pool, vec![(5u32.into(), 4), (1u32.into(), 5)]);
        let s = p.initial_state(&[]);
        assert_eq!(s.mem(4), 5u32.into());
        assert_eq!(p.get(2), Some(&Instruction::addr(Opcode::Store, 3)));
        assert_eq!(p.get(0), None);
        assert_eq!(p.get(6), None);
    }
}
