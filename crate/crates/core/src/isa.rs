//! The word-level instruction set and its value semantics.
//!
//! Both the classical interpreter and the operator evaluator (through
//! `OperatorExpr::Instruction`) use [`execute_data`] for the register
//! arithmetic, so the two execution paths share one definition of what each
//! instruction does to values.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::RuntimeError;
use crate::fock::BasisState;

/// Largest accepted `|k|` for `SHIFT k`.
pub const MAX_SHIFT: i64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Opcode {
    Load,
    Store,
    Shift,
    Add,
    Subtract,
    Multiply,
    Divide,
    And,
    Or,
    Not,
    Input,
    Output,
    Tra,
    Tzr,
    Halt,
}

impl Opcode {
    pub const ALL: [Opcode; 15] = [
        Opcode::Load,
        Opcode::Store,
        Opcode::Shift,
        Opcode::Add,
        Opcode::Subtract,
        Opcode::Multiply,
        Opcode::Divide,
        Opcode::And,
        Opcode::Or,
        Opcode::Not,
        Opcode::Input,
        Opcode::Output,
        Opcode::Tra,
        Opcode::Tzr,
        Opcode::Halt,
    ];

    pub fn mnemonic(self) -> &'static str {
        match self {
            Opcode::Load => "LOAD",
            Opcode::Store => "STORE",
            Opcode::Shift => "SHIFT",
            Opcode::Add => "ADD",
            Opcode::Subtract => "SUBTRACT",
            Opcode::Multiply => "MULTIPLY",
            Opcode::Divide => "DIVIDE",
            Opcode::And => "AND",
            Opcode::Or => "OR",
            Opcode::Not => "NOT",
            Opcode::Input => "INPUT",
            Opcode::Output => "OUTPUT",
            Opcode::Tra => "TRA",
            Opcode::Tzr => "TZR",
            Opcode::Halt => "HALT",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<Opcode> {
        Opcode::ALL.into_iter().find(|op| op.mnemonic().eq_ignore_ascii_case(s))
    }

    pub fn is_jump(self) -> bool {
        matches!(self, Opcode::Tra | Opcode::Tzr)
    }

    /// Opcodes that also accept a `#k` immediate operand.
    pub fn accepts_immediate(self) -> bool {
        matches!(self, Opcode::Load | Opcode::Add | Opcode::Subtract)
    }

    pub fn takes_address(self) -> bool {
        !matches!(self, Opcode::Shift | Opcode::Not | Opcode::Halt)
    }
}

impl fmt::Display for Opcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Operand {
    None,
    Address(u64),
    Immediate(BigUint),
    ShiftCount(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Instruction {
    pub opcode: Opcode,
    pub operand: Operand,
}

impl Instruction {
    pub fn new(opcode: Opcode, operand: Operand) -> Self {
        Instruction { opcode, operand }
    }

    pub fn addr(opcode: Opcode, addr: u64) -> Self {
        Instruction::new(opcode, Operand::Address(addr))
    }

    pub fn imm(opcode: Opcode, value: impl Into<BigUint>) -> Self {
        Instruction::new(opcode, Operand::Immediate(value.into()))
    }

    pub fn bare(opcode: Opcode) -> Self {
        Instruction::new(opcode, Operand::None)
    }

    pub fn shift(k: i64) -> Self {
        Instruction::new(Opcode::Shift, Operand::ShiftCount(k))
    }

    pub fn address(&self) -> Option<u64> {
        match self.operand {
            Operand::Address(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.operand {
            Operand::None => write!(f, "{}", self.opcode),
            Operand::Address(a) => write!(f, "{} {}", self.opcode, a),
            Operand::Immediate(k) => write!(f, "{} #{}", self.opcode, k),
            Operand::ShiftCount(k) => write!(f, "{} {}", self.opcode, k),
        }
    }
}

fn operand_value(instr: &Instruction, state: &BasisState) -> BigUint {
    match &instr.operand {
        Operand::Address(a) => state.mem(*a),
        Operand::Immediate(k) => k.clone(),
        Operand::None | Operand::ShiftCount(_) => BigUint::zero(),
    }
}

/// Bitwise complement through the highest set bit; zero maps to zero.
pub fn not_value(v: &BigUint) -> BigUint {
    if v.is_zero() {
        return BigUint::zero();
    }
    let mask = (BigUint::one() << v.bits()) - BigUint::one();
    v ^ mask
}

/// Register result of `SHIFT k`: multiply by `2^k` for `k >= 0`, floor-divide
/// by `2^-k` otherwise.
pub fn shift_value(v: &BigUint, k: i64) -> Result<BigUint, RuntimeError> {
    if k.abs() > MAX_SHIFT {
        return Err(RuntimeError::ShiftTooLarge(k));
    }
    Ok(if k >= 0 { v << (k as u64) } else { v >> ((-k) as u64) })
}

/// Applies a non-control instruction to a basis state, returning the
/// successor state. The program counter is left untouched.
///
/// `TRA`, `TZR` and `HALT` have no data effect and return the state unchanged;
/// control flow is the caller's business.
pub fn execute_data(instr: &Instruction, state: &BasisState) -> Result<BasisState, RuntimeError> {
    let mut next = state.clone();
    let r = &state.register;
    match instr.opcode {
        Opcode::Load => next.register = operand_value(instr, state),
        Opcode::Store => {
            let a = instr.address().expect("STORE takes an address");
            next.set_mem(a, r.clone());
        }
        Opcode::Shift => {
            let Operand::ShiftCount(k) = instr.operand else {
                panic!("SHIFT without shift count")
            };
            next.register = shift_value(r, k)?;
        }
        Opcode::Add => next.register = r + operand_value(instr, state),
        Opcode::Subtract => {
            let m = operand_value(instr, state);
            if *r < m {
                return Err(RuntimeError::SubtractUnderflow {
                    register: r.clone(),
                    operand: m,
                });
            }
            next.register = r - m;
        }
        Opcode::Multiply => next.register = r * operand_value(instr, state),
        Opcode::Divide => {
            let m = operand_value(instr, state);
            if m.is_zero() {
                return Err(RuntimeError::DivideByZero);
            }
            next.register = r / m;
        }
        Opcode::And => next.register = r & operand_value(instr, state),
        Opcode::Or => next.register = r | operand_value(instr, state),
        Opcode::Not => next.register = not_value(r),
        Opcode::Input => {
            let a = instr.address().expect("INPUT takes an address");
            if next.input.is_empty() {
                return Err(RuntimeError::InputExhausted);
            }
            let v = next.input.remove(0);
            next.set_mem(a, v);
        }
        Opcode::Output => {
            let a = instr.address().expect("OUTPUT takes an address");
            next.output.push(state.mem(a));
        }
        Opcode::Tra | Opcode::Tzr | Opcode::Halt => {}
    }
    Ok(next)
}
