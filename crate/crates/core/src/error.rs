use std::fmt;

use num_bigint::{BigInt, BigUint};
use thiserror::Error;

use crate::algebra::Location;

/// A syntax error in one of the text formats (assembly, grammar, C subset, state files).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Failures raised while a program or operator expression acts on machine states.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuntimeError {
    #[error("copy onto nonzero destination {dst}")]
    CopyOntoNonzero { dst: Location },
    #[error("recursion fuel exhausted")]
    FuelExhausted,
    #[error("exponent evaluated to negative value {0}")]
    NegativeExponent(BigInt),
    #[error("subtract underflow: register {register} < operand {operand}")]
    SubtractUnderflow { register: BigUint, operand: BigUint },
    #[error("divide by zero")]
    DivideByZero,
    #[error("input stream exhausted")]
    InputExhausted,
    #[error("step limit {0} exceeded")]
    StepLimitExceeded(u64),
    #[error("program counter {0} out of range")]
    PcOutOfRange(BigUint),
    #[error("operation not defined on stream location {0}")]
    StreamAccess(Location),
    #[error("unresolved recursive reference `{0}`")]
    UnresolvedReference(String),
    #[error("normalization factor 1/sqrt(0)")]
    SingularNormalization,
    #[error("value {0} too large for an explicit power or factorial")]
    PowerTooLarge(BigUint),
    #[error("shift count {0} too large")]
    ShiftTooLarge(i64),
    #[error("amplitudes not normalized: sum of squared moduli is {0}")]
    NormViolation(String),
    #[error("state left the truncation window: {0}")]
    TruncationOverflow(String),
    #[error("reachable state space has more than {0} states")]
    StateSpaceTooLarge(usize),
}

/// Errors raised by the compilers that lower programs into operator expressions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("instruction {index} ({opcode}) is a jump; sequential compilation supports straight-line programs only")]
    JumpsNotSupported { index: usize, opcode: String },
}

/// Operations on a superposition that need at least one term.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("superposition has no terms")]
    EmptyState,
}
