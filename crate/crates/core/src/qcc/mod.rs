//! Quantum C: a tiny unsigned-integer C subset.
//!
//! ```text
//! input(b); input(c);
//! a = b + c;        // LOAD b / ADD c / STORE a
//! ptr = &a;
//! *ptr = *ptr << 1;
//! if (a == 0) goto done;
//! output(a);
//! done: halt;
//! ```
//!
//! Programs lower either to assembly ([`lower_to_qasm`]) or, for plain
//! sums, straight to a set-value operator ([`lower_direct`]).

mod direct;
mod lower;
mod parse;

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::error::ParseError;

pub use direct::{address_commutator, address_operator, check_address_commutator, lower_direct, star_set};
pub use lower::{address_of, lower_to_qasm, lower_to_qasm_with, LowerOptions, SymbolTable, DEFAULT_DEREF_WINDOW};
pub use parse::parse_c;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::And => "&",
            BinOp::Or => "|",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Lit(BigUint),
    Var(String),
    Deref(Box<Expr>),
    AddressOf(String),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    /// Left shift by a positive count, right shift by a negative one.
    Shift(Box<Expr>, i64),
}

impl Expr {
    pub fn var(name: &str) -> Self {
        Expr::Var(name.to_string())
    }
    pub fn lit(v: impl Into<BigUint>) -> Self {
        Expr::Lit(v.into())
    }
    pub fn binary(op: BinOp, a: Expr, b: Expr) -> Self {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Lit(v) => write!(f, "{v}"),
            Expr::Var(v) => f.write_str(v),
            Expr::Deref(e) => write!(f, "*({e})"),
            Expr::AddressOf(v) => write!(f, "&{v}"),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Not(e) => write!(f, "~({e})"),
            Expr::Shift(e, k) if *k >= 0 => write!(f, "({e} << {k})"),
            Expr::Shift(e, k) => write!(f, "({e} >> {})", k.unsigned_abs()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LValue {
    Var(String),
    Deref(Expr),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Assign { target: LValue, value: Expr },
    Goto(String),
    IfZeroGoto(Expr, String),
    Label(String),
    Input(String),
    Output(Expr),
    Halt,
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Assign {
                target: LValue::Var(v),
                value,
            } => write!(f, "{v} = {value};"),
            Stmt::Assign {
                target: LValue::Deref(p),
                value,
            } => write!(f, "*({p}) = {value};"),
            Stmt::Goto(l) => write!(f, "goto {l};"),
            Stmt::IfZeroGoto(e, l) => write!(f, "if ({e} == 0) goto {l};"),
            Stmt::Label(l) => write!(f, "{l}:"),
            Stmt::Input(v) => write!(f, "input({v});"),
            Stmt::Output(e) => write!(f, "output({e});"),
            Stmt::Halt => f.write_str("halt;"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CProgram {
    pub statements: Vec<Stmt>,
    /// Source line of each statement.
    pub lines: Vec<usize>,
}

impl fmt::Display for CProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QccError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: undefined label `{label}`")]
    UndefinedLabel { label: String, line: usize },
    #[error("line {line}: label `{label}` defined twice")]
    DuplicateLabel { label: String, line: usize },
    #[error("unsupported construct: {0}")]
    UnsupportedConstruct(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}
