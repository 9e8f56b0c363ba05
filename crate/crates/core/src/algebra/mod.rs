//! Operator expressions over machine locations.
//!
//! Every memory location carries a bosonic raising and lowering operator.
//! Programs and Hamiltonians compile to [`OperatorExpr`] trees, which [`apply_expr`] evaluates on superpositions of basis states.

mod closed_form;
mod display;
mod eval;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::{BigInt, BigUint};

use crate::fock::{Amplitude, BasisState};
use crate::isa::Instruction;

pub use closed_form::{
    bosonic_commutator, check_commutator, verify_closed_form, ClosedFormKind, CLOSED_FORM_BOUND,
};
pub use eval::{
    apply_expr, apply_primitive, eval_exponent, EvaluatedTerm, Evaluator, MAX_EXPLICIT_POWER,
};

/// Default recursion budget, one unit per recursive re-entry.
pub const DEFAULT_FUEL: u64 = 10;

/// A named machine location.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Location {
    Register,
    ProgramCounter,
    Fuel,
    /// Head of the input stream.
    In,
    /// Tail of the output stream.
    Out,
    Mem(u64),
}

impl Location {
    pub fn is_stream(self) -> bool {
        matches!(self, Location::In | Location::Out)
    }

    /// Value of this location in `state`. `In` reads the stream head (zero
    /// when exhausted) and `Out` always reads zero.
    pub fn read(self, state: &BasisState) -> BigUint {
        match self {
            Location::Register => state.register.clone(),
            Location::ProgramCounter => state.pc.clone(),
            Location::Fuel => state.fuel.clone(),
            Location::In => state.input.first().cloned().unwrap_or_default(),
            Location::Out => BigUint::default(),
            Location::Mem(a) => state.mem(a),
        }
    }

    /// Overwrites a non-stream location.
    pub(crate) fn write(self, state: &mut BasisState, value: BigUint) {
        match self {
            Location::Register => state.register = value,
            Location::ProgramCounter => state.pc = value,
            Location::Fuel => state.fuel = value,
            Location::Mem(a) => state.set_mem(a, value),
            Location::In | Location::Out => unreachable!("stream locations are not writable"),
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Register => f.write_str("register"),
            Location::ProgramCounter => f.write_str("pc"),
            Location::Fuel => f.write_str("fuel"),
            Location::In => f.write_str("in"),
            Location::Out => f.write_str("out"),
            Location::Mem(a) => write!(f, "mem[{a}]"),
        }
    }
}

/// Integer-valued expression over number-operator eigenvalues.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExponentExpr {
    Const(BigInt),
    Number(Location),
    Add(Box<ExponentExpr>, Box<ExponentExpr>),
    Sub(Box<ExponentExpr>, Box<ExponentExpr>),
    Mul(Box<ExponentExpr>, Box<ExponentExpr>),
    /// 1 when the argument is `>= 0`, else 0.
    Theta(Box<ExponentExpr>),
    /// 1 when the argument is exactly 0, else 0.
    ThetaTheta(Box<ExponentExpr>),
}

impl ExponentExpr {
    pub fn constant(v: impl Into<BigInt>) -> Self {
        ExponentExpr::Const(v.into())
    }

    pub fn number(loc: Location) -> Self {
        ExponentExpr::Number(loc)
    }

    pub fn theta(self) -> Self {
        ExponentExpr::Theta(Box::new(self))
    }

    pub fn theta_theta(self) -> Self {
        ExponentExpr::ThetaTheta(Box::new(self))
    }

    /// `θθ(N_pc − index)`: the guard that selects instruction `index`.
    pub fn at_pc(index: u64) -> Self {
        (ExponentExpr::number(Location::ProgramCounter) - ExponentExpr::constant(index)).theta_theta()
    }

    /// True for guards of the form `θθ(N_pc − c)`; each firing of such a
    /// guard is counted as one executed program step.
    pub fn is_step_guard(&self) -> bool {
        match self {
            ExponentExpr::ThetaTheta(inner) => matches!(
                inner.as_ref(),
                ExponentExpr::Sub(a, b)
                    if **a == ExponentExpr::Number(Location::ProgramCounter)
                        && matches!(**b, ExponentExpr::Const(_))
            ),
            _ => false,
        }
    }
}

impl Add for ExponentExpr {
    type Output = ExponentExpr;
    fn add(self, rhs: Self) -> Self {
        ExponentExpr::Add(Box::new(self), Box::new(rhs))
    }
}

impl Sub for ExponentExpr {
    type Output = ExponentExpr;
    fn sub(self, rhs: Self) -> Self {
        ExponentExpr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl Mul for ExponentExpr {
    type Output = ExponentExpr;
    fn mul(self, rhs: Self) -> Self {
        ExponentExpr::Mul(Box::new(self), Box::new(rhs))
    }
}

/// Diagonal normalization factors, functions of an exponent value `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagonalForm {
    /// `√k`
    Sqrt,
    /// `1/√k`; singular at 0
    InvSqrt,
    /// `√(k!)`
    SqrtFactorial,
    /// `1/√(k!)`
    InvSqrtFactorial,
}

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorExpr {
    Identity,
    Raise(Location),
    Lower(Location),
    NumberOp(Location),
    /// Sets a location to zero with amplitude 1.
    Clear(Location),
    /// Copies `src` into a zero `dst` with amplitude 1.
    Copy { dst: Location, src: Location },
    ScalarMul(Amplitude, Box<OperatorExpr>),
    /// Factors apply right to left: the last element acts first.
    Product(Vec<OperatorExpr>),
    Sum(Vec<OperatorExpr>),
    GuardedPower { base: Box<OperatorExpr>, exponent: ExponentExpr },
    Diagonal { form: DiagonalForm, arg: ExponentExpr },
    Instruction(Instruction),
    RecursiveRef(String),
    /// Readout: marks the term halted.
    Bra,
}

impl OperatorExpr {
    pub fn raise(loc: Location) -> Self {
        OperatorExpr::Raise(loc)
    }

    pub fn lower(loc: Location) -> Self {
        OperatorExpr::Lower(loc)
    }

    pub fn number(loc: Location) -> Self {
        OperatorExpr::NumberOp(loc)
    }

    pub fn clear(loc: Location) -> Self {
        OperatorExpr::Clear(loc)
    }

    pub fn copy(dst: Location, src: Location) -> Self {
        OperatorExpr::Copy { dst, src }
    }

    pub fn scalar(c: Amplitude, e: OperatorExpr) -> Self {
        OperatorExpr::ScalarMul(c, Box::new(e))
    }

    pub fn product(factors: Vec<OperatorExpr>) -> Self {
        assert!(!factors.is_empty(), "empty product");
        OperatorExpr::Product(factors)
    }

    pub fn sum(terms: Vec<OperatorExpr>) -> Self {
        assert!(!terms.is_empty(), "empty sum");
        OperatorExpr::Sum(terms)
    }

    pub fn power(base: OperatorExpr, exponent: ExponentExpr) -> Self {
        OperatorExpr::GuardedPower {
            base: Box::new(base),
            exponent,
        }
    }

    pub fn diagonal(form: DiagonalForm, arg: ExponentExpr) -> Self {
        OperatorExpr::Diagonal { form, arg }
    }

    pub fn recursive(label: impl Into<String>) -> Self {
        OperatorExpr::RecursiveRef(label.into())
    }

    /// `Copy(dst, src)` after `Clear(dst)`: overwrites `dst` with `src`.
    pub fn clear_then_copy(dst: Location, src: Location) -> Self {
        OperatorExpr::product(vec![OperatorExpr::copy(dst, src), OperatorExpr::clear(dst)])
    }

    /// Adds one to `loc` with amplitude 1.
    pub fn increment(loc: Location) -> Self {
        OperatorExpr::product(vec![
            OperatorExpr::diagonal(DiagonalForm::InvSqrt, ExponentExpr::number(loc)),
            OperatorExpr::raise(loc),
        ])
    }

    /// Subtracts one from `loc` with amplitude 1; annihilates at zero.
    pub fn decrement(loc: Location) -> Self {
        OperatorExpr::product(vec![
            OperatorExpr::diagonal(
                DiagonalForm::InvSqrt,
                ExponentExpr::number(loc) + ExponentExpr::constant(1),
            ),
            OperatorExpr::lower(loc),
        ])
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            OperatorExpr::ScalarMul(_, e) => 1 + e.size(),
            OperatorExpr::Product(v) | OperatorExpr::Sum(v) => 1 + v.iter().map(Self::size).sum::<usize>(),
            OperatorExpr::GuardedPower { base, .. } => 1 + base.size(),
            _ => 1,
        }
    }
}

/// Named definitions that `RecursiveRef` nodes resolve against.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Definitions {
    map: BTreeMap<String, OperatorExpr>,
}

impl Definitions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, label: impl Into<String>, body: OperatorExpr) {
        self.map.insert(label.into(), body);
    }

    pub fn get(&self, label: &str) -> Option<&OperatorExpr> {
        self.map.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &OperatorExpr)> + '_ {
        self.map.iter().map(|(k, v)| (k.as_str(), v))
    }
}
