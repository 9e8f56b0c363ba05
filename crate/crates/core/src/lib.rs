//! Simulator and compiler toolkit for quantum assembly languages.
//!
//! Machine states are superpositions of Fock-like basis states. Assembly and
//! C-subset programs lower to [`algebra::OperatorExpr`] trees that act on
//! them. The crate also covers probabilistic grammars, Hamiltonian time
//! evolution and one-bit fermionic instructions.

pub mod algebra;
pub mod bitlevel;
pub mod cli;
pub mod error;
pub mod evolution;
pub mod fock;
pub mod grammar;
pub mod isa;
pub mod qasm;
pub mod qcc;

pub use algebra::{ExponentExpr, Location, OperatorExpr};
pub use error::{CompileError, ParseError, RuntimeError, StateError};
pub use fock::{Amplitude, BasisState, Superposition};
