//! Time evolution `e^{−iHt}|Ψ(0)⟩` by truncated power series.
//!
//! States here live on memory modes only: the register and counters stay
//! zero and mode `m` is memory address `m`.

use std::collections::{BTreeMap, VecDeque};

use nalgebra::{DMatrix, DVector};
use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{Definitions, DiagonalForm, Evaluator, ExponentExpr, Location, OperatorExpr};
use crate::error::RuntimeError;
use crate::fock::{Amplitude, BasisState, Superposition};
use crate::isa::{Instruction, Opcode};

/// Largest basis the dense oracle will build.
pub const ORACLE_STATE_LIMIT: usize = 10_000;

pub const DEFAULT_MAX_OCCUPANCY: u64 = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    pub terms: Vec<OperatorExpr>,
    pub mode_count: u64,
    /// States with an occupancy above this are rejected.
    pub max_occupancy: u64,
    /// A mode whose occupation means the next application of `H` would
    /// move amplitude past the last mode.
    pub leak_mode: Option<u64>,
}

fn mem(m: u64) -> Location {
    Location::Mem(m)
}

impl Hamiltonian {
    pub fn zero(mode_count: u64) -> Self {
        Hamiltonian {
            terms: Vec::new(),
            mode_count,
            max_occupancy: DEFAULT_MAX_OCCUPANCY,
            leak_mode: None,
        }
    }

    pub fn with_max_occupancy(mut self, max: u64) -> Self {
        self.max_occupancy = max;
        self
    }

    /// The whole Hamiltonian as one expression (`Sum` of its terms).
    pub fn expr(&self) -> OperatorExpr {
        if self.terms.is_empty() {
            OperatorExpr::scalar(Amplitude::zero(), OperatorExpr::Identity)
        } else {
            OperatorExpr::sum(self.terms.clone())
        }
    }

    /// Fails if any state in `s` lies outside the truncation window or sits
    /// where another application of `H` would leave it.
    pub fn check_window(&self, s: &Superposition) -> Result<(), RuntimeError> {
        for st in s.states() {
            for (a, v) in st.memory() {
                if a >= self.mode_count {
                    return Err(RuntimeError::TruncationOverflow(format!(
                        "mode {a} is outside the {} modes",
                        self.mode_count
                    )));
                }
                if v > &BigUint::from(self.max_occupancy) {
                    return Err(RuntimeError::TruncationOverflow(format!(
                        "mode {a} holds {v}, above the occupancy bound {}",
                        self.max_occupancy
                    )));
                }
            }
            if let Some(m) = self.leak_mode {
                if !st.mem(m).is_zero() {
                    return Err(RuntimeError::TruncationOverflow(format!(
                        "mode {m} is occupied and would hop past the last mode"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `H|s⟩` after a window check.
    pub fn apply(&self, s: &Superposition) -> Result<Superposition, RuntimeError> {
        self.check_window(s)?;
        let defs = Definitions::new();
        Evaluator::new(&defs).with_tolerance(0.0).apply(&self.expr(), s, 0)
    }
}

/// `H = Σ_{m=0}^{modes−2} a_{m+1}† a_m`.
///
/// # Panics
/// If `modes < 2`.
pub fn build_hop_hamiltonian(modes: u64) -> Hamiltonian {
    assert!(modes >= 2, "hop Hamiltonian needs at least 2 modes");
    let terms = (0..modes - 1)
        .map(|m| OperatorExpr::product(vec![OperatorExpr::raise(mem(m + 1)), OperatorExpr::lower(mem(m))]))
        .collect();
    Hamiltonian {
        terms,
        mode_count: modes,
        max_occupancy: DEFAULT_MAX_OCCUPANCY,
        leak_mode: Some(modes - 1),
    }
}

/// One adder term: `(a_{m+2}†)^{N_m+N_{m+1}} (a_{m+2})^{N_{m+2}} / (√((N_m+N_{m+1})!) √(N_{m+2}!))`,
/// which sets mode `m+2` to `n_m + n_{m+1}` with amplitude 1.
pub fn adder_term(m: u64) -> OperatorExpr {
    let sum = ExponentExpr::number(mem(m)) + ExponentExpr::number(mem(m + 1));
    let own = ExponentExpr::number(mem(m + 2));
    OperatorExpr::product(vec![
        OperatorExpr::power(OperatorExpr::raise(mem(m + 2)), sum.clone()),
        OperatorExpr::diagonal(DiagonalForm::InvSqrtFactorial, sum),
        OperatorExpr::power(OperatorExpr::lower(mem(m + 2)), own.clone()),
        OperatorExpr::diagonal(DiagonalForm::InvSqrtFactorial, own),
    ])
}

/// `H = Σ_{m=0}^{modes−3}` of [`adder_term`]s.
///
/// # Panics
/// If `modes < 3`.
pub fn build_adder_hamiltonian(modes: u64) -> Hamiltonian {
    assert!(modes >= 3, "adder Hamiltonian needs at least 3 modes");
    Hamiltonian {
        terms: (0..modes - 2).map(adder_term).collect(),
        mode_count: modes,
        max_occupancy: DEFAULT_MAX_OCCUPANCY,
        leak_mode: None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderKind {
    Raise,
    Lower,
}

/// `a_m†` (or `a_m`) routed through the register used as scratch:
/// load `m`, move the register one step, store back, clear the register.
/// Equals the direct ladder operator, amplitude included, on states whose
/// register is zero.
pub fn ladder_via_register(m: u64, kind: LadderKind) -> OperatorExpr {
    let r = Location::Register;
    let ladder = match kind {
        LadderKind::Raise => OperatorExpr::raise(r),
        LadderKind::Lower => OperatorExpr::lower(r),
    };
    OperatorExpr::product(vec![
        OperatorExpr::clear(r),
        OperatorExpr::copy(mem(m), r),
        OperatorExpr::clear(mem(m)),
        ladder,
        OperatorExpr::copy(r, mem(m)),
        OperatorExpr::clear(r),
    ])
}

/// The assembly form of one hop term, `(STORE m+1)(ADD #1)(LOAD m+1)(STORE m)(SUBTRACT #1)(LOAD m)`.
/// Its memory map matches `a_{m+1}† a_m` when `n_m ≥ 1`; amplitudes differ.
pub fn instruction_hop_term(m: u64) -> OperatorExpr {
    let i = OperatorExpr::Instruction;
    OperatorExpr::product(vec![
        i(Instruction::addr(Opcode::Store, m + 1)),
        i(Instruction::imm(Opcode::Add, 1u32)),
        i(Instruction::addr(Opcode::Load, m + 1)),
        i(Instruction::addr(Opcode::Store, m)),
        i(Instruction::imm(Opcode::Subtract, 1u32)),
        i(Instruction::addr(Opcode::Load, m)),
    ])
}

/// `(−it)^q / q!` for `q = 0..=order`.
fn series_coefficients(t: f64, order: usize) -> Vec<Complex64> {
    let mut c = Vec::with_capacity(order + 1);
    let mut cur = Complex64::new(1.0, 0.0);
    c.push(cur);
    for q in 1..=order {
        cur = cur * Complex64::new(0.0, -t) / q as f64;
        c.push(cur);
    }
    c
}

/// `Σ_{q=0}^{order} (−it)^q/q! · H^q |s0⟩`, unnormalized.
pub fn evolve(h: &Hamiltonian, s0: &Superposition, t: f64, order: usize) -> Result<Superposition, RuntimeError> {
    let coeffs = series_coefficients(t, order);
    let mut acc: Vec<(Amplitude, BasisState)> = s0.terms().to_vec();
    let mut power = s0.clone();
    for c in coeffs.iter().skip(1) {
        power = h.apply(&power)?;
        acc.extend(power.terms().iter().map(|(a, s)| (a * c, s.clone())));
    }
    Ok(Superposition::merge_with_tolerance(acc, 0.0))
}

/// Independent check of [`evolve`]: enumerates the reachable basis, builds
/// the matrix of `H` on it and sums the series with matrix–vector products.
pub fn dense_oracle_evolve(
    h: &Hamiltonian,
    s0: &Superposition,
    t: f64,
    order: usize,
) -> Result<Superposition, RuntimeError> {
    let mut index: BTreeMap<BasisState, usize> = BTreeMap::new();
    let mut basis: Vec<BasisState> = Vec::new();
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    let intern = |s: &BasisState, index: &mut BTreeMap<BasisState, usize>, basis: &mut Vec<BasisState>| {
        if let Some(&i) = index.get(s) {
            return Ok((i, false));
        }
        if basis.len() == ORACLE_STATE_LIMIT {
            return Err(RuntimeError::StateSpaceTooLarge(ORACLE_STATE_LIMIT));
        }
        index.insert(s.clone(), basis.len());
        basis.push(s.clone());
        Ok((basis.len() - 1, true))
    };
    for (_, s) in s0.terms() {
        let (i, fresh) = intern(s, &mut index, &mut basis)?;
        if fresh {
            queue.push_back((i, 0));
        }
    }
    let mut columns: Vec<(usize, Vec<(usize, Complex64)>)> = Vec::new();
    while let Some((i, depth)) = queue.pop_front() {
        if depth == order {
            continue;
        }
        let image = h.apply(&Superposition::basis(basis[i].clone()))?;
        let mut col = Vec::new();
        for (a, s) in image.terms() {
            let (j, fresh) = intern(s, &mut index, &mut basis)?;
            if fresh {
                queue.push_back((j, depth + 1));
            }
            col.push((j, *a));
        }
        columns.push((i, col));
    }
    let n = basis.len();
    let mut matrix = DMatrix::<Complex64>::zeros(n, n);
    for (i, col) in columns {
        for (j, a) in col {
            matrix[(j, i)] += a;
        }
    }
    let mut v = DVector::<Complex64>::zeros(n);
    for (a, s) in s0.terms() {
        v[index[s]] += a;
    }
    let mut result = v.clone();
    let mut term = v;
    for q in 1..=order {
        term = (&matrix * term) * (Complex64::new(0.0, -t) / q as f64);
        result += &term;
    }
    Ok(Superposition::merge_with_tolerance(
        basis.into_iter().zip(result.iter()).map(|(s, a)| (*a, s)),
        0.0,
    ))
}

/// State with a single particle at mode `n`.
pub fn single_particle(n: u64) -> BasisState {
    BasisState::ground().with_mem(n, 1u32)
}

/// Squared moduli of each term, keyed by the occupied mode list.
pub fn raw_weights(s: &Superposition) -> Vec<(BasisState, f64)> {
    s.terms().iter().map(|(a, st)| (st.clone(), a.norm_sqr())).collect()
}

/// Mode holding the single particle of `s`, if it has exactly one.
pub fn particle_mode(s: &BasisState) -> Option<u64> {
    let cells: Vec<_> = s.memory().collect();
    match cells.as_slice() {
        [(a, v)] if v.to_u64() == Some(1) => Some(*a),
        _ => None,
    }
}
