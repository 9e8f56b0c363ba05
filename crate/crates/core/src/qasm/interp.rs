use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::{Program, RunResult};
use crate::error::RuntimeError;
use crate::fock::{Amplitude, BasisState};
use crate::isa::{execute_data, Opcode};

pub const DEFAULT_STEP_LIMIT: u64 = 1_000_000;

/// Runs `p` classically on `input`, starting at instruction 1.
pub fn interpret(p: &Program, input: &[BigUint], step_limit: u64) -> Result<RunResult, RuntimeError> {
    interpret_from(p, p.initial_state(input), step_limit)
}

/// Runs `p` classically from an arbitrary start state. The program counter
/// is reset to 1.
pub fn interpret_from(p: &Program, start: BasisState, step_limit: u64) -> Result<RunResult, RuntimeError> {
    let mut state = start;
    state.pc = BigUint::from(1u32);
    let mut steps = 0u64;
    let mut trace = Vec::new();
    loop {
        let instr = state
            .pc
            .to_u64()
            .and_then(|pc| p.get(pc))
            .ok_or_else(|| RuntimeError::PcOutOfRange(state.pc.clone()))?;
        if steps == step_limit {
            return Err(RuntimeError::StepLimitExceeded(step_limit));
        }
        steps += 1;
        trace.push(state.pc.to_u64().expect("checked above"));
        match instr.opcode {
            Opcode::Halt => break,
            Opcode::Tra => {
                state.pc = state.mem(instr.address().expect("TRA takes an address"));
            }
            Opcode::Tzr => {
                if state.register.is_zero() {
                    state.pc = state.mem(instr.address().expect("TZR takes an address"));
                } else {
                    state.pc += 1u32;
                }
            }
            _ => {
                state = execute_data(instr, &state)?;
                state.pc += 1u32;
            }
        }
    }
    let mut result = RunResult::from_terms(vec![(Amplitude::new(1.0, 0.0), state, true)], steps);
    result.trace = Some(trace);
    Ok(result)
}
