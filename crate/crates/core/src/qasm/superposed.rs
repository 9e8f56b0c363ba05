use num_bigint::BigUint;

use super::{run_algebraic, Program, RunResult};
use crate::error::RuntimeError;
use crate::fock::{Amplitude, Superposition};

const NORM_TOLERANCE: f64 = 1e-9;

/// Runs `Σ a_k g_k` on one initial state: every program is applied to the
/// same input and the results are added with their amplitudes, so programs
/// reaching the same final state interfere.
pub fn run_superposed(
    programs: &[(Amplitude, Program)],
    input: &[BigUint],
    fuel: u64,
) -> Result<RunResult, RuntimeError> {
    let norm: f64 = programs.iter().map(|(a, _)| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(RuntimeError::NormViolation(format!("{norm}")));
    }
    let mut terms = Vec::new();
    let mut steps = 0;
    for (amp, p) in programs {
        let r = run_algebraic(p, input, fuel)?;
        steps = steps.max(r.steps_executed);
        terms.extend(r.final_state.into_terms().into_iter().map(|(a, s)| (a * amp, s)));
    }
    let merged = Superposition::merge(terms);
    Ok(RunResult::from_terms(
        merged.into_terms().into_iter().map(|(a, s)| (a, s, true)).collect(),
        steps,
    ))
}
