use num_bigint::BigUint;

use super::{is_halt, Program, RunResult};
use crate::algebra::{Definitions, DiagonalForm, Evaluator, ExponentExpr, Location, OperatorExpr};
use crate::error::{CompileError, RuntimeError};
use crate::fock::{BasisState, Superposition};
use crate::isa::{Instruction, Opcode, Operand};

/// Name under which the guarded program body is defined.
pub const PROGRAM_LABEL: &str = "program";

const R: Location = Location::Register;
const PC: Location = Location::ProgramCounter;
const FUEL: Location = Location::Fuel;

/// A guarded program: `entry` prepares the counters and runs the body once;
/// backward jumps re-enter the body through `definitions`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledProgram {
    pub entry: OperatorExpr,
    pub definitions: Definitions,
}

fn with_pool_addresses(instr: &Instruction, p: &Program) -> Instruction {
    match &instr.operand {
        Operand::Immediate(k) => {
            let a = p.pool_address(k).expect("immediate present in pool");
            Instruction::addr(instr.opcode, a)
        }
        _ => instr.clone(),
    }
}

/// Operator for one non-jump instruction. Moves between locations use the
/// normalized Copy/Clear pair; arithmetic acts through its value rule.
pub fn instruction_factor(instr: &Instruction, p: &Program) -> OperatorExpr {
    let mem = |i: &Instruction| Location::Mem(i.address().expect("address operand"));
    match instr.opcode {
        Opcode::Store => OperatorExpr::clear_then_copy(mem(instr), R),
        Opcode::Input => OperatorExpr::clear_then_copy(mem(instr), Location::In),
        Opcode::Output => OperatorExpr::clear_then_copy(Location::Out, mem(instr)),
        Opcode::Halt => OperatorExpr::Bra,
        Opcode::Load => {
            let resolved = with_pool_addresses(instr, p);
            OperatorExpr::clear_then_copy(R, mem(&resolved))
        }
        _ => OperatorExpr::Instruction(with_pool_addresses(instr, p)),
    }
}

/// `ADD m` written with ladder operators: `(a_r†)^{N_m} √(N_r!) / √((N_r+N_m)!)`.
/// Exact, but limited to values whose factorials stay below the evaluator's
/// explicit-power bound.
pub fn literal_add_form(m: u64) -> OperatorExpr {
    OperatorExpr::product(vec![
        OperatorExpr::diagonal(DiagonalForm::InvSqrtFactorial, ExponentExpr::number(R)),
        OperatorExpr::power(OperatorExpr::raise(R), ExponentExpr::number(Location::Mem(m))),
        OperatorExpr::diagonal(DiagonalForm::SqrtFactorial, ExponentExpr::number(R)),
    ])
}

/// Straight-line compilation: the product of instruction factors up to the
/// first HALT, which becomes the closing bra.
pub fn compile_sequential(p: &Program) -> Result<OperatorExpr, CompileError> {
    if let Some((i, instr)) = p.instructions.iter().enumerate().find(|(_, i)| i.opcode.is_jump()) {
        return Err(CompileError::JumpsNotSupported {
            index: i + 1,
            opcode: instr.opcode.to_string(),
        });
    }
    let mut factors = Vec::new();
    for instr in &p.instructions {
        factors.push(instruction_factor(instr, p));
        if is_halt(instr) {
            break;
        }
    }
    if factors.len() == 1 {
        return Ok(factors.pop().expect("one factor"));
    }
    factors.reverse();
    Ok(OperatorExpr::product(factors))
}

/// Sets pc from `mem[target]`; when that is not ahead of step `index`, spends
/// one unit of fuel and re-enters the program body.
fn jump(index: u64, target: u64) -> OperatorExpr {
    let reenter = OperatorExpr::product(vec![
        OperatorExpr::recursive(PROGRAM_LABEL),
        OperatorExpr::power(
            OperatorExpr::decrement(FUEL),
            (ExponentExpr::number(FUEL) - ExponentExpr::constant(1)).theta(),
        ),
    ]);
    OperatorExpr::product(vec![
        OperatorExpr::power(
            reenter,
            (ExponentExpr::constant(index) - ExponentExpr::number(PC)).theta(),
        ),
        OperatorExpr::clear_then_copy(PC, Location::Mem(target)),
    ])
}

fn step(index: u64, instr: &Instruction, p: &Program) -> OperatorExpr {
    match instr.opcode {
        Opcode::Halt => OperatorExpr::Bra,
        Opcode::Tra => jump(index, instr.address().expect("TRA address")),
        Opcode::Tzr => {
            let zero = ExponentExpr::number(R).theta_theta();
            OperatorExpr::product(vec![
                OperatorExpr::power(jump(index, instr.address().expect("TZR address")), zero.clone()),
                OperatorExpr::power(OperatorExpr::increment(PC), ExponentExpr::constant(1) - zero),
            ])
        }
        _ => OperatorExpr::product(vec![OperatorExpr::increment(PC), instruction_factor(instr, p)]),
    }
}

/// Guarded compilation: instruction `i` runs only when `N_pc = i`. Jumps
/// rewrite pc; backward and self jumps recurse through the body at the cost
/// of one unit of fuel each, forward jumps fall through within the same pass.
pub fn compile_guarded(p: &Program, fuel: u64) -> CompiledProgram {
    let guarded: Vec<OperatorExpr> = p
        .instructions
        .iter()
        .enumerate()
        .rev()
        .map(|(i, instr)| {
            let index = i as u64 + 1;
            OperatorExpr::power(step(index, instr, p), ExponentExpr::at_pc(index))
        })
        .collect();
    let body = OperatorExpr::product(guarded);
    let entry = OperatorExpr::product(vec![
        body.clone(),
        OperatorExpr::raise(PC),
        OperatorExpr::clear(PC),
        OperatorExpr::diagonal(DiagonalForm::InvSqrtFactorial, ExponentExpr::number(FUEL)),
        OperatorExpr::power(OperatorExpr::raise(FUEL), ExponentExpr::constant(fuel)),
        OperatorExpr::clear(FUEL),
    ]);
    let mut definitions = Definitions::new();
    definitions.insert(PROGRAM_LABEL, body);
    CompiledProgram { entry, definitions }
}

/// Runs the guarded compilation of `p` through the operator evaluator.
pub fn run_algebraic(p: &Program, input: &[BigUint], fuel: u64) -> Result<RunResult, RuntimeError> {
    run_algebraic_from(p, p.initial_state(input), fuel)
}

/// Like [`run_algebraic`] from an arbitrary start state (pc and fuel are
/// reinitialized by the entry operator).
pub fn run_algebraic_from(p: &Program, start: BasisState, fuel: u64) -> Result<RunResult, RuntimeError> {
    let compiled = compile_guarded(p, fuel);
    let terms = Evaluator::new(&compiled.definitions).with_tolerance(0.0).apply_detailed(
        &compiled.entry,
        &Superposition::basis(start),
        fuel,
    )?;
    if let Some(t) = terms.iter().find(|t| !t.halted) {
        return Err(RuntimeError::PcOutOfRange(t.state.pc.clone()));
    }
    let steps = terms.iter().map(|t| t.steps).max().unwrap_or(0);
    Ok(RunResult::from_terms(
        terms.into_iter().map(|t| (t.amplitude, t.state, t.halted)).collect(),
        steps,
    ))
}
