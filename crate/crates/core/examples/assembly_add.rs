//! Assembles the add program and runs it both classically and as an
//! operator expression.

use num_bigint::BigUint;
use qlang::fock::serialize;
use qlang::qasm::{compile_sequential, interpret, parse_program, run_algebraic, DEFAULT_STEP_LIMIT};

fn main() {
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/add.qasm")).unwrap();
    let program = parse_program(&src).unwrap();
    print!("{}", program.listing());

    let input: Vec<BigUint> = vec![2u32.into(), 3u32.into()];
    let classic = interpret(&program, &input, DEFAULT_STEP_LIMIT).unwrap();
    println!("\ninterpreter output: {:?}", classic.outputs[0]);

    let alg = run_algebraic(&program, &input, 0).unwrap();
    println!("algebraic final state:\n{}", serialize(&alg.final_state));

    println!("\nas one operator:\n{}", compile_sequential(&program).unwrap().pretty());
}
