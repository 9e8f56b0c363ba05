//! Conditional jumps in the TZR program, including a loop that runs until
//! the fuel is gone.

use num_bigint::BigUint;
use qlang::qasm::{compile_guarded, interpret, parse_program, run_algebraic};

fn main() {
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/tzr.qasm")).unwrap();
    let program = parse_program(&src).unwrap();
    let compiled = compile_guarded(&program, 10);
    print!("{}", program.listing());
    println!("guarded operator `{}`: {} nodes\n", qlang::qasm::PROGRAM_LABEL, compiled.entry.size());

    for input in [vec![0u32, 2, 6], vec![0, 6], vec![3, 4], vec![0, 4]] {
        let args: Vec<BigUint> = input.iter().map(|&v| v.into()).collect();
        let trace = interpret(&program, &args, 100).map(|r| r.trace.unwrap());
        let alg = run_algebraic(&program, &args, 10);
        match alg {
            Ok(r) => println!("{input:?}: trace {:?}, output {:?}", trace.unwrap(), r.outputs[0]),
            Err(e) => println!("{input:?}: {e}"),
        }
    }
}
