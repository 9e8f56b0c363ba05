//! Quantum C source lowered to assembly and to a single operator.

use num_bigint::BigUint;
use qlang::qasm::run_algebraic;
use qlang::qcc::{lower_direct, lower_to_qasm, parse_c, SymbolTable};

fn main() {
    let add = parse_c("a = b + c;").unwrap();
    print!("{}", lower_to_qasm(&add).unwrap().listing());
    let direct = lower_direct(&add.statements[0], &SymbolTable::of(&add)).unwrap();
    println!("direct: {}\n", direct.pretty());

    for name in ["pointer.qc", "countdown.qc"] {
        let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
        let program = lower_to_qasm(&parse_c(&std::fs::read_to_string(path).unwrap()).unwrap()).unwrap();
        let r = run_algebraic(&program, &[BigUint::from(10u32)], 10).unwrap();
        println!("{name}: {} instructions, output {:?}", program.len(), r.outputs[0]);
    }
}
