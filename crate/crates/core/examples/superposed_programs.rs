//! Three programs in equal superposition, measured many times.

use qlang::qasm::{parse_program, run_superposed};
use qlang::Amplitude;

fn main() {
    let amp = Amplitude::new(1.0 / 3f64.sqrt(), 0.0);
    let programs: Vec<_> = (1..=3)
        .map(|k| {
            let path = format!("{}/data/write{k}.qasm", env!("CARGO_MANIFEST_DIR"));
            (amp, parse_program(&std::fs::read_to_string(path).unwrap()).unwrap())
        })
        .collect();
    let r = run_superposed(&programs, &[], 10).unwrap();
    for (s, p) in r.final_state.probabilities().unwrap() {
        println!("mem[0] = {}: probability {p:.6}", s.mem(0));
    }
    let counts = r.final_state.sample(10_000, 42).unwrap();
    for (s, c) in counts {
        println!("mem[0] = {}: {c} of 10000", s.mem(0));
    }

    // Opposite signs on identical programs cancel.
    let h = Amplitude::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let p = programs[0].1.clone();
    let cancel = run_superposed(&[(h, p.clone()), (-h, p)], &[], 10).unwrap();
    println!("\ng - g leaves {} terms", cancel.final_state.len());
}
