//! A particle hopping along memory cells under exp(-iHt).

use num_complex::Complex64;
use qlang::evolution::{build_hop_hamiltonian, dense_oracle_evolve, evolve, single_particle};
use qlang::Superposition;

fn main() {
    let h = build_hop_hamiltonian(12);
    let s0 = Superposition::basis(single_particle(0));
    let t = 0.1;
    let out = evolve(&h, &s0, t, 8).unwrap();
    let mut fact = 1.0;
    for n in 0..=8u64 {
        if n > 0 {
            fact *= n as f64;
        }
        let want = Complex64::new(0.0, -t).powu(n as u32) / fact;
        let got = out.amplitude_of(&single_particle(n));
        println!("mode {n}: {:>11.3e} {:>+11.3e}i   |error| {:.1e}", got.re, got.im, (got - want).norm());
    }
    let dense = dense_oracle_evolve(&h, &s0, t, 8).unwrap();
    println!("dense oracle difference: {:.2e}", out.max_abs_difference(&dense));
}
