//! Bit-sized instructions as fermionic polynomials.

use qlang::bitlevel::{check_fermi_relations, simplified_form, verify_bit_semantics, BitKind};

fn main() {
    for kind in BitKind::ALL {
        let r = verify_bit_semantics(kind, 4);
        println!(
            "{:<9} {}  {} cases, {} with sign -1  [{}]",
            kind.name(),
            simplified_form(kind, 0, 1),
            r.cases,
            r.negative_signs,
            if r.passed { "ok" } else { "FAILED" }
        );
    }
    println!();
    for r in check_fermi_relations(6) {
        println!("{:<22} {} cases [{}]", r.relation, r.cases, if r.passed { "ok" } else { "FAILED" });
    }
}
