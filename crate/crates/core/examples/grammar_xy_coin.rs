//! Transition probabilities for the xy and coin grammars, plus a quantum
//! grammar whose two paths cancel.

use qlang::grammar::{
    aggregate_unordered, derive_distribution, parse_grammar, pass_distribution, transition_probability, DeriveMode,
    Horizon,
};

fn load(name: &str) -> qlang::grammar::Grammar {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_grammar(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn main() {
    let xy = load("xy.g");
    for to in ["xxy", "xyy"] {
        let t = transition_probability(&xy, "xy", to, Horizon::Exactly(1), Some(&[0]));
        println!("xy -> {to} (rewriting x): {}", t.absolute);
    }
    // Without the position restriction the y rule competes too.
    for (s, p) in derive_distribution(&xy, "xy", 1, DeriveMode::Step, None).unwrap() {
        println!("  xy => {s}: {p:.4}");
    }

    let coin = load("coin.g");
    let pass = pass_distribution(&coin, "hh").unwrap();
    println!("\ntwo coins after one flip: {pass:?}");
    println!("ignoring order: {:?}", aggregate_unordered(&coin, &pass));

    let q = load("interference.g");
    println!("\nquantum, two steps from a:");
    for to in ["c", "e"] {
        let t = transition_probability(&q, "a", to, Horizon::Exactly(2), None);
        println!("  a => {to}: {:.3}", t.absolute);
    }
}
