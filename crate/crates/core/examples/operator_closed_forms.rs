//! Clear and copy as normalized ladder powers, and the address operator.

use qlang::algebra::{apply_primitive, verify_closed_form, ClosedFormKind, CLOSED_FORM_BOUND};
use qlang::evolution::{ladder_via_register, LadderKind};
use qlang::qcc::check_address_commutator;
use qlang::{BasisState, Location, OperatorExpr};

fn main() {
    for kind in [ClosedFormKind::Clear, ClosedFormKind::Copy] {
        let ok = (0..=CLOSED_FORM_BOUND).all(|n| verify_closed_form(kind, n));
        println!("{kind:?} closed form, n <= {CLOSED_FORM_BOUND}: {ok}");
    }

    let s = BasisState::ground().with_mem(2, 4u32);
    for kind in [LadderKind::Raise, LadderKind::Lower] {
        let out = apply_primitive(&ladder_via_register(2, kind), &s).unwrap();
        println!("{kind:?} through the register on mem[2]=4: {:?}", out.iter().map(|(a, t)| (a.re, t.mem(2))).collect::<Vec<_>>());
    }

    let raw = apply_primitive(&OperatorExpr::raise(Location::Mem(2)), &s).unwrap();
    println!("a_2† on mem[2]=4: amplitude {}", raw[0].0.re);

    let all = (0..6).all(|m| check_address_commutator(6, m, LadderKind::Raise, &s));
    println!("[A, a_m†] = m on mem[2]=4: {all}");
}
