//! Checks of the normalized ladder-power forms of Clear and Copy, and of the
//! canonical commutation relations.

use super::{apply_primitive, DiagonalForm, ExponentExpr, Location, OperatorExpr};
use crate::fock::{Amplitude, BasisState};

/// Largest `n` checked by default.
pub const CLOSED_FORM_BOUND: u64 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormKind {
    Clear,
    Copy,
}

const DST: Location = Location::Mem(0);
const SRC: Location = Location::Mem(1);

fn literal_power(op: OperatorExpr, n: u64) -> OperatorExpr {
    if n == 0 {
        OperatorExpr::Identity
    } else {
        OperatorExpr::product(vec![op; n as usize])
    }
}

fn single_unit(result: Vec<(Amplitude, BasisState)>, expected: &BasisState) -> bool {
    matches!(result.as_slice(), [(a, s)] if *a == Amplitude::new(1.0, 0.0) && s == expected)
}

/// Checks that `n` literal ladder steps scaled by `1/√(n!)` reproduce the
/// Clear (resp. Copy) action with amplitude exactly 1, and that the
/// number-operator form `(a)^{N}/√(N!)` (resp. `(a†)^{N_src}/√(N_src!)`)
/// agrees with it.
pub fn verify_closed_form(kind: ClosedFormKind, n: u64) -> bool {
    let norm = |k: ExponentExpr| OperatorExpr::diagonal(DiagonalForm::InvSqrtFactorial, k);
    let (start, primitive, literal, symbolic) = match kind {
        ClosedFormKind::Clear => {
            let start = BasisState::ground().with_mem(0, n);
            let literal = OperatorExpr::product(vec![
                norm(ExponentExpr::constant(n)),
                literal_power(OperatorExpr::lower(DST), n),
            ]);
            let symbolic = OperatorExpr::product(vec![
                OperatorExpr::power(OperatorExpr::lower(DST), ExponentExpr::number(DST)),
                norm(ExponentExpr::number(DST)),
            ]);
            (start, OperatorExpr::clear(DST), literal, symbolic)
        }
        ClosedFormKind::Copy => {
            let start = BasisState::ground().with_mem(1, n);
            let literal = OperatorExpr::product(vec![
                norm(ExponentExpr::constant(n)),
                literal_power(OperatorExpr::raise(DST), n),
            ]);
            let symbolic = OperatorExpr::product(vec![
                norm(ExponentExpr::number(SRC)),
                OperatorExpr::power(OperatorExpr::raise(DST), ExponentExpr::number(SRC)),
            ]);
            (start, OperatorExpr::copy(DST, SRC), literal, symbolic)
        }
    };
    let Ok(expected) = apply_primitive(&primitive, &start) else {
        return false;
    };
    let [(_, target)] = expected.as_slice() else {
        return false;
    };
    [literal, symbolic, primitive]
        .iter()
        .all(|e| apply_primitive(e, &start).is_ok_and(|r| single_unit(r, target)))
}

/// `a_i a_j† − a_j† a_i`.
pub fn bosonic_commutator(i: Location, j: Location) -> OperatorExpr {
    OperatorExpr::sum(vec![
        OperatorExpr::product(vec![OperatorExpr::lower(i), OperatorExpr::raise(j)]),
        OperatorExpr::scalar(
            Amplitude::new(-1.0, 0.0),
            OperatorExpr::product(vec![OperatorExpr::raise(j), OperatorExpr::lower(i)]),
        ),
    ])
}

/// True when `[a_i, a_j†]` maps `state` to exactly `δ_ij·state`.
pub fn check_commutator(i: Location, j: Location, state: &BasisState) -> bool {
    match apply_primitive(&bosonic_commutator(i, j), state) {
        Ok(r) if i == j => single_unit(r, state),
        Ok(r) => r.is_empty(),
        Err(_) => false,
    }
}
