//! Direct operator forms: the set-value operator `*m(X)` and the address
//! operator `A = Σ m(a_m − a_m†)`.

use super::{BinOp, Expr, LValue, QccError, Stmt, SymbolTable};
use crate::algebra::{apply_primitive, DiagonalForm, ExponentExpr, Location, OperatorExpr};
use crate::fock::{Amplitude, BasisState};
use crate::evolution::LadderKind;

fn reads(x: &ExponentExpr, loc: Location) -> bool {
    match x {
        ExponentExpr::Const(_) => false,
        ExponentExpr::Number(l) => *l == loc,
        ExponentExpr::Add(a, b) | ExponentExpr::Sub(a, b) | ExponentExpr::Mul(a, b) => reads(a, loc) || reads(b, loc),
        ExponentExpr::Theta(a) | ExponentExpr::ThetaTheta(a) => reads(a, loc),
    }
}

/// `*m(X) = (a_m†)^X (a_m)^{N_m} / (√(X!) √(N_m!))`: sets `mem[m]` to `X`
/// with amplitude 1. `X` is evaluated after `mem[m]` has been cleared, so it
/// may not read `m`.
pub fn star_set(m: u64, x: ExponentExpr) -> Result<OperatorExpr, QccError> {
    let loc = Location::Mem(m);
    if reads(&x, loc) {
        return Err(QccError::UnsupportedConstruct(format!(
            "value written to mem[{m}] reads mem[{m}] itself"
        )));
    }
    let own = ExponentExpr::number(loc);
    Ok(OperatorExpr::product(vec![
        OperatorExpr::power(OperatorExpr::raise(loc), x.clone()),
        OperatorExpr::diagonal(DiagonalForm::InvSqrtFactorial, x),
        OperatorExpr::power(OperatorExpr::lower(loc), own.clone()),
        OperatorExpr::diagonal(DiagonalForm::InvSqrtFactorial, own),
    ]))
}

fn sum_exponent(e: &Expr, table: &SymbolTable) -> Result<ExponentExpr, QccError> {
    match e {
        Expr::Lit(k) => Ok(ExponentExpr::constant(k.clone())),
        Expr::Var(v) => Ok(ExponentExpr::number(Location::Mem(super::address_of(v, table)?))),
        Expr::Binary(BinOp::Add, a, b) => Ok(sum_exponent(a, table)? + sum_exponent(b, table)?),
        other => Err(QccError::UnsupportedConstruct(format!(
            "`{other}` is outside the direct form (sums of variables and literals)"
        ))),
    }
}

/// `a = b + c + …;` as the single operator `*aa(*ab + *ac + …)`.
pub fn lower_direct(stmt: &Stmt, table: &SymbolTable) -> Result<OperatorExpr, QccError> {
    let Stmt::Assign {
        target: LValue::Var(a),
        value,
    } = stmt
    else {
        return Err(QccError::UnsupportedConstruct(format!(
            "`{stmt}` is not an assignment to a variable"
        )));
    };
    let x = sum_exponent(value, table)?;
    star_set(super::address_of(a, table)?, x)
}

/// `A = Σ_{m<window} m(a_m − a_m†)`.
///
/// # Panics
/// If `window < 2`.
pub fn address_operator(window: u64) -> OperatorExpr {
    assert!(window >= 2, "address window needs at least 2 modes");
    let terms = (1..window)
        .flat_map(|m| {
            let loc = Location::Mem(m);
            let k = m as f64;
            [
                OperatorExpr::scalar(Amplitude::new(k, 0.0), OperatorExpr::lower(loc)),
                OperatorExpr::scalar(Amplitude::new(-k, 0.0), OperatorExpr::raise(loc)),
            ]
        })
        .collect();
    OperatorExpr::sum(terms)
}

/// `[A, a_m†]` or `[A, a_m]` over the truncated address operator.
pub fn address_commutator(window: u64, m: u64, kind: LadderKind) -> OperatorExpr {
    let a = address_operator(window);
    let x = match kind {
        LadderKind::Raise => OperatorExpr::raise(Location::Mem(m)),
        LadderKind::Lower => OperatorExpr::lower(Location::Mem(m)),
    };
    OperatorExpr::sum(vec![
        OperatorExpr::product(vec![a.clone(), x.clone()]),
        OperatorExpr::scalar(Amplitude::new(-1.0, 0.0), OperatorExpr::product(vec![x, a])),
    ])
}

/// True when the commutator maps `state` to exactly `m·state`.
pub fn check_address_commutator(window: u64, m: u64, kind: LadderKind, state: &BasisState) -> bool {
    let Ok(out) = apply_primitive(&address_commutator(window, m, kind), state) else {
        return false;
    };
    if m == 0 {
        return out.is_empty();
    }
    out.len() == 1 && out[0].1 == *state && out[0].0 == Amplitude::new(m as f64, 0.0)
}
