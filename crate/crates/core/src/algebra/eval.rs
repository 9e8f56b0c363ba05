//! Evaluation of operator expressions on superpositions.
//!
//! Amplitudes are tracked as `c·√q` with `c` a complex float and `q` an exact
//! nonnegative rational. Ladder operators and normalization factors only ever
//! touch `q`, so products such as `√4·√3·√2·√1 / √24` collapse to exactly 1
//! and commutator differences like `(v+1) − v` come out exact.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Definitions, DiagonalForm, ExponentExpr, Location, OperatorExpr};
use crate::error::RuntimeError;
use crate::fock::{Amplitude, BasisState, Superposition, DEFAULT_DROP_TOLERANCE};
use crate::isa::{execute_data, Opcode};

/// Largest exponent or factorial argument evaluated explicitly.
pub const MAX_EXPLICIT_POWER: u64 = 20_000;

type Radicand = Ratio<BigUint>;

#[derive(Clone, Debug)]
struct Term {
    coeff: Complex64,
    radicand: Radicand,
    state: BasisState,
    halted: bool,
    steps: u64,
}

impl Term {
    fn new(coeff: Complex64, state: BasisState) -> Self {
        Term {
            coeff,
            radicand: Radicand::one(),
            state,
            halted: false,
            steps: 0,
        }
    }

    fn scale_radicand(&mut self, factor: BigUint) {
        self.radicand *= Radicand::from_integer(factor);
    }

    fn divide_radicand(&mut self, divisor: BigUint) {
        self.radicand /= Radicand::from_integer(divisor);
    }
}

fn sqrt_exact(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// `√q` as a float, exact whenever `q` is a ratio of perfect squares that
/// fit in a double.
fn sqrt_ratio(q: &Radicand) -> f64 {
    if q.is_one() {
        return 1.0;
    }
    if let (Some(a), Some(b)) = (sqrt_exact(q.numer()), sqrt_exact(q.denom())) {
        let (a, b) = (a.to_f64().unwrap_or(f64::INFINITY), b.to_f64().unwrap_or(f64::INFINITY));
        if a.is_finite() && b.is_finite() {
            return a / b;
        }
    }
    q.to_f64().map(f64::sqrt).unwrap_or(f64::INFINITY)
}

fn to_big_int(v: BigUint) -> BigInt {
    BigInt::from(v)
}

/// Integer value of an exponent expression on a basis state.
pub fn eval_exponent(e: &ExponentExpr, state: &BasisState) -> BigInt {
    match e {
        ExponentExpr::Const(c) => c.clone(),
        ExponentExpr::Number(loc) => to_big_int(loc.read(state)),
        ExponentExpr::Add(a, b) => eval_exponent(a, state) + eval_exponent(b, state),
        ExponentExpr::Sub(a, b) => eval_exponent(a, state) - eval_exponent(b, state),
        ExponentExpr::Mul(a, b) => eval_exponent(a, state) * eval_exponent(b, state),
        ExponentExpr::Theta(a) => BigInt::from(u8::from(!eval_exponent(a, state).is_negative())),
        ExponentExpr::ThetaTheta(a) => BigInt::from(u8::from(eval_exponent(a, state).is_zero())),
    }
}

fn nonnegative(v: BigInt) -> Result<BigUint, RuntimeError> {
    v.to_biguint().ok_or(RuntimeError::NegativeExponent(v))
}

fn explicit_count(k: &BigUint) -> Result<u64, RuntimeError> {
    match k.to_u64() {
        Some(n) if n <= MAX_EXPLICIT_POWER => Ok(n),
        _ => Err(RuntimeError::PowerTooLarge(k.clone())),
    }
}

/// `(lo+1)(lo+2)…(hi)`, or 1 when `hi <= lo`.
fn rising_product(lo: &BigUint, hi: &BigUint) -> BigUint {
    let mut acc = BigUint::one();
    let mut i = lo + 1u32;
    while &i <= hi {
        acc *= &i;
        i += 1u32;
    }
    acc
}

/// One basis term of an evaluation result.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluatedTerm {
    pub amplitude: Amplitude,
    pub state: BasisState,
    pub halted: bool,
    /// Program steps executed (firings of `θθ(N_pc − c)` guards).
    pub steps: u64,
}

/// Expression evaluator bound to a set of recursive definitions.
#[derive(Clone, Debug)]
pub struct Evaluator<'a> {
    defs: &'a Definitions,
    tolerance: f64,
}

impl<'a> Evaluator<'a> {
    pub fn new(defs: &'a Definitions) -> Self {
        Evaluator {
            defs,
            tolerance: DEFAULT_DROP_TOLERANCE,
        }
    }

    /// Terms whose amplitude modulus falls below `tolerance` are dropped at
    /// every merge. Zero keeps everything except exact cancellations.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn apply(&self, e: &OperatorExpr, s: &Superposition, fuel_budget: u64) -> Result<Superposition, RuntimeError> {
        let terms = self.apply_detailed(e, s, fuel_budget)?;
        Ok(Superposition::merge_with_tolerance(
            terms.into_iter().map(|t| (t.amplitude, t.state)),
            self.tolerance,
        ))
    }

    /// Like [`Evaluator::apply`], keeping per-term halt flags and step counts.
    /// Terms are in canonical state order.
    pub fn apply_detailed(
        &self,
        e: &OperatorExpr,
        s: &Superposition,
        fuel_budget: u64,
    ) -> Result<Vec<EvaluatedTerm>, RuntimeError> {
        let input = s.terms().iter().map(|(a, st)| Term::new(*a, st.clone())).collect();
        let terms = self.eval(e, input, fuel_budget)?;
        let mut by_state: BTreeMap<BasisState, EvaluatedTerm> = BTreeMap::new();
        for t in terms {
            let amp = t.coeff * sqrt_ratio(&t.radicand);
            by_state
                .entry(t.state.clone())
                .and_modify(|acc| {
                    acc.amplitude += amp;
                    acc.halted &= t.halted;
                    acc.steps = acc.steps.max(t.steps);
                })
                .or_insert(EvaluatedTerm {
                    amplitude: amp,
                    state: t.state,
                    halted: t.halted,
                    steps: t.steps,
                });
        }
        Ok(by_state
            .into_values()
            .filter(|t| {
                let m = t.amplitude.norm();
                m > 0.0 && m >= self.tolerance
            })
            .collect())
    }

    fn merge(&self, terms: Vec<Term>) -> Vec<Term> {
        if terms.len() <= 1 {
            return terms.into_iter().filter(|t| !t.coeff.is_zero()).collect();
        }
        let mut acc: BTreeMap<(BasisState, bool, Radicand), (Complex64, u64)> = BTreeMap::new();
        for t in terms {
            let slot = acc
                .entry((t.state, t.halted, t.radicand))
                .or_insert((Complex64::zero(), 0));
            slot.0 += t.coeff;
            slot.1 = slot.1.max(t.steps);
        }
        acc.into_iter()
            .filter_map(|((state, halted, radicand), (coeff, steps))| {
                if coeff.is_zero() {
                    return None;
                }
                if self.tolerance > 0.0 && coeff.norm() * sqrt_ratio(&radicand) < self.tolerance {
                    return None;
                }
                Some(Term {
                    coeff,
                    radicand,
                    state,
                    halted,
                    steps,
                })
            })
            .collect()
    }

    fn eval(&self, e: &OperatorExpr, terms: Vec<Term>, budget: u64) -> Result<Vec<Term>, RuntimeError> {
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            self.eval_term(e, t, budget, &mut out)?;
        }
        Ok(self.merge(out))
    }

    fn eval_term(&self, e: &OperatorExpr, mut t: Term, budget: u64, out: &mut Vec<Term>) -> Result<(), RuntimeError> {
        if t.halted {
            out.push(t);
            return Ok(());
        }
        match e {
            OperatorExpr::Identity => out.push(t),
            OperatorExpr::Raise(loc) => {
                if loc.is_stream() {
                    return Err(RuntimeError::StreamAccess(*loc));
                }
                let v = loc.read(&t.state) + 1u32;
                t.scale_radicand(v.clone());
                loc.write(&mut t.state, v);
                out.push(t);
            }
            OperatorExpr::Lower(loc) => {
                if loc.is_stream() {
                    return Err(RuntimeError::StreamAccess(*loc));
                }
                let v = loc.read(&t.state);
                if !v.is_zero() {
                    t.scale_radicand(v.clone());
                    loc.write(&mut t.state, v - 1u32);
                    out.push(t);
                }
            }
            OperatorExpr::NumberOp(loc) => {
                let v = loc.read(&t.state);
                if !v.is_zero() {
                    t.scale_radicand(&v * &v);
                    out.push(t);
                }
            }
            OperatorExpr::Clear(loc) => {
                if !loc.is_stream() {
                    loc.write(&mut t.state, BigUint::zero());
                }
                out.push(t);
            }
            OperatorExpr::Copy { dst, src } => {
                let value = match src {
                    Location::In => {
                        if t.state.input.is_empty() {
                            return Err(RuntimeError::InputExhausted);
                        }
                        t.state.input.remove(0)
                    }
                    other => other.read(&t.state),
                };
                match dst {
                    Location::In => return Err(RuntimeError::StreamAccess(*dst)),
                    Location::Out => t.state.output.push(value),
                    loc => {
                        if !loc.read(&t.state).is_zero() {
                            return Err(RuntimeError::CopyOntoNonzero { dst: *loc });
                        }
                        loc.write(&mut t.state, value);
                    }
                }
                out.push(t);
            }
            OperatorExpr::ScalarMul(c, inner) => {
                let start = out.len();
                self.eval_term(inner, t, budget, out)?;
                for r in &mut out[start..] {
                    r.coeff *= c;
                }
            }
            OperatorExpr::Product(factors) => {
                let mut cur = vec![t];
                for f in factors.iter().rev() {
                    cur = self.eval(f, cur, budget)?;
                    if cur.is_empty() {
                        break;
                    }
                }
                out.extend(cur);
            }
            OperatorExpr::Sum(summands) => {
                for s in summands {
                    self.eval_term(s, t.clone(), budget, out)?;
                }
            }
            OperatorExpr::GuardedPower { base, exponent } => {
                let k = nonnegative(eval_exponent(exponent, &t.state))?;
                if k.is_zero() {
                    out.push(t);
                    return Ok(());
                }
                if exponent.is_step_guard() {
                    t.steps += 1;
                }
                match base.as_ref() {
                    OperatorExpr::Raise(loc) if !loc.is_stream() => {
                        let v = loc.read(&t.state);
                        let hi = &v + &k;
                        explicit_count(&k)?;
                        t.scale_radicand(rising_product(&v, &hi));
                        loc.write(&mut t.state, hi);
                        out.push(t);
                    }
                    OperatorExpr::Lower(loc) if !loc.is_stream() => {
                        let v = loc.read(&t.state);
                        if v >= k {
                            explicit_count(&k)?;
                            let lo = &v - &k;
                            t.scale_radicand(rising_product(&lo, &v));
                            loc.write(&mut t.state, lo);
                            out.push(t);
                        }
                    }
                    _ => {
                        let n = explicit_count(&k)?;
                        let mut cur = vec![t];
                        for _ in 0..n {
                            cur = self.eval(base, cur, budget)?;
                            if cur.is_empty() {
                                break;
                            }
                        }
                        out.extend(cur);
                    }
                }
            }
            OperatorExpr::Diagonal { form, arg } => {
                let k = nonnegative(eval_exponent(arg, &t.state))?;
                match form {
                    DiagonalForm::Sqrt => {
                        if k.is_zero() {
                            return Ok(());
                        }
                        t.scale_radicand(k);
                    }
                    DiagonalForm::InvSqrt => {
                        if k.is_zero() {
                            return Err(RuntimeError::SingularNormalization);
                        }
                        t.divide_radicand(k);
                    }
                    DiagonalForm::SqrtFactorial => {
                        explicit_count(&k)?;
                        t.scale_radicand(rising_product(&BigUint::zero(), &k));
                    }
                    DiagonalForm::InvSqrtFactorial => {
                        explicit_count(&k)?;
                        t.divide_radicand(rising_product(&BigUint::zero(), &k));
                    }
                }
                out.push(t);
            }
            OperatorExpr::Instruction(instr) => {
                match instr.opcode {
                    Opcode::Halt => t.halted = true,
                    Opcode::Tra => {
                        let a = instr.address().expect("TRA takes an address");
                        t.state.pc = t.state.mem(a);
                    }
                    Opcode::Tzr => {
                        if t.state.register.is_zero() {
                            let a = instr.address().expect("TZR takes an address");
                            t.state.pc = t.state.mem(a);
                        }
                    }
                    _ => t.state = execute_data(instr, &t.state)?,
                }
                out.push(t);
            }
            OperatorExpr::RecursiveRef(label) => {
                let body = self
                    .defs
                    .get(label)
                    .ok_or_else(|| RuntimeError::UnresolvedReference(label.clone()))?;
                if budget == 0 {
                    return Err(RuntimeError::FuelExhausted);
                }
                self.eval_term(body, t, budget - 1, out)?;
            }
            OperatorExpr::Bra => {
                t.halted = true;
                out.push(t);
            }
        }
        Ok(())
    }
}

/// Applies a single operator to one basis state.
pub fn apply_primitive(op: &OperatorExpr, state: &BasisState) -> Result<Vec<(Amplitude, BasisState)>, RuntimeError> {
    let defs = Definitions::new();
    let terms = Evaluator::new(&defs)
        .with_tolerance(0.0)
        .apply_detailed(op, &Superposition::basis(state.clone()), 0)?;
    Ok(terms.into_iter().map(|t| (t.amplitude, t.state)).collect())
}

/// Evaluates `e` on `s`. Each `RecursiveRef` re-entry spends one unit of
/// `fuel_budget`.
pub fn apply_expr(
    e: &OperatorExpr,
    s: &Superposition,
    defs: &Definitions,
    fuel_budget: u64,
) -> Result<Superposition, RuntimeError> {
    Evaluator::new(defs).apply(e, s, fuel_budget)
}
