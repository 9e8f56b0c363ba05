//! One-bit words: anticommuting Fermi operators over a one-bit register and
//! bit memory.
//!
//! Signs follow the canonical order register first, then modes ascending:
//! flipping a bit picks up `(−1)^k` where `k` counts the occupied modes
//! before it.

use std::collections::BTreeMap;
use std::fmt;

use crate::fock::Amplitude;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BitMode {
    Register,
    Mem(usize),
}

impl BitMode {
    fn slot(self) -> usize {
        match self {
            BitMode::Register => 0,
            BitMode::Mem(m) => m + 1,
        }
    }
}

impl fmt::Display for BitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BitMode::Register => f.write_str("r"),
            BitMode::Mem(m) => write!(f, "b{m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitBasisState {
    /// Slot 0 is the register, slot `m+1` is memory bit `m`.
    occ: Vec<bool>,
}

impl BitBasisState {
    pub fn ground(mode_count: usize) -> Self {
        BitBasisState {
            occ: vec![false; mode_count + 1],
        }
    }

    pub fn new(register: bool, bits: &[bool]) -> Self {
        let mut occ = Vec::with_capacity(bits.len() + 1);
        occ.push(register);
        occ.extend_from_slice(bits);
        BitBasisState { occ }
    }

    /// Every state over `mode_count` memory bits plus the register.
    pub fn all(mode_count: usize) -> impl Iterator<Item = BitBasisState> {
        let slots = mode_count + 1;
        (0u64..1 << slots).map(move |mask| BitBasisState {
            occ: (0..slots).map(|i| mask >> i & 1 == 1).collect(),
        })
    }

    pub fn mode_count(&self) -> usize {
        self.occ.len() - 1
    }

    pub fn register(&self) -> bool {
        self.occ[0]
    }

    pub fn bit(&self, m: usize) -> bool {
        self.occ[m + 1]
    }

    pub fn get(&self, mode: BitMode) -> bool {
        self.occ[mode.slot()]
    }

    pub fn with(mut self, mode: BitMode, value: bool) -> Self {
        self.occ[mode.slot()] = value;
        self
    }

    fn sign_before(&self, mode: BitMode) -> f64 {
        if self.occ[..mode.slot()].iter().filter(|&&b| b).count() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for BitBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<&str> = self.occ.iter().map(|&b| if b { "1" } else { "0" }).collect();
        write!(f, "|{}⟩", cells.join(", "))
    }
}

/// Operator tree; products apply their rightmost factor first.
#[derive(Clone, Debug, PartialEq)]
pub enum FermiOp {
    Identity,
    Raise(BitMode),
    Lower(BitMode),
    Number(BitMode),
    Scalar(Amplitude, Box<FermiOp>),
    Product(Vec<FermiOp>),
    Sum(Vec<FermiOp>),
}

impl FermiOp {
    pub fn raise(m: BitMode) -> Self {
        FermiOp::Raise(m)
    }
    pub fn lower(m: BitMode) -> Self {
        FermiOp::Lower(m)
    }
    pub fn number(m: BitMode) -> Self {
        FermiOp::Number(m)
    }
    pub fn scalar(c: f64, op: FermiOp) -> Self {
        FermiOp::Scalar(Amplitude::new(c, 0.0), Box::new(op))
    }
    pub fn product(factors: Vec<FermiOp>) -> Self {
        FermiOp::Product(factors)
    }
    pub fn sum(terms: Vec<FermiOp>) -> Self {
        FermiOp::Sum(terms)
    }
    /// `1 − N_m`.
    pub fn vacant(m: BitMode) -> Self {
        FermiOp::sum(vec![FermiOp::Identity, FermiOp::scalar(-1.0, FermiOp::number(m))])
    }
    /// `{a, b} = ab + ba`.
    pub fn anticommutator(a: FermiOp, b: FermiOp) -> Self {
        FermiOp::sum(vec![
            FermiOp::product(vec![a.clone(), b.clone()]),
            FermiOp::product(vec![b, a]),
        ])
    }
}

impl fmt::Display for FermiOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FermiOp::Identity => f.write_str("1"),
            FermiOp::Raise(m) => write!(f, "{m}†"),
            FermiOp::Lower(m) => write!(f, "{m}"),
            FermiOp::Number(m) => write!(f, "N[{m}]"),
            FermiOp::Scalar(c, op) => {
                if c.im == 0.0 {
                    write!(f, "{}·{op}", c.re)
                } else {
                    write!(f, "({}{:+}i)·{op}", c.re, c.im)
                }
            }
            FermiOp::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|x| format!("{x}")).collect();
                write!(f, "({})", parts.join(" "))
            }
            FermiOp::Sum(ts) => {
                let parts: Vec<String> = ts.iter().map(|x| format!("{x}")).collect();
                write!(f, "({})", parts.join(" + "))
            }
        }
    }
}

fn merge(terms: impl IntoIterator<Item = (Amplitude, BitBasisState)>) -> Vec<(Amplitude, BitBasisState)> {
    let mut acc: BTreeMap<BitBasisState, Amplitude> = BTreeMap::new();
    for (a, s) in terms {
        *acc.entry(s).or_default() += a;
    }
    acc.into_iter()
        .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
        .map(|(s, a)| (a, s))
        .collect()
}

/// Applies `op` to a basis state. Results are merged by state with exact
/// zeros removed.
///
/// # Panics
/// If `op` mentions a memory mode at or beyond `s.mode_count()`.
pub fn apply_fermi(op: &FermiOp, s: &BitBasisState) -> Vec<(Amplitude, BitBasisState)> {
    apply_to_all(op, vec![(Amplitude::new(1.0, 0.0), s.clone())])
}

fn apply_to_all(op: &FermiOp, input: Vec<(Amplitude, BitBasisState)>) -> Vec<(Amplitude, BitBasisState)> {
    match op {
        FermiOp::Identity => input,
        FermiOp::Raise(m) | FermiOp::Lower(m) => {
            let target = matches!(op, FermiOp::Raise(_));
            merge(input.into_iter().filter_map(|(a, s)| {
                assert!(m.slot() < s.occ.len(), "mode {m} outside the state");
                if s.get(*m) == target {
                    return None;
                }
                let sign = s.sign_before(*m);
                Some((a * sign, s.with(*m, target)))
            }))
        }
        FermiOp::Number(m) => input.into_iter().filter(|(_, s)| s.get(*m)).collect(),
        FermiOp::Scalar(c, inner) => merge(apply_to_all(inner, input).into_iter().map(|(a, s)| (a * c, s))),
        FermiOp::Product(fs) => fs.iter().rev().fold(input, |acc, f| apply_to_all(f, acc)),
        FermiOp::Sum(ts) => merge(ts.iter().flat_map(|t| apply_to_all(t, input.clone()))),
    }
}

/// Bit-level instructions with a closed polynomial form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BitKind {
    ClearBit,
    CopyBit,
    LoadBit,
    StoreBit,
    AddBit,
    SubBit,
    MulBit,
}

impl BitKind {
    pub const ALL: [BitKind; 7] = [
        BitKind::ClearBit,
        BitKind::CopyBit,
        BitKind::LoadBit,
        BitKind::StoreBit,
        BitKind::AddBit,
        BitKind::SubBit,
        BitKind::MulBit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BitKind::ClearBit => "clear",
            BitKind::CopyBit => "copy",
            BitKind::LoadBit => "load",
            BitKind::StoreBit => "store",
            BitKind::AddBit => "add",
            BitKind::SubBit => "subtract",
            BitKind::MulBit => "multiply",
        }
    }
}

/// Closed polynomial form of `kind` on memory bit `m`. `n` is the source
/// bit for [`BitKind::CopyBit`] and ignored otherwise.
///
/// | kind  | form |
/// |-------|------|
/// | clear | `1 + (b_m − 1)N_m` |
/// | copy  | `1 + (b_m† − 1)N_n` |
/// | load  | `(1 − N_r + b_r)(1 − N_m) + (N_r + b_r†)N_m` |
/// | store | `(1 − N_m + b_m)(1 − N_r) + (N_m + b_m†)N_r` |
/// | add   | `1 + (b_r† − 1)N_m` |
/// | sub   | `1 + (b_r − 1)N_m` |
/// | mul   | `1 + (b_r − N_r)(1 − N_m)` |
pub fn simplified_form(kind: BitKind, m: usize, n: usize) -> FermiOp {
    use FermiOp as F;
    let r = BitMode::Register;
    let bm = BitMode::Mem(m);
    // 1 + (x − 1)·N
    let unit_plus = |x: FermiOp, n: BitMode| {
        F::sum(vec![
            F::Identity,
            F::product(vec![F::sum(vec![x, F::scalar(-1.0, F::Identity)]), F::number(n)]),
        ])
    };
    // (1 − N_a + b_a)(1 − N_c) + (N_a + b_a†)N_c, which sets a to the value of c
    let assign = |a: BitMode, c: BitMode| {
        F::sum(vec![
            F::product(vec![
                F::sum(vec![F::Identity, F::scalar(-1.0, F::number(a)), F::lower(a)]),
                F::vacant(c),
            ]),
            F::product(vec![F::sum(vec![F::number(a), F::raise(a)]), F::number(c)]),
        ])
    };
    match kind {
        BitKind::ClearBit => unit_plus(F::lower(bm), bm),
        BitKind::CopyBit => unit_plus(F::raise(bm), BitMode::Mem(n)),
        BitKind::LoadBit => assign(r, bm),
        BitKind::StoreBit => assign(bm, r),
        BitKind::AddBit => unit_plus(F::raise(r), bm),
        BitKind::SubBit => unit_plus(F::lower(r), bm),
        BitKind::MulBit => F::sum(vec![
            F::Identity,
            F::product(vec![F::sum(vec![F::lower(r), F::scalar(-1.0, F::number(r))]), F::vacant(bm)]),
        ]),
    }
}

/// Value semantics the closed form is meant to have; `None` is annihilation.
pub fn intended_bit_action(kind: BitKind, m: usize, n: usize, s: &BitBasisState) -> Option<BitBasisState> {
    let r = BitMode::Register;
    let bm = BitMode::Mem(m);
    let (rv, mv) = (s.register(), s.bit(m));
    match kind {
        BitKind::ClearBit => Some(s.clone().with(bm, false)),
        BitKind::CopyBit => match (mv, s.bit(n)) {
            (_, false) => Some(s.clone()),
            (false, true) => Some(s.clone().with(bm, true)),
            (true, true) => None,
        },
        BitKind::LoadBit => Some(s.clone().with(r, mv)),
        BitKind::StoreBit => Some(s.clone().with(bm, rv)),
        BitKind::AddBit => match (rv, mv) {
            (_, false) => Some(s.clone()),
            (false, true) => Some(s.clone().with(r, true)),
            (true, true) => None,
        },
        BitKind::SubBit => match (rv, mv) {
            (_, false) => Some(s.clone()),
            (true, true) => Some(s.clone().with(r, false)),
            (false, true) => None,
        },
        BitKind::MulBit => Some(s.clone().with(r, rv && mv)),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BitVerification {
    pub kind: BitKind,
    pub passed: bool,
    pub cases: usize,
    /// Cases whose single output carried amplitude −1.
    pub negative_signs: usize,
    pub failures: Vec<String>,
}

/// Checks [`simplified_form`] against [`intended_bit_action`] for every
/// choice of `m` (and `n ≠ m` for copy) and every basis state. Outputs must
/// be a single state with amplitude ±1, or nothing.
///
/// # Panics
/// If `mode_count` is 0 or above 8, or below 2 for copy.
pub fn verify_bit_semantics(kind: BitKind, mode_count: usize) -> BitVerification {
    assert!((1..=8).contains(&mode_count), "mode count must be in 1..=8");
    let mut report = BitVerification {
        kind,
        passed: true,
        cases: 0,
        negative_signs: 0,
        failures: Vec::new(),
    };
    let pairs: Vec<(usize, usize)> = match kind {
        BitKind::CopyBit => {
            assert!(mode_count >= 2, "copy needs two modes");
            (0..mode_count)
                .flat_map(|m| (0..mode_count).filter(move |&n| n != m).map(move |n| (m, n)))
                .collect()
        }
        _ => (0..mode_count).map(|m| (m, m)).collect(),
    };
    for (m, n) in pairs {
        let op = simplified_form(kind, m, n);
        for s in BitBasisState::all(mode_count) {
            report.cases += 1;
            let got = apply_fermi(&op, &s);
            let want = intended_bit_action(kind, m, n, &s);
            let ok = match (&want, got.as_slice()) {
                (None, []) => true,
                (Some(w), [(a, t)]) if t == w => {
                    if *a == Amplitude::new(-1.0, 0.0) {
                        report.negative_signs += 1;
                        true
                    } else {
                        *a == Amplitude::new(1.0, 0.0)
                    }
                }
                _ => false,
            };
            if !ok {
                report.passed = false;
                report.failures.push(format!("m={m} n={n} on {s}: got {got:?}"));
            }
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub relation: String,
    pub passed: bool,
    pub cases: usize,
}

fn every_state(mode_count: usize, op: &FermiOp, expect: impl Fn(&BitBasisState) -> Vec<(Amplitude, BitBasisState)>) -> (bool, usize) {
    let mut cases = 0;
    let ok = BitBasisState::all(mode_count).all(|s| {
        cases += 1;
        apply_fermi(op, &s) == expect(&s)
    });
    (ok, cases)
}

/// Checks the fermionic algebra on every mode (register included) and every
/// basis state of `mode_count` memory bits.
pub fn check_fermi_relations(mode_count: usize) -> Vec<RelationReport> {
    let modes: Vec<BitMode> = std::iter::once(BitMode::Register)
        .chain((0..mode_count).map(BitMode::Mem))
        .collect();
    let one = Amplitude::new(1.0, 0.0);
    let identity = |s: &BitBasisState| vec![(one, s.clone())];
    let nothing = |_: &BitBasisState| Vec::new();
    let mut out = Vec::new();
    let mut run = |relation: &str, ops: Vec<(FermiOp, bool)>| {
        let mut passed = true;
        let mut cases = 0;
        for (op, is_identity) in ops {
            let (ok, n) = if is_identity {
                every_state(mode_count, &op, identity)
            } else {
                every_state(mode_count, &op, nothing)
            };
            passed &= ok;
            cases += n;
        }
        out.push(RelationReport {
            relation: relation.to_string(),
            passed,
            cases,
        });
    };
    let pairs: Vec<(BitMode, BitMode)> = modes.iter().flat_map(|&i| modes.iter().map(move |&j| (i, j))).collect();
    run(
        "{b_i, b_j†} = δ_ij",
        pairs
            .iter()
            .map(|&(i, j)| (FermiOp::anticommutator(FermiOp::lower(i), FermiOp::raise(j)), i == j))
            .collect(),
    );
    run(
        "{b_i, b_j} = 0",
        pairs
            .iter()
            .map(|&(i, j)| (FermiOp::anticommutator(FermiOp::lower(i), FermiOp::lower(j)), false))
            .collect(),
    );
    run(
        "{b_i†, b_j†} = 0",
        pairs
            .iter()
            .map(|&(i, j)| (FermiOp::anticommutator(FermiOp::raise(i), FermiOp::raise(j)), false))
            .collect(),
    );
    run(
        "b_i² = 0",
        modes.iter().map(|&i| (FermiOp::product(vec![FermiOp::lower(i), FermiOp::lower(i)]), false)).collect(),
    );
    run(
        "(b_i†)² = 0",
        modes.iter().map(|&i| (FermiOp::product(vec![FermiOp::raise(i), FermiOp::raise(i)]), false)).collect(),
    );
    run(
        "N_i = N_i²",
        modes
            .iter()
            .map(|&i| {
                let diff = FermiOp::sum(vec![
                    FermiOp::product(vec![FermiOp::number(i), FermiOp::number(i)]),
                    FermiOp::scalar(-1.0, FermiOp::number(i)),
                ]);
                (diff, false)
            })
            .collect(),
    );
    run(
        "N_i = b_i† b_i",
        modes
            .iter()
            .map(|&i| {
                let diff = FermiOp::sum(vec![
                    FermiOp::product(vec![FermiOp::raise(i), FermiOp::lower(i)]),
                    FermiOp::scalar(-1.0, FermiOp::number(i)),
                ]);
                (diff, false)
            })
            .collect(),
    );
    out
}
