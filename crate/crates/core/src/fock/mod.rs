//! Machine states.
//!
//! A [`BasisState`] is one classical configuration of the machine, from the
//! register and program counter through sparse memory to the I/O streams. All values are arbitrary-precision nonnegative integers. A
//! [`Superposition`] is a finite, canonically ordered list of complex
//! amplitudes attached to distinct basis states.

pub(crate) mod text;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::Zero;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::StateError;

pub use text::{deserialize, serialize};

/// Complex probability amplitude.
pub type Amplitude = Complex64;

/// Amplitudes with modulus below this value are dropped after a merge.
pub const DEFAULT_DROP_TOLERANCE: f64 = 1e-12;

/// One classical machine configuration (a number eigenstate).
///
/// Field order is the canonical ordering: register, pc, fuel, memory pairs
/// sorted by address, remaining input, emitted output.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisState {
    pub register: BigUint,
    pub pc: BigUint,
    pub fuel: BigUint,
    mem: BTreeMap<u64, BigUint>,
    pub input: Vec<BigUint>,
    pub output: Vec<BigUint>,
}

impl BasisState {
    /// The ground state: every location zero, both streams empty.
    pub fn ground() -> Self {
        Self::default()
    }

    pub fn with_input<I, V>(input: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: Into<BigUint>,
    {
        BasisState {
            input: input.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    /// Value at memory address `addr`; absent cells read as zero.
    pub fn mem(&self, addr: u64) -> BigUint {
        self.mem.get(&addr).cloned().unwrap_or_default()
    }

    pub fn mem_ref(&self, addr: u64) -> Option<&BigUint> {
        self.mem.get(&addr)
    }

    /// Writes a memory cell. Zero values are removed rather than stored.
    pub fn set_mem(&mut self, addr: u64, value: BigUint) {
        if value.is_zero() {
            self.mem.remove(&addr);
        } else {
            self.mem.insert(addr, value);
        }
    }

    /// Nonzero memory cells in ascending address order.
    pub fn memory(&self) -> impl Iterator<Item = (u64, &BigUint)> + '_ {
        self.mem.iter().map(|(a, v)| (*a, v))
    }

    pub fn memory_map(&self) -> &BTreeMap<u64, BigUint> {
        &self.mem
    }

    pub fn with_mem<V: Into<BigUint>>(mut self, addr: u64, value: V) -> Self {
        self.set_mem(addr, value.into());
        self
    }

    pub fn with_register<V: Into<BigUint>>(mut self, value: V) -> Self {
        self.register = value.into();
        self
    }
}

/// A finite superposition of distinct basis states.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Superposition {
    terms: Vec<(Amplitude, BasisState)>,
}

impl Superposition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The unit vector for a single basis state.
    pub fn basis(state: BasisState) -> Self {
        Superposition {
            terms: vec![(Amplitude::new(1.0, 0.0), state)],
        }
    }

    /// Sums amplitudes of identical states into canonical order. Terms below
    /// [`DEFAULT_DROP_TOLERANCE`] are dropped.
    pub fn merge<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Amplitude, BasisState)>,
    {
        Self::merge_with_tolerance(terms, DEFAULT_DROP_TOLERANCE)
    }

    /// Like [`Superposition::merge`] with an explicit drop tolerance. A
    /// tolerance of zero removes only exact zeros.
    pub fn merge_with_tolerance<I>(terms: I, tolerance: f64) -> Self
    where
        I: IntoIterator<Item = (Amplitude, BasisState)>,
    {
        let mut acc: BTreeMap<BasisState, Amplitude> = BTreeMap::new();
        for (amp, state) in terms {
            debug_assert!(amp.re.is_finite() && amp.im.is_finite());
            *acc.entry(state).or_insert_with(Amplitude::zero) += amp;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, amp)| {
                let modulus = amp.norm();
                modulus > 0.0 && modulus >= tolerance
            })
            .map(|(s, a)| (a, s))
            .collect();
        Superposition { terms }
    }

    pub fn terms(&self) -> &[(Amplitude, BasisState)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Amplitude, BasisState)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn states(&self) -> impl Iterator<Item = &BasisState> + '_ {
        self.terms.iter().map(|(_, s)| s)
    }

    /// Amplitude of `state`, zero if absent.
    pub fn amplitude_of(&self, state: &BasisState) -> Amplitude {
        self.terms
            .binary_search_by(|(_, s)| s.cmp(state))
            .map(|i| self.terms[i].0)
            .unwrap_or_else(|_| Amplitude::zero())
    }

    /// Sum of squared moduli.
    pub fn norm_squared(&self) -> f64 {
        self.terms.iter().map(|(a, _)| a.norm_sqr()).sum()
    }

    pub fn scale(&self, factor: Amplitude) -> Self {
        Self::merge(self.terms.iter().map(|(a, s)| (a * factor, s.clone())))
    }

    /// `self + other`, merged.
    pub fn add(&self, other: &Superposition) -> Self {
        Self::merge(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    /// `<self|other>`: sum of `conj(a_s) * b_s` over shared basis states.
    pub fn inner_product(&self, other: &Superposition) -> Amplitude {
        let mut total = Amplitude::zero();
        for (amp, state) in &self.terms {
            let theirs = other.amplitude_of(state);
            if !theirs.is_zero() {
                total += amp.conj() * theirs;
            }
        }
        total
    }

    /// Measurement probabilities `|amp|^2 / sum |amp|^2`.
    pub fn probabilities(&self) -> Result<BTreeMap<BasisState, f64>, StateError> {
        if self.terms.is_empty() {
            return Err(StateError::EmptyState);
        }
        let total = self.norm_squared();
        Ok(self
            .terms
            .iter()
            .map(|(a, s)| (s.clone(), a.norm_sqr() / total))
            .collect())
    }

    /// Draws `count` measurement outcomes with a ChaCha8 generator seeded
    /// from `seed`. Identical seeds give identical counts.
    pub fn sample(&self, count: u64, seed: u64) -> Result<BTreeMap<BasisState, u64>, StateError> {
        let probs = self.probabilities()?;
        let mut counts = BTreeMap::new();
        if count == 0 {
            return Ok(counts);
        }
        let (states, weights): (Vec<_>, Vec<_>) = probs.into_iter().unzip();
        let dist = WeightedIndex::new(&weights).expect("probabilities are positive and finite");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hits = vec![0u64; states.len()];
        for _ in 0..count {
            hits[dist.sample(&mut rng)] += 1;
        }
        for (state, n) in states.into_iter().zip(hits) {
            if n > 0 {
                counts.insert(state, n);
            }
        }
        Ok(counts)
    }

    /// Largest amplitude difference over the union of supports.
    pub fn max_abs_difference(&self, other: &Superposition) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, s) in &self.terms {
            worst = worst.max((a - other.amplitude_of(s)).norm());
        }
        for (b, s) in &other.terms {
            worst = worst.max((self.amplitude_of(s) - b).norm());
        }
        worst
    }
}

impl FromIterator<(Amplitude, BasisState)> for Superposition {
    fn from_iter<T: IntoIterator<Item = (Amplitude, BasisState)>>(iter: T) -> Self {
        Self::merge(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Amplitude {
        Amplitude::new(re, 0.0)
    }

    fn st(reg: u32) -> BasisState {
        BasisState::ground().with_register(reg)
    }

    #[test]
    fn merge_cancels_exactly() {
        let s = Superposition::merge(vec![(c(1.0), st(1)), (c(-1.0), st(1))]);
        assert!(s.is_empty());
    }

    #[test]
    fn merge_keeps_distinct_states() {
        let s = Superposition::merge(vec![(c(0.8), st(2)), (c(0.6), st(1))]);
        assert_eq!(s.len(), 2);
        assert_eq!(s.terms()[0], (c(0.6), st(1)));
        assert_eq!(s.terms()[1], (c(0.8), st(2)));
    }

    #[test]
    fn merge_adds_amplitudes() {
        let s = Superposition::merge(vec![(c(0.5), st(3)), (c(0.5), st(3))]);
        assert_eq!(s.terms(), &[(c(1.0), st(3))]);
    }

    #[test]
    fn merge_drops_below_tolerance() {
        let s = Superposition::merge(vec![(c(1e-13), st(3)), (c(1.0), st(4))]);
        assert_eq!(s.len(), 1);
        let kept = Superposition::merge_with_tolerance(vec![(c(1e-13), st(3))], 0.0);
        assert_eq!(kept.len(), 1);
    }

    #[test]
    fn zero_memory_is_never_stored() {
        let s = BasisState::ground().with_mem(4, 7u32).with_mem(4, 0u32);
        assert_eq!(s.memory().count(), 0);
        assert_eq!(s, BasisState::ground());
    }

    #[test]
    fn orthonormal_basis() {
        let a = Superposition::basis(st(1));
        let b = Superposition::basis(st(2));
        assert_eq!(a.inner_product(&a), c(1.0));
        assert_eq!(a.inner_product(&b), c(0.0));
        let psi = Superposition::merge(vec![(c(0.6), st(1)), (c(0.8), st(2))]);
        assert!((psi.inner_product(&psi).re - 1.0).abs() < 1e-15);
        assert_eq!(psi.inner_product(&psi).im, 0.0);
    }

    #[test]
    fn probabilities_from_squared_moduli() {
        let a = (1.0f64 / 3.0).sqrt();
        let b = (2.0f64 / 3.0).sqrt();
        let psi = Superposition::merge(vec![(c(a), st(1)), (Amplitude::new(0.0, b), st(2))]);
        let p = psi.probabilities().unwrap();
        assert!((p[&st(1)] - 1.0 / 3.0).abs() < 1e-12);
        assert!((p[&st(2)] - 2.0 / 3.0).abs() < 1e-12);

        let single = Superposition::merge(vec![(Amplitude::new(-3.0, 4.0), st(9))]);
        assert_eq!(single.probabilities().unwrap()[&st(9)], 1.0);
        assert_eq!(Superposition::empty().probabilities(), Err(StateError::EmptyState));
    }

    #[test]
    fn series_amplitudes_give_squared_coefficients() {
        // amplitudes (-it)^n/n! at t = 0.1
        let t: f64 = 0.1;
        let mut terms = Vec::new();
        let mut fact = 1.0;
        for n in 0..=8u32 {
            if n > 0 {
                fact *= n as f64;
            }
            let amp = Amplitude::new(0.0, -t).powu(n) / fact;
            terms.push((amp, BasisState::ground().with_mem(n as u64, 1u32)));
        }
        let psi = Superposition::merge_with_tolerance(terms, 0.0);
        let p = psi.probabilities().unwrap();
        let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
        let raw = |n: u32| (t.powi(n as i32) / fact(n)).powi(2);
        let total: f64 = (0..=8).map(raw).sum();
        for n in 0..=8u32 {
            let s = BasisState::ground().with_mem(n as u64, 1u32);
            assert!((p[&s] - raw(n) / total).abs() < 1e-14);
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let one = Superposition::basis(st(5));
        assert_eq!(one.sample(100, 7).unwrap()[&st(5)], 100);
        assert!(one.sample(0, 7).unwrap().is_empty());

        let psi = Superposition::merge(vec![(c(0.5), st(1)), (c(0.75f64.sqrt()), st(2))]);
        let first = psi.sample(10_000, 42).unwrap();
        assert_eq!(first, psi.sample(10_000, 42).unwrap());
        assert_eq!(first.values().sum::<u64>(), 10_000);
        // binomial: mean 2500, sigma = sqrt(10000 * 0.25 * 0.75)
        let sigma = (10_000.0f64 * 0.25 * 0.75).sqrt();
        assert!((first[&st(1)] as f64 - 2500.0).abs() <= 4.0 * sigma);
        assert_eq!(Superposition::empty().sample(3, 1), Err(StateError::EmptyState));
    }
}
