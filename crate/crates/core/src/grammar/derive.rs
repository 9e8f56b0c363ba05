use std::collections::BTreeMap;

use super::{Grammar, GrammarError, Mode, Symbols};
use crate::fock::Amplitude;

/// One single-occurrence rewrite of a string.
#[derive(Clone, Debug, PartialEq)]
pub struct Successor {
    pub string: Symbols,
    pub position: usize,
    pub rule: usize,
    /// Normalized rule weight.
    pub weight: Amplitude,
}

/// How many rewrite steps a derivation may take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Horizon {
    Exactly(usize),
    /// Any length from 0 to the bound; paths of different lengths reaching
    /// the same output add.
    AtMost(usize),
}

impl Horizon {
    fn bound(self) -> usize {
        match self {
            Horizon::Exactly(n) | Horizon::AtMost(n) => n,
        }
    }

    fn accepts(self, depth: usize) -> bool {
        match self {
            Horizon::Exactly(n) => depth == n,
            Horizon::AtMost(n) => depth <= n,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivationPath {
    /// `(position, rule index)` per step.
    pub steps: Vec<(usize, usize)>,
    /// Product of the step weights.
    pub amplitude: Amplitude,
    pub output: Symbols,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub relative: f64,
    /// `relative` divided by the sum over all outputs at the same horizon.
    pub absolute: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeriveMode {
    /// One occurrence rewritten per step.
    Step,
    /// Every symbol rewritten once per step, independently.
    Pass,
}

/// Every `(position, rule)` rewrite of `s`, ordered by position then rule.
/// `positions`, when given, limits which occurrence positions may be used.
pub fn step_successors(g: &Grammar, s: &[String], positions: Option<&[usize]>) -> Vec<Successor> {
    let mut out = Vec::new();
    for pos in 0..s.len() {
        if positions.is_some_and(|allowed| !allowed.contains(&pos)) {
            continue;
        }
        for (i, rule) in g.rules.iter().enumerate() {
            if s[pos..].starts_with(&rule.lhs) {
                let mut string = s[..pos].to_vec();
                string.extend(rule.rhs.iter().cloned());
                string.extend(s[pos + rule.lhs.len()..].iter().cloned());
                out.push(Successor {
                    string,
                    position: pos,
                    rule: i,
                    weight: g.weight(i),
                });
            }
        }
    }
    out
}

/// All derivation paths from `input` within the horizon, depth first.
pub fn enumerate_paths(g: &Grammar, input: &str, horizon: Horizon, positions: Option<&[usize]>) -> Vec<DerivationPath> {
    fn walk(
        g: &Grammar,
        cur: &DerivationPath,
        horizon: Horizon,
        positions: Option<&[usize]>,
        out: &mut Vec<DerivationPath>,
    ) {
        let depth = cur.steps.len();
        if horizon.accepts(depth) {
            out.push(cur.clone());
        }
        if depth == horizon.bound() {
            return;
        }
        for succ in step_successors(g, &cur.output, positions) {
            let mut steps = cur.steps.clone();
            steps.push((succ.position, succ.rule));
            let next = DerivationPath {
                steps,
                amplitude: cur.amplitude * succ.weight,
                output: succ.string,
            };
            walk(g, &next, horizon, positions, out);
        }
    }
    let start = DerivationPath {
        steps: Vec::new(),
        amplitude: Amplitude::new(1.0, 0.0),
        output: g.split(input),
    };
    let mut out = Vec::new();
    walk(g, &start, horizon, positions, &mut out);
    out
}

fn finish(g: &Grammar, sums: BTreeMap<Symbols, Amplitude>) -> BTreeMap<String, Transition> {
    let relative: Vec<(String, f64)> = sums
        .into_iter()
        .map(|(s, a)| {
            let r = match g.mode {
                Mode::Classical => a.re,
                Mode::Quantum => a.norm_sqr(),
            };
            (g.render(&s), r)
        })
        .collect();
    let total: f64 = relative.iter().map(|(_, r)| r).sum();
    relative
        .into_iter()
        .map(|(s, r)| {
            let absolute = if total > 0.0 { r / total } else { 0.0 };
            (s, Transition { relative: r, absolute })
        })
        .collect()
}

/// Transition probabilities to every reachable output, by summing over
/// explicitly enumerated paths.
pub fn transition_distribution_paths(
    g: &Grammar,
    input: &str,
    horizon: Horizon,
    positions: Option<&[usize]>,
) -> BTreeMap<String, Transition> {
    let mut sums: BTreeMap<Symbols, Amplitude> = BTreeMap::new();
    for p in enumerate_paths(g, input, horizon, positions) {
        *sums.entry(p.output).or_default() += p.amplitude;
    }
    finish(g, sums)
}

/// Transition probabilities to every reachable output, by dynamic
/// programming over the strings reachable at each depth.
pub fn transition_distribution(
    g: &Grammar,
    input: &str,
    horizon: Horizon,
    positions: Option<&[usize]>,
) -> BTreeMap<String, Transition> {
    let mut layer: BTreeMap<Symbols, Amplitude> = BTreeMap::new();
    layer.insert(g.split(input), Amplitude::new(1.0, 0.0));
    let mut acc: BTreeMap<Symbols, Amplitude> = BTreeMap::new();
    for depth in 0..=horizon.bound() {
        if horizon.accepts(depth) {
            for (s, a) in &layer {
                *acc.entry(s.clone()).or_default() += a;
            }
        }
        if depth == horizon.bound() {
            break;
        }
        let mut next: BTreeMap<Symbols, Amplitude> = BTreeMap::new();
        for (s, a) in &layer {
            for succ in step_successors(g, s, positions) {
                *next.entry(succ.string).or_default() += a * succ.weight;
            }
        }
        layer = next;
    }
    finish(g, acc)
}

/// Relative and absolute probability of deriving `output` from `input`.
/// Unreachable outputs give zero.
pub fn transition_probability(
    g: &Grammar,
    input: &str,
    output: &str,
    horizon: Horizon,
    positions: Option<&[usize]>,
) -> Transition {
    let key = g.render(&g.split(output));
    transition_distribution(g, input, horizon, positions)
        .get(&key)
        .copied()
        .unwrap_or(Transition {
            relative: 0.0,
            absolute: 0.0,
        })
}

/// Rewrites every symbol of `s` once, each by a single-symbol rule chosen
/// with its normalized probability.
pub fn pass_distribution(g: &Grammar, s: &str) -> Result<BTreeMap<String, f64>, GrammarError> {
    if g.mode != Mode::Classical {
        return Err(GrammarError::QuantumPass);
    }
    let mut partial: BTreeMap<Symbols, f64> = BTreeMap::new();
    partial.insert(Vec::new(), 1.0);
    for sym in g.split(s) {
        let options: Vec<(usize, f64)> = g
            .rules
            .iter()
            .enumerate()
            .filter(|(_, r)| r.lhs.len() == 1 && r.lhs[0] == sym)
            .map(|(i, _)| (i, g.weight(i).re))
            .collect();
        if options.is_empty() {
            return Err(GrammarError::NoRuleForSymbol(sym));
        }
        let mut next: BTreeMap<Symbols, f64> = BTreeMap::new();
        for (prefix, p) in &partial {
            for (i, w) in &options {
                let mut s = prefix.clone();
                s.extend(g.rules[*i].rhs.iter().cloned());
                *next.entry(s).or_default() += p * w;
            }
        }
        partial = next;
    }
    Ok(partial
        .into_iter()
        .filter(|(_, p)| *p > 0.0)
        .map(|(s, p)| (g.render(&s), p))
        .collect())
}

/// Merges outcomes that differ only in symbol order; keys become the sorted
/// symbol multiset.
pub fn aggregate_unordered(g: &Grammar, dist: &BTreeMap<String, f64>) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for (s, p) in dist {
        let mut syms = g.split(s);
        syms.sort();
        *out.entry(g.render(&syms)).or_default() += p;
    }
    out
}

/// Absolute output distribution after `steps` rewriting steps.
pub fn derive_distribution(
    g: &Grammar,
    from: &str,
    steps: usize,
    mode: DeriveMode,
    positions: Option<&[usize]>,
) -> Result<BTreeMap<String, f64>, GrammarError> {
    match mode {
        DeriveMode::Step => Ok(transition_distribution(g, from, Horizon::Exactly(steps), positions)
            .into_iter()
            .filter(|(_, t)| t.absolute > 0.0)
            .map(|(s, t)| (s, t.absolute))
            .collect()),
        DeriveMode::Pass => {
            let mut dist: BTreeMap<String, f64> = BTreeMap::new();
            dist.insert(g.render(&g.split(from)), 1.0);
            for _ in 0..steps {
                let mut next = BTreeMap::new();
                for (s, p) in &dist {
                    for (t, q) in pass_distribution(g, s)? {
                        *next.entry(t).or_default() += p * q;
                    }
                }
                dist = next;
            }
            Ok(dist)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;

    const XY: &str = "start: S\nrule: S -> xy\nrule: x -> xx @ .75\nrule: x -> xy @ .25\nrule: y -> yy\n";
    const COIN: &str = "start: S\nrule: S -> hh\nrule: S -> tt\nrule: S -> ht\nrule: S -> th\n\
                        rule: h -> t @ .5\nrule: h -> h @ .5\nrule: t -> h @ .5\nrule: t -> t @ .5\n";

    fn syms(g: &Grammar, s: &str) -> Symbols {
        g.split(s)
    }

    #[test]
    fn xy_successors() {
        let g = parse_grammar(XY).unwrap();
        let succ = step_successors(&g, &syms(&g, "xy"), Some(&[0]));
        let got: Vec<(String, f64)> = succ.iter().map(|s| (g.render(&s.string), s.weight.re)).collect();
        assert_eq!(got, vec![("xxy".to_string(), 0.75), ("xyy".to_string(), 0.25)]);
        assert_eq!(step_successors(&g, &syms(&g, "xx"), None).len(), 4);
        assert!(step_successors(&g, &syms(&g, "zz"), None).is_empty());
    }

    #[test]
    fn xy_one_step_probabilities() {
        let g = parse_grammar(XY).unwrap();
        let t = transition_probability(&g, "xy", "xxy", Horizon::Exactly(1), Some(&[0]));
        assert!((t.absolute - 0.75).abs() < 1e-12);
        let t = transition_probability(&g, "xy", "xyy", Horizon::Exactly(1), Some(&[0]));
        assert!((t.absolute - 0.25).abs() < 1e-12);
        let t = transition_probability(&g, "xy", "yyy", Horizon::Exactly(1), None);
        assert_eq!(t.relative, 0.0);
    }

    #[test]
    fn coin_pass() {
        let g = parse_grammar(COIN).unwrap();
        let d = pass_distribution(&g, "hh").unwrap();
        assert_eq!(d.len(), 4);
        for p in d.values() {
            assert!((p - 0.25).abs() < 1e-12);
        }
        let agg = aggregate_unordered(&g, &d);
        assert!((agg["ht"] - 0.5).abs() < 1e-12);
        let single = pass_distribution(&g, "h").unwrap();
        assert_eq!(single["h"], 0.5);
        assert_eq!(single["t"], 0.5);
        assert_eq!(
            pass_distribution(&g, "hx"),
            Err(GrammarError::NoRuleForSymbol("x".into()))
        );
    }

    #[test]
    fn pass_marginals_match_single_symbol() {
        let g = parse_grammar("start: S\nrule: a -> a @ 1\nrule: a -> b @ 3\nrule: b -> a @ 1\n").unwrap();
        let pair = pass_distribution(&g, "ab").unwrap();
        let single = pass_distribution(&g, "a").unwrap();
        let mut marginal: BTreeMap<String, f64> = BTreeMap::new();
        for (s, p) in pair {
            *marginal.entry(s[..1].to_string()).or_default() += p;
        }
        for (s, p) in single {
            assert!((marginal[&s] - p).abs() < 1e-12);
        }
    }

    #[test]
    fn quantum_interference() {
        let text = "mode: quantum\nstart: S\nrule: S -> L @ 1\nrule: S -> R @ -1\n\
                    rule: L -> o @ 1\nrule: L -> p @ 1\nrule: R -> o @ 1\nrule: R -> p @ -1\n";
        let g = parse_grammar(text).unwrap();
        let d = transition_distribution(&g, "S", Horizon::Exactly(2), None);
        assert!(d["o"].absolute.abs() < 1e-12);
        assert!((d["p"].absolute - 1.0).abs() < 1e-12);

        let classical = parse_grammar(&text.replace("mode: quantum", "mode: classical").replace("-1", "1")).unwrap();
        let d = transition_distribution(&classical, "S", Horizon::Exactly(2), None);
        assert!((d["o"].absolute - 0.5).abs() < 1e-12);
    }

    #[test]
    fn complex_weights() {
        let g = parse_grammar("mode: quantum\nstart: a\nrule: a -> b @ (0,1)\nrule: a -> c @ 1\n").unwrap();
        let d = transition_distribution(&g, "a", Horizon::Exactly(1), None);
        assert!((d["b"].absolute - 0.5).abs() < 1e-12);
        assert!((d["c"].absolute - 0.5).abs() < 1e-12);
    }

    #[test]
    fn routes_agree() {
        let g = parse_grammar(XY).unwrap();
        for h in [Horizon::Exactly(3), Horizon::AtMost(3)] {
            let a = transition_distribution(&g, "xy", h, None);
            let b = transition_distribution_paths(&g, "xy", h, None);
            assert_eq!(a.keys().collect::<Vec<_>>(), b.keys().collect::<Vec<_>>());
            for (k, t) in &a {
                assert!((t.relative - b[k].relative).abs() < 1e-12);
                assert!((t.absolute - b[k].absolute).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_steps_is_identity() {
        let g = parse_grammar(XY).unwrap();
        let d = transition_distribution(&g, "xy", Horizon::AtMost(0), None);
        assert_eq!(d.len(), 1);
        assert_eq!(d["xy"].absolute, 1.0);
    }

    #[test]
    fn derive_modes() {
        let g = parse_grammar(COIN).unwrap();
        let d = derive_distribution(&g, "hh", 2, DeriveMode::Pass, None).unwrap();
        assert!((d.values().sum::<f64>() - 1.0).abs() < 1e-12);
        let g = parse_grammar(XY).unwrap();
        let d = derive_distribution(&g, "xy", 1, DeriveMode::Step, Some(&[0])).unwrap();
        assert_eq!(d.len(), 2);
    }
}
