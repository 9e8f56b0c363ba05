//! Probabilistic and quantum rewrite grammars.
//!
//! ```text
//! # two coins
//! mode: classical
//! start: S
//! rule: h -> t @ .5
//! rule: h -> h @ .5
//! ```
//!
//! Rules sharing a left-hand side have their weights normalized against each
//! other: classical weights divide by their sum, quantum amplitudes by the
//! root of their summed squared moduli.

mod derive;

use std::fmt;

use thiserror::Error;

use crate::error::ParseError;
use crate::fock::Amplitude;

pub use derive::{
    aggregate_unordered, derive_distribution, enumerate_paths, pass_distribution, step_successors,
    transition_distribution, transition_distribution_paths, transition_probability, DerivationPath,
    DeriveMode, Horizon, Successor, Transition,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Weights are probabilities; path probabilities add.
    Classical,
    /// Weights are amplitudes; path amplitudes add, then square.
    Quantum,
}

/// How strings split into symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolStyle {
    /// Every non-whitespace character is a symbol.
    Chars,
    /// Whitespace-separated tokens are symbols.
    Tokens,
}

pub type Symbols = Vec<String>;

#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub lhs: Symbols,
    pub rhs: Symbols,
    /// Weight as written in the file.
    pub weight: Amplitude,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Grammar {
    pub start: Symbols,
    pub rules: Vec<Rule>,
    pub mode: Mode,
    pub style: SymbolStyle,
    normalized: Vec<Amplitude>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("no rule rewrites symbol `{0}`")]
    NoRuleForSymbol(String),
    #[error("parallel passes are defined for classical grammars only")]
    QuantumPass,
}

impl Grammar {
    pub fn new(start: Symbols, rules: Vec<Rule>, mode: Mode, style: SymbolStyle) -> Self {
        let normalized = rules
            .iter()
            .map(|r| {
                let group = rules.iter().filter(|o| o.lhs == r.lhs).map(|o| o.weight);
                let scale = match mode {
                    Mode::Classical => group.map(|w| w.re).sum::<f64>(),
                    Mode::Quantum => group.map(|w| w.norm_sqr()).sum::<f64>().sqrt(),
                };
                if scale > 0.0 {
                    r.weight / scale
                } else {
                    Amplitude::new(0.0, 0.0)
                }
            })
            .collect();
        Grammar {
            start,
            rules,
            mode,
            style,
            normalized,
        }
    }

    /// Weight of rule `i` after normalization within its left-hand side.
    pub fn weight(&self, i: usize) -> Amplitude {
        self.normalized[i]
    }

    pub fn split(&self, text: &str) -> Symbols {
        match self.style {
            SymbolStyle::Chars => text.chars().filter(|c| !c.is_whitespace()).map(String::from).collect(),
            SymbolStyle::Tokens => text.split_whitespace().map(String::from).collect(),
        }
    }

    pub fn render(&self, symbols: &[String]) -> String {
        match self.style {
            SymbolStyle::Chars => symbols.concat(),
            SymbolStyle::Tokens => symbols.join(" "),
        }
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            Mode::Classical => "classical",
            Mode::Quantum => "quantum",
        };
        writeln!(f, "mode: {mode}")?;
        if self.style == SymbolStyle::Tokens {
            writeln!(f, "symbols: tokens")?;
        }
        writeln!(f, "start: {}", self.render(&self.start))?;
        for r in &self.rules {
            write!(f, "rule: {} -> {}", self.render(&r.lhs), self.render(&r.rhs))?;
            if r.weight.im == 0.0 {
                writeln!(f, " @ {}", r.weight.re)?;
            } else {
                writeln!(f, " @ ({},{})", r.weight.re, r.weight.im)?;
            }
        }
        Ok(())
    }
}

fn parse_weight(text: &str, line: usize, col: usize) -> Result<Amplitude, ParseError> {
    let err = || ParseError::new(line, col, format!("malformed weight `{text}`"));
    let t = text.trim();
    let amp = if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        let (re, im) = inner.split_once(',').ok_or_else(err)?;
        Amplitude::new(re.trim().parse().map_err(|_| err())?, im.trim().parse().map_err(|_| err())?)
    } else {
        Amplitude::new(t.parse().map_err(|_| err())?, 0.0)
    };
    if !(amp.re.is_finite() && amp.im.is_finite()) {
        return Err(ParseError::new(line, col, "weight must be finite"));
    }
    Ok(amp)
}

/// Parses the line-based grammar format. Directives: `mode:`, `symbols:`,
/// `start:` and `rule: lhs -> rhs [@ weight]`; `#` starts a comment.
pub fn parse_grammar(text: &str) -> Result<Grammar, ParseError> {
    let mut mode = Mode::Classical;
    let mut style = SymbolStyle::Chars;
    let mut start: Option<(String, usize)> = None;
    let mut raw_rules: Vec<(String, String, Amplitude, usize, usize)> = Vec::new();
    for (idx, full) in text.lines().enumerate() {
        let line = idx + 1;
        let code = full.split('#').next().unwrap_or("");
        if code.trim().is_empty() {
            continue;
        }
        let indent = code.len() - code.trim_start().len();
        let Some((key, value)) = code.split_once(':') else {
            return Err(ParseError::new(line, indent + 1, "expected `key: value`"));
        };
        let value_col = key.len() + 2;
        match key.trim() {
            "mode" => {
                mode = match value.trim() {
                    "classical" => Mode::Classical,
                    "quantum" => Mode::Quantum,
                    other => return Err(ParseError::new(line, value_col, format!("unknown mode `{other}`"))),
                }
            }
            "symbols" => {
                style = match value.trim() {
                    "chars" => SymbolStyle::Chars,
                    "tokens" => SymbolStyle::Tokens,
                    other => {
                        return Err(ParseError::new(line, value_col, format!("unknown symbol style `{other}`")));
                    }
                }
            }
            "start" => {
                if start.is_some() {
                    return Err(ParseError::new(line, indent + 1, "duplicate `start:`"));
                }
                start = Some((value.trim().to_string(), line));
            }
            "rule" => {
                let (body, weight) = match value.split_once('@') {
                    Some((b, w)) => {
                        let col = key.len() + 1 + b.len() + 2;
                        (b, parse_weight(w, line, col)?)
                    }
                    None => (value, Amplitude::new(1.0, 0.0)),
                };
                let Some((lhs, rhs)) = body.split_once("->") else {
                    return Err(ParseError::new(line, value_col, "rule needs `lhs -> rhs`"));
                };
                if lhs.trim().is_empty() {
                    return Err(ParseError::new(line, value_col, "empty left-hand side"));
                }
                raw_rules.push((lhs.to_string(), rhs.to_string(), weight, line, value_col));
            }
            other => {
                return Err(ParseError::new(line, indent + 1, format!("unknown directive `{other}`")));
            }
        }
    }
    let last = text.lines().count().max(1);
    let (start_text, start_line) = start.ok_or_else(|| ParseError::new(last, 1, "missing `start:`"))?;
    if raw_rules.is_empty() {
        return Err(ParseError::new(last, 1, "grammar has no rules"));
    }
    let probe = Grammar::new(Vec::new(), Vec::new(), mode, style);
    let start_symbols = probe.split(&start_text);
    if start_symbols.is_empty() {
        return Err(ParseError::new(start_line, 1, "empty start string"));
    }
    let mut rules = Vec::new();
    for (lhs, rhs, weight, line, col) in raw_rules {
        if mode == Mode::Classical && (weight.im != 0.0 || weight.re < 0.0) {
            return Err(ParseError::new(
                line,
                col,
                "classical weights must be nonnegative reals",
            ));
        }
        rules.push(Rule {
            lhs: probe.split(&lhs),
            rhs: probe.split(&rhs),
            weight,
        });
    }
    Ok(Grammar::new(start_symbols, rules, mode, style))
}
