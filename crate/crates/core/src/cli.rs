//! The `qlang` command line.
//!
//! Exit codes: 0 success, 2 malformed input file, 3 runtime failure,
//! 4 usage error. Results go to the output stream and diagnostics to the
//! error stream.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::bitlevel::{check_fermi_relations, verify_bit_semantics, BitKind};
use crate::error::{CompileError, ParseError, RuntimeError, StateError};
use crate::evolution::{build_adder_hamiltonian, build_hop_hamiltonian, dense_oracle_evolve, evolve, single_particle};
use crate::fock::text::short;
use crate::fock::{deserialize, serialize, Amplitude, BasisState, Superposition};
use crate::grammar::{
    aggregate_unordered, derive_distribution, parse_grammar, transition_probability, DeriveMode, GrammarError, Horizon,
};
use crate::qasm::{
    compile_guarded, compile_sequential, interpret, parse_program, run_algebraic, run_superposed, Program, RunResult,
    DEFAULT_STEP_LIMIT,
};
use crate::qcc::{lower_to_qasm_with, parse_c, LowerOptions, QccError, DEFAULT_DEREF_WINDOW};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;
pub const EXIT_USAGE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "qlang", version, about = "Quantum computer language simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Assemble a program and print the numbered listing
    Assemble {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run an assembly program
    Run {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the operator expression of an assembly program
    Compile {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Form::Guarded)]
        form: Form,
        #[arg(long, default_value_t = crate::algebra::DEFAULT_FUEL)]
        fuel: u64,
        /// Indented multi-line layout
        #[arg(long)]
        pretty: bool,
        #[arg(long)]
        json: bool,
    },
    /// Probabilistic and quantum grammars
    Grammar {
        #[command(subcommand)]
        command: GrammarCommand,
    },
    /// Evolve a memory state under a built-in Hamiltonian
    Evolve {
        #[arg(long, value_enum)]
        hamiltonian: HamiltonianKind,
        #[arg(long)]
        modes: u64,
        /// State file; defaults to one particle in mode 0
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(short = 't', long = "time", default_value_t = 0.1)]
        t: f64,
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// Also run the dense-matrix oracle and report the largest difference
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run an amplitude-weighted sum of assembly programs
    Superpose {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Real amplitudes, one per program; defaults to 1/sqrt(k) each
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        amps: Vec<f64>,
        #[arg(long, value_delimiter = ',', value_parser = parse_big)]
        input: Vec<BigUint>,
        #[arg(long, default_value_t = crate::algebra::DEFAULT_FUEL)]
        fuel: u64,
        /// Also draw this many measurement samples
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// One-bit-word Fermi operator checks
    Bit {
        #[command(subcommand)]
        command: BitCommand,
    },
    /// Quantum C compiler
    Qc {
        #[command(subcommand)]
        command: QcCommand,
    },
    /// Sample measurement outcomes of a state file
    Sample {
        state: PathBuf,
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_big)]
    input: Vec<BigUint>,
    #[arg(long, value_enum, default_value_t = RunMode::Interp)]
    mode: RunMode,
    #[arg(long, default_value_t = crate::algebra::DEFAULT_FUEL)]
    fuel: u64,
    #[arg(long, default_value_t = DEFAULT_STEP_LIMIT)]
    step_limit: u64,
    /// Print the program counter trace (interp mode)
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum GrammarCommand {
    /// Output distribution after a number of steps
    Derive {
        file: PathBuf,
        #[arg(long)]
        from: Option<String>,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = DeriveKind::Step)]
        mode: DeriveKind,
        /// Only rewrite symbols at these positions
        #[arg(long, value_delimiter = ',')]
        positions: Option<Vec<usize>>,
        /// Merge outcomes that differ only in symbol order
        #[arg(long)]
        unordered: bool,
        #[arg(long)]
        json: bool,
    },
    /// Probability of one transition
    Prob {
        file: PathBuf,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: String,
        /// Derivations of exactly this length
        #[arg(long, conflicts_with = "max_steps")]
        steps: Option<usize>,
        /// Derivations of any length up to this bound
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long, value_enum, default_value_t = DeriveKind::Step)]
        mode: DeriveKind,
        #[arg(long, value_delimiter = ',')]
        positions: Option<Vec<usize>>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum BitCommand {
    /// Check anticommutation relations and the closed instruction forms
    Verify {
        #[arg(long, default_value_t = 6)]
        modes: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum QcCommand {
    /// Lower a Quantum C file
    Compile {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Emit::Qasm)]
        emit: Emit,
        #[arg(long, default_value_t = DEFAULT_DEREF_WINDOW)]
        window: u64,
        #[arg(long, default_value_t = crate::algebra::DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Compile and run a Quantum C file
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEREF_WINDOW)]
        window: u64,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RunMode {
    Interp,
    Algebraic,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Form {
    Guarded,
    Sequential,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DeriveKind {
    Step,
    Pass,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HamiltonianKind {
    Hop,
    Adder,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Emit {
    Qasm,
    Opexpr,
}

fn parse_big(s: &str) -> Result<BigUint, String> {
    s.trim().parse().map_err(|_| format!("`{s}` is not a nonnegative integer"))
}

/// A failed command and its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_RUNTIME,
            message: message.into(),
        }
    }
}

fn parse_failure(path: &Path, e: &ParseError) -> Failure {
    Failure {
        code: EXIT_PARSE,
        message: format!("{}:{e}", path.display()),
    }
}

impl From<RuntimeError> for Failure {
    fn from(e: RuntimeError) -> Self {
        Failure::runtime(e.to_string())
    }
}

impl From<StateError> for Failure {
    fn from(e: StateError) -> Self {
        Failure::runtime(e.to_string())
    }
}

impl From<GrammarError> for Failure {
    fn from(e: GrammarError) -> Self {
        Failure::runtime(e.to_string())
    }
}

impl From<CompileError> for Failure {
    fn from(e: CompileError) -> Self {
        Failure::usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_program(path: &Path) -> Result<Program, Failure> {
    parse_program(&read(path)?).map_err(|e| parse_failure(path, &e))
}

fn load_state(path: &Path) -> Result<Superposition, Failure> {
    deserialize(&read(path)?).map_err(|e| parse_failure(path, &e))
}

fn big(v: &BigUint) -> Value {
    serde_json::from_str(&v.to_string()).expect("integer literal is valid JSON")
}

fn bigs(vs: &[BigUint]) -> Value {
    Value::Array(vs.iter().map(big).collect())
}

fn state_json(s: &BasisState) -> Value {
    let mem: Map<String, Value> = s.memory().map(|(a, v)| (a.to_string(), big(v))).collect();
    json!({
        "register": big(&s.register),
        "pc": big(&s.pc),
        "fuel": big(&s.fuel),
        "mem": mem,
        "input": bigs(&s.input),
        "output": bigs(&s.output),
    })
}

fn superposition_json(s: &Superposition) -> Value {
    Value::Array(
        s.terms()
            .iter()
            .map(|(a, st)| {
                let mut v = state_json(st);
                v.as_object_mut().expect("object").insert("amp".into(), json!([a.re, a.im]));
                v
            })
            .collect(),
    )
}

/// Nonzero fields of a basis state on one line.
fn brief(s: &BasisState) -> String {
    let mut parts = Vec::new();
    if s.register != BigUint::ZERO {
        parts.push(format!("register={}", s.register));
    }
    let cells: Vec<String> = s.memory().map(|(a, v)| format!("{a}: {v}")).collect();
    if !cells.is_empty() {
        parts.push(format!("mem={{{}}}", cells.join(", ")));
    }
    if !s.input.is_empty() {
        parts.push(format!("input={}", list(&s.input)));
    }
    if !s.output.is_empty() {
        parts.push(format!("output={}", list(&s.output)));
    }
    if parts.is_empty() {
        "ground".to_string()
    } else {
        parts.join(" ")
    }
}

fn list(vs: &[BigUint]) -> String {
    let parts: Vec<String> = vs.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn pretty_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn assemble(file: &Path, as_json: bool) -> Outcome {
    let p = load_program(file)?;
    if as_json {
        let symbols: Map<String, Value> = p.symbols.iter().map(|(n, a)| (n.clone(), json!(a))).collect();
        let pool: Vec<Value> = p.pool.iter().map(|(v, a)| json!({"value": big(v), "address": a})).collect();
        let instructions: Vec<Value> = p.instructions.iter().map(|i| json!(i.to_string())).collect();
        return Ok(pretty_json(&json!({
            "instructions": instructions,
            "symbols": symbols,
            "pool": pool,
        })));
    }
    let mut out = p.numeric_listing();
    for (v, a) in &p.pool {
        writeln!(out, "; pool #{v} at {a}").unwrap();
    }
    Ok(out)
}

fn execute(p: &Program, run: &RunArgs) -> Result<RunResult, Failure> {
    Ok(match run.mode {
        RunMode::Interp => interpret(p, &run.input, run.step_limit)?,
        RunMode::Algebraic => run_algebraic(p, &run.input, run.fuel)?,
    })
}

fn report_run(r: &RunResult, run: &RunArgs) -> String {
    if run.json {
        let mut v = json!({
            "mode": match run.mode { RunMode::Interp => "interp", RunMode::Algebraic => "algebraic" },
            "outputs": Value::Array(r.outputs.iter().map(|o| bigs(o)).collect()),
            "halted": r.halted,
            "steps": r.steps_executed,
            "state": superposition_json(&r.final_state),
        });
        if run.trace {
            v["trace"] = json!(r.trace);
        }
        return pretty_json(&v);
    }
    let mut out = String::new();
    if let [only] = r.outputs.as_slice() {
        writeln!(out, "output: {}", list(only)).unwrap();
    } else {
        for (i, o) in r.outputs.iter().enumerate() {
            writeln!(out, "output[{i}]: {}", list(o)).unwrap();
        }
    }
    writeln!(out, "halted: {}", r.halted.iter().all(|h| *h)).unwrap();
    writeln!(out, "steps: {}", r.steps_executed).unwrap();
    if run.trace {
        if let Some(t) = &r.trace {
            let pcs: Vec<String> = t.iter().map(ToString::to_string).collect();
            writeln!(out, "trace: {}", pcs.join(" ")).unwrap();
        }
    }
    writeln!(out, "state:\n{}", serialize(&r.final_state)).unwrap();
    out
}

fn compile(file: &Path, form: Form, fuel: u64, pretty: bool, as_json: bool) -> Outcome {
    let p = load_program(file)?;
    let render = |e: &crate::algebra::OperatorExpr| if pretty { e.pretty() } else { e.to_string() };
    let (entry, defs) = match form {
        Form::Sequential => (compile_sequential(&p)?, Vec::new()),
        Form::Guarded => {
            let c = compile_guarded(&p, fuel);
            let defs: Vec<(String, String)> = c.definitions.iter().map(|(n, e)| (n.to_string(), render(e))).collect();
            (c.entry, defs)
        }
    };
    if as_json {
        let d: Map<String, Value> = defs.into_iter().map(|(n, e)| (n, json!(e))).collect();
        return Ok(pretty_json(&json!({"entry": render(&entry), "definitions": d})));
    }
    let mut out = String::new();
    for (n, e) in defs {
        writeln!(out, "{n} = {e}").unwrap();
    }
    writeln!(out, "entry = {}", render(&entry)).unwrap();
    Ok(out)
}

fn load_grammar(file: &Path) -> Result<crate::grammar::Grammar, Failure> {
    parse_grammar(&read(file)?).map_err(|e| parse_failure(file, &e))
}

fn derive_mode(k: DeriveKind) -> DeriveMode {
    match k {
        DeriveKind::Step => DeriveMode::Step,
        DeriveKind::Pass => DeriveMode::Pass,
    }
}

fn distribution_text(d: &BTreeMap<String, f64>) -> String {
    let mut out = String::new();
    for (s, p) in d {
        let shown = if s.is_empty() { "ε" } else { s };
        writeln!(out, "{shown}\t{}", short(*p)).unwrap();
    }
    out
}

fn grammar(cmd: GrammarCommand) -> Outcome {
    match cmd {
        GrammarCommand::Derive {
            file,
            from,
            steps,
            mode,
            positions,
            unordered,
            json: as_json,
        } => {
            let g = load_grammar(&file)?;
            let from = from.unwrap_or_else(|| g.render(&g.start));
            let mut d = derive_distribution(&g, &from, steps, derive_mode(mode), positions.as_deref())?;
            if unordered {
                d = aggregate_unordered(&g, &d);
            }
            if as_json {
                return Ok(pretty_json(&json!({"from": from, "steps": steps, "distribution": d})));
            }
            Ok(distribution_text(&d))
        }
        GrammarCommand::Prob {
            file,
            from,
            to,
            steps,
            max_steps,
            mode,
            positions,
            json: as_json,
        } => {
            let g = load_grammar(&file)?;
            let from = from.unwrap_or_else(|| g.render(&g.start));
            let (relative, absolute) = match mode {
                DeriveKind::Step => {
                    let horizon = match (steps, max_steps) {
                        (_, Some(n)) => Horizon::AtMost(n),
                        (Some(n), None) => Horizon::Exactly(n),
                        (None, None) => Horizon::Exactly(1),
                    };
                    let t = transition_probability(&g, &from, &to, horizon, positions.as_deref());
                    (t.relative, t.absolute)
                }
                DeriveKind::Pass => {
                    if max_steps.is_some() || positions.is_some() {
                        return Err(Failure::usage("pass mode takes --steps only"));
                    }
                    let d = derive_distribution(&g, &from, steps.unwrap_or(1), DeriveMode::Pass, None)?;
                    let p = d.get(&g.render(&g.split(&to))).copied().unwrap_or(0.0);
                    (p, p)
                }
            };
            if as_json {
                return Ok(pretty_json(&json!({
                    "from": from, "to": to, "relative": relative, "absolute": absolute,
                })));
            }
            Ok(format!("absolute: {}\nrelative: {}\n", short(absolute), short(relative)))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn evolve_cmd(
    kind: HamiltonianKind,
    modes: u64,
    state: Option<PathBuf>,
    t: f64,
    order: usize,
    oracle: bool,
    as_json: bool,
) -> Outcome {
    if !t.is_finite() {
        return Err(Failure::usage("time must be finite"));
    }
    let h = match kind {
        HamiltonianKind::Hop if modes >= 2 => build_hop_hamiltonian(modes),
        HamiltonianKind::Adder if modes >= 3 => build_adder_hamiltonian(modes),
        HamiltonianKind::Hop => return Err(Failure::usage("hop Hamiltonian needs --modes 2 or more")),
        HamiltonianKind::Adder => return Err(Failure::usage("adder Hamiltonian needs --modes 3 or more")),
    };
    let s0 = match state {
        Some(p) => load_state(&p)?,
        None => Superposition::basis(single_particle(0)),
    };
    let out = evolve(&h, &s0, t, order)?;
    let diff = if oracle {
        Some(dense_oracle_evolve(&h, &s0, t, order)?.max_abs_difference(&out))
    } else {
        None
    };
    let total = out.norm_squared();
    let rows: Vec<(BasisState, f64, f64)> = out
        .terms()
        .iter()
        .map(|(a, s)| (s.clone(), a.norm_sqr(), a.norm_sqr() / total))
        .collect();
    if as_json {
        let table: Vec<Value> = rows
            .iter()
            .map(|(s, raw, p)| json!({"state": state_json(s), "raw": raw, "probability": p}))
            .collect();
        let mut v = json!({"state": superposition_json(&out), "probabilities": table});
        if let Some(d) = diff {
            v["oracle_max_difference"] = json!(d);
        }
        return Ok(pretty_json(&v));
    }
    let mut text = serialize(&out);
    text.push_str("\n\nstate\t|amp|^2\tprobability\n");
    for (s, raw, p) in rows {
        writeln!(text, "{}\t{}\t{}", brief(&s), short(raw), short(p)).unwrap();
    }
    if let Some(d) = diff {
        writeln!(text, "oracle max difference: {}", short(d)).unwrap();
    }
    Ok(text)
}

fn counts_report(counts: &BTreeMap<BasisState, u64>) -> (String, Value) {
    let mut text = String::new();
    let mut rows = Vec::new();
    for (s, n) in counts {
        writeln!(text, "{}\t{n}", brief(s)).unwrap();
        rows.push(json!({"state": state_json(s), "count": n}));
    }
    (text, Value::Array(rows))
}

#[allow(clippy::too_many_arguments)]
fn superpose(
    files: Vec<PathBuf>,
    amps: Vec<f64>,
    input: Vec<BigUint>,
    fuel: u64,
    samples: Option<u64>,
    seed: u64,
    as_json: bool,
) -> Outcome {
    let amps = if amps.is_empty() {
        vec![1.0 / (files.len() as f64).sqrt(); files.len()]
    } else if amps.len() == files.len() {
        amps
    } else {
        return Err(Failure::usage(format!(
            "{} amplitudes given for {} programs",
            amps.len(),
            files.len()
        )));
    };
    let mut programs = Vec::new();
    for (a, f) in amps.iter().zip(&files) {
        programs.push((Amplitude::new(*a, 0.0), load_program(f)?));
    }
    let r = run_superposed(&programs, &input, fuel)?;
    let probs = if r.final_state.is_empty() {
        BTreeMap::new()
    } else {
        r.final_state.probabilities()?
    };
    let counts = match samples {
        Some(n) => Some(r.final_state.sample(n, seed)?),
        None => None,
    };
    if as_json {
        let table: Vec<Value> = probs
            .iter()
            .map(|(s, p)| json!({"state": state_json(s), "probability": p}))
            .collect();
        let mut v = json!({"state": superposition_json(&r.final_state), "probabilities": table});
        if let Some(c) = &counts {
            v["samples"] = counts_report(c).1;
            v["seed"] = json!(seed);
        }
        return Ok(pretty_json(&v));
    }
    let mut text = serialize(&r.final_state);
    text.push_str("\n\nstate\tprobability\n");
    for (s, p) in &probs {
        writeln!(text, "{}\t{}", brief(s), short(*p)).unwrap();
    }
    if let Some(c) = &counts {
        writeln!(text, "\nsamples (seed {seed})").unwrap();
        text.push_str(&counts_report(c).0);
    }
    Ok(text)
}

fn bit_verify(modes: usize, as_json: bool) -> Outcome {
    if !(2..=8).contains(&modes) {
        return Err(Failure::usage("--modes must be between 2 and 8"));
    }
    let relations = check_fermi_relations(modes);
    let forms: Vec<_> = BitKind::ALL.iter().map(|&k| verify_bit_semantics(k, modes)).collect();
    let ok = relations.iter().all(|r| r.passed) && forms.iter().all(|f| f.passed);
    let text = if as_json {
        let rel: Vec<Value> = relations
            .iter()
            .map(|r| json!({"relation": r.relation, "passed": r.passed, "cases": r.cases}))
            .collect();
        let fs: Vec<Value> = forms
            .iter()
            .map(|f| {
                json!({
                    "instruction": f.kind.name(),
                    "passed": f.passed,
                    "cases": f.cases,
                    "negative_signs": f.negative_signs,
                    "failures": f.failures,
                })
            })
            .collect();
        pretty_json(&json!({"modes": modes, "passed": ok, "relations": rel, "instructions": fs}))
    } else {
        let mut out = String::new();
        let mark = |b: bool| if b { "PASS" } else { "FAIL" };
        for r in &relations {
            writeln!(out, "{} {} ({} cases)", mark(r.passed), r.relation, r.cases).unwrap();
        }
        for f in &forms {
            writeln!(
                out,
                "{} {} ({} cases, {} with sign -1)",
                mark(f.passed),
                f.kind.name(),
                f.cases,
                f.negative_signs
            )
            .unwrap();
            for line in &f.failures {
                writeln!(out, "  {line}").unwrap();
            }
        }
        out
    };
    if ok {
        Ok(text)
    } else {
        Err(Failure::runtime(text))
    }
}

fn load_c(file: &Path, window: u64) -> Result<Program, Failure> {
    let text = read(file)?;
    let qcc_failure = |e: QccError| match e {
        QccError::Parse(p) => parse_failure(file, &p),
        other => Failure {
            code: EXIT_PARSE,
            message: format!("{}: {other}", file.display()),
        },
    };
    let ast = parse_c(&text).map_err(qcc_failure)?;
    lower_to_qasm_with(&ast, LowerOptions { deref_window: window }).map_err(qcc_failure)
}

fn qc(cmd: QcCommand) -> Outcome {
    match cmd {
        QcCommand::Compile {
            file,
            emit,
            window,
            fuel,
        } => {
            let p = load_c(&file, window)?;
            Ok(match emit {
                Emit::Qasm => p.numeric_listing(),
                Emit::Opexpr => {
                    let c = compile_guarded(&p, fuel);
                    let mut out = String::new();
                    for (n, e) in c.definitions.iter() {
                        writeln!(out, "{n} = {}", e.pretty()).unwrap();
                    }
                    writeln!(out, "entry = {}", c.entry.pretty()).unwrap();
                    out
                }
            })
        }
        QcCommand::Run { file, window, run } => {
            let p = load_c(&file, window)?;
            Ok(report_run(&execute(&p, &run)?, &run))
        }
    }
}

fn sample(path: &Path, count: u64, seed: u64, as_json: bool) -> Outcome {
    let s = load_state(path)?;
    let counts = s.sample(count, seed)?;
    let (text, rows) = counts_report(&counts);
    if as_json {
        return Ok(pretty_json(&json!({"count": count, "seed": seed, "samples": rows})));
    }
    Ok(text)
}

fn run_command(cmd: Command) -> Outcome {
    match cmd {
        Command::Assemble { file, json } => assemble(&file, json),
        Command::Run { file, run } => {
            let p = load_program(&file)?;
            Ok(report_run(&execute(&p, &run)?, &run))
        }
        Command::Compile {
            file,
            form,
            fuel,
            pretty,
            json,
        } => compile(&file, form, fuel, pretty, json),
        Command::Grammar { command } => grammar(command),
        Command::Evolve {
            hamiltonian,
            modes,
            state,
            t,
            order,
            oracle,
            json,
        } => evolve_cmd(hamiltonian, modes, state, t, order, oracle, json),
        Command::Superpose {
            files,
            amps,
            input,
            fuel,
            samples,
            seed,
            json,
        } => superpose(files, amps, input, fuel, samples, seed, json),
        Command::Bit {
            command: BitCommand::Verify { modes, json },
        } => bit_verify(modes, json),
        Command::Qc { command } => qc(command),
        Command::Sample {
            state,
            count,
            seed,
            json,
        } => sample(&state, count, seed, json),
    }
}

/// Runs one command line (`argv[0]` is the program name) and returns the
/// exit code.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match run_command(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message.trim_end());
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("qlang").chain(args.iter().copied());
        let code = dispatch(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&[]).0, EXIT_USAGE);
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["run", "/nonexistent/file.qasm"]).0, EXIT_USAGE);
        assert_eq!(call(&["evolve", "--hamiltonian", "hop", "--modes", "1"]).0, EXIT_USAGE);
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("grammar"));
    }

    #[test]
    fn bit_verify_passes() {
        let (code, out, _) = call(&["bit", "verify", "--modes", "3"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.lines().all(|l| l.starts_with("PASS")));
    }

    #[test]
    fn evolve_default_state() {
        let (code, out, err) = call(&["evolve", "--hamiltonian", "hop", "--modes", "4", "--order", "2", "--oracle", "--json"]);
        assert_eq!(code, EXIT_OK, "{err}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["state"].as_array().unwrap().len(), 3);
        assert!(v["oracle_max_difference"].as_f64().unwrap() < 1e-12);
    }

    #[test]
    fn evolve_truncation_is_runtime_error() {
        let (code, _, err) = call(&["evolve", "--hamiltonian", "hop", "--modes", "3", "--order", "5"]);
        assert_eq!(code, EXIT_RUNTIME);
        assert!(err.contains("truncation"), "{err}");
    }
}
