//! Lowering to assembly.
//!
//! Memory layout: variables from address 0 in first-use order, then a cell
//! that is never written (so it always reads 0), then expression temporaries,
//! then one cell per jump target holding that target's instruction index.
//! When jumps are present a prologue fills the jump cells.
//!
//! `*p` has no direct instruction. It compiles to a chain that tests
//! `p, p−1, p−2, …` against zero and branches to a case per variable address
//! in the deref window. A pointer outside the window jumps through the zero
//! cell and stops the run with `PcOutOfRange(0)`.

use std::collections::HashMap;

use num_bigint::BigUint;

use super::{BinOp, CProgram, Expr, LValue, QccError, Stmt};
use crate::isa::{Instruction, Opcode, Operand};
use crate::qasm::Program;

pub const DEFAULT_DEREF_WINDOW: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LowerOptions {
    /// Pointers may target variables with addresses below this bound.
    pub deref_window: u64,
}

impl Default for LowerOptions {
    fn default() -> Self {
        LowerOptions {
            deref_window: DEFAULT_DEREF_WINDOW,
        }
    }
}

/// Variable name to address, in first-use order from 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    entries: Vec<(String, u64)>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn of(program: &CProgram) -> Self {
        let mut t = SymbolTable::new();
        for s in &program.statements {
            match s {
                Stmt::Assign { target, value } => {
                    match target {
                        LValue::Var(v) => {
                            t.intern(v);
                        }
                        LValue::Deref(p) => t.intern_expr(p),
                    }
                    t.intern_expr(value);
                }
                Stmt::IfZeroGoto(e, _) | Stmt::Output(e) => t.intern_expr(e),
                Stmt::Input(v) => {
                    t.intern(v);
                }
                Stmt::Goto(_) | Stmt::Label(_) | Stmt::Halt => {}
            }
        }
        t
    }

    /// Address of `name`, allocating the next free one if it is new.
    pub fn intern(&mut self, name: &str) -> u64 {
        if let Some(a) = self.get(name) {
            return a;
        }
        let a = self.entries.len() as u64;
        self.entries.push((name.to_string(), a));
        a
    }

    fn intern_expr(&mut self, e: &Expr) {
        match e {
            Expr::Lit(_) => {}
            Expr::Var(v) | Expr::AddressOf(v) => {
                self.intern(v);
            }
            Expr::Deref(e) | Expr::Not(e) | Expr::Shift(e, _) => self.intern_expr(e),
            Expr::Binary(_, a, b) => {
                self.intern_expr(a);
                self.intern_expr(b);
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<u64> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, a)| *a)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.entries.iter().map(|(n, a)| (n.as_str(), *a))
    }
}

/// `&sym`.
pub fn address_of(sym: &str, table: &SymbolTable) -> Result<u64, QccError> {
    table.get(sym).ok_or_else(|| QccError::UnknownVariable(sym.to_string()))
}

enum Item {
    Op(Instruction),
    Jump(Opcode, usize),
    Mark(usize),
}

struct Emitter<'a> {
    table: &'a SymbolTable,
    items: Vec<Item>,
    zero_cell: u64,
    depth: u64,
    max_depth: u64,
    label_names: Vec<String>,
    user_labels: HashMap<String, usize>,
    window: u64,
}

impl Emitter<'_> {
    fn op(&mut self, i: Instruction) {
        self.items.push(Item::Op(i));
    }

    fn var(&self, name: &str) -> u64 {
        self.table.get(name).expect("symbol table covers every variable")
    }

    fn fresh_label(&mut self, name: String) -> usize {
        self.label_names.push(name);
        self.label_names.len() - 1
    }

    fn temp(&mut self) -> u64 {
        let t = self.zero_cell + 1 + self.depth;
        self.depth += 1;
        self.max_depth = self.max_depth.max(self.depth);
        t
    }

    fn release(&mut self) {
        self.depth -= 1;
    }

    /// Leaves the value of `e` in the register.
    fn eval(&mut self, e: &Expr) -> Result<(), QccError> {
        match e {
            Expr::Lit(k) => self.op(Instruction::imm(Opcode::Load, k.clone())),
            Expr::Var(v) => self.op(Instruction::addr(Opcode::Load, self.var(v))),
            Expr::AddressOf(v) => self.op(Instruction::imm(Opcode::Load, self.var(v))),
            Expr::Not(inner) => {
                self.eval(inner)?;
                self.op(Instruction::bare(Opcode::Not));
            }
            Expr::Shift(inner, k) => {
                self.eval(inner)?;
                self.op(Instruction::shift(*k));
            }
            Expr::Deref(p) => {
                self.eval(p)?;
                self.dispatch(|k| vec![Instruction::addr(Opcode::Load, k)]);
            }
            Expr::Binary(op, a, b) => {
                let opcode = match op {
                    BinOp::Add => Opcode::Add,
                    BinOp::Sub => Opcode::Subtract,
                    BinOp::Mul => Opcode::Multiply,
                    BinOp::Div => Opcode::Divide,
                    BinOp::And => Opcode::And,
                    BinOp::Or => Opcode::Or,
                };
                match &**b {
                    Expr::Var(v) => {
                        self.eval(a)?;
                        self.op(Instruction::addr(opcode, self.var(v)));
                    }
                    Expr::Lit(k) if opcode.accepts_immediate() => {
                        self.eval(a)?;
                        self.op(Instruction::imm(opcode, k.clone()));
                    }
                    _ => {
                        self.eval(b)?;
                        let t = self.temp();
                        self.op(Instruction::addr(Opcode::Store, t));
                        self.eval(a)?;
                        self.release();
                        self.op(Instruction::addr(opcode, t));
                    }
                }
            }
        }
        Ok(())
    }

    /// Branches on the pointer in the register. `case(k)` gives the
    /// instructions run when the pointer equals variable address `k`.
    fn dispatch(&mut self, case: impl Fn(u64) -> Vec<Instruction>) {
        let n = self.window.min(self.table.len() as u64);
        let tag = self.label_names.len();
        let cases: Vec<usize> = (0..n).map(|k| self.fresh_label(format!("__d{tag}_{k}"))).collect();
        let done = self.fresh_label(format!("__d{tag}_end"));
        for (k, &c) in cases.iter().enumerate() {
            if k > 0 {
                self.op(Instruction::imm(Opcode::Subtract, 1u32));
            }
            self.items.push(Item::Jump(Opcode::Tzr, c));
        }
        self.op(Instruction::addr(Opcode::Tra, self.zero_cell));
        for (k, &c) in cases.iter().enumerate() {
            self.items.push(Item::Mark(c));
            for i in case(k as u64) {
                self.op(i);
            }
            if k + 1 < cases.len() {
                self.items.push(Item::Jump(Opcode::Tra, done));
            }
        }
        self.items.push(Item::Mark(done));
    }

    fn statement(&mut self, s: &Stmt) -> Result<(), QccError> {
        match s {
            Stmt::Assign {
                target: LValue::Var(v),
                value,
            } => {
                self.eval(value)?;
                self.op(Instruction::addr(Opcode::Store, self.var(v)));
            }
            Stmt::Assign {
                target: LValue::Deref(p),
                value,
            } => {
                self.eval(value)?;
                let t = self.temp();
                self.op(Instruction::addr(Opcode::Store, t));
                self.eval(p)?;
                self.dispatch(|k| vec![Instruction::addr(Opcode::Load, t), Instruction::addr(Opcode::Store, k)]);
                self.release();
            }
            Stmt::Goto(l) => self.items.push(Item::Jump(Opcode::Tra, self.user_labels[l])),
            Stmt::IfZeroGoto(e, l) => {
                self.eval(e)?;
                self.items.push(Item::Jump(Opcode::Tzr, self.user_labels[l]));
            }
            Stmt::Label(l) => self.items.push(Item::Mark(self.user_labels[l])),
            Stmt::Input(v) => self.op(Instruction::addr(Opcode::Input, self.var(v))),
            Stmt::Output(Expr::Var(v)) => self.op(Instruction::addr(Opcode::Output, self.var(v))),
            Stmt::Output(e) => {
                self.eval(e)?;
                let t = self.temp();
                self.op(Instruction::addr(Opcode::Store, t));
                self.op(Instruction::addr(Opcode::Output, t));
                self.release();
            }
            Stmt::Halt => self.op(Instruction::bare(Opcode::Halt)),
        }
        Ok(())
    }
}

pub fn lower_to_qasm(program: &CProgram) -> Result<Program, QccError> {
    lower_to_qasm_with(program, LowerOptions::default())
}

/// Lowers a parsed program. A trailing `HALT` is added unless the program
/// already ends in `halt;`.
pub fn lower_to_qasm_with(program: &CProgram, options: LowerOptions) -> Result<Program, QccError> {
    let table = SymbolTable::of(program);
    let mut em = Emitter {
        table: &table,
        items: Vec::new(),
        zero_cell: table.len() as u64,
        depth: 0,
        max_depth: 0,
        label_names: Vec::new(),
        user_labels: HashMap::new(),
        window: options.deref_window,
    };
    for s in &program.statements {
        if let Stmt::Label(l) = s {
            let id = em.fresh_label(l.clone());
            em.user_labels.insert(l.clone(), id);
        }
    }
    for s in &program.statements {
        em.statement(s)?;
    }
    if program.statements.last() != Some(&Stmt::Halt) {
        em.op(Instruction::bare(Opcode::Halt));
    }

    let mut used: Vec<usize> = Vec::new();
    for item in &em.items {
        if let Item::Jump(_, l) = item {
            if !used.contains(l) {
                used.push(*l);
            }
        }
    }
    let prologue = 2 * used.len() as u64;
    let mut position = vec![0u64; em.label_names.len()];
    let mut index = prologue;
    for item in &em.items {
        match item {
            Item::Mark(l) => position[*l] = index + 1,
            _ => index += 1,
        }
    }
    let cells_base = em.zero_cell + 1 + em.max_depth;
    let cell = |l: usize| cells_base + used.iter().position(|&u| u == l).expect("used label") as u64;

    let mut instructions = Vec::with_capacity(index as usize);
    for &l in &used {
        instructions.push(Instruction::imm(Opcode::Load, BigUint::from(position[l])));
        instructions.push(Instruction::addr(Opcode::Store, cell(l)));
    }
    for item in &em.items {
        match item {
            Item::Op(i) => instructions.push(i.clone()),
            Item::Jump(op, l) => instructions.push(Instruction::new(*op, Operand::Address(cell(*l)))),
            Item::Mark(_) => {}
        }
    }

    let mut symbols: Vec<(String, u64)> = table.iter().map(|(n, a)| (n.to_string(), a)).collect();
    symbols.push(("__zero".to_string(), em.zero_cell));
    symbols.extend((0..em.max_depth).map(|d| (format!("__t{d}"), em.zero_cell + 1 + d)));
    for &l in &used {
        let name = &em.label_names[l];
        let name = if name.starts_with("__") { name.clone() } else { format!("__L{name}") };
        symbols.push((name, cell(l)));
    }
    Ok(Program::with_symbols(instructions, symbols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::RuntimeError;
    use crate::qasm::{interpret, run_algebraic, DEFAULT_STEP_LIMIT};
    use crate::qcc::parse_c;

    fn compile(src: &str) -> Program {
        lower_to_qasm(&parse_c(src).unwrap()).unwrap()
    }

    fn run(src: &str, input: &[u64]) -> Result<Vec<BigUint>, RuntimeError> {
        let input: Vec<BigUint> = input.iter().map(|&v| v.into()).collect();
        let r = interpret(&compile(src), &input, DEFAULT_STEP_LIMIT)?;
        Ok(r.outputs[0].clone())
    }

    fn nums(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn sum_lowers_to_three_instructions() {
        let p = compile("a = b + c;");
        assert_eq!(
            p.instructions,
            vec![
                Instruction::addr(Opcode::Load, 1),
                Instruction::addr(Opcode::Add, 2),
                Instruction::addr(Opcode::Store, 0),
                Instruction::bare(Opcode::Halt),
            ]
        );
        assert_eq!(p.listing().lines().take(3).collect::<Vec<_>>(), ["1 LOAD b", "2 ADD c", "3 STORE a"]);
    }

    #[test]
    fn immediate_subtract() {
        let p = compile("a = b - 1;");
        assert_eq!(p.instructions[1], Instruction::imm(Opcode::Subtract, 1u32));
    }

    #[test]
    fn end_to_end_add() {
        let src = "input(b); input(c); a = b + c; output(a); halt;";
        assert_eq!(run(src, &[2, 3]).unwrap(), nums(&[5]));
        let r = run_algebraic(&compile(src), &nums(&[2, 3]), 10).unwrap();
        assert_eq!(r.outputs, vec![nums(&[5])]);
    }

    #[test]
    fn nested_expressions() {
        let src = "input(x); input(y); output((x + 3) * (y - 1) / 2 | (x & y) << 4); output(~x >> 1);";
        for (x, y) in [(5u64, 9u64), (1, 1), (12, 7)] {
            let want = ((x + 3) * (y - 1) / 2) | ((x & y) << 4);
            let mask = (1u64 << (64 - x.leading_zeros())) - 1;
            assert_eq!(run(src, &[x, y]).unwrap(), nums(&[want, (x ^ mask) >> 1]), "x={x} y={y}");
        }
    }

    #[test]
    fn pointer_round_trip() {
        for v in [0u64, 1, 99, 12345] {
            let src = format!("x = 1; ptr = &x; *ptr = {v}; z = *ptr; output(x); output(z);");
            assert_eq!(run(&src, &[]).unwrap(), nums(&[v, v]));
            let r = run_algebraic(&compile(&src), &[], 10).unwrap();
            assert_eq!(r.outputs, vec![nums(&[v, v])]);
        }
    }

    #[test]
    fn pointer_arithmetic_selects_neighbour() {
        let src = "input(a); input(b); input(c); p = &a; output(*(p + 2)); *(p + 1) = 7; output(b);";
        assert_eq!(run(src, &[4, 5, 6]).unwrap(), nums(&[6, 7]));
    }

    #[test]
    fn wild_pointer_traps() {
        assert_eq!(
            run("p = 1000; output(*p);", &[]),
            Err(RuntimeError::PcOutOfRange(0u32.into()))
        );
        let narrow = LowerOptions { deref_window: 1 };
        let p = lower_to_qasm_with(&parse_c("x = 5; p = &x; y = &p; output(*y);").unwrap(), narrow).unwrap();
        assert!(matches!(interpret(&p, &[], 1000), Err(RuntimeError::PcOutOfRange(_))));
    }

    #[test]
    fn loops_and_labels() {
        let src = "input(n); s = 0;\ntop: if (n == 0) goto end;\ns = s + n; n = n - 1; goto top;\nend: output(s);";
        assert_eq!(run(src, &[10]).unwrap(), nums(&[55]));
        assert_eq!(run(src, &[0]).unwrap(), nums(&[0]));
        let r = run_algebraic(&compile(src), &nums(&[3]), 10).unwrap();
        assert_eq!(r.outputs, vec![nums(&[6])]);
    }

    #[test]
    fn errors_propagate() {
        assert_eq!(run("a = 1 - 2;", &[]), Err(RuntimeError::SubtractUnderflow {
            register: 1u32.into(),
            operand: 2u32.into(),
        }));
        assert_eq!(run("a = 1 / b;", &[]), Err(RuntimeError::DivideByZero));
        assert_eq!(run("input(a);", &[]), Err(RuntimeError::InputExhausted));
    }

    #[test]
    fn symbol_table_order() {
        let t = SymbolTable::of(&parse_c("ptr = &x; z = *ptr;").unwrap());
        assert_eq!(t.iter().collect::<Vec<_>>(), vec![("ptr", 0), ("x", 1), ("z", 2)]);
        assert_eq!(address_of("x", &t), Ok(1));
        assert_eq!(address_of("q", &t), Err(QccError::UnknownVariable("q".into())));
    }

    #[test]
    fn numeric_listing_reassembles() {
        let p = compile("x = 1; ptr = &x; *ptr = 42; output(x);");
        let again = crate::qasm::parse_program(&p.numeric_listing()).unwrap();
        assert_eq!(again.instructions, p.instructions);
        assert_eq!(interpret(&again, &[], 1000).unwrap().outputs, vec![nums(&[42])]);
    }
}
