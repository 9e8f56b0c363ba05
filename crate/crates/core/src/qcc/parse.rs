use std::collections::HashMap;

use num_bigint::BigUint;

use super::{BinOp, CProgram, Expr, LValue, QccError, Stmt};
use crate::error::ParseError;
use crate::isa::MAX_SHIFT;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(BigUint),
    Punct(&'static str),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const PUNCT: [&str; 15] = ["<<", ">>", "==", ";", ":", "=", "+", "-", "*", "/", "&", "|", "~", "(", ")"];

fn lex(text: &str) -> Result<(Vec<Token>, (usize, usize)), ParseError> {
    let mut out = Vec::new();
    let mut end = (1, 1);
    for (idx, full) in text.lines().enumerate() {
        let line = idx + 1;
        let code = full.split("//").next().unwrap_or("");
        let chars: Vec<char> = code.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                if word.starts_with("__") {
                    return Err(ParseError::new(line, col, format!("identifier `{word}` is reserved")));
                }
                out.push(Token { tok: Tok::Ident(word), line, col });
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Token {
                    tok: Tok::Num(digits.parse().expect("digits")),
                    line,
                    col,
                });
            } else {
                let rest: String = chars[i..].iter().take(2).collect();
                let Some(p) = PUNCT.iter().find(|p| rest.starts_with(**p)) else {
                    return Err(ParseError::new(line, col, format!("unexpected character `{c}`")));
                };
                out.push(Token { tok: Tok::Punct(p), line, col });
                i += p.len();
            }
        }
        end = (line, chars.len() + 1);
    }
    Ok((out, end))
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.col))
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::new(line, col, msg)
    }

    fn found(&self) -> String {
        match self.peek() {
            None => "end of input".to_string(),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Num(n)) => format!("`{n}`"),
            Some(Tok::Punct(p)) => format!("`{p}`"),
        }
    }

    fn eat(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Punct(q)) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<(), ParseError> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{p}`, found {}", self.found())))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !is_keyword(s) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(format!("expected identifier, found {}", self.found()))),
        }
    }

    fn keyword(&mut self, k: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        if let (Some(Tok::Ident(name)), Some(Tok::Punct(":"))) = (self.peek(), self.peek_at(1)) {
            if !is_keyword(name) {
                let name = name.clone();
                self.pos += 2;
                return Ok(Stmt::Label(name));
            }
        }
        let stmt = if self.keyword("goto") {
            Stmt::Goto(self.ident()?)
        } else if self.keyword("if") {
            self.expect("(")?;
            let e = self.expr()?;
            self.expect("==")?;
            match self.peek() {
                Some(Tok::Num(n)) if n == &BigUint::from(0u32) => self.pos += 1,
                _ => return Err(self.error("only `== 0` tests are supported")),
            }
            self.expect(")")?;
            if !self.keyword("goto") {
                return Err(self.error(format!("expected `goto`, found {}", self.found())));
            }
            Stmt::IfZeroGoto(e, self.ident()?)
        } else if self.keyword("input") {
            self.expect("(")?;
            let v = self.ident()?;
            self.expect(")")?;
            Stmt::Input(v)
        } else if self.keyword("output") {
            self.expect("(")?;
            let e = self.expr()?;
            self.expect(")")?;
            Stmt::Output(e)
        } else if self.keyword("halt") {
            Stmt::Halt
        } else if self.eat("*") {
            let p = self.unary()?;
            self.expect("=")?;
            Stmt::Assign {
                target: LValue::Deref(p),
                value: self.expr()?,
            }
        } else {
            let v = self.ident()?;
            self.expect("=")?;
            Stmt::Assign {
                target: LValue::Var(v),
                value: self.expr()?,
            }
        };
        self.expect(";")?;
        Ok(stmt)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.and()?;
        while self.eat("|") {
            lhs = Expr::binary(BinOp::Or, lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.shift_level()?;
        while self.eat("&") {
            lhs = Expr::binary(BinOp::And, lhs, self.shift_level()?);
        }
        Ok(lhs)
    }

    fn shift_level(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.additive()?;
        loop {
            let dir = if self.eat("<<") {
                1
            } else if self.eat(">>") {
                -1
            } else {
                return Ok(lhs);
            };
            let k = match self.peek() {
                Some(Tok::Num(n)) => i64::try_from(n.clone()).ok().filter(|k| *k <= MAX_SHIFT),
                _ => return Err(self.error("shift count must be a literal")),
            };
            let Some(k) = k else {
                return Err(self.error("shift count too large"));
            };
            self.pos += 1;
            lhs = Expr::Shift(Box::new(lhs), dir * k);
        }
    }

    fn additive(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = if self.eat("+") {
                BinOp::Add
            } else if self.eat("-") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.multiplicative()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn multiplicative(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat("*") {
                BinOp::Mul
            } else if self.eat("/") {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat("*") {
            return Ok(Expr::Deref(Box::new(self.unary()?)));
        }
        if self.eat("~") {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        if self.eat("&") {
            return Ok(Expr::AddressOf(self.ident()?));
        }
        if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(e);
        }
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Lit(n))
            }
            Some(Tok::Ident(_)) => Ok(Expr::Var(self.ident()?)),
            _ => Err(self.error(format!("expected expression, found {}", self.found()))),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "goto" | "if" | "input" | "output" | "halt")
}

/// Parses Quantum C source and checks that labels are unique and every
/// jump target exists.
pub fn parse_c(text: &str) -> Result<CProgram, QccError> {
    let (toks, end) = lex(text)?;
    let mut p = Parser { toks, pos: 0, end };
    let mut statements = Vec::new();
    let mut lines = Vec::new();
    while p.peek().is_some() {
        lines.push(p.here().0);
        statements.push(p.statement()?);
    }
    if statements.is_empty() {
        return Err(ParseError::new(1, 1, "program has no statements").into());
    }
    let mut labels: HashMap<&str, usize> = HashMap::new();
    for (s, &line) in statements.iter().zip(&lines) {
        if let Stmt::Label(l) = s {
            if labels.insert(l, line).is_some() {
                return Err(QccError::DuplicateLabel { label: l.clone(), line });
            }
        }
    }
    for (s, &line) in statements.iter().zip(&lines) {
        if let Stmt::Goto(l) | Stmt::IfZeroGoto(_, l) = s {
            if !labels.contains_key(l.as_str()) {
                return Err(QccError::UndefinedLabel { label: l.clone(), line });
            }
        }
    }
    Ok(CProgram { statements, lines })
}
