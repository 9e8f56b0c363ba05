//! S-expression rendering of operator trees.
//!
//! `Display` gives a single line; [`OperatorExpr::pretty`] breaks long nodes
//! over indented lines.

use std::fmt;

use super::{DiagonalForm, ExponentExpr, Location, OperatorExpr};
use crate::fock::Amplitude;
use crate::isa::Operand;

const LINE_WIDTH: usize = 88;

struct Sexpr<'a>(&'a Location);

impl fmt::Display for Sexpr<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Location::Register => f.write_str("Register"),
            Location::ProgramCounter => f.write_str("ProgramCounter"),
            Location::Fuel => f.write_str("Fuel"),
            Location::In => f.write_str("In"),
            Location::Out => f.write_str("Out"),
            Location::Mem(a) => write!(f, "(Mem {a})"),
        }
    }
}

fn amplitude(c: &Amplitude) -> String {
    format!("({} {})", crate::fock::text::short(c.re), crate::fock::text::short(c.im))
}

impl fmt::Display for ExponentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentExpr::Const(c) => write!(f, "{c}"),
            ExponentExpr::Number(l) => write!(f, "(NumberOp {})", Sexpr(l)),
            ExponentExpr::Add(a, b) => write!(f, "(Add {a} {b})"),
            ExponentExpr::Sub(a, b) => write!(f, "(Sub {a} {b})"),
            ExponentExpr::Mul(a, b) => write!(f, "(Mul {a} {b})"),
            ExponentExpr::Theta(a) => write!(f, "(Theta {a})"),
            ExponentExpr::ThetaTheta(a) => write!(f, "(ThetaTheta {a})"),
        }
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagonalForm::Sqrt => "Sqrt",
            DiagonalForm::InvSqrt => "InvSqrt",
            DiagonalForm::SqrtFactorial => "SqrtFactorial",
            DiagonalForm::InvSqrtFactorial => "InvSqrtFactorial",
        })
    }
}

impl OperatorExpr {
    /// Head and children for composite nodes; `None` for leaves.
    fn parts(&self) -> Option<(String, Vec<&OperatorExpr>, Option<String>)> {
        match self {
            OperatorExpr::ScalarMul(c, e) => Some((format!("ScalarMul {}", amplitude(c)), vec![e], None)),
            OperatorExpr::Product(v) => Some(("Product".into(), v.iter().collect(), None)),
            OperatorExpr::Sum(v) => Some(("Sum".into(), v.iter().collect(), None)),
            OperatorExpr::GuardedPower { base, exponent } => {
                Some(("GuardedPower".into(), vec![base], Some(exponent.to_string())))
            }
            _ => None,
        }
    }

    fn write_pretty(&self, out: &mut String, indent: usize) {
        let flat = self.to_string();
        let pad = " ".repeat(indent);
        match self.parts() {
            Some((head, children, tail)) if indent + flat.len() > LINE_WIDTH => {
                out.push_str(&pad);
                out.push('(');
                out.push_str(&head);
                for c in children {
                    out.push('\n');
                    c.write_pretty(out, indent + 2);
                }
                if let Some(t) = tail {
                    out.push('\n');
                    out.push_str(&pad);
                    out.push_str("  ");
                    out.push_str(&t);
                }
                out.push(')');
            }
            _ => {
                out.push_str(&pad);
                out.push_str(&flat);
            }
        }
    }

    /// Multi-line S-expression, one child per line once a node is too wide.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        self.write_pretty(&mut out, 0);
        out
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorExpr::Identity => f.write_str("Identity"),
            OperatorExpr::Raise(l) => write!(f, "(Raise {})", Sexpr(l)),
            OperatorExpr::Lower(l) => write!(f, "(Lower {})", Sexpr(l)),
            OperatorExpr::NumberOp(l) => write!(f, "(NumberOp {})", Sexpr(l)),
            OperatorExpr::Clear(l) => write!(f, "(Clear {})", Sexpr(l)),
            OperatorExpr::Copy { dst, src } => write!(f, "(Copy {} {})", Sexpr(dst), Sexpr(src)),
            OperatorExpr::Diagonal { form, arg } => write!(f, "(Diagonal {form} {arg})"),
            OperatorExpr::Instruction(i) => {
                write!(f, "(Instruction {}", i.opcode)?;
                match &i.operand {
                    Operand::None => {}
                    Operand::Address(a) => write!(f, " {}", Sexpr(&Location::Mem(*a)))?,
                    Operand::Immediate(k) => write!(f, " #{k}")?,
                    Operand::ShiftCount(k) => write!(f, " {k}")?,
                }
                f.write_str(")")
            }
            OperatorExpr::RecursiveRef(label) => write!(f, "(RecursiveRef {label})"),
            OperatorExpr::Bra => f.write_str("Bra"),
            composite => {
                let (head, children, tail) = composite.parts().expect("composite node");
                write!(f, "({head}")?;
                for c in children {
                    write!(f, " {c}")?;
                }
                if let Some(t) = tail {
                    write!(f, " {t}")?;
                }
                f.write_str(")")
            }
        }
    }
}
