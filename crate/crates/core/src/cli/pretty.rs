//! Printing that reparses to the same AST.

use std::fmt;

use super::ast::{BinOp, Expr, ProblemSpec};

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Binary(BinOp::Pow, ..) => 4,
        Expr::Number(_) | Expr::Ident(_) | Expr::Call(..) => 5,
    }
}

fn wrapped(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(s) | Expr::Ident(s) => write!(f, "{s}"),
            Expr::Call(name, arg) => write!(f, "{name}({arg})"),
            Expr::Neg(x) => {
                write!(f, "-")?;
                wrapped(f, x, precedence(x) < 3)
            }
            Expr::Binary(op, l, r) => {
                let p = precedence(self);
                match op {
                    BinOp::Pow => {
                        wrapped(f, l, precedence(l) < 5)?;
                        write!(f, "^")?;
                        wrapped(f, r, precedence(r) < 3)
                    }
                    BinOp::Add | BinOp::Sub => {
                        wrapped(f, l, precedence(l) < p)?;
                        write!(f, " {} ", op.symbol())?;
                        wrapped(f, r, precedence(r) <= p)
                    }
                    BinOp::Mul | BinOp::Div => {
                        wrapped(f, l, precedence(l) < p)?;
                        write!(f, "{}", op.symbol())?;
                        wrapped(f, r, precedence(r) <= p)
                    }
                }
            }
        }
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.vars.is_empty() {
            let names: Vec<&str> = self.vars.iter().map(|v| v.value.as_str()).collect();
            writeln!(f, "vars {};", names.join(" "))?;
        }
        if let Some(cone) = &self.cone {
            let gens: Vec<String> = cone
                .iter()
                .map(|g| format!("({})", g.value.iter().map(Expr::to_string).collect::<Vec<_>>().join(", ")))
                .collect();
            writeln!(f, "cone {};", gens.join(" "))?;
        }
        if !self.params.is_empty() {
            let binds: Vec<String> = self.params.iter().map(|(n, e)| format!("{} = {e}", n.value)).collect();
            writeln!(f, "param {};", binds.join(", "))?;
        }
        if let Some(num) = &self.num {
            writeln!(f, "num {};", num.value)?;
        }
        if !self.den.is_empty() {
            let factors: Vec<String> = self
                .den
                .iter()
                .map(|d| {
                    if d.value.power == 1 {
                        format!("({})", d.value.expr)
                    } else {
                        format!("({})^{}", d.value.expr, d.value.power)
                    }
                })
                .collect();
            writeln!(f, "den {};", factors.join(" "))?;
        }
        Ok(())
    }
}
