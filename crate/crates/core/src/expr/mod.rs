//! Scalar expression language for warping functions, fiber metric
//! components and graph functions.
//!
//! One grammar serves all three: warping functions are expressions in
//! `t`, metric entries and graphs are expressions in `x1..xm`. Evaluation
//! is generic over the numeric carrier, so a single user definition
//! drives both the jet engine and the plain-valued oracle.

mod parse;

pub use parse::{parse, parse_expr, ParseError};

use crate::carrier::{Carrier, Func};
use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Abstract syntax tree of a scalar expression.
///
/// Literals are always non-negative; negative quantities are `Neg` nodes.
/// This keeps printing unambiguous: the printer emits `-x` and the parser
/// reads it back as the identical tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal(f64),
    Var(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn literal(v: f64) -> Expr {
        if v < 0.0 {
            Expr::Neg(Box::new(Expr::Literal(-v)))
        } else {
            Expr::Literal(v)
        }
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    /// Exactly the variable names occurring in the expression.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Literal(_) => {}
            Expr::Var(name) => {
                out.insert(name.clone());
            }
            Expr::Neg(inner) => inner.collect_vars(out),
            Expr::Binary(_, lhs, rhs) => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
            Expr::Call(_, arg) => arg.collect_vars(out),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Binary(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        let parens = prec < min;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Expr::Literal(v) => write!(f, "{v}")?,
            Expr::Var(name) => write!(f, "{name}")?,
            Expr::Neg(inner) => {
                write!(f, "-")?;
                inner.fmt_prec(f, 3)?;
            }
            Expr::Binary(op, lhs, rhs) => {
                // The grammar is left-associative except for `^`, so a
                // right child at the operator's own precedence needs
                // parentheses to reparse into the identical tree.
                let (sym, lmin, rmin) = match op {
                    BinOp::Add => ("+", 1, 2),
                    BinOp::Sub => ("-", 1, 2),
                    BinOp::Mul => ("*", 2, 3),
                    BinOp::Div => ("/", 2, 3),
                    // Right-associative: parenthesize a power on the left.
                    BinOp::Pow => ("^", 5, 3),
                };
                lhs.fmt_prec(f, lmin)?;
                write!(f, " {sym} ")?;
                rhs.fmt_prec(f, rmin)?;
            }
            Expr::Call(func, arg) => {
                write!(f, "{}(", func.name())?;
                arg.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Evaluate over any carrier with the given variable bindings.
pub fn eval<C: Carrier>(expr: &Expr, env: &[(&str, C)], ctx: &C::Ctx) -> Result<C> {
    match expr {
        Expr::Literal(v) => Ok(C::constant(ctx, *v)),
        Expr::Var(name) => env
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| Error::UnboundVariable(name.clone())),
        Expr::Neg(inner) => Ok(eval(inner, env, ctx)?.neg()),
        Expr::Binary(op, lhs, rhs) => {
            let a = eval(lhs, env, ctx)?;
            let b = eval(rhs, env, ctx)?;
            Ok(match op {
                BinOp::Add => a.add(&b),
                BinOp::Sub => a.sub(&b),
                BinOp::Mul => a.mul(&b),
                BinOp::Div => a.div(&b)?,
                BinOp::Pow => a.pow(&b)?,
            })
        }
        Expr::Call(func, arg) => Ok(eval(arg, env, ctx)?.apply(*func)?),
    }
}

/// Plain-valued evaluation.
pub fn eval_f64(expr: &Expr, env: &[(&str, f64)]) -> Result<f64> {
    eval(expr, env, &())
}
