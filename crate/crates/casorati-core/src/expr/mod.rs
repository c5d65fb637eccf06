//! Arithmetic expressions used for metric entries, map components and
//! structure tensors.

mod bound;
mod parse;
mod print;

use alloc::boxed::Box;
use alloc::string::String;

pub use bound::Bound;
pub use parse::parse;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
        }
    }
}

/// Parsed syntax tree. Identifiers are resolved later by [`Expr::bind`].
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Lit(f64),
    Ident(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn lit(v: f64) -> Expr {
        Expr::Lit(v)
    }

    pub fn ident(name: &str) -> Expr {
        Expr::Ident(name.into())
    }

    pub fn binary(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    /// Resolves identifiers against `names`.
    pub fn bind(&self, names: &[String]) -> crate::Result<Bound> {
        Bound::new(self, names)
    }
}
