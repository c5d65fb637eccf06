use core::fmt;

use super::{BinOp, Expr};

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Lit(v) if v.is_sign_negative() => 3,
        Expr::Binary(BinOp::Pow, ..) => 4,
        _ => 5,
    }
}

fn write(e: &Expr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let paren = prec(e) < min;
    if paren {
        f.write_str("(")?;
    }
    match e {
        Expr::Lit(v) => write!(f, "{v}")?,
        Expr::Ident(name) => f.write_str(name)?,
        Expr::Neg(a) => {
            f.write_str("-")?;
            write(a, 3, f)?;
        }
        Expr::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write(a, 0, f)?;
            f.write_str(")")?;
        }
        Expr::Binary(op, a, b) => {
            let (sym, lmin, rmin) = match op {
                BinOp::Add => ("+", 1, 2),
                BinOp::Sub => ("-", 1, 2),
                BinOp::Mul => ("*", 2, 3),
                BinOp::Div => ("/", 2, 3),
                BinOp::Pow => ("^", 5, 3),
            };
            write(a, lmin, f)?;
            f.write_str(sym)?;
            write(b, rmin, f)?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

/// Prints with the fewest parentheses that parse back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write(self, 0, f)
    }
}
