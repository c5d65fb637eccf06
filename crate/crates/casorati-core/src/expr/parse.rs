//! Recursive-descent parser.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};

use super::{BinOp, Expr, Func};
use crate::error::{Error, Result};

pub fn parse(source: &str) -> Result<Expr> {
    let mut p = Parser { src: source.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.unary()?;
            Ok(Expr::binary(BinOp::Pow, base, exp))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                let name = self.ident();
                if self.peek() == Some(b'(') {
                    let func = Func::from_name(&name).ok_or(Error::UnknownFunction {
                        name: name.clone(),
                        offset: start,
                    })?;
                    self.pos += 1;
                    let arg = self.expr()?;
                    if !self.eat(b')') {
                        return Err(self.error("expected `)`"));
                    }
                    Ok(Expr::Call(func, Box::new(arg)))
                } else {
                    Ok(Expr::Ident(name))
                }
            }
            Some(c) => Err(self.error(&format!("unexpected character `{}`", c as char))),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        if self.pos < self.src.len() && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
                return Err(self.error("malformed exponent"));
            }
        }
        // A letter straight after a number would be implicit multiplication.
        if self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphabetic() || self.src[self.pos] == b'_')
        {
            return Err(self.error("implicit multiplication is not allowed"));
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let v: f64 = text.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: "malformed number".into(),
        })?;
        if !v.is_finite() {
            return Err(Error::Syntax {
                offset: start,
                message: "number out of range".into(),
            });
        }
        Ok(Expr::Lit(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offset(src: &str) -> usize {
        match parse(src) {
            Err(Error::Syntax { offset, .. }) => offset,
            other => panic!("{src}: {other:?}"),
        }
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(parse(" x6 ^ 2 ").unwrap(), parse("x6^2").unwrap());
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(offset("2x"), 1);
        assert_eq!(offset("1 +"), 3);
        assert_eq!(offset("(a"), 2);
        assert_eq!(offset("a $ b"), 2);
        assert_eq!(offset("1e"), 1);
        assert_eq!(offset("a b"), 2);
    }

    #[test]
    fn unknown_function() {
        assert!(matches!(
            parse("1 + tan(x)"),
            Err(Error::UnknownFunction { offset: 4, .. })
        ));
    }

    #[test]
    fn unknown_identifier_is_deferred() {
        assert!(parse("zeta + 1").is_ok());
    }

    #[test]
    fn numbers() {
        assert_eq!(parse(".5").unwrap(), Expr::Lit(0.5));
        assert_eq!(parse("2.5E+2").unwrap(), Expr::Lit(250.0));
        assert!(parse("1e999").is_err());
    }
}
