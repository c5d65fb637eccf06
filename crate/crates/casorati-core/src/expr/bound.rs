//! Expressions with identifiers resolved to coordinate slots.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;

use super::{BinOp, Expr, Func};
use crate::error::{Error, Result};
use crate::numkit::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Lit(f64),
    Var(usize),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// An expression ready for evaluation over a fixed coordinate list.
#[derive(Clone, Debug, PartialEq)]
pub struct Bound {
    root: Node,
}

fn lower(e: &Expr, names: &[String]) -> Result<Node> {
    Ok(match e {
        Expr::Lit(v) => Node::Lit(*v),
        Expr::Ident(name) => Node::Var(
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownIdentifier(name.clone()))?,
        ),
        Expr::Neg(a) => Node::Neg(Box::new(lower(a, names)?)),
        Expr::Binary(op, a, b) => {
            Node::Binary(*op, Box::new(lower(a, names)?), Box::new(lower(b, names)?))
        }
        Expr::Call(f, a) => Node::Call(*f, Box::new(lower(a, names)?)),
    })
}

impl Node {
    fn is_constant(&self) -> bool {
        match self {
            Node::Lit(_) => true,
            Node::Var(_) => false,
            Node::Neg(a) | Node::Call(_, a) => a.is_constant(),
            Node::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    fn uses(&self, var: usize) -> bool {
        match self {
            Node::Lit(_) => false,
            Node::Var(i) => *i == var,
            Node::Neg(a) | Node::Call(_, a) => a.uses(var),
            Node::Binary(_, a, b) => a.uses(var) || b.uses(var),
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Node::Lit(_) => None,
            Node::Var(i) => Some(*i),
            Node::Neg(a) | Node::Call(_, a) => a.max_var(),
            Node::Binary(_, a, b) => match (a.max_var(), b.max_var()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }

    fn eval<S: Scalar>(&self, vars: &[S]) -> Result<S> {
        Ok(match self {
            Node::Lit(v) => S::from_f64(*v),
            Node::Var(i) => vars[*i].clone(),
            Node::Neg(a) => -a.eval(vars)?,
            Node::Binary(op, a, b) => {
                if *op == BinOp::Pow {
                    return pow(a.eval(vars)?, b, vars);
                }
                let (x, y) = (a.eval(vars)?, b.eval(vars)?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y.value() == 0.0 {
                            return Err(Error::Domain("division by zero".into()));
                        }
                        x / y
                    }
                    BinOp::Pow => unreachable!(),
                }
            }
            Node::Call(f, a) => {
                let x = a.eval(vars)?;
                match f {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Ln | Func::Sqrt => {
                        if !(x.value() > 0.0) {
                            return Err(Error::Domain(format!(
                                "{} of non-positive value {}",
                                f.name(),
                                x.value()
                            )));
                        }
                        if *f == Func::Ln {
                            x.ln()
                        } else {
                            x.sqrt()
                        }
                    }
                }
            }
        })
    }

    fn d(&self, var: usize) -> Node {
        match self {
            Node::Lit(_) => lit(0.0),
            Node::Var(i) => lit(if *i == var { 1.0 } else { 0.0 }),
            Node::Neg(a) => neg(a.d(var)),
            Node::Binary(op, a, b) => {
                let (a, b) = (&**a, &**b);
                match op {
                    BinOp::Add => add(a.d(var), b.d(var)),
                    BinOp::Sub => sub(a.d(var), b.d(var)),
                    BinOp::Mul => add(mul(a.d(var), b.clone()), mul(a.clone(), b.d(var))),
                    BinOp::Div => sub(
                        div(a.d(var), b.clone()),
                        div(mul(a.clone(), b.d(var)), mul(b.clone(), b.clone())),
                    ),
                    BinOp::Pow => {
                        if !b.uses(var) && b.is_constant() {
                            let p = match b.eval::<f64>(&[]) {
                                Ok(p) => p,
                                // Evaluation reports the error later.
                                Err(_) => return self.clone(),
                            };
                            if p == 0.0 {
                                return lit(0.0);
                            }
                            let lowered = bin(BinOp::Pow, a.clone(), lit(p - 1.0));
                            mul(mul(lit(p), lowered), a.d(var))
                        } else {
                            // b^e (e' ln b + e b'/b)
                            let ln_b = Node::Call(Func::Ln, Box::new(a.clone()));
                            let inner = add(mul(b.d(var), ln_b), div(mul(b.clone(), a.d(var)), a.clone()));
                            mul(self.clone(), inner)
                        }
                    }
                }
            }
            Node::Call(f, a) => {
                let inner = &**a;
                let outer = match f {
                    Func::Sin => Node::Call(Func::Cos, Box::new(inner.clone())),
                    Func::Cos => neg(Node::Call(Func::Sin, Box::new(inner.clone()))),
                    Func::Exp => self.clone(),
                    Func::Ln => div(lit(1.0), inner.clone()),
                    Func::Sqrt => div(lit(0.5), self.clone()),
                };
                mul(outer, inner.d(var))
            }
        }
    }

    fn to_expr(&self, names: &[String]) -> Expr {
        match self {
            Node::Lit(v) if v.is_sign_negative() && *v != 0.0 => Expr::Neg(Box::new(Expr::Lit(-v))),
            Node::Lit(v) => Expr::Lit(*v),
            Node::Var(i) => Expr::Ident(names[*i].clone()),
            Node::Neg(a) => Expr::Neg(Box::new(a.to_expr(names))),
            Node::Binary(op, a, b) => Expr::binary(*op, a.to_expr(names), b.to_expr(names)),
            Node::Call(f, a) => Expr::Call(*f, Box::new(a.to_expr(names))),
        }
    }
}

fn pow<S: Scalar>(base: S, exp: &Node, vars: &[S]) -> Result<S> {
    if exp.is_constant() {
        let p: f64 = exp.eval(&[] as &[f64])?;
        if p == libm::trunc(p) && p.abs() <= i32::MAX as f64 {
            if base.value() == 0.0 && p < 0.0 {
                return Err(Error::Domain("zero raised to a negative power".into()));
            }
            return Ok(base.powi(p as i32));
        }
        if !(base.value() > 0.0) {
            return Err(Error::Domain("non-integer power of a non-positive base".into()));
        }
        return Ok(base.powf(p));
    }
    if !(base.value() > 0.0) {
        return Err(Error::Domain("variable exponent needs a positive base".into()));
    }
    let e = exp.eval(vars)?;
    Ok((e * base.ln()).exp())
}

fn lit(v: f64) -> Node {
    Node::Lit(v)
}

fn is_lit(n: &Node, v: f64) -> bool {
    matches!(n, Node::Lit(x) if *x == v)
}

fn bin(op: BinOp, a: Node, b: Node) -> Node {
    Node::Binary(op, Box::new(a), Box::new(b))
}

fn neg(a: Node) -> Node {
    match a {
        Node::Lit(v) => lit(-v),
        Node::Neg(inner) => *inner,
        other => Node::Neg(Box::new(other)),
    }
}

fn add(a: Node, b: Node) -> Node {
    if is_lit(&a, 0.0) {
        b
    } else if is_lit(&b, 0.0) {
        a
    } else {
        bin(BinOp::Add, a, b)
    }
}

fn sub(a: Node, b: Node) -> Node {
    if is_lit(&b, 0.0) {
        a
    } else if is_lit(&a, 0.0) {
        neg(b)
    } else {
        bin(BinOp::Sub, a, b)
    }
}

fn mul(a: Node, b: Node) -> Node {
    if is_lit(&a, 0.0) || is_lit(&b, 0.0) {
        lit(0.0)
    } else if is_lit(&a, 1.0) {
        b
    } else if is_lit(&b, 1.0) {
        a
    } else {
        bin(BinOp::Mul, a, b)
    }
}

fn div(a: Node, b: Node) -> Node {
    if is_lit(&a, 0.0) {
        lit(0.0)
    } else if is_lit(&b, 1.0) {
        a
    } else {
        bin(BinOp::Div, a, b)
    }
}

impl Bound {
    pub(super) fn new(e: &Expr, names: &[String]) -> Result<Bound> {
        Ok(Bound { root: lower(e, names)? })
    }

    pub fn constant(v: f64) -> Bound {
        Bound { root: Node::Lit(v) }
    }

    /// Evaluates with `vars[i]` bound to the i-th coordinate.
    pub fn eval<S: Scalar>(&self, vars: &[S]) -> Result<S> {
        if let Some(m) = self.root.max_var() {
            if m >= vars.len() {
                return Err(Error::Dimension(format!(
                    "expression uses slot {m} but only {} values were given",
                    vars.len()
                )));
            }
        }
        self.root.eval(vars)
    }

    /// Symbolic partial derivative with respect to slot `var`.
    pub fn derivative(&self, var: usize) -> Bound {
        Bound { root: self.root.d(var) }
    }

    pub fn is_constant(&self) -> bool {
        self.root.is_constant()
    }

    pub fn uses(&self, var: usize) -> bool {
        self.root.uses(var)
    }

    /// Converts back to a syntax tree using `names` for the slots.
    pub fn to_expr(&self, names: &[String]) -> Expr {
        self.root.to_expr(names)
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;
    use crate::numkit::Jet2;
    use alloc::string::ToString;
    use alloc::vec;
    use alloc::vec::Vec;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn bound(src: &str, vars: &[&str]) -> Bound {
        parse(src).unwrap().bind(&names(vars)).unwrap()
    }

    #[test]
    fn square_jet() {
        let j = bound("x6^2", &["x6"]).eval(&Jet2::seed(&[3.0])).unwrap();
        assert_eq!((j.value, j.d(0), j.dd(0, 0)), (9.0, 6.0, 2.0));
    }

    #[test]
    fn exp_jet() {
        let j = bound("exp(t)", &["t"]).eval(&Jet2::seed(&[0.0])).unwrap();
        assert_eq!((j.value, j.d(0), j.dd(0, 0)), (1.0, 1.0, 1.0));
    }

    #[test]
    fn radius_jet() {
        let j = bound("sqrt(x1^2+x2^2)", &["x1", "x2"])
            .eval(&Jet2::seed(&[3.0, 4.0]))
            .unwrap();
        assert!((j.value - 5.0).abs() < 1e-15);
        assert!((j.d(0) - 0.6).abs() < 1e-15 && (j.d(1) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn unknown_identifier_at_bind() {
        assert_eq!(
            parse("a+b").unwrap().bind(&names(&["a"])),
            Err(Error::UnknownIdentifier("b".into()))
        );
    }

    #[test]
    fn domain_errors() {
        let x = [0.0];
        assert!(matches!(bound("1/x", &["x"]).eval(&x), Err(Error::Domain(_))));
        assert!(matches!(bound("ln(x)", &["x"]).eval(&x), Err(Error::Domain(_))));
        assert!(matches!(bound("sqrt(x)", &["x"]).eval(&x), Err(Error::Domain(_))));
        assert!(matches!(bound("x^-1", &["x"]).eval(&x), Err(Error::Domain(_))));
        assert!(matches!(bound("(x-1)^0.5", &["x"]).eval(&x), Err(Error::Domain(_))));
        assert_eq!(bound("x^2", &["x"]).eval(&x).unwrap(), 0.0);
    }

    #[test]
    fn symbolic_derivatives() {
        let cases: [(&str, f64, f64); 7] = [
            ("x^3", 2.0, 12.0),
            ("sin(x)*cos(x)", 0.3, libm::cos(0.6)),
            ("exp(2*x)", 0.5, 2.0 * libm::exp(1.0)),
            ("ln(x)/x", 2.0, (1.0 - libm::log(2.0)) / 4.0),
            ("sqrt(x)", 4.0, 0.25),
            ("x^x", 2.0, 4.0 * (libm::log(2.0) + 1.0)),
            ("2^-x", 1.0, -0.5 * libm::log(2.0)),
        ];
        for (src, x, want) in cases {
            let d = bound(src, &["x"]).derivative(0).eval(&[x]).unwrap();
            assert!((d - want).abs() < 1e-13, "{src}: {d} vs {want}");
        }
    }

    #[test]
    fn derivative_matches_jet_hessian() {
        let b = bound("x*y^2 + sin(x*y)", &["x", "y"]);
        let p = [0.7, -1.3];
        let j = b.eval(&Jet2::seed(&p)).unwrap();
        for i in 0..2 {
            let dj = b.derivative(i).eval(&Jet2::seed(&p)).unwrap();
            assert!((dj.value - j.d(i)).abs() < 1e-13);
            for k in 0..2 {
                assert!((dj.d(k) - j.dd(i, k)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn to_expr_round_trip() {
        let n = names(&["x", "y"]);
        let b = bound("x*y^2 - 3", &["x", "y"]);
        let back = b.to_expr(&n).bind(&n).unwrap();
        assert_eq!(back.eval(&[2.0, 3.0]).unwrap(), b.eval(&[2.0, 3.0]).unwrap());
        let d = b.derivative(1).to_expr(&n).to_string();
        assert_eq!(parse(&d).unwrap().bind(&n).unwrap().eval(&[2.0, 3.0]).unwrap(), 12.0);
        let _ = vec![0];
    }
}
