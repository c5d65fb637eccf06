//! Truncated Taylor scalars of order one and two.
//!
//! A jet with an empty gradient is a constant and broadcasts against jets of
//! any dimension. Two non-constant operands must share their dimension.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic shared by `f64` and the jet types, so that linear algebra and
/// expression evaluation are written once.
pub trait Scalar:
    Clone
    + core::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(c: f64) -> Self;
    fn value(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn powi(&self, n: i32) -> Self;
    /// `self^p` for a constant real exponent.
    fn powf(&self, p: f64) -> Self;

    fn scale(&self, c: f64) -> Self {
        self.clone() * Self::from_f64(c)
    }
}

pub(crate) fn powi_f64(x: f64, n: i32) -> f64 {
    let mut base = if n < 0 { 1.0 / x } else { x };
    let mut e = n.unsigned_abs();
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

impl Scalar for f64 {
    fn from_f64(c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        libm::sqrt(*self)
    }
    fn sin(&self) -> Self {
        libm::sin(*self)
    }
    fn cos(&self) -> Self {
        libm::cos(*self)
    }
    fn exp(&self) -> Self {
        libm::exp(*self)
    }
    fn ln(&self) -> Self {
        libm::log(*self)
    }
    fn powi(&self, n: i32) -> Self {
        powi_f64(*self, n)
    }
    fn powf(&self, p: f64) -> Self {
        libm::pow(*self, p)
    }
    fn scale(&self, c: f64) -> Self {
        self * c
    }
}

fn common_dim(a: usize, b: usize) -> usize {
    if a == 0 {
        b
    } else if b == 0 || a == b {
        a
    } else {
        panic!("jet dimension mismatch: {a} vs {b}")
    }
}

#[inline]
fn at(v: &[f64], i: usize) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v[i]
    }
}

/// Index of `(i, j)` in packed upper-triangular storage of an `n x n` matrix.
#[inline]
pub fn packed(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

/// First-order jet: value and gradient.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet1 {
    pub value: f64,
    pub grad: Vec<f64>,
}

impl Jet1 {
    pub fn constant(value: f64) -> Self {
        Jet1 { value, grad: Vec::new() }
    }

    /// The coordinate function `x_i` at `value` in `n` variables.
    pub fn variable(value: f64, i: usize, n: usize) -> Self {
        let mut grad = vec![0.0; n];
        grad[i] = 1.0;
        Jet1 { value, grad }
    }

    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    /// `∂/∂x_i`, zero for constants.
    pub fn d(&self, i: usize) -> f64 {
        at(&self.grad, i)
    }

    fn chain(&self, f0: f64, f1: f64) -> Self {
        Jet1 {
            value: f0,
            grad: self.grad.iter().map(|g| f1 * g).collect(),
        }
    }
}

impl Add for Jet1 {
    type Output = Jet1;
    fn add(self, o: Jet1) -> Jet1 {
        let n = common_dim(self.dim(), o.dim());
        Jet1 {
            value: self.value + o.value,
            grad: (0..n).map(|i| at(&self.grad, i) + at(&o.grad, i)).collect(),
        }
    }
}

impl Sub for Jet1 {
    type Output = Jet1;
    fn sub(self, o: Jet1) -> Jet1 {
        let n = common_dim(self.dim(), o.dim());
        Jet1 {
            value: self.value - o.value,
            grad: (0..n).map(|i| at(&self.grad, i) - at(&o.grad, i)).collect(),
        }
    }
}

impl Mul for Jet1 {
    type Output = Jet1;
    fn mul(self, o: Jet1) -> Jet1 {
        let n = common_dim(self.dim(), o.dim());
        Jet1 {
            value: self.value * o.value,
            grad: (0..n)
                .map(|i| self.value * at(&o.grad, i) + o.value * at(&self.grad, i))
                .collect(),
        }
    }
}

impl Div for Jet1 {
    type Output = Jet1;
    fn div(self, o: Jet1) -> Jet1 {
        let r = 1.0 / o.value;
        self * o.chain(r, -r * r)
    }
}

impl Neg for Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        self.chain(-self.value, -1.0)
    }
}

impl Scalar for Jet1 {
    fn from_f64(c: f64) -> Self {
        Jet1::constant(c)
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn sqrt(&self) -> Self {
        let s = libm::sqrt(self.value);
        self.chain(s, 0.5 / s)
    }
    fn sin(&self) -> Self {
        self.chain(libm::sin(self.value), libm::cos(self.value))
    }
    fn cos(&self) -> Self {
        self.chain(libm::cos(self.value), -libm::sin(self.value))
    }
    fn exp(&self) -> Self {
        let e = libm::exp(self.value);
        self.chain(e, e)
    }
    fn ln(&self) -> Self {
        self.chain(libm::log(self.value), 1.0 / self.value)
    }
    fn powi(&self, n: i32) -> Self {
        let x = self.value;
        let d = if n == 0 { 0.0 } else { n as f64 * powi_f64(x, n - 1) };
        self.chain(powi_f64(x, n), d)
    }
    fn powf(&self, p: f64) -> Self {
        let x = self.value;
        self.chain(libm::pow(x, p), p * libm::pow(x, p - 1.0))
    }
    fn scale(&self, c: f64) -> Self {
        Jet1 {
            value: self.value * c,
            grad: self.grad.iter().map(|g| g * c).collect(),
        }
    }
}

/// Second-order jet: value, gradient and Hessian.
///
/// The Hessian is stored as a packed upper triangle, so it is symmetric by
/// construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub grad: Vec<f64>,
    /// Packed upper triangle, see [`packed`].
    pub hess: Vec<f64>,
}

impl Jet2 {
    pub fn constant(value: f64) -> Self {
        Jet2 {
            value,
            grad: Vec::new(),
            hess: Vec::new(),
        }
    }

    /// The coordinate function `x_i` at `value` in `n` variables.
    pub fn variable(value: f64, i: usize, n: usize) -> Self {
        let mut grad = vec![0.0; n];
        grad[i] = 1.0;
        Jet2 {
            value,
            grad,
            hess: vec![0.0; n * (n + 1) / 2],
        }
    }

    /// Seeds every coordinate of `point` as an independent variable.
    pub fn seed(point: &[f64]) -> Vec<Jet2> {
        let n = point.len();
        point
            .iter()
            .enumerate()
            .map(|(i, &x)| Jet2::variable(x, i, n))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    pub fn d(&self, i: usize) -> f64 {
        at(&self.grad, i)
    }

    pub fn dd(&self, i: usize, j: usize) -> f64 {
        if self.hess.is_empty() {
            0.0
        } else {
            self.hess[packed(self.dim(), i, j)]
        }
    }

    /// The partial derivative `∂f/∂x_i` as a first-order jet.
    pub fn partial(&self, i: usize) -> Jet1 {
        let n = self.dim();
        if n == 0 {
            return Jet1::constant(0.0);
        }
        Jet1 {
            value: self.grad[i],
            grad: (0..n).map(|j| self.dd(i, j)).collect(),
        }
    }

    /// Drops the Hessian.
    pub fn to_jet1(&self) -> Jet1 {
        Jet1 {
            value: self.value,
            grad: self.grad.clone(),
        }
    }

    fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let n = self.dim();
        let mut hess = Vec::with_capacity(self.hess.len());
        for i in 0..n {
            for j in i..n {
                hess.push(f1 * self.hess[packed(n, i, j)] + f2 * self.grad[i] * self.grad[j]);
            }
        }
        Jet2 {
            value: f0,
            grad: self.grad.iter().map(|g| f1 * g).collect(),
            hess,
        }
    }

    fn zip(&self, o: &Jet2, f: impl Fn(f64, f64) -> f64) -> Jet2 {
        let n = common_dim(self.dim(), o.dim());
        let m = n * (n + 1) / 2;
        Jet2 {
            value: f(self.value, o.value),
            grad: (0..n).map(|i| f(at(&self.grad, i), at(&o.grad, i))).collect(),
            hess: (0..m).map(|k| f(at(&self.hess, k), at(&o.hess, k))).collect(),
        }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        self.zip(&o, |a, b| a + b)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self.zip(&o, |a, b| a - b)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        let n = common_dim(self.dim(), o.dim());
        let (a, b) = (self.value, o.value);
        let mut hess = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                let k = packed(n, i, j);
                hess.push(
                    a * at(&o.hess, k)
                        + b * at(&self.hess, k)
                        + at(&self.grad, i) * at(&o.grad, j)
                        + at(&self.grad, j) * at(&o.grad, i),
                );
            }
        }
        Jet2 {
            value: a * b,
            grad: (0..n)
                .map(|i| a * at(&o.grad, i) + b * at(&self.grad, i))
                .collect(),
            hess,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        let r = 1.0 / o.value;
        self * o.chain(r, -r * r, 2.0 * r * r * r)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.chain(-self.value, -1.0, 0.0)
    }
}

impl Scalar for Jet2 {
    fn from_f64(c: f64) -> Self {
        Jet2::constant(c)
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn sqrt(&self) -> Self {
        let s = libm::sqrt(self.value);
        self.chain(s, 0.5 / s, -0.25 / (s * self.value))
    }
    fn sin(&self) -> Self {
        let (s, c) = (libm::sin(self.value), libm::cos(self.value));
        self.chain(s, c, -s)
    }
    fn cos(&self) -> Self {
        let (s, c) = (libm::sin(self.value), libm::cos(self.value));
        self.chain(c, -s, -c)
    }
    fn exp(&self) -> Self {
        let e = libm::exp(self.value);
        self.chain(e, e, e)
    }
    fn ln(&self) -> Self {
        let r = 1.0 / self.value;
        self.chain(libm::log(self.value), r, -r * r)
    }
    fn powi(&self, n: i32) -> Self {
        let x = self.value;
        let nf = n as f64;
        let d1 = if n == 0 { 0.0 } else { nf * powi_f64(x, n - 1) };
        let d2 = if n == 0 || n == 1 {
            0.0
        } else {
            nf * (nf - 1.0) * powi_f64(x, n - 2)
        };
        self.chain(powi_f64(x, n), d1, d2)
    }
    fn powf(&self, p: f64) -> Self {
        let x = self.value;
        self.chain(
            libm::pow(x, p),
            p * libm::pow(x, p - 1.0),
            p * (p - 1.0) * libm::pow(x, p - 2.0),
        )
    }
    fn scale(&self, c: f64) -> Self {
        Jet2 {
            value: self.value * c,
            grad: self.grad.iter().map(|g| g * c).collect(),
            hess: self.hess.iter().map(|h| h * c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn square_at_three() {
        let x = Jet2::variable(3.0, 0, 1);
        let f = x.clone() * x;
        assert_eq!((f.value, f.d(0), f.dd(0, 0)), (9.0, 6.0, 2.0));
    }

    #[test]
    fn reciprocal_at_two() {
        let x = Jet2::variable(2.0, 0, 1);
        let f = Jet2::constant(1.0) / x;
        assert!(close(f.value, 0.5) && close(f.d(0), -0.25) && close(f.dd(0, 0), 0.25));
    }

    #[test]
    fn exp_at_zero() {
        let f = Jet2::variable(0.0, 0, 1).exp();
        assert_eq!((f.value, f.d(0), f.dd(0, 0)), (1.0, 1.0, 1.0));
    }

    #[test]
    fn mixed_partials_of_product() {
        let v = Jet2::seed(&[2.0, 5.0]);
        let f = v[0].clone() * v[0].clone() * v[1].clone();
        assert_eq!(f.dd(0, 1), 4.0);
        assert_eq!(f.dd(1, 0), 4.0);
        assert_eq!(f.dd(0, 0), 10.0);
        assert_eq!(f.dd(1, 1), 0.0);
    }

    #[test]
    fn constants_broadcast() {
        let v = Jet2::seed(&[1.5, 0.5]);
        let f = Jet2::constant(2.0) * v[1].clone() + Jet2::constant(1.0);
        assert_eq!(f.grad, vec![0.0, 2.0]);
        assert_eq!(f.hess.len(), 3);
    }

    #[test]
    fn partial_promotes_hessian_row() {
        let v = Jet2::seed(&[2.0, 3.0]);
        let f = v[0].clone() * v[1].clone() * v[1].clone();
        let fx = f.partial(0);
        assert_eq!(fx.value, 9.0);
        assert_eq!(fx.grad, vec![0.0, 6.0]);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let x = Jet2::variable(1.3, 0, 1);
        let a = x.powi(3);
        let b = x.clone() * x.clone() * x;
        assert!(close(a.value, b.value) && close(a.d(0), b.d(0)) && close(a.dd(0, 0), b.dd(0, 0)));
    }

    #[test]
    fn jet1_division() {
        let v: Vec<Jet1> = (0..2).map(|i| Jet1::variable([3.0, 4.0][i], i, 2)).collect();
        let f = v[0].clone() / v[1].clone();
        assert!(close(f.value, 0.75) && close(f.grad[0], 0.25) && close(f.grad[1], -3.0 / 16.0));
    }

    #[test]
    #[should_panic]
    fn mismatched_dimensions_panic() {
        let _ = Jet2::variable(1.0, 0, 2) + Jet2::variable(1.0, 0, 3);
    }
}
