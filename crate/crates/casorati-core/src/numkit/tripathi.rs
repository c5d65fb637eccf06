//! The constrained quadratic extremum problem
//! `f(t) = λ1 Σ_{i<n} t_i² + λ2 t_n² − 2 Σ_{i<j} t_i t_j` on `Σ t_i = k`.

use alloc::vec;
use alloc::vec::Vec;

use super::linalg::{solve, Mat, SymMatrix};
use crate::error::{Error, Result};
use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticExtremumProblem {
    pub n: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    pub k: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TripathiSolution {
    pub argmin: Vec<f64>,
    pub min_value: f64,
    /// False when `λ2 ≠ (n−1)/(λ1−n+2)` and the minimizer came from the
    /// Lagrange system instead of the closed form.
    pub closed_form: bool,
}

impl QuadraticExtremumProblem {
    /// Problem with `λ2` chosen so the closed form applies.
    pub fn consistent(n: usize, lambda1: f64, k: f64) -> Self {
        let lambda2 = (n as f64 - 1.0) / (lambda1 - n as f64 + 2.0);
        QuadraticExtremumProblem { n, lambda1, lambda2, k }
    }

    pub fn objective(&self, t: &[f64]) -> f64 {
        let n = self.n;
        let mut f = self.lambda2 * t[n - 1] * t[n - 1];
        for ti in &t[..n - 1] {
            f += self.lambda1 * ti * ti;
        }
        for i in 0..n {
            for j in i + 1..n {
                f -= 2.0 * t[i] * t[j];
            }
        }
        f
    }

    pub fn constraint_holds(&self) -> bool {
        let nf = self.n as f64;
        let target = (nf - 1.0) / (self.lambda1 - nf + 2.0);
        (self.lambda2 - target).abs() <= tolerances::TRIPATHI_CONSTRAINT * target.abs().max(1.0)
    }

    fn hessian(&self) -> Mat<f64> {
        let n = self.n;
        Mat::from_fn(n, n, |i, j| {
            if i != j {
                -1.0
            } else if i + 1 == n {
                self.lambda2
            } else {
                self.lambda1
            }
        })
    }
}

pub fn tripathi_minimum(p: &QuadraticExtremumProblem) -> Result<TripathiSolution> {
    let n = p.n;
    if n < 3 {
        return Err(Error::Invalid("tripathi problem needs n >= 3".into()));
    }
    if !(p.lambda1 > 0.0 && p.lambda2 > 0.0) || !p.k.is_finite() {
        return Err(Error::Invalid("lambda1 and lambda2 must be positive".into()));
    }
    let nf = n as f64;
    if p.constraint_holds() && p.lambda1 > nf - 2.0 {
        let a = p.k / (p.lambda1 + 1.0);
        let mut argmin = vec![a; n];
        argmin[n - 1] = p.k * (p.lambda1 - nf + 2.0) / (p.lambda1 + 1.0);
        let min_value = p.objective(&argmin);
        return Ok(TripathiSolution {
            argmin,
            min_value,
            closed_form: true,
        });
    }

    // Reduced Hessian on the constraint plane, basis e_i − e_n.
    let h = p.hessian();
    let m = n - 1;
    let reduced = Mat::from_fn(m, m, |i, j| {
        h.get(i, j) - h.get(i, n - 1) - h.get(n - 1, j) + h.get(n - 1, n - 1)
    });
    if !SymMatrix::new(reduced)?.is_positive_definite() {
        return Err(Error::Invalid("objective is unbounded below on the constraint plane".into()));
    }
    // Lagrange system [2H 1; 1ᵀ 0][t; μ] = [0; k].
    let kkt = Mat::from_fn(n + 1, n + 1, |i, j| match (i < n, j < n) {
        (true, true) => 2.0 * h.get(i, j),
        (true, false) | (false, true) => 1.0,
        (false, false) => 0.0,
    });
    let mut rhs = vec![0.0; n + 1];
    rhs[n] = p.k;
    let sol = solve(&kkt, &rhs, "tripathi lagrange system")?;
    let argmin = sol[..n].to_vec();
    let min_value = p.objective(&argmin);
    Ok(TripathiSolution {
        argmin,
        min_value,
        closed_form: false,
    })
}
