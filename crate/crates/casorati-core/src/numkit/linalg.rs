//! Small dense matrices over any [`Scalar`].

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::jet::Scalar;
use crate::error::{Error, Result};
use crate::tolerances;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![S::from_f64(0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::from_f64(1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &Mat<S>) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        Mat::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = S::from_f64(0.0);
            for k in 0..self.cols {
                acc = acc + self.get(i, k).clone() * o.get(k, j).clone();
            }
            acc
        })
    }

    pub fn sub(&self, o: &Mat<S>) -> Self {
        Mat::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() - o.get(i, j).clone()
        })
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn values(&self) -> Mat<f64> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.value()).collect(),
        }
    }

    /// Gauss-Jordan inverse with partial pivoting on the values.
    pub fn inverse(&self, context: &str) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!("{context}: inverse of non-square matrix")));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self
            .data
            .iter()
            .map(|x| x.value().abs())
            .fold(0.0_f64, f64::max)
            .max(f64::MIN_POSITIVE);
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if a.get(r, col).value().abs() > a.get(piv, col).value().abs() {
                    piv = r;
                }
            }
            if a.get(piv, col).value().abs() <= 1e-14 * scale {
                return Err(Error::Singular(context.to_string()));
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                a.set(col, j, a.get(col, j).clone() / p.clone());
                inv.set(col, j, inv.get(col, j).clone() / p.clone());
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let av = a.get(r, j).clone() - f.clone() * a.get(col, j).clone();
                    a.set(r, j, av);
                    let iv = inv.get(r, j).clone() - f.clone() * inv.get(col, j).clone();
                    inv.set(r, j, iv);
                }
            }
        }
        Ok(inv)
    }
}

impl Mat<f64> {
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues(m: &Mat<f64>) -> Vec<f64> {
    let n = m.rows;
    let mut a = Mat::from_fn(n, n, |i, j| 0.5 * (m.get(i, j) + m.get(j, i)));
    for _ in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a.get(i, j) * a.get(i, j);
                }
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = *a.get(p, q);
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = *a.get(k, p);
                    let akq = *a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = *a.get(p, k);
                    let aqk = *a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| *a.get(i, i)).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Solves `a x = b` for a square `f64` system by partial pivoting.
pub fn solve(a: &Mat<f64>, b: &[f64], context: &str) -> Result<Vec<f64>> {
    let inv = a.inverse(context)?;
    Ok(inv.matvec(b))
}

/// Symmetric matrix of values, e.g. a metric at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    pub dim: usize,
    pub entries: Mat<f64>,
}

impl SymMatrix {
    /// Symmetrizes `m` and wraps it.
    pub fn new(m: Mat<f64>) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::Dimension("symmetric matrix must be square".into()));
        }
        let n = m.rows;
        let entries = Mat::from_fn(n, n, |i, j| 0.5 * (m.get(i, j) + m.get(j, i)));
        Ok(SymMatrix { dim: n, entries })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        *self.entries.get(i, j)
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += u[i] * self.get(i, j) * v[j];
            }
        }
        acc
    }

    /// Diagonally pivoted LDLᵀ; true when every pivot is positive.
    pub fn is_positive_definite(&self) -> bool {
        let n = self.dim;
        let mut a = self.entries.clone();
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        let mut remaining: Vec<usize> = (0..n).collect();
        while !remaining.is_empty() {
            let (pos, &p) = remaining
                .iter()
                .enumerate()
                .max_by(|x, y| a.get(*x.1, *x.1).total_cmp(a.get(*y.1, *y.1)))
                .unwrap();
            let d = *a.get(p, p);
            if !(d > 1e-14 * scale) {
                return false;
            }
            remaining.remove(pos);
            for &i in &remaining {
                for &j in &remaining {
                    let v = a.get(i, j) - a.get(i, p) * a.get(p, j) / d;
                    a.set(i, j, v);
                }
            }
        }
        true
    }
}

/// Modified Gram-Schmidt in the given column order against `inner`.
///
/// Fails with the offending index when a column's residual norm drops below
/// the rank tolerance.
pub fn gram_schmidt<S: Scalar>(columns: &[Vec<S>], inner: &Mat<S>) -> Result<Vec<Vec<S>>> {
    let dot = |u: &[S], v: &[S]| -> S {
        let mut acc = S::from_f64(0.0);
        for i in 0..u.len() {
            for j in 0..v.len() {
                acc = acc + u[i].clone() * inner.get(i, j).clone() * v[j].clone();
            }
        }
        acc
    };
    let mut out: Vec<Vec<S>> = Vec::with_capacity(columns.len());
    for (idx, col) in columns.iter().enumerate() {
        let mut w = col.clone();
        for q in &out {
            let c = dot(q, &w);
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi = wi.clone() - c.clone() * qi.clone();
            }
        }
        let norm_sq = dot(&w, &w);
        if !(norm_sq.value() > tolerances::GRAM_SCHMIDT * tolerances::GRAM_SCHMIDT) {
            return Err(Error::RankDeficient {
                context: "gram_schmidt".into(),
                index: idx,
            });
        }
        let norm = norm_sq.sqrt();
        out.push(w.into_iter().map(|x| x / norm.clone()).collect());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::jet::Jet2;

    #[test]
    fn identity_columns_stay_put() {
        let cols = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let g = gram_schmidt(&cols, &Mat::identity(2)).unwrap();
        assert_eq!(g, cols);
    }

    #[test]
    fn classical_two_by_two() {
        let cols = vec![vec![1.0, 0.0], vec![1.0, 1.0]];
        let g = gram_schmidt(&cols, &Mat::identity(2)).unwrap();
        assert_eq!(g, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn weighted_inner_product_normalizes() {
        let mut inner = Mat::identity(6);
        for i in 0..5 {
            inner.set(i, i, 4.0);
        }
        let mut e1 = vec![0.0; 6];
        e1[0] = 1.0;
        let g = gram_schmidt(&[e1], &inner).unwrap();
        assert_eq!(g[0][0], 0.5);
    }

    #[test]
    fn rank_deficiency_reports_index() {
        let cols = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        match gram_schmidt(&cols, &Mat::identity(2)) {
            Err(Error::RankDeficient { index, .. }) => assert_eq!(index, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inverse_of_jet_matrix_differentiates() {
        let x = Jet2::seed(&[2.0]);
        let m = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => x[0].clone(),
            (1, 1) => Jet2::constant(1.0),
            _ => Jet2::constant(0.0),
        });
        let inv = m.inverse("test").unwrap();
        let e = inv.get(0, 0);
        assert!((e.value - 0.5).abs() < 1e-15);
        assert!((e.d(0) + 0.25).abs() < 1e-15);
        assert!((e.dd(0, 0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn singular_inverse_errors() {
        let m = Mat::from_fn(2, 2, |_, _| 1.0);
        assert!(matches!(m.inverse("x"), Err(Error::Singular(_))));
    }

    #[test]
    fn positive_definiteness() {
        let a = SymMatrix::new(Mat::from_fn(2, 2, |i, j| if i == j { 2.0 } else { 1.0 })).unwrap();
        assert!(a.is_positive_definite());
        let b = SymMatrix::new(Mat::from_fn(2, 2, |i, j| if i == j { 1.0 } else { 2.0 })).unwrap();
        assert!(!b.is_positive_definite());
    }

    #[test]
    fn jacobi_eigenvalues() {
        // Q diag(1, 2, 5) Qᵀ for a rotation about the z axis.
        let (c, s) = (0.6, 0.8);
        let q = Mat::from_fn(3, 3, |i, j| match (i, j) {
            (0, 0) | (1, 1) => c,
            (0, 1) => -s,
            (1, 0) => s,
            (2, 2) => 1.0,
            _ => 0.0,
        });
        let d = Mat::from_fn(3, 3, |i, j| if i == j { [5.0, 1.0, 2.0][i] } else { 0.0 });
        let m = q.mul(&d).mul(&q.transpose());
        let ev = symmetric_eigenvalues(&m);
        for (a, b) in ev.iter().zip([1.0, 2.0, 5.0]) {
            assert!((a - b).abs() < 1e-12, "{ev:?}");
        }
    }
}
