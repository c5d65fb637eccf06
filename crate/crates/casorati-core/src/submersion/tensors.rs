//! Connection coefficients of the adapted frame and the O'Neill tensors.
//!
//! Frame indices run over `0..n` with the vertical vectors first. With
//! `ω_AB^C = g(∇_{e_A} e_B, e_C)` the tensors are read off blockwise:
//! `T_AB^C = ω_AB^C` when `e_A` is vertical and exactly one of `e_B, e_C` is,
//! `A_AB^C = ω_AB^C` when `e_A` is horizontal and exactly one of `e_B, e_C`
//! is. Everything else vanishes.

use alloc::vec;
use alloc::vec::Vec;

use super::frame::{AdaptedFrame, Fields};
use crate::numkit::{Jet1, Jet2};

#[inline]
pub(crate) fn i3(n: usize, a: usize, b: usize, c: usize) -> usize {
    (a * n + b) * n + c
}

#[inline]
pub(crate) fn i4(n: usize, a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * n + b) * n + c) * n + d
}

/// `ω_AB^C` with first derivatives, indexed `(A * n + B) * n + C`.
pub fn connection(f: &Fields, gamma: &[Jet1], frame: &AdaptedFrame) -> Vec<Jet1> {
    let n = f.metric.rows;
    let coeffs: Vec<&Vec<Jet2>> = frame.vectors().collect();
    let c1: Vec<Vec<Jet1>> = coeffs
        .iter()
        .map(|v| v.iter().map(Jet2::to_jet1).collect())
        .collect();
    // inner[B][k][m] = ∂_m c_B^k + Σ_q c_B^q Γ^k_mq, so that
    // (∇_{e_A} e_B)^k = Σ_m c_A^m inner[B][k][m].
    let mut inner = Vec::with_capacity(n * n * n);
    for b in 0..n {
        for k in 0..n {
            for m in 0..n {
                let mut acc = coeffs[b][k].partial(m);
                for q in 0..n {
                    acc = acc + c1[b][q].clone() * gamma[i3(n, k, m, q)].clone();
                }
                inner.push(acc);
            }
        }
    }
    // lowered[C][k] = Σ_l g_kl c_C^l
    let mut lowered = Vec::with_capacity(n * n);
    for c in 0..n {
        for k in 0..n {
            let mut acc = Jet1::constant(0.0);
            for l in 0..n {
                acc = acc + f.metric.get(k, l).to_jet1() * c1[c][l].clone();
            }
            lowered.push(acc);
        }
    }
    let mut omega = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            let nabla: Vec<Jet1> = (0..n)
                .map(|k| {
                    let mut acc = Jet1::constant(0.0);
                    for m in 0..n {
                        acc = acc + c1[a][m].clone() * inner[i3(n, b, k, m)].clone();
                    }
                    acc
                })
                .collect();
            for c in 0..n {
                let mut acc = Jet1::constant(0.0);
                for k in 0..n {
                    acc = acc + nabla[k].clone() * lowered[c * n + k].clone();
                }
                omega.push(acc);
            }
        }
    }
    omega
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    T,
    A,
}

/// Whether `(A, B, C)` is a slot where the tensor can be non-zero.
pub fn in_block(which: Which, ell: usize, a: usize, b: usize, c: usize) -> bool {
    let v = |x: usize| x < ell;
    let first = match which {
        Which::T => v(a),
        Which::A => !v(a),
    };
    first && v(b) != v(c)
}

/// Components of `T` or `A` in the frame, indexed like `ω`.
pub fn components(omega: &[Jet1], n: usize, ell: usize, which: Which) -> Vec<f64> {
    let mut out = vec![0.0; n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if in_block(which, ell, a, b, c) {
                    out[i3(n, a, b, c)] = omega[i3(n, a, b, c)].value;
                }
            }
        }
    }
    out
}

/// `(∇_{e_D} S)_AB^C`, indexed `((D * n + A) * n + B) * n + C`, for `S` one of
/// the O'Neill tensors.
pub fn covariant_derivative(
    omega: &[Jet1],
    frame_values: &[Vec<f64>],
    ell: usize,
    which: Which,
) -> Vec<f64> {
    let n = frame_values.len();
    let s = components(omega, n, ell, which);
    let w = |d: usize, a: usize, c: usize| omega[i3(n, d, a, c)].value;
    let mut out = vec![0.0; n * n * n * n];
    for d in 0..n {
        let e = &frame_values[d];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut v = 0.0;
                    if in_block(which, ell, a, b, c) {
                        let jet = &omega[i3(n, a, b, c)];
                        for (m, em) in e.iter().enumerate() {
                            v += em * jet.d(m);
                        }
                    }
                    for m in 0..n {
                        v += w(d, m, c) * s[i3(n, a, b, m)]
                            - w(d, a, m) * s[i3(n, m, b, c)]
                            - w(d, b, m) * s[i3(n, a, m, c)];
                    }
                    out[i4(n, d, a, b, c)] = v;
                }
            }
        }
    }
    out
}

/// Squared norms of the tensor blocks.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TensorNorms {
    /// `‖T^H‖² = Σ_ij g(T_{v_i}v_j, T_{v_i}v_j)`.
    pub t_h: f64,
    /// `‖T^V‖² = Σ_ji g(T_{v_j}h_i, T_{v_j}h_i)`.
    pub t_v: f64,
    /// `‖A^V‖² = Σ_ij g(A_{h_i}h_j, A_{h_i}h_j)`.
    pub a_v: f64,
    /// `‖A^H‖² = Σ_ij g(A_{h_i}v_j, A_{h_i}v_j)`.
    pub a_h: f64,
    pub trace_t: f64,
    pub trace_a: f64,
}

/// Pointwise O'Neill data in the adapted frame.
#[derive(Clone, Debug, PartialEq)]
pub struct ONeillTensors {
    pub ell: usize,
    pub s: usize,
    /// `T_ij^{H^α}`, indexed `(i * ℓ + j) * s + α`.
    pub t_h: Vec<f64>,
    /// `A_ij^{V^α}`, indexed `(i * s + j) * ℓ + α`.
    pub a_v: Vec<f64>,
    /// `g(T_{v_j} h_i, v_a)`, indexed `(j * s + i) * ℓ + a`.
    pub t_mixed: Vec<f64>,
    /// `g(A_{h_i} v_j, h_b)`, indexed `(i * ℓ + j) * s + b`.
    pub a_mixed: Vec<f64>,
    /// Horizontal components of `Σ_i T_{v_i} v_i`.
    pub trace_t: Vec<f64>,
    /// Vertical components of `Σ_i A_{h_i} h_i`.
    pub trace_a: Vec<f64>,
    /// `δ(N) = Σ_ij g((∇_{h_i}T)(v_j, v_j), h_i)`.
    pub delta_n: f64,
    pub norms: TensorNorms,
}

impl ONeillTensors {
    pub fn t(&self, i: usize, j: usize, alpha: usize) -> f64 {
        self.t_h[(i * self.ell + j) * self.s + alpha]
    }

    pub fn a(&self, i: usize, j: usize, alpha: usize) -> f64 {
        self.a_v[(i * self.s + j) * self.ell + alpha]
    }

    /// The symmetric `ℓ×ℓ` slice `T^{H^α}`.
    pub fn t_slice(&self, alpha: usize) -> Vec<f64> {
        let l = self.ell;
        (0..l * l).map(|k| self.t(k / l, k % l, alpha)).collect()
    }

    /// The `s×s` slice `A^{V^α}`.
    pub fn a_slice(&self, alpha: usize) -> Vec<f64> {
        let s = self.s;
        (0..s * s).map(|k| self.a(k / s, k % s, alpha)).collect()
    }

    /// Extracts the blocks from full frame components of `T`, `A` and `∇T`.
    pub fn from_components(t: &[f64], a: &[f64], nabla_t: &[f64], ell: usize, s: usize) -> Self {
        let n = ell + s;
        let mut t_h = Vec::with_capacity(ell * ell * s);
        for i in 0..ell {
            for j in 0..ell {
                for alpha in 0..s {
                    t_h.push(t[i3(n, i, j, ell + alpha)]);
                }
            }
        }
        let mut a_v = Vec::with_capacity(s * s * ell);
        for i in 0..s {
            for j in 0..s {
                for alpha in 0..ell {
                    a_v.push(a[i3(n, ell + i, ell + j, alpha)]);
                }
            }
        }
        let mut t_mixed = Vec::with_capacity(ell * s * ell);
        for j in 0..ell {
            for i in 0..s {
                for c in 0..ell {
                    t_mixed.push(t[i3(n, j, ell + i, c)]);
                }
            }
        }
        let mut a_mixed = Vec::with_capacity(s * ell * s);
        for i in 0..s {
            for j in 0..ell {
                for b in 0..s {
                    a_mixed.push(a[i3(n, ell + i, j, ell + b)]);
                }
            }
        }
        let trace_t: Vec<f64> = (0..s)
            .map(|alpha| (0..ell).map(|i| t[i3(n, i, i, ell + alpha)]).sum())
            .collect();
        let trace_a: Vec<f64> = (0..ell)
            .map(|alpha| (0..s).map(|i| a[i3(n, ell + i, ell + i, alpha)]).sum())
            .collect();
        let mut delta_n = 0.0;
        for i in 0..s {
            for j in 0..ell {
                delta_n += nabla_t[i4(n, ell + i, j, j, ell + i)];
            }
        }
        let sq = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
        let norms = TensorNorms {
            t_h: sq(&t_h),
            t_v: sq(&t_mixed),
            a_v: sq(&a_v),
            a_h: sq(&a_mixed),
            trace_t: sq(&trace_t),
            trace_a: sq(&trace_a),
        };
        ONeillTensors {
            ell,
            s,
            t_h,
            a_v,
            t_mixed,
            a_mixed,
            trace_t,
            trace_a,
            delta_n,
            norms,
        }
    }
}
