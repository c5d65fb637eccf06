//! Consistency residuals of a [`SubmersionPoint`](super::SubmersionPoint).

use alloc::vec;
use alloc::vec::Vec;

use super::tensors::{i3, i4};
use super::SubmersionPoint;
use crate::error::Result;
use crate::geometry::{curvature_from_jets, CurvaturePack, MetricField};
use crate::numkit::linalg::solve;
use crate::numkit::{Jet2, Mat};

/// Largest absolute deviation of each checked identity. `None` means the
/// check does not apply to this submersion.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Residuals {
    /// `g1(h_i, h_j) − g2(F_* h_i, F_* h_j)`.
    pub isometry: f64,
    pub orthonormality: f64,
    /// `dF · v_a`.
    pub vertical_kernel: f64,
    pub t_symmetry: f64,
    pub a_antisymmetry: f64,
    /// `g(T_E F, G) + g(F, T_E G)` over frame triples.
    pub t_skew_adjoint: f64,
    pub a_skew_adjoint: f64,
    /// `A_{h_i}h_j − A_{h_j}h_i − v[h_i, h_j]` with the coordinate bracket.
    pub bracket: f64,
    /// `A_{h_i}h_j − ½ v[h_i, h_j]`.
    pub half_bracket: f64,
    pub metric_compatibility: f64,
    pub christoffel_symmetry: f64,
    pub riemann_symmetry: f64,
    pub bianchi: f64,
    /// `R(h_i, v_j, v_l, h_k)` against the mixed O'Neill equation.
    pub mixed: f64,
    /// The same right side against `R(h_i, v_j, h_k, v_l)`.
    pub mixed_literal: f64,
    /// Intrinsic fibre curvature against `R + g(T_1 F_4, T_2 F_3) − g(T_2 F_4, T_1 F_3)`.
    pub gauss: Option<f64>,
    /// Same with the last term read as `g(T_2 F_4, T_1 F_4)`.
    pub gauss_literal: Option<f64>,
    /// Intrinsic fibre scalar curvature against `2τ_V + ‖trace T‖² − ‖T^H‖²`.
    pub fiber_scalar: Option<f64>,
    /// Full contraction of the horizontal Gauss equation against
    /// `2τ_H + 3‖A^V‖²`.
    pub horizontal_identity: f64,
    /// `2τ_H^⊥` against the scalar curvature of the base metric at `F(p)`.
    pub base_scalar: Option<f64>,
    /// `2τ − (2τ_V + 2τ_H + 2 Σ R(h_i, v_j, v_j, h_i))`.
    pub scalar_decomposition: f64,
    /// The full scalar identity with the signs derived from the mixed
    /// equation.
    pub scalar_identity: f64,
    /// The scalar identity with `+3sC^H − 2δ(N) + ‖T^V‖² − ‖A^H‖²`.
    pub scalar_identity_literal: f64,
}

impl Residuals {
    /// Residuals of identities that hold for every Riemannian submersion,
    /// with their names.
    pub fn named(&self) -> Vec<(&'static str, Option<f64>)> {
        vec![
            ("isometry", Some(self.isometry)),
            ("orthonormality", Some(self.orthonormality)),
            ("vertical_kernel", Some(self.vertical_kernel)),
            ("t_symmetry", Some(self.t_symmetry)),
            ("a_antisymmetry", Some(self.a_antisymmetry)),
            ("t_skew_adjoint", Some(self.t_skew_adjoint)),
            ("a_skew_adjoint", Some(self.a_skew_adjoint)),
            ("bracket", Some(self.bracket)),
            ("half_bracket", Some(self.half_bracket)),
            ("metric_compatibility", Some(self.metric_compatibility)),
            ("christoffel_symmetry", Some(self.christoffel_symmetry)),
            ("riemann_symmetry", Some(self.riemann_symmetry)),
            ("bianchi", Some(self.bianchi)),
            ("mixed", Some(self.mixed)),
            ("mixed_literal", Some(self.mixed_literal)),
            ("gauss", self.gauss),
            ("gauss_literal", self.gauss_literal),
            ("fiber_scalar", self.fiber_scalar),
            ("horizontal_identity", Some(self.horizontal_identity)),
            ("base_scalar", self.base_scalar),
            ("scalar_decomposition", Some(self.scalar_decomposition)),
            ("scalar_identity", Some(self.scalar_identity)),
            ("scalar_identity_literal", Some(self.scalar_identity_literal)),
        ]
    }

    /// The residuals that must vanish on a genuine Riemannian submersion:
    /// everything except the literal variants.
    pub fn max_required(&self) -> f64 {
        self.named()
            .into_iter()
            .filter(|(name, _)| !name.ends_with("_literal"))
            .filter_map(|(_, v)| v)
            .fold(0.0, f64::max)
    }
}

/// Scalar curvature of the metric on a parametrized affine slice
/// `x = p + Σ_a u_a b_a`, at `u = 0`.
pub fn slice_curvature(metric: &MetricField, p: &[f64], basis: &[Vec<f64>]) -> Result<CurvaturePack> {
    let m = basis.len();
    let vars: Vec<Jet2> = (0..p.len())
        .map(|k| Jet2 {
            value: p[k],
            grad: basis.iter().map(|b| b[k]).collect(),
            hess: vec![0.0; m * (m + 1) / 2],
        })
        .collect();
    let g = metric.eval(&vars)?;
    let induced = Mat::from_fn(m, m, |a, b| {
        let mut acc = Jet2::constant(0.0);
        for k in 0..p.len() {
            for l in 0..p.len() {
                let w = basis[a][k] * basis[b][l];
                if w != 0.0 {
                    acc = acc + g.get(k, l).clone() * Jet2::constant(w);
                }
            }
        }
        acc
    });
    curvature_from_jets(&induced, &vec![0.0; m])
}

/// Curvature of the base metric at `F(p)`, with total-space coordinates held
/// fixed at `p`.
pub fn base_curvature(sp: &SubmersionPoint, sub: &super::Submersion) -> Result<CurvaturePack> {
    let q = sub.image(&sp.point)?;
    let mut vars = Jet2::seed(&q);
    vars.extend(sp.point.iter().map(|&x| Jet2::constant(x)));
    let g = sub.base_metric.eval(&vars)?;
    curvature_from_jets(&g, &q)
}

pub(crate) fn compute(sp: &SubmersionPoint, sub: &super::Submersion) -> Result<Residuals> {
    let n = sp.n;
    let ell = sp.ell;
    let s = sp.s;
    let g = &sp.curvature.metric;
    let e = &sp.frame_values;
    let t = &sp.t_full;
    let a = &sp.a_full;
    let r = |p: usize, q: usize, u: usize, v: usize| sp.riemann_frame[i4(n, p, q, u, v)];
    let mut res = Residuals::default();
    let max = |acc: &mut f64, v: f64| *acc = acc.max(v.abs());

    let jac = sp.jacobian.clone();
    let push = |v: &[f64]| -> Vec<f64> { jac.matvec(v) };
    let g2 = sub.base_metric_at(&sp.point)?;
    for i in 0..s {
        for j in 0..s {
            let lhs = g.inner(&e[ell + i], &e[ell + j]);
            let rhs = g2.inner(&push(&e[ell + i]), &push(&e[ell + j]));
            max(&mut res.isometry, lhs - rhs);
        }
    }
    for p in 0..n {
        for q in 0..n {
            let want = if p == q { 1.0 } else { 0.0 };
            max(&mut res.orthonormality, g.inner(&e[p], &e[q]) - want);
        }
    }
    for v in &e[..ell] {
        for x in push(v) {
            max(&mut res.vertical_kernel, x);
        }
    }
    let tv = &sp.tensors;
    for i in 0..ell {
        for j in 0..ell {
            for alpha in 0..s {
                max(&mut res.t_symmetry, tv.t(i, j, alpha) - tv.t(j, i, alpha));
            }
        }
    }
    for i in 0..s {
        for j in 0..s {
            for alpha in 0..ell {
                max(&mut res.a_antisymmetry, tv.a(i, j, alpha) + tv.a(j, i, alpha));
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for u in 0..n {
                max(&mut res.t_skew_adjoint, t[i3(n, p, q, u)] + t[i3(n, p, u, q)]);
                max(&mut res.a_skew_adjoint, a[i3(n, p, q, u)] + a[i3(n, p, u, q)]);
            }
        }
    }

    // Coordinate bracket [h_i, h_j]^k = h_i^m ∂_m h_j^k − h_j^m ∂_m h_i^k.
    let hz = &sp.frame.horizontal;
    for i in 0..s {
        for j in 0..s {
            let br: Vec<f64> = (0..n)
                .map(|k| {
                    (0..n)
                        .map(|m| e[ell + i][m] * hz[j][k].d(m) - e[ell + j][m] * hz[i][k].d(m))
                        .sum()
                })
                .collect();
            for alpha in 0..ell {
                let vb = g.inner(&br, &e[alpha]);
                max(&mut res.bracket, tv.a(i, j, alpha) - tv.a(j, i, alpha) - vb);
                max(&mut res.half_bracket, tv.a(i, j, alpha) - 0.5 * vb);
            }
        }
    }

    let pack = &sp.curvature;
    res.metric_compatibility = pack.metric_compatibility_residual();
    res.christoffel_symmetry = pack.christoffel_symmetry_residual();
    res.riemann_symmetry = pack.symmetry_residual();
    res.bianchi = pack.bianchi_residual();

    let nt = &sp.nabla_t;
    let na = &sp.nabla_a;
    for hi in ell..n {
        for vj in 0..ell {
            for vl in 0..ell {
                for hk in ell..n {
                    let mut rhs = nt[i4(n, hi, vj, vl, hk)] + na[i4(n, vj, hi, hk, vl)];
                    for m in 0..n {
                        rhs -= t[i3(n, vj, hi, m)] * t[i3(n, vl, hk, m)];
                        rhs += a[i3(n, hk, vl, m)] * a[i3(n, hi, vj, m)];
                    }
                    max(&mut res.mixed, r(hi, vj, vl, hk) - rhs);
                    max(&mut res.mixed_literal, r(hi, vj, hk, vl) - rhs);
                }
            }
        }
    }

    // g(T_P Q, T_U W) summed over the frame.
    let tt = |p: usize, q: usize, u: usize, w: usize| -> f64 {
        (0..n).map(|m| t[i3(n, p, q, m)] * t[i3(n, u, w, m)]).sum()
    };
    let aa = |p: usize, q: usize, u: usize, w: usize| -> f64 {
        (0..n).map(|m| a[i3(n, p, q, m)] * a[i3(n, u, w, m)]).sum()
    };
    let sums = &sp.sums;
    let norms = &tv.norms;
    if let Some(basis) = &sub.fiber_chart {
        let fiber = slice_curvature(&sub.metric, &sp.point, basis)?;
        // Express v_a in the slice parameters: basis · λ_a = v_a.
        let bt_b = Mat::from_fn(ell, ell, |x, y| {
            (0..n).map(|k| basis[x][k] * basis[y][k]).sum::<f64>()
        });
        let mut lambda = Vec::with_capacity(ell);
        for v in &e[..ell] {
            let rhs: Vec<f64> = (0..ell)
                .map(|x| (0..n).map(|k| basis[x][k] * v[k]).sum())
                .collect();
            lambda.push(solve(&bt_b, &rhs, "fiber chart")?);
        }
        let intrinsic = fiber.in_frame(&lambda);
        let ri = |p: usize, q: usize, u: usize, w: usize| intrinsic[i4(ell, p, q, u, w)];
        let (mut std_res, mut lit_res) = (0.0_f64, 0.0_f64);
        let mut two_tau = 0.0;
        for p in 0..ell {
            for q in 0..ell {
                two_tau += ri(p, q, q, p);
                for u in 0..ell {
                    for w in 0..ell {
                        let base = r(p, q, u, w) + tt(p, w, q, u);
                        let std = base - tt(q, w, p, u);
                        let lit = base - tt(q, w, p, w);
                        std_res = std_res.max((ri(p, q, u, w) - std).abs());
                        lit_res = lit_res.max((ri(p, q, u, w) - lit).abs());
                    }
                }
            }
        }
        res.gauss = Some(std_res);
        res.gauss_literal = Some(lit_res);
        res.fiber_scalar = Some((two_tau - sums.two_tau_ker(norms)).abs());
    }

    let mut contracted = 0.0;
    for p in ell..n {
        for q in ell..n {
            // R^⊥(X1,X2,X3,X4) = R − 2g(A_1 X2, A_3 X4) + g(A_2 X3, A_1 X4) − g(A_1 X3, A_2 X4)
            contracted += r(p, q, q, p) - 2.0 * aa(p, q, q, p) + aa(q, q, p, p) - aa(p, q, q, p);
        }
    }
    res.horizontal_identity = (contracted - sums.two_tau_perp(norms)).abs();
    if sub.base_metric.n == s {
        let base = base_curvature(sp, sub)?;
        res.base_scalar = Some((sums.two_tau_perp(norms) - base.scalar).abs());
    }

    let ellf = ell as f64;
    let sf = s as f64;
    let c_v = norms.t_h / ellf;
    let c_h = norms.a_v / sf;
    let tk = sums.two_tau_ker(norms);
    let tp = sums.two_tau_perp(norms);
    res.scalar_decomposition =
        (sums.two_tau - (sums.two_tau_v + sums.two_tau_h + 2.0 * sums.mixed)).abs();
    let common = tp + tk - norms.trace_t + ellf * c_v - norms.trace_a;
    let derived = common - 3.0 * sf * c_h + 2.0 * tv.delta_n - 2.0 * norms.t_v + 2.0 * norms.a_h;
    let literal = common + 3.0 * sf * c_h - 2.0 * tv.delta_n + norms.t_v - norms.a_h;
    res.scalar_identity = (sums.two_tau - derived).abs();
    res.scalar_identity_literal = (sums.two_tau - literal).abs();
    Ok(res)
}
