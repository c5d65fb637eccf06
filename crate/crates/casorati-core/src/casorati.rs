//! Scalar curvatures of the two distributions, Casorati curvatures and the
//! normalized δ-Casorati curvatures.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numkit::{sphere_extremize, Mode, Scalar, SphereObjective, SphereOptions, SphereResult};
use crate::submersion::{CurvatureSums, ONeillTensors, TensorNorms};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ScalarCurvatures {
    /// Intrinsic scalar curvature of the fibre, halved.
    pub tau_v_ker: f64,
    /// Scalar curvature of the horizontal distribution, halved.
    pub tau_h_perp: f64,
    /// Ambient sectional sums over the vertical and horizontal frames, halved.
    pub tau_v_n1: f64,
    pub tau_h_n1: f64,
    pub rho_v: f64,
    pub rho_h: f64,
    pub rho_v_n1: f64,
    pub rho_h_n1: f64,
    /// `Σ_{i,j} R(h_i, v_j, v_j, h_i)`.
    pub mixed_sum: f64,
    /// Ambient scalar curvature `Σ_{a<b} K(e_a, e_b)`.
    pub tau_m1: f64,
    /// `|τ − (τ_V + τ_H + mixed)|`.
    pub decomposition_residual: f64,
}

pub fn scalar_curvatures(
    sums: &CurvatureSums,
    norms: &TensorNorms,
    ell: usize,
    s: usize,
) -> Result<ScalarCurvatures> {
    if ell < 2 || s < 2 {
        return Err(Error::Dimension(format!(
            "normalized scalar curvatures need both distributions of rank at least 2, got ℓ={ell}, s={s}"
        )));
    }
    let (l, sf) = (ell as f64, s as f64);
    let two_ker = sums.two_tau_ker(norms);
    let two_perp = sums.two_tau_perp(norms);
    let tau_m1 = 0.5 * sums.two_tau;
    let tau_v_n1 = 0.5 * sums.two_tau_v;
    let tau_h_n1 = 0.5 * sums.two_tau_h;
    Ok(ScalarCurvatures {
        tau_v_ker: 0.5 * two_ker,
        tau_h_perp: 0.5 * two_perp,
        tau_v_n1,
        tau_h_n1,
        rho_v: two_ker / (l * (l - 1.0)),
        rho_h: two_perp / (sf * (sf - 1.0)),
        rho_v_n1: sums.two_tau_v / (l * (l - 1.0)),
        rho_h_n1: sums.two_tau_h / (sf * (sf - 1.0)),
        mixed_sum: sums.mixed,
        tau_m1,
        decomposition_residual: (tau_m1 - (tau_v_n1 + tau_h_n1 + sums.mixed)).abs(),
    })
}

/// `(C^V, C^H)` from the component sums.
pub fn casorati_curvatures(t: &ONeillTensors) -> (f64, f64) {
    let sq = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
    (sq(&t.t_h) / t.ell as f64, sq(&t.a_v) / t.s as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distribution {
    Vertical,
    Horizontal,
}

/// The `d×d` slices whose squared entries make up a Casorati curvature:
/// `T^{H^α}` for the vertical distribution, `A^{V^α}` for the horizontal one.
pub fn slices(t: &ONeillTensors, which: Distribution) -> Vec<Vec<f64>> {
    match which {
        Distribution::Vertical => (0..t.s).map(|a| t.t_slice(a)).collect(),
        Distribution::Horizontal => (0..t.ell).map(|a| t.a_slice(a)).collect(),
    }
}

/// `C^L` as a function of the unit normal `w` of the hyperplane `L = w^⊥`.
#[derive(Clone, Debug)]
pub struct HyperplaneObjective {
    pub dim: usize,
    /// Row-major `dim×dim` slices.
    pub slices: Vec<Vec<f64>>,
}

impl HyperplaneObjective {
    pub fn new(dim: usize, slices: Vec<Vec<f64>>) -> Result<Self> {
        if dim < 3 {
            return Err(Error::Dimension(format!(
                "hyperplane Casorati curvature needs a distribution of rank at least 3, got {dim}"
            )));
        }
        if slices.iter().any(|m| m.len() != dim * dim) {
            return Err(Error::Dimension("slice size does not match the distribution rank".into()));
        }
        Ok(HyperplaneObjective { dim, slices })
    }

    pub fn of(t: &ONeillTensors, which: Distribution) -> Result<Self> {
        let dim = match which {
            Distribution::Vertical => t.ell,
            Distribution::Horizontal => t.s,
        };
        Self::new(dim, slices(t, which))
    }
}

impl SphereObjective for HyperplaneObjective {
    fn dim(&self) -> usize {
        self.dim
    }

    /// `‖ΠMΠ‖² = ‖M‖² − ‖Mᵀw‖² − ‖Mw‖² + (wᵀMw)²` with `Π = I − wwᵀ`, summed
    /// over the slices and divided by `dim − 1`.
    fn eval<S: Scalar>(&self, w: &[S]) -> S {
        let d = self.dim;
        let mut acc = S::from_f64(0.0);
        for m in &self.slices {
            let full: f64 = m.iter().map(|x| x * x).sum();
            let mut mw_sq = S::from_f64(0.0);
            let mut mtw_sq = S::from_f64(0.0);
            let mut wmw = S::from_f64(0.0);
            for i in 0..d {
                let mut row = S::from_f64(0.0);
                let mut col = S::from_f64(0.0);
                for j in 0..d {
                    row = row + w[j].scale(m[i * d + j]);
                    col = col + w[j].scale(m[j * d + i]);
                }
                wmw = wmw + w[i].clone() * row.clone();
                mw_sq = mw_sq + row.clone() * row;
                mtw_sq = mtw_sq + col.clone() * col;
            }
            acc = acc + S::from_f64(full) - mw_sq - mtw_sq + wmw.clone() * wmw;
        }
        acc.scale(1.0 / (d as f64 - 1.0))
    }
}

/// `C^L` for the hyperplane with unit normal `w` in frame coordinates.
pub fn hyperplane_casorati(t: &ONeillTensors, which: Distribution, w: &[f64]) -> Result<f64> {
    let o = HyperplaneObjective::of(t, which)?;
    if w.len() != o.dim {
        return Err(Error::Dimension(format!("normal has length {}, expected {}", w.len(), o.dim)));
    }
    let norm: f64 = w.iter().map(|x| x * x).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Invalid(format!("hyperplane normal is not a unit vector (|w|² = {norm})")));
    }
    Ok(o.eval(w))
}

/// `(1/k) Σ_α Σ_ij (b_iᵀ M^α b_j)²` for an orthonormal basis `b` of a
/// `k`-dimensional subspace.
pub fn subspace_casorati(slices: &[Vec<f64>], dim: usize, basis: &[Vec<f64>]) -> f64 {
    let k = basis.len();
    let mut acc = 0.0;
    for m in slices {
        for bi in basis {
            for bj in basis {
                let mut v = 0.0;
                for p in 0..dim {
                    for q in 0..dim {
                        v += bi[p] * m[p * dim + q] * bj[q];
                    }
                }
                acc += v * v;
            }
        }
    }
    acc / k as f64
}

/// How an infimum or supremum over hyperplanes was obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Extremum {
    pub value: f64,
    pub best_sample: f64,
    pub grad_norm: f64,
    pub converged: bool,
    pub heuristic: bool,
    pub iterations: usize,
}

impl From<&SphereResult> for Extremum {
    fn from(r: &SphereResult) -> Self {
        Extremum {
            value: r.value,
            best_sample: r.best_sample,
            grad_norm: r.grad_norm,
            converged: r.converged,
            heuristic: r.heuristic,
            iterations: r.iterations,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CasoratiSet {
    pub c_v: f64,
    pub c_h: f64,
    pub inf_cl_v: Extremum,
    pub sup_cl_v: Extremum,
    pub inf_cl_h: Extremum,
    pub sup_cl_h: Extremum,
    pub delta_c_v: f64,
    pub hat_delta_c_v: f64,
    pub delta_c_h: f64,
    pub hat_delta_c_h: f64,
}

/// `½C + ((d+1)/(2d))·inf C^L`.
pub fn delta_from(c: f64, inf: f64, d: usize) -> f64 {
    let d = d as f64;
    0.5 * c + (d + 1.0) / (2.0 * d) * inf
}

/// `2C − ((2d−1)/(2d))·sup C^L`.
pub fn hat_delta_from(c: f64, sup: f64, d: usize) -> f64 {
    let d = d as f64;
    2.0 * c - (2.0 * d - 1.0) / (2.0 * d) * sup
}

fn extrema(o: &HyperplaneObjective, opts: &SphereOptions) -> (Extremum, Extremum) {
    // A vanishing tensor block needs no search and should not be reported
    // as heuristic.
    if o.slices.iter().all(|m| m.iter().all(|x| *x == 0.0)) {
        let zero = Extremum {
            converged: true,
            ..Extremum::default()
        };
        return (zero, zero);
    }
    let lo = sphere_extremize(o, Mode::Min, opts);
    let hi = sphere_extremize(o, Mode::Max, opts);
    (Extremum::from(&lo), Extremum::from(&hi))
}

pub fn delta_casorati(t: &ONeillTensors, opts: &SphereOptions) -> Result<CasoratiSet> {
    let ov = HyperplaneObjective::of(t, Distribution::Vertical)?;
    let oh = HyperplaneObjective::of(t, Distribution::Horizontal)?;
    let (c_v, c_h) = casorati_curvatures(t);
    let (inf_cl_v, sup_cl_v) = extrema(&ov, opts);
    let (inf_cl_h, sup_cl_h) = extrema(&oh, opts);
    Ok(CasoratiSet {
        c_v,
        c_h,
        inf_cl_v,
        sup_cl_v,
        inf_cl_h,
        sup_cl_h,
        delta_c_v: delta_from(c_v, inf_cl_v.value, t.ell),
        hat_delta_c_v: hat_delta_from(c_v, sup_cl_v.value, t.ell),
        delta_c_h: delta_from(c_h, inf_cl_h.value, t.s),
        hat_delta_c_h: hat_delta_from(c_h, sup_cl_h.value, t.s),
    })
}
