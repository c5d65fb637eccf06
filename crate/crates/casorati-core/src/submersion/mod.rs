//! The submersion engine: adapted frames, O'Neill tensors, their covariant
//! derivatives and the identities tying them to the ambient curvature.

pub mod checks;
pub mod frame;
pub mod spec;
pub mod tensors;

use alloc::vec::Vec;

pub use checks::Residuals;
pub use frame::{adapted_frame, projectors, AdaptedFrame, Fields, Projectors};
pub use spec::{
    FrameHint, SpaceFormKind, SpaceFormSpec, StructureKind, StructureSpec, Submersion,
    SubmersionSpec,
};
pub use tensors::{ONeillTensors, TensorNorms, Which};

use crate::error::Result;
use crate::geometry::{christoffel_from_jets, curvature_from_jets, CurvaturePack};
use crate::numkit::{Jet1, Mat};
use tensors::i4;

/// Sectional-curvature sums of the ambient metric over the adapted frame.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CurvatureSums {
    pub two_tau: f64,
    /// `Σ_{i≠j} R(v_i, v_j, v_j, v_i)`.
    pub two_tau_v: f64,
    /// `Σ_{i≠j} R(h_i, h_j, h_j, h_i)`.
    pub two_tau_h: f64,
    /// `Σ_{i,j} R(h_i, v_j, v_j, h_i)`.
    pub mixed: f64,
}

impl CurvatureSums {
    /// Fibre scalar curvature from the contracted Gauss equation.
    pub fn two_tau_ker(&self, norms: &TensorNorms) -> f64 {
        self.two_tau_v + norms.trace_t - norms.t_h
    }

    /// Horizontal scalar curvature from the contracted horizontal equation.
    pub fn two_tau_perp(&self, norms: &TensorNorms) -> f64 {
        self.two_tau_h + 3.0 * norms.a_v
    }
}

/// Everything the engine knows about a submersion at one point.
#[derive(Clone, Debug)]
pub struct SubmersionPoint {
    pub point: Vec<f64>,
    pub n: usize,
    pub ell: usize,
    pub s: usize,
    pub curvature: CurvaturePack,
    pub jacobian: Mat<f64>,
    pub frame: AdaptedFrame,
    /// Frame vectors at the point, vertical first.
    pub frame_values: Vec<Vec<f64>>,
    /// `ω_AB^C = g(∇_{e_A} e_B, e_C)` with first derivatives.
    pub omega: Vec<Jet1>,
    /// Ambient Riemann tensor in the adapted frame.
    pub riemann_frame: Vec<f64>,
    /// Full frame components of `T` and `A`, indexed `(A * n + B) * n + C`.
    pub t_full: Vec<f64>,
    pub a_full: Vec<f64>,
    /// `(∇_{e_D} T)_AB^C` and `(∇_{e_D} A)_AB^C`, indexed `((D n + A) n + B) n + C`.
    pub nabla_t: Vec<f64>,
    pub nabla_a: Vec<f64>,
    pub tensors: ONeillTensors,
    pub sums: CurvatureSums,
    pub residuals: Residuals,
}

impl SubmersionPoint {
    /// Ambient `R(e_A, e_B, e_C, e_D)`.
    pub fn r(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.riemann_frame[i4(self.n, a, b, c, d)]
    }
}

fn sums(riemann: &[f64], n: usize, ell: usize) -> CurvatureSums {
    let r = |a: usize, b: usize| riemann[i4(n, a, b, b, a)];
    let mut out = CurvatureSums::default();
    for a in 0..n {
        for b in 0..n {
            let v = r(a, b);
            out.two_tau += v;
            match (a < ell, b < ell) {
                (true, true) => out.two_tau_v += v,
                (false, false) => out.two_tau_h += v,
                (false, true) => out.mixed += v,
                (true, false) => {}
            }
        }
    }
    out
}

/// Runs the full pointwise pipeline.
pub fn analyze(sub: &Submersion, p: &[f64]) -> Result<SubmersionPoint> {
    sub.check_point(p).map_err(|e| e.at("domain"))?;
    let fields = Fields::at(sub, p).map_err(|e| e.at("evaluation"))?;
    let curvature = curvature_from_jets(&fields.metric, p).map_err(|e| e.at("curvature"))?;
    let gamma = christoffel_from_jets(&fields.metric).map_err(|e| e.at("curvature"))?;
    let proj = Projectors::from_fields(&fields).map_err(|e| e.at("projectors"))?;
    let frame = AdaptedFrame::build(&fields, &proj, sub.ell(), sub.frame.as_ref())
        .map_err(|e| e.at("frame"))?;
    let frame_values = frame.values();
    let n = sub.n1;
    let ell = sub.ell();
    let s = sub.s();
    let omega = tensors::connection(&fields, &gamma, &frame);
    let t_full = tensors::components(&omega, n, ell, Which::T);
    let a_full = tensors::components(&omega, n, ell, Which::A);
    let nabla_t = tensors::covariant_derivative(&omega, &frame_values, ell, Which::T);
    let nabla_a = tensors::covariant_derivative(&omega, &frame_values, ell, Which::A);
    let oneill = ONeillTensors::from_components(&t_full, &a_full, &nabla_t, ell, s);
    let riemann_frame = curvature.in_frame(&frame_values);
    let sums = sums(&riemann_frame, n, ell);
    let mut sp = SubmersionPoint {
        point: p.to_vec(),
        n,
        ell,
        s,
        curvature,
        jacobian: fields.jacobian.values(),
        frame,
        frame_values,
        omega,
        riemann_frame,
        t_full,
        a_full,
        nabla_t,
        nabla_a,
        tensors: oneill,
        sums,
        residuals: Residuals::default(),
    };
    sp.residuals = checks::compute(&sp, sub).map_err(|e| e.at("residuals"))?;
    Ok(sp)
}
