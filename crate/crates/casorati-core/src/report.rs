//! The full pointwise pipeline: analysis, Casorati extrema, space-form model
//! and inequality verdict.

use alloc::vec::Vec;

use crate::casorati::{delta_casorati, scalar_curvatures, CasoratiSet, ScalarCurvatures};
use crate::error::Result;
use crate::fixtures::Quantity;
use crate::numkit::SphereOptions;
use crate::submersion::{analyze, CurvatureSums, SpaceFormKind, Submersion, SubmersionPoint};
use crate::theorems::{
    equality_flags, model_riemann_residual, model_sums, proof_polynomials, structure_quantities,
    theorem_rhs, InequalityVerdict, ModelInputs, ProofPolynomials, SpaceFormModel,
    StructureQuantities, TheoremInputs, TheoremKind, TheoremRhs,
};
use crate::tolerances;

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub sphere: SphereOptions,
    /// Relative slack of the inequality verdict.
    pub tol_report: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            sphere: SphereOptions::default(),
            tol_report: tolerances::REPORT,
        }
    }
}

/// The declared space form checked against the computed curvature.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelReport {
    pub family: SpaceFormKind,
    pub c: Option<f64>,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub sums: CurvatureSums,
    /// Largest frame component of `R − R_model`.
    pub riemann_residual: f64,
    pub structure_algebraic: Option<f64>,
    pub structure_compatibility: Option<f64>,
}

impl ModelReport {
    /// Whether the declared model matches the computed curvature and the
    /// structure is a genuine one for the metric.
    pub fn consistent(&self, tol: f64) -> bool {
        self.riemann_residual <= tol
            && self.structure_algebraic.is_none_or(|r| r <= tol)
            && self.structure_compatibility.is_none_or(|r| r <= tol)
    }
}

#[derive(Clone, Debug)]
pub struct PointReport {
    pub analysis: SubmersionPoint,
    pub scalars: ScalarCurvatures,
    pub casorati: CasoratiSet,
    pub model: Option<ModelReport>,
    pub structure: Option<StructureQuantities>,
    pub theorem: TheoremRhs,
    /// Verdict of the general inequality with computed curvature.
    pub verdict: InequalityVerdict,
    pub polynomials: ProofPolynomials,
}

impl PointReport {
    pub fn inputs(&self) -> TheoremInputs<'_> {
        TheoremInputs {
            ell: self.analysis.ell,
            s: self.analysis.s,
            scalars: &self.scalars,
            casorati: &self.casorati,
            norms: &self.analysis.tensors.norms,
            delta_n: self.analysis.tensors.delta_n,
        }
    }

    /// The value of a named quantity, if this report has it.
    pub fn quantity(&self, q: Quantity) -> Option<f64> {
        let t = &self.analysis.tensors;
        let max_abs = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let in_range = |i: usize, j: usize, a: usize, rows: usize, depth: usize| {
            i < rows && j < rows && a < depth
        };
        Some(match q {
            Quantity::T(i, j, a) if in_range(i, j, a, t.ell, t.s) => t.t(i, j, a),
            Quantity::A(i, j, a) if in_range(i, j, a, t.s, t.ell) => t.a(i, j, a),
            Quantity::T(..) | Quantity::A(..) => return None,
            Quantity::MaxAbsT => max_abs(&t.t_h),
            Quantity::MaxAbsA => max_abs(&t.a_v),
            Quantity::NormTH => t.norms.t_h,
            Quantity::CasoratiV => self.casorati.c_v,
            Quantity::CasoratiH => self.casorati.c_h,
            Quantity::DeltaN => t.delta_n,
            Quantity::DeltaCV => self.casorati.delta_c_v,
            Quantity::HatDeltaCV => self.casorati.hat_delta_c_v,
            Quantity::C1 => self.model.as_ref()?.c1,
            Quantity::C2 => self.model.as_ref()?.c2,
            Quantity::C3 => self.model.as_ref()?.c3,
        })
    }
}

pub fn evaluate(sub: &Submersion, p: &[f64], kind: &TheoremKind, opts: &Options) -> Result<PointReport> {
    let analysis = analyze(sub, p)?;
    let t = &analysis.tensors;
    let scalars = scalar_curvatures(&analysis.sums, &t.norms, analysis.ell, analysis.s)
        .map_err(|e| e.at("scalar curvature"))?;
    let casorati = delta_casorati(t, &opts.sphere).map_err(|e| e.at("casorati"))?;
    let g = &analysis.curvature.metric;
    let model = SpaceFormModel::at(sub, p).map_err(|e| e.at("model"))?;
    let structure = model
        .as_ref()
        .and_then(|m| m.structure.as_ref())
        .map(|st| structure_quantities(st, &analysis.frame_values, analysis.ell, g));
    let model_report = match &model {
        Some(m) => {
            let sums = model_sums(m, &analysis.frame_values, analysis.ell, g).map_err(|e| e.at("model"))?;
            let riemann_residual =
                model_riemann_residual(m, &analysis.riemann_frame, &analysis.frame_values, g)
                    .map_err(|e| e.at("model"))?;
            Some(ModelReport {
                family: m.family,
                c: m.c,
                c1: m.c1,
                c2: m.c2,
                c3: m.c3,
                sums,
                riemann_residual,
                structure_algebraic: m.structure.as_ref().map(|s| s.algebraic_residual()),
                structure_compatibility: m.structure.as_ref().map(|s| s.compatibility_residual(g)),
            })
        }
        None => None,
    };
    let inputs = TheoremInputs {
        ell: analysis.ell,
        s: analysis.s,
        scalars: &scalars,
        casorati: &casorati,
        norms: &t.norms,
        delta_n: t.delta_n,
    };
    let model_inputs = match (&model, &model_report) {
        (Some(m), Some(r)) => Some(ModelInputs {
            model: m,
            structure: structure.as_ref(),
            sums: &r.sums,
        }),
        _ => None,
    };
    let theorem = theorem_rhs(kind, &inputs, model_inputs).map_err(|e| e.at("theorem"))?;
    let verdict = InequalityVerdict::new(inputs.lhs(), theorem.general, equality_flags(t), opts.tol_report);
    let polynomials = proof_polynomials(&inputs);
    Ok(PointReport {
        scalars,
        casorati,
        model: model_report,
        structure,
        theorem,
        verdict,
        polynomials,
        analysis,
    })
}

/// Evaluates a list of points, stopping at the first error.
pub fn evaluate_all(
    sub: &Submersion,
    points: &[Vec<f64>],
    kind: &TheoremKind,
    opts: &Options,
) -> Result<Vec<PointReport>> {
    points.iter().map(|p| evaluate(sub, p, kind, opts)).collect()
}
