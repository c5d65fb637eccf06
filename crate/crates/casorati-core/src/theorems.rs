//! Space-form curvature models, structure-tensor quantities and the right-hand
//! sides of the Casorati inequalities, with equality diagnostics.
//!
//! The general inequality is assembled from computed curvature and is the
//! reference. The space-form versions are evaluated twice: once exactly as
//! they are usually displayed and once re-derived from the model curvature,
//! so that any disagreement is visible.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::casorati::{CasoratiSet, ScalarCurvatures};
use crate::error::{Error, Result};
use crate::numkit::{symmetric_eigenvalues, Mat, SymMatrix};
use crate::submersion::spec::{CompiledSpaceForm, CompiledStructure};
use crate::submersion::{CurvatureSums, ONeillTensors, SpaceFormKind, StructureKind, Submersion, TensorNorms};
use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equality,
    Strict,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Equality => "equality",
            Verdict::Strict => "strict",
        }
    }
}

/// `J` or `(φ, ξ, η)` evaluated at a point. `matrix` maps coordinate vectors
/// to coordinate vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureAt {
    pub kind: StructureKind,
    pub matrix: Mat<f64>,
    pub xi: Option<Vec<f64>>,
    pub eta: Option<Vec<f64>>,
}

impl StructureAt {
    pub fn at(s: &CompiledStructure, p: &[f64]) -> Result<Self> {
        let n = p.len();
        let vals: Vec<f64> = s.matrix.iter().map(|b| b.eval(p)).collect::<Result<_>>()?;
        let vec_at = |v: &Option<Vec<crate::expr::Bound>>| -> Result<Option<Vec<f64>>> {
            v.as_ref().map(|v| v.iter().map(|b| b.eval(p)).collect()).transpose()
        };
        Ok(StructureAt {
            kind: s.kind,
            matrix: Mat { rows: n, cols: n, data: vals },
            xi: vec_at(&s.xi)?,
            eta: vec_at(&s.eta)?,
        })
    }

    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        self.matrix.matvec(z)
    }

    pub fn eta_of(&self, z: &[f64]) -> f64 {
        self.eta
            .as_ref()
            .map_or(0.0, |e| e.iter().zip(z).map(|(a, b)| a * b).sum())
    }

    /// `max|J² + I|`, or for a contact structure the largest of
    /// `|φ² + I − ξ⊗η|`, `|η(ξ) − 1|` and `|φξ|`.
    pub fn algebraic_residual(&self) -> f64 {
        let n = self.matrix.rows;
        let sq = self.matrix.mul(&self.matrix);
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut want = if i == j { -1.0 } else { 0.0 };
                if let (Some(xi), Some(eta)) = (&self.xi, &self.eta) {
                    want += xi[i] * eta[j];
                }
                r = r.max((sq.get(i, j) - want).abs());
            }
        }
        if let Some(xi) = &self.xi {
            r = r.max((self.eta_of(xi) - 1.0).abs());
            r = r.max(self.apply(xi).iter().fold(0.0, |m, x| m.max(x.abs())));
        }
        r
    }

    /// `max|g(φX, φY) − g(X, Y) + η(X)η(Y)|` over coordinate vectors.
    pub fn compatibility_residual(&self, g: &SymMatrix) -> f64 {
        let n = self.matrix.rows;
        let cols: Vec<Vec<f64>> = (0..n).map(|j| self.matrix.column(j)).collect();
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let (ei, ej) = (unit(n, i), unit(n, j));
                let v = g.inner(&cols[i], &cols[j]) - g.get(i, j) + self.eta_of(&ei) * self.eta_of(&ej);
                r = r.max(v.abs());
            }
        }
        r
    }
}

fn unit(n: usize, k: usize) -> Vec<f64> {
    let mut v = alloc::vec![0.0; n];
    v[k] = 1.0;
    v
}

/// A space form with its constants evaluated at a point. Every family is
/// written as `c1·(real part) + c2·(structure part) + c3·(contact part)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceFormModel {
    pub family: SpaceFormKind,
    /// The family parameter `c` where the family has one.
    pub c: Option<f64>,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub structure: Option<StructureAt>,
}

impl SpaceFormModel {
    /// `(c1, c2, c3)` for a Table-1 style family with parameter `c`.
    pub fn reduce(family: SpaceFormKind, c: f64, alpha: f64) -> (f64, f64, f64) {
        match family {
            SpaceFormKind::Real => (c, 0.0, 0.0),
            SpaceFormKind::Complex => (c / 4.0, c / 4.0, 0.0),
            SpaceFormKind::Sasakian => ((c + 3.0) / 4.0, (c - 1.0) / 4.0, (c - 1.0) / 4.0),
            SpaceFormKind::Kenmotsu => ((c - 3.0) / 4.0, (c + 1.0) / 4.0, (c + 1.0) / 4.0),
            SpaceFormKind::Cosymplectic => (c / 4.0, c / 4.0, c / 4.0),
            SpaceFormKind::CAlpha => {
                let a2 = alpha * alpha;
                ((c + 3.0 * a2) / 4.0, (c - a2) / 4.0, (c - a2) / 4.0)
            }
            SpaceFormKind::GeneralizedSasakian => (0.0, 0.0, 0.0),
        }
    }

    pub fn from_compiled(
        f: &CompiledSpaceForm,
        structure: Option<&CompiledStructure>,
        p: &[f64],
    ) -> Result<Self> {
        let need = |b: &Option<crate::expr::Bound>, what: &str| -> Result<f64> {
            match b {
                Some(b) => b.eval(p),
                None => Err(Error::Invalid(format!(
                    "{} space form needs the constant `{what}`",
                    f.kind.name()
                ))),
            }
        };
        let (c, c1, c2, c3) = match f.kind {
            SpaceFormKind::GeneralizedSasakian => {
                (None, need(&f.c1, "c1")?, need(&f.c2, "c2")?, need(&f.c3, "c3")?)
            }
            kind => {
                let c = need(&f.c, "c")?;
                let alpha = if kind == SpaceFormKind::CAlpha { need(&f.alpha, "alpha")? } else { 0.0 };
                let (c1, c2, c3) = Self::reduce(kind, c, alpha);
                (Some(c), c1, c2, c3)
            }
        };
        let structure = structure.map(|s| StructureAt::at(s, p)).transpose()?;
        let wanted = match f.kind {
            SpaceFormKind::Real => None,
            SpaceFormKind::Complex => Some(StructureKind::Complex),
            _ => Some(StructureKind::Contact),
        };
        if let Some(kind) = wanted {
            if structure.as_ref().map(|s| s.kind) != Some(kind) {
                return Err(Error::Invalid(format!(
                    "{} space form needs a {} structure",
                    f.kind.name(),
                    if kind == StructureKind::Complex { "complex" } else { "contact" }
                )));
            }
        }
        Ok(SpaceFormModel {
            family: f.kind,
            c,
            c1,
            c2,
            c3,
            structure,
        })
    }

    /// The model declared by a submersion, if any.
    pub fn at(sub: &Submersion, p: &[f64]) -> Result<Option<Self>> {
        sub.space_form
            .as_ref()
            .map(|f| Self::from_compiled(f, sub.structure.as_ref(), p))
            .transpose()
    }
}

/// `R(Z1, Z2)Z3` of the model.
pub fn model_curvature(
    m: &SpaceFormModel,
    z1: &[f64],
    z2: &[f64],
    z3: &[f64],
    g: &SymMatrix,
) -> Result<Vec<f64>> {
    let n = z1.len();
    let mut out = alloc::vec![0.0; n];
    let mut add = |k: f64, v: &[f64]| {
        for (o, x) in out.iter_mut().zip(v) {
            *o += k * x;
        }
    };
    add(m.c1 * g.inner(z2, z3), z1);
    add(-m.c1 * g.inner(z1, z3), z2);
    if m.c2 != 0.0 || m.c3 != 0.0 {
        let st = m.structure.as_ref().ok_or_else(|| {
            Error::Invalid(format!("{} model curvature needs a structure tensor", m.family.name()))
        })?;
        let (p1, p2, p3) = (st.apply(z1), st.apply(z2), st.apply(z3));
        add(m.c2 * g.inner(z1, &p3), &p2);
        add(-m.c2 * g.inner(z2, &p3), &p1);
        add(2.0 * m.c2 * g.inner(z1, &p2), &p3);
        if m.c3 != 0.0 {
            let xi = st
                .xi
                .as_ref()
                .ok_or_else(|| Error::Invalid("contact model curvature needs xi".into()))?;
            let (e1, e2, e3) = (st.eta_of(z1), st.eta_of(z2), st.eta_of(z3));
            add(m.c3 * e1 * e3, z2);
            add(-m.c3 * e2 * e3, z1);
            add(m.c3 * g.inner(z1, z3) * e2, xi);
            add(-m.c3 * g.inner(z2, z3) * e1, xi);
        }
    }
    Ok(out)
}

/// Sectional sums of the model over an orthonormal frame, vertical first.
pub fn model_sums(
    m: &SpaceFormModel,
    frame: &[Vec<f64>],
    ell: usize,
    g: &SymMatrix,
) -> Result<CurvatureSums> {
    let mut out = CurvatureSums::default();
    for (a, ea) in frame.iter().enumerate() {
        for (b, eb) in frame.iter().enumerate() {
            if a == b {
                continue;
            }
            let v = g.inner(&model_curvature(m, ea, eb, eb, g)?, ea);
            out.two_tau += v;
            match (a < ell, b < ell) {
                (true, true) => out.two_tau_v += v,
                (false, false) => out.two_tau_h += v,
                (false, true) => out.mixed += v,
                (true, false) => {}
            }
        }
    }
    Ok(out)
}

/// `max |R(e_a, e_b, e_c, e_d) − g(R_model(e_a, e_b)e_c, e_d)|`.
pub fn model_riemann_residual(
    m: &SpaceFormModel,
    riemann_frame: &[f64],
    frame: &[Vec<f64>],
    g: &SymMatrix,
) -> Result<f64> {
    let n = frame.len();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let r = model_curvature(m, &frame[a], &frame[b], &frame[c], g)?;
                for d in 0..n {
                    let want = riemann_frame[((a * n + b) * n + c) * n + d];
                    worst = worst.max((g.inner(&r, &frame[d]) - want).abs());
                }
            }
        }
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XiPosition {
    Vertical,
    Horizontal,
    Oblique,
}

impl XiPosition {
    pub fn name(self) -> &'static str {
        match self {
            XiPosition::Vertical => "vertical",
            XiPosition::Horizontal => "horizontal",
            XiPosition::Oblique => "oblique",
        }
    }
}

/// Pointwise slant data of the vertical space.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SlantSummary {
    /// Eigenvalues of `QᵀQ` on the vertical space (with `ξ` removed when it is
    /// vertical), ascending. Each is `cos²θ` for a principal direction.
    pub cos2: Vec<f64>,
    /// Principal angles in radians, descending.
    pub angles: Vec<f64>,
    /// Distinct angles and their multiplicities.
    pub classes: Vec<(f64, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureQuantities {
    /// `Σ_ij g(P h_i, h_j)²`.
    pub norm_p_sq: f64,
    /// `Σ_ij g(Q v_i, v_j)²`.
    pub norm_q_sq: f64,
    /// `Σ_ij g(P v_i, h_j)²`.
    pub norm_pv_sq: f64,
    pub xi_position: Option<XiPosition>,
    pub slant: SlantSummary,
}

pub fn structure_quantities(
    st: &StructureAt,
    frame: &[Vec<f64>],
    ell: usize,
    g: &SymMatrix,
) -> StructureQuantities {
    let (vert, hor) = frame.split_at(ell);
    let images: Vec<Vec<f64>> = frame.iter().map(|e| st.apply(e)).collect();
    let (img_v, img_h) = images.split_at(ell);
    let sum_sq = |from: &[Vec<f64>], onto: &[Vec<f64>]| -> f64 {
        from.iter()
            .flat_map(|x| onto.iter().map(move |y| g.inner(x, y)))
            .map(|v| v * v)
            .sum()
    };
    let xi_position = st.xi.as_ref().map(|xi| {
        let norm = libm::sqrt(g.inner(xi, xi));
        let part = |basis: &[Vec<f64>]| {
            libm::sqrt(basis.iter().map(|e| { let v = g.inner(xi, e); v * v }).sum::<f64>())
        };
        if part(hor) < tolerances::RANK * norm {
            XiPosition::Vertical
        } else if part(vert) < tolerances::RANK * norm {
            XiPosition::Horizontal
        } else {
            XiPosition::Oblique
        }
    });
    // QᵀQ in the vertical frame.
    let q = Mat::from_fn(ell, ell, |k, j| g.inner(&img_v[j], &vert[k]));
    let b = q.transpose().mul(&q);
    let mut cos2: Vec<f64> = symmetric_eigenvalues(&b).into_iter().map(|x| x.clamp(0.0, 1.0)).collect();
    if xi_position == Some(XiPosition::Vertical) && !cos2.is_empty() {
        cos2.remove(0);
    }
    let angles: Vec<f64> = cos2.iter().map(|c| libm::acos(libm::sqrt(*c))).collect();
    let mut classes: Vec<(f64, usize)> = Vec::new();
    for &a in &angles {
        match classes.last_mut() {
            Some((b, k)) if (a - *b).abs() < 1e-6 => *k += 1,
            _ => classes.push((a, 1)),
        }
    }
    StructureQuantities {
        norm_p_sq: sum_sq(img_h, hor),
        norm_q_sq: sum_sq(img_v, vert),
        norm_pv_sq: sum_sq(img_v, hor),
        xi_position,
        slant: SlantSummary { cos2, angles, classes },
    }
}

/// Declared slant class of the vertical distribution. Angles are in radians
/// and `d1`, `d2` are half the dimensions of the two slant distributions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SlantClass {
    Invariant,
    AntiInvariant,
    Slant { theta: f64 },
    SemiSlant { d1: usize, d2: usize, theta2: f64 },
    HemiSlant { d1: usize, d2: usize, theta2: f64 },
    BiSlant { d1: usize, d2: usize, theta1: f64, theta2: f64 },
}

fn weight(theta: f64) -> f64 {
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    c * c + 2.0 * s * s
}

impl SlantClass {
    /// The value that replaces `‖Q‖² + 2‖P^V‖²` when the vertical space,
    /// less `ξ`, has dimension `dim`.
    pub fn structure_term(&self, dim: usize) -> Result<f64> {
        let check = |d1: usize, d2: usize| {
            if 2 * (d1 + d2) != dim {
                Err(Error::Invalid(format!(
                    "slant distributions of dimensions {} and {} do not fill a space of dimension {dim}",
                    2 * d1,
                    2 * d2
                )))
            } else {
                Ok(())
            }
        };
        let dim_f = dim as f64;
        Ok(match *self {
            SlantClass::Invariant => dim_f,
            SlantClass::AntiInvariant => 2.0 * dim_f,
            SlantClass::Slant { theta } => dim_f * weight(theta),
            SlantClass::SemiSlant { d1, d2, theta2 } => {
                check(d1, d2)?;
                2.0 * d1 as f64 + 2.0 * d2 as f64 * weight(theta2)
            }
            SlantClass::HemiSlant { d1, d2, theta2 } => {
                check(d1, d2)?;
                4.0 * d1 as f64 + 2.0 * d2 as f64 * weight(theta2)
            }
            SlantClass::BiSlant { d1, d2, theta1, theta2 } => {
                check(d1, d2)?;
                2.0 * d1 as f64 * weight(theta1) + 2.0 * d2 as f64 * weight(theta2)
            }
        })
    }

    fn parse(parts: &[&str]) -> Result<Self> {
        let bad = || Error::Invalid(format!("cannot read corollary class `{}`", parts.join(":")));
        let f = |s: &str| s.parse::<f64>().map_err(|_| bad());
        let u = |s: &str| s.parse::<usize>().map_err(|_| bad());
        Ok(match parts {
            ["invariant"] => SlantClass::Invariant,
            ["anti_invariant"] => SlantClass::AntiInvariant,
            ["slant", t] => SlantClass::Slant { theta: f(t)? },
            ["semi_slant", a, b, t] => SlantClass::SemiSlant { d1: u(a)?, d2: u(b)?, theta2: f(t)? },
            ["hemi_slant", a, b, t] => SlantClass::HemiSlant { d1: u(a)?, d2: u(b)?, theta2: f(t)? },
            ["bi_slant", a, b, t1, t2] => SlantClass::BiSlant {
                d1: u(a)?,
                d2: u(b)?,
                theta1: f(t1)?,
                theta2: f(t2)?,
            },
            _ => return Err(bad()),
        })
    }

    pub fn label(&self) -> String {
        match *self {
            SlantClass::Invariant => "invariant".into(),
            SlantClass::AntiInvariant => "anti_invariant".into(),
            SlantClass::Slant { theta } => format!("slant:{theta}"),
            SlantClass::SemiSlant { d1, d2, theta2 } => format!("semi_slant:{d1}:{d2}:{theta2}"),
            SlantClass::HemiSlant { d1, d2, theta2 } => format!("hemi_slant:{d1}:{d2}:{theta2}"),
            SlantClass::BiSlant { d1, d2, theta1, theta2 } => {
                format!("bi_slant:{d1}:{d2}:{theta1}:{theta2}")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TheoremKind {
    General,
    /// Real space form.
    Rsf,
    /// Complex space form.
    Csf,
    /// Generalized Sasakian space form, including the Table-1 families.
    Gssf,
    Corollary(SlantClass),
}

impl TheoremKind {
    /// Reads `general`, `rsf`, `csf`, `gssf` or `corollary:CLASS[:params]`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        Ok(match parts.as_slice() {
            ["general"] => TheoremKind::General,
            ["rsf"] => TheoremKind::Rsf,
            ["csf"] => TheoremKind::Csf,
            ["gssf"] => TheoremKind::Gssf,
            ["corollary", rest @ ..] => TheoremKind::Corollary(SlantClass::parse(rest)?),
            _ => return Err(Error::Invalid(format!("unknown theorem kind `{s}`"))),
        })
    }

    pub fn label(&self) -> String {
        match self {
            TheoremKind::General => "general".into(),
            TheoremKind::Rsf => "rsf".into(),
            TheoremKind::Csf => "csf".into(),
            TheoremKind::Gssf => "gssf".into(),
            TheoremKind::Corollary(c) => format!("corollary:{}", c.label()),
        }
    }
}

/// Right-hand sides of the `δ_C` and `δ̂_C` inequalities.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RhsPair {
    pub delta: f64,
    pub hat: f64,
}

impl RhsPair {
    fn plus(self, x: f64) -> RhsPair {
        RhsPair {
            delta: self.delta + x,
            hat: self.hat + x,
        }
    }

    pub fn max_abs_diff(&self, o: &RhsPair) -> f64 {
        (self.delta - o.delta).abs().max((self.hat - o.hat).abs())
    }
}

/// Everything the inequalities are assembled from.
#[derive(Clone, Copy, Debug)]
pub struct TheoremInputs<'a> {
    pub ell: usize,
    pub s: usize,
    pub scalars: &'a ScalarCurvatures,
    pub casorati: &'a CasoratiSet,
    pub norms: &'a TensorNorms,
    pub delta_n: f64,
}

impl TheoremInputs<'_> {
    fn dims(&self) -> (f64, f64) {
        (self.ell as f64, self.s as f64)
    }

    /// `sℓ(s−1)(ℓ−1)`.
    pub fn denominator(&self) -> f64 {
        let (l, s) = self.dims();
        s * l * (s - 1.0) * (l - 1.0)
    }

    /// `ρ^H/(ℓ(ℓ−1)) + ρ^V/(s(s−1))`.
    pub fn lhs(&self) -> f64 {
        let (l, s) = self.dims();
        self.scalars.rho_h / (l * (l - 1.0)) + self.scalars.rho_v / (s * (s - 1.0))
    }

    /// The `δ(N)` block `(2δ(N) − ‖T^V‖² + ‖A^H‖²)/D`.
    pub fn block(&self) -> f64 {
        (2.0 * self.delta_n - self.norms.t_v + self.norms.a_h) / self.denominator()
    }

    /// δ-Casorati terms plus the `δ(N)` block.
    pub fn base(&self) -> RhsPair {
        let (l, s) = self.dims();
        let c = self.casorati;
        RhsPair {
            delta: c.delta_c_v / (s * (s - 1.0)) + c.delta_c_h / (l * (l - 1.0)),
            hat: c.hat_delta_c_v / (s * (s - 1.0)) + c.hat_delta_c_h / (l * (l - 1.0)),
        }
        .plus(self.block())
    }

    /// General right-hand side for the given ambient sectional sums.
    pub fn with_sums(&self, two_tau_v: f64, two_tau_h: f64, mixed: f64) -> RhsPair {
        self.base().plus((two_tau_v + two_tau_h + 2.0 * mixed) / self.denominator())
    }

    /// General right-hand side from the computed ambient curvature.
    pub fn general(&self) -> RhsPair {
        let (l, s) = self.dims();
        let sc = self.scalars;
        self.base().plus(
            sc.rho_v_n1 / (s * (s - 1.0))
                + sc.rho_h_n1 / (l * (l - 1.0))
                + 2.0 * sc.mixed_sum / self.denominator(),
        )
    }
}

/// Which displayed right-hand side deviates from its re-derivation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Discrepancy {
    /// The mixed term of the real space-form display lacks the factor `c`.
    RsfMixedTerm,
    /// The `δ̂_C` displays for contact space forms carry an extra
    /// `ρ_V^{N1}/(s(s−1))`.
    GssfStrayRho,
}

impl Discrepancy {
    pub fn name(self) -> &'static str {
        match self {
            Discrepancy::RsfMixedTerm => "rsf_mixed_term_missing_c",
            Discrepancy::GssfStrayRho => "gssf_extra_rho_v_term",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremRhs {
    pub kind: TheoremKind,
    /// General form with computed curvature; the reference.
    pub general: RhsPair,
    /// General form with the model's sectional sums substituted.
    pub model_general: Option<RhsPair>,
    /// Specialized closed form re-derived from the model.
    pub consistent: Option<RhsPair>,
    /// Specialized closed form as displayed.
    pub displayed: Option<RhsPair>,
    pub discrepancy: Option<Discrepancy>,
}

/// Model data a specialized right-hand side needs.
#[derive(Clone, Copy, Debug)]
pub struct ModelInputs<'a> {
    pub model: &'a SpaceFormModel,
    pub structure: Option<&'a StructureQuantities>,
    pub sums: &'a CurvatureSums,
}

pub fn theorem_rhs(
    kind: &TheoremKind,
    inp: &TheoremInputs,
    model: Option<ModelInputs>,
) -> Result<TheoremRhs> {
    let general = inp.general();
    let mut out = TheoremRhs {
        kind: *kind,
        general,
        model_general: None,
        consistent: None,
        displayed: None,
        discrepancy: None,
    };
    if *kind == TheoremKind::General {
        return Ok(out);
    }
    let mi = model.ok_or_else(|| {
        Error::Invalid(format!("theorem kind `{}` needs a space form", kind.label()))
    })?;
    let m = mi.model;
    out.model_general = Some(inp.with_sums(mi.sums.two_tau_v, mi.sums.two_tau_h, mi.sums.mixed));
    let (l, s) = inp.dims();
    let d = inp.denominator();
    let k = l * l + s * s + 2.0 * s * l - l - s;
    let base = inp.base();
    let family_is = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "theorem kind `{}` needs a {what} space form, found {}",
                kind.label(),
                m.family.name()
            )))
        }
    };
    let sq = || {
        mi.structure.ok_or_else(|| {
            Error::Invalid(format!("theorem kind `{}` needs a structure tensor", kind.label()))
        })
    };
    let xi_vertical = || -> Result<bool> {
        match sq()?.xi_position {
            Some(XiPosition::Vertical) => Ok(true),
            Some(XiPosition::Horizontal) => Ok(false),
            _ => Err(Error::Invalid(
                "contact space-form theorems need xi vertical or horizontal at the point".into(),
            )),
        }
    };
    // Model ρ_V^{N1}, the term that appears once more in the contact displays.
    let rho_v_model = |q: f64, xi_v: bool| {
        m.c1 + 3.0 * m.c2 * q / (l * (l - 1.0)) - if xi_v { 2.0 / l * m.c3 } else { 0.0 }
    };
    match kind {
        TheoremKind::General => unreachable!(),
        TheoremKind::Rsf => {
            family_is(m.family == SpaceFormKind::Real, "real")?;
            let c = m.c1;
            let tail = c / (s * (s - 1.0)) + c / (l * (l - 1.0));
            out.consistent = Some(base.plus(tail + 2.0 * c / ((s - 1.0) * (l - 1.0))));
            out.displayed = Some(base.plus(tail + 2.0 / ((s - 1.0) * (l - 1.0))));
            out.discrepancy = Some(Discrepancy::RsfMixedTerm);
        }
        TheoremKind::Csf => {
            family_is(m.family == SpaceFormKind::Complex, "complex")?;
            let st = sq()?;
            let c = m.c.unwrap_or(4.0 * m.c1);
            let v = base.plus(
                c / 4.0 * k / d + 3.0 * c / 4.0 * (st.norm_q_sq + st.norm_p_sq + 2.0 * st.norm_pv_sq) / d,
            );
            out.consistent = Some(v);
            out.displayed = Some(v);
        }
        TheoremKind::Gssf => {
            family_is(m.family.is_contact(), "contact")?;
            let st = sq()?;
            let xi_v = xi_vertical()?;
            let v = base.plus(
                m.c1 * k / d + 3.0 * m.c2 * (st.norm_q_sq + st.norm_p_sq + 2.0 * st.norm_pv_sq) / d
                    - 2.0 * m.c3 * (l + s - 1.0) / d,
            );
            out.consistent = Some(v);
            out.displayed = Some(RhsPair {
                delta: v.delta,
                hat: v.hat + rho_v_model(st.norm_q_sq, xi_v) / (s * (s - 1.0)),
            });
            out.discrepancy = Some(Discrepancy::GssfStrayRho);
        }
        TheoremKind::Corollary(class) => {
            let st = sq()?;
            match m.family {
                SpaceFormKind::Real => family_is(false, "complex or contact")?,
                SpaceFormKind::Complex => {
                    let c = m.c.unwrap_or(4.0 * m.c1);
                    let x = class.structure_term(inp.ell)?;
                    let v = base.plus(c / 4.0 * k / d + 3.0 * c / 4.0 * (st.norm_p_sq + x) / d);
                    out.consistent = Some(v);
                    out.displayed = Some(v);
                }
                _ => {
                    let xi_v = xi_vertical()?;
                    let x = class.structure_term(if xi_v { inp.ell - 1 } else { inp.ell })?;
                    let v = base.plus(
                        m.c1 * k / d + 3.0 * m.c2 * (st.norm_p_sq + x) / d - 2.0 * m.c3 * (l + s - 1.0) / d,
                    );
                    out.consistent = Some(v);
                    out.displayed = Some(RhsPair {
                        delta: v.delta,
                        hat: v.hat + rho_v_model(st.norm_q_sq, xi_v) / (s * (s - 1.0)),
                    });
                    out.discrepancy = Some(Discrepancy::GssfStrayRho);
                }
            }
        }
    }
    Ok(out)
}

/// The three displayed equality conditions, read in the adapted frame, plus
/// a frame-free version of the first two.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EqualityFlags {
    /// `T_11^{H^α} = … = T_{ℓ−1 ℓ−1}^{H^α} = ½T_ℓℓ^{H^α}` for every α.
    pub quasi_umbilical: bool,
    /// `T_ij^{H^α} = 0` for `i ≠ j`.
    pub off_diagonal_zero: bool,
    /// `A_ij^{V^α} = 0`.
    pub a_zero: bool,
    /// Some orthonormal vertical frame satisfies the first two conditions:
    /// `T^{H^α} = λ_α(I + eeᵀ)` for one unit vector `e`.
    pub quasi_umbilical_any_frame: bool,
}

impl EqualityFlags {
    pub fn all(&self) -> bool {
        self.quasi_umbilical && self.off_diagonal_zero && self.a_zero
    }
}

pub fn equality_flags(t: &ONeillTensors) -> EqualityFlags {
    let tol = tolerances::EQUALITY_FLAG;
    let l = t.ell;
    let mut quasi = true;
    let mut off = true;
    for alpha in 0..t.s {
        let last = 0.5 * t.t(l - 1, l - 1, alpha);
        for i in 0..l {
            if i + 1 < l && (t.t(i, i, alpha) - last).abs() > tol {
                quasi = false;
            }
            for j in 0..l {
                if i != j && t.t(i, j, alpha).abs() > tol {
                    off = false;
                }
            }
        }
    }
    EqualityFlags {
        quasi_umbilical: quasi,
        off_diagonal_zero: off,
        a_zero: t.a_v.iter().all(|x| x.abs() <= tol),
        quasi_umbilical_any_frame: umbilic_form(t, tol),
    }
}

/// Whether every slice has the form `λ_α(I + eeᵀ)` with a shared unit `e`.
fn umbilic_form(t: &ONeillTensors, tol: f64) -> bool {
    let l = t.ell;
    let slices: Vec<Vec<f64>> = (0..t.s).map(|a| t.t_slice(a)).collect();
    let lambdas: Vec<f64> = slices
        .iter()
        .map(|m| (0..l).map(|i| m[i * l + i]).sum::<f64>() / (l as f64 + 1.0))
        .collect();
    let weight: f64 = lambdas.iter().map(|x| x * x).sum();
    if weight < tol * tol {
        return slices.iter().flatten().all(|x| x.abs() <= tol);
    }
    // Σ λ_α (M_α − λ_α I) = (Σ λ_α²) eeᵀ
    let mut e_outer = alloc::vec![0.0; l * l];
    for (m, lam) in slices.iter().zip(&lambdas) {
        for i in 0..l {
            for j in 0..l {
                let r = m[i * l + j] - if i == j { *lam } else { 0.0 };
                e_outer[i * l + j] += lam * r / weight;
            }
        }
    }
    let pivot = (0..l)
        .max_by(|&a, &b| e_outer[a * l + a].total_cmp(&e_outer[b * l + b]))
        .unwrap();
    let pv = e_outer[pivot * l + pivot];
    if pv <= 0.0 {
        return false;
    }
    let e: Vec<f64> = (0..l).map(|i| e_outer[i * l + pivot] / libm::sqrt(pv)).collect();
    slices.iter().zip(&lambdas).all(|(m, lam)| {
        (0..l).all(|i| {
            (0..l).all(|j| {
                let want = lam * (if i == j { 1.0 } else { 0.0 } + e[i] * e[j]);
                (m[i * l + j] - want).abs() <= tol
            })
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InequalityVerdict {
    pub lhs: f64,
    pub rhs_delta: f64,
    pub rhs_hat: f64,
    pub gap_delta: f64,
    pub gap_hat: f64,
    pub tol_report: f64,
    /// `lhs ≤ rhs + tol_report·max(1, |rhs|)`.
    pub holds_delta: bool,
    pub holds_hat: bool,
    pub flags: EqualityFlags,
    /// Equality when both gaps vanish to `EQUALITY_GAP·max(1, |rhs|)`.
    pub verdict: Verdict,
}

impl InequalityVerdict {
    pub fn new(lhs: f64, rhs: RhsPair, flags: EqualityFlags, tol_report: f64) -> Self {
        let slack = |r: f64| tol_report * r.abs().max(1.0);
        let small = |gap: f64, r: f64| gap.abs() <= tolerances::EQUALITY_GAP * r.abs().max(1.0);
        let (gap_delta, gap_hat) = (rhs.delta - lhs, rhs.hat - lhs);
        let equality = small(gap_delta, rhs.delta) && small(gap_hat, rhs.hat);
        InequalityVerdict {
            lhs,
            rhs_delta: rhs.delta,
            rhs_hat: rhs.hat,
            gap_delta,
            gap_hat,
            tol_report,
            holds_delta: gap_delta >= -slack(rhs.delta),
            holds_hat: gap_hat >= -slack(rhs.hat),
            flags,
            verdict: if equality { Verdict::Equality } else { Verdict::Strict },
        }
    }

    pub fn holds(&self) -> bool {
        self.holds_delta && self.holds_hat
    }
}

/// The two quadratic polynomials whose non-negativity gives the inequalities,
/// evaluated at the extremal hyperplanes.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ProofPolynomials {
    pub p_hv: f64,
    pub q_hv: f64,
    /// The reduced form of `P^HV` obtained by inserting the scalar identity
    /// with the signs `+3sC^H` and `−2δ(N) + ‖T^V‖² − ‖A^H‖²`.
    pub p_hv_reduced: f64,
}

pub fn proof_polynomials(inp: &TheoremInputs) -> ProofPolynomials {
    let (l, s) = inp.dims();
    let c = inp.casorati;
    let sc = inp.scalars;
    let n = inp.norms;
    let common = 2.0 * sc.tau_m1 + 2.0 * inp.delta_n - n.t_v + n.a_h
        - 2.0 * sc.tau_h_perp
        - 2.0 * sc.tau_v_ker;
    let p_hv = 0.5 * l * (l - 1.0) * c.c_v
        + 0.5 * s * (s - 1.0) * c.c_h
        + 0.5 * (l * l - 1.0) * c.inf_cl_v.value
        + 0.5 * (s * s - 1.0) * c.inf_cl_h.value
        + common;
    let q_hv = 2.0 * l * (l - 1.0) * c.c_v + 2.0 * s * (s - 1.0) * c.c_h
        - 0.5 * (l - 1.0) * (2.0 * l - 1.0) * c.sup_cl_v.value
        - 0.5 * (s - 1.0) * (2.0 * s - 1.0) * c.sup_cl_h.value
        + common;
    let p_hv_reduced = 0.5 * l * (l - 1.0) * c.c_v
        + 0.5 * s * (s - 1.0) * c.c_h
        + 0.5 * (l * l - 1.0) * c.inf_cl_v.value
        + 0.5 * (s * s - 1.0) * c.inf_cl_h.value
        - n.trace_t
        + l * c.c_v
        - n.trace_a
        + 3.0 * s * c.c_h;
    ProofPolynomials {
        p_hv,
        q_hv,
        p_hv_reduced,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn euclid(n: usize) -> SymMatrix {
        SymMatrix::new(Mat::identity(n)).unwrap()
    }

    fn frame(n: usize) -> Vec<Vec<f64>> {
        (0..n).map(|k| unit(n, k)).collect()
    }

    /// Standard `J` on `R^{2m}`: `J∂_{2k} = ∂_{2k+1}`.
    fn complex_j(n: usize) -> StructureAt {
        let mut m = Mat::zeros(n, n);
        for k in 0..n / 2 {
            m.set(2 * k + 1, 2 * k, 1.0);
            m.set(2 * k, 2 * k + 1, -1.0);
        }
        StructureAt {
            kind: StructureKind::Complex,
            matrix: m,
            xi: None,
            eta: None,
        }
    }

    /// `φ` on `R^{2m+1}` with `ξ = ∂_0` and `J` on the remaining coordinates.
    fn contact(n: usize) -> StructureAt {
        let mut m = Mat::zeros(n, n);
        for k in 0..(n - 1) / 2 {
            m.set(2 * k + 2, 2 * k + 1, 1.0);
            m.set(2 * k + 1, 2 * k + 2, -1.0);
        }
        StructureAt {
            kind: StructureKind::Contact,
            matrix: m,
            xi: Some(unit(n, 0)),
            eta: Some(unit(n, 0)),
        }
    }

    fn model(family: SpaceFormKind, c1: f64, c2: f64, c3: f64, st: Option<StructureAt>) -> SpaceFormModel {
        SpaceFormModel {
            family,
            c: None,
            c1,
            c2,
            c3,
            structure: st,
        }
    }

    #[test]
    fn flat_real_model_vanishes() {
        let m = model(SpaceFormKind::Real, 0.0, 0.0, 0.0, None);
        let g = euclid(3);
        let r = model_curvature(&m, &[1.0, 2.0, 0.0], &[0.0, 1.0, 3.0], &[1.0, 0.0, 1.0], &g).unwrap();
        assert_eq!(r, vec![0.0; 3]);
    }

    #[test]
    fn complex_model_holomorphic_curvature_is_c() {
        let c = 2.5;
        let (c1, c2, c3) = SpaceFormModel::reduce(SpaceFormKind::Complex, c, 0.0);
        let m = model(SpaceFormKind::Complex, c1, c2, c3, Some(complex_j(4)));
        let g = euclid(4);
        let z = [0.6, 0.0, 0.0, 0.8];
        let jz = m.structure.as_ref().unwrap().apply(&z);
        let r = model_curvature(&m, &z, &jz, &jz, &g).unwrap();
        assert!((g.inner(&r, &z) - c).abs() < 1e-14);
    }

    #[test]
    fn contact_model_with_xi_keeps_only_c1_and_c3() {
        let (c1, c2, c3) = (0.3, 1.7, -0.4);
        let st = contact(5);
        let m = model(SpaceFormKind::GeneralizedSasakian, c1, c2, c3, Some(st.clone()));
        let g = euclid(5);
        let x = [0.0, 0.6, 0.8, 0.0, 0.0];
        let xi = unit(5, 0);
        let r = model_curvature(&m, &x, &xi, &xi, &g).unwrap();
        // R(X, ξ)ξ = (c1 − c3) X for unit X ⊥ ξ.
        for (a, b) in r.iter().zip(&x) {
            assert!((a - (c1 - c3) * b).abs() < 1e-15);
        }
        assert!(st.algebraic_residual() < 1e-15);
        assert!(st.compatibility_residual(&g) < 1e-15);
    }

    #[test]
    fn table_one_reductions() {
        assert_eq!(SpaceFormModel::reduce(SpaceFormKind::Sasakian, 1.0, 0.0), (1.0, 0.0, 0.0));
        assert_eq!(SpaceFormModel::reduce(SpaceFormKind::Kenmotsu, -1.0, 0.0), (-1.0, 0.0, 0.0));
        assert_eq!(SpaceFormModel::reduce(SpaceFormKind::Cosymplectic, 2.0, 0.0), (0.5, 0.5, 0.5));
        assert_eq!(SpaceFormModel::reduce(SpaceFormKind::CAlpha, 1.0, 1.0), (1.0, 0.0, 0.0));
    }

    #[test]
    fn invariant_and_anti_invariant_norms() {
        let g = euclid(6);
        let st = complex_j(6);
        // invariant: vertical = span{∂0, ∂1}, horizontal the rest
        let q = structure_quantities(&st, &frame(6), 2, &g);
        assert!((q.norm_q_sq - 2.0).abs() < 1e-14);
        assert_eq!(q.norm_pv_sq, 0.0);
        assert_eq!(q.slant.classes, vec![(0.0, 2)]);
        // anti-invariant: vertical = span{∂0, ∂2, ∂4}
        let perm: Vec<Vec<f64>> = [0, 2, 4, 1, 3, 5].iter().map(|&k| unit(6, k)).collect();
        let q = structure_quantities(&st, &perm, 3, &g);
        assert_eq!(q.norm_q_sq, 0.0);
        assert!((q.norm_pv_sq - 3.0).abs() < 1e-14);
        assert!((q.slant.angles[0] - core::f64::consts::FRAC_PI_2).abs() < 1e-7);
    }

    #[test]
    fn contact_slant_with_vertical_xi() {
        // ℓ = 5 with ξ vertical and two pairs rotated by θ = π/3 out of φ-invariance.
        let theta = core::f64::consts::FRAC_PI_3;
        let (c, s) = (libm::cos(theta), libm::sin(theta));
        let n = 9;
        let st = contact(n);
        let g = euclid(n);
        // pairs (1,2), (3,4) mixed with (5,6), (7,8): v = cos·∂x + sin·∂u style
        let mut vert = vec![unit(n, 0)];
        let mut hor = Vec::new();
        for (a, b) in [(1usize, 5usize), (3, 7)] {
            // X = ∂a, Y = c ∂(a+1) + s ∂(b)
            let x = unit(n, a);
            let mut y = vec![0.0; n];
            y[a + 1] = c;
            y[b] = s;
            let mut yp = vec![0.0; n];
            yp[a + 1] = -s;
            yp[b] = c;
            vert.push(x);
            vert.push(y);
            hor.push(yp);
            hor.push(unit(n, b + 1));
        }
        let fr: Vec<Vec<f64>> = vert.into_iter().chain(hor).collect();
        let q = structure_quantities(&st, &fr, 5, &g);
        assert_eq!(q.xi_position, Some(XiPosition::Vertical));
        assert!((q.norm_q_sq - 4.0 * c * c).abs() < 1e-12, "{}", q.norm_q_sq);
        assert!((q.norm_q_sq - 1.0 * 4.0 / 4.0 * 4.0 * 0.25).abs() < 1e-12);
        assert_eq!(q.slant.classes.len(), 1);
        assert!((q.slant.classes[0].0 - theta).abs() < 1e-7);
        assert_eq!(q.slant.classes[0].1, 4);
        let x = SlantClass::Slant { theta }.structure_term(4).unwrap();
        assert!((x - (q.norm_q_sq + 2.0 * q.norm_pv_sq)).abs() < 1e-12);
    }

    #[test]
    fn slant_terms() {
        let t = core::f64::consts::FRAC_PI_2;
        assert_eq!(SlantClass::Invariant.structure_term(4).unwrap(), 4.0);
        assert_eq!(SlantClass::AntiInvariant.structure_term(4).unwrap(), 8.0);
        let semi = SlantClass::SemiSlant { d1: 1, d2: 1, theta2: t }.structure_term(4).unwrap();
        assert!((semi - 6.0).abs() < 1e-12);
        let hemi = SlantClass::HemiSlant { d1: 1, d2: 1, theta2: 0.0 }.structure_term(4).unwrap();
        assert!((hemi - 6.0).abs() < 1e-12);
        assert!(SlantClass::BiSlant { d1: 1, d2: 2, theta1: 0.1, theta2: 0.2 }.structure_term(4).is_err());
    }

    #[test]
    fn theorem_kinds_round_trip() {
        for s in [
            "general",
            "rsf",
            "csf",
            "gssf",
            "corollary:invariant",
            "corollary:slant:0.5",
            "corollary:semi_slant:1:2:0.25",
            "corollary:bi_slant:1:1:0.5:1",
        ] {
            let k = TheoremKind::parse(s).unwrap();
            assert_eq!(TheoremKind::parse(&k.label()).unwrap(), k);
        }
        assert!(TheoremKind::parse("corollary:wobbly").is_err());
        assert!(TheoremKind::parse("special").is_err());
    }

    fn slices_tensors(ell: usize, s: usize, t_h: Vec<f64>) -> ONeillTensors {
        ONeillTensors {
            ell,
            s,
            t_h,
            a_v: vec![0.0; s * s * ell],
            t_mixed: vec![0.0; ell * s * ell],
            a_mixed: vec![0.0; s * ell * s],
            trace_t: vec![0.0; s],
            trace_a: vec![0.0; ell],
            delta_n: 0.0,
            norms: TensorNorms::default(),
        }
    }

    #[test]
    fn equality_flags_in_and_out_of_frame() {
        // T^{H^0} = diag(1, 1, 2): quasi-umbilical in this frame
        let mut t_h = vec![0.0; 18];
        for (i, v) in [1.0, 1.0, 2.0].iter().enumerate() {
            t_h[(i * 3 + i) * 2] = *v;
        }
        let f = equality_flags(&slices_tensors(3, 2, t_h.clone()));
        assert!(f.all() && f.quasi_umbilical_any_frame);
        // diag(2, 1, 1): same shape, distinguished direction first
        let mut t2 = vec![0.0; 18];
        for (i, v) in [2.0, 1.0, 1.0].iter().enumerate() {
            t2[(i * 3 + i) * 2] = *v;
        }
        let f = equality_flags(&slices_tensors(3, 2, t2));
        assert!(!f.quasi_umbilical && f.quasi_umbilical_any_frame);
        // −I is umbilical, not quasi-umbilical
        let mut t3 = vec![0.0; 18];
        for i in 0..3 {
            t3[(i * 3 + i) * 2 + 1] = -1.0;
        }
        let f = equality_flags(&slices_tensors(3, 2, t3));
        assert!(!f.quasi_umbilical && !f.quasi_umbilical_any_frame && f.off_diagonal_zero);
    }

    #[test]
    fn verdict_uses_relative_report_slack() {
        let rhs = RhsPair { delta: 1e3, hat: 1e3 };
        let v = InequalityVerdict::new(1e3 + 1e-6, rhs, EqualityFlags::default(), 1e-8);
        assert!(v.holds());
        assert_eq!(v.verdict, Verdict::Equality);
        let v = InequalityVerdict::new(1.0, RhsPair { delta: 0.5, hat: 2.0 }, EqualityFlags::default(), 1e-8);
        assert!(!v.holds_delta && v.holds_hat);
        assert_eq!(v.verdict, Verdict::Strict);
    }

    #[test]
    fn frame_model_sums_match_closed_forms() {
        let (c1, c2, c3) = (0.7, -0.3, 0.45);
        let st = contact(7);
        let m = model(SpaceFormKind::GeneralizedSasakian, c1, c2, c3, Some(st.clone()));
        let g = euclid(7);
        let fr = frame(7);
        let ell = 3; // ∂0 = ξ, ∂1, ∂2 vertical
        let sums = model_sums(&m, &fr, ell, &g).unwrap();
        let q = structure_quantities(&st, &fr, ell, &g);
        let (l, s) = (3.0, 4.0);
        let want_v = l * (l - 1.0) * c1 + 3.0 * c2 * q.norm_q_sq - 2.0 * (l - 1.0) * c3;
        let want_h = s * (s - 1.0) * c1 + 3.0 * c2 * q.norm_p_sq;
        let want_m = c1 * s * l + 3.0 * c2 * q.norm_pv_sq - c3 * s;
        assert!((sums.two_tau_v - want_v).abs() < 1e-12);
        assert!((sums.two_tau_h - want_h).abs() < 1e-12);
        assert!((sums.mixed - want_m).abs() < 1e-12);
    }
}
