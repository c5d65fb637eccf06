//! Chart-level description of a submersion and its compiled form.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{Bound, Expr};
use crate::geometry::MetricField;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    /// Almost complex structure `J`.
    Complex,
    /// Almost contact structure `(φ, ξ, η)`.
    Contact,
}

/// Structure tensor as expressions. `matrix[i][j]` is the `∂_i` component of
/// the image of `∂_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureSpec {
    pub kind: StructureKind,
    pub matrix: Vec<Vec<Expr>>,
    pub xi: Option<Vec<Expr>>,
    pub eta: Option<Vec<Expr>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceFormKind {
    Real,
    Complex,
    GeneralizedSasakian,
    Sasakian,
    Kenmotsu,
    Cosymplectic,
    CAlpha,
}

impl SpaceFormKind {
    pub fn name(self) -> &'static str {
        match self {
            SpaceFormKind::Real => "real",
            SpaceFormKind::Complex => "complex",
            SpaceFormKind::GeneralizedSasakian => "gssf",
            SpaceFormKind::Sasakian => "sasakian",
            SpaceFormKind::Kenmotsu => "kenmotsu",
            SpaceFormKind::Cosymplectic => "cosymplectic",
            SpaceFormKind::CAlpha => "c_alpha",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "real" => SpaceFormKind::Real,
            "complex" => SpaceFormKind::Complex,
            "gssf" | "generalized_sasakian" => SpaceFormKind::GeneralizedSasakian,
            "sasakian" => SpaceFormKind::Sasakian,
            "kenmotsu" => SpaceFormKind::Kenmotsu,
            "cosymplectic" => SpaceFormKind::Cosymplectic,
            "c_alpha" => SpaceFormKind::CAlpha,
            _ => return None,
        })
    }

    /// Kinds whose curvature involves `(φ, ξ, η)`.
    pub fn is_contact(self) -> bool {
        !matches!(self, SpaceFormKind::Real | SpaceFormKind::Complex)
    }
}

/// Space-form constants; each may depend on the total-space coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceFormSpec {
    pub kind: SpaceFormKind,
    pub c: Option<Expr>,
    pub c1: Option<Expr>,
    pub c2: Option<Expr>,
    pub c3: Option<Expr>,
    pub alpha: Option<Expr>,
}

/// Coordinate directions whose projections seed the adapted frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameHint {
    pub vertical: Vec<usize>,
    pub horizontal: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubmersionSpec {
    pub name: String,
    pub coords: Vec<String>,
    pub base_coords: Vec<String>,
    /// Upper-triangle metric entries `(i, j, expr)` with `i <= j`.
    pub metric: Vec<(usize, usize, Expr)>,
    pub base_metric: Vec<(usize, usize, Expr)>,
    pub map: Vec<Expr>,
    pub structure: Option<StructureSpec>,
    pub space_form: Option<SpaceFormSpec>,
    /// Each expression must be positive at admissible points.
    pub domain: Vec<Expr>,
    pub frame: Option<FrameHint>,
    /// Constant vectors spanning the fibre through every admissible point,
    /// when the fibres are affine planes in the chart.
    pub fiber_chart: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug)]
pub struct CompiledStructure {
    pub kind: StructureKind,
    pub matrix: Vec<Bound>,
    pub xi: Option<Vec<Bound>>,
    pub eta: Option<Vec<Bound>>,
}

#[derive(Clone, Debug)]
pub struct CompiledSpaceForm {
    pub kind: SpaceFormKind,
    pub c: Option<Bound>,
    pub c1: Option<Bound>,
    pub c2: Option<Bound>,
    pub c3: Option<Bound>,
    pub alpha: Option<Bound>,
}

/// A [`SubmersionSpec`] with every expression bound.
#[derive(Clone, Debug)]
pub struct Submersion {
    pub name: String,
    pub n1: usize,
    pub n2: usize,
    pub coords: Vec<String>,
    pub base_coords: Vec<String>,
    pub metric: MetricField,
    /// Bound over the base coordinates followed by the total coordinates.
    pub base_metric: MetricField,
    /// True when some base-metric entry reads a total-space coordinate, so
    /// the base metric is only meaningful pointwise.
    pub base_metric_pointwise: bool,
    pub map: Vec<Bound>,
    /// `jacobian[a][k] = ∂F_a/∂x_k`.
    pub jacobian: Vec<Vec<Bound>>,
    pub structure: Option<CompiledStructure>,
    pub space_form: Option<CompiledSpaceForm>,
    pub domain: Vec<Bound>,
    pub frame: Option<FrameHint>,
    pub fiber_chart: Option<Vec<Vec<f64>>>,
}

fn metric_field(
    n: usize,
    entries: &[(usize, usize, Expr)],
    names: &[String],
    what: &str,
) -> Result<MetricField> {
    let mut g = MetricField::new(n);
    for (i, j, e) in entries {
        if *i >= n || *j >= n {
            return Err(Error::Dimension(format!("{what} entry ({i},{j}) out of range")));
        }
        g.set(*i, *j, e.bind(names)?);
    }
    Ok(g)
}

fn bind_all(list: &[Expr], names: &[String]) -> Result<Vec<Bound>> {
    list.iter().map(|e| e.bind(names)).collect()
}

impl SubmersionSpec {
    pub fn compile(&self) -> Result<Submersion> {
        let n1 = self.coords.len();
        let n2 = self.base_coords.len();
        if n2 == 0 || n2 >= n1 {
            return Err(Error::Dimension(format!(
                "need 0 < base dimension < total dimension, got {n2} and {n1}"
            )));
        }
        if self.map.len() != n2 {
            return Err(Error::Dimension(format!(
                "map has {} components for {n2} base coordinates",
                self.map.len()
            )));
        }
        for (list, what) in [(&self.coords, "coordinate"), (&self.base_coords, "base coordinate")] {
            for (i, a) in list.iter().enumerate() {
                if list[..i].contains(a) {
                    return Err(Error::Invalid(format!("duplicate {what} `{a}`")));
                }
            }
        }
        let names = &self.coords;
        let metric = metric_field(n1, &self.metric, names, "metric")?;
        let mut base_names = self.base_coords.clone();
        base_names.extend(self.coords.iter().cloned());
        let base_metric = metric_field(n2, &self.base_metric, &base_names, "base metric")?;
        let base_metric_pointwise = self.base_metric.iter().any(|(_, _, e)| {
            e.bind(&self.base_coords).is_err()
        });
        let map = bind_all(&self.map, names)?;
        let jacobian = map
            .iter()
            .map(|f| (0..n1).map(|k| f.derivative(k)).collect())
            .collect();
        let structure = match &self.structure {
            None => None,
            Some(s) => {
                if s.matrix.len() != n1 || s.matrix.iter().any(|r| r.len() != n1) {
                    return Err(Error::Dimension("structure matrix must be n1 x n1".into()));
                }
                let flat: Vec<Expr> = s.matrix.iter().flatten().cloned().collect();
                let vec_of = |v: &Option<Vec<Expr>>, what: &str| -> Result<Option<Vec<Bound>>> {
                    match v {
                        None => Ok(None),
                        Some(v) if v.len() != n1 => {
                            Err(Error::Dimension(format!("structure {what} must have n1 entries")))
                        }
                        Some(v) => Ok(Some(bind_all(v, names)?)),
                    }
                };
                if s.kind == StructureKind::Contact && (s.xi.is_none() || s.eta.is_none()) {
                    return Err(Error::Invalid("contact structure needs xi and eta".into()));
                }
                Some(CompiledStructure {
                    kind: s.kind,
                    matrix: bind_all(&flat, names)?,
                    xi: vec_of(&s.xi, "xi")?,
                    eta: vec_of(&s.eta, "eta")?,
                })
            }
        };
        let space_form = match &self.space_form {
            None => None,
            Some(f) => {
                let b = |e: &Option<Expr>| e.as_ref().map(|e| e.bind(names)).transpose();
                Some(CompiledSpaceForm {
                    kind: f.kind,
                    c: b(&f.c)?,
                    c1: b(&f.c1)?,
                    c2: b(&f.c2)?,
                    c3: b(&f.c3)?,
                    alpha: b(&f.alpha)?,
                })
            }
        };
        let ell = n1 - n2;
        if let Some(h) = &self.frame {
            if h.vertical.len() != ell || h.horizontal.len() != n2 {
                return Err(Error::Dimension("frame hint sizes must be (n1-n2, n2)".into()));
            }
            if h.vertical.iter().chain(&h.horizontal).any(|&k| k >= n1) {
                return Err(Error::Dimension("frame hint index out of range".into()));
            }
        }
        if let Some(b) = &self.fiber_chart {
            if b.len() != ell || b.iter().any(|v| v.len() != n1) {
                return Err(Error::Dimension("fiber chart needs n1-n2 vectors of length n1".into()));
            }
        }
        Ok(Submersion {
            name: self.name.clone(),
            n1,
            n2,
            coords: self.coords.clone(),
            base_coords: self.base_coords.clone(),
            metric,
            base_metric,
            base_metric_pointwise,
            map,
            jacobian,
            structure,
            space_form,
            domain: bind_all(&self.domain, names)?,
            frame: self.frame.clone(),
            fiber_chart: self.fiber_chart.clone(),
        })
    }
}

impl Submersion {
    pub fn ell(&self) -> usize {
        self.n1 - self.n2
    }

    pub fn s(&self) -> usize {
        self.n2
    }

    /// Checks the point's dimension and the domain predicates.
    pub fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.n1 {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, expected {}",
                p.len(),
                self.n1
            )));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("point has non-finite coordinates".into()));
        }
        for (index, d) in self.domain.iter().enumerate() {
            match d.eval(p) {
                Ok(v) if v > 0.0 => {}
                _ => return Err(Error::OutsideDomain { index }),
            }
        }
        Ok(())
    }

    /// `F(p)`.
    pub fn image(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.map.iter().map(|f| f.eval(p)).collect()
    }

    /// Base metric values at `F(p)`.
    pub fn base_metric_at(&self, p: &[f64]) -> Result<crate::numkit::SymMatrix> {
        let mut vars = self.image(p)?;
        vars.extend_from_slice(p);
        self.base_metric.at(&vars)
    }
}
