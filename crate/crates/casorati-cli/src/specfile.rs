//! JSON description of a submersion in a chart.
//!
//! ```json
//! {
//!   "coords": ["x1", "x2", "x3", "x4"],
//!   "base_coords": ["y1", "y2"],
//!   "metric": {"0,0": "1", "1,1": "x1^2", "2,2": "1", "3,3": "1"},
//!   "base_metric": {"0,0": "1", "1,1": "1"},
//!   "map": ["x3", "x4"],
//!   "domain": ["x1"]
//! }
//! ```
//!
//! Metric keys are zero-based `"i,j"` with `i <= j`; missing entries are zero.
//! Expressions may be given as strings or plain numbers.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use casorati_core::expr::{parse, Expr};
use casorati_core::submersion::{
    FrameHint, SpaceFormKind, SpaceFormSpec, StructureKind, StructureSpec, SubmersionSpec,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExprText {
    Text(String),
    Number(f64),
}

impl ExprText {
    fn parse(&self, what: &str) -> Result<Expr> {
        match self {
            ExprText::Text(s) => parse(s).map_err(|e| anyhow!("{what}: cannot parse `{s}`: {e}")),
            ExprText::Number(v) => Ok(Expr::lit(*v)),
        }
    }

    fn of(e: &Expr) -> Self {
        ExprText::Text(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    /// `"J"` for an almost complex structure, `"phi"` for an almost contact one.
    pub kind: String,
    /// `matrix[i][j]` is the `∂_i` component of the image of `∂_j`.
    pub matrix: Vec<Vec<ExprText>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<ExprText>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<ExprText>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFormFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<ExprText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<ExprText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<ExprText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c3: Option<ExprText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<ExprText>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    pub vertical: Vec<usize>,
    pub horizontal: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub coords: Vec<String>,
    pub base_coords: Vec<String>,
    pub metric: BTreeMap<String, ExprText>,
    pub base_metric: BTreeMap<String, ExprText>,
    pub map: Vec<ExprText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space_form: Option<SpaceFormFile>,
    /// Expressions that must be positive at admissible points.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub domain: Vec<ExprText>,
    /// Coordinate directions used to seed the adapted frame.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameFile>,
    /// Constant vectors spanning every fibre, when the fibres are affine.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber_chart: Option<Vec<Vec<f64>>>,
    /// Default evaluation points.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<f64>>,
}

fn metric_entries(m: &BTreeMap<String, ExprText>, what: &str) -> Result<Vec<(usize, usize, Expr)>> {
    let mut out: Vec<(usize, usize, Expr)> = Vec::new();
    for (key, value) in m {
        let (i, j) = key
            .split_once(',')
            .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
            .ok_or_else(|| anyhow!("{what}: key `{key}` is not of the form \"i,j\""))?;
        if i > j {
            bail!("{what}: key `{key}` is below the diagonal; give the entry as \"{j},{i}\"");
        }
        out.push((i, j, value.parse(&format!("{what} entry {key}"))?));
    }
    // lexicographic (i, j) rather than string order
    out.sort_by_key(|(i, j, _)| (*i, *j));
    Ok(out)
}

fn metric_map(entries: &[(usize, usize, Expr)]) -> BTreeMap<String, ExprText> {
    entries
        .iter()
        .map(|(i, j, e)| (format!("{i},{j}"), ExprText::of(e)))
        .collect()
}

fn parse_all(v: &[ExprText], what: &str) -> Result<Vec<Expr>> {
    v.iter()
        .enumerate()
        .map(|(k, e)| e.parse(&format!("{what}[{k}]")))
        .collect()
}

fn opt(e: &Option<ExprText>, what: &str) -> Result<Option<Expr>> {
    e.as_ref().map(|e| e.parse(what)).transpose()
}

impl SpecFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn to_spec(&self) -> Result<SubmersionSpec> {
        let structure = match &self.structure {
            None => None,
            Some(s) => Some(StructureSpec {
                kind: match s.kind.as_str() {
                    "J" => StructureKind::Complex,
                    "phi" => StructureKind::Contact,
                    other => bail!("structure kind must be \"J\" or \"phi\", got `{other}`"),
                },
                matrix: s
                    .matrix
                    .iter()
                    .enumerate()
                    .map(|(i, row)| parse_all(row, &format!("structure matrix row {i}")))
                    .collect::<Result<_>>()?,
                xi: s.xi.as_ref().map(|v| parse_all(v, "xi")).transpose()?,
                eta: s.eta.as_ref().map(|v| parse_all(v, "eta")).transpose()?,
            }),
        };
        let space_form = match &self.space_form {
            None => None,
            Some(f) => Some(SpaceFormSpec {
                kind: SpaceFormKind::from_name(&f.kind)
                    .ok_or_else(|| anyhow!("unknown space form kind `{}`", f.kind))?,
                c: opt(&f.c, "space form c")?,
                c1: opt(&f.c1, "space form c1")?,
                c2: opt(&f.c2, "space form c2")?,
                c3: opt(&f.c3, "space form c3")?,
                alpha: opt(&f.alpha, "space form alpha")?,
            }),
        };
        Ok(SubmersionSpec {
            name: self.name.clone().unwrap_or_else(|| "spec".into()),
            coords: self.coords.clone(),
            base_coords: self.base_coords.clone(),
            metric: metric_entries(&self.metric, "metric")?,
            base_metric: metric_entries(&self.base_metric, "base_metric")?,
            map: parse_all(&self.map, "map")?,
            structure,
            space_form,
            domain: parse_all(&self.domain, "domain")?,
            frame: self.frame.as_ref().map(|f| FrameHint {
                vertical: f.vertical.clone(),
                horizontal: f.horizontal.clone(),
            }),
            fiber_chart: self.fiber_chart.clone(),
        })
    }

    pub fn from_spec(spec: &SubmersionSpec, points: &[Vec<f64>]) -> Self {
        let all = |v: &[Expr]| v.iter().map(ExprText::of).collect::<Vec<_>>();
        let of = |e: &Option<Expr>| e.as_ref().map(ExprText::of);
        SpecFile {
            name: Some(spec.name.clone()),
            coords: spec.coords.clone(),
            base_coords: spec.base_coords.clone(),
            metric: metric_map(&spec.metric),
            base_metric: metric_map(&spec.base_metric),
            map: all(&spec.map),
            structure: spec.structure.as_ref().map(|s| StructureFile {
                kind: match s.kind {
                    StructureKind::Complex => "J".into(),
                    StructureKind::Contact => "phi".into(),
                },
                matrix: s.matrix.iter().map(|r| all(r)).collect(),
                xi: s.xi.as_deref().map(all),
                eta: s.eta.as_deref().map(all),
            }),
            space_form: spec.space_form.as_ref().map(|f| SpaceFormFile {
                kind: f.kind.name().into(),
                c: of(&f.c),
                c1: of(&f.c1),
                c2: of(&f.c2),
                c3: of(&f.c3),
                alpha: of(&f.alpha),
            }),
            domain: all(&spec.domain),
            frame: spec.frame.as_ref().map(|f| FrameFile {
                vertical: f.vertical.clone(),
                horizontal: f.horizontal.clone(),
            }),
            fiber_chart: spec.fiber_chart.clone(),
            points: points.to_vec(),
        }
    }
}
