//! Vertical/horizontal projectors and the adapted orthonormal frame.

use alloc::format;
use alloc::vec::Vec;

use super::spec::{FrameHint, Submersion};
use crate::error::{Error, Result};
use crate::numkit::{gram_schmidt, Jet2, Mat, Scalar, SymMatrix};
use crate::tolerances;

/// Metric and differential of the map as order-2 jets in all total-space
/// coordinates.
#[derive(Clone, Debug)]
pub struct Fields {
    pub metric: Mat<Jet2>,
    pub jacobian: Mat<Jet2>,
}

impl Fields {
    pub fn at(sub: &Submersion, p: &[f64]) -> Result<Fields> {
        let seeds = Jet2::seed(p);
        let metric = sub.metric.eval(&seeds)?;
        let mut jacobian = Mat::zeros(sub.n2, sub.n1);
        for (a, row) in sub.jacobian.iter().enumerate() {
            for (k, d) in row.iter().enumerate() {
                jacobian.set(a, k, d.eval(&seeds)?);
            }
        }
        Ok(Fields { metric, jacobian })
    }
}

#[derive(Clone, Debug)]
pub struct Projectors {
    pub vertical: Mat<Jet2>,
    pub horizontal: Mat<Jet2>,
}

impl Projectors {
    /// `P_h = g⁻¹Jᵀ(Jg⁻¹Jᵀ)⁻¹J` and `P_v = I − P_h`.
    pub fn from_fields(f: &Fields) -> Result<Projectors> {
        let ginv = f.metric.inverse("metric")?;
        let jt = f.jacobian.transpose();
        let gram = f.jacobian.mul(&ginv).mul(&jt);
        let gram_inv = gram.inverse("differential").map_err(|_| Error::RankDeficient {
            context: "differential".into(),
            index: 0,
        })?;
        let horizontal = ginv.mul(&jt).mul(&gram_inv).mul(&f.jacobian);
        let vertical = Mat::identity(horizontal.rows).sub(&horizontal);
        Ok(Projectors { vertical, horizontal })
    }
}

pub fn projectors(sub: &Submersion, p: &[f64]) -> Result<Projectors> {
    sub.check_point(p)?;
    Projectors::from_fields(&Fields::at(sub, p)?)
}

/// Orthonormal frame whose coefficients carry two derivatives.
#[derive(Clone, Debug)]
pub struct AdaptedFrame {
    pub vertical: Vec<Vec<Jet2>>,
    pub horizontal: Vec<Vec<Jet2>>,
    /// Coordinate directions whose projections seeded the frame.
    pub selection: FrameHint,
}

impl AdaptedFrame {
    pub fn ell(&self) -> usize {
        self.vertical.len()
    }

    pub fn s(&self) -> usize {
        self.horizontal.len()
    }

    /// Vertical vectors first, then horizontal.
    pub fn vectors(&self) -> impl Iterator<Item = &Vec<Jet2>> {
        self.vertical.iter().chain(self.horizontal.iter())
    }

    /// Coefficient values at the anchor point, vertical first.
    pub fn values(&self) -> Vec<Vec<f64>> {
        self.vectors()
            .map(|v| v.iter().map(Scalar::value).collect())
            .collect()
    }
}

/// Greedy pivoted Gram-Schmidt on the columns of `proj`: each step takes the
/// column whose residual has the largest norm, ties going to the lower index.
fn pivots(proj: &Mat<f64>, g: &SymMatrix, count: usize, what: &str) -> Result<Vec<usize>> {
    let n = proj.rows;
    let mut residual: Vec<Vec<f64>> = (0..n).map(|k| proj.column(k)).collect();
    let mut chosen = Vec::with_capacity(count);
    for _ in 0..count {
        let mut best: Option<(usize, f64)> = None;
        for (k, r) in residual.iter().enumerate() {
            if chosen.contains(&k) {
                continue;
            }
            let norm = libm::sqrt(g.inner(r, r).max(0.0));
            if best.is_none_or(|(_, b)| norm > b) {
                best = Some((k, norm));
            }
        }
        let (k, norm) = best.ok_or_else(|| Error::Frame(format!("no {what} candidates left")))?;
        if norm < tolerances::RANK {
            return Err(Error::Frame(format!(
                "{what} pivot degenerate: largest candidate norm {norm:e}"
            )));
        }
        chosen.push(k);
        let q: Vec<f64> = residual[k].iter().map(|x| x / norm).collect();
        for r in residual.iter_mut() {
            let c = g.inner(&q, r);
            for (ri, qi) in r.iter_mut().zip(&q) {
                *ri -= c * qi;
            }
        }
    }
    Ok(chosen)
}

impl AdaptedFrame {
    pub fn build(
        f: &Fields,
        proj: &Projectors,
        ell: usize,
        hint: Option<&FrameHint>,
    ) -> Result<AdaptedFrame> {
        let n = f.metric.rows;
        let s = n - ell;
        let selection = match hint {
            Some(h) => h.clone(),
            None => {
                let g = SymMatrix::new(f.metric.values())?;
                FrameHint {
                    vertical: pivots(&proj.vertical.values(), &g, ell, "vertical")?,
                    horizontal: pivots(&proj.horizontal.values(), &g, s, "horizontal")?,
                }
            }
        };
        let columns = |p: &Mat<Jet2>, idx: &[usize]| -> Vec<Vec<Jet2>> {
            idx.iter().map(|&k| p.column(k)).collect()
        };
        let ortho = |cols: Vec<Vec<Jet2>>, what: &str| {
            gram_schmidt(&cols, &f.metric).map_err(|e| match e {
                Error::RankDeficient { index, .. } => Error::Frame(format!(
                    "{what} frame seeds are dependent at seed {index}"
                )),
                other => other,
            })
        };
        let vertical = ortho(columns(&proj.vertical, &selection.vertical), "vertical")?;
        let horizontal = ortho(columns(&proj.horizontal, &selection.horizontal), "horizontal")?;
        Ok(AdaptedFrame {
            vertical,
            horizontal,
            selection,
        })
    }
}

pub fn adapted_frame(
    sub: &Submersion,
    p: &[f64],
    reference: Option<&FrameHint>,
) -> Result<AdaptedFrame> {
    sub.check_point(p)?;
    let f = Fields::at(sub, p)?;
    let proj = Projectors::from_fields(&f)?;
    AdaptedFrame::build(&f, &proj, sub.ell(), reference.or(sub.frame.as_ref()))
}
