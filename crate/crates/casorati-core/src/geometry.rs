//! Levi-Civita connection and curvature of a metric at a point.
//!
//! Convention: `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z` and
//! `R(X,Y,Z,W) = g(R(X,Y)Z, W)`, so a space of constant curvature `c` has
//! `R(e1,e2,e2,e1) = c`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::Bound;
use crate::numkit::jet::packed;
use crate::numkit::{Jet1, Jet2, Mat, Scalar, SymMatrix};
use crate::tolerances;

/// Symmetric matrix of expressions; only the upper triangle is stored and
/// absent entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricField {
    pub n: usize,
    entries: Vec<Option<Bound>>,
}

impl MetricField {
    pub fn new(n: usize) -> Self {
        MetricField {
            n,
            entries: vec![None; n * (n + 1) / 2],
        }
    }

    pub fn set(&mut self, i: usize, j: usize, e: Bound) {
        let n = self.n;
        self.entries[packed(n, i, j)] = Some(e);
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&Bound> {
        self.entries[packed(self.n, i, j)].as_ref()
    }

    /// Evaluates every entry on the given coordinate values.
    pub fn eval<S: Scalar>(&self, vars: &[S]) -> Result<Mat<S>> {
        let n = self.n;
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                if let Some(e) = self.entry(i, j) {
                    let v = e.eval(vars)?;
                    m.set(j, i, v.clone());
                    m.set(i, j, v);
                }
            }
        }
        Ok(m)
    }

    /// Values at `point`, checked positive definite.
    pub fn at(&self, point: &[f64]) -> Result<SymMatrix> {
        let g = SymMatrix::new(self.eval(point)?)?;
        if !g.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(g)
    }
}

/// Christoffel symbols and curvature at one point.
#[derive(Clone, Debug)]
pub struct CurvaturePack {
    pub n: usize,
    pub point: Vec<f64>,
    pub metric: SymMatrix,
    pub metric_inv: Mat<f64>,
    /// `∂_k g_ij` at the point, indexed `(k * n + i) * n + j`.
    pub metric_d: Vec<f64>,
    /// `Γ^k_ij` with first derivatives, indexed `(k * n + i) * n + j`.
    pub gamma: Vec<Jet1>,
    /// Fully lowered `R_ijkl`, indexed `((i * n + j) * n + k) * n + l`.
    pub riemann: Vec<f64>,
    /// `2τ = Σ_ij R(e_i, e_j, e_j, e_i)`.
    pub scalar: f64,
}

#[inline]
fn i3(n: usize, a: usize, b: usize, c: usize) -> usize {
    (a * n + b) * n + c
}

#[inline]
fn i4(n: usize, a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * n + b) * n + c) * n + d
}

/// `Γ^k_ij = ½ g^kl (∂_i g_jl + ∂_j g_il − ∂_l g_ij)` from metric jets.
pub fn christoffel_from_jets(g: &Mat<Jet2>) -> Result<Vec<Jet1>> {
    let n = g.rows;
    let ginv = g.inverse("metric")?;
    let ginv1: Vec<Jet1> = ginv.data.iter().map(Jet2::to_jet1).collect();
    // dg[(k, i, j)] = ∂_k g_ij as a first-order jet
    let mut dg = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                dg.push(g.get(i, j).partial(k));
            }
        }
    }
    let mut lowered = Vec::with_capacity(n * n * n);
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                let t = dg[i3(n, i, j, l)].clone() + dg[i3(n, j, i, l)].clone()
                    - dg[i3(n, l, i, j)].clone();
                lowered.push(t.scale(0.5));
            }
        }
    }
    let mut gamma = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = Jet1::constant(0.0);
                for l in 0..n {
                    acc = acc + ginv1[k * n + l].clone() * lowered[i3(n, l, i, j)].clone();
                }
                gamma.push(acc);
            }
        }
    }
    Ok(gamma)
}

/// Curvature from metric jets seeded in all `n` coordinates at `point`.
pub fn curvature_from_jets(g: &Mat<Jet2>, point: &[f64]) -> Result<CurvaturePack> {
    let n = g.rows;
    let metric = SymMatrix::new(g.values())?;
    if !metric.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let metric_inv = metric.entries.inverse("metric")?;
    let gamma = christoffel_from_jets(g)?;
    let mut metric_d = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                metric_d.push(g.get(i, j).d(k));
            }
        }
    }
    let gv = |k: usize, i: usize, j: usize| gamma[i3(n, k, i, j)].value;
    let gd = |k: usize, i: usize, j: usize, d: usize| gamma[i3(n, k, i, j)].d(d);
    // up[(m, k, i, j)] = component m of R(∂_i, ∂_j)∂_k
    let mut up = vec![0.0; n * n * n * n];
    for m in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = gd(m, j, k, i) - gd(m, i, k, j);
                    for p in 0..n {
                        v += gv(p, j, k) * gv(m, i, p) - gv(p, i, k) * gv(m, j, p);
                    }
                    up[i4(n, m, k, i, j)] = v;
                }
            }
        }
    }
    let mut riemann = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = 0.0;
                    for m in 0..n {
                        v += metric.get(l, m) * up[i4(n, m, k, i, j)];
                    }
                    riemann[i4(n, i, j, k, l)] = v;
                }
            }
        }
    }
    let mut scalar = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    scalar += metric_inv.get(a, d) * metric_inv.get(b, c) * riemann[i4(n, a, b, c, d)];
                }
            }
        }
    }
    Ok(CurvaturePack {
        n,
        point: point.to_vec(),
        metric,
        metric_inv,
        metric_d,
        gamma,
        riemann,
        scalar,
    })
}

pub fn christoffel(g: &MetricField, p: &[f64]) -> Result<Vec<Jet1>> {
    christoffel_from_jets(&g.eval(&Jet2::seed(p))?)
}

pub fn riemann(g: &MetricField, p: &[f64]) -> Result<CurvaturePack> {
    curvature_from_jets(&g.eval(&Jet2::seed(p))?, p)
}

impl CurvaturePack {
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[i3(self.n, k, i, j)].value
    }

    pub fn r(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.riemann[i4(self.n, i, j, k, l)]
    }

    /// `R(a, b, c, d)` for arbitrary coordinate vectors.
    pub fn r_vec(&self, a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            if a[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if b[j] == 0.0 {
                    continue;
                }
                for k in 0..n {
                    if c[k] == 0.0 {
                        continue;
                    }
                    for l in 0..n {
                        acc += a[i] * b[j] * c[k] * d[l] * self.r(i, j, k, l);
                    }
                }
            }
        }
        acc
    }

    /// Riemann tensor in the basis `frame`, indexed like [`Self::riemann`].
    pub fn in_frame(&self, frame: &[Vec<f64>]) -> Vec<f64> {
        let n = self.n;
        let m = frame.len();
        let mut cur = self.riemann.clone();
        let mut dims = [n, n, n, n];
        // Contract one slot at a time: O(m n^4) per slot.
        for slot in 0..4 {
            let mut next = vec![0.0; cur.len() / dims[slot] * m];
            let mut new_dims = dims;
            new_dims[slot] = m;
            let strides = |d: &[usize; 4]| [d[1] * d[2] * d[3], d[2] * d[3], d[3], 1];
            let so = strides(&dims);
            let sn = strides(&new_dims);
            for a in 0..new_dims[0] {
                for b in 0..new_dims[1] {
                    for c in 0..new_dims[2] {
                        for d in 0..new_dims[3] {
                            let idx = [a, b, c, d];
                            let mut v = 0.0;
                            for k in 0..n {
                                let mut src = idx;
                                src[slot] = k;
                                let off: usize = (0..4).map(|t| src[t] * so[t]).sum();
                                v += frame[idx[slot]][k] * cur[off];
                            }
                            let off: usize = (0..4).map(|t| idx[t] * sn[t]).sum();
                            next[off] = v;
                        }
                    }
                }
            }
            cur = next;
            dims = new_dims;
        }
        cur
    }

    /// `max |∂_k g_ij − Γ^l_ki g_lj − Γ^l_kj g_il|`.
    pub fn metric_compatibility_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = self.metric_d[i3(n, k, i, j)];
                    for l in 0..n {
                        v -= self.gamma(l, k, i) * self.metric.get(l, j)
                            + self.gamma(l, k, j) * self.metric.get(i, l);
                    }
                    worst = worst.max(v.abs());
                }
            }
        }
        worst
    }

    /// Largest violation of `Γ^k_ij = Γ^k_ji`.
    pub fn christoffel_symmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    worst = worst.max((self.gamma(k, i, j) - self.gamma(k, j, i)).abs());
                }
            }
        }
        worst
    }

    /// Largest violation of the pair antisymmetries and pair symmetry.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.r(i, j, k, l);
                        worst = worst
                            .max((r + self.r(j, i, k, l)).abs())
                            .max((r + self.r(i, j, l, k)).abs())
                            .max((r - self.r(k, l, i, j)).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest violation of `R_ijkl + R_jkil + R_kijl = 0`.
    pub fn bianchi_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.r(i, j, k, l) + self.r(j, k, i, l) + self.r(k, i, j, l);
                        worst = worst.max(v.abs());
                    }
                }
            }
        }
        worst
    }
}

/// Sectional curvature of the plane spanned by `u` and `v`.
pub fn sectional(pack: &CurvaturePack, g: &SymMatrix, u: &[f64], v: &[f64]) -> Result<f64> {
    let den = g.inner(u, u) * g.inner(v, v) - g.inner(u, v) * g.inner(u, v);
    if !(den.abs() > tolerances::PLANE) {
        return Err(Error::Invalid("degenerate plane for sectional curvature".into()));
    }
    Ok(pack.r_vec(u, v, v, u) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use alloc::string::{String, ToString};

    fn field(coords: &[&str], diag: &[&str]) -> MetricField {
        let names: Vec<String> = coords.iter().map(|s| s.to_string()).collect();
        let mut g = MetricField::new(coords.len());
        for (i, e) in diag.iter().enumerate() {
            g.set(i, i, parse(e).unwrap().bind(&names).unwrap());
        }
        g
    }

    #[test]
    fn euclidean_is_flat() {
        let g = field(&["x", "y", "z"], &["1", "1", "1"]);
        let pack = riemann(&g, &[0.3, -1.0, 2.0]).unwrap();
        assert!(pack.gamma.iter().all(|j| j.value == 0.0));
        assert!(pack.riemann.iter().all(|r| *r == 0.0));
        assert_eq!(pack.scalar, 0.0);
    }

    #[test]
    fn round_sphere_sectional() {
        let r = 2.0;
        let g = field(&["th", "ph"], &["4", "4*sin(th)^2"]);
        let p = [0.9, 0.1];
        let pack = riemann(&g, &p).unwrap();
        let k = sectional(&pack, &pack.metric, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((k - 1.0 / (r * r)).abs() < 1e-12, "{k}");
        assert!((pack.scalar - 2.0 / (r * r)).abs() < 1e-12);
    }

    #[test]
    fn sectional_is_basis_invariant() {
        let g = field(&["th", "ph", "z"], &["4", "4*sin(th)^2", "1+z^2"]);
        let pack = riemann(&g, &[0.9, 0.1, 0.4]).unwrap();
        let u = [1.0, 0.5, 0.2];
        let v = [0.0, 1.0, -0.3];
        let k1 = sectional(&pack, &pack.metric, &u, &v).unwrap();
        let u2: Vec<f64> = (0..3).map(|i| 2.0 * u[i] - v[i]).collect();
        let v2: Vec<f64> = (0..3).map(|i| 0.5 * u[i] + 3.0 * v[i]).collect();
        let k2 = sectional(&pack, &pack.metric, &u2, &v2).unwrap();
        assert!((k1 - k2).abs() < 1e-12);
    }

    #[test]
    fn degenerate_plane_rejected() {
        let g = field(&["x", "y"], &["1", "1"]);
        let pack = riemann(&g, &[0.0, 0.0]).unwrap();
        assert!(sectional(&pack, &pack.metric, &[1.0, 0.0], &[2.0, 0.0]).is_err());
    }

    #[test]
    fn hyperbolic_upper_half_space() {
        let g = field(&["x", "y", "z"], &["1/z^2", "1/z^2", "1/z^2"]);
        let pack = riemann(&g, &[0.2, 0.3, 1.7]).unwrap();
        let k = sectional(&pack, &pack.metric, &[1.0, 0.0, 0.0], &[0.0, 1.0, 1.0]).unwrap();
        assert!((k + 1.0).abs() < 1e-12);
        assert!(pack.metric_compatibility_residual() < 1e-12);
        assert!(pack.bianchi_residual() < 1e-12);
        assert!(pack.symmetry_residual() < 1e-12);
    }

    #[test]
    fn frame_transform_preserves_scalar() {
        let g = field(&["th", "ph", "z"], &["4", "4*sin(th)^2", "1+z^2"]);
        let pack = riemann(&g, &[0.9, 0.1, 0.4]).unwrap();
        let frame = alloc::vec![
            alloc::vec![0.5, 0.0, 0.0],
            alloc::vec![0.0, 0.5 / libm::sin(0.9), 0.0],
            alloc::vec![0.0, 0.0, 1.0 / libm::sqrt(1.16)],
        ];
        let rf = pack.in_frame(&frame);
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += rf[((i * 3 + j) * 3 + j) * 3 + i];
            }
        }
        assert!((s - pack.scalar).abs() < 1e-12);
    }

    #[test]
    fn singular_metric_errors() {
        let g = field(&["x", "y"], &["1", "0"]);
        assert!(riemann(&g, &[0.0, 0.0]).is_err());
    }
}
