//! Independent oracles shared by the test targets: finite differences,
//! constrained grids and dense sphere sampling.

#![allow(dead_code)]

use casorati_core::casorati::subspace_casorati;
use casorati_core::numkit::QuadraticExtremumProblem;
use casorati_core::submersion::{analyze, Submersion};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const FD_STEP: f64 = 1e-5;

pub fn shifted(p: &[f64], m: usize, h: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    q[m] += h;
    q
}

/// Christoffel symbols from central differences of the metric values.
pub fn christoffel_fd(sub: &Submersion, p: &[f64]) -> Vec<f64> {
    let n = p.len();
    let g = sub.metric.at(p).unwrap();
    let ginv = g.entries.inverse("fd oracle").unwrap();
    let dg: Vec<Vec<f64>> = (0..n)
        .map(|m| {
            let plus = sub.metric.at(&shifted(p, m, FD_STEP)).unwrap();
            let minus = sub.metric.at(&shifted(p, m, -FD_STEP)).unwrap();
            (0..n * n)
                .map(|ij| (plus.get(ij / n, ij % n) - minus.get(ij / n, ij % n)) / (2.0 * FD_STEP))
                .collect()
        })
        .collect();
    let d = |m: usize, i: usize, j: usize| dg[m][i * n + j];
    let mut out = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                out[(k * n + i) * n + j] = (0..n)
                    .map(|l| 0.5 * *ginv.get(k, l) * (d(i, j, l) + d(j, i, l) - d(l, i, j)))
                    .sum();
            }
        }
    }
    out
}

/// Mean-curvature field `N = Σ_j T_{v_j} v_j` in coordinates.
pub fn mean_curvature(sub: &Submersion, q: &[f64]) -> Vec<f64> {
    let sp = analyze(sub, q).unwrap();
    let mut out = vec![0.0; q.len()];
    for (alpha, c) in sp.tensors.trace_t.iter().enumerate() {
        for (o, x) in out.iter_mut().zip(&sp.frame_values[sp.ell + alpha]) {
            *o += c * x;
        }
    }
    out
}

/// `δ(N)` as the horizontal divergence `Σ_i g(∇_{h_i} N, h_i)`. Differentiating
/// the frame-free field `N` avoids the covariant derivative of `T`.
pub fn delta_n_fd(sub: &Submersion, p: &[f64]) -> f64 {
    let n = p.len();
    let sp = analyze(sub, p).unwrap();
    let gamma = christoffel_fd(sub, p);
    let big_n = mean_curvature(sub, p);
    let dn: Vec<Vec<f64>> = (0..n)
        .map(|m| {
            let a = mean_curvature(sub, &shifted(p, m, FD_STEP));
            let b = mean_curvature(sub, &shifted(p, m, -FD_STEP));
            a.iter().zip(&b).map(|(x, y)| (x - y) / (2.0 * FD_STEP)).collect()
        })
        .collect();
    let g = &sp.curvature.metric;
    let mut total = 0.0;
    for h in &sp.frame_values[sp.ell..] {
        let nabla: Vec<f64> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|m| {
                        let conn: f64 = (0..n).map(|q| gamma[(k * n + m) * n + q] * big_n[q]).sum();
                        h[m] * (dn[m][k] + conn)
                    })
                    .sum()
            })
            .collect();
        total += g.inner(&nabla, h);
    }
    total
}

/// Best point of a uniform grid over the constraint plane of an `n = 3`
/// problem, sharpened by the exact Newton step of the 3×3 stencil quadratic.
/// The grid alone is only good to `O(step²)` in value.
pub fn constraint_plane_grid(p: &QuadraticExtremumProblem, half_width: f64, step: f64) -> (Vec<f64>, f64) {
    let f = |a: f64, b: f64| p.objective(&[a, b, p.k - a - b]);
    let count = (2.0 * half_width / step).round() as i64;
    let at = |i: i64| -half_width + i as f64 * step;
    let mut best = (0, 0, f64::INFINITY);
    for i in 0..=count {
        for j in 0..=count {
            let v = f(at(i), at(j));
            if v < best.2 {
                best = (i, j, v);
            }
        }
    }
    let (a, b) = (at(best.0), at(best.1));
    let h = step;
    let fx = (f(a + h, b) - f(a - h, b)) / (2.0 * h);
    let fy = (f(a, b + h) - f(a, b - h)) / (2.0 * h);
    let fxx = (f(a + h, b) - 2.0 * f(a, b) + f(a - h, b)) / (h * h);
    let fyy = (f(a, b + h) - 2.0 * f(a, b) + f(a, b - h)) / (h * h);
    let fxy = (f(a + h, b + h) - f(a + h, b - h) - f(a - h, b + h) + f(a - h, b - h)) / (4.0 * h * h);
    let det = fxx * fyy - fxy * fxy;
    let da = -(fyy * fx - fxy * fy) / det;
    let db = -(fxx * fy - fxy * fx) / det;
    let (a, b) = (a + da, b + db);
    // the raw grid value bounds the refined minimum from above
    assert!(best.2 >= f(a, b) - 1e-12);
    (vec![a, b, p.k - a - b], f(a, b))
}

/// Orthonormal basis of `w^⊥` by Gram-Schmidt on the coordinate axes.
pub fn complement(w: &[f64]) -> Vec<Vec<f64>> {
    let d = w.len();
    let mut basis: Vec<Vec<f64>> = vec![w.to_vec()];
    for k in 0..d {
        let mut v = vec![0.0; d];
        v[k] = 1.0;
        for b in &basis {
            let c: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    basis.remove(0);
    assert_eq!(basis.len(), d - 1);
    basis
}

pub fn hyperplane_value(slices: &[Vec<f64>], w: &[f64]) -> f64 {
    subspace_casorati(slices, w.len(), &complement(w))
}

pub fn unit_sample(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>();
        if n > 1e-4 && n <= 1.0 {
            return v.iter().map(|x| x / n.sqrt()).collect();
        }
    }
}

/// Compass search along the tangent axes of the sphere.
pub fn polish(slices: &[Vec<f64>], start: &[f64], sign: f64) -> f64 {
    let f = |w: &[f64]| sign * hyperplane_value(slices, w);
    let mut w = start.to_vec();
    let mut fw = f(&w);
    let mut step = 0.05;
    while step > 1e-9 {
        let mut improved = false;
        for t in complement(&w) {
            for s in [step, -step] {
                let mut c: Vec<f64> = w.iter().zip(&t).map(|(a, b)| a + s * b).collect();
                let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
                c.iter_mut().for_each(|x| *x /= n);
                let fc = f(&c);
                if fc < fw {
                    w = c;
                    fw = fc;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    sign * fw
}

/// Dense-sample oracle: raw sample extreme and the polished best samples.
pub fn dense_oracle(slices: &[Vec<f64>], d: usize, rng: &mut ChaCha8Rng, sign: f64) -> (f64, f64) {
    let mut scored: Vec<(f64, Vec<f64>)> = (0..10_000)
        .map(|_| {
            let w = unit_sample(rng, d);
            (sign * hyperplane_value(slices, &w), w)
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let raw = sign * scored[0].0;
    let polished = scored
        .iter()
        .take(8)
        .map(|(_, w)| sign * polish(slices, w, sign))
        .fold(f64::INFINITY, f64::min);
    (raw, sign * polished)
}

pub fn random_family(rng: &mut ChaCha8Rng, d: usize, symmetric: bool) -> Vec<Vec<f64>> {
    let count = rng.random_range(1..5usize);
    (0..count)
        .map(|_| {
            let mut m = vec![0.0; d * d];
            for i in 0..d {
                for j in i..d {
                    let v = rng.random_range(-1.0..1.0);
                    m[i * d + j] = v;
                    m[j * d + i] = if symmetric { v } else { -v };
                }
                if !symmetric {
                    m[i * d + i] = 0.0;
                }
            }
            m
        })
        .collect()
}
