//! Extremization of smooth functions on the unit sphere.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::jet::{Jet1, Scalar};

/// Default sampling seed.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// A function of a unit vector in `R^dim`, evaluable on any scalar type so the
/// optimizer can take gradients through [`Jet1`].
pub trait SphereObjective {
    fn dim(&self) -> usize;
    fn eval<S: Scalar>(&self, w: &[S]) -> S;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereOptions {
    pub samples: usize,
    pub starts: usize,
    pub max_iter: usize,
    pub grad_tol: f64,
    pub seed: u64,
}

impl Default for SphereOptions {
    fn default() -> Self {
        SphereOptions {
            samples: 2000,
            starts: 5,
            max_iter: 200,
            grad_tol: 1e-10,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereResult {
    pub w: Vec<f64>,
    pub value: f64,
    /// Best objective value among the dense samples.
    pub best_sample: f64,
    /// Tangential gradient norm at `w`.
    pub grad_norm: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Set when the sphere has dimension above two, where the sampling
    /// budget no longer covers it densely.
    pub heuristic: bool,
}

fn normalize(v: &mut [f64]) {
    let n = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
    for x in v.iter_mut() {
        *x /= n;
    }
}

/// Unit vectors drawn from a normalized Gaussian with the given seed.
pub fn sample_sphere(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        if v.iter().map(|x| x * x).sum::<f64>() < 1e-24 {
            continue;
        }
        normalize(&mut v);
        out.push(v);
    }
    out
}

// Sufficient-decrease constant. Small values admit steps that mirror the
// iterate across a quadratic minimum with almost no progress.
const ARMIJO: f64 = 0.25;

struct Signed<'a, O> {
    inner: &'a O,
    sign: f64,
}

impl<O: SphereObjective> Signed<'_, O> {
    fn value(&self, w: &[f64]) -> f64 {
        self.sign * self.inner.eval(w)
    }

    fn grad(&self, w: &[f64]) -> (f64, Vec<f64>) {
        let d = w.len();
        let seeds: Vec<Jet1> = w.iter().enumerate().map(|(i, &x)| Jet1::variable(x, i, d)).collect();
        let j = self.inner.eval(&seeds);
        let g = (0..d).map(|i| self.sign * j.d(i)).collect();
        (self.sign * j.value, g)
    }

    fn tangent_grad(&self, w: &[f64]) -> (f64, Vec<f64>, f64) {
        let (f, g) = self.grad(w);
        let radial: f64 = g.iter().zip(w).map(|(a, b)| a * b).sum();
        let gt: Vec<f64> = g.iter().zip(w).map(|(a, b)| a - radial * b).collect();
        let n = libm::sqrt(gt.iter().map(|x| x * x).sum::<f64>());
        (f, gt, n)
    }

    /// Projected gradient descent with Armijo backtracking.
    fn refine(&self, start: &[f64], opts: &SphereOptions) -> (Vec<f64>, f64, f64, bool, usize) {
        let mut w = start.to_vec();
        let mut alpha = 1.0;
        let (mut f, mut gt, mut gn) = self.tangent_grad(&w);
        let mut iterations = 0;
        while iterations < opts.max_iter {
            if gn < opts.grad_tol {
                return (w, f, gn, true, iterations);
            }
            iterations += 1;
            let mut step = alpha;
            let mut accepted = None;
            while step > 1e-30 {
                let mut cand: Vec<f64> = w.iter().zip(&gt).map(|(a, b)| a - step * b).collect();
                normalize(&mut cand);
                let fc = self.value(&cand);
                if fc <= f - ARMIJO * step * gn * gn {
                    accepted = Some(cand);
                    break;
                }
                step *= 0.5;
            }
            match accepted {
                Some(cand) => {
                    w = cand;
                    // Grow only after an untouched first trial; doubling after a
                    // backtrack lets the iterate bounce across the minimizer.
                    alpha = if step == alpha { 2.0 * step } else { step };
                    (f, gt, gn) = self.tangent_grad(&w);
                }
                None => break,
            }
        }
        let converged = gn < opts.grad_tol;
        (w, f, gn, converged, iterations)
    }
}

/// Minimizes or maximizes `objective` over the unit sphere.
///
/// Dense samples pick the starting points; the best few mutually distinct
/// samples (antipodes count as the same start) are refined and the best
/// refined point wins.
pub fn sphere_extremize<O: SphereObjective>(
    objective: &O,
    mode: Mode,
    opts: &SphereOptions,
) -> SphereResult {
    let d = objective.dim();
    assert!(d >= 2, "sphere_extremize needs dimension at least 2");
    let sign = match mode {
        Mode::Min => 1.0,
        Mode::Max => -1.0,
    };
    let signed = Signed { inner: objective, sign };
    let samples = sample_sphere(d, opts.samples, opts.seed);
    let mut scored: Vec<(f64, usize)> = samples
        .iter()
        .enumerate()
        .map(|(i, w)| (signed.value(w), i))
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let best_sample = scored[0].0;

    let mut starts: Vec<&Vec<f64>> = Vec::new();
    for &(_, i) in &scored {
        if starts.len() == opts.starts {
            break;
        }
        let w = &samples[i];
        let distinct = starts.iter().all(|s| {
            let c: f64 = s.iter().zip(w).map(|(a, b)| a * b).sum();
            c.abs() < 0.95
        });
        if distinct {
            starts.push(w);
        }
    }

    let mut best: Option<(Vec<f64>, f64, f64, bool)> = None;
    let mut iterations = 0;
    for s in starts {
        let (w, f, gn, conv, it) = signed.refine(s, opts);
        iterations += it;
        if best.as_ref().is_none_or(|b| f < b.1) {
            best = Some((w, f, gn, conv));
        }
    }
    let (w, f, gn, converged) = best.expect("at least one start");
    SphereResult {
        w,
        value: sign * f,
        best_sample: sign * best_sample,
        grad_norm: gn,
        converged,
        iterations,
        heuristic: d > 3,
    }
}
