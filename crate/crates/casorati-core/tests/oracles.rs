//! Independent oracles for the differentiated and optimized quantities:
//! finite differences for Christoffel symbols and δ(N), brute-force grids for
//! the constrained quadratic problem, and dense sampling plus a
//! derivative-free polish for hyperplane extrema.

use casorati_core::casorati::HyperplaneObjective;
use casorati_core::fixtures::by_name;
use casorati_core::numkit::{
    sphere_extremize, tripathi_minimum, Mat, Mode, QuadraticExtremumProblem, SphereObjective,
    SphereOptions,
};
use casorati_core::submersion::{analyze, Submersion};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::*;

const FD_TOL: f64 = 1e-5;

fn fd_points(name: &str) -> (Submersion, Vec<Vec<f64>>) {
    let f = by_name(name).unwrap();
    (f.spec.compile().unwrap(), f.default_points)
}

#[test]
fn christoffel_symbols_match_finite_differences() {
    for name in ["example1", "example2", "example5", "heisenberg", "sphere_block"] {
        let (sub, points) = fd_points(name);
        for p in &points {
            let sp = analyze(&sub, p).unwrap();
            let fd = christoffel_fd(&sub, p);
            let n = p.len();
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let ad = sp.curvature.gamma(k, i, j);
                        let err = (ad - fd[(k * n + i) * n + j]).abs();
                        assert!(err < FD_TOL, "{name} {p:?} Γ^{k}_{i}{j}: {ad} vs fd, err {err:e}");
                    }
                }
            }
        }
    }
}

#[test]
fn delta_n_matches_divergence_of_mean_curvature() {
    for name in ["example1", "example2", "example5", "hyperbolic", "example4"] {
        let (sub, points) = fd_points(name);
        for p in &points {
            let ad = analyze(&sub, p).unwrap().tensors.delta_n;
            let fd = delta_n_fd(&sub, p);
            assert!((ad - fd).abs() < FD_TOL * ad.abs().max(1.0), "{name} {p:?}: δ(N) {ad} vs {fd}");
        }
    }
}

#[test]
fn example1_delta_n_closed_form() {
    let (sub, points) = fd_points("example1");
    for p in &points {
        let x6 = p[5];
        let got = analyze(&sub, p).unwrap().tensors.delta_n;
        assert!((got + 3.0 / (x6 * x6)).abs() < 1e-9, "x6 = {x6}: {got}");
    }
}

#[test]
fn quadratic_closed_form_matches_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let lambda1 = rng.random_range(1.2..5.0);
        let k = rng.random_range(-1.0..1.0);
        let p = QuadraticExtremumProblem::consistent(3, lambda1, k);
        let sol = tripathi_minimum(&p).unwrap();
        assert!(sol.closed_form);
        let (arg, grid_value) = constraint_plane_grid(&p, 1.2, 1e-3);
        for (a, b) in arg.iter().zip(&sol.argmin) {
            assert!((a - b).abs() < 1e-4, "λ1 = {lambda1}, k = {k}: {arg:?} vs {:?}", sol.argmin);
        }
        assert!((grid_value - sol.min_value).abs() < 1e-6, "{grid_value} vs {}", sol.min_value);
    }
}

#[test]
fn quadratic_minimum_is_zero_and_feasible_points_do_not_beat_it() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let n = rng.random_range(3..9usize);
        let lambda1 = (n as f64 - 2.0) + rng.random_range(0.1..4.0);
        let k = rng.random_range(-3.0..3.0);
        let p = QuadraticExtremumProblem::consistent(n, lambda1, k);
        let sol = tripathi_minimum(&p).unwrap();
        assert!(sol.min_value.abs() < 1e-9, "n = {n}: {}", sol.min_value);
        assert!((sol.argmin.iter().sum::<f64>() - k).abs() < 1e-12);
        for _ in 0..200 {
            // perturb inside the constraint plane
            let mut d: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let mean = d.iter().sum::<f64>() / n as f64;
            d.iter_mut().for_each(|x| *x -= mean);
            let t: Vec<f64> = sol.argmin.iter().zip(&d).map(|(a, b)| a + b).collect();
            assert!(p.objective(&t) >= sol.min_value - 1e-12);
        }
    }
}

#[test]
fn hyperplane_extrema_match_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = SphereOptions::default();
    for case in 0..50 {
        let d = 3 + case % 2;
        let slices = random_family(&mut rng, d, case % 4 < 2);
        let o = HyperplaneObjective::new(d, slices.clone()).unwrap();
        let lo = sphere_extremize(&o, Mode::Min, &opts);
        let hi = sphere_extremize(&o, Mode::Max, &opts);
        let (raw_lo, oracle_lo) = dense_oracle(&slices, d, &mut rng, 1.0);
        let (raw_hi, oracle_hi) = dense_oracle(&slices, d, &mut rng, -1.0);
        assert!(lo.value <= raw_lo + 1e-12, "case {case}: inf {} above a sample {raw_lo}", lo.value);
        assert!(hi.value >= raw_hi - 1e-12, "case {case}: sup {} below a sample {raw_hi}", hi.value);
        assert!((lo.value - oracle_lo).abs() < 1e-4, "case {case}: inf {} vs {oracle_lo}", lo.value);
        assert!((hi.value - oracle_hi).abs() < 1e-4, "case {case}: sup {} vs {oracle_hi}", hi.value);
    }
}

fn random_orthogonal(d: usize, seed: u64) -> Mat<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<f64>> = Vec::new();
    while cols.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        for c in &cols {
            let p: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(c).for_each(|(a, b)| *a -= p * b);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            cols.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    Mat::from_fn(d, d, |i, j| cols[j][i])
}

fn family_strategy() -> impl Strategy<Value = (usize, Vec<Vec<f64>>, Vec<f64>)> {
    (3usize..6).prop_flat_map(|d| {
        (
            Just(d),
            prop::collection::vec(prop::collection::vec(-2.0f64..2.0, d * d), 1..4),
            prop::collection::vec(-1.0f64..1.0, d).prop_filter("nonzero", |v| {
                v.iter().map(|x| x * x).sum::<f64>() > 1e-3
            }),
        )
    })
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hyperplane_formula_matches_basis_sum((d, slices, w) in family_strategy()) {
        let w = normalized(&w);
        let o = HyperplaneObjective::new(d, slices.clone()).unwrap();
        let a = o.eval(&w);
        let b = hyperplane_value(&slices, &w);
        prop_assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn hyperplane_value_is_rotation_invariant((d, slices, w) in family_strategy(), seed in any::<u64>()) {
        let w = normalized(&w);
        let q = random_orthogonal(d, seed);
        let rotated: Vec<Vec<f64>> = slices
            .iter()
            .map(|m| {
                let m = Mat { rows: d, cols: d, data: m.clone() };
                q.mul(&m).mul(&q.transpose()).data
            })
            .collect();
        let a = HyperplaneObjective::new(d, slices).unwrap().eval(&w);
        let b = HyperplaneObjective::new(d, rotated).unwrap().eval(&q.matvec(&w));
        prop_assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "{} vs {}", a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn extrema_bracket_every_hyperplane((d, slices, w) in family_strategy()) {
        let w = normalized(&w);
        let o = HyperplaneObjective::new(d, slices).unwrap();
        let opts = SphereOptions::default();
        let lo = sphere_extremize(&o, Mode::Min, &opts).value;
        let hi = sphere_extremize(&o, Mode::Max, &opts).value;
        let v = o.eval(&w);
        prop_assert!(lo <= v + 1e-9 && v <= hi + 1e-9, "{} ≤ {} ≤ {}", lo, v, hi);
    }
}
