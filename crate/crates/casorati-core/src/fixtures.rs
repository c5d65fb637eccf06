//! Built-in submersions with expected values and verdicts.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::expr::{parse, Expr};
use crate::submersion::{
    FrameHint, SpaceFormKind, SpaceFormSpec, StructureKind, StructureSpec, SubmersionSpec,
};
pub use crate::theorems::Verdict;

/// A named number the pipeline produces at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Quantity {
    /// `T_ij^{H^α}`.
    T(usize, usize, usize),
    /// `A_ij^{V^α}`.
    A(usize, usize, usize),
    MaxAbsT,
    MaxAbsA,
    NormTH,
    CasoratiV,
    CasoratiH,
    DeltaN,
    DeltaCV,
    HatDeltaCV,
    C1,
    C2,
    C3,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expected {
    /// Index into the fixture's default points.
    pub point: usize,
    pub quantity: Quantity,
    pub value: f64,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub spec: SubmersionSpec,
    pub default_points: Vec<Vec<f64>>,
    pub expected: Vec<Expected>,
    pub verdict: Verdict,
    /// Per-coordinate boxes for drawing random admissible points.
    pub sample_box: Vec<(f64, f64)>,
}

fn e(src: &str) -> Expr {
    parse(src).unwrap_or_else(|err| panic!("fixture expression `{src}`: {err}"))
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn diagonal(entries: &[&str]) -> Vec<(usize, usize, Expr)> {
    entries
        .iter()
        .enumerate()
        .filter(|(_, src)| **src != "0")
        .map(|(i, src)| (i, i, e(src)))
        .collect()
}

fn unit(n: usize, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[k] = 1.0;
    v
}

fn real(c: &str) -> SpaceFormSpec {
    SpaceFormSpec {
        kind: SpaceFormKind::Real,
        c: Some(e(c)),
        c1: None,
        c2: None,
        c3: None,
        alpha: None,
    }
}

fn base(name: &'static str, coords: &[&str], base_coords: &[&str]) -> SubmersionSpec {
    SubmersionSpec {
        name: name.to_string(),
        coords: names(coords),
        base_coords: names(base_coords),
        metric: Vec::new(),
        base_metric: Vec::new(),
        map: Vec::new(),
        structure: None,
        space_form: None,
        domain: Vec::new(),
        frame: None,
        fiber_chart: None,
    }
}

fn expect(point: usize, quantity: Quantity, value: f64, tol: f64) -> Expected {
    Expected {
        point,
        quantity,
        value,
        tol,
    }
}

const X6: [&str; 6] = ["x1", "x2", "x3", "x4", "x5", "x6"];
const Y3: [&str; 3] = ["y1", "y2", "y3"];

fn example1() -> Fixture {
    let mut spec = base("example1", &X6, &Y3);
    spec.metric = diagonal(&["x6^2", "x6^2", "x6^2", "x6^2", "x6^2", "1"]);
    spec.base_metric = diagonal(&["y3^2", "y3^2", "1"]);
    spec.map = vec![e("x4"), e("x5"), e("x6")];
    spec.domain = vec![e("x6^2")];
    spec.frame = Some(FrameHint {
        vertical: vec![0, 1, 2],
        horizontal: vec![3, 4, 5],
    });
    spec.fiber_chart = Some((0..3).map(|k| unit(6, k)).collect());
    let heights = [0.5, 0.8, 1.0, 1.5, 2.0];
    let mut expected = Vec::new();
    for (p, x6) in heights.iter().enumerate() {
        for i in 0..3 {
            expected.push(expect(p, Quantity::T(i, i, 2), -1.0 / x6, 1e-8 / x6));
        }
        expected.push(expect(p, Quantity::MaxAbsA, 0.0, 1e-9));
        expected.push(expect(p, Quantity::CasoratiV, 1.0 / (x6 * x6), 1e-9));
    }
    expected.push(expect(2, Quantity::NormTH, 3.0, 1e-9));
    expected.push(expect(2, Quantity::DeltaCV, 7.0 / 6.0, 1e-6));
    expected.push(expect(2, Quantity::HatDeltaCV, 7.0 / 6.0, 1e-6));
    Fixture {
        name: "example1",
        summary: "R^6 with x6^2 on the first five directions onto (x4, x5, x6)",
        spec,
        default_points: heights.iter().map(|&h| vec![0.0, 0.0, 0.0, 0.0, 0.0, h]).collect(),
        expected,
        verdict: Verdict::Strict,
        sample_box: vec![(-2.0, 2.0); 5].into_iter().chain([(0.5, 2.0)]).collect(),
    }
}

fn example2() -> Fixture {
    let mut spec = base("example2", &X6, &Y3);
    spec.metric = diagonal(&["1", "x2^2", "1", "x4^2", "1", "x6^2"]);
    spec.base_metric = diagonal(&["1", "1", "1"]);
    spec.map = vec![e("x1"), e("x3"), e("x5")];
    spec.domain = vec![e("x2^2"), e("x4^2"), e("x6^2")];
    spec.frame = Some(FrameHint {
        vertical: vec![1, 3, 5],
        horizontal: vec![0, 2, 4],
    });
    spec.space_form = Some(real("0"));
    spec.fiber_chart = Some([1, 3, 5].iter().map(|&k| unit(6, k)).collect());
    let points = vec![
        vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0],
        vec![0.3, 1.2, -0.5, 0.8, 2.0, 1.5],
        vec![-1.0, 0.5, 1.0, 2.0, -0.7, 0.9],
    ];
    let expected = (0..points.len())
        .flat_map(|p| {
            [
                expect(p, Quantity::MaxAbsT, 0.0, 1e-9),
                expect(p, Quantity::MaxAbsA, 0.0, 1e-9),
                expect(p, Quantity::DeltaN, 0.0, 1e-9),
            ]
        })
        .collect();
    Fixture {
        name: "example2",
        summary: "R^6 with x_i^2 on the even directions onto (x1, x3, x5)",
        spec,
        default_points: points,
        expected,
        verdict: Verdict::Equality,
        sample_box: vec![(-2.0, 2.0), (0.3, 2.0), (-2.0, 2.0), (0.3, 2.0), (-2.0, 2.0), (0.3, 2.0)],
    }
}

fn example3() -> Fixture {
    let mut spec = base("example3", &X6, &Y3);
    spec.metric = diagonal(&["1"; 6]);
    spec.base_metric = diagonal(&["1"; 3]);
    spec.map = vec![e("(x1 - x3)/sqrt(2)"), e("x4"), e("(x5 + x6)/sqrt(2)")];
    spec.frame = Some(FrameHint {
        vertical: vec![0, 1, 4],
        horizontal: vec![0, 3, 4],
    });
    spec.space_form = Some(real("0"));
    let r = core::f64::consts::FRAC_1_SQRT_2;
    spec.fiber_chart = Some(vec![
        vec![r, 0.0, r, 0.0, 0.0, 0.0],
        unit(6, 1),
        vec![0.0, 0.0, 0.0, 0.0, r, -r],
    ]);
    let points = vec![vec![0.0; 6], vec![1.0, -0.5, 0.25, 2.0, -1.5, 0.75]];
    let expected = (0..points.len())
        .flat_map(|p| {
            [
                expect(p, Quantity::MaxAbsT, 0.0, 1e-12),
                expect(p, Quantity::MaxAbsA, 0.0, 1e-12),
                expect(p, Quantity::DeltaN, 0.0, 1e-12),
            ]
        })
        .collect();
    Fixture {
        name: "example3",
        summary: "Euclidean R^6 onto R^3 by a rotated linear map",
        spec,
        default_points: points,
        expected,
        verdict: Verdict::Equality,
        sample_box: vec![(-2.0, 2.0); 6],
    }
}

fn example4() -> Fixture {
    let coords = ["x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8"];
    let mut spec = base("example4", &coords, &["y1", "y2", "y3", "y4"]);
    spec.metric = diagonal(&["1"; 8]);
    spec.base_metric = diagonal(&["1"; 4]);
    spec.map = (0..4)
        .map(|k| e(&format!("sqrt(x{}^2 + x{}^2)", 2 * k + 1, 2 * k + 2)))
        .collect();
    spec.domain = coords.iter().map(|c| e(&format!("{c}^2"))).collect();
    spec.frame = Some(FrameHint {
        vertical: vec![0, 2, 4, 6],
        horizontal: vec![0, 2, 4, 6],
    });
    let mut matrix = vec![vec![e("0"); 8]; 8];
    for k in 0..4 {
        // J ∂_{2k+1} = ∂_{2k+2}, J ∂_{2k+2} = −∂_{2k+1}
        matrix[2 * k + 1][2 * k] = e("1");
        matrix[2 * k][2 * k + 1] = e("-1");
    }
    spec.structure = Some(StructureSpec {
        kind: StructureKind::Complex,
        matrix,
        xi: None,
        eta: None,
    });
    spec.space_form = Some(SpaceFormSpec {
        kind: SpaceFormKind::Complex,
        c: Some(e("0")),
        c1: None,
        c2: None,
        c3: None,
        alpha: None,
    });
    let mut expected = Vec::new();
    for alpha in 0..4 {
        for i in 0..4 {
            let v = if i == alpha { -1.0 } else { 0.0 };
            expected.push(expect(0, Quantity::T(i, i, alpha), v, 1e-8));
        }
    }
    expected.push(expect(0, Quantity::NormTH, 4.0, 1e-9));
    expected.push(expect(0, Quantity::CasoratiV, 1.0, 1e-9));
    expected.push(expect(0, Quantity::CasoratiH, 0.0, 1e-9));
    Fixture {
        name: "example4",
        summary: "flat Kaehler R^8 onto R^4 by the four radial functions",
        spec,
        default_points: vec![vec![0.6, 0.8, 0.6, 0.8, 0.6, 0.8, 0.6, 0.8]],
        expected,
        verdict: Verdict::Strict,
        sample_box: vec![(0.2, 1.5); 8],
    }
}

fn example5() -> Fixture {
    let coords = ["t", "x1", "y1", "x2", "y2", "x3", "y3", "x4", "y4"];
    let mut spec = base("example5", &coords, &["Z1", "Z2", "Z3", "Z4"]);
    let mut diag = vec!["exp(2*t)"; 9];
    diag[0] = "1";
    spec.metric = diagonal(&diag);
    spec.base_metric = diagonal(&["exp(2*t)"; 4]);
    spec.map = vec![e("x1"), e("y1"), e("x2"), e("y2")];
    spec.frame = Some(FrameHint {
        vertical: vec![0, 5, 6, 7, 8],
        horizontal: vec![1, 2, 3, 4],
    });
    let mut matrix = vec![vec![e("0"); 9]; 9];
    for k in 0..4 {
        let x = 1 + 2 * k;
        // φ ∂x = ∂y, φ ∂y = −∂x, φ ∂t = 0
        matrix[x + 1][x] = e("1");
        matrix[x][x + 1] = e("-1");
    }
    let mut xi = vec![e("0"); 9];
    xi[0] = e("1");
    spec.structure = Some(StructureSpec {
        kind: StructureKind::Contact,
        matrix,
        xi: Some(xi.clone()),
        eta: Some(xi),
    });
    // f = exp(t): c1 = f'^2/f^2, c2 = 0, c3 = −f'^2/f^2 + f''/f
    spec.space_form = Some(SpaceFormSpec {
        kind: SpaceFormKind::GeneralizedSasakian,
        c: None,
        c1: Some(e("exp(t)^2/exp(t)^2")),
        c2: Some(e("0")),
        c3: Some(e("-exp(t)^2/exp(t)^2 + exp(t)/exp(t)")),
        alpha: None,
    });
    spec.fiber_chart = Some([0, 5, 6, 7, 8].iter().map(|&k| unit(9, k)).collect());
    let times = [-1.0, 0.0, 1.0];
    let mut expected = Vec::new();
    for p in 0..times.len() {
        expected.push(expect(p, Quantity::MaxAbsT, 0.0, 1e-9));
        expected.push(expect(p, Quantity::MaxAbsA, 0.0, 1e-9));
        expected.push(expect(p, Quantity::C1, 1.0, 1e-9));
        expected.push(expect(p, Quantity::C2, 0.0, 1e-9));
        expected.push(expect(p, Quantity::C3, 0.0, 1e-9));
    }
    Fixture {
        name: "example5",
        summary: "warped product dt^2 + exp(2t) g_flat on R x C^4 onto C^2",
        spec,
        default_points: times
            .iter()
            .map(|&t| {
                let mut p = vec![0.0; 9];
                p[0] = t;
                p
            })
            .collect(),
        expected,
        verdict: Verdict::Equality,
        sample_box: vec![(-1.0, 1.0)].into_iter().chain(vec![(-2.0, 2.0); 8]).collect(),
    }
}

/// Rows of the Householder reflection `I − 2uuᵀ/|u|²` with `u = (1, …, 6)`.
fn householder_row(a: usize) -> Vec<f64> {
    let u: Vec<f64> = (1..=6).map(f64::from).collect();
    let norm: f64 = u.iter().map(|x| x * x).sum();
    (0..6)
        .map(|k| f64::from(u8::from(a == k)) - 2.0 * u[a] * u[k] / norm)
        .collect()
}

fn example6() -> Fixture {
    let mut spec = base("example6", &X6, &Y3);
    spec.metric = diagonal(&["1"; 6]);
    spec.base_metric = diagonal(&["1"; 3]);
    spec.map = (0..3)
        .map(|a| {
            let u = (a + 1) as f64;
            e(&format!(
                "x{} - 2*{u}*(x1 + 2*x2 + 3*x3 + 4*x4 + 5*x5 + 6*x6)/91",
                a + 1
            ))
        })
        .collect();
    spec.space_form = Some(real("0"));
    spec.fiber_chart = Some((3..6).map(householder_row).collect());
    let points = vec![vec![0.0; 6], vec![0.5, -1.0, 1.5, 0.25, -0.75, 1.0]];
    let expected = (0..points.len())
        .flat_map(|p| {
            [
                expect(p, Quantity::MaxAbsT, 0.0, 1e-12),
                expect(p, Quantity::MaxAbsA, 0.0, 1e-12),
            ]
        })
        .collect();
    Fixture {
        name: "example6",
        summary: "Euclidean R^6 onto R^3 by a generic orthogonal projection",
        spec,
        default_points: points,
        expected,
        verdict: Verdict::Equality,
        sample_box: vec![(-2.0, 2.0); 6],
    }
}

fn flat_product() -> Fixture {
    let mut spec = base("flat_product", &X6, &Y3);
    spec.metric = diagonal(&["1"; 6]);
    spec.base_metric = diagonal(&["1"; 3]);
    spec.map = vec![e("x4"), e("x5"), e("x6")];
    spec.space_form = Some(real("0"));
    spec.fiber_chart = Some((0..3).map(|k| unit(6, k)).collect());
    Fixture {
        name: "flat_product",
        summary: "Euclidean R^6 onto its last three coordinates",
        spec,
        default_points: vec![vec![0.0; 6], vec![1.0, 2.0, 3.0, -1.0, -2.0, -3.0]],
        expected: vec![
            expect(0, Quantity::MaxAbsT, 0.0, 1e-12),
            expect(0, Quantity::MaxAbsA, 0.0, 1e-12),
        ],
        verdict: Verdict::Equality,
        sample_box: vec![(-2.0, 2.0); 6],
    }
}

fn heisenberg() -> Fixture {
    let coords = ["x", "y", "z", "a", "b", "c"];
    let mut spec = base("heisenberg", &coords, &["u", "w", "q"]);
    spec.metric = vec![
        (0, 0, e("1")),
        (1, 1, e("1 + x^2")),
        (1, 2, e("-x")),
        (2, 2, e("1")),
        (3, 3, e("1")),
        (4, 4, e("1")),
        (5, 5, e("1")),
    ];
    spec.base_metric = diagonal(&["1"; 3]);
    spec.map = vec![e("x"), e("y"), e("a")];
    spec.fiber_chart = Some([2, 4, 5].iter().map(|&k| unit(6, k)).collect());
    Fixture {
        name: "heisenberg",
        summary: "Heisenberg group times R^3 onto R^3; the horizontal space is not integrable",
        spec,
        default_points: vec![vec![0.0; 6], vec![0.7, -0.3, 1.1, 0.0, 0.5, -0.5]],
        expected: vec![
            expect(0, Quantity::MaxAbsT, 0.0, 1e-12),
            // A_{h1}h2 = ½ v[h1, h2] and [∂x, ∂y + x∂z] = ∂z.
            expect(0, Quantity::A(0, 1, 0), 0.5, 1e-12),
            expect(0, Quantity::A(1, 0, 0), -0.5, 1e-12),
        ],
        verdict: Verdict::Strict,
        sample_box: vec![(-1.5, 1.5); 6],
    }
}

fn sphere_block() -> Fixture {
    let coords = ["psi", "theta", "phi", "x", "y", "z"];
    let mut spec = base("sphere_block", &coords, &Y3);
    spec.metric = diagonal(&[
        "4",
        "4*sin(psi)^2",
        "4*sin(psi)^2*sin(theta)^2",
        "1",
        "1",
        "1",
    ]);
    spec.base_metric = diagonal(&["1"; 3]);
    spec.map = vec![e("x"), e("y"), e("z")];
    spec.domain = vec![e("sin(psi)^2"), e("sin(theta)^2")];
    spec.frame = Some(FrameHint {
        vertical: vec![0, 1, 2],
        horizontal: vec![3, 4, 5],
    });
    spec.fiber_chart = Some((0..3).map(|k| unit(6, k)).collect());
    Fixture {
        name: "sphere_block",
        summary: "round 3-sphere of radius 2 times R^3 onto R^3",
        spec,
        default_points: vec![vec![1.0, 1.2, 0.3, 0.0, 0.0, 0.0]],
        expected: vec![
            expect(0, Quantity::MaxAbsT, 0.0, 1e-12),
            expect(0, Quantity::MaxAbsA, 0.0, 1e-12),
        ],
        verdict: Verdict::Equality,
        sample_box: vec![(0.3, 2.8), (0.3, 2.8), (-3.0, 3.0), (-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0)],
    }
}

fn hyperbolic() -> Fixture {
    let mut spec = base("hyperbolic", &X6, &Y3);
    spec.metric = diagonal(&["1/x6^2"; 6]);
    spec.base_metric = diagonal(&["1/y3^2"; 3]);
    spec.map = vec![e("x4"), e("x5"), e("x6")];
    spec.domain = vec![e("x6")];
    spec.frame = Some(FrameHint {
        vertical: vec![0, 1, 2],
        horizontal: vec![3, 4, 5],
    });
    spec.space_form = Some(real("-1"));
    spec.fiber_chart = Some((0..3).map(|k| unit(6, k)).collect());
    let mut expected = Vec::new();
    for i in 0..3 {
        // horospheres are umbilic with unit mean curvature
        expected.push(expect(0, Quantity::T(i, i, 2), 1.0, 1e-9));
    }
    expected.push(expect(0, Quantity::MaxAbsA, 0.0, 1e-12));
    Fixture {
        name: "hyperbolic",
        summary: "upper half-space H^6 onto H^3 by forgetting three horizontal coordinates",
        spec,
        default_points: vec![vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0], vec![0.3, -0.2, 0.1, 1.0, 2.0, 0.5]],
        expected,
        verdict: Verdict::Strict,
        sample_box: vec![(-2.0, 2.0); 5].into_iter().chain([(0.3, 3.0)]).collect(),
    }
}

/// Every built-in fixture.
pub fn catalog() -> Vec<Fixture> {
    vec![
        example1(),
        example2(),
        example3(),
        example4(),
        example5(),
        example6(),
        flat_product(),
        heisenberg(),
        sphere_block(),
        hyperbolic(),
    ]
}

pub fn by_name(name: &str) -> Option<Fixture> {
    catalog().into_iter().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_compiles_and_its_points_are_admissible() {
        for f in catalog() {
            let sub = f.spec.compile().unwrap();
            for p in &f.default_points {
                sub.check_point(p).unwrap();
            }
            assert_eq!(f.sample_box.len(), sub.n1, "{}", f.name);
        }
    }

    #[test]
    fn householder_rows_are_orthonormal() {
        for a in 0..6 {
            for b in 0..6 {
                let d: f64 = householder_row(a)
                    .iter()
                    .zip(householder_row(b))
                    .map(|(x, y)| x * y)
                    .sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-14);
            }
        }
    }
}
