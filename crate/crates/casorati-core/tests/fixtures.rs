//! Catalog regression: expected values, verdicts, model curvature and the
//! inequality bookkeeping on every default point.

use std::collections::BTreeSet;

use casorati_core::fixtures::{by_name, catalog, Quantity, Verdict};
use casorati_core::report::{evaluate, Options, PointReport};
use casorati_core::submersion::{analyze, SpaceFormKind};
use casorati_core::theorems::{
    model_riemann_residual, Discrepancy, SpaceFormModel, TheoremKind, XiPosition,
};

/// The kind each catalog entry is naturally checked against.
fn natural_kind(name: &str) -> TheoremKind {
    let label = match name {
        "example2" | "example3" | "example6" | "flat_product" | "hyperbolic" => "rsf",
        "example4" => "csf",
        "example5" => "gssf",
        _ => "general",
    };
    TheoremKind::parse(label).unwrap()
}

fn reports() -> Vec<(&'static str, usize, PointReport)> {
    let mut out = Vec::new();
    for f in catalog() {
        let sub = f.spec.compile().unwrap();
        let kind = natural_kind(f.name);
        for (i, p) in f.default_points.iter().enumerate() {
            let r = evaluate(&sub, p, &kind, &Options::default())
                .unwrap_or_else(|e| panic!("{} point {i}: {e}", f.name));
            out.push((f.name, i, r));
        }
    }
    out
}

#[test]
fn expected_values_match_except_the_example5_a_tensor() {
    let mut mismatches = BTreeSet::new();
    for f in catalog() {
        let sub = f.spec.compile().unwrap();
        let kind = natural_kind(f.name);
        for ex in &f.expected {
            let r = evaluate(&sub, &f.default_points[ex.point], &kind, &Options::default()).unwrap();
            let got = r.quantity(ex.quantity).expect("quantity available");
            if (got - ex.value).abs() > ex.tol {
                mismatches.insert((f.name, ex.point, format!("{:?}", ex.quantity)));
            }
        }
    }
    // Example 5 writes the base metric with the fibre coordinate t, so the
    // horizontal space is not integrable there: A_{h_i}h_i = −∂t.
    let documented: BTreeSet<_> = (0..3).map(|p| ("example5", p, "MaxAbsA".to_string())).collect();
    assert_eq!(mismatches, documented);
}

#[test]
fn verdicts_match_the_catalog_except_example5() {
    let mut mismatched = BTreeSet::new();
    for (name, i, r) in reports() {
        if r.verdict.verdict != by_name(name).unwrap().verdict {
            mismatched.insert((name, i));
        }
    }
    let documented: BTreeSet<_> = (0..3).map(|p| ("example5", p)).collect();
    assert_eq!(mismatched, documented);
}

#[test]
fn inequality_fails_exactly_where_documented() {
    let mut violated = BTreeSet::new();
    for (name, i, r) in reports() {
        if !r.verdict.holds() {
            violated.insert((name, i));
        }
    }
    let mut documented = BTreeSet::new();
    for p in 0..5 {
        documented.insert(("example1", p));
    }
    for p in 0..3 {
        documented.insert(("example5", p));
    }
    for p in 0..2 {
        documented.insert(("hyperbolic", p));
    }
    assert_eq!(violated, documented);
}

#[test]
fn example1_gap_baseline() {
    let f = by_name("example1").unwrap();
    let sub = f.spec.compile().unwrap();
    for p in &f.default_points {
        let x6 = p[5];
        let r = evaluate(&sub, p, &TheoremKind::General, &Options::default()).unwrap();
        // lhs = −2/(36 x6²), rhs = −22/(36 x6²)
        assert!((r.verdict.lhs + 2.0 / 36.0 / (x6 * x6)).abs() < 1e-9);
        assert!((r.verdict.gap_delta + 20.0 / 36.0 / (x6 * x6)).abs() < 1e-6);
        assert!((r.verdict.gap_hat + 20.0 / 36.0 / (x6 * x6)).abs() < 1e-6);
        assert!((r.polynomials.p_hv + 20.0 / (x6 * x6)).abs() < 1e-5);
        assert!((r.polynomials.p_hv_reduced - 1.0 / (x6 * x6)).abs() < 1e-5);
        assert!(!r.verdict.flags.quasi_umbilical && r.verdict.flags.off_diagonal_zero && r.verdict.flags.a_zero);
    }
}

#[test]
fn proof_polynomials_are_scaled_gaps() {
    for (name, i, r) in reports() {
        let d = r.inputs().denominator();
        let v = &r.verdict;
        let tol = 1e-6 * r.polynomials.p_hv.abs().max(1.0);
        assert!((r.polynomials.p_hv - d * v.gap_delta).abs() < tol, "{name} {i}");
        assert!((r.polynomials.q_hv - d * v.gap_hat).abs() < tol, "{name} {i}");
    }
}

#[test]
fn equality_flags_imply_vanishing_gaps() {
    for (name, i, r) in reports() {
        if r.verdict.flags.all() {
            assert!(r.verdict.gap_delta.abs() < 1e-7, "{name} {i}: {}", r.verdict.gap_delta);
            assert!(r.verdict.gap_hat.abs() < 1e-7, "{name} {i}: {}", r.verdict.gap_hat);
        }
    }
}

#[test]
fn specialized_rhs_agrees_with_model_substitution() {
    for (name, i, r) in reports() {
        let t = &r.theorem;
        let (Some(model), Some(consistent)) = (t.model_general, t.consistent) else {
            continue;
        };
        assert!(consistent.max_abs_diff(&model) < 1e-9, "{name} {i}: {consistent:?} vs {model:?}");
        let displayed = t.displayed.unwrap();
        match t.discrepancy {
            None => assert!(displayed.max_abs_diff(&consistent) < 1e-12),
            Some(Discrepancy::RsfMixedTerm) => {
                // the displayed mixed term is 2/((s−1)(ℓ−1)) whatever c is
                let c = r.model.as_ref().unwrap().c1;
                let want = 2.0 * (1.0 - c) / ((r.analysis.s as f64 - 1.0) * (r.analysis.ell as f64 - 1.0));
                assert!((displayed.delta - consistent.delta - want).abs() < 1e-12, "{name} {i}");
                assert!((displayed.hat - consistent.hat - want).abs() < 1e-12, "{name} {i}");
            }
            Some(Discrepancy::GssfStrayRho) => {
                assert_eq!(displayed.delta, consistent.delta);
                assert!(displayed.hat != consistent.hat);
            }
        }
    }
}

#[test]
fn model_curvature_matches_computed_curvature() {
    for (name, i, r) in reports() {
        if let Some(m) = &r.model {
            let expected_ok = name != "example5";
            assert_eq!(m.riemann_residual < 1e-7, expected_ok, "{name} {i}: {}", m.riemann_residual);
            for res in [m.structure_algebraic, m.structure_compatibility].into_iter().flatten() {
                assert!(res < 1e-9, "{name} {i}: structure residual {res}");
            }
        }
    }
}

#[test]
fn example5_is_the_hyperbolic_warped_model() {
    // The warped metric dt² + e^{2t} g_flat has constant curvature −1. The
    // constants f′²/f² = 1 come from the opposite curvature sign.
    let f = by_name("example5").unwrap();
    let sub = f.spec.compile().unwrap();
    for p in &f.default_points {
        let sp = analyze(&sub, p).unwrap();
        let g = &sp.curvature.metric;
        let declared = SpaceFormModel::at(&sub, p).unwrap().unwrap();
        assert_eq!((declared.c1, declared.c2, declared.c3), (1.0, 0.0, 0.0));
        let declared_res = model_riemann_residual(&declared, &sp.riemann_frame, &sp.frame_values, g).unwrap();
        assert!(declared_res > 1.0);
        let flipped = SpaceFormModel { c1: -1.0, ..declared };
        let res = model_riemann_residual(&flipped, &sp.riemann_frame, &sp.frame_values, g).unwrap();
        assert!(res < 1e-9, "{res}");
    }
}

#[test]
fn example5_structure_is_invariant_with_vertical_xi() {
    let f = by_name("example5").unwrap();
    let sub = f.spec.compile().unwrap();
    let r = evaluate(&sub, &f.default_points[1], &natural_kind("example5"), &Options::default()).unwrap();
    let st = r.structure.unwrap();
    assert_eq!(st.xi_position, Some(XiPosition::Vertical));
    assert!((st.norm_q_sq - 4.0).abs() < 1e-12);
    assert!(st.norm_pv_sq.abs() < 1e-12);
    assert_eq!(st.slant.classes.len(), 1);
    assert!(st.slant.classes[0].0.abs() < 1e-6);
}

#[test]
fn example4_pattern_and_verdict() {
    let f = by_name("example4").unwrap();
    let sub = f.spec.compile().unwrap();
    let r = evaluate(&sub, &f.default_points[0], &natural_kind("example4"), &Options::default()).unwrap();
    for alpha in 0..4 {
        assert!((r.quantity(Quantity::T(alpha, alpha, alpha)).unwrap() + 1.0).abs() < 1e-8);
    }
    assert_eq!(r.verdict.verdict, Verdict::Strict);
    assert!(!r.verdict.flags.quasi_umbilical);
    assert!(r.verdict.holds());
    assert_eq!(r.model.as_ref().unwrap().family, SpaceFormKind::Complex);
    // the fibres of the radial map are anti-invariant
    let st = r.structure.unwrap();
    assert!(st.norm_q_sq.abs() < 1e-12);
    assert!((st.slant.classes[0].0 - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
}

#[test]
fn space_form_kinds_reject_wrong_families() {
    let f = by_name("example1").unwrap();
    let sub = f.spec.compile().unwrap();
    let err = evaluate(&sub, &f.default_points[0], &TheoremKind::Rsf, &Options::default()).unwrap_err();
    assert!(err.to_string().contains("space form"), "{err}");
    let f = by_name("example2").unwrap();
    let sub = f.spec.compile().unwrap();
    let err = evaluate(&sub, &f.default_points[0], &TheoremKind::Gssf, &Options::default()).unwrap_err();
    assert!(err.to_string().contains("contact"), "{err}");
}

#[test]
fn required_identities_hold_off_example5() {
    for f in catalog() {
        let sub = f.spec.compile().unwrap();
        for p in &f.default_points {
            let sp = analyze(&sub, p).unwrap();
            let worst = sp.residuals.max_required();
            assert_eq!(worst < 1e-6, f.name != "example5", "{} {p:?}: {worst:e}", f.name);
        }
    }
}
