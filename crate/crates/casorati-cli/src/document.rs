//! Report and tensor-dump documents.
//!
//! Optional quantities are omitted rather than written as `null`, so a `null`
//! anywhere in a finished document means a non-finite number slipped in.

use anyhow::{bail, Result};
use casorati_core::casorati::Extremum;
use casorati_core::report::PointReport;
use casorati_core::submersion::{CurvatureSums, SubmersionPoint};
use casorati_core::theorems::RhsPair;
use serde_json::{json, Map, Value};

pub const SCHEMA: u32 = 1;

fn put<T: Into<Value>>(m: &mut Map<String, Value>, key: &str, v: Option<T>) {
    if let Some(v) = v {
        m.insert(key.to_string(), v.into());
    }
}

fn pair(p: &RhsPair) -> Value {
    json!({"delta": p.delta, "hat": p.hat})
}

fn extremum(e: &Extremum) -> Value {
    json!({
        "value": e.value,
        "best_sample": e.best_sample,
        "grad_norm": e.grad_norm,
        "converged": e.converged,
        "heuristic": e.heuristic,
        "iterations": e.iterations,
    })
}

fn sums(s: &CurvatureSums) -> Value {
    json!({"two_tau": s.two_tau, "two_tau_v": s.two_tau_v, "two_tau_h": s.two_tau_h, "mixed": s.mixed})
}

pub fn residuals(a: &SubmersionPoint) -> Value {
    let mut m = Map::new();
    for (name, v) in a.residuals.named() {
        put(&mut m, name, v);
    }
    m.insert("max_required".into(), a.residuals.max_required().into());
    Value::Object(m)
}

pub fn point_report(r: &PointReport) -> Value {
    let a = &r.analysis;
    let t = &a.tensors;
    let sc = &r.scalars;
    let cs = &r.casorati;
    let v = &r.verdict;
    let th = &r.theorem;

    let mut rhs = Map::new();
    rhs.insert("kind".into(), th.kind.label().into());
    rhs.insert("general".into(), pair(&th.general));
    put(&mut rhs, "model_general", th.model_general.as_ref().map(pair));
    put(&mut rhs, "consistent", th.consistent.as_ref().map(pair));
    put(&mut rhs, "displayed", th.displayed.as_ref().map(pair));
    if let (Some(d), Some(shown), Some(cons)) = (th.discrepancy, th.displayed, th.consistent) {
        rhs.insert(
            "discrepancy".into(),
            json!({
                "name": d.name(),
                "displayed": pair(&shown),
                "consistent": pair(&cons),
                "difference": {"delta": shown.delta - cons.delta, "hat": shown.hat - cons.hat},
            }),
        );
    }

    let mut doc = json!({
        "point": a.point,
        "n": a.n,
        "ell": a.ell,
        "s": a.s,
        "scalar_curvatures": {
            "tau_v_ker": sc.tau_v_ker,
            "tau_h_perp": sc.tau_h_perp,
            "tau_v_n1": sc.tau_v_n1,
            "tau_h_n1": sc.tau_h_n1,
            "rho_v": sc.rho_v,
            "rho_h": sc.rho_h,
            "rho_v_n1": sc.rho_v_n1,
            "rho_h_n1": sc.rho_h_n1,
            "mixed_sum": sc.mixed_sum,
            "tau_m1": sc.tau_m1,
            "decomposition_residual": sc.decomposition_residual,
        },
        "curvature_sums": sums(&a.sums),
        "casorati": {
            "c_v": cs.c_v,
            "c_h": cs.c_h,
            "delta_c_v": cs.delta_c_v,
            "hat_delta_c_v": cs.hat_delta_c_v,
            "delta_c_h": cs.delta_c_h,
            "hat_delta_c_h": cs.hat_delta_c_h,
            "inf_cl_v": extremum(&cs.inf_cl_v),
            "sup_cl_v": extremum(&cs.sup_cl_v),
            "inf_cl_h": extremum(&cs.inf_cl_h),
            "sup_cl_h": extremum(&cs.sup_cl_h),
        },
        "norms": {
            "t_h": t.norms.t_h,
            "t_v": t.norms.t_v,
            "a_v": t.norms.a_v,
            "a_h": t.norms.a_h,
            "trace_t": t.norms.trace_t,
            "trace_a": t.norms.trace_a,
        },
        "delta_n": t.delta_n,
        "mixed_sum": sc.mixed_sum,
        "lhs": v.lhs,
        "rhs": Value::Object(rhs),
        "gap_delta": v.gap_delta,
        "gap_hat": v.gap_hat,
        "tol_report": v.tol_report,
        "holds_delta": v.holds_delta,
        "holds_hat": v.holds_hat,
        "verdict": v.verdict.name(),
        "equality_flags": {
            "quasi_umbilical": v.flags.quasi_umbilical,
            "off_diagonal_zero": v.flags.off_diagonal_zero,
            "a_zero": v.flags.a_zero,
            "quasi_umbilical_any_frame": v.flags.quasi_umbilical_any_frame,
        },
        "proof_polynomials": {
            "p_hv": r.polynomials.p_hv,
            "q_hv": r.polynomials.q_hv,
            "p_hv_reduced": r.polynomials.p_hv_reduced,
        },
        "residuals": residuals(a),
    });
    let obj = doc.as_object_mut().expect("object literal");
    if let Some(m) = &r.model {
        let mut mm = Map::new();
        mm.insert("family".into(), m.family.name().into());
        put(&mut mm, "c", m.c);
        mm.insert("c1".into(), m.c1.into());
        mm.insert("c2".into(), m.c2.into());
        mm.insert("c3".into(), m.c3.into());
        mm.insert("sums".into(), sums(&m.sums));
        mm.insert("riemann_residual".into(), m.riemann_residual.into());
        put(&mut mm, "structure_algebraic", m.structure_algebraic);
        put(&mut mm, "structure_compatibility", m.structure_compatibility);
        obj.insert("model".into(), Value::Object(mm));
    }
    if let Some(st) = &r.structure {
        let mut sm = Map::new();
        sm.insert("norm_p_sq".into(), st.norm_p_sq.into());
        sm.insert("norm_q_sq".into(), st.norm_q_sq.into());
        sm.insert("norm_pv_sq".into(), st.norm_pv_sq.into());
        put(&mut sm, "xi_position", st.xi_position.map(|x| x.name()));
        sm.insert("cos2".into(), json!(st.slant.cos2));
        sm.insert("angles".into(), json!(st.slant.angles));
        sm.insert(
            "classes".into(),
            st.slant
                .classes
                .iter()
                .map(|(angle, mult)| json!({"angle": angle, "multiplicity": mult}))
                .collect(),
        );
        obj.insert("structure".into(), Value::Object(sm));
    }
    doc
}

/// Components as nested arrays `[i][j][alpha]` from a flat row-major buffer.
fn cube(buf: &[f64], rows: usize, depth: usize) -> Value {
    (0..rows)
        .map(|i| {
            (0..rows)
                .map(|j| buf[(i * rows + j) * depth..(i * rows + j + 1) * depth].to_vec())
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into()
}

/// Rectangular blocks `[i][j][k]` with the given extents.
fn block(buf: &[f64], a: usize, b: usize, c: usize) -> Value {
    if a * b * c != buf.len() {
        return json!(buf);
    }
    (0..a)
        .map(|i| (0..b).map(|j| buf[(i * b + j) * c..(i * b + j + 1) * c].to_vec()).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

pub fn tensor_dump(a: &SubmersionPoint) -> Value {
    let t = &a.tensors;
    let (ell, s) = (t.ell, t.s);
    json!({
        "point": a.point,
        "n": a.n,
        "ell": ell,
        "s": s,
        "frame": {
            "vertical": a.frame_values[..ell].to_vec(),
            "horizontal": a.frame_values[ell..].to_vec(),
            "seed_vertical": a.frame.selection.vertical,
            "seed_horizontal": a.frame.selection.horizontal,
        },
        "t_h": cube(&t.t_h, ell, s),
        "a_v": cube(&t.a_v, s, ell),
        "t_mixed": block(&t.t_mixed, ell, s, ell),
        "a_mixed": block(&t.a_mixed, s, ell, s),
        "trace_t": t.trace_t,
        "trace_a": t.trace_a,
        "norms": {
            "t_h": t.norms.t_h,
            "t_v": t.norms.t_v,
            "a_v": t.norms.a_v,
            "a_h": t.norms.a_h,
            "trace_t": t.norms.trace_t,
            "trace_a": t.norms.trace_a,
        },
        "delta_n": t.delta_n,
        "residuals": residuals(a),
    })
}

pub fn envelope(source: &str, theorem: Option<&str>, key: &str, items: Vec<Value>) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), SCHEMA.into());
    m.insert("source".into(), source.into());
    put(&mut m, "theorem", theorem);
    m.insert(key.into(), Value::Array(items));
    Value::Object(m)
}

/// Fails on any `null`, which is where serde_json puts NaN and infinities.
pub fn ensure_finite(v: &Value) -> Result<()> {
    fn walk(v: &Value, path: &mut String) -> Result<()> {
        match v {
            Value::Null => bail!("non-finite value at {path}"),
            Value::Array(items) => {
                for (i, x) in items.iter().enumerate() {
                    let len = path.len();
                    path.push_str(&format!("[{i}]"));
                    walk(x, path)?;
                    path.truncate(len);
                }
                Ok(())
            }
            Value::Object(m) => {
                for (k, x) in m {
                    let len = path.len();
                    path.push('.');
                    path.push_str(k);
                    walk(x, path)?;
                    path.truncate(len);
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
    walk(v, &mut String::from("$"))
}
