//! Deterministic rendering: text rows and a single sorted-key JSON document
//! per invocation.

use std::io::Write;

use num::{BigInt, BigRational, Zero};
use quiverdt::coha::SymElement;
use quiverdt::dt::DtResult;
use quiverdt::ratfunc::QPoly;
use quiverdt::{Quiver, RatFunc};
use serde_json::{json, Value};

pub fn say(out: &mut dyn Write, line: &str) {
    let _ = writeln!(out, "{line}");
}

/// Emit one pretty-printed JSON document; `serde_json` maps are ordered, so
/// re-parsing and re-serializing the output is the identity.
pub fn emit_json(out: &mut dyn Write, value: &Value) {
    let text = serde_json::to_string_pretty(value).expect("JSON value serializes");
    let _ = writeln!(out, "{text}");
}

/// Integer polynomial in q (ascending coefficients) as a display object.
pub fn int_poly_q(coeffs: &[BigInt]) -> RatFunc {
    let mut v_coeffs = Vec::with_capacity(2 * coeffs.len());
    for c in coeffs {
        v_coeffs.push(BigRational::from_integer(c.clone()));
        v_coeffs.push(BigRational::zero());
    }
    RatFunc::from_poly(QPoly::from_coeffs(v_coeffs))
}

pub fn dims_line(dims: &[usize]) -> String {
    dims.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn dt_row(r: &DtResult) -> String {
    let mut line = format!("d={}: omega_tilde={}", r.d, int_poly_q(&r.omega_tilde));
    for (k, c) in &r.omegas {
        line.push_str(&format!("; Omega[k={k}]={c}"));
    }
    line
}

pub fn dt_json(r: &DtResult) -> Value {
    let omegas: Vec<Value> = r
        .omegas
        .iter()
        .map(|(k, c)| json!({"k": k, "value": c.to_string()}))
        .collect();
    json!({
        "d": r.d.entries(),
        "chi": r.chi,
        "omega_tilde": int_poly_q(&r.omega_tilde).to_string(),
        "omegas": omegas,
    })
}

pub fn quiver_json(q: &Quiver) -> Value {
    let n = q.num_vertices();
    let arrows: Vec<Vec<u32>> = (0..n)
        .map(|i| (0..n).map(|j| q.arrow_mult(i, j)).collect())
        .collect();
    json!({"vertices": q.vertex_names(), "arrows": arrows})
}

pub fn element_json(el: &SymElement) -> Value {
    let terms: Vec<Value> = el
        .terms()
        .map(|(m, c)| json!({"coeff": c.to_string(), "monomial": m.to_string()}))
        .collect();
    json!({
        "d": el.d().entries(),
        "degree": el.degree(),
        "terms": terms,
    })
}
