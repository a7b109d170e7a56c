//! JSON encodings. Elements are arrays of little-endian base-p digit vectors, one
//! per basis coordinate; the digit count is the known precision. A bare integer
//! is accepted for a constant element.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::equations::{EquationKind, EquationSpec, EquationType, PrimeIntegral, SolveReport};
use crate::error::{Error, Result};
use crate::galois::{Constancy, GaloisReport};
use crate::padic_matrix::PMatrix;
use crate::padic_ring::{RingContext, RingElement};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field \"{key}\"")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| parse_err(format!("{what} must be a non-negative integer")))
}

pub fn element_to_json(e: &RingElement) -> Value {
    json!(e.digits())
}

pub fn element_from_json(ring: &Arc<RingContext>, v: &Value) -> Result<RingElement> {
    if let Some(i) = v.as_i64() {
        return Ok(ring.from_int(i));
    }
    let coords = v
        .as_array()
        .ok_or_else(|| parse_err("element must be an integer or an array of digit arrays"))?;
    if coords.len() != ring.degree() {
        return Err(parse_err(format!(
            "element has {} coordinates, the ring has degree {}",
            coords.len(),
            ring.degree()
        )));
    }
    let p = ring.p();
    let mut prec = None;
    let mut values = Vec::with_capacity(coords.len());
    for c in coords {
        let digits = c
            .as_array()
            .ok_or_else(|| parse_err("coordinate must be an array of digits"))?;
        if *prec.get_or_insert(digits.len()) != digits.len() {
            return Err(parse_err("all coordinates must carry the same number of digits"));
        }
        if digits.len() > ring.precision() as usize {
            return Err(parse_err(format!(
                "{} digits exceed the precision N = {}",
                digits.len(),
                ring.precision()
            )));
        }
        let mut value = 0u64;
        for d in digits.iter().rev() {
            let d = as_u64(d, "digit")?;
            if d >= p {
                return Err(parse_err(format!("digit {d} is not below p = {p}")));
            }
            value = value * p + d;
        }
        values.push(value);
    }
    ring.from_coords_with_prec(&values, prec.unwrap_or(0) as u32)
}

pub fn context_to_json(ring: &RingContext) -> Value {
    json!({
        "p": ring.p(),
        "m": ring.degree(),
        "N": ring.precision(),
        "modulus": ring.modulus(),
    })
}

pub fn context_from_json(v: &Value) -> Result<Arc<RingContext>> {
    let p = as_u64(field(v, "p")?, "p")?;
    let prec = as_u64(field(v, "N")?, "N")?;
    let prec = u32::try_from(prec).map_err(|_| parse_err("N is too large"))?;
    let modulus: Vec<u64> = field(v, "modulus")?
        .as_array()
        .ok_or_else(|| parse_err("modulus must be an array"))?
        .iter()
        .map(|c| as_u64(c, "modulus coefficient"))
        .collect::<Result<_>>()?;
    if let Some(m) = v.get("m") {
        if as_u64(m, "m")? as usize + 1 != modulus.len() {
            return Err(parse_err("m does not match the modulus degree"));
        }
    }
    RingContext::with_modulus(p, prec, &modulus)
}

pub fn matrix_to_json(a: &PMatrix) -> Value {
    json!({
        "n": a.n(),
        "entries": a.entries().iter().map(element_to_json).collect::<Vec<_>>(),
    })
}

/// `{"n": n, "entries": [...]}` with n^2 entries in row-major order.
pub fn matrix_from_json(ring: &Arc<RingContext>, v: &Value) -> Result<PMatrix> {
    let n = as_u64(field(v, "n")?, "n")? as usize;
    let entries = field(v, "entries")?
        .as_array()
        .ok_or_else(|| parse_err("entries must be an array"))?;
    if entries.len() != n * n {
        return Err(parse_err(format!("expected {} entries, got {}", n * n, entries.len())));
    }
    let entries = entries
        .iter()
        .map(|e| element_from_json(ring, e))
        .collect::<Result<Vec<_>>>()?;
    PMatrix::new(ring, n, entries)
}

fn expansions(a: &PMatrix) -> Value {
    json!(a.entries().iter().map(RingElement::expansion).collect::<Vec<_>>())
}

fn kind_fields(kind: EquationKind) -> (Value, Value) {
    match kind.variant() {
        Some(v) => (json!("so"), json!(v.name())),
        None => (json!(kind.name()), Value::Null),
    }
}

pub fn spec_to_json(spec: &EquationSpec) -> Value {
    let (kind, variant) = kind_fields(spec.kind());
    json!({
        "kind": kind,
        "variant": variant,
        "n": spec.n(),
        "alpha": matrix_to_json(spec.alpha()),
        "ring": context_to_json(spec.ring()),
    })
}

pub fn spec_from_json(v: &Value) -> Result<EquationSpec> {
    let ring = context_from_json(field(v, "ring")?)?;
    let kind = field(v, "kind")?
        .as_str()
        .ok_or_else(|| parse_err("kind must be a string"))?;
    let variant = v.get("variant").and_then(Value::as_str);
    let kind = EquationKind::parse(kind, variant)?;
    let n = as_u64(field(v, "n")?, "n")? as usize;
    let alpha = matrix_from_json(&ring, field(v, "alpha")?)?;
    EquationSpec::new(EquationType::new(&ring, kind, n)?, alpha)
}

pub fn integrals_to_json(integrals: &[PrimeIntegral]) -> Value {
    Value::Array(
        integrals
            .iter()
            .map(|i| {
                json!({
                    "name": i.name,
                    "value": i.value.iter().map(element_to_json).collect::<Vec<_>>(),
                    "delta": i.delta.iter().map(element_to_json).collect::<Vec<_>>(),
                    "vanishes": i.vanishes(),
                })
            })
            .collect(),
    )
}

pub fn solve_report_to_json(spec: &EquationSpec, u0: &PMatrix, report: &SolveReport) -> Value {
    json!({
        "spec": spec_to_json(spec),
        "u0": matrix_to_json(u0),
        "solution": matrix_to_json(&report.solution),
        "solution_expansion": expansions(&report.solution),
        "iterations": report.iterations,
        "residual_valuation": report.residual_valuation,
        "prime_integrals": integrals_to_json(&report.integral_values),
        "fixedness": report.fixedness,
    })
}

pub fn constancy_to_json(c: &Constancy) -> Value {
    json!({
        "det_delta": element_to_json(&c.det_delta),
        "form_delta": c.form_delta.as_ref().map(matrix_to_json),
        "claimed": c.claimed,
        "holds": c.holds(),
    })
}

pub fn galois_report_to_json(r: &GaloisReport) -> Value {
    let notes: Vec<Value> = r
        .notes
        .iter()
        .map(|n| json!({"name": n.name, "passed": n.passed}))
        .collect();
    json!({
        "candidate": matrix_to_json(&r.candidate),
        "candidate_expansion": expansions(&r.candidate),
        "in_Gu": r.in_gu,
        "in_N_delta": r.in_n_delta,
        "constancy": r.constancy.as_ref().map(constancy_to_json),
        "order": r.order,
        "notes": notes,
        "passed": r.passed(),
    })
}

/// Compact, newline-terminated; keys come out sorted because `Map` is a `BTreeMap`.
pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}
