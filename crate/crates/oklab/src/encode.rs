//! JSON and text forms of exact values. Rationals are `[num, den]` pairs in
//! JSON and `num/den` strings in CSV.

use anyhow::{anyhow, bail, Context, Result};
use oklab_core::additivity::{AdditivityVerdict, ReplayTrace};
use oklab_core::inequalities::{InequalityRecord, InputValue};
use oklab_core::okounkov::NOBody;
use oklab_core::{Polytope, Rat, RatVec};
use serde_json::{json, Value};

pub fn rat(r: Rat) -> Value {
    json!([r.numer(), r.denom()])
}

pub fn ratvec(v: &RatVec) -> Value {
    Value::Array(v.iter().map(|r| rat(*r)).collect())
}

pub fn polytope(p: &Polytope) -> Value {
    json!({
        "dim": p.dim(),
        "vertices": p.vertices().iter().map(ratvec).collect::<Vec<_>>(),
    })
}

pub fn nobody(b: &NOBody) -> Value {
    let mut v = polytope(&b.body);
    let obj = v.as_object_mut().unwrap();
    obj.insert("flag".into(), json!({ "cone": b.flag.cone() }));
    obj.insert("class".into(), ratvec(&b.class));
    obj.insert("m_used".into(), json!(b.m_used));
    obj.insert("exact".into(), json!(b.exact));
    v
}

pub fn record(r: &InequalityRecord) -> Value {
    let inputs: serde_json::Map<String, Value> = r
        .inputs
        .iter()
        .map(|(k, v)| {
            let v = match v {
                InputValue::Class(c) => ratvec(c),
                InputValue::Vertices(vs) => Value::Array(vs.iter().map(ratvec).collect()),
                InputValue::Int(i) => json!(i),
            };
            (k.clone(), v)
        })
        .collect();
    json!({
        "name": r.name,
        "lhs": rat(r.lhs),
        "rhs": rat(r.rhs),
        "slack": rat(r.slack),
        "tight": r.tight,
        "inputs": inputs,
        "seed": r.seed,
    })
}

pub fn verdict(v: &AdditivityVerdict) -> Value {
    json!({
        "status": format!("{:?}", v.status).to_lowercase(),
        "volumes": v.volumes.iter().map(|r| rat(*r)).collect::<Vec<_>>(),
        "witness": v.witness.as_ref().map(|(p, n, o)| json!({
            "vertex": ratvec(p),
            "normal": ratvec(n),
            "offset": rat(*o),
        })),
    })
}

pub fn trace(t: &ReplayTrace) -> Value {
    json!({
        "t": rat(t.t),
        "t0": rat(t.t0),
        "r": rat(t.r),
        "swapped": t.swapped,
        "case": if t.case_at_least_t0 { "t>=t0" } else { "t<t0" },
        "steps": t.steps.iter().map(|s| json!({
            "name": s.name,
            "holds": s.holds,
            "body": s.body.as_ref().map(polytope),
        })).collect::<Vec<_>>(),
    })
}

/// `3`, `-1/2`, `[1, 2]` or `"1/2"`.
pub fn parse_rat_value(v: &Value) -> Result<Rat> {
    match v {
        Value::Number(n) => n.as_i64().map(Rat::from).ok_or_else(|| anyhow!("not an integer: {n}")),
        Value::String(s) => parse_rat(s),
        Value::Array(a) if a.len() == 2 => {
            let num = a[0].as_i64().ok_or_else(|| anyhow!("bad numerator in {v}"))?;
            let den = a[1].as_i64().ok_or_else(|| anyhow!("bad denominator in {v}"))?;
            if den == 0 {
                bail!("zero denominator in {v}");
            }
            Ok(Rat::new(num.into(), den.into()))
        }
        other => bail!("not a rational: {other}"),
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().with_context(|| format!("bad numerator in {s:?}"))?;
            let d: i128 = d.trim().parse().with_context(|| format!("bad denominator in {s:?}"))?;
            if d == 0 {
                bail!("zero denominator in {s:?}");
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from(s.parse::<i128>().with_context(|| format!("not a rational: {s:?}"))?)),
    }
}

/// Comma-separated rationals.
pub fn parse_list(s: &str) -> Result<Vec<Rat>> {
    s.split(',').map(parse_rat).collect()
}

/// `{"coeffs": [...]}` or a bare array.
pub fn parse_divisor(v: &Value) -> Result<Vec<Rat>> {
    let arr = v.get("coeffs").unwrap_or(v).as_array().ok_or_else(|| anyhow!("divisor must be an array or {{\"coeffs\": [...]}}"))?;
    arr.iter().map(parse_rat_value).collect()
}

pub fn parse_polytope(v: &Value) -> Result<Polytope> {
    let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| anyhow!("polytope needs \"dim\""))? as usize;
    let verts = v.get("vertices").and_then(Value::as_array).ok_or_else(|| anyhow!("polytope needs \"vertices\""))?;
    let pts = verts
        .iter()
        .map(|p| {
            let coords = p.as_array().ok_or_else(|| anyhow!("vertex must be an array"))?;
            Ok(RatVec(coords.iter().map(parse_rat_value).collect::<Result<Vec<_>>>()?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Polytope::hull_in(dim, &pts)?)
}

/// `n/d` text for CSV.
pub fn flat(v: &Value) -> String {
    match v {
        Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_i64) => {
            let (n, d) = (a[0].as_i64().unwrap(), a[1].as_i64().unwrap());
            if d == 1 {
                n.to_string()
            } else {
                format!("{n}/{d}")
            }
        }
        Value::Array(a) => format!("({})", a.iter().map(flat).collect::<Vec<_>>().join(" ")),
        Value::Object(o) => o.iter().map(|(k, v)| format!("{k}={}", flat_field(k, v))).collect::<Vec<_>>().join(";"),
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Ray-index lists are not rationals even when they have two entries.
fn flat_field(key: &str, v: &Value) -> String {
    match v {
        Value::Array(a) if matches!(key, "cone" | "flag") => format!("({})", a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")),
        _ => flat(v),
    }
}
