//! Structured-report helpers. Integers travel as strings, rationals as
//! `[num, den]` string pairs.

use modkernel::group::GroupStructure;
use modkernel::{Rational, SL2NMatrix};
use serde_json::{json, Value};

pub const SCHEMA: &str = "modkernel-report/1";

pub fn int(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

pub fn rational(q: &Rational) -> Value {
    json!([q.numer().to_string(), q.denom().to_string()])
}

pub fn matrix(m: &SL2NMatrix) -> Value {
    json!([[int(m.a), int(m.b)], [int(m.c), int(m.d)]])
}

pub fn structure(g: &GroupStructure) -> Value {
    json!({
        "order": int(g.order),
        "exponent": int(g.exponent),
        "abelian_invariants": g.abelian_invariants.as_ref().map(|v| v.iter().map(int).collect::<Vec<_>>()),
        "description": g.describe(),
    })
}

pub fn envelope(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema": SCHEMA, "command": command });
    if let (Some(obj), Value::Object(extra)) = (v.as_object_mut(), body) {
        obj.extend(extra);
    }
    v
}

pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}
