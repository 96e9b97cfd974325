//! Report serialization shared by the command line tool: significant-digit
//! rounding for text output, exact-value strings, cochain tables, and the
//! envelope every JSON report carries.

use crate::cochain::Cochain;
use crate::context::GridContext;
use crate::numeric::{rational_str, Value};
use serde_json::{json, Map, Value as Json};

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap()
}

/// Shortest display of `x` rounded to 12 significant digits; scientific
/// notation outside a readable magnitude window.
pub fn fmt_sig12(x: f64) -> String {
    let r = sig12(x);
    if r != 0.0 && r.is_finite() && (r.abs() < 1e-4 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// Exact values render as rationals when no logarithms are involved,
/// otherwise as 12-digit decimals.
pub fn value_str(v: &Value) -> String {
    match v {
        Value::Exact(le) if le.logs.is_empty() => rational_str(&le.rat),
        other => fmt_sig12(other.to_f64()),
    }
}

/// Serializes a cochain: tables are keyed by the object tuple (ids joined
/// by `|`), each mapping a law key to the corresponding value.
pub fn cochain_json(ctx: &GridContext, f: &Cochain) -> Json {
    let mut tables = Map::new();
    for (tuple, table) in &f.tables {
        let ids: Vec<&str> = tuple.iter().map(|&i| ctx.s.id(i)).collect();
        let mut entries = Map::new();
        for (k, v) in table.values.iter().enumerate() {
            entries.insert(ctx.law(table.meet, k).key(), Json::String(value_str(v)));
        }
        tables.insert(ids.join("|"), Json::Object(entries));
    }
    json!({
        "degree": f.degree,
        "alpha": f.alpha.value(),
        "tables": Json::Object(tables),
    })
}

/// Common header carried by every report.
pub struct Envelope<'a> {
    pub command: &'a str,
    pub alphas: &'a [f64],
    pub bound: u32,
    pub tol: f64,
    pub seed: u64,
    pub inputs: &'a [String],
    pub method: &'a str,
}

impl Envelope<'_> {
    /// The report skeleton; callers add the payload under `"result"`.
    pub fn report(&self, result: Json) -> Json {
        json!({
            "tool": "infocoh",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "alpha": self.alphas,
            "N": self.bound,
            "tol": self.tol,
            "seed": self.seed,
            "inputs": self.inputs,
            "method": self.method,
            "result": result,
        })
    }
}
