//! Deterministic JSON reports: sets as sorted label lists, rationals as
//! "p/q" strings, and a digest over everything except timing.

use rnforge::hyperreal::{Verdict, Witness};
use rnforge::measure::{MeasurableSet, SignedMeasure};
use rnforge::rational::fmt_ratio;
use rnforge::Rational;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn ratio(r: &Rational) -> Value {
    Value::String(fmt_ratio(r))
}

pub fn set(s: &MeasurableSet) -> Value {
    json!(s.sorted_labels())
}

/// label ↦ weight in atom order.
pub fn weights<'a>(labels: impl IntoIterator<Item = &'a str>, values: &[Rational]) -> Value {
    let map: Map<String, Value> = labels
        .into_iter()
        .zip(values)
        .map(|(l, v)| (l.to_owned(), ratio(v)))
        .collect();
    Value::Object(map)
}

pub fn measure(m: &SignedMeasure) -> Value {
    weights(m.space().labels().iter().map(String::as_str), m.weights())
}

pub fn witness(w: &Witness) -> Value {
    match w {
        Witness::Index { index, gap } => json!({ "index": index, "gap": ratio(gap) }),
        Witness::Pair { x, y, gap } => json!({ "x": ratio(x), "y": ratio(y), "gap": ratio(gap) }),
        Witness::Limit(limit) => json!({ "limit": limit.to_string() }),
    }
}

pub fn verdict(v: &Verdict) -> Value {
    json!({
        "outcome": v.outcome.to_string(),
        "window": [v.window.0, v.window.1],
        "witness": v.witness.as_ref().map_or(Value::Null, witness),
        "reason": v.reason,
    })
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: Value,
    pub input: Value,
    pub results: Value,
    pub verification: Value,
    pub elapsed_ms: Option<u128>,
}

impl Report {
    fn body(&self) -> Map<String, Value> {
        let mut body = Map::new();
        body.insert("command".into(), self.command.clone());
        body.insert("input".into(), self.input.clone());
        body.insert("results".into(), self.results.clone());
        body.insert("verification".into(), self.verification.clone());
        body
    }

    /// SHA-256 of the compact serialization of command, input, results and
    /// verification.
    pub fn digest(&self) -> String {
        let compact = serde_json::to_string(&Value::Object(self.body())).expect("plain data serializes");
        sha256_hex(compact.as_bytes())
    }

    pub fn to_json(&self) -> String {
        let mut body = self.body();
        body.insert("report_digest".into(), Value::String(self.digest()));
        if let Some(ms) = self.elapsed_ms {
            body.insert("timing".into(), json!({ "elapsed_ms": ms }));
        }
        let mut out = serde_json::to_string_pretty(&Value::Object(body)).expect("plain data serializes");
        out.push('\n');
        out
    }
}
