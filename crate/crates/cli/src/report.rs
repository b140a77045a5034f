//! JSON and text renderings of a `check` run.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use symvec::{Count, SymbolicVector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    /// Uniform capacity; `null` is unbounded.
    pub capacity: Option<u32>,
    pub saturation: bool,
    pub max_iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportStats {
    pub iterations: usize,
    pub peak: usize,
    #[serde(rename = "final")]
    pub final_count: usize,
    pub ms: f64,
}

/// Exact counts that fit in a JSON number stay numbers; the rest become strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CountValue {
    Number(u64),
    Text(String),
}

impl From<Count> for CountValue {
    fn from(c: Count) -> Self {
        match c {
            Count::Exact(n) => match u64::try_from(n) {
                Ok(n) => CountValue::Number(n),
                Err(_) => CountValue::Text(n.to_string()),
            },
            Count::Approx(x) => CountValue::Text(format!("~{x:.3e}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub formula: String,
    /// The core formula actually evaluated.
    pub core: String,
    pub options: ReportOptions,
    pub places: Vec<String>,
    pub dim: usize,
    pub result: Vec<SymbolicVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<ReportStats>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub membership: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<CountValue>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "formula  {}", self.formula);
        let _ = writeln!(s, "core     {}", self.core);
        let _ = writeln!(s, "places   {}", self.places.join(","));
        let _ = writeln!(s, "members  {}", self.result.len());
        for m in &self.result {
            let _ = writeln!(s, "  {m}");
        }
        for (v, b) in &self.membership {
            let _ = writeln!(s, "contains {v}  {b}");
        }
        match &self.count {
            Some(CountValue::Number(n)) => {
                let _ = writeln!(s, "count    {n}");
            }
            Some(CountValue::Text(t)) => {
                let _ = writeln!(s, "count    {t}");
            }
            None => {}
        }
        if let Some(st) = &self.stats {
            let _ = writeln!(
                s,
                "stats    iterations {}  peak {}  final {}  ms {:.1}",
                st.iterations, st.peak, st.final_count, st.ms
            );
        }
        s
    }
}
