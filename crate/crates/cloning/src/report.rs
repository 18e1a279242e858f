//! Structured command reports: deterministic key ordering, lossless JSON
//! round-trips, and a verdict list where every judgement carries the
//! tolerance it was made with.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub claim: String,
    pub pass: bool,
    /// Key into the report's tolerance map.
    pub tolerance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub dimension: usize,
    pub parameters: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(command: &str, dimension: usize, seed: u64) -> Self {
        Self {
            command: command.to_string(),
            dimension,
            parameters: BTreeMap::new(),
            results: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            seed,
            verdicts: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    /// Records a pass/fail judgement together with the tolerance it used.
    pub fn verdict(&mut self, claim: &str, pass: bool, tol_key: &str, tol: f64) -> &mut Self {
        self.tolerances.insert(tol_key.to_string(), tol);
        self.verdicts.push(Verdict {
            claim: claim.to_string(),
            pass,
            tolerance: tol_key.to_string(),
        });
        self
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("dimension: {}\n", self.dimension));
        out.push_str(&format!("seed: {}\n", self.seed));
        if !self.parameters.is_empty() {
            out.push_str("parameters:\n");
            for (k, v) in &self.parameters {
                out.push_str(&format!("  {k}: {v}\n"));
            }
        }
        out.push_str("results:\n");
        for (k, v) in &self.results {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        if !self.tolerances.is_empty() {
            out.push_str("tolerances:\n");
            for (k, v) in &self.tolerances {
                out.push_str(&format!("  {k}: {v:e}\n"));
            }
        }
        out.push_str("verdicts:\n");
        for v in &self.verdicts {
            let mark = if v.pass { "pass" } else { "FAIL" };
            out.push_str(&format!("  [{mark}] {} (tol: {})\n", v.claim, v.tolerance));
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.all_pass() { "PASS" } else { "FAIL" }
        ));
        out
    }
}
