use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use nborient_core::space::Space;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceSummary {
    pub name: String,
    pub dimension: Option<usize>,
    pub f_vector: Vec<usize>,
    pub euler_characteristic: i64,
    pub simplicial: bool,
    pub compact: bool,
    pub has_boundary: bool,
    pub alexandrov: bool,
    pub positively_curved: bool,
    pub metric: bool,
}

impl SpaceSummary {
    pub fn of(s: &Space) -> SpaceSummary {
        SpaceSummary {
            name: s.name.clone(),
            dimension: s.complex.dimension(),
            f_vector: s.complex.f_vector(),
            euler_characteristic: s.complex.euler_characteristic(),
            simplicial: s.complex.is_simplicial(),
            compact: s.is_compact(),
            has_boundary: s.boundary.is_some(),
            alexandrov: s.alexandrov,
            positively_curved: s.positively_curved,
            metric: s.metric.is_some(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub command: String,
    pub spec: Value,
    pub options: BTreeMap<String, Value>,
    pub space: Option<SpaceSummary>,
    /// Human-readable lines.
    pub summary: Vec<String>,
    pub result: Value,
    /// How each reported quantity was obtained.
    pub provenance: BTreeMap<String, String>,
    pub falsifications: Vec<String>,
}

impl Report {
    pub fn new(command: &str, spec: Value, options: BTreeMap<String, Value>) -> Report {
        Report {
            tool: format!("nborient {}", env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            spec,
            options,
            space: None,
            summary: Vec::new(),
            result: Value::Null,
            provenance: BTreeMap::new(),
            falsifications: Vec::new(),
        }
    }

    pub fn falsified(&self) -> bool {
        !self.falsifications.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn provenance(&mut self, key: &str, how: &str) {
        self.provenance.insert(key.to_string(), how.to_string());
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.summary.push(text.into());
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        let name = self.space.as_ref().map_or("-", |s| s.name.as_str());
        out.push_str(&format!("{} {}\n", self.command, name));
        for l in &self.summary {
            out.push_str(&format!("  {l}\n"));
        }
        if self.falsifications.is_empty() {
            out.push_str("  no falsification events\n");
        } else {
            for f in &self.falsifications {
                out.push_str(&format!("  FALSIFIED: {f}\n"));
            }
        }
        out
    }
}
