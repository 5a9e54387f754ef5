use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::suite::Context;

use super::AxiomReport;

/// Version of the report and declaration layout.
pub const SCHEMA_VERSION: u32 = 1;

/// One group of entries together with what is needed to re-evaluate them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub context: Context,
    pub report: AxiomReport,
}

impl Section {
    pub fn new(name: impl Into<String>, context: Context, report: AxiomReport) -> Self {
        Section {
            name: name.into(),
            context,
            report,
        }
    }

    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

/// The document written by every command. Field order and map ordering are
/// fixed, so identical inputs give identical bytes; timings are only present
/// when requested.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub input_digest: String,
    pub passed: bool,
    pub sections: Vec<Section>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<String, u64>>,
}

impl Report {
    /// Starts a report. The digest covers the command, its parameters and any
    /// input file contents.
    pub fn new(command: &str, parameters: BTreeMap<String, String>, input: &[u8]) -> Self {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        for (k, v) in &parameters {
            h.update([0u8]);
            h.update(k.as_bytes());
            h.update([b'=']);
            h.update(v.as_bytes());
        }
        h.update([0u8]);
        h.update(input);
        Report {
            schema_version: SCHEMA_VERSION,
            tool: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            parameters,
            input_digest: hex(&h.finalize()),
            passed: true,
            sections: Vec::new(),
            data: BTreeMap::new(),
            timing_ms: None,
        }
    }

    pub fn push(&mut self, section: Section) {
        self.passed &= section.passed();
        self.sections.push(section);
    }

    pub fn insert_data(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        let v = serde_json::to_value(value).map_err(|e| Error::ConstructionFailure(e.to_string()))?;
        self.data.insert(key.to_string(), v);
        Ok(())
    }

    pub fn record_time(&mut self, key: &str, ms: u64) {
        self.timing_ms.get_or_insert_with(BTreeMap::new).insert(key.to_string(), ms);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Report = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::Declaration(format!(
                "report schema version {} is not supported (expected {SCHEMA_VERSION})",
                r.schema_version
            )));
        }
        Ok(r)
    }
}

/// `sha256:` followed by the hex digest of `bytes`.
pub fn digest(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

fn hex(bytes: &[u8]) -> String {
    let mut s = String::from("sha256:");
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}
