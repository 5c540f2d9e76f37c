//! Run reports.
//!
//! A report records what a command was given and what it concluded. Inputs
//! are identified by base name and SHA-256 digest; paths and timestamps are
//! left out so that repeated runs produce identical bytes.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::NumericChoice;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub mode: String,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: Option<u64>,
    pub inputs: Vec<InputDigest>,
    pub verdicts: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, Value>,
    pub exit_code: i32,
}

impl RunReport {
    pub fn new(command: &str, mode: NumericChoice, curve_tol: f64) -> Self {
        let tolerances = BTreeMap::from([
            ("normalization".to_string(), 1e-12),
            ("curve".to_string(), curve_tol),
            (
                "free_energy".to_string(),
                thermo_order_core::catalysis::FREE_ENERGY_TOL,
            ),
        ]);
        Self {
            command: command.to_string(),
            mode: mode.as_str().to_string(),
            tolerances,
            seed: None,
            inputs: Vec::new(),
            verdicts: BTreeMap::new(),
            outputs: BTreeMap::new(),
            exit_code: 0,
        }
    }

    pub fn add_input_file(&mut self, role: &str, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        self.add_input_bytes(role, &name, &bytes);
        Ok(())
    }

    pub fn add_input_bytes(&mut self, role: &str, name: &str, bytes: &[u8]) {
        self.inputs.push(InputDigest {
            role: role.into(),
            name: name.into(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn verdict(&mut self, key: &str, value: impl Into<String>) {
        self.verdicts.insert(key.into(), value.into());
    }

    pub fn output(&mut self, key: &str, value: impl Into<Value>) {
        self.outputs.insert(key.into(), value.into());
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable report");
        s.push('\n');
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
