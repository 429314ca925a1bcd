//! Output inventory and the run manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliResult;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of everything that determines a run's outputs: tool version, command
/// and the resolved configuration (serialized with sorted keys).
pub fn config_hash<T: Serialize>(command: &str, resolved: &T) -> String {
    let value = serde_json::to_value(resolved).expect("configs serialize to JSON");
    let canonical = serde_json::to_string(&value).expect("JSON values serialize");
    sha256_hex(format!("fourfold {VERSION}\n{command}\n{canonical}").as_bytes())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Writes files atomically under one directory and records their hashes.
pub struct Outputs {
    root: PathBuf,
    pub files: Vec<OutputFile>,
}

impl Outputs {
    pub fn new(root: &Path) -> CliResult<Self> {
        std::fs::create_dir_all(root)?;
        Ok(Self { root: root.to_path_buf(), files: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, rel: &str, bytes: &[u8]) -> CliResult<()> {
        fourfold_core::io::write_atomic(&self.root.join(rel), bytes)?;
        self.files.push(OutputFile { path: rel.to_string(), bytes: bytes.len(), sha256: sha256_hex(bytes) });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, rel: &str, value: &T) -> CliResult<()> {
        let mut json = serde_json::to_vec_pretty(value).expect("outputs serialize to JSON");
        json.push(b'\n');
        self.write(rel, &json)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_hash: String,
    /// The configuration file as given.
    pub config_text: String,
    /// Every run after defaults, lists and `[physical]` blocks are resolved.
    pub resolved: serde_json::Value,
    pub grids: Vec<serde_json::Value>,
    pub seeds: Vec<u64>,
    pub timings_s: BTreeMap<String, f64>,
    pub outputs: Vec<OutputFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<serde_json::Value>,
}

impl RunManifest {
    pub fn new<T: Serialize>(command: &str, config_text: &str, resolved: &T) -> Self {
        Self {
            tool: "fourfold".into(),
            version: VERSION.into(),
            command: command.into(),
            config_hash: config_hash(command, resolved),
            config_text: config_text.into(),
            resolved: serde_json::to_value(resolved).expect("configs serialize to JSON"),
            grids: Vec::new(),
            seeds: Vec::new(),
            timings_s: BTreeMap::new(),
            outputs: Vec::new(),
            validation: None,
        }
    }

    /// Writes `manifest.json` last, after the inventory is complete.
    pub fn finish(mut self, out: &mut Outputs) -> CliResult<()> {
        self.outputs = out.files.clone();
        let mut json = serde_json::to_vec_pretty(&self).expect("manifest serializes");
        json.push(b'\n');
        fourfold_core::io::write_atomic(&out.root().join("manifest.json"), &json)?;
        Ok(())
    }
}
