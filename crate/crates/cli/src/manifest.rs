use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = concat!("scopt ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputRecord {
    /// File path as given, or `bundled:<name>` / `preset:<name>`.
    pub source: String,
    pub sha256: String,
}

impl InputRecord {
    pub fn new(source: impl Into<String>, content: &[u8]) -> Self {
        Self {
            source: source.into(),
            sha256: hex::encode(Sha256::digest(content)),
        }
    }
}

/// The part of a run's description that determines its outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestCore {
    pub command: String,
    pub settings: BTreeMap<String, serde_json::Value>,
    pub inputs: Vec<InputRecord>,
    pub presets: Vec<String>,
    pub seed: u64,
    pub tool_version: String,
}

impl ManifestCore {
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("manifest serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    #[serde(flatten)]
    pub core: ManifestCore,
    pub digest: String,
    pub output_dir: Option<String>,
    pub timestamp_unix: u64,
}

impl RunManifest {
    pub fn new(core: ManifestCore, output_dir: Option<String>) -> Self {
        let timestamp_unix = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Self {
            digest: core.digest(),
            core,
            output_dir,
            timestamp_unix,
        }
    }
}
