//! The run manifest: a versioned JSON document recording the configuration,
//! input fingerprint, alignment trace, sampling result and stage timings of a
//! pipeline run. Everything except the timings round-trips losslessly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::alignment::{AlignmentTrace, SearchConfig};
use crate::error::{Error, Result};
use crate::sampling::{SampleResult, SamplingConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputFingerprint {
    pub frame_count: usize,
    pub width: u32,
    pub height: u32,
    pub channels: u8,
    /// Per-frame FNV-1a hash of the raw frame bytes, hex-encoded.
    pub frame_hashes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub search: SearchConfig,
    pub sampling: SamplingConfig,
    pub sample_raw: bool,
    pub input: InputFingerprint,
    pub trace: AlignmentTrace,
    pub sample: SampleResult,
    /// Informational; excluded from behavioral comparison.
    pub timings: Vec<StageTiming>,
}

impl RunManifest {
    /// Equality on everything that determines behavior, i.e. all fields
    /// except the wall-clock timings.
    pub fn behavioral_eq(&self, other: &RunManifest) -> bool {
        self.schema_version == other.schema_version
            && self.tool_version == other.tool_version
            && self.search == other.search
            && self.sampling == other.sampling
            && self.sample_raw == other.sample_raw
            && self.input == other.input
            && self.trace == other.trace
            && self.sample == other.sample
    }
}

pub fn write_manifest(manifest: &RunManifest, path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(manifest)?;
    std::fs::write(path, json + "\n")?;
    Ok(())
}

const KNOWN_FIELDS: [&str; 9] = [
    "schema_version",
    "tool_version",
    "search",
    "sampling",
    "sample_raw",
    "input",
    "trace",
    "sample",
    "timings",
];

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let found = value
        .get("schema_version")
        .and_then(|v| v.as_u64())
        .unwrap_or(0);
    if found != SCHEMA_VERSION as u64 {
        return Err(Error::SchemaVersion {
            found,
            expected: SCHEMA_VERSION,
        });
    }
    if let Some(map) = value.as_object() {
        for key in map.keys() {
            if !KNOWN_FIELDS.contains(&key.as_str()) {
                log::warn!("ignoring unknown manifest field {key:?} in {path:?}");
            }
        }
    }
    Ok(serde_json::from_value(value)?)
}
