//! Artifact files and the manifest.

use std::path::Path;

use serde_json::json;
use sha2::{Digest, Sha256};

use crate::experiments::Artifact;

pub const MANIFEST: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Manifest text: experiment, config hash and every file with its hash,
/// sorted by name. Contains no paths outside the output directory and no
/// timestamps.
pub fn manifest(experiment: &str, config_bytes: &[u8], artifacts: &[Artifact]) -> String {
    let mut files: Vec<&Artifact> = artifacts.iter().collect();
    files.sort_by(|a, b| a.name.cmp(&b.name));
    let files: Vec<_> = files
        .iter()
        .map(|a| {
            json!({
                "file": a.name,
                "case": a.case,
                "bytes": a.bytes.len(),
                "sha256": sha256_hex(&a.bytes),
            })
        })
        .collect();
    let doc = json!({
        "experiment": experiment,
        "config_sha256": sha256_hex(config_bytes),
        "files": files,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("manifest serializes");
    text.push('\n');
    text
}

/// Writes one file per artifact, then the manifest.
pub fn write_all(dir: &Path, experiment: &str, config_bytes: &[u8], artifacts: &[Artifact]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for a in artifacts {
        std::fs::write(dir.join(&a.name), &a.bytes)?;
    }
    std::fs::write(dir.join(MANIFEST), manifest(experiment, config_bytes, artifacts))
}
