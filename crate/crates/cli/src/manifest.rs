//! Sidecar run manifests: every file-producing subcommand writes
//! `<output>.manifest.json` describing the fully resolved run. Primary
//! outputs stay byte-deterministic; wall-clock data lives only here.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;
use std::time::Instant;

#[derive(Serialize)]
pub struct RunManifest {
    pub subcommand: &'static str,
    pub version: &'static str,
    pub config: serde_json::Value,
    pub input_hashes: Vec<InputHash>,
    pub output_sha256: String,
    pub duration_ms: u128,
    pub extra: serde_json::Value,
}

#[derive(Serialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

pub struct ManifestBuilder {
    subcommand: &'static str,
    started: Instant,
    inputs: Vec<InputHash>,
}

impl ManifestBuilder {
    pub fn new(subcommand: &'static str) -> Self {
        Self {
            subcommand,
            started: Instant::now(),
            inputs: Vec::new(),
        }
    }

    pub fn hash_input(&mut self, path: &Path) -> std::io::Result<()> {
        let bytes = std::fs::read(path)?;
        let digest = Sha256::digest(&bytes);
        self.inputs.push(InputHash {
            path: path.display().to_string(),
            sha256: format!("{digest:x}"),
        });
        Ok(())
    }

    pub fn write(
        self,
        target: &Path,
        config: serde_json::Value,
        extra: serde_json::Value,
    ) -> std::io::Result<()> {
        let output_sha256 = std::fs::read(target)
            .map(|bytes| format!("{:x}", Sha256::digest(&bytes)))
            .unwrap_or_default();
        let manifest = RunManifest {
            subcommand: self.subcommand,
            version: env!("CARGO_PKG_VERSION"),
            config,
            input_hashes: self.inputs,
            output_sha256,
            duration_ms: self.started.elapsed().as_millis(),
            extra,
        };
        let mut name = target
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "out".into());
        name.push_str(".manifest.json");
        let path = target.with_file_name(name);
        std::fs::write(path, serde_json::to_string_pretty(&manifest)?)
    }
}
