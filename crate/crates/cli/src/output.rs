//! Where results go, and the manifest written next to every file artifact.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Environment variable naming a default output directory.
pub const OUT_DIR_VAR: &str = "DEGPLANAR_OUT";

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub version: String,
    pub wall_time_ms: u128,
    pub output: String,
    pub output_sha256: String,
}

pub struct Sink {
    pub command: String,
    pub parameters: Value,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub extension: &'static str,
    pub started: Instant,
}

impl Sink {
    fn target(&self) -> Option<PathBuf> {
        if let Some(p) = &self.out {
            return Some(p.clone());
        }
        let dir = std::env::var_os(OUT_DIR_VAR)?;
        let stem = self.command.replace(' ', "-");
        Some(PathBuf::from(dir).join(format!("{stem}.{}", self.extension)))
    }

    /// Write `body` to the output file (plus manifest) or to stdout.
    pub fn emit(&self, body: &str) -> Result<()> {
        let Some(path) = self.target() else {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            return Ok(());
        };
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
        std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        let digest = Sha256::digest(body.as_bytes());
        let manifest = RunManifest {
            command: self.command.clone(),
            parameters: self.parameters.clone(),
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_ms: self.started.elapsed().as_millis(),
            output: path.display().to_string(),
            output_sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
        };
        let mut manifest_path = path.clone().into_os_string();
        manifest_path.push(".manifest.json");
        std::fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)? + "\n")
            .context("writing manifest")?;
        Ok(())
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}
