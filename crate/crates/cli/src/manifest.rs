//! Run provenance. Every subcommand writes exactly one `manifest.json`
//! into its output directory, recording what produced the files there.
//! The seed travels with the data: downstream commands that have no
//! seed of their own inherit it from their input's manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::errors::CliError;

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config_hash: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub created_unix: u64,
}

impl RunManifest {
    pub fn new(
        command: &str,
        seed: u64,
        config_hash: String,
        inputs: Vec<String>,
        outputs: Vec<String>,
    ) -> Self {
        let created_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        RunManifest {
            tool: "algebrarium".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed,
            config_hash,
            inputs,
            outputs,
            created_unix,
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join(MANIFEST_NAME);
        let body = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        fs::write(&path, body + "\n")
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}

/// Seed recorded next to `path` (the directory itself or the file's
/// parent), when a manifest is there to ask.
pub fn inherited_seed(path: &Path) -> u64 {
    let dir = if path.is_dir() { Some(path) } else { path.parent() };
    let Some(dir) = dir else { return 0 };
    let Ok(body) = fs::read_to_string(dir.join(MANIFEST_NAME)) else { return 0 };
    serde_json::from_str::<RunManifest>(&body).map(|m| m.seed).unwrap_or(0)
}

pub fn path_str(path: &Path) -> String {
    path.display().to_string()
}
