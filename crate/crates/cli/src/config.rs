//! Optional TOML settings file shared by `grade` and `analyze`:
//!
//! ```toml
//! [classification]
//! k_large = 128
//! k_min = 8
//! ```
//!
//! Absent file or section means defaults. Unknown keys are rejected so
//! typos fail loudly instead of silently running with defaults.

use std::fs;
use std::path::Path;

use algebrarium_core::ClassificationConfig;
use serde::Deserialize;

use crate::errors::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    classification: Option<ClassificationConfig>,
}

pub fn load_classification(path: Option<&Path>) -> Result<ClassificationConfig, CliError> {
    let Some(path) = path else {
        return Ok(ClassificationConfig::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let file: FileConfig = toml::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(file.classification.unwrap_or_default())
}
