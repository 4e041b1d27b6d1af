pub mod analyze;
pub mod decompose;
pub mod generate;
pub mod grade;
pub mod report;
pub mod simulate;

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use algebrarium_core::jsonl::{load_chains, load_tasks, read_jsonl};
use algebrarium_core::{DecompositionChain, ExpressionTask, InstanceEstimate};

use crate::errors::CliError;

pub const TASKS_FILE: &str = "tasks.jsonl";
pub const CHAINS_FILE: &str = "chains.jsonl";
pub const RESPONSES_FILE: &str = "responses.jsonl";
pub const ATOMIC_RESPONSES_FILE: &str = "atomic_responses.jsonl";
pub const ESTIMATES_FILE: &str = "estimates.jsonl";
pub const ATOMIC_ESTIMATES_FILE: &str = "atomic_estimates.jsonl";

/// A directory argument means "the well-known file inside it".
fn resolve(path: &Path, name: &str) -> PathBuf {
    if path.is_dir() {
        path.join(name)
    } else {
        path.to_path_buf()
    }
}

fn ensure_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_tasks(dataset: &Path) -> Result<Vec<ExpressionTask>, CliError> {
    Ok(load_tasks(&resolve(dataset, TASKS_FILE))?)
}

fn read_dataset_chains(
    dataset: &Path,
    tasks: &[ExpressionTask],
) -> Result<Vec<DecompositionChain>, CliError> {
    let domains: HashMap<String, _> =
        tasks.iter().map(|t| (t.task_id.clone(), t.domain)).collect();
    Ok(load_chains(&resolve(dataset, CHAINS_FILE), &domains)?)
}

fn read_estimates(path: &Path, default_name: &str) -> Result<Vec<InstanceEstimate>, CliError> {
    Ok(read_jsonl(&resolve(path, default_name))?)
}
