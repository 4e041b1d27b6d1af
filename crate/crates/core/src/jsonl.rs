//! Line-oriented interchange formats: one JSON object per line, with
//! elements carried as canonical strings. Read errors name the file and
//! 1-based line.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::DomainId;
use crate::domains::{parse_element, render_element};
use crate::taskgen::{
    render_prompt, render_step_prompt, AtomicStep, DecompositionChain, ExpressionTask, Split,
    TaskMode,
};

#[derive(Debug, Error)]
pub enum JsonlError {
    #[error("{path}:{line}: {message}")]
    Malformed { path: String, line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl JsonlError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        JsonlError::Io { path: path.display().to_string(), source }
    }

    fn malformed(path: &Path, line: usize, message: impl Into<String>) -> Self {
        JsonlError::Malformed { path: path.display().to_string(), line, message: message.into() }
    }
}

/// One task per line in `tasks.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskRow {
    pub task_id: String,
    pub domain: DomainId,
    pub depth: u32,
    pub mode: TaskMode,
    pub operands: Vec<String>,
    pub answer: String,
    pub split: Split,
    pub prompt: String,
}

impl TaskRow {
    pub fn from_task(task: &ExpressionTask) -> Self {
        TaskRow {
            task_id: task.task_id.clone(),
            domain: task.domain,
            depth: task.depth,
            mode: task.mode,
            operands: task.operands.iter().map(render_element).collect(),
            answer: render_element(&task.answer),
            split: task.split,
            prompt: render_prompt(task),
        }
    }

    pub fn into_task(self) -> Result<ExpressionTask, String> {
        let operands = self
            .operands
            .iter()
            .map(|s| parse_element(self.domain, s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let answer = parse_element(self.domain, &self.answer).map_err(|e| e.to_string())?;
        Ok(ExpressionTask {
            task_id: self.task_id,
            domain: self.domain,
            depth: self.depth,
            mode: self.mode,
            operands,
            answer,
            split: self.split,
        })
    }
}

/// One step of a `chains.jsonl` row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRow {
    pub j: u32,
    pub left: String,
    pub right: String,
    pub truth: String,
    pub prompt: String,
}

/// One decomposition per line in `chains.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainRow {
    pub task_id: String,
    pub steps: Vec<StepRow>,
}

impl ChainRow {
    pub fn from_chain(chain: &DecompositionChain) -> Self {
        ChainRow {
            task_id: chain.task_id.clone(),
            steps: chain
                .steps
                .iter()
                .map(|step| StepRow {
                    j: step.index,
                    left: render_element(&step.left),
                    right: render_element(&step.right),
                    truth: render_element(&step.truth),
                    prompt: render_step_prompt(step),
                })
                .collect(),
        }
    }

    /// Element strings need a domain; chains carry none, so the caller
    /// supplies the task's domain.
    pub fn into_chain(self, domain: DomainId) -> Result<DecompositionChain, String> {
        let steps = self
            .steps
            .into_iter()
            .map(|row| {
                Ok(AtomicStep {
                    index: row.j,
                    left: parse_element(domain, &row.left).map_err(|e| e.to_string())?,
                    right: parse_element(domain, &row.right).map_err(|e| e.to_string())?,
                    truth: parse_element(domain, &row.truth).map_err(|e| e.to_string())?,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(DecompositionChain { task_id: self.task_id, steps })
    }
}

/// Serialize rows, one compact JSON object per line.
pub fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), JsonlError> {
    let file = File::create(path).map_err(|e| JsonlError::io(path, e))?;
    let mut out = BufWriter::new(file);
    for row in rows {
        let line = serde_json::to_string(row)
            .map_err(|e| JsonlError::io(path, std::io::Error::other(e)))?;
        out.write_all(line.as_bytes()).map_err(|e| JsonlError::io(path, e))?;
        out.write_all(b"\n").map_err(|e| JsonlError::io(path, e))?;
    }
    out.flush().map_err(|e| JsonlError::io(path, e))
}

/// Parse rows; blank lines are rejected, not skipped, so files stay
/// byte-reproducible.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, JsonlError> {
    let file = File::open(path).map_err(|e| JsonlError::io(path, e))?;
    let reader = BufReader::new(file);
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| JsonlError::io(path, e))?;
        let row = serde_json::from_str(&line)
            .map_err(|e| JsonlError::malformed(path, i + 1, e.to_string()))?;
        rows.push(row);
    }
    Ok(rows)
}

/// Read `tasks.jsonl` into domain tasks.
pub fn load_tasks(path: &Path) -> Result<Vec<ExpressionTask>, JsonlError> {
    let rows: Vec<TaskRow> = read_jsonl(path)?;
    rows.into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_task().map_err(|message| JsonlError::malformed(path, i + 1, message))
        })
        .collect()
}

/// Read `chains.jsonl`, resolving each chain's domain through its task.
pub fn load_chains(
    path: &Path,
    domain_by_task: &HashMap<String, DomainId>,
) -> Result<Vec<DecompositionChain>, JsonlError> {
    let rows: Vec<ChainRow> = read_jsonl(path)?;
    rows.into_iter()
        .enumerate()
        .map(|(i, row)| {
            let domain = domain_by_task.get(&row.task_id).copied().ok_or_else(|| {
                JsonlError::malformed(path, i + 1, format!("unknown task id {}", row.task_id))
            })?;
            row.into_chain(domain)
                .map_err(|message| JsonlError::malformed(path, i + 1, message))
        })
        .collect()
}
