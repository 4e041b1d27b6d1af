//! Boxed-answer extraction, exact grading, and per-instance success
//! estimates with the three-state capability classification.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Element;
use crate::domains::{parse_element, render_element};

/// Raw samples for one task (or one decomposed step; the id then carries
/// a `/s<j>` suffix).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResponseRecord {
    pub task_id: String,
    pub samples: Vec<String>,
}

/// Per-sample correctness for one record, in sample order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedRecord {
    pub task_id: String,
    pub results: Vec<bool>,
}

impl GradedRecord {
    pub fn success_count(&self) -> usize {
        self.results.iter().filter(|r| **r).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapabilityState {
    /// Success rate indistinguishable from zero at the chosen budget.
    Null,
    /// Above the detection floor but below the feasibility threshold.
    Transitional,
    /// Reachable within a small sampling budget.
    Feasible,
}

/// Thresholds for the three-state classification, derived from two
/// sampling budgets: `epsilon = 3 / k_large` (the rule-of-three
/// detection floor) and `delta = 1 / k_min` (one expected hit within
/// the smallest budget).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ClassificationConfigRaw", into = "ClassificationConfigRaw")]
pub struct ClassificationConfig {
    k_large: u32,
    k_min: u32,
}

#[derive(Serialize, Deserialize)]
struct ClassificationConfigRaw {
    k_large: u32,
    k_min: u32,
}

impl TryFrom<ClassificationConfigRaw> for ClassificationConfig {
    type Error = EvalError;

    fn try_from(raw: ClassificationConfigRaw) -> Result<Self, EvalError> {
        ClassificationConfig::new(raw.k_large, raw.k_min)
    }
}

impl From<ClassificationConfig> for ClassificationConfigRaw {
    fn from(cfg: ClassificationConfig) -> Self {
        ClassificationConfigRaw { k_large: cfg.k_large, k_min: cfg.k_min }
    }
}

impl ClassificationConfig {
    /// Requires `epsilon < delta`, so the three states partition [0, 1].
    pub fn new(k_large: u32, k_min: u32) -> Result<Self, EvalError> {
        if k_large == 0 || k_min == 0 {
            return Err(EvalError::Config("budgets must be positive".into()));
        }
        let cfg = ClassificationConfig { k_large, k_min };
        if cfg.epsilon() >= cfg.delta() {
            return Err(EvalError::Config(format!(
                "detection floor 3/{k_large} must be below feasibility threshold 1/{k_min}"
            )));
        }
        Ok(cfg)
    }

    pub fn k_large(&self) -> u32 {
        self.k_large
    }

    pub fn k_min(&self) -> u32 {
        self.k_min
    }

    /// Detection floor: below this rate, `k_large` samples are expected
    /// to miss entirely.
    pub fn epsilon(&self) -> f64 {
        3.0 / f64::from(self.k_large)
    }

    /// Feasibility threshold: at this rate one hit is expected within
    /// `k_min` samples.
    pub fn delta(&self) -> f64 {
        1.0 / f64::from(self.k_min)
    }
}

impl Default for ClassificationConfig {
    fn default() -> Self {
        ClassificationConfig::new(128, 8).expect("default thresholds are ordered")
    }
}

/// Success-rate estimate for one record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceEstimate {
    pub task_id: String,
    pub n: usize,
    pub c: usize,
    pub p_hat: f64,
    pub state: CapabilityState,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("record {task_id} has no samples")]
    EmptyRecord { task_id: String },
    #[error("invalid classification config: {0}")]
    Config(String),
}

/// Content of the last complete `\boxed{...}` in the text, brace-aware
/// and with TeX escapes of punctuation undone. `None` when no complete
/// boxed group exists.
pub fn extract_boxed(raw: &str) -> Option<String> {
    const MARKER: &str = "\\boxed{";
    let mut found = None;
    for (start, _) in raw.match_indices(MARKER) {
        let body = start + MARKER.len();
        if let Some(end) = balanced_close(raw, body) {
            found = Some((body, end));
        }
    }
    found.map(|(body, end)| unescape(raw[body..end].trim()))
}

/// Index of the `}` closing a group that opened just before `from`.
/// Escaped braces do not affect nesting.
fn balanced_close(text: &str, from: usize) -> Option<usize> {
    let mut depth = 1u32;
    let mut escaped = false;
    for (i, c) in text[from..].char_indices() {
        if escaped {
            escaped = false;
            continue;
        }
        match c {
            '\\' => escaped = true,
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(from + i);
                }
            }
            _ => {}
        }
    }
    None
}

fn unescape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.peek() {
                Some(&next) if "#{}\\%&$_".contains(next) => {
                    out.push(next);
                    chars.next();
                }
                _ => out.push(c),
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// Exact grading: parse the candidate in the truth's domain and compare
/// canonical elements. Unparseable candidates fall back to a literal
/// string comparison against the canonical rendering; an absent answer
/// is wrong.
pub fn grade(answer: Option<&str>, truth: &Element) -> bool {
    let Some(text) = answer else {
        return false;
    };
    let text = text.trim();
    match parse_element(truth.domain(), text) {
        Ok(candidate) => candidate == *truth,
        Err(_) => text == render_element(truth),
    }
}

/// Grade every sample of a record, preserving order and count.
pub fn grade_record(record: &ResponseRecord, truth: &Element) -> GradedRecord {
    let results = record
        .samples
        .iter()
        .map(|raw| grade(extract_boxed(raw).as_deref(), truth))
        .collect();
    GradedRecord { task_id: record.task_id.clone(), results }
}

/// Classify a success-rate estimate. Null is strict (`p < epsilon`),
/// feasible is inclusive (`p >= delta`).
pub fn classify(p_hat: f64, config: &ClassificationConfig) -> CapabilityState {
    if p_hat < config.epsilon() {
        CapabilityState::Null
    } else if p_hat >= config.delta() {
        CapabilityState::Feasible
    } else {
        CapabilityState::Transitional
    }
}

/// Empirical success rate `c / n` with its classification.
pub fn estimate(
    record: &GradedRecord,
    config: &ClassificationConfig,
) -> Result<InstanceEstimate, EvalError> {
    let n = record.results.len();
    if n == 0 {
        return Err(EvalError::EmptyRecord { task_id: record.task_id.clone() });
    }
    let c = record.success_count();
    let p_hat = c as f64 / n as f64;
    Ok(InstanceEstimate {
        task_id: record.task_id.clone(),
        n,
        c,
        p_hat,
        state: classify(p_hat, config),
    })
}
