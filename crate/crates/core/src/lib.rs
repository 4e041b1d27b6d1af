//! Workbench for studying multi-step reasoning as a product of
//! per-step success probabilities, built on four synthetic algebraic
//! domains with exact graders.
//!
//! The crate follows the pipeline
//! generate → decompose → simulate → grade → analyze:
//!
//! - [`algebra`]: domain-tagged canonical elements and group operations;
//! - [`domains`]: concrete grammars and canonicalization for the four systems;
//! - [`taskgen`]: seeded dataset construction, decomposition, prompt templates;
//! - [`eval`]: boxed-answer extraction, grading, capability classification;
//! - [`simulator`]: a stochastic agent with configurable per-step accuracy;
//! - [`analytics`]: Pass@k curves, decay fits, emergence and shift reports;
//! - [`report`]: CSV tables and SVG charts;
//! - [`jsonl`]: the shared line-oriented interchange formats.

pub mod algebra;
pub mod analytics;
pub mod domains;
pub mod eval;
pub mod jsonl;
pub mod report;
pub mod simulator;
pub mod taskgen;
mod util;

pub use algebra::{
    combine, fold_chain, identity, inverse, solve_for_x, solve_for_x_right, AlgebraError,
    AlgebraSpec, Cardinality, DomainId, Element,
};
pub use domains::{parse_element, render_element, ParseError};
pub use eval::{
    classify, estimate, extract_boxed, grade, grade_record, CapabilityState, ClassificationConfig,
    EvalError, GradedRecord, InstanceEstimate, ResponseRecord,
};
pub use simulator::{
    simulate_atomic, simulate_composite, step_record_id, AgentProfile, ErrorModel, SimError,
};
pub use taskgen::{
    decompose, generate_dataset, render_prompt, render_step_prompt, sample_element, AtomicStep,
    DecompositionChain, ExpressionTask, GenError, GenerationConfig, OperandBounds, Split, TaskMode,
};
pub use util::short_hash;
