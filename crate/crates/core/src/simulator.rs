//! A stochastic reference agent. Each decomposed step succeeds
//! independently with a configured probability; a composite attempt
//! succeeds only when every step does, and a failed attempt reports a
//! corrupted but well-formed answer. The agent exists to drive the
//! analytics with known ground-truth probabilities.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{combine, DomainId, Element};
use crate::domains::render_element;
use crate::eval::ResponseRecord;
use crate::taskgen::{sample_element, AtomicStep, DecompositionChain, ExpressionTask, OperandBounds};
use crate::util::derive_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ErrorModel {
    /// A failed attempt multiplies the truth by a random non-identity
    /// element, so wrong answers stay parseable and domain-typed.
    #[default]
    CorruptByRandomFactor,
}

/// Success probabilities for the simulated agent.
///
/// `step_success` gives one probability per domain; the optional
/// `step_success_by_index` overrides it per 1-based step position, for
/// agents whose accuracy drifts along the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentProfile {
    pub label: String,
    pub seed: u64,
    pub step_success: BTreeMap<DomainId, f64>,
    pub step_success_by_index: Vec<f64>,
    pub error_model: ErrorModel,
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("profile '{label}' has no success probability for {domain}")]
    ProfileMismatch { label: String, domain: DomainId },
    #[error("chain does not belong to task {task_id}")]
    ChainMismatch { task_id: String },
    #[error("invalid profile: {0}")]
    Config(String),
}

/// Flat TOML schema, mirroring [`AgentProfile`] with one
/// `p_<domain>` key per domain.
#[derive(Serialize, Deserialize)]
struct ProfileToml {
    label: String,
    seed: u64,
    p_encrypted_history: Option<f64>,
    p_enigma: Option<f64>,
    p_knitting: Option<f64>,
    p_rubiks_cube: Option<f64>,
    #[serde(default)]
    step_success_by_index: Vec<f64>,
    #[serde(default)]
    error_model: ErrorModel,
}

fn check_probability(label: &str, p: f64) -> Result<f64, SimError> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(SimError::Config(format!("{label} must lie in [0, 1], got {p}")))
    }
}

impl AgentProfile {
    /// One probability for every domain.
    pub fn uniform(label: impl Into<String>, seed: u64, p: f64) -> Self {
        AgentProfile {
            label: label.into(),
            seed,
            step_success: DomainId::ALL.iter().map(|d| (*d, p)).collect(),
            step_success_by_index: Vec::new(),
            error_model: ErrorModel::CorruptByRandomFactor,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, SimError> {
        let raw: ProfileToml =
            toml::from_str(text).map_err(|e| SimError::Config(e.to_string()))?;
        let mut step_success = BTreeMap::new();
        let pairs = [
            (DomainId::EncryptedHistory, raw.p_encrypted_history),
            (DomainId::Enigma, raw.p_enigma),
            (DomainId::Knitting, raw.p_knitting),
            (DomainId::RubiksCube, raw.p_rubiks_cube),
        ];
        for (domain, p) in pairs {
            if let Some(p) = p {
                step_success.insert(domain, check_probability(&format!("p_{domain}"), p)?);
            }
        }
        for (i, p) in raw.step_success_by_index.iter().enumerate() {
            check_probability(&format!("step_success_by_index[{i}]"), *p)?;
        }
        Ok(AgentProfile {
            label: raw.label,
            seed: raw.seed,
            step_success,
            step_success_by_index: raw.step_success_by_index,
            error_model: raw.error_model,
        })
    }

    /// Success probability of step `index` (1-based) in `domain`.
    fn step_probability(&self, domain: DomainId, index: u32) -> Result<f64, SimError> {
        let p = match self.step_success_by_index.get(index as usize - 1) {
            Some(p) => *p,
            None => self
                .step_success
                .get(&domain)
                .copied()
                .ok_or(SimError::ProfileMismatch { label: self.label.clone(), domain })?,
        };
        check_probability(&format!("step probability for {domain}"), p)
    }
}

/// Stable id for the responses of one decomposed step.
pub fn step_record_id(task_id: &str, step_index: u32) -> String {
    format!("{task_id}/s{step_index}")
}

/// Inverse of [`step_record_id`]; `None` for plain task ids.
pub fn parse_step_record_id(record_id: &str) -> Option<(&str, u32)> {
    let (task_id, step) = record_id.rsplit_once("/s")?;
    step.parse().ok().map(|index| (task_id, index))
}

/// Random non-identity element of the same domain, combined with the
/// truth. Resampled until the product differs from the truth.
fn corrupt<R: Rng>(truth: &Element, rng: &mut R) -> Element {
    let bounds = OperandBounds::default();
    loop {
        let factor = sample_element(truth.domain(), &bounds, rng)
            .expect("default bounds are valid");
        if factor.is_identity() {
            continue;
        }
        let wrong = combine(truth, &factor).expect("same domain");
        debug_assert_ne!(&wrong, truth);
        return wrong;
    }
}

fn boxed(text: &str) -> String {
    format!("The answer is \\boxed{{{text}}}.")
}

fn sample_stream(profile_seed: u64, record_id: &str, sample: usize) -> ChaCha8Rng {
    let seed = profile_seed.to_string();
    let sample = sample.to_string();
    derive_rng("sim", &[seed.as_str(), record_id, sample.as_str()])
}

fn render_attempt<R: Rng>(success: bool, truth: &Element, rng: &mut R) -> String {
    if success {
        boxed(&render_element(truth))
    } else {
        boxed(&render_element(&corrupt(truth, rng)))
    }
}

/// Simulate `n` attempts at the whole chain. An attempt succeeds only
/// when every step succeeds, so the per-attempt success probability is
/// the product of the step probabilities.
pub fn simulate_composite(
    task: &ExpressionTask,
    chain: &DecompositionChain,
    profile: &AgentProfile,
    n: usize,
) -> Result<ResponseRecord, SimError> {
    if chain.task_id != task.task_id
        || chain.steps.len() != task.depth as usize
        || chain.steps.last().map(|s| &s.truth) != Some(&task.answer)
    {
        return Err(SimError::ChainMismatch { task_id: task.task_id.clone() });
    }
    let probabilities: Vec<f64> = chain
        .steps
        .iter()
        .map(|s| profile.step_probability(task.domain, s.index))
        .collect::<Result<_, _>>()?;
    let samples = (0..n)
        .map(|i| {
            let mut rng = sample_stream(profile.seed, &task.task_id, i);
            // Every step draws even after a failure, so the stream
            // position of the corruption draw never depends on where
            // the chain broke.
            let mut success = true;
            for p in &probabilities {
                success &= rng.gen_bool(*p);
            }
            render_attempt(success, &task.answer, &mut rng)
        })
        .collect();
    Ok(ResponseRecord { task_id: task.task_id.clone(), samples })
}

/// Simulate `n` attempts at one decomposed step.
pub fn simulate_atomic(
    task_id: &str,
    step: &AtomicStep,
    profile: &AgentProfile,
    n: usize,
) -> Result<ResponseRecord, SimError> {
    let domain = step.left.domain();
    let p = profile.step_probability(domain, step.index)?;
    let record_id = step_record_id(task_id, step.index);
    let samples = (0..n)
        .map(|i| {
            let mut rng = sample_stream(profile.seed, &record_id, i);
            let success = rng.gen_bool(p);
            render_attempt(success, &step.truth, &mut rng)
        })
        .collect();
    Ok(ResponseRecord { task_id: record_id, samples })
}

/// Composite responses for a whole dataset; chains are matched to tasks
/// by id and the output follows task order.
pub fn simulate_dataset_composite(
    tasks: &[ExpressionTask],
    chains: &[DecompositionChain],
    profile: &AgentProfile,
    n: usize,
) -> Result<Vec<ResponseRecord>, SimError> {
    let by_id: std::collections::HashMap<&str, &DecompositionChain> =
        chains.iter().map(|c| (c.task_id.as_str(), c)).collect();
    tasks
        .par_iter()
        .map(|task| {
            let chain = by_id
                .get(task.task_id.as_str())
                .ok_or_else(|| SimError::ChainMismatch { task_id: task.task_id.clone() })?;
            simulate_composite(task, chain, profile, n)
        })
        .collect()
}

/// Atomic responses for every step of every chain, in chain order.
pub fn simulate_dataset_atomic(
    chains: &[DecompositionChain],
    profile: &AgentProfile,
    n: usize,
) -> Result<Vec<ResponseRecord>, SimError> {
    chains
        .par_iter()
        .map(|chain| {
            chain
                .steps
                .iter()
                .map(|step| simulate_atomic(&chain.task_id, step, profile, n))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()
        .map(|nested| nested.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{estimate, grade_record, ClassificationConfig};
    use crate::taskgen::{decompose, generate_dataset, GenerationConfig};

    fn fixture(domain: DomainId, depth: u32, count: usize) -> Vec<ExpressionTask> {
        generate_dataset(&GenerationConfig::uniform(21, &[domain], &[(depth, count)])).unwrap()
    }

    #[test]
    fn deterministic_per_sample_streams() {
        let tasks = fixture(DomainId::Enigma, 3, 2);
        let chain = decompose(&tasks[0]).unwrap();
        let profile = AgentProfile::uniform("base", 9, 0.5);
        let a = simulate_composite(&tasks[0], &chain, &profile, 16).unwrap();
        let b = simulate_composite(&tasks[0], &chain, &profile, 16).unwrap();
        assert_eq!(a, b);
        // A longer run extends the sample list without rewriting it.
        let c = simulate_composite(&tasks[0], &chain, &profile, 20).unwrap();
        assert_eq!(&c.samples[..16], &a.samples[..]);
        // Different profile seeds decorrelate.
        let other = AgentProfile::uniform("base", 10, 0.5);
        let d = simulate_composite(&tasks[0], &chain, &other, 16).unwrap();
        assert_ne!(a.samples, d.samples);
    }

    #[test]
    fn extreme_probabilities_are_exact() {
        let tasks = fixture(DomainId::Knitting, 2, 3);
        let cfg = ClassificationConfig::default();
        for task in &tasks {
            let chain = decompose(task).unwrap();
            let perfect = AgentProfile::uniform("perfect", 1, 1.0);
            let record = simulate_composite(task, &chain, &perfect, 32).unwrap();
            let graded = grade_record(&record, &task.answer);
            assert_eq!(estimate(&graded, &cfg).unwrap().p_hat, 1.0);

            let hopeless = AgentProfile::uniform("hopeless", 1, 0.0);
            let record = simulate_composite(task, &chain, &hopeless, 32).unwrap();
            let graded = grade_record(&record, &task.answer);
            assert_eq!(estimate(&graded, &cfg).unwrap().p_hat, 0.0);
        }
    }

    #[test]
    fn failed_attempts_are_wrong_but_well_formed() {
        let tasks = fixture(DomainId::RubiksCube, 2, 2);
        let chain = decompose(&tasks[0]).unwrap();
        let hopeless = AgentProfile::uniform("hopeless", 3, 0.0);
        let record = simulate_composite(&tasks[0], &chain, &hopeless, 24).unwrap();
        for sample in &record.samples {
            let boxed = crate::eval::extract_boxed(sample).unwrap();
            let parsed = crate::domains::parse_element(tasks[0].domain, &boxed).unwrap();
            assert_ne!(parsed, tasks[0].answer);
        }
    }

    #[test]
    fn composite_rate_tracks_step_product() {
        let tasks = fixture(DomainId::EncryptedHistory, 4, 6);
        let profile = AgentProfile::uniform("p7", 77, 0.7);
        let cfg = ClassificationConfig::default();
        let mut hits = 0usize;
        let mut total = 0usize;
        for task in &tasks {
            let chain = decompose(task).unwrap();
            let record = simulate_composite(task, &chain, &profile, 512).unwrap();
            let graded = grade_record(&record, &task.answer);
            hits += graded.success_count();
            total += graded.results.len();
        }
        let observed = hits as f64 / total as f64;
        let expected = 0.7f64.powi(4);
        // 3 standard errors over 3072 samples.
        let tolerance = 3.0 * (expected * (1.0 - expected) / total as f64).sqrt();
        assert!((observed - expected).abs() < tolerance, "{observed} vs {expected}");
        let _ = cfg;
    }

    #[test]
    fn per_index_overrides_shadow_domain_rates() {
        let tasks = fixture(DomainId::Enigma, 3, 1);
        let task = &tasks[0];
        let chain = decompose(task).unwrap();
        let mut profile = AgentProfile::uniform("drift", 5, 1.0);
        profile.step_success_by_index = vec![1.0, 0.0, 1.0];
        let record = simulate_composite(task, &chain, &profile, 16).unwrap();
        let graded = grade_record(&record, &task.answer);
        assert_eq!(graded.success_count(), 0);
        // Step 2 alone fails; steps 1 and 3 are perfect.
        let r1 = simulate_atomic(&task.task_id, &chain.steps[0], &profile, 8).unwrap();
        let g1 = grade_record(&r1, &chain.steps[0].truth);
        assert_eq!(g1.success_count(), 8);
        let r2 = simulate_atomic(&task.task_id, &chain.steps[1], &profile, 8).unwrap();
        let g2 = grade_record(&r2, &chain.steps[1].truth);
        assert_eq!(g2.success_count(), 0);
    }

    #[test]
    fn atomic_ids_round_trip() {
        let id = step_record_id("deadbeef01234567", 3);
        assert_eq!(id, "deadbeef01234567/s3");
        assert_eq!(parse_step_record_id(&id), Some(("deadbeef01234567", 3)));
        assert_eq!(parse_step_record_id("deadbeef01234567"), None);
        assert_eq!(parse_step_record_id("x/sfoo"), None);
    }

    #[test]
    fn chain_mismatch_is_rejected() {
        let tasks = fixture(DomainId::Knitting, 2, 2);
        let chain0 = decompose(&tasks[0]).unwrap();
        let profile = AgentProfile::uniform("base", 1, 0.5);
        let err = simulate_composite(&tasks[1], &chain0, &profile, 4);
        assert!(matches!(err, Err(SimError::ChainMismatch { .. })));
    }

    #[test]
    fn missing_domain_probability_is_a_profile_error() {
        let tasks = fixture(DomainId::RubiksCube, 2, 1);
        let chain = decompose(&tasks[0]).unwrap();
        let mut profile = AgentProfile::uniform("partial", 1, 0.5);
        profile.step_success.remove(&DomainId::RubiksCube);
        let err = simulate_composite(&tasks[0], &chain, &profile, 4);
        assert!(matches!(err, Err(SimError::ProfileMismatch { .. })));
    }

    #[test]
    fn toml_profiles_round_trip() {
        let text = r#"
label = "baseline"
seed = 7
p_encrypted_history = 0.3
p_enigma = 0.3
p_knitting = 0.25
p_rubiks_cube = 0.2
"#;
        let profile = AgentProfile::from_toml_str(text).unwrap();
        assert_eq!(profile.label, "baseline");
        assert_eq!(profile.step_success[&DomainId::Knitting], 0.25);
        assert_eq!(profile.error_model, ErrorModel::CorruptByRandomFactor);
        assert!(profile.step_success_by_index.is_empty());

        let bad = "label = \"x\"\nseed = 1\np_enigma = 1.5\n";
        assert!(matches!(AgentProfile::from_toml_str(bad), Err(SimError::Config(_))));
        assert!(matches!(AgentProfile::from_toml_str("seed = 1"), Err(SimError::Config(_))));
    }

    #[test]
    fn dataset_helpers_cover_every_record() {
        let tasks = fixture(DomainId::Enigma, 3, 4);
        let chains: Vec<_> = tasks.iter().map(|t| decompose(t).unwrap()).collect();
        let profile = AgentProfile::uniform("base", 2, 0.8);
        let composite = simulate_dataset_composite(&tasks, &chains, &profile, 8).unwrap();
        assert_eq!(composite.len(), 4);
        assert!(composite.iter().zip(&tasks).all(|(r, t)| r.task_id == t.task_id));
        let atomic = simulate_dataset_atomic(&chains, &profile, 8).unwrap();
        assert_eq!(atomic.len(), 12);
        assert_eq!(atomic[0].task_id, step_record_id(&tasks[0].task_id, 1));
        assert_eq!(atomic[2].task_id, step_record_id(&tasks[0].task_id, 3));
    }
}
