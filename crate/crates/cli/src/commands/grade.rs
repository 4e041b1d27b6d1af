use std::collections::HashMap;
use std::path::{Path, PathBuf};

use algebrarium_core::jsonl::{read_jsonl, write_jsonl};
use algebrarium_core::simulator::{parse_step_record_id, step_record_id};
use algebrarium_core::{
    estimate, grade_record, short_hash, CapabilityState, ClassificationConfig, Element,
    InstanceEstimate, ResponseRecord,
};
use clap::Args;

use super::{
    ensure_dir, read_dataset_chains, read_tasks, ATOMIC_ESTIMATES_FILE, ATOMIC_RESPONSES_FILE,
    CHAINS_FILE, ESTIMATES_FILE, RESPONSES_FILE,
};
use crate::config::load_classification;
use crate::errors::CliError;
use crate::manifest::{inherited_seed, path_str, RunManifest};

#[derive(Debug, Args)]
pub struct GradeArgs {
    /// responses.jsonl, or a directory holding responses.jsonl and/or
    /// atomic_responses.jsonl.
    #[arg(long = "in", env = "ALGEBRARIUM_IN")]
    input: PathBuf,

    /// Dataset directory supplying the ground truth.
    #[arg(long, env = "ALGEBRARIUM_DATASET")]
    dataset: PathBuf,

    /// Output directory, created if missing.
    #[arg(long, env = "ALGEBRARIUM_OUT")]
    out: PathBuf,

    /// TOML with a [classification] section; defaults otherwise.
    #[arg(long, env = "ALGEBRARIUM_CONFIG")]
    config: Option<PathBuf>,
}

/// Ground truth for whole tasks and, when chains are available, for
/// their decomposed steps.
struct TruthTable {
    by_record_id: HashMap<String, Element>,
}

impl TruthTable {
    fn load(dataset: &Path) -> Result<Self, CliError> {
        let tasks = read_tasks(dataset)?;
        let mut by_record_id: HashMap<String, Element> =
            tasks.iter().map(|t| (t.task_id.clone(), t.answer.clone())).collect();
        if dataset.join(CHAINS_FILE).is_file() {
            for chain in read_dataset_chains(dataset, &tasks)? {
                for step in &chain.steps {
                    by_record_id
                        .insert(step_record_id(&chain.task_id, step.index), step.truth.clone());
                }
            }
        }
        Ok(TruthTable { by_record_id })
    }

    fn get(&self, record_id: &str) -> Option<&Element> {
        self.by_record_id.get(record_id)
    }
}

fn grade_file(
    path: &Path,
    truths: &TruthTable,
    config: &ClassificationConfig,
) -> Result<Vec<InstanceEstimate>, CliError> {
    let records: Vec<ResponseRecord> = read_jsonl(path)?;
    records
        .iter()
        .enumerate()
        .map(|(i, record)| {
            let truth = truths.get(&record.task_id).ok_or_else(|| {
                let kind = if parse_step_record_id(&record.task_id).is_some() {
                    "step"
                } else {
                    "task"
                };
                CliError::Data(format!(
                    "{}:{}: no ground truth for {kind} id '{}'",
                    path.display(),
                    i + 1,
                    record.task_id
                ))
            })?;
            Ok(estimate(&grade_record(record, truth), config)?)
        })
        .collect()
}

fn census_line(name: &str, estimates: &[InstanceEstimate]) -> String {
    let count = |state: CapabilityState| {
        estimates.iter().filter(|e| e.state == state).count()
    };
    format!(
        "{name}: {} records (null {}, transitional {}, feasible {})",
        estimates.len(),
        count(CapabilityState::Null),
        count(CapabilityState::Transitional),
        count(CapabilityState::Feasible)
    )
}

pub fn run(args: GradeArgs) -> Result<(), CliError> {
    let config = load_classification(args.config.as_deref())?;
    let truths = TruthTable::load(&args.dataset)?;

    // (input file, output name) pairs present under --in.
    let jobs: Vec<(PathBuf, &str)> = if args.input.is_dir() {
        let mut jobs = Vec::new();
        for (name, out_name) in
            [(RESPONSES_FILE, ESTIMATES_FILE), (ATOMIC_RESPONSES_FILE, ATOMIC_ESTIMATES_FILE)]
        {
            let path = args.input.join(name);
            if path.is_file() {
                jobs.push((path, out_name));
            }
        }
        if jobs.is_empty() {
            return Err(CliError::Io(format!(
                "{}: neither {RESPONSES_FILE} nor {ATOMIC_RESPONSES_FILE} found",
                args.input.display()
            )));
        }
        jobs
    } else {
        vec![(args.input.clone(), ESTIMATES_FILE)]
    };

    ensure_dir(&args.out)?;
    let mut inputs = vec![path_str(&args.dataset)];
    let mut outputs = Vec::new();
    for (path, out_name) in &jobs {
        let estimates = grade_file(path, &truths, &config)?;
        let out_path = args.out.join(out_name);
        write_jsonl(&out_path, &estimates)?;
        println!("{}", census_line(out_name, &estimates));
        inputs.push(path_str(path));
        outputs.push(path_str(&out_path));
    }

    let manifest = RunManifest::new(
        "grade",
        inherited_seed(&args.input),
        short_hash(
            "grade-config",
            &[&config.k_large().to_string(), &config.k_min().to_string()],
        ),
        inputs,
        outputs,
    );
    manifest.write(&args.out)?;
    Ok(())
}
