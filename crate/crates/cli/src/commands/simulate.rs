use std::collections::HashSet;
use std::fs;
use std::path::PathBuf;

use algebrarium_core::jsonl::write_jsonl;
use algebrarium_core::simulator::{simulate_dataset_atomic, simulate_dataset_composite};
use algebrarium_core::{short_hash, AgentProfile};
use clap::{Args, ValueEnum};

use super::{
    ensure_dir, read_dataset_chains, read_tasks, ATOMIC_RESPONSES_FILE, RESPONSES_FILE,
};
use crate::errors::CliError;
use crate::manifest::{path_str, RunManifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMode {
    /// One record per task; a sample succeeds only if every step does.
    Composite,
    /// One record per decomposed step.
    Atomic,
    Both,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Dataset directory with tasks.jsonl and chains.jsonl.
    #[arg(long = "in", env = "ALGEBRARIUM_IN")]
    input: PathBuf,

    /// Output directory, created if missing.
    #[arg(long, env = "ALGEBRARIUM_OUT")]
    out: PathBuf,

    /// Agent profile TOML (label, seed, p_<domain> keys).
    #[arg(long, env = "ALGEBRARIUM_PROFILE")]
    profile: PathBuf,

    /// Samples per record.
    #[arg(long, env = "ALGEBRARIUM_SAMPLES", default_value_t = 128)]
    samples: usize,

    #[arg(long, env = "ALGEBRARIUM_MODE", value_enum, default_value_t = SimMode::Composite)]
    mode: SimMode,

    /// Override the profile's seed.
    #[arg(long, env = "ALGEBRARIUM_SEED")]
    seed: Option<u64>,
}

pub fn run(args: SimulateArgs) -> Result<(), CliError> {
    if args.samples == 0 {
        return Err(CliError::Config("--samples must be at least 1".into()));
    }
    let profile_text = fs::read_to_string(&args.profile)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.profile.display())))?;
    let mut profile = AgentProfile::from_toml_str(&profile_text)?;
    if let Some(seed) = args.seed {
        profile.seed = seed;
    }

    let tasks = read_tasks(&args.input)?;
    let chains = read_dataset_chains(&args.input, &tasks)?;
    ensure_dir(&args.out)?;
    let mut outputs = Vec::new();
    let mut summary = Vec::new();

    if matches!(args.mode, SimMode::Composite | SimMode::Both) {
        let chained: HashSet<&str> = chains.iter().map(|c| c.task_id.as_str()).collect();
        let covered: Vec<_> =
            tasks.iter().filter(|t| chained.contains(t.task_id.as_str())).cloned().collect();
        let skipped = tasks.len() - covered.len();
        if skipped > 0 {
            eprintln!("note: skipped {skipped} tasks without a chain");
        }
        let records = simulate_dataset_composite(&covered, &chains, &profile, args.samples)?;
        let path = args.out.join(RESPONSES_FILE);
        write_jsonl(&path, &records)?;
        summary.push(format!("{} composite records", records.len()));
        outputs.push(path_str(&path));
    }
    if matches!(args.mode, SimMode::Atomic | SimMode::Both) {
        let records = simulate_dataset_atomic(&chains, &profile, args.samples)?;
        let path = args.out.join(ATOMIC_RESPONSES_FILE);
        write_jsonl(&path, &records)?;
        summary.push(format!("{} step records", records.len()));
        outputs.push(path_str(&path));
    }

    let probabilities: Vec<String> = profile
        .step_success
        .iter()
        .map(|(domain, p)| format!("{domain}={p}"))
        .chain(profile.step_success_by_index.iter().enumerate().map(|(i, p)| {
            format!("step{}={p}", i + 1)
        }))
        .collect();
    let parts: Vec<&str> = [profile.label.as_str()]
        .into_iter()
        .chain(probabilities.iter().map(String::as_str))
        .collect();
    let manifest = RunManifest::new(
        "simulate",
        profile.seed,
        short_hash("simulate-config", &parts),
        vec![path_str(&args.input), path_str(&args.profile)],
        outputs,
    );
    manifest.write(&args.out)?;

    println!(
        "simulated {} with {} samples each (profile '{}') into {}",
        summary.join(" and "),
        args.samples,
        profile.label,
        args.out.display()
    );
    Ok(())
}
