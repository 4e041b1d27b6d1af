use std::collections::BTreeMap;
use std::path::PathBuf;

use algebrarium_core::jsonl::{write_jsonl, ChainRow, TaskRow};
use algebrarium_core::taskgen::{decompose, generate_dataset, GenerationConfig};
use algebrarium_core::{short_hash, DomainId, Split, TaskMode};
use clap::Args;

use super::{ensure_dir, CHAINS_FILE, TASKS_FILE};
use crate::errors::CliError;
use crate::manifest::{path_str, RunManifest};

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Seed for the deterministic generator.
    #[arg(long, env = "ALGEBRARIUM_SEED", default_value_t = 42)]
    seed: u64,

    /// Output directory, created if missing.
    #[arg(long, env = "ALGEBRARIUM_OUT")]
    out: PathBuf,

    /// Domains to generate (comma separated); all four when omitted.
    #[arg(long, env = "ALGEBRARIUM_DOMAINS", value_delimiter = ',')]
    domains: Vec<DomainId>,

    /// Count overrides on the default protocol, comma separated:
    /// train=N (depth 1), test=N (each of depths 2-5), depth<k>=N,
    /// solve=N (extra depth-1 equation tasks).
    #[arg(long, env = "ALGEBRARIUM_COUNTS", value_delimiter = ',')]
    counts: Vec<String>,

    /// Keep tasks whose answer is the identity or repeats an operand.
    #[arg(long, env = "ALGEBRARIUM_NO_REJECT_DEGENERATE")]
    no_reject_degenerate: bool,
}

fn parse_count(item: &str) -> Result<(&str, usize), CliError> {
    let (key, value) = item
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("counts entry '{item}' is not key=value")))?;
    let value = value
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("counts entry '{item}' needs a whole number")))?;
    Ok((key.trim(), value))
}

fn build_config(args: &GenerateArgs) -> Result<GenerationConfig, CliError> {
    let mut per_depth: BTreeMap<u32, usize> =
        [(1, 3200), (2, 50), (3, 50), (4, 50), (5, 50)].into();
    let mut solve = 0usize;
    for item in &args.counts {
        let (key, value) = parse_count(item)?;
        match key {
            "train" => {
                per_depth.insert(1, value);
            }
            "test" => {
                for depth in 2..=5 {
                    per_depth.insert(depth, value);
                }
            }
            "solve" => solve = value,
            other => match other.strip_prefix("depth").and_then(|d| d.parse::<u32>().ok()) {
                Some(depth) if depth >= 1 => {
                    per_depth.insert(depth, value);
                }
                _ => {
                    return Err(CliError::Config(format!(
                        "unknown counts key '{other}' (use train, test, solve, or depth<k>)"
                    )))
                }
            },
        }
    }
    per_depth.retain(|_, count| *count > 0);
    if per_depth.is_empty() && solve == 0 {
        return Err(CliError::Config("counts leave nothing to generate".into()));
    }
    let domains: Vec<DomainId> =
        if args.domains.is_empty() { DomainId::ALL.to_vec() } else { args.domains.clone() };
    let depth_counts: Vec<(u32, usize)> = per_depth.into_iter().collect();
    let mut config = GenerationConfig::uniform(args.seed, &domains, &depth_counts);
    config.reject_degenerate = !args.no_reject_degenerate;
    config.solve_equation_count = solve;
    config.validate()?;
    Ok(config)
}

pub fn run(args: GenerateArgs) -> Result<(), CliError> {
    let config = build_config(&args)?;
    let tasks = generate_dataset(&config)?;

    let task_rows: Vec<TaskRow> = tasks.iter().map(TaskRow::from_task).collect();
    let chain_rows: Vec<ChainRow> = tasks
        .iter()
        .filter(|t| t.mode == TaskMode::ForwardEval)
        .map(|t| decompose(t).map(|c| ChainRow::from_chain(&c)))
        .collect::<Result<_, _>>()?;

    ensure_dir(&args.out)?;
    let tasks_path = args.out.join(TASKS_FILE);
    let chains_path = args.out.join(CHAINS_FILE);
    write_jsonl(&tasks_path, &task_rows)?;
    write_jsonl(&chains_path, &chain_rows)?;

    let config_json = serde_json::to_string(&config)
        .map_err(|e| CliError::Io(format!("config fingerprint: {e}")))?;
    let manifest = RunManifest::new(
        "generate",
        args.seed,
        short_hash("generate-config", &[&config_json]),
        Vec::new(),
        vec![path_str(&tasks_path), path_str(&chains_path)],
    );
    manifest.write(&args.out)?;

    let train = tasks.iter().filter(|t| t.split == Split::Train).count();
    let test = tasks.len() - train;
    println!(
        "generated {} tasks ({train} train, {test} test) and {} chains into {}",
        tasks.len(),
        chain_rows.len(),
        args.out.display()
    );
    Ok(())
}
