use std::path::PathBuf;

use algebrarium_core::jsonl::{write_jsonl, ChainRow};
use algebrarium_core::taskgen::decompose;
use algebrarium_core::{short_hash, TaskMode};
use clap::Args;

use super::{ensure_dir, read_tasks, CHAINS_FILE};
use crate::errors::CliError;
use crate::manifest::{inherited_seed, path_str, RunManifest};

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// tasks.jsonl, or a dataset directory containing it.
    #[arg(long = "in", env = "ALGEBRARIUM_IN")]
    input: PathBuf,

    /// Output directory, created if missing.
    #[arg(long, env = "ALGEBRARIUM_OUT")]
    out: PathBuf,
}

pub fn run(args: DecomposeArgs) -> Result<(), CliError> {
    let tasks = read_tasks(&args.input)?;
    let forward: Vec<_> = tasks.iter().filter(|t| t.mode == TaskMode::ForwardEval).collect();
    let skipped = tasks.len() - forward.len();
    if skipped > 0 {
        eprintln!("note: skipped {skipped} equation tasks (no chain form)");
    }
    let rows: Vec<ChainRow> = forward
        .iter()
        .map(|t| decompose(t).map(|c| ChainRow::from_chain(&c)))
        .collect::<Result<_, _>>()?;

    ensure_dir(&args.out)?;
    let chains_path = args.out.join(CHAINS_FILE);
    write_jsonl(&chains_path, &rows)?;

    let manifest = RunManifest::new(
        "decompose",
        inherited_seed(&args.input),
        short_hash("decompose-config", &[&path_str(&args.input)]),
        vec![path_str(&args.input)],
        vec![path_str(&chains_path)],
    );
    manifest.write(&args.out)?;

    println!("decomposed {} tasks into {}", rows.len(), chains_path.display());
    Ok(())
}
