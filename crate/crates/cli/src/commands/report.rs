use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use algebrarium_core::short_hash;
use clap::Args;

use super::ensure_dir;
use crate::errors::CliError;
use crate::manifest::{inherited_seed, path_str, RunManifest};

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Analysis directory holding the CSV tables.
    #[arg(long = "in", env = "ALGEBRARIUM_IN")]
    input: PathBuf,

    /// Where to write summary.txt; stdout only when omitted.
    #[arg(long, env = "ALGEBRARIUM_OUT")]
    out: Option<PathBuf>,
}

/// One parsed CSV table: `key=value` pairs from `#` comment lines plus
/// the data rows (header excluded).
struct Table {
    stats: HashMap<String, String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn load(path: &Path) -> Result<Table, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut stats = HashMap::new();
        let mut rows = Vec::new();
        let mut header_seen = false;
        for (i, line) in text.lines().enumerate() {
            if let Some(comment) = line.strip_prefix('#') {
                for pair in comment.split_whitespace() {
                    if let Some((key, value)) = pair.split_once('=') {
                        stats.insert(key.to_string(), value.to_string());
                    }
                }
            } else if !header_seen {
                header_seen = true;
            } else if !line.is_empty() {
                rows.push(line.split(',').map(str::to_string).collect());
            } else {
                return Err(CliError::Data(format!(
                    "{}:{}: blank line inside table",
                    path.display(),
                    i + 1
                )));
            }
        }
        Ok(Table { stats, rows })
    }

    fn stat(&self, key: &str) -> Option<&str> {
        self.stats.get(key).map(String::as_str)
    }
}

fn fixed(raw: &str) -> String {
    match raw.parse::<f64>() {
        Ok(v) => format!("{v:.4}"),
        Err(_) => raw.to_string(),
    }
}

fn summarize(dir: &Path) -> Result<String, CliError> {
    let mut out = format!("algebrarium report for {}\n", dir.display());
    let mut tables = 0usize;
    let mut load = |name: &str| -> Result<Option<Table>, CliError> {
        let path = dir.join(name);
        if !path.is_file() {
            return Ok(None);
        }
        tables += 1;
        Table::load(&path).map(Some)
    };

    if let Some(t) = load("curves.csv")? {
        if let (Some(hash), Some(seed)) = (t.stat("config_hash"), t.stat("seed")) {
            let _ = writeln!(out, "config_hash={hash} seed={seed}");
        }
        out.push_str("\npass@k:\n");
        for row in &t.rows {
            if let [k, emp, theo] = row.as_slice() {
                let _ = writeln!(
                    out,
                    "  k={k:<4} empirical {} theoretical {}",
                    fixed(emp),
                    fixed(theo)
                );
            }
        }
    }
    if let Some(t) = load("classification.csv")? {
        out.push_str("\nclassification:\n");
        for row in &t.rows {
            if let [label, null, transitional, feasible, total] = row.as_slice() {
                let _ = writeln!(
                    out,
                    "  {label:<20} null {null:>6}  transitional {transitional:>6}  feasible {feasible:>6}  total {total:>6}"
                );
            }
        }
    }
    if let Some(t) = load("barrier.csv")? {
        out.push_str("\ndepth decay:\n");
        if let (Some(p), Some(rms)) = (t.stat("p"), t.stat("residual_rms")) {
            let _ = writeln!(out, "  fitted step rate {} (residual rms {})", fixed(p), fixed(rms));
        }
        for row in &t.rows {
            if let [depth, observed, fitted] = row.as_slice() {
                let _ = writeln!(
                    out,
                    "  depth {depth}: observed {} fitted {}",
                    fixed(observed),
                    fixed(fitted)
                );
            }
        }
    }
    if let Some(t) = load("correlation.csv")? {
        out.push_str("\nstep-product correlation:\n");
        if let Some(r) = t.stat("pearson_r") {
            let _ = writeln!(out, "  pearson r {} over {} tasks", fixed(r), t.rows.len());
        }
    }
    if let Some(t) = load("emergence.csv")? {
        out.push_str("\nemergence:\n");
        if let (Some(null_before), Some(recovered), Some(rate)) =
            (t.stat("null_before"), t.stat("recovered"), t.stat("recovery_rate"))
        {
            let percent = rate.parse::<f64>().map(|r| r * 100.0).unwrap_or(0.0);
            let _ = writeln!(
                out,
                "  {recovered} of {null_before} null tasks recovered ({percent:.1}%)"
            );
        }
        if let (Some(mean), Some(median)) = (t.stat("mean_p"), t.stat("median_p")) {
            let _ = writeln!(
                out,
                "  recovered success rate: mean {} median {}",
                fixed(mean),
                fixed(median)
            );
        }
    }
    if let Some(t) = load("shifts.csv")? {
        out.push_str("\nstate shifts:\n");
        let _ = writeln!(
            out,
            "  {} tasks compared, {} eroded",
            t.rows.len(),
            t.stat("eroded").unwrap_or("0")
        );
    }

    if tables == 0 {
        return Err(CliError::Io(format!("{}: no report tables found", dir.display())));
    }
    Ok(out)
}

pub fn run(args: ReportArgs) -> Result<(), CliError> {
    let summary = summarize(&args.input)?;
    print!("{summary}");
    if let Some(out) = &args.out {
        ensure_dir(out)?;
        let path = out.join("summary.txt");
        fs::write(&path, &summary).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let manifest = RunManifest::new(
            "report",
            inherited_seed(&args.input),
            short_hash("report-config", &[&path_str(&args.input)]),
            vec![path_str(&args.input)],
            vec![path_str(&path)],
        );
        manifest.write(out)?;
    }
    Ok(())
}
