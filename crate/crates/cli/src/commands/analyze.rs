use std::collections::HashMap;
use std::path::{Path, PathBuf};

use algebrarium_core::analytics::{
    correlation_points, dataset_curves, emergence, erosion_count, fit_barrier, pearson,
    pooled_rate_by_depth, shift_analysis, Census,
};
use algebrarium_core::report::{
    emit_report, BarrierSection, CorrelationSection, ReportInputs, ReportMeta, ShiftSection,
};
use algebrarium_core::{short_hash, ClassificationConfig, DomainId, InstanceEstimate};
use clap::Args;

use super::{read_estimates, read_tasks, ATOMIC_ESTIMATES_FILE, ESTIMATES_FILE};
use crate::config::load_classification;
use crate::errors::CliError;
use crate::manifest::{inherited_seed, path_str, RunManifest};

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// estimates.jsonl, or the grade output directory containing it.
    #[arg(long = "in", env = "ALGEBRARIUM_IN")]
    input: PathBuf,

    /// Output directory for the report tables and charts.
    #[arg(long, env = "ALGEBRARIUM_OUT")]
    out: PathBuf,

    /// Step estimates for the step-product correlation. When --in is a
    /// directory, a sibling atomic_estimates.jsonl is picked up
    /// automatically.
    #[arg(long, env = "ALGEBRARIUM_ATOMIC")]
    atomic: Option<PathBuf>,

    /// Dataset directory; enables per-domain censuses and the
    /// depth-decay fit.
    #[arg(long, env = "ALGEBRARIUM_DATASET")]
    dataset: Option<PathBuf>,

    /// Sample budgets for the Pass@k curves.
    #[arg(
        long = "k-list",
        env = "ALGEBRARIUM_K_LIST",
        value_delimiter = ',',
        default_values_t = vec![1u32, 2, 4, 8, 16, 32, 64, 128]
    )]
    k_list: Vec<u32>,

    /// Base and post estimates of the same tasks; adds the emergence
    /// and shift sections.
    #[arg(
        long,
        env = "ALGEBRARIUM_COMPARE",
        num_args = 2,
        value_names = ["BASE", "POST"],
        value_delimiter = ','
    )]
    compare: Option<Vec<PathBuf>>,

    /// TOML with a [classification] section; defaults otherwise.
    #[arg(long, env = "ALGEBRARIUM_CONFIG")]
    config: Option<PathBuf>,
}

fn domain_censuses(
    dataset: &Path,
    estimates: &[InstanceEstimate],
    config: &ClassificationConfig,
) -> Result<Vec<(String, Census)>, CliError> {
    let tasks = read_tasks(dataset)?;
    let domain_of: HashMap<&str, DomainId> =
        tasks.iter().map(|t| (t.task_id.as_str(), t.domain)).collect();
    let mut by_domain: HashMap<DomainId, Vec<InstanceEstimate>> = HashMap::new();
    for est in estimates {
        let domain = domain_of.get(est.task_id.as_str()).ok_or_else(|| {
            CliError::Data(format!("estimate {} names no task in the dataset", est.task_id))
        })?;
        by_domain.entry(*domain).or_default().push(est.clone());
    }
    Ok(DomainId::ALL
        .iter()
        .filter_map(|domain| {
            by_domain
                .get(domain)
                .map(|ests| (domain.to_string(), Census::from_estimates(ests, config)))
        })
        .collect())
}

fn resolve_atomic(args: &AnalyzeArgs) -> Option<(PathBuf, bool)> {
    if let Some(path) = &args.atomic {
        let path = if path.is_dir() { path.join(ATOMIC_ESTIMATES_FILE) } else { path.clone() };
        return Some((path, true));
    }
    if args.input.is_dir() {
        let path = args.input.join(ATOMIC_ESTIMATES_FILE);
        if path.is_file() {
            return Some((path, false));
        }
    }
    None
}

pub fn run(args: AnalyzeArgs) -> Result<(), CliError> {
    let config = load_classification(args.config.as_deref())?;
    let estimates = read_estimates(&args.input, ESTIMATES_FILE)?;

    let curves = dataset_curves(&estimates, &args.k_list)?;
    println!(
        "pass@k over {} budgets (k={}..{})",
        curves.ks.len(),
        curves.ks.first().copied().unwrap_or(0),
        curves.ks.last().copied().unwrap_or(0)
    );

    let mut classification =
        vec![("all".to_string(), Census::from_estimates(&estimates, &config))];
    if let Some(dataset) = &args.dataset {
        classification.extend(domain_censuses(dataset, &estimates, &config)?);
    }

    // The fit is skipped, not failed, when every pooled rate is zero:
    // an all-null run is a legitimate result with nothing to fit.
    let barrier = match &args.dataset {
        Some(dataset) => {
            let tasks = read_tasks(dataset)?;
            let depths: HashMap<String, u32> =
                tasks.iter().map(|t| (t.task_id.clone(), t.depth)).collect();
            let points = pooled_rate_by_depth(&estimates, &depths)?;
            match fit_barrier(&points) {
                Ok(fit) => {
                    println!(
                        "barrier: fitted step rate {:.4} over {} depths",
                        fit.p,
                        points.len()
                    );
                    Some(BarrierSection { points, fit })
                }
                Err(err) => {
                    eprintln!("note: skipping depth-decay fit: {err}");
                    None
                }
            }
        }
        None => None,
    };

    let correlation = match resolve_atomic(&args) {
        Some((path, explicit)) => {
            let outcome = read_estimates(&path, ATOMIC_ESTIMATES_FILE).and_then(|atomic| {
                let points = correlation_points(&estimates, &atomic)?;
                let predicted: Vec<f64> = points.iter().map(|p| p.predicted).collect();
                let observed: Vec<f64> = points.iter().map(|p| p.observed).collect();
                let pearson_r = pearson(&predicted, &observed)?;
                Ok(CorrelationSection { points, pearson_r })
            });
            match outcome {
                Ok(section) => {
                    println!(
                        "correlation: r={:.4} over {} tasks",
                        section.pearson_r,
                        section.points.len()
                    );
                    Some(section)
                }
                // An explicitly requested section must not vanish
                // silently; an auto-detected one may.
                Err(err) if explicit => return Err(err),
                Err(err) => {
                    eprintln!("note: skipping step-product correlation: {err}");
                    None
                }
            }
        }
        None => None,
    };

    let (emergence_section, shifts) = match &args.compare {
        Some(pair) => {
            let base = read_estimates(&pair[0], ESTIMATES_FILE)?;
            let post = read_estimates(&pair[1], ESTIMATES_FILE)?;
            classification.push(("base".to_string(), Census::from_estimates(&base, &config)));
            classification.push(("post".to_string(), Census::from_estimates(&post, &config)));
            let report = emergence(&base, &post, &config)?;
            println!(
                "emergence: {}/{} null tasks recovered ({:.1}%)",
                report.recovered,
                report.null_before,
                report.recovery_rate * 100.0
            );
            let records = shift_analysis(&base, &post, &config)?;
            let eroded = erosion_count(&records);
            (Some(report), Some(ShiftSection { records, eroded }))
        }
        None => (None, None),
    };

    let k_list_text =
        args.k_list.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
    let hash_parts = [
        k_list_text.as_str(),
        &config.k_large().to_string(),
        &config.k_min().to_string(),
    ];
    let meta = ReportMeta {
        config_hash: short_hash("analyze-config", &hash_parts),
        seed: inherited_seed(&args.input),
    };
    let inputs = ReportInputs {
        curves: Some(curves),
        classification,
        barrier,
        correlation,
        emergence: emergence_section,
        shifts,
    };
    let written = emit_report(&args.out, &meta, &inputs)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.out.display())))?;

    let mut manifest_inputs = vec![path_str(&args.input)];
    if let Some((path, _)) = resolve_atomic(&args) {
        manifest_inputs.push(path_str(&path));
    }
    if let Some(dataset) = &args.dataset {
        manifest_inputs.push(path_str(dataset));
    }
    if let Some(pair) = &args.compare {
        manifest_inputs.extend(pair.iter().map(|p| path_str(p)));
    }
    let manifest = RunManifest::new(
        "analyze",
        meta.seed,
        meta.config_hash.clone(),
        manifest_inputs,
        written.iter().map(|p| path_str(p)).collect(),
    );
    manifest.write(&args.out)?;

    println!("wrote {} report files to {}", written.len(), args.out.display());
    Ok(())
}
