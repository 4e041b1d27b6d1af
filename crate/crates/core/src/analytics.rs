//! Success-probability analytics: Pass@k in closed form and as an
//! unbiased sample estimate, depth-decay fits, capability censuses,
//! emergence accounting between two evaluation rounds, and
//! distribution-shift erosion.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::eval::{classify, CapabilityState, ClassificationConfig, InstanceEstimate};
use crate::simulator::parse_step_record_id;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error("sample budget k={k} is outside 1..=n for n={n}")]
    BudgetOutOfRange { k: u32, n: usize },
    #[error("inputs disagree: {0}")]
    InputMismatch(String),
    #[error("not enough data: {0}")]
    InsufficientData(String),
}

/// Probability that at least one of `k` independent attempts succeeds
/// when each succeeds with probability `p`: 1 − (1 − p)^k.
pub fn theoretical_pass_k(p: f64, k: u32) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p));
    debug_assert!(k >= 1);
    if k == 1 {
        // 1 − (1 − p) loses the low bits of small p; k = 1 is exactly p.
        return p;
    }
    1.0 - (1.0 - p).powi(k as i32)
}

/// Unbiased estimate of Pass@k from `c` successes in `n` samples:
/// 1 − C(n−c, k)/C(n, k), evaluated as a product of ratios so large
/// `n` stays in range.
pub fn empirical_pass_k(n: usize, c: usize, k: u32) -> Result<f64, AnalyticsError> {
    if k == 0 || k as usize > n {
        return Err(AnalyticsError::BudgetOutOfRange { k, n });
    }
    if c > n {
        return Err(AnalyticsError::InputMismatch(format!(
            "success count {c} exceeds sample count {n}"
        )));
    }
    let k = k as usize;
    if k == 1 {
        return Ok(c as f64 / n as f64);
    }
    if n - c < k {
        // Every k-subset contains a success.
        return Ok(1.0);
    }
    let mut all_fail = 1.0f64;
    for i in 0..k {
        all_fail *= (n - c - i) as f64 / (n - i) as f64;
    }
    Ok(1.0 - all_fail)
}

/// Mean Pass@k over a set of instances, both the sample estimate and
/// the closed form evaluated at each instance's `p_hat`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PassKCurve {
    pub ks: Vec<u32>,
    pub empirical: Vec<f64>,
    pub theoretical: Vec<f64>,
}

pub fn dataset_curves(
    estimates: &[InstanceEstimate],
    ks: &[u32],
) -> Result<PassKCurve, AnalyticsError> {
    if estimates.is_empty() {
        return Err(AnalyticsError::InsufficientData("no estimates for curves".into()));
    }
    if ks.is_empty() {
        return Err(AnalyticsError::InsufficientData("no sample budgets requested".into()));
    }
    let mut empirical = Vec::with_capacity(ks.len());
    let mut theoretical = Vec::with_capacity(ks.len());
    for &k in ks {
        let mut emp_sum = 0.0;
        let mut theo_sum = 0.0;
        for est in estimates {
            emp_sum += empirical_pass_k(est.n, est.c, k)?;
            theo_sum += theoretical_pass_k(est.p_hat, k);
        }
        empirical.push(emp_sum / estimates.len() as f64);
        theoretical.push(theo_sum / estimates.len() as f64);
    }
    Ok(PassKCurve { ks: ks.to_vec(), empirical, theoretical })
}

/// Mean squared gap between two curves sampled at the same budgets.
pub fn curve_mse(a: &[f64], b: &[f64]) -> Result<f64, AnalyticsError> {
    if a.len() != b.len() || a.is_empty() {
        return Err(AnalyticsError::InputMismatch(format!(
            "curve lengths {} and {} cannot be compared",
            a.len(),
            b.len()
        )));
    }
    let sum: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(sum / a.len() as f64)
}

/// Product of per-step success estimates: the predicted success rate of
/// the whole chain under step independence.
pub fn joint_probability(steps: &[InstanceEstimate]) -> Result<f64, AnalyticsError> {
    if steps.is_empty() {
        return Err(AnalyticsError::InsufficientData("no step estimates".into()));
    }
    Ok(steps.iter().map(|s| s.p_hat).product())
}

/// Pooled success rate per chain depth: (Σc, Σn) over the instances of
/// each depth.
pub fn pooled_rate_by_depth(
    estimates: &[InstanceEstimate],
    depth_by_id: &HashMap<String, u32>,
) -> Result<Vec<(u32, f64)>, AnalyticsError> {
    let mut pools: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
    for est in estimates {
        let depth = depth_by_id.get(&est.task_id).ok_or_else(|| {
            AnalyticsError::InputMismatch(format!("estimate {} has no known depth", est.task_id))
        })?;
        let pool = pools.entry(*depth).or_insert((0, 0));
        pool.0 += est.c;
        pool.1 += est.n;
    }
    Ok(pools
        .into_iter()
        .map(|(depth, (c, n))| (depth, c as f64 / n as f64))
        .collect())
}

/// Least-squares fit of `P = p^N` through the origin of log space:
/// ln P = N ln p, so ln p = Σ(N ln P) / Σ(N²). Points with P ≤ 0 carry
/// no log information and are dropped (their count is reported).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarrierFit {
    pub p: f64,
    /// Root-mean-square residual of ln P around the fit.
    pub residual_rms: f64,
    pub points_used: usize,
    pub points_dropped: usize,
}

pub fn fit_barrier(points: &[(u32, f64)]) -> Result<BarrierFit, AnalyticsError> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, p)| *p > 0.0)
        .map(|(n, p)| (f64::from(*n), p.ln()))
        .collect();
    let dropped = points.len() - usable.len();
    if usable.is_empty() {
        return Err(AnalyticsError::InsufficientData(
            "no positive success rates to fit".into(),
        ));
    }
    let num: f64 = usable.iter().map(|(n, lp)| n * lp).sum();
    let den: f64 = usable.iter().map(|(n, _)| n * n).sum();
    let ln_p = num / den;
    let mss: f64 = usable
        .iter()
        .map(|(n, lp)| {
            let r = lp - n * ln_p;
            r * r
        })
        .sum::<f64>()
        / usable.len() as f64;
    Ok(BarrierFit {
        p: ln_p.exp(),
        residual_rms: mss.sqrt(),
        points_used: usable.len(),
        points_dropped: dropped,
    })
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, AnalyticsError> {
    if xs.len() != ys.len() {
        return Err(AnalyticsError::InputMismatch(format!(
            "series lengths {} and {} differ",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(AnalyticsError::InsufficientData(
            "correlation needs at least two points".into(),
        ));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    }
    if vx == 0.0 || vy == 0.0 {
        return Err(AnalyticsError::InsufficientData(
            "correlation is undefined for a constant series".into(),
        ));
    }
    Ok(cov / (vx * vy).sqrt())
}

/// Predicted-vs-observed pair for one task: the product of its step
/// estimates against its composite estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationPoint {
    pub task_id: String,
    pub predicted: f64,
    pub observed: f64,
}

/// Join composite estimates with step estimates (ids `<task>/s<j>`).
/// Every composite must have at least one step estimate.
pub fn correlation_points(
    composite: &[InstanceEstimate],
    atomic: &[InstanceEstimate],
) -> Result<Vec<CorrelationPoint>, AnalyticsError> {
    let mut steps_by_task: HashMap<&str, Vec<&InstanceEstimate>> = HashMap::new();
    for est in atomic {
        let (task_id, _) = parse_step_record_id(&est.task_id).ok_or_else(|| {
            AnalyticsError::InputMismatch(format!(
                "'{}' is not a step record id",
                est.task_id
            ))
        })?;
        steps_by_task.entry(task_id).or_default().push(est);
    }
    composite
        .iter()
        .map(|est| {
            let steps = steps_by_task.get(est.task_id.as_str()).ok_or_else(|| {
                AnalyticsError::InputMismatch(format!(
                    "task {} has no step estimates",
                    est.task_id
                ))
            })?;
            let predicted = steps.iter().map(|s| s.p_hat).product();
            Ok(CorrelationPoint {
                task_id: est.task_id.clone(),
                predicted,
                observed: est.p_hat,
            })
        })
        .collect()
}

/// Counts per capability state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Census {
    pub null: usize,
    pub transitional: usize,
    pub feasible: usize,
}

impl Census {
    pub fn total(&self) -> usize {
        self.null + self.transitional + self.feasible
    }

    /// Classify from `p_hat` with the given thresholds (stored states
    /// may come from a different config).
    pub fn from_estimates(estimates: &[InstanceEstimate], config: &ClassificationConfig) -> Self {
        let mut census = Census::default();
        for est in estimates {
            match classify(est.p_hat, config) {
                CapabilityState::Null => census.null += 1,
                CapabilityState::Transitional => census.transitional += 1,
                CapabilityState::Feasible => census.feasible += 1,
            }
        }
        census
    }
}

/// Before/after accounting over the same task set. "Recovered" means
/// null before and feasible after.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmergenceReport {
    pub null_before: usize,
    pub recovered: usize,
    /// recovered / null_before; 0 when nothing was null.
    pub recovery_rate: f64,
    /// Mean and median post `p_hat` over recovered tasks; 0 when none.
    pub recovered_mean_p: f64,
    pub recovered_median_p: f64,
    /// Post `p_hat` of recovered tasks in ten equal bins over [0, 1].
    pub histogram: [usize; 10],
}

fn paired<'a>(
    base: &'a [InstanceEstimate],
    post: &'a [InstanceEstimate],
) -> Result<Vec<(&'a InstanceEstimate, &'a InstanceEstimate)>, AnalyticsError> {
    if base.len() != post.len() {
        return Err(AnalyticsError::InputMismatch(format!(
            "rounds cover {} and {} tasks",
            base.len(),
            post.len()
        )));
    }
    let post_by_id: HashMap<&str, &InstanceEstimate> =
        post.iter().map(|e| (e.task_id.as_str(), e)).collect();
    if post_by_id.len() != post.len() {
        return Err(AnalyticsError::InputMismatch("duplicate task ids in post round".into()));
    }
    base.iter()
        .map(|b| {
            post_by_id
                .get(b.task_id.as_str())
                .map(|p| (b, *p))
                .ok_or_else(|| {
                    AnalyticsError::InputMismatch(format!(
                        "task {} is missing from the post round",
                        b.task_id
                    ))
                })
        })
        .collect()
}

pub fn emergence(
    base: &[InstanceEstimate],
    post: &[InstanceEstimate],
    config: &ClassificationConfig,
) -> Result<EmergenceReport, AnalyticsError> {
    let pairs = paired(base, post)?;
    let mut null_before = 0usize;
    let mut recovered_p: Vec<f64> = Vec::new();
    for (b, p) in pairs {
        if classify(b.p_hat, config) != CapabilityState::Null {
            continue;
        }
        null_before += 1;
        if classify(p.p_hat, config) == CapabilityState::Feasible {
            recovered_p.push(p.p_hat);
        }
    }
    let recovered = recovered_p.len();
    let recovery_rate = if null_before == 0 { 0.0 } else { recovered as f64 / null_before as f64 };
    let (mean, median) = if recovered == 0 {
        (0.0, 0.0)
    } else {
        recovered_p.sort_by(f64::total_cmp);
        let mean = recovered_p.iter().sum::<f64>() / recovered as f64;
        let median = if recovered % 2 == 1 {
            recovered_p[recovered / 2]
        } else {
            (recovered_p[recovered / 2 - 1] + recovered_p[recovered / 2]) / 2.0
        };
        (mean, median)
    };
    let mut histogram = [0usize; 10];
    for p in &recovered_p {
        let bin = ((p * 10.0).floor() as usize).min(9);
        histogram[bin] += 1;
    }
    Ok(EmergenceReport {
        null_before,
        recovered,
        recovery_rate,
        recovered_mean_p: mean,
        recovered_median_p: median,
        histogram,
    })
}

/// Per-task movement between two rounds, in base order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftRecord {
    pub task_id: String,
    pub before: CapabilityState,
    pub after: CapabilityState,
    pub delta_p: f64,
}

fn state_rank(state: CapabilityState) -> u8 {
    match state {
        CapabilityState::Null => 0,
        CapabilityState::Transitional => 1,
        CapabilityState::Feasible => 2,
    }
}

pub fn shift_analysis(
    base: &[InstanceEstimate],
    post: &[InstanceEstimate],
    config: &ClassificationConfig,
) -> Result<Vec<ShiftRecord>, AnalyticsError> {
    Ok(paired(base, post)?
        .into_iter()
        .map(|(b, p)| ShiftRecord {
            task_id: b.task_id.clone(),
            before: classify(b.p_hat, config),
            after: classify(p.p_hat, config),
            delta_p: p.p_hat - b.p_hat,
        })
        .collect())
}

/// Tasks whose capability state moved down.
pub fn erosion_count(records: &[ShiftRecord]) -> usize {
    records.iter().filter(|r| state_rank(r.after) < state_rank(r.before)).count()
}
