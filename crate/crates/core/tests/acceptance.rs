//! End-to-end acceptance checks, one test per criterion. Each prints a
//! verdict line; run with `--nocapture` to see them:
//!
//! ```text
//! cargo test -p algebrarium-core --test acceptance -- --nocapture
//! ```
//!
//! Expected-value oracles here are independent of the library code
//! paths they check: rewrite closures instead of the stack pass, subset
//! enumeration instead of the product-form estimator, and the sticker
//! permutation model instead of canonical-form equality.

use std::collections::{HashMap, HashSet};
use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use algebrarium_core::analytics::{
    correlation_points, curve_mse, dataset_curves, empirical_pass_k, fit_barrier, emergence,
    pearson, pooled_rate_by_depth,
};
use algebrarium_core::domains::cube::{CubeToken, Face, Turns};
use algebrarium_core::domains::cube_perm::permutation_of;
use algebrarium_core::domains::{parse_element, render_element};
use algebrarium_core::eval::{estimate, grade_record, ClassificationConfig, InstanceEstimate};
use algebrarium_core::jsonl::{ChainRow, TaskRow};
use algebrarium_core::simulator::{
    simulate_atomic, simulate_composite, simulate_dataset_composite, AgentProfile,
};
use algebrarium_core::taskgen::{
    decompose, generate_dataset, sample_element, ExpressionTask, GenerationConfig, OperandBounds,
    Split,
};
use algebrarium_core::{combine, fold_chain, identity, inverse, solve_for_x, DomainId, Element};

fn criterion<F: FnOnce() + UnwindSafe>(number: u32, name: &str, budget: Duration, body: F) {
    let started = Instant::now();
    let outcome = catch_unwind(body);
    let elapsed = started.elapsed();
    match outcome {
        Ok(()) => {
            println!("criterion {number} ({name}): PASS ({elapsed:.2?})");
            assert!(elapsed <= budget, "criterion {number} exceeded its {budget:?} budget");
        }
        Err(payload) => {
            println!("criterion {number} ({name}): FAIL ({elapsed:.2?})");
            resume_unwind(payload);
        }
    }
}

fn parse(domain: DomainId, s: &str) -> Element {
    parse_element(domain, s).unwrap()
}

#[test]
fn criterion_1_worked_examples() {
    criterion(1, "worked examples", Duration::from_secs(1), || {
        let a = parse(DomainId::EncryptedHistory, "FWD(ad)");
        let b = parse(DomainId::EncryptedHistory, "BACK(ef)");
        assert_eq!(render_element(&combine(&a, &b).unwrap()), "BACK(ec)");

        let a = parse(DomainId::Enigma, "A,C,Z");
        let b = parse(DomainId::Enigma, "B,B,C");
        assert_eq!(render_element(&combine(&a, &b).unwrap()), "B,D,B");

        let a = parse(DomainId::Knitting, "kp");
        let b = parse(DomainId::Knitting, "PK");
        assert_eq!(render_element(&combine(&a, &b).unwrap()), "ε");

        let a = parse(DomainId::RubiksCube, "R U");
        let b = parse(DomainId::RubiksCube, "R U R#");
        assert_eq!(render_element(&solve_for_x(&a, &b).unwrap()), "R#");
    });
}

// Every face/turn token.
fn all_tokens() -> Vec<CubeToken> {
    let mut out = Vec::new();
    for face in Face::ALL {
        for turns in [Turns::One, Turns::Two, Turns::Three] {
            out.push(CubeToken::new(face, turns));
        }
    }
    out
}

/// One application of either rewrite rule at each position.
fn single_rewrites(seq: &[CubeToken]) -> Vec<Vec<CubeToken>> {
    let mut out = Vec::new();
    for i in 0..seq.len().saturating_sub(1) {
        let (a, b) = (seq[i], seq[i + 1]);
        if a.face == b.face {
            let mut next = seq.to_vec();
            match Turns::from_u8(a.turns.as_u8() + b.turns.as_u8()) {
                Some(turns) => {
                    next[i] = CubeToken::new(a.face, turns);
                    next.remove(i + 1);
                }
                None => {
                    next.drain(i..=i + 1);
                }
            }
            out.push(next);
        } else if b.face == a.face.opposite() && b.face.is_leader() {
            let mut next = seq.to_vec();
            next.swap(i, i + 1);
            out.push(next);
        }
    }
    out
}

/// All irreducible forms reachable by applying rules in any order.
fn closure_normal_forms(
    seq: &[CubeToken],
    memo: &mut HashMap<Vec<CubeToken>, HashSet<Vec<CubeToken>>>,
) -> HashSet<Vec<CubeToken>> {
    if let Some(hit) = memo.get(seq) {
        return hit.clone();
    }
    let rewrites = single_rewrites(seq);
    let result: HashSet<Vec<CubeToken>> = if rewrites.is_empty() {
        HashSet::from([seq.to_vec()])
    } else {
        rewrites.iter().flat_map(|r| closure_normal_forms(r, memo)).collect()
    };
    memo.insert(seq.to_vec(), result.clone());
    result
}

fn law_suite(domain: DomainId, rounds: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa11e_6e8a);
    let bounds = OperandBounds::default();
    let id = identity(domain);
    for _ in 0..rounds {
        let a = sample_element(domain, &bounds, &mut rng).unwrap();
        let b = sample_element(domain, &bounds, &mut rng).unwrap();
        let c = sample_element(domain, &bounds, &mut rng).unwrap();
        let ab_c = combine(&combine(&a, &b).unwrap(), &c).unwrap();
        let a_bc = combine(&a, &combine(&b, &c).unwrap()).unwrap();
        assert_eq!(ab_c, a_bc);
        assert_eq!(combine(&a, &id).unwrap(), a);
        assert_eq!(combine(&id, &a).unwrap(), a);
        assert!(combine(&a, &inverse(&a)).unwrap().is_identity());
        assert!(combine(&inverse(&a), &a).unwrap().is_identity());
        let x = solve_for_x(&a, &b).unwrap();
        assert_eq!(combine(&a, &x).unwrap(), b);
        assert_eq!(parse(domain, &render_element(&ab_c)), ab_c);
    }
}

#[test]
fn criterion_2_algebra_laws_and_rewrite_confluence() {
    criterion(2, "algebra laws, confluence, soundness", Duration::from_secs(60), || {
        for domain in DomainId::ALL {
            law_suite(domain, 1000);
        }

        // Exhaustive confluence check: every token sequence of length
        // <= 4 has exactly one irreducible form under arbitrary-order
        // rule application, and it is the canonical form.
        let tokens = all_tokens();
        let mut sequences: Vec<Vec<CubeToken>> = vec![Vec::new()];
        let mut frontier: Vec<Vec<CubeToken>> = vec![Vec::new()];
        for _ in 0..4 {
            let mut next = Vec::new();
            for seq in &frontier {
                for tok in &tokens {
                    let mut longer = seq.clone();
                    longer.push(*tok);
                    next.push(longer);
                }
            }
            sequences.extend(next.iter().cloned());
            frontier = next;
        }
        assert_eq!(sequences.len(), 1 + 18 + 324 + 5832 + 104_976);
        let mut memo = HashMap::new();
        for seq in &sequences {
            let forms = closure_normal_forms(seq, &mut memo);
            assert_eq!(forms.len(), 1, "ambiguous normal forms for {seq:?}");
            let canonical = Element::move_sequence(seq.clone());
            let expected = forms.into_iter().next().unwrap();
            assert_eq!(canonical.as_move_sequence().unwrap(), &expected[..]);
        }

        // Soundness of the quotient: canonicalization never changes the
        // facelet permutation, so canonical-equal sequences act
        // identically on the physical cube.
        let mut rng = ChaCha8Rng::seed_from_u64(0x50f1);
        let tokens = all_tokens();
        for _ in 0..1000 {
            let len = rng.gen_range(0..=10);
            let seq: Vec<CubeToken> =
                (0..len).map(|_| tokens[rng.gen_range(0..tokens.len())]).collect();
            let canonical = Element::move_sequence(seq.clone());
            assert_eq!(
                permutation_of(&seq),
                permutation_of(canonical.as_move_sequence().unwrap())
            );
        }
    });
}

fn depth5_tasks(seed: u64) -> (Vec<ExpressionTask>, Vec<algebrarium_core::taskgen::DecompositionChain>) {
    let config = GenerationConfig::uniform(seed, &DomainId::ALL, &[(5, 50)]);
    let tasks = generate_dataset(&config).unwrap();
    let chains = tasks.iter().map(|t| decompose(t).unwrap()).collect();
    (tasks, chains)
}

fn pooled_composite_rate(
    tasks: &[ExpressionTask],
    chains: &[algebrarium_core::taskgen::DecompositionChain],
    profile: &AgentProfile,
    n: usize,
) -> f64 {
    let records = simulate_dataset_composite(tasks, chains, profile, n).unwrap();
    let mut hits = 0usize;
    let mut total = 0usize;
    for (record, task) in records.iter().zip(tasks) {
        let graded = grade_record(record, &task.answer);
        hits += graded.success_count();
        total += graded.results.len();
    }
    hits as f64 / total as f64
}

#[test]
fn criterion_3_multiplicative_barrier() {
    criterion(3, "five-step success collapses multiplicatively", Duration::from_secs(120), || {
        let (tasks, chains) = depth5_tasks(301);
        let n = 512;
        let total = (tasks.len() * n) as f64;
        for (p, label) in [(0.3f64, "weak"), (0.7, "strong")] {
            let profile = AgentProfile::uniform(label, 3000 + label.len() as u64, p);
            let observed = pooled_composite_rate(&tasks, &chains, &profile, n);
            let expected = p.powi(5);
            let tolerance = 3.0 * (expected * (1.0 - expected) / total).sqrt();
            assert!(
                (observed - expected).abs() <= tolerance,
                "step rate {p}: pooled composite rate {observed} not within {tolerance} of {expected}"
            );
        }
    });
}

#[test]
fn criterion_4_pass_k_curve_fidelity() {
    criterion(4, "empirical Pass@k tracks the closed form", Duration::from_secs(60), || {
        // 200 single-step instances over a spread of step rates.
        let grid = [0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9];
        let config = GenerationConfig::uniform(401, &DomainId::ALL, &[(1, 50)]);
        let tasks = generate_dataset(&config).unwrap();
        let classification = ClassificationConfig::default();
        let estimates: Vec<InstanceEstimate> = tasks
            .iter()
            .enumerate()
            .map(|(i, task)| {
                let chain = decompose(task).unwrap();
                let profile = AgentProfile::uniform("sweep", 4000 + i as u64, grid[i % grid.len()]);
                let record = simulate_atomic(&task.task_id, &chain.steps[0], &profile, 128).unwrap();
                let graded = grade_record(&record, &chain.steps[0].truth);
                estimate(&graded, &classification).unwrap()
            })
            .collect();
        assert_eq!(estimates.len(), 200);
        let ks = [1, 2, 4, 8, 16, 32, 64, 128];
        let curves = dataset_curves(&estimates, &ks).unwrap();
        let mse = curve_mse(&curves.empirical, &curves.theoretical).unwrap();
        assert!(mse < 1e-3, "curve MSE {mse} out of tolerance");
        let k1_gap = (curves.empirical[0] - curves.theoretical[0]).abs();
        assert_eq!(k1_gap, 0.0, "k=1 must agree exactly");
    });
}

#[test]
fn criterion_5_estimator_equals_subset_enumeration() {
    criterion(5, "Pass@k estimator matches enumeration", Duration::from_secs(5), || {
        for n in 1..=12usize {
            for c in 0..=n {
                for k in 1..=n {
                    // Enumerate every k-subset of n samples, the first
                    // c of which are successes.
                    let mut with_hit = 0u64;
                    let mut subsets = 0u64;
                    for mask in 0u32..(1 << n) {
                        if mask.count_ones() as usize != k {
                            continue;
                        }
                        subsets += 1;
                        if (mask & ((1 << c) - 1)) != 0 {
                            with_hit += 1;
                        }
                    }
                    let brute = with_hit as f64 / subsets as f64;
                    let closed = empirical_pass_k(n, c, k as u32).unwrap();
                    assert!(
                        (brute - closed).abs() < 1e-12,
                        "n={n} c={c} k={k}: {closed} vs enumerated {brute}"
                    );
                }
            }
        }
    });
}

#[test]
fn criterion_6_barrier_fit_recovers_step_rate() {
    criterion(6, "depth-decay fit recovers the step rate", Duration::from_secs(120), || {
        // Noiseless: exact recovery through the origin.
        let exact: Vec<(u32, f64)> = (1..=5).map(|d| (d, 0.37f64.powi(d as i32))).collect();
        let fit = fit_barrier(&exact).unwrap();
        assert!((fit.p - 0.37).abs() < 1e-12);
        assert!(fit.residual_rms < 1e-10);

        // Simulated: pooled per-depth rates from a p=0.3 agent.
        let config =
            GenerationConfig::uniform(601, &DomainId::ALL, &[(1, 10), (2, 10), (3, 10), (4, 10), (5, 10)]);
        let tasks = generate_dataset(&config).unwrap();
        let chains: Vec<_> = tasks.iter().map(|t| decompose(t).unwrap()).collect();
        let profile = AgentProfile::uniform("decay", 66, 0.3);
        let records = simulate_dataset_composite(&tasks, &chains, &profile, 512).unwrap();
        let classification = ClassificationConfig::default();
        let estimates: Vec<InstanceEstimate> = records
            .iter()
            .zip(&tasks)
            .map(|(record, task)| {
                let graded = grade_record(record, &task.answer);
                estimate(&graded, &classification).unwrap()
            })
            .collect();
        let depths: HashMap<String, u32> =
            tasks.iter().map(|t| (t.task_id.clone(), t.depth)).collect();
        let points = pooled_rate_by_depth(&estimates, &depths).unwrap();
        assert_eq!(points.len(), 5);
        let fit = fit_barrier(&points).unwrap();
        assert!(
            (0.25..=0.35).contains(&fit.p),
            "fitted step rate {} strays from 0.3",
            fit.p
        );
    });
}

#[test]
fn criterion_7_emergence_recovery() {
    criterion(7, "null tasks recover after a step-rate jump", Duration::from_secs(120), || {
        let (tasks, chains) = depth5_tasks(701);
        let classification = ClassificationConfig::default();
        let n = classification.k_large() as usize;
        let by_id: HashMap<&str, &ExpressionTask> =
            tasks.iter().map(|t| (t.task_id.as_str(), t)).collect();
        let round = |p: f64, seed: u64| -> Vec<InstanceEstimate> {
            let profile = AgentProfile::uniform("round", seed, p);
            simulate_dataset_composite(&tasks, &chains, &profile, n)
                .unwrap()
                .iter()
                .map(|record| {
                    let task = by_id[record.task_id.as_str()];
                    estimate(&grade_record(record, &task.answer), &classification).unwrap()
                })
                .collect()
        };
        let base = round(0.3, 71);
        let post = round(0.7, 72);
        let report = emergence(&base, &post, &classification).unwrap();
        // At a 0.3 step rate, all 200 five-step tasks should look null.
        assert!(report.null_before >= 195, "only {} null at base", report.null_before);
        assert!(
            report.recovery_rate >= 0.85,
            "recovery rate {} below 0.85",
            report.recovery_rate
        );
        let expected = 0.7f64.powi(5);
        assert!(
            (report.recovered_mean_p - expected).abs() <= 0.02,
            "recovered mean {} not within 0.02 of {expected}",
            report.recovered_mean_p
        );
    });
}

#[test]
fn criterion_8_step_product_predicts_composite_rate() {
    criterion(8, "step product predicts composite rate", Duration::from_secs(120), || {
        let config =
            GenerationConfig::uniform(801, &DomainId::ALL, &[(2, 13), (3, 13), (4, 13), (5, 13)]);
        let tasks = generate_dataset(&config).unwrap();
        let tasks = &tasks[..200];
        let classification = ClassificationConfig::default();
        let mut composite = Vec::new();
        let mut atomic = Vec::new();
        for (i, task) in tasks.iter().enumerate() {
            let p = 0.3 + 0.65 * (i % 17) as f64 / 16.0;
            let profile = AgentProfile::uniform("varied", 8000 + i as u64, p);
            let chain = decompose(task).unwrap();
            let record = simulate_composite(task, &chain, &profile, 128).unwrap();
            composite.push(
                estimate(&grade_record(&record, &task.answer), &classification).unwrap(),
            );
            for step in &chain.steps {
                let record = simulate_atomic(&task.task_id, step, &profile, 128).unwrap();
                atomic.push(
                    estimate(&grade_record(&record, &step.truth), &classification).unwrap(),
                );
            }
        }
        let points = correlation_points(&composite, &atomic).unwrap();
        assert_eq!(points.len(), 200);
        let predicted: Vec<f64> = points.iter().map(|p| p.predicted).collect();
        let observed: Vec<f64> = points.iter().map(|p| p.observed).collect();
        let r = pearson(&predicted, &observed).unwrap();
        assert!(r >= 0.95, "Pearson r {r} below 0.95");
    });
}

#[test]
fn criterion_9_dataset_protocol_and_reproducibility() {
    criterion(9, "dataset protocol, verification, reproducibility", Duration::from_secs(120), || {
        let config = GenerationConfig::default_protocol(42);
        let tasks = generate_dataset(&config).unwrap();
        assert_eq!(tasks.len(), 13_600);
        let train = tasks.iter().filter(|t| t.split == Split::Train).count();
        let test = tasks.iter().filter(|t| t.split == Split::Test).count();
        assert_eq!((train, test), (12_800, 800));
        for domain in DomainId::ALL {
            let by_domain: Vec<_> = tasks.iter().filter(|t| t.domain == domain).collect();
            assert_eq!(by_domain.len(), 3400);
            assert_eq!(by_domain.iter().filter(|t| t.depth == 1).count(), 3200);
            for depth in 2..=5 {
                assert_eq!(by_domain.iter().filter(|t| t.depth == depth).count(), 50);
            }
        }
        let ids: HashSet<&str> = tasks.iter().map(|t| t.task_id.as_str()).collect();
        assert_eq!(ids.len(), tasks.len(), "task ids must be unique");

        // Every stored answer re-verifies against an independent fold,
        // and every chain is internally consistent.
        for task in &tasks {
            assert_eq!(fold_chain(&task.operands).unwrap(), task.answer);
            assert!(!task.answer.is_identity());
            let chain = decompose(task).unwrap();
            assert_eq!(chain.steps.len(), task.depth as usize);
        }

        // Byte-identical serialization across a second run and across
        // thread counts.
        let serialize = |tasks: &[ExpressionTask]| -> Vec<u8> {
            let mut bytes = Vec::new();
            for task in tasks {
                bytes.extend(serde_json::to_vec(&TaskRow::from_task(task)).unwrap());
                bytes.push(b'\n');
                if task.depth > 1 {
                    let row = ChainRow::from_chain(&decompose(task).unwrap());
                    bytes.extend(serde_json::to_vec(&row).unwrap());
                    bytes.push(b'\n');
                }
            }
            bytes
        };
        let first = serialize(&tasks);
        let again = serialize(&generate_dataset(&config).unwrap());
        assert_eq!(first, again, "regeneration must be byte-identical");
        let single_threaded = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| generate_dataset(&config).unwrap());
        assert_eq!(first, serialize(&single_threaded), "thread count must not matter");
    });
}
