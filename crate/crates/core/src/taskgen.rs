//! Seeded dataset construction: operand sampling, ground-truth
//! computation, decomposition of chains into single-operation steps,
//! and the prompt templates.
//!
//! Each task draws from an RNG derived from (seed, domain, mode, split,
//! depth, index), so any task can be regenerated in isolation and the
//! dataset is independent of generation order and thread count.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{combine, fold_chain, solve_for_x, AlgebraError, DomainId, Element};
use crate::domains::render_element;
use crate::domains::{cube, knitting};
use crate::util::{derive_rng, short_hash};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskMode {
    /// Evaluate a left-associated chain of `depth` operations.
    ForwardEval,
    /// Solve `a ∘ x = b` for `x`.
    SolveEquation,
}

impl TaskMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TaskMode::ForwardEval => "forward_eval",
            TaskMode::SolveEquation => "solve_equation",
        }
    }
}

/// One task instance. `depth` counts binary operations, so a forward
/// task has `depth + 1` operands and an equation task has two.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpressionTask {
    pub task_id: String,
    pub domain: DomainId,
    pub depth: u32,
    pub mode: TaskMode,
    pub operands: Vec<Element>,
    pub answer: Element,
    pub split: Split,
}

impl ExpressionTask {
    /// Recompute the ground truth from the operands.
    pub fn recompute_answer(&self) -> Result<Element, AlgebraError> {
        match self.mode {
            TaskMode::ForwardEval => fold_chain(&self.operands),
            TaskMode::SolveEquation => {
                let (a, b) = match self.operands.as_slice() {
                    [a, b] => (a, b),
                    _ => return Err(AlgebraError::EmptyChain),
                };
                solve_for_x(a, b)
            }
        }
    }

    /// Whether the stored answer matches the recomputed ground truth.
    pub fn verify(&self) -> bool {
        self.recompute_answer().as_ref() == Ok(&self.answer)
    }
}

/// One step of a decomposed chain: `left ∘ right = truth` where `left`
/// is the running prefix value.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicStep {
    /// 1-based position in the chain.
    pub index: u32,
    pub left: Element,
    pub right: Element,
    pub truth: Element,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionChain {
    pub task_id: String,
    pub steps: Vec<AtomicStep>,
}

/// Inclusive sampling bounds per domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperandBounds {
    /// Cipher offset magnitude; the sign is drawn separately.
    pub cipher_magnitude: (u64, u64),
    /// Reduced knitting word length.
    pub knit_word_len: (usize, usize),
    /// Canonical cube sequence length in tokens.
    pub cube_seq_len: (usize, usize),
}

impl Default for OperandBounds {
    fn default() -> Self {
        OperandBounds {
            cipher_magnitude: (1, 342),
            knit_word_len: (1, 6),
            cube_seq_len: (1, 4),
        }
    }
}

pub(crate) const MAX_CIPHER_MAGNITUDE: u64 = 7u64.pow(15);
pub(crate) const MAX_KNIT_LEN: usize = 32;
pub(crate) const MAX_CUBE_LEN: usize = 12;

impl OperandBounds {
    pub fn validate(&self) -> Result<(), GenError> {
        let (clo, chi) = self.cipher_magnitude;
        if clo < 1 || clo > chi || chi > MAX_CIPHER_MAGNITUDE {
            return Err(GenError::Config(format!(
                "cipher magnitude bounds must satisfy 1 <= lo <= hi <= 7^15, got ({clo}, {chi})"
            )));
        }
        let (klo, khi) = self.knit_word_len;
        if klo > khi || khi > MAX_KNIT_LEN {
            return Err(GenError::Config(format!(
                "knit word length bounds must satisfy lo <= hi <= {MAX_KNIT_LEN}, got ({klo}, {khi})"
            )));
        }
        let (qlo, qhi) = self.cube_seq_len;
        if qlo > qhi || qhi > MAX_CUBE_LEN {
            return Err(GenError::Config(format!(
                "cube sequence length bounds must satisfy lo <= hi <= {MAX_CUBE_LEN}, got ({qlo}, {qhi})"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationConfig {
    pub seed: u64,
    /// Forward-evaluation task counts: domain → depth → count.
    pub counts: BTreeMap<DomainId, BTreeMap<u32, usize>>,
    pub bounds: OperandBounds,
    /// Resample when the answer is the identity or repeats an operand.
    pub reject_degenerate: bool,
    /// Extra depth-1 equation tasks per domain.
    pub solve_equation_count: usize,
}

impl GenerationConfig {
    /// Same depth profile for every listed domain.
    pub fn uniform(seed: u64, domains: &[DomainId], depth_counts: &[(u32, usize)]) -> Self {
        let per_domain: BTreeMap<u32, usize> = depth_counts.iter().copied().collect();
        GenerationConfig {
            seed,
            counts: domains.iter().map(|d| (*d, per_domain.clone())).collect(),
            bounds: OperandBounds::default(),
            reject_degenerate: true,
            solve_equation_count: 0,
        }
    }

    /// Standard corpus: per domain, 3200 single-operation training
    /// tasks plus 50 test tasks at each depth from 2 to 5.
    pub fn default_protocol(seed: u64) -> Self {
        Self::uniform(seed, &DomainId::ALL, &[(1, 3200), (2, 50), (3, 50), (4, 50), (5, 50)])
    }

    pub fn validate(&self) -> Result<(), GenError> {
        self.bounds.validate()?;
        for by_depth in self.counts.values() {
            if by_depth.keys().any(|d| *d == 0) {
                return Err(GenError::Config("task depth must be at least 1".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("invalid generation config: {0}")]
    Config(String),
    #[error("{domain} depth {depth} index {index}: no non-degenerate sample in {attempts} attempts")]
    ResampleExhausted { domain: DomainId, depth: u32, index: usize, attempts: usize },
    #[error("task {task_id}: decomposition requires a forward-evaluation task")]
    UnsupportedMode { task_id: String },
    #[error("task {task_id}: stored answer disagrees with the recomputed chain value")]
    AnswerMismatch { task_id: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn weighted_index<R: Rng>(rng: &mut R, weights: &[u64]) -> usize {
    let total: u64 = weights.iter().sum();
    debug_assert!(total > 0, "weights must not all be zero");
    let mut ticket = rng.gen_range(0..total);
    for (i, w) in weights.iter().enumerate() {
        if ticket < *w {
            return i;
        }
        ticket -= w;
    }
    unreachable!("ticket exceeds total weight")
}

/// Draw one element uniformly from the bounded canonical set of the
/// domain.
///
/// - encrypted history: magnitude uniform in the bound, sign fair;
/// - enigma: each rotor uniform over Z_26;
/// - knitting and cube: a word length is drawn proportionally to the
///   number of canonical words of that length, then a word uniformly
///   within the length class, so the draw is uniform over the whole
///   bounded set.
pub fn sample_element<R: Rng>(
    domain: DomainId,
    bounds: &OperandBounds,
    rng: &mut R,
) -> Result<Element, GenError> {
    bounds.validate()?;
    Ok(match domain {
        DomainId::EncryptedHistory => {
            let (lo, hi) = bounds.cipher_magnitude;
            let magnitude = rng.gen_range(lo..=hi) as i64;
            if rng.gen_bool(0.5) {
                Element::offset(magnitude)
            } else {
                Element::offset(-magnitude)
            }
        }
        DomainId::Enigma => {
            let a = rng.gen_range(0..26u8);
            let b = rng.gen_range(0..26u8);
            let c = rng.gen_range(0..26u8);
            Element::rotors(a, b, c)
        }
        DomainId::Knitting => sample_knit_word(bounds.knit_word_len, rng),
        DomainId::RubiksCube => sample_cube_sequence(bounds.cube_seq_len, rng),
    })
}

/// Reduced words of length L: 4·3^(L−1) of them (any first letter, then
/// anything but the inverse of the previous letter).
fn sample_knit_word<R: Rng>(len_bounds: (usize, usize), rng: &mut R) -> Element {
    let (lo, hi) = len_bounds;
    let weights: Vec<u64> = (lo..=hi)
        .map(|len| if len == 0 { 1 } else { 4 * 3u64.pow(len as u32 - 1) })
        .collect();
    let len = lo + weighted_index(rng, &weights);
    let mut word: Vec<knitting::KnitGen> = Vec::with_capacity(len);
    for _ in 0..len {
        let gen = match word.last() {
            None => knitting::KnitGen::ALL[rng.gen_range(0..4)],
            Some(prev) => {
                let options: Vec<knitting::KnitGen> = knitting::KnitGen::ALL
                    .into_iter()
                    .filter(|g| !g.cancels(*prev))
                    .collect();
                options[rng.gen_range(0..3)]
            }
        };
        word.push(gen);
    }
    debug_assert_eq!(word.len(), len);
    Element::knit_word(word)
}

fn cube_successor_allowed(prev: cube::Face, next: cube::Face) -> bool {
    next != prev && !(next == prev.opposite() && next.is_leader())
}

/// Face-sequence counts for canonical cube words, by length and final
/// face. Canonicity of a face sequence is a local property: no repeat
/// face, and no leader directly after its own opposite.
fn cube_face_counts(max_len: usize) -> Vec<[u64; 6]> {
    let mut ways: Vec<[u64; 6]> = vec![[0; 6]; max_len + 1];
    if max_len >= 1 {
        ways[1] = [1; 6];
    }
    for len in 2..=max_len {
        for (next_i, next) in cube::Face::ALL.into_iter().enumerate() {
            ways[len][next_i] = cube::Face::ALL
                .into_iter()
                .enumerate()
                .filter(|(_, prev)| cube_successor_allowed(*prev, next))
                .map(|(prev_i, _)| ways[len - 1][prev_i])
                .sum();
        }
    }
    ways
}

fn sample_cube_sequence<R: Rng>(len_bounds: (usize, usize), rng: &mut R) -> Element {
    let (lo, hi) = len_bounds;
    let ways = cube_face_counts(hi);
    // 3 turn choices per token.
    let weights: Vec<u64> = (lo..=hi)
        .map(|len| {
            if len == 0 {
                1
            } else {
                ways[len].iter().sum::<u64>() * 3u64.pow(len as u32)
            }
        })
        .collect();
    let len = lo + weighted_index(rng, &weights);
    if len == 0 {
        return Element::move_sequence([]);
    }
    let mut faces = vec![cube::Face::R; len];
    let last = weighted_index(rng, &ways[len]);
    faces[len - 1] = cube::Face::ALL[last];
    for pos in (0..len - 1).rev() {
        let next = faces[pos + 1];
        let weights: Vec<u64> = cube::Face::ALL
            .into_iter()
            .enumerate()
            .map(|(i, prev)| {
                if cube_successor_allowed(prev, next) {
                    ways[pos + 1][i]
                } else {
                    0
                }
            })
            .collect();
        faces[pos] = cube::Face::ALL[weighted_index(rng, &weights)];
    }
    let turn_table = [cube::Turns::One, cube::Turns::Two, cube::Turns::Three];
    let tokens: Vec<cube::CubeToken> = faces
        .into_iter()
        .map(|face| cube::CubeToken::new(face, turn_table[rng.gen_range(0..3)]))
        .collect();
    debug_assert_eq!(cube::canonicalize(tokens.clone()), tokens);
    Element::move_sequence(tokens)
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    domain: DomainId,
    mode: TaskMode,
    depth: u32,
    index: usize,
}

const RESAMPLE_ATTEMPTS: usize = 1000;

fn build_task(config: &GenerationConfig, slot: Slot) -> Result<ExpressionTask, GenError> {
    let split = if slot.depth == 1 { Split::Train } else { Split::Test };
    let seed = config.seed.to_string();
    let depth = slot.depth.to_string();
    let index = slot.index.to_string();
    let labels = [
        seed.as_str(),
        slot.domain.as_str(),
        slot.mode.as_str(),
        split.as_str(),
        depth.as_str(),
        index.as_str(),
    ];
    let mut rng = derive_rng("task-rng", &labels);
    let task_id = short_hash("task-id", &labels);
    let operand_count = match slot.mode {
        TaskMode::ForwardEval => slot.depth as usize + 1,
        TaskMode::SolveEquation => 2,
    };
    for _ in 0..RESAMPLE_ATTEMPTS {
        let operands: Vec<Element> = (0..operand_count)
            .map(|_| sample_element(slot.domain, &config.bounds, &mut rng))
            .collect::<Result<_, _>>()?;
        let answer = match slot.mode {
            TaskMode::ForwardEval => fold_chain(&operands)?,
            TaskMode::SolveEquation => solve_for_x(&operands[0], &operands[1])?,
        };
        if config.reject_degenerate && (answer.is_identity() || operands.contains(&answer)) {
            continue;
        }
        return Ok(ExpressionTask {
            task_id,
            domain: slot.domain,
            depth: slot.depth,
            mode: slot.mode,
            operands,
            answer,
            split,
        });
    }
    Err(GenError::ResampleExhausted {
        domain: slot.domain,
        depth: slot.depth,
        index: slot.index,
        attempts: RESAMPLE_ATTEMPTS,
    })
}

/// Generate the configured corpus. Output order follows the config
/// (domains, then depths, then indices) regardless of thread count, and
/// every task is a pure function of (seed, domain, mode, split, depth,
/// index).
pub fn generate_dataset(config: &GenerationConfig) -> Result<Vec<ExpressionTask>, GenError> {
    config.validate()?;
    let mut slots = Vec::new();
    for (domain, by_depth) in &config.counts {
        for (depth, count) in by_depth {
            for index in 0..*count {
                slots.push(Slot { domain: *domain, mode: TaskMode::ForwardEval, depth: *depth, index });
            }
        }
        for index in 0..config.solve_equation_count {
            slots.push(Slot { domain: *domain, mode: TaskMode::SolveEquation, depth: 1, index });
        }
    }
    slots.into_par_iter().map(|slot| build_task(config, slot)).collect()
}

/// Split a forward chain into its single-operation steps. Step `j`
/// combines the value of the first `j` operands with operand `j + 1`,
/// so the last truth is the task answer.
pub fn decompose(task: &ExpressionTask) -> Result<DecompositionChain, GenError> {
    if task.mode != TaskMode::ForwardEval {
        return Err(GenError::UnsupportedMode { task_id: task.task_id.clone() });
    }
    let (first, rest) = task.operands.split_first().ok_or(AlgebraError::EmptyChain)?;
    let mut steps = Vec::with_capacity(rest.len());
    let mut acc = first.clone();
    for (offset, operand) in rest.iter().enumerate() {
        let truth = combine(&acc, operand)?;
        steps.push(AtomicStep {
            index: offset as u32 + 1,
            left: acc,
            right: operand.clone(),
            truth: truth.clone(),
        });
        acc = truth;
    }
    if acc != task.answer {
        return Err(GenError::AnswerMismatch { task_id: task.task_id.clone() });
    }
    Ok(DecompositionChain { task_id: task.task_id.clone(), steps })
}

fn operator_symbol(domain: DomainId) -> &'static str {
    match domain {
        DomainId::EncryptedHistory => "+",
        DomainId::Enigma => "⊕",
        DomainId::Knitting => ">>",
        DomainId::RubiksCube => "·",
    }
}

fn domain_rules(domain: DomainId) -> &'static str {
    match domain {
        DomainId::EncryptedHistory => {
            "Archive offsets are written FWD(v) or BACK(v), where v is a base-7 numeral \
             in the letters a=0, b=1, c=2, d=3, e=4, f=5, g=6. FWD moves forward and BACK \
             moves backward, and combining offsets adds them as signed integers. Canonical \
             answers drop leading a digits; zero is written FWD(a)."
        }
        DomainId::Enigma => {
            "Rotor states are letter triples X,Y,Z with A=0 through Z=25. Combining two \
             states adds the rotor positions component-wise modulo 26. The neutral state \
             is A,A,A."
        }
        DomainId::Knitting => {
            "Stitch programs are words over k (knit), p (purl), K (undo knit), and \
             P (undo purl). Combining two programs concatenates them, then adjacent \
             opposite pairs kK, Kk, pP, Pp cancel until none remain. The empty program \
             is written ε."
        }
        DomainId::RubiksCube => {
            "Move sequences use the face letters R, L, U, D, F, B. A bare letter is a \
             clockwise quarter turn, a trailing 2 a half turn, and a trailing # a \
             counter-clockwise quarter turn. Combining sequences concatenates them and \
             then rewrites to canonical form: adjacent turns of the same face merge by \
             adding quarter turns modulo 4 (the pair drops when the sum is zero), and \
             adjacent turns of opposite faces reorder so R precedes L, U precedes D, and \
             F precedes B. The empty sequence is written ε."
        }
    }
}

const BOX_INSTRUCTION: &str = "Write the final answer as \\boxed{...}.";

/// Full prompt for a task: domain rulebook, the expression with
/// operands rendered verbatim, and the boxed-answer instruction.
pub fn render_prompt(task: &ExpressionTask) -> String {
    let rules = domain_rules(task.domain);
    let op = operator_symbol(task.domain);
    match task.mode {
        TaskMode::ForwardEval => {
            let expr = task
                .operands
                .iter()
                .map(render_element)
                .collect::<Vec<_>>()
                .join(&format!(" {op} "));
            format!(
                "{rules}\n\nCompute the canonical form of:\n{expr}\n\nApply the \
                 operations left to right. {BOX_INSTRUCTION}"
            )
        }
        TaskMode::SolveEquation => {
            let a = render_element(&task.operands[0]);
            let b = render_element(&task.operands[1]);
            format!(
                "{rules}\n\nFind the element x satisfying:\n{a} {op} x = {b}\n\n{BOX_INSTRUCTION}"
            )
        }
    }
}

/// Prompt for one decomposed step: a single application of the domain
/// operation.
pub fn render_step_prompt(step: &AtomicStep) -> String {
    let domain = step.left.domain();
    let rules = domain_rules(domain);
    let op = operator_symbol(domain);
    let left = render_element(&step.left);
    let right = render_element(&step.right);
    format!("{rules}\n\nCompute the canonical form of:\n{left} {op} {right}\n\n{BOX_INSTRUCTION}")
}
