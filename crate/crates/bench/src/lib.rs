//! Fixture builders shared by the benchmarks. Everything is seeded so
//! bench runs measure the same inputs every time.

use algebrarium_core::taskgen::{
    decompose, generate_dataset, DecompositionChain, ExpressionTask, GenerationConfig,
    OperandBounds,
};
use algebrarium_core::{render_element, sample_element, DomainId};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// An unreduced token string of roughly `tokens` cube moves, built by
/// concatenating short canonical words so parsing has real rewrite work
/// to do at the joins.
pub fn scrambled_cube_text(tokens: usize, seed: u64) -> String {
    word_soup(DomainId::RubiksCube, tokens, seed, " ")
}

/// An unreduced knitting string of roughly `chars` generators.
pub fn scrambled_knit_text(chars: usize, seed: u64) -> String {
    word_soup(DomainId::Knitting, chars, seed, "")
}

fn word_soup(domain: DomainId, target_len: usize, seed: u64, joiner: &str) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bounds = OperandBounds::default();
    let mut words = Vec::new();
    let mut len = 0;
    while len < target_len {
        let element = sample_element(domain, &bounds, &mut rng).expect("bounds are valid");
        let word = render_element(&element);
        len += if joiner.is_empty() { word.chars().count() } else { word.split(' ').count() };
        words.push(word);
    }
    words.join(joiner)
}

/// A small all-domain dataset of depth-5 tasks with their chains.
pub fn deep_tasks(per_domain: usize, seed: u64) -> (Vec<ExpressionTask>, Vec<DecompositionChain>) {
    let config = GenerationConfig::uniform(seed, &DomainId::ALL, &[(5, per_domain)]);
    let tasks = generate_dataset(&config).expect("generation fits default bounds");
    let chains = tasks.iter().map(|t| decompose(t).expect("forward task")).collect();
    (tasks, chains)
}
