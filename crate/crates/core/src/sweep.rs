//! Seeded families of random (source, code) pairs for sweeps and
//! cross-checks. The same seed always yields the same family.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::{Codebook, Word};
use crate::source::MooreMarkovSource;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    /// Alphabet sizes are drawn from `2..=max_symbols`.
    pub max_symbols: usize,
    /// Codeword lengths are drawn from `1..=max_len`.
    pub max_len: usize,
    pub radix: u8,
    /// Every transition and start allowed, versus a random irreducible support.
    pub full_support: bool,
}

impl FamilyParams {
    /// Small constrained cases: up to 4 symbols, words of up to 3 bits.
    pub const SMALL: FamilyParams = FamilyParams {
        max_symbols: 4,
        max_len: 3,
        radix: 2,
        full_support: false,
    };
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub source: MooreMarkovSource,
    pub code: Codebook,
}

fn random_distribution<R: Rng>(support: &[bool], rng: &mut R) -> Vec<f64> {
    let weights: Vec<f64> = support
        .iter()
        .map(|&s| if s { rng.random_range(0.05..1.0) } else { 0.0 })
        .collect();
    let total: f64 = weights.iter().sum();
    weights.iter().map(|w| w / total).collect()
}

fn random_support<R: Rng>(m: usize, density: f64, rng: &mut R) -> Vec<bool> {
    let mut s: Vec<bool> = (0..m).map(|_| rng.random_bool(density)).collect();
    if !s.iter().any(|&b| b) {
        s[rng.random_range(0..m)] = true;
    }
    s
}

/// A random source with an irreducible transition graph (or full support).
pub fn random_source<R: Rng>(params: &FamilyParams, rng: &mut R) -> MooreMarkovSource {
    let m = rng.random_range(2..=params.max_symbols.max(2));
    let alphabet: Vec<String> = (0..m)
        .map(|i| ((b'A' + i as u8) as char).to_string())
        .collect();
    loop {
        let (rows, initial) = if params.full_support {
            let all = vec![true; m];
            let rows = (0..m).map(|_| random_distribution(&all, rng)).collect();
            (rows, random_distribution(&all, rng))
        } else {
            let density = rng.random_range(0.3..0.9);
            let rows: Vec<Vec<f64>> = (0..m)
                .map(|_| random_distribution(&random_support(m, density, rng), rng))
                .collect();
            let start = random_support(m, 0.6, rng);
            (rows, random_distribution(&start, rng))
        };
        let source =
            MooreMarkovSource::new(alphabet.clone(), rows, initial).expect("rows are normalized");
        if source.is_irreducible() {
            return source;
        }
    }
}

/// A random codebook for `m` symbols. Words are mostly random digit strings,
/// sometimes prefixes or extensions of one another to provoke collisions.
pub fn random_codebook<R: Rng>(m: usize, params: &FamilyParams, rng: &mut R) -> Codebook {
    let mut words: Vec<Vec<u8>> = Vec::with_capacity(m);
    for _ in 0..m {
        let len = rng.random_range(1..=params.max_len);
        let mut w: Vec<u8> = (0..len)
            .map(|_| rng.random_range(0..params.radix))
            .collect();
        if !words.is_empty() && rng.random_bool(0.3) {
            // Reuse a prefix of an earlier word.
            let base = words.choose(rng).unwrap();
            let keep = rng.random_range(1..=base.len().min(len));
            w[..keep].copy_from_slice(&base[..keep]);
        }
        words.push(w);
    }
    let words = words
        .into_iter()
        .map(|w| Word::new(w, params.radix).expect("digits below radix"))
        .collect();
    Codebook::new(params.radix, words).expect("valid codebook")
}

/// `count` cases drawn from a stream seeded with `seed`.
pub fn family(params: &FamilyParams, count: usize, seed: u64) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let source = random_source(params, &mut rng);
            let code = random_codebook(source.len(), params, &mut rng);
            Case { source, code }
        })
        .collect()
}
