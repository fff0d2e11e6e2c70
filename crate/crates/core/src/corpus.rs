//! Deterministic corpora of finite maximal codes over a binary alphabet.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codes::{build_code_from_ps, FiniteCode};
use crate::cyclic::krasner_pairs;
use crate::word::{Alphabet, Word};
use crate::NatSet;

/// How a corpus code was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    /// `C - 1 = P(A - 1)S` for enumerated or sampled `P`, `S`.
    Factorized { p: BTreeSet<Word>, s: BTreeSet<Word> },
    /// `a^I b a^J ∪ {a^n}` for a Krasner pair `(I, J)`.
    Krasner { i: NatSet, j: NatSet },
    /// Leaves of a complete binary tree.
    PrefixTree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub code: FiniteCode,
    pub origin: Origin,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusConfig {
    pub seed: u64,
    /// Codes with more words are dropped.
    pub max_words: usize,
    /// `P`, `S` range over all subsets containing 1 of the words of at most this length.
    pub exhaustive_len: usize,
    pub random_draws: usize,
    /// Maximal length of the words of sampled `P`, `S`.
    pub random_len: usize,
    /// Largest order of the Krasner codes.
    pub krasner_order: u64,
    pub tree_depth: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            seed: 0,
            max_words: 10,
            exhaustive_len: 2,
            random_draws: 200,
            random_len: 3,
            krasner_order: 12,
            tree_depth: 4,
        }
    }
}

fn words_up_to(alphabet: &Alphabet, len: usize) -> Vec<Word> {
    (0..=len).flat_map(|l| alphabet.words_of_length(l)).collect()
}

/// Every pair `(P, S)` of subsets of the words of length at most `len` with `1 ∈ P ∩ S`.
pub fn exhaustive_ps(alphabet: &Alphabet, len: usize) -> Vec<(BTreeSet<Word>, BTreeSet<Word>)> {
    let pool: Vec<Word> = words_up_to(alphabet, len).into_iter().filter(|w| !w.is_empty()).collect();
    let subsets: Vec<BTreeSet<Word>> = (0u64..1 << pool.len())
        .map(|mask| {
            let mut set: BTreeSet<Word> =
                (0..pool.len()).filter(|k| mask >> k & 1 == 1).map(|k| pool[k].clone()).collect();
            set.insert(Word::empty());
            set
        })
        .collect();
    subsets.iter().flat_map(|p| subsets.iter().map(move |s| (p.clone(), s.clone()))).collect()
}

/// `count` pairs `(P, S)` drawn with each nonempty word of length at most `len` included with
/// probability 1/4.
pub fn random_ps(alphabet: &Alphabet, seed: u64, count: usize, len: usize) -> Vec<(BTreeSet<Word>, BTreeSet<Word>)> {
    let pool: Vec<Word> = words_up_to(alphabet, len).into_iter().filter(|w| !w.is_empty()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let mut set: BTreeSet<Word> = pool.iter().filter(|_| rng.gen_ratio(1, 4)).cloned().collect();
        set.insert(Word::empty());
        set
    };
    (0..count).map(|_| (draw(&mut rng), draw(&mut rng))).collect()
}

/// `a^I b a^J ∪ {a^n}` for every Krasner pair of every order up to `max_order`.
pub fn krasner_codes(max_order: u64) -> Vec<CorpusEntry> {
    let alphabet = Alphabet::binary();
    let mut out = Vec::new();
    for n in 1..=max_order {
        for pair in krasner_pairs(n).expect("small order") {
            let powers = |e: &NatSet| e.iter().map(|&k| Word::power(b'a', k as usize)).collect();
            let code = build_code_from_ps(&alphabet, &powers(&pair.left), &powers(&pair.right))
                .expect("Krasner pairs factorize");
            out.push(CorpusEntry { code, origin: Origin::Krasner { i: pair.left, j: pair.right } });
        }
    }
    out
}

/// Leaf sets of all complete binary trees of depth at most `depth`, as prefix codes.
pub fn prefix_tree_codes(depth: usize) -> Vec<FiniteCode> {
    fn trees(depth: usize) -> Vec<Vec<Word>> {
        let mut out = vec![vec![Word::empty()]];
        if depth == 0 {
            return out;
        }
        let sub = trees(depth - 1);
        for left in &sub {
            for right in &sub {
                let mut leaves: Vec<Word> = left.iter().map(|w| Word::power(b'a', 1).concat(w)).collect();
                leaves.extend(right.iter().map(|w| Word::power(b'b', 1).concat(w)));
                out.push(leaves);
            }
        }
        out
    }
    trees(depth)
        .into_iter()
        .filter(|leaves| leaves.iter().all(|w| !w.is_empty()))
        .map(|leaves| FiniteCode::new(Alphabet::binary(), leaves).expect("binary leaves"))
        .collect()
}

/// The union of all generators, deduplicated by code and sorted by its text form.
pub fn standard_corpus(config: &CorpusConfig) -> Vec<CorpusEntry> {
    let alphabet = Alphabet::binary();
    let mut by_code: BTreeMap<String, CorpusEntry> = BTreeMap::new();
    let mut add = |entry: CorpusEntry| {
        if entry.code.len() <= config.max_words {
            by_code.entry(entry.code.to_text()).or_insert(entry);
        }
    };
    let mut pairs = exhaustive_ps(&alphabet, config.exhaustive_len);
    pairs.extend(random_ps(&alphabet, config.seed, config.random_draws, config.random_len));
    for (p, s) in pairs {
        if let Ok(code) = build_code_from_ps(&alphabet, &p, &s) {
            if !code.is_empty() {
                add(CorpusEntry { code, origin: Origin::Factorized { p, s } });
            }
        }
    }
    krasner_codes(config.krasner_order).into_iter().for_each(&mut add);
    for code in prefix_tree_codes(config.tree_depth) {
        add(CorpusEntry { code, origin: Origin::PrefixTree });
    }
    by_code.into_values().collect()
}
