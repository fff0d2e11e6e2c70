use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::codes::FiniteCode;
use crate::word::Word;

/// Complete deterministic automaton accepting `X*`, obtained by the subset construction over
/// the proper prefixes of the words of `X`.
#[derive(Clone, Debug)]
pub struct StarRecognizer {
    letters: Vec<u8>,
    /// `trans[q][c]` for the `c`-th letter of the alphabet.
    trans: Vec<Vec<usize>>,
    accepting: Vec<bool>,
    coreachable: Vec<bool>,
    strongly: Vec<bool>,
    sink: usize,
}

impl StarRecognizer {
    pub fn new(x: &FiniteCode) -> Self {
        let letters: Vec<u8> = x.alphabet().letters().collect();
        let mut prefixes: BTreeSet<Word> = BTreeSet::new();
        for w in x.words() {
            for k in 0..w.len() {
                prefixes.insert(w.slice(0, k));
            }
        }
        prefixes.insert(Word::empty());
        let prefixes: Vec<Word> = prefixes.into_iter().collect();
        let index: BTreeMap<&Word, usize> = prefixes.iter().enumerate().map(|(k, w)| (w, k)).collect();
        let empty = index[&Word::empty()];

        let mut ids: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        let mut subsets: Vec<BTreeSet<usize>> = Vec::new();
        let mut trans: Vec<Vec<usize>> = Vec::new();
        let start = BTreeSet::from([empty]);
        ids.insert(start.clone(), 0);
        subsets.push(start);
        let mut queue = VecDeque::from([0usize]);
        while let Some(q) = queue.pop_front() {
            let mut row = Vec::with_capacity(letters.len());
            for &c in &letters {
                let mut next = BTreeSet::new();
                for &u in &subsets[q] {
                    let mut uc = prefixes[u].clone();
                    uc.push(c);
                    if x.contains(&uc) {
                        next.insert(empty);
                    }
                    if let Some(&k) = index.get(&uc) {
                        next.insert(k);
                    }
                }
                let id = *ids.entry(next.clone()).or_insert_with(|| {
                    subsets.push(next);
                    queue.push_back(subsets.len() - 1);
                    subsets.len() - 1
                });
                row.push(id);
            }
            trans.push(row);
        }
        let sink = *ids.entry(BTreeSet::new()).or_insert_with(|| {
            subsets.push(BTreeSet::new());
            trans.push(vec![subsets.len() - 1; letters.len()]);
            subsets.len() - 1
        });
        let accepting: Vec<bool> = subsets.iter().map(|s| s.contains(&empty)).collect();

        let states = trans.len();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); states];
        for (q, row) in trans.iter().enumerate() {
            for &r in row {
                preds[r].push(q);
            }
        }
        let backward = |seeds: Vec<usize>| {
            let mut mark = vec![false; states];
            let mut queue: VecDeque<usize> = seeds.into_iter().collect();
            for &q in &queue {
                mark[q] = true;
            }
            while let Some(q) = queue.pop_front() {
                for &p in &preds[q] {
                    if !mark[p] {
                        mark[p] = true;
                        queue.push_back(p);
                    }
                }
            }
            mark
        };
        let coreachable = backward((0..states).filter(|&q| accepting[q]).collect());
        // A state fails strong completability iff it reaches a state that is not co-reachable.
        let reaches_dead = backward((0..states).filter(|&q| !coreachable[q]).collect());
        let strongly = reaches_dead.iter().map(|d| !d).collect();
        StarRecognizer { letters, trans, accepting, coreachable, strongly, sink }
    }

    pub fn start(&self) -> usize {
        0
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn step(&self, q: usize, letter: u8) -> usize {
        match self.letters.iter().position(|&c| c == letter) {
            Some(k) => self.trans[q][k],
            None => self.sink,
        }
    }

    pub fn run(&self, q: usize, word: &Word) -> usize {
        word.letters().iter().fold(q, |q, &c| self.step(q, c))
    }

    pub fn state_of(&self, word: &Word) -> usize {
        self.run(self.start(), word)
    }

    /// The state after `count` copies of `letter`.
    pub fn run_power(&self, q: usize, letter: u8, count: u64) -> usize {
        (0..count).fold(q, |q, _| self.step(q, letter))
    }

    pub fn accepts(&self, word: &Word) -> bool {
        self.accepting[self.state_of(word)]
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    /// Some accepting state is reachable from `q`.
    pub fn is_coreachable(&self, q: usize) -> bool {
        self.coreachable[q]
    }

    /// Every state reachable from `q` is co-reachable.
    pub fn is_strong(&self, q: usize) -> bool {
        self.strongly[q]
    }

    /// States reachable from the start, each with its shortlex-least access word.
    pub fn reachable_with_words(&self) -> Vec<(usize, Word)> {
        let mut word_of: Vec<Option<Word>> = vec![None; self.num_states()];
        word_of[0] = Some(Word::empty());
        let mut order = vec![0];
        let mut queue = VecDeque::from([0usize]);
        while let Some(q) = queue.pop_front() {
            for (k, &c) in self.letters.iter().enumerate() {
                let r = self.trans[q][k];
                if word_of[r].is_none() {
                    let mut w = word_of[q].clone().expect("visited");
                    w.push(c);
                    word_of[r] = Some(w);
                    order.push(r);
                    queue.push_back(r);
                }
            }
        }
        order.into_iter().map(|q| (q, word_of[q].clone().expect("visited"))).collect()
    }

    /// Whether `v ∈ (X*)^{-1} X*`, i.e. `uv ∈ X*` for some `u ∈ X*`.
    pub fn in_star_quotient(&self, v: &Word) -> bool {
        // Every state except possibly the sink is reachable, and the sink never accepts.
        (0..self.num_states()).any(|q| self.accepting[q] && self.accepting[self.run(q, v)])
    }
}

pub fn is_right_completable(w: &Word, x: &FiniteCode) -> bool {
    let rec = StarRecognizer::new(x);
    rec.is_coreachable(rec.state_of(w))
}

pub fn is_strongly_right_completable(w: &Word, x: &FiniteCode) -> bool {
    let rec = StarRecognizer::new(x);
    rec.is_strong(rec.state_of(w))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::word::w;

    pub(crate) fn in_star_slow(x: &FiniteCode, word: &Word) -> bool {
        let l = word.letters();
        let mut ok = vec![false; l.len() + 1];
        ok[0] = true;
        for end in 1..=l.len() {
            ok[end] =
                x.words().iter().any(|c| c.len() <= end && ok[end - c.len()] && &l[end - c.len()..end] == c.letters());
        }
        ok[l.len()]
    }

    fn code(words: &[&str]) -> FiniteCode {
        FiniteCode::from_strs("ab", words).unwrap()
    }

    #[test]
    fn examples() {
        let rec = StarRecognizer::new(&code(&["a"]));
        assert!(rec.accepts(&w("aaa")) && !rec.accepts(&w("ab")));
        assert!(rec.is_accepting(rec.start()));
        assert_eq!(rec.step(rec.start(), b'a'), rec.start());
        assert!(StarRecognizer::new(&code(&["b", "ab", "aa"])).accepts(&w("aab")));
        assert!(!StarRecognizer::new(&code(&["ab"])).accepts(&w("ba")));
    }

    #[test]
    fn agrees_with_dynamic_programming() {
        for words in
            [&["b", "ab", "aa"][..], &["ab"], &["a", "ab", "ba"], &["aa", "ab", "ba", "bb"], &["aaa", "b", "ab", "aab"]]
        {
            let x = code(words);
            let rec = StarRecognizer::new(&x);
            for len in 0..=2 * x.max_len() {
                for word in x.alphabet().words_of_length(len) {
                    assert_eq!(rec.accepts(&word), in_star_slow(&x, &word), "{words:?} {word}");
                }
            }
        }
    }

    #[test]
    fn completability() {
        for x in [code(&["b", "ab", "aa"]), code(&["ab"])] {
            assert!(is_right_completable(&Word::empty(), &x));
        }
        assert!(is_right_completable(&w("a"), &code(&["b", "ab", "aa"])));
        assert!(!is_right_completable(&w("b"), &code(&["ab"])));
        assert!(is_strongly_right_completable(&Word::empty(), &code(&["b", "ab", "aa"])));
        assert!(!is_strongly_right_completable(&Word::empty(), &code(&["ab"])));
        for word in ["1", "a", "ab", "bba"] {
            assert!(is_strongly_right_completable(&w(word), &code(&["a", "b"])));
        }
    }

    #[test]
    fn star_quotient() {
        let rec = StarRecognizer::new(&code(&["ab"]));
        assert!(rec.in_star_quotient(&w("abab")));
        assert!(!rec.in_star_quotient(&w("b")));
        // u = aa, v = a for {aa}
        let rec = StarRecognizer::new(&code(&["aa", "b"]));
        assert!(!rec.in_star_quotient(&w("a")));
        assert!(rec.in_star_quotient(&w("aab")));
    }
}
