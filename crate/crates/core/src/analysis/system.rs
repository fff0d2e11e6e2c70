use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::{AnalysisError, CodeContext};
use crate::codes::is_maximal;
use crate::cyclic::is_krasner;
use crate::word::Word;
use crate::NatSet;

/// Cap on the product states explored while enumerating right sets.
const RIGHT_SET_STATE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A left set `a^P` or right set `a^Q`, with a generator word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SidedSet {
    pub side: Side,
    pub residues: NatSet,
    pub generator: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemOfFactorizations {
    pub n: u64,
    /// Distinct left sets, each with the shortlex-least generator found.
    pub lefts: Vec<SidedSet>,
    pub rights: Vec<SidedSet>,
}

impl SystemOfFactorizations {
    pub fn has_left(&self, p: &NatSet) -> bool {
        self.lefts.iter().any(|s| &s.residues == p)
    }

    pub fn has_right(&self, q: &NatSet) -> bool {
        self.rights.iter().any(|s| &s.residues == q)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&NatSet, &NatSet)> {
        self.lefts.iter().flat_map(move |p| self.rights.iter().map(move |q| (&p.residues, &q.residues)))
    }

    /// Pairs `(P, Q)` of the system with `a^P a^Q = (a^n - 1)/(a - 1)`.
    pub fn krasner_pairs(&self) -> Vec<(NatSet, NatSet)> {
        self.pairs().filter(|(p, q)| is_krasner(p, q, self.n)).map(|(p, q)| (p.clone(), q.clone())).collect()
    }

    /// Whether some left or right set is a singleton.
    pub fn has_singleton(&self) -> bool {
        self.lefts.iter().chain(&self.rights).any(|s| s.residues.len() == 1)
    }
}

fn left_residues_at(ctx: &CodeContext, q: usize) -> NatSet {
    let rec = &ctx.recognizer;
    let mut state = rec.run_power(q, ctx.letter, ctx.offset());
    let mut out = NatSet::new();
    for i in 0..ctx.n {
        if rec.is_accepting(state) {
            out.insert(i);
        }
        state = rec.step(state, ctx.letter);
    }
    out
}

/// `P = {i < n : y a^{2n|X| + i} ∈ X*}` when `y` is strongly right completable.
pub fn left_set_of(ctx: &CodeContext, y: &Word) -> Option<SidedSet> {
    let q = ctx.recognizer.state_of(y);
    ctx.recognizer.is_strong(q).then(|| SidedSet {
        side: Side::Left,
        residues: left_residues_at(ctx, q),
        generator: y.clone(),
    })
}

/// States after `a^{2n|X| + k}` for `k < n`.
fn right_base(ctx: &CodeContext) -> Vec<usize> {
    let rec = &ctx.recognizer;
    let mut q = rec.run_power(rec.start(), ctx.letter, ctx.offset());
    let mut out = Vec::with_capacity(ctx.n as usize);
    for _ in 0..ctx.n {
        out.push(q);
        q = rec.step(q, ctx.letter);
    }
    out
}

/// `a^d ∈ (X*)^{-1} X*` for `d < n`.
fn power_in_quotient(ctx: &CodeContext) -> Vec<bool> {
    (0..ctx.n).map(|d| ctx.recognizer.in_star_quotient(&Word::power(ctx.letter, d as usize))).collect()
}

fn pairwise_ok(q: &NatSet, in_quotient: &[bool]) -> bool {
    q.iter().all(|&i| q.range(i + 1..).all(|&j| !in_quotient[(j - i) as usize]))
}

/// `Q = {k < n : a^{k + 2n|X|} x A* ∩ X* ≠ ∅}`, provided `Q` is nonempty and no difference
/// `j - i` of elements of `Q` has `a^{j-i} ∈ (X*)^{-1} X*`.
pub fn right_set_of(ctx: &CodeContext, x: &Word) -> Option<SidedSet> {
    let rec = &ctx.recognizer;
    let q: NatSet =
        right_base(ctx).iter().zip(0..).filter(|(&s, _)| rec.is_coreachable(rec.run(s, x))).map(|(_, k)| k).collect();
    (!q.is_empty() && pairwise_ok(&q, &power_in_quotient(ctx))).then(|| SidedSet {
        side: Side::Right,
        residues: q,
        generator: x.clone(),
    })
}

/// The system of factorizations induced by a maximal code. Left sets come from one generator
/// per strongly right completable state; right sets from a breadth-first walk of the tuple
/// of states reached from every `a^{2n|X| + k}`.
pub fn enumerate_system(ctx: &CodeContext) -> Result<SystemOfFactorizations, AnalysisError> {
    if !is_maximal(&ctx.code).unwrap_or(false) {
        return Err(AnalysisError::NotMaximal);
    }
    let rec = &ctx.recognizer;
    let mut lefts: BTreeMap<NatSet, Word> = BTreeMap::new();
    for (q, y) in rec.reachable_with_words() {
        if rec.is_strong(q) {
            lefts.entry(left_residues_at(ctx, q)).or_insert(y);
        }
    }

    let in_quotient = power_in_quotient(ctx);
    let start = right_base(ctx);
    let mut seen: BTreeMap<Vec<usize>, ()> = BTreeMap::from([(start.clone(), ())]);
    let mut queue = VecDeque::from([(start, Word::empty())]);
    let mut rights: BTreeMap<NatSet, Word> = BTreeMap::new();
    while let Some((tuple, x)) = queue.pop_front() {
        let q: NatSet = tuple.iter().zip(0..).filter(|(&s, _)| rec.is_coreachable(s)).map(|(_, k)| k).collect();
        if !q.is_empty() && pairwise_ok(&q, &in_quotient) {
            rights.entry(q).or_insert_with(|| x.clone());
        }
        for &c in rec.letters() {
            let next: Vec<usize> = tuple.iter().map(|&s| rec.step(s, c)).collect();
            if seen.insert(next.clone(), ()).is_none() {
                if seen.len() > RIGHT_SET_STATE_CAP {
                    return Err(AnalysisError::BudgetExceeded(RIGHT_SET_STATE_CAP as u64));
                }
                let mut xc = x.clone();
                xc.push(c);
                queue.push_back((next, xc));
            }
        }
    }
    let wrap = |side, m: BTreeMap<NatSet, Word>| {
        m.into_iter().map(|(residues, generator)| SidedSet { side, residues, generator }).collect()
    };
    Ok(SystemOfFactorizations { n: ctx.n, lefts: wrap(Side::Left, lefts), rights: wrap(Side::Right, rights) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::FiniteCode;
    use crate::cyclic::is_factorization;
    use crate::nat_set as s;
    use crate::word::w;

    fn ctx(words: &[&str]) -> CodeContext {
        CodeContext::maximal(&FiniteCode::from_strs("ab", words).unwrap(), b'a').unwrap()
    }

    fn seven() -> CodeContext {
        ctx(&["aaaaaa", "b", "baa", "baaaa", "ab", "abaa", "abaaaa"])
    }

    #[test]
    fn left_examples() {
        let c = seven();
        assert_eq!(left_set_of(&c, &w("b")).unwrap().residues, s(&[0, 2, 4]));
        assert_eq!(left_set_of(&c, &w("ba")).unwrap().residues, s(&[1, 3, 5]));
        // aab is a dead end, so neither 1 nor a is strongly right completable
        assert_eq!(left_set_of(&c, &Word::empty()), None);
        assert_eq!(left_set_of(&c, &w("a")), None);
        let dead = CodeContext::new(&FiniteCode::from_strs("ab", &["aa", "ab"]).unwrap(), b'a').unwrap();
        assert_eq!(left_set_of(&dead, &w("b")), None);
        let one = ctx(&["a", "b"]);
        assert_eq!(left_set_of(&one, &Word::empty()).unwrap().residues, s(&[0]));
        assert_eq!(one.n, 1);
    }

    #[test]
    fn right_examples() {
        let c = seven();
        let q = right_set_of(&c, &w("b")).unwrap();
        assert_eq!(q.residues, s(&[0, 1]));
        assert!(is_factorization(&s(&[0, 2, 4]), &q.residues, 6).unwrap());
        assert_eq!(right_set_of(&ctx(&["a", "b"]), &Word::empty()).unwrap().residues, s(&[0]));
        // every residue is completable here, but b·aa ∈ X puts aa in (X*)^{-1}X*
        assert_eq!(right_set_of(&c, &Word::empty()), None);
    }

    #[test]
    fn system_examples() {
        let sys = enumerate_system(&ctx(&["a", "b"])).unwrap();
        assert_eq!((sys.lefts.len(), sys.rights.len()), (1, 1));
        assert_eq!(sys.lefts[0].residues, s(&[0]));
        let sys = enumerate_system(&seven()).unwrap();
        assert!(sys.has_left(&s(&[0, 2, 4])) && sys.has_right(&s(&[0, 1])));
        for (p, q) in sys.pairs() {
            assert!(is_factorization(p, q, 6).unwrap(), "{p:?} {q:?}");
        }
        assert!(sys.krasner_pairs().contains(&(s(&[0, 2, 4]), s(&[0, 1]))));
        for words in [&["aa", "ab", "ba", "bb"][..], &["b", "ab", "aa"], &["a", "ba", "bb"]] {
            let sys = enumerate_system(&ctx(words)).unwrap();
            for (p, q) in sys.pairs() {
                assert!(is_factorization(p, q, sys.n).unwrap(), "{words:?}: {p:?} {q:?}");
            }
        }
    }

    #[test]
    fn left_set_depends_only_on_state() {
        let c = seven();
        let mut by_state: BTreeMap<usize, NatSet> = BTreeMap::new();
        for len in 0..=6 {
            for y in c.code.alphabet().words_of_length(len) {
                if let Some(p) = left_set_of(&c, &y) {
                    let prev = by_state.entry(c.recognizer.state_of(&y)).or_insert(p.residues.clone());
                    assert_eq!(prev, &p.residues);
                }
            }
        }
    }

    #[test]
    fn rejects_non_maximal() {
        let c = CodeContext::new(&FiniteCode::from_strs("ab", &["aa", "b"]).unwrap(), b'a').unwrap();
        assert_eq!(enumerate_system(&c), Err(AnalysisError::NotMaximal));
    }
}
