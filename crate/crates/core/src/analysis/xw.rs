use std::collections::BTreeSet;

use serde::Serialize;

use super::{AnalysisError, CodeContext};
use crate::arrangements::Bayonet;
use crate::word::Word;

/// Number of times the exponent bound is doubled before giving up.
const MAX_DOUBLINGS: u32 = 4;

/// The set `X_w` of a separator `w`, as exponent pairs `(i, j)` of `a^i w a^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BayonetTable {
    pub sep: Word,
    pub elements: BTreeSet<(u64, u64)>,
    /// Exponent bound under which the table was enumerated.
    pub bound: u64,
}

impl BayonetTable {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn bayonets(&self) -> BTreeSet<Bayonet> {
        self.elements.iter().map(|&(i, j)| Bayonet::new(i, self.sep.clone(), j)).collect()
    }
}

fn check_separator(ctx: &CodeContext, w: &Word) -> Result<(), AnalysisError> {
    let bad = || AnalysisError::BadSeparator(w.to_string(), ctx.letter as char);
    let l = w.letters();
    if l.is_empty() || l[0] == ctx.letter || l[l.len() - 1] == ctx.letter {
        return Err(bad());
    }
    if !ctx.code.alphabet().admits(w) {
        return Err(bad());
    }
    Ok(())
}

/// Exponents `(i, j)` with `i, j <= bound` and `a^i w a^j ∈ X*`.
fn star_slice(ctx: &CodeContext, w: &Word, bound: u64) -> BTreeSet<(u64, u64)> {
    let rec = &ctx.recognizer;
    let mut out = BTreeSet::new();
    let mut left = rec.start();
    for i in 0..=bound {
        let mut q = rec.run(left, w);
        for j in 0..=bound {
            if rec.is_accepting(q) {
                out.insert((i, j));
            }
            q = rec.step(q, ctx.letter);
        }
        left = rec.step(left, ctx.letter);
    }
    out
}

/// `X_w` enumerated with every exponent at most `bound`: the words `a^i w a^j ∈ X*` from
/// which no factor `a^n` can be dropped on either side while staying in `X*`. Fails if a
/// survivor lies within `n` of the bound, since elements beyond it could then be missing.
pub fn compute_xw_with_bound(ctx: &CodeContext, w: &Word, bound: u64) -> Result<BayonetTable, AnalysisError> {
    check_separator(ctx, w)?;
    let n = ctx.n;
    let s = star_slice(ctx, w, bound);
    let elements: BTreeSet<(u64, u64)> = s
        .iter()
        .copied()
        .filter(|&(i, j)| !(i >= n && s.contains(&(i - n, j)) || j >= n && s.contains(&(i, j - n))))
        .collect();
    let limit = bound.saturating_sub(n);
    if elements.iter().any(|&(i, j)| i > limit || j > limit) {
        return Err(AnalysisError::BoundTooSmall(bound));
    }
    Ok(BayonetTable { sep: w.clone(), elements, bound })
}

/// `X_w` starting from the bound `2n|X| + 2n`, doubled on boundary contact.
pub fn compute_xw(ctx: &CodeContext, w: &Word) -> Result<BayonetTable, AnalysisError> {
    let mut bound = ctx.offset() + 2 * ctx.n;
    for attempt in 0..=MAX_DOUBLINGS {
        match compute_xw_with_bound(ctx, w, bound) {
            Err(AnalysisError::BoundTooSmall(_)) if attempt < MAX_DOUBLINGS => bound *= 2,
            other => return other,
        }
    }
    unreachable!("the last attempt returns")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::recognizer::tests::in_star_slow;
    use crate::codes::FiniteCode;
    use crate::word::w;

    fn ctx(words: &[&str]) -> CodeContext {
        CodeContext::maximal(&FiniteCode::from_strs("ab", words).unwrap(), b'a').unwrap()
    }

    fn slow_xw(c: &CodeContext, sep: &Word, bound: u64) -> BTreeSet<(u64, u64)> {
        let bay = |i, j| Bayonet::new(i, sep.clone(), j).to_word(c.letter);
        let member = |i: u64, j: u64| in_star_slow(&c.code, &bay(i, j));
        let mut out = BTreeSet::new();
        for i in 0..=bound {
            for j in 0..=bound {
                let shrinks = (i >= c.n && member(i - c.n, j)) || (j >= c.n && member(i, j - c.n));
                if member(i, j) && !shrinks {
                    out.insert((i, j));
                }
            }
        }
        out
    }

    #[test]
    fn examples() {
        let c = ctx(&["a", "b"]);
        assert_eq!(compute_xw(&c, &w("b")).unwrap().elements, BTreeSet::from([(0, 0)]));
        let seven = ctx(&["aaaaaa", "b", "baa", "baaaa", "ab", "abaa", "abaaaa"]);
        let t = compute_xw(&seven, &w("b")).unwrap();
        let grid: BTreeSet<(u64, u64)> =
            [0, 1].into_iter().flat_map(|i| [0, 2, 4].into_iter().map(move |j| (i, j))).collect();
        assert_eq!(t.elements, grid);
    }

    #[test]
    fn rejects_bad_separators() {
        let c = ctx(&["aa", "ab", "ba", "bb"]);
        for sep in ["1", "a", "ab", "ba", "bc"] {
            assert!(matches!(compute_xw(&c, &w(sep)), Err(AnalysisError::BadSeparator(..))), "{sep}");
        }
        assert!(compute_xw(&c, &w("bab")).is_ok());
    }

    #[test]
    fn matches_slow_oracle_and_has_n_elements() {
        for words in [&["aa", "ab", "ba", "bb"][..], &["b", "ab", "aa"], &["aaa", "b", "ab", "aab"]] {
            let c = ctx(words);
            for sep in ["b", "bb", "bab"] {
                let t = compute_xw(&c, &w(sep)).unwrap();
                assert_eq!(t.elements, slow_xw(&c, &w(sep), t.bound), "{words:?} {sep}");
                assert_eq!(t.len() as u64, c.n, "{words:?} {sep}");
                let doubled = compute_xw_with_bound(&c, &w(sep), 2 * t.bound).unwrap();
                assert_eq!(doubled.elements, t.elements);
            }
        }
    }

    #[test]
    fn small_bound_is_detected() {
        let c = ctx(&["aaaaaa", "b", "baa", "baaaa", "ab", "abaa", "abaaaa"]);
        assert_eq!(compute_xw_with_bound(&c, &w("b"), 6), Err(AnalysisError::BoundTooSmall(6)));
    }
}
