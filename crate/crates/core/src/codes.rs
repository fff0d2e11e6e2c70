//! Finite codes: unique decipherability, prefix/suffix classes, maximality and positive
//! factorizations `C - 1 = P(A - 1)S`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polynomials::{NcPoly, PolyError};
use crate::word::{Alphabet, Word};

/// Default number of candidate `S` sets tried by [`search_positive_factorization`].
pub const DEFAULT_FACTOR_BUDGET: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("codes may not contain the empty word")]
    EmptyWord,
    #[error("word {0} uses a letter outside the alphabet")]
    ForeignWord(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a code: {0} has two factorizations")]
    NotACode(String),
    #[error("not a factorizing polynomial: coefficient {coeff} at {word}")]
    NotFactorizing { word: String, coeff: BigInt },
    #[error("search budget of {0} candidates exceeded")]
    BudgetExceeded(u64),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A finite set of nonempty words over a declared alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CodeRepr", into = "CodeRepr")]
pub struct FiniteCode {
    alphabet: Alphabet,
    words: BTreeSet<Word>,
}

#[derive(Serialize, Deserialize)]
struct CodeRepr {
    alphabet: Alphabet,
    words: Vec<Word>,
}

impl TryFrom<CodeRepr> for FiniteCode {
    type Error = CodeError;

    fn try_from(r: CodeRepr) -> Result<Self, CodeError> {
        FiniteCode::new(r.alphabet, r.words)
    }
}

impl From<FiniteCode> for CodeRepr {
    fn from(c: FiniteCode) -> Self {
        CodeRepr { alphabet: c.alphabet, words: c.words.into_iter().collect() }
    }
}

impl FiniteCode {
    pub fn new(alphabet: Alphabet, words: impl IntoIterator<Item = Word>) -> Result<Self, CodeError> {
        let words: BTreeSet<Word> = words.into_iter().collect();
        if words.contains(&Word::empty()) {
            return Err(CodeError::EmptyWord);
        }
        if let Some(w) = words.iter().find(|w| !alphabet.admits(w)) {
            return Err(CodeError::ForeignWord(w.to_string()));
        }
        Ok(FiniteCode { alphabet, words })
    }

    /// Parses whitespace-separated word literals over `alphabet`.
    pub fn from_strs(alphabet: &str, words: &[&str]) -> Result<Self, CodeError> {
        let alphabet = Alphabet::try_from(alphabet.to_string()).map_err(CodeError::Parse)?;
        let words = words.iter().map(|s| s.parse::<Word>().map_err(CodeError::Parse)).collect::<Result<Vec<_>, _>>()?;
        Self::new(alphabet, words)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn characteristic(&self) -> NcPoly {
        NcPoly::characteristic(self.alphabet.clone(), &self.words).expect("words checked against alphabet")
    }

    /// Reads either the line format (`alphabet: ab` header, one word per line, `#` comments)
    /// or the JSON object `{"alphabet": .., "words": [..]}`.
    pub fn parse(text: &str) -> Result<Self, CodeError> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            return serde_json::from_str(trimmed).map_err(|e| CodeError::Parse(e.to_string()));
        }
        let mut lines = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| CodeError::Parse("missing alphabet header".into()))?;
        let alphabet = header
            .strip_prefix("alphabet:")
            .ok_or_else(|| CodeError::Parse(format!("expected `alphabet: ...`, found {header:?}")))?
            .trim();
        let alphabet = Alphabet::try_from(alphabet.to_string()).map_err(CodeError::Parse)?;
        let mut words = Vec::new();
        for line in lines {
            for token in line.split_whitespace() {
                words.push(token.parse::<Word>().map_err(CodeError::Parse)?);
            }
        }
        Self::new(alphabet, words)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("alphabet: {}\n", self.alphabet);
        for w in &self.words {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for FiniteCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.words.iter().map(Word::to_string).collect();
        write!(f, "{{{}}}", words.join(", "))
    }
}

/// A word with two distinct factorizations over the code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ambiguity {
    pub word: Word,
    pub first: Vec<Word>,
    pub second: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeVerdict {
    pub is_code: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Ambiguity>,
}

/// Sardinas–Patterson decision. A shortest ambiguous word is found by a shortest-path search
/// over dangling suffixes, weighted by the length of the longer partial factorization.
pub fn is_code(x: &FiniteCode) -> CodeVerdict {
    // State: the longer parse `ahead` overshoots the shorter `behind` by `dangling`.
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    struct Partial {
        word: Word,
        ahead: Vec<Word>,
        behind: Vec<Word>,
    }

    let words: Vec<&Word> = x.words.iter().collect();
    let mut heap: BinaryHeap<Reverse<(usize, Word, Word, Partial)>> = BinaryHeap::new();
    for &u in &words {
        for &v in &words {
            if u != v && u.is_prefix_of(v) {
                let dangling = v.slice(u.len(), v.len());
                let p = Partial { word: v.clone(), ahead: vec![v.clone()], behind: vec![u.clone()] };
                heap.push(Reverse((v.len(), v.clone(), dangling, p)));
            }
        }
    }
    let mut settled: BTreeSet<Word> = BTreeSet::new();
    while let Some(Reverse((len, _, dangling, p))) = heap.pop() {
        if !settled.insert(dangling.clone()) {
            continue;
        }
        for &c in &words {
            let mut behind = p.behind.clone();
            behind.push(c.clone());
            if c == &dangling {
                return CodeVerdict {
                    is_code: false,
                    witness: Some(Ambiguity { word: p.word, first: p.ahead, second: behind }),
                };
            }
            if c.is_prefix_of(&dangling) {
                let next = dangling.slice(c.len(), dangling.len());
                if !settled.contains(&next) {
                    let q = Partial { word: p.word.clone(), ahead: p.ahead.clone(), behind };
                    heap.push(Reverse((len, q.word.clone(), next, q)));
                }
            } else if dangling.is_prefix_of(c) {
                let next = c.slice(dangling.len(), c.len());
                if !settled.contains(&next) {
                    let word = p.word.concat(&next);
                    let q = Partial { word: word.clone(), ahead: behind, behind: p.ahead.clone() };
                    heap.push(Reverse((word.len(), word, next, q)));
                }
            }
        }
    }
    CodeVerdict { is_code: true, witness: None }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodeClass {
    pub prefix: bool,
    pub suffix: bool,
    pub bifix: bool,
}

pub fn code_class(x: &FiniteCode) -> CodeClass {
    let related = |rel: fn(&Word, &Word) -> bool| x.words.iter().any(|u| x.words.iter().any(|v| u != v && rel(u, v)));
    let prefix = !related(Word::is_prefix_of);
    let suffix = !related(Word::is_suffix_of);
    CodeClass { prefix, suffix, bifix: prefix && suffix }
}

/// `Σ_{x ∈ X} |A|^{-|x|}` as an exact rational.
pub fn uniform_measure(x: &FiniteCode) -> BigRational {
    let k = BigInt::from(x.alphabet.len());
    x.words
        .iter()
        .fold(BigRational::zero(), |acc, w| acc + BigRational::new(BigInt::one(), num_traits::pow(k.clone(), w.len())))
}

/// A finite code is maximal exactly when its uniform measure is 1.
pub fn is_maximal(x: &FiniteCode) -> Result<bool, CodeError> {
    if let Some(a) = is_code(x).witness {
        return Err(CodeError::NotACode(a.word.to_string()));
    }
    Ok(uniform_measure(x).is_one())
}

/// The `n` with `a^n ∈ X`.
pub fn letter_order(x: &FiniteCode, a: u8) -> Option<u64> {
    x.words.iter().find(|w| !w.is_empty() && w.letters().iter().all(|&c| c == a)).map(|w| w.len() as u64)
}

fn a_minus_one(alphabet: &Alphabet) -> NcPoly {
    NcPoly::letters(alphabet.clone()).sub(&NcPoly::one(alphabet.clone())).expect("same alphabet")
}

/// `P(A - 1)S + 1`.
pub fn factorization_polynomial(p: &NcPoly, s: &NcPoly) -> Result<NcPoly, PolyError> {
    let alphabet = p.alphabet().clone();
    p.mul(&a_minus_one(&alphabet))?.mul(s)?.add(&NcPoly::one(alphabet))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationCheck {
    pub holds: bool,
    /// Consequences that should follow from the identity but fail on this input.
    pub theorem_violations: Vec<String>,
}

/// Checks `C = P(A - 1)S + 1`; when it holds with nonnegative `P`, `S`, also checks that both
/// are 0/1 polynomials and that `C` is a maximal code.
pub fn verify_factorization_ps(p: &NcPoly, s: &NcPoly, c: &FiniteCode) -> Result<FactorizationCheck, CodeError> {
    let holds = factorization_polynomial(p, s)? == c.characteristic();
    let mut theorem_violations = Vec::new();
    if holds && p.is_nonnegative() && s.is_nonnegative() {
        if !p.is_characteristic() || !s.is_characteristic() {
            theorem_violations.push("nonnegative factors are not 0/1 polynomials".to_string());
        }
        match is_maximal(c) {
            Ok(true) => {}
            Ok(false) => theorem_violations.push("factorized code is not maximal".to_string()),
            Err(e) => theorem_violations.push(e.to_string()),
        }
    }
    Ok(FactorizationCheck { holds, theorem_violations })
}

/// Maps a polynomial with 0/1 coefficients and no constant term to a code.
fn code_of_polynomial(poly: &NcPoly) -> Result<FiniteCode, CodeError> {
    match poly.to_language() {
        Ok(words) if !words.contains(&Word::empty()) => FiniteCode::new(poly.alphabet().clone(), words),
        Ok(_) => Err(CodeError::NotFactorizing { word: "1".into(), coeff: BigInt::one() }),
        Err((w, coeff)) => Err(CodeError::NotFactorizing { word: w.to_string(), coeff }),
    }
}

/// The code with characteristic polynomial `P(A - 1)S + 1`.
pub fn build_code_from_ps(
    alphabet: &Alphabet,
    p: &BTreeSet<Word>,
    s: &BTreeSet<Word>,
) -> Result<FiniteCode, CodeError> {
    let pp = NcPoly::characteristic(alphabet.clone(), p)?;
    let sp = NcPoly::characteristic(alphabet.clone(), s)?;
    code_of_polynomial(&factorization_polynomial(&pp, &sp)?)
}

/// A positive factorization `C - 1 = P(A - 1)S` with 0/1 polynomials `P`, `S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositiveFactorization {
    pub p: BTreeSet<Word>,
    pub s: BTreeSet<Word>,
}

/// Exhaustive search for a positive factorization of `c`.
///
/// Candidate sets `S` are drawn from the factors of words of `c` shorter than its longest
/// word, always containing the empty word, by increasing size and then shortlex order. Each
/// `S` determines `P` uniquely through the coefficients of `C - 1 = P(A - 1)S`, so the first
/// hit is canonical; sets with small `S` (prefix-like factorizations) come first.
pub fn search_positive_factorization(c: &FiniteCode, budget: u64) -> Result<Option<PositiveFactorization>, CodeError> {
    let max_len = c.max_len();
    if c.is_empty() {
        return Ok(None);
    }
    let pool: Vec<Word> = c
        .words
        .iter()
        .flat_map(Word::factors)
        .filter(|w| !w.is_empty() && w.len() < max_len)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let alphabet = c.alphabet.clone();
    let shorter: Vec<Word> = (0..max_len).flat_map(|l| alphabet.words_of_length(l)).collect();
    let target: BTreeMap<Word, BigInt> = c.characteristic().terms().map(|(w, k)| (w.clone(), k.clone())).collect();
    let mut spent: u64 = 0;
    for size in 0..=pool.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            spent += 1;
            if spent > budget {
                return Err(CodeError::BudgetExceeded(budget));
            }
            let mut s: BTreeSet<Word> = idx.iter().map(|&k| pool[k].clone()).collect();
            s.insert(Word::empty());
            if let Some(p) = solve_left_factor(&s, &target, &shorter, &alphabet) {
                if build_code_from_ps(&alphabet, &p, &s).as_ref() == Ok(c) {
                    return Ok(Some(PositiveFactorization { p, s }));
                }
            }
            if !next_combination(&mut idx, pool.len()) {
                break;
            }
        }
    }
    Ok(None)
}

/// Advances `idx` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for pos in (0..k).rev() {
        if idx[pos] < n - k + pos {
            idx[pos] += 1;
            for later in pos + 1..k {
                idx[later] = idx[later - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// With `R = (A - 1)S`, whose constant term is `-1`, the identity `C - 1 = P R` gives
/// `(P, w) = Σ_{uv = w, v ≠ 1} (P, u)(R, v) - (C - 1, w)`. Returns `P` when every coefficient
/// on words shorter than the longest codeword is 0 or 1.
fn solve_left_factor(
    s: &BTreeSet<Word>,
    target: &BTreeMap<Word, BigInt>,
    shorter: &[Word],
    alphabet: &Alphabet,
) -> Option<BTreeSet<Word>> {
    let sp = NcPoly::characteristic(alphabet.clone(), s).ok()?;
    let r = a_minus_one(alphabet).mul(&sp).ok()?;
    let mut p: BTreeSet<Word> = BTreeSet::new();
    for w in shorter {
        let mut coeff = -(target.get(w).cloned().unwrap_or_default() - BigInt::from(w.is_empty() as u8));
        for cut in 0..w.len() {
            let (u, v) = (w.slice(0, cut), w.slice(cut, w.len()));
            if p.contains(&u) {
                coeff += r.coeff(&v);
            }
        }
        if coeff.is_one() {
            p.insert(w.clone());
        } else if !coeff.is_zero() {
            return None;
        }
    }
    Some(p)
}
