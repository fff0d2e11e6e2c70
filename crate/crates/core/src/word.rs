//! Words over a finite alphabet of ASCII letters.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A finite word. Ordered length-first, then lexicographically (shortlex).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = u8>) -> Self {
        Word(letters.into_iter().collect())
    }

    /// `letter` repeated `count` times.
    pub fn power(letter: u8, count: usize) -> Self {
        Word(vec![letter; count])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    /// Number of occurrences of `letter`.
    pub fn count(&self, letter: u8) -> usize {
        self.0.iter().filter(|&&c| c == letter).count()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, letter: u8) {
        self.0.push(letter);
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.0.ends_with(&self.0)
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// All factors (contiguous subwords), including the empty word.
    pub fn factors(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        out.insert(Word::empty());
        for i in 0..self.len() {
            for j in i + 1..=self.len() {
                out.insert(self.slice(i, j));
            }
        }
        out
    }

    /// Splits `a^i w a^j` into `(i, w, j)` where `w` neither starts nor ends with `a`.
    pub fn strip_letter(&self, a: u8) -> (usize, Word, usize) {
        let lead = self.0.iter().take_while(|&&c| c == a).count();
        if lead == self.len() {
            return (lead, Word::empty(), 0);
        }
        let trail = self.0.iter().rev().take_while(|&&c| c == a).count();
        (lead, self.slice(lead, self.len() - trail), trail)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(std::str::from_utf8(&self.0).unwrap_or("?"))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("1")
        } else {
            write!(f, "{self}")
        }
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl std::str::FromStr for Word {
    type Err = String;

    /// Parses a word; `"1"` and `""` denote the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "1" {
            return Ok(Word::empty());
        }
        if let Some(c) = s.chars().find(|c| !c.is_ascii_alphabetic()) {
            return Err(format!("invalid letter {c:?} in word {s:?}"));
        }
        Ok(Word(s.as_bytes().to_vec()))
    }
}

/// A finite alphabet of ASCII letters, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Alphabet(BTreeSet<u8>);

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = u8>) -> Self {
        Alphabet(letters.into_iter().collect())
    }

    pub fn binary() -> Self {
        Alphabet::new(*b"ab")
    }

    pub fn contains(&self, letter: u8) -> bool {
        self.0.contains(&letter)
    }

    pub fn admits(&self, w: &Word) -> bool {
        w.letters().iter().all(|c| self.0.contains(c))
    }

    pub fn letters(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All words of length exactly `len`, in lexicographic order.
    pub fn words_of_length(&self, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|w| {
                    self.letters().map(move |c| {
                        let mut w = w.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(std::str::from_utf8(&self.0.iter().copied().collect::<Vec<_>>()).unwrap())
    }
}

impl From<Alphabet> for String {
    fn from(a: Alphabet) -> String {
        a.to_string()
    }
}

impl TryFrom<String> for Alphabet {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        if let Some(c) = s.chars().find(|c| !c.is_ascii_alphabetic()) {
            return Err(format!("invalid letter {c:?} in alphabet"));
        }
        Ok(Alphabet::new(s.bytes()))
    }
}

/// Shorthand used throughout the tests and examples.
pub fn w(s: &str) -> Word {
    s.parse().expect("valid word literal")
}
