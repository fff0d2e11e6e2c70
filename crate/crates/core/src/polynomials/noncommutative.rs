use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::PolyError;
use crate::word::{Alphabet, Word};

/// Integer-coefficient polynomial in noncommuting letters.
///
/// Zero coefficients are never stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcPoly {
    alphabet: Alphabet,
    terms: BTreeMap<Word, BigInt>,
}

impl NcPoly {
    pub fn zero(alphabet: Alphabet) -> Self {
        NcPoly { alphabet, terms: BTreeMap::new() }
    }

    pub fn one(alphabet: Alphabet) -> Self {
        Self::monomial(alphabet, Word::empty(), BigInt::one())
    }

    pub fn monomial(alphabet: Alphabet, word: Word, coeff: BigInt) -> Self {
        let mut p = Self::zero(alphabet);
        p.add_term(word, coeff);
        p
    }

    /// Builds a polynomial from `(word, coefficient)` pairs, merging repeats.
    pub fn from_terms<I, C>(alphabet: Alphabet, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Word, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(alphabet);
        for (w, c) in terms {
            if !p.alphabet.admits(&w) {
                return Err(PolyError::ForeignWord(w.to_string()));
            }
            p.add_term(w, c.into());
        }
        Ok(p)
    }

    /// The characteristic polynomial of a finite language.
    pub fn characteristic<'a>(
        alphabet: Alphabet,
        words: impl IntoIterator<Item = &'a Word>,
    ) -> Result<Self, PolyError> {
        Self::from_terms(alphabet, words.into_iter().map(|w| (w.clone(), 1)))
    }

    /// The sum of the letters of the alphabet.
    pub fn letters(alphabet: Alphabet) -> Self {
        let words: Vec<Word> = alphabet.letters().map(|c| Word::from_letters([c])).collect();
        Self::characteristic(alphabet, &words).expect("letters belong to their alphabet")
    }

    fn add_term(&mut self, word: Word, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(word);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn coeff(&self, w: &Word) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn support(&self) -> BTreeSet<Word> {
        self.terms.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Coefficients all in {0, 1}.
    pub fn is_characteristic(&self) -> bool {
        self.terms.values().all(|c| c.is_one())
    }

    /// The support, when every coefficient is 1. Otherwise the shortlex-first word with a
    /// negative coefficient, or failing that the first with a coefficient above 1.
    pub fn to_language(&self) -> Result<BTreeSet<Word>, (Word, BigInt)> {
        let negative = self.terms.iter().find(|(_, c)| c.is_negative());
        match negative.or_else(|| self.terms.iter().find(|(_, c)| !c.is_one())) {
            Some((w, c)) => Err((w.clone(), c.clone())),
            None => Ok(self.support()),
        }
    }

    fn check_alphabet(&self, other: &NcPoly) -> Result<(), PolyError> {
        if self.alphabet != other.alphabet {
            return Err(PolyError::AlphabetMismatch {
                left: self.alphabet.to_string(),
                right: other.alphabet.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &NcPoly) -> Result<NcPoly, PolyError> {
        self.check_alphabet(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NcPoly) -> Result<NcPoly, PolyError> {
        self.check_alphabet(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &NcPoly) -> Result<NcPoly, PolyError> {
        self.check_alphabet(other)?;
        let mut out = Self::zero(self.alphabet.clone());
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                out.add_term(u.concat(v), cu * cv);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> NcPoly {
        NcPoly {
            alphabet: self.alphabet.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect(),
        }
    }

    /// Keeps the terms whose words contain exactly `g` occurrences of `letter`.
    pub fn restrict_degree(&self, letter: u8, g: usize) -> Result<NcPoly, PolyError> {
        if !self.alphabet.contains(letter) {
            return Err(PolyError::LetterNotInAlphabet(letter as char));
        }
        Ok(NcPoly {
            alphabet: self.alphabet.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.count(letter) == g)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        })
    }

    /// Parses the rendering produced by `Display`.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<NcPoly, PolyError> {
        let normalized = text.replace('\u{2212}', "-");
        let mut p = Self::zero(alphabet);
        let s = normalized.trim();
        if s == "0" {
            return Ok(p);
        }
        let mut sign = BigInt::one();
        let mut rest = s;
        let mut first = true;
        while !rest.is_empty() {
            let (op, tail) = match rest.chars().next() {
                Some('+') => (Some(1), &rest[1..]),
                Some('-') => (Some(-1), &rest[1..]),
                _ if first => (None, rest),
                _ => return Err(PolyError::Parse(format!("expected sign near {rest:?}"))),
            };
            if let Some(op) = op {
                sign = BigInt::from(op);
            }
            first = false;
            let tail = tail.trim_start();
            let end = tail.find(['+', '-']).unwrap_or(tail.len());
            let term = tail[..end].trim();
            rest = tail[end..].trim_start();
            if term.is_empty() {
                return Err(PolyError::Parse("empty term".into()));
            }
            let (coeff, word) = match term.split_once(['\u{b7}', '*']) {
                Some((k, w)) => (parse_int(k.trim())?, w.trim()),
                None if term.bytes().all(|c| c.is_ascii_digit()) && term != "1" => (parse_int(term)?, "1"),
                None => (BigInt::one(), term),
            };
            let word: Word = word.parse().map_err(PolyError::Parse)?;
            if !p.alphabet.admits(&word) {
                return Err(PolyError::ForeignWord(word.to_string()));
            }
            p.add_term(word, &sign * coeff);
            sign = BigInt::one();
        }
        Ok(p)
    }
}

fn parse_int(s: &str) -> Result<BigInt, PolyError> {
    s.parse().map_err(|_| PolyError::Parse(format!("bad coefficient {s:?}")))
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (k, c.is_negative()) {
                (0, true) => f.write_str("\u{2212} ")?,
                (0, false) => {}
                (_, true) => f.write_str(" \u{2212} ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag.is_one() {
                write!(f, "{w:?}")?;
            } else {
                write!(f, "{mag}\u{b7}{w:?}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    fn ab() -> Alphabet {
        Alphabet::binary()
    }

    fn p(s: &str) -> NcPoly {
        NcPoly::parse(ab(), s).unwrap()
    }

    #[test]
    fn product_example() {
        let prod = p("1 + a").mul(&p("a + b - 1")).unwrap();
        assert_eq!(prod, p("b - 1 + aa + ab"));
        assert_eq!(prod.to_string(), "\u{2212} 1 + b + aa + ab");
    }

    #[test]
    fn identity_and_krasner_product() {
        let q = p("2·ab - ba + 3");
        assert_eq!(q.mul(&NcPoly::one(ab())).unwrap(), q);
        let prod = p("1 + a").mul(&p("1 + aa + aaaa")).unwrap();
        assert_eq!(prod, p("1 + a + aa + aaa + aaaa + aaaaa"));
    }

    #[test]
    fn alphabet_mismatch() {
        let other = NcPoly::one(Alphabet::new(*b"abc"));
        assert!(matches!(p("a").mul(&other), Err(PolyError::AlphabetMismatch { .. })));
    }

    #[test]
    fn restriction() {
        let q = p("b + aa + ab");
        assert_eq!(q.restrict_degree(b'b', 0).unwrap(), p("aa"));
        assert_eq!(q.restrict_degree(b'b', 1).unwrap(), p("b + ab"));
        assert!(NcPoly::zero(ab()).restrict_degree(b'b', 3).unwrap().is_zero());
        assert!(matches!(q.restrict_degree(b'c', 0), Err(PolyError::LetterNotInAlphabet('c'))));
    }

    #[test]
    fn render_parse() {
        let q = NcPoly::from_terms(ab(), [(w(""), -3), (w("ab"), 1), (w("b"), -1), (w("aab"), 2)]).unwrap();
        let text = q.to_string();
        assert_eq!(text, "\u{2212} 3\u{b7}1 \u{2212} b + ab + 2\u{b7}aab");
        assert_eq!(NcPoly::parse(ab(), &text).unwrap(), q);
        assert_eq!(NcPoly::zero(ab()).to_string(), "0");
    }
}
