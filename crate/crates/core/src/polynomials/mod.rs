//! Exact polynomial arithmetic: noncommutative integer polynomials over an alphabet and
//! polynomials in a single letter, including the exponent-polynomial view `a^H` of a
//! multiset `H` of naturals.

mod noncommutative;
mod univariate;

pub use noncommutative::NcPoly;
pub use univariate::{repunit, ExpPoly, IntPoly};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomials over distinct alphabets {left:?} and {right:?}")]
    AlphabetMismatch { left: String, right: String },
    #[error("letter {0:?} is not in the alphabet")]
    LetterNotInAlphabet(char),
    #[error("word {0:?} uses letters outside the alphabet")]
    ForeignWord(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("coefficient overflow")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}
