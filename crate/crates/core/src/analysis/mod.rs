//! Left and right sets of a finite maximal code, the sets `X_w`, and the constructions tying
//! good arrangements of `X_w` to dominated injections and the triangle inequalities.

mod construct;
mod recognizer;
mod report;
mod system;
mod xw;

pub use construct::{
    associated_pair, dominated_injection_exists, good_arrangement_from_system, injection_from_good_arrangement,
    replay_triangle_chain, triangle_conjecture_check, triangle_property, zhmain_arrangement, ArrangementSource,
    Injection, SystemArrangement, TriangleVerdict, ZhArrangement, DEFAULT_MATCHING_BUDGET,
};
pub use recognizer::{is_right_completable, is_strongly_right_completable, StarRecognizer};
pub use report::{
    analyze, corollary_scan, separators_of, AnalysisReport, ArrangementReport, ScanMode, ScanReport, SeparatorReport,
    SCHEMA_VERSION,
};
pub use system::{enumerate_system, left_set_of, right_set_of, Side, SidedSet, SystemOfFactorizations};
pub use xw::{compute_xw, compute_xw_with_bound, BayonetTable};

use thiserror::Error;

use crate::arrangements::ArrangementError;
use crate::codes::{is_maximal, letter_order, CodeError, FiniteCode};
use crate::cyclic::CyclicError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("letter {0:?} has no order: no power of it is a codeword")]
    NoOrder(char),
    #[error("the input is not a maximal code")]
    NotMaximal,
    #[error("{0:?} is not a separator: it must be nonempty and begin and end with a letter other than {1:?}")]
    BadSeparator(String, char),
    #[error("X_w did not stabilize up to exponent bound {0}")]
    BoundTooSmall(u64),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    /// A construction guaranteed by the theory failed; `bundle` is a JSON reproduction case.
    #[error("theorem violation: {claim}; reproduction: {bundle}")]
    TheoremViolation { claim: String, bundle: String },
    #[error("search budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

/// A code together with a distinguished letter `a`, its order `n`, and the recognizer of `X*`.
#[derive(Clone, Debug)]
pub struct CodeContext {
    pub code: FiniteCode,
    pub letter: u8,
    pub n: u64,
    /// `|X|`: the length of the longest word.
    pub max_len: u64,
    pub recognizer: StarRecognizer,
}

impl CodeContext {
    /// Requires only that `a` has an order; maximality is checked by the analyses needing it.
    pub fn new(code: &FiniteCode, letter: u8) -> Result<Self, AnalysisError> {
        let n = letter_order(code, letter).ok_or(AnalysisError::NoOrder(letter as char))?;
        Ok(CodeContext {
            code: code.clone(),
            letter,
            n,
            max_len: code.max_len() as u64,
            recognizer: StarRecognizer::new(code),
        })
    }

    /// As [`CodeContext::new`], additionally requiring `X` to be a maximal code.
    pub fn maximal(code: &FiniteCode, letter: u8) -> Result<Self, AnalysisError> {
        match is_maximal(code) {
            Ok(true) => Self::new(code, letter),
            Ok(false) | Err(CodeError::NotACode(_)) => Err(AnalysisError::NotMaximal),
            Err(e) => Err(e.into()),
        }
    }

    /// The offset `2n|X|` in the definitions of left and right sets.
    pub fn offset(&self) -> u64 {
        2 * self.n * self.max_len
    }

    pub(crate) fn bundle(&self, extra: serde_json::Value) -> String {
        serde_json::json!({
            "code": self.code,
            "letter": (self.letter as char).to_string(),
            "details": extra,
        })
        .to_string()
    }
}
