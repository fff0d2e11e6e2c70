//! Exact combinatorics of finite maximal codes.
//!
//! The crate covers factorizations of cyclic groups (Krasner and Hajós pairs), good
//! arrangements of bayonet sets, positively factorizing codes `C - 1 = P(A - 1)S`, and the
//! left-set / right-set analysis of a finite maximal code together with the constructions
//! linking good arrangements to dominated injections and the triangle inequalities.
//!
//! Everything is computed with exact integers; there is no floating point.

pub mod analysis;
pub mod arrangements;
pub mod codes;
pub mod corpus;
pub mod cyclic;
pub mod matching;
pub mod polynomials;
pub mod word;

pub use word::{Alphabet, Word};

/// Finite set of naturals; serializes as a sorted ascending list.
pub type NatSet = std::collections::BTreeSet<u64>;

/// Builds a [`NatSet`] from a slice.
pub fn nat_set(xs: &[u64]) -> NatSet {
    xs.iter().copied().collect()
}
