//! Factorizations of the cyclic group `Z_n`: plain, Krasner and Hajós pairs.
//!
//! A pair `(T, R)` of finite sets of naturals factorizes `Z_n` when every residue
//! `z < n` is `t + r (mod n)` for exactly one `(t, r)`.

mod chain;
mod hajos;
mod krasner;
mod lemma;

pub use chain::{divisor_chains, divisors, DivisorChain};
pub use hajos::{
    circ, circ_family, hajos_by_chain, hajos_enumerate, hcg_families, hcg_pairs, is_hajos, krasner_companions,
    solve_eq_ef, HajosEntry,
};
pub use krasner::{
    chain_of_krasner, enumerate_krasner, is_krasner, krasner_from_chain, krasner_pairs, last_step, KrasnerSide,
    LastStep,
};
pub use lemma::{lemma_l72_decompose, L72Decomposition};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::NatSet;

/// Default bound on `n` for exhaustive enumerations.
pub const DEFAULT_N_BOUND: u64 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CyclicError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("n = {n} exceeds the enumeration bound {bound}")]
    BoundExceeded { n: u64, bound: u64 },
    #[error("invalid divisor chain {0:?}: {1}")]
    InvalidChain(Vec<u64>, &'static str),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error(transparent)]
    Poly(#[from] crate::polynomials::PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    Factorization,
    Krasner,
    Hajos,
}

/// A pair of sets together with the modulus it is meant to factorize.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FactorizationPair {
    pub n: u64,
    pub left: NatSet,
    pub right: NatSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<u64>>,
    pub kind: PairKind,
}

impl FactorizationPair {
    pub fn new(n: u64, left: NatSet, right: NatSet, kind: PairKind) -> Self {
        FactorizationPair { n, left, right, chain: None, kind }
    }

    pub fn with_chain(mut self, chain: &DivisorChain) -> Self {
        self.chain = Some(chain.as_slice().to_vec());
        self
    }

    pub fn swapped(&self) -> Self {
        FactorizationPair { left: self.right.clone(), right: self.left.clone(), ..self.clone() }
    }

    /// Equality of the underlying sets ignoring orientation.
    pub fn same_unordered(&self, left: &NatSet, right: &NatSet) -> bool {
        (&self.left == left && &self.right == right) || (&self.left == right && &self.right == left)
    }

    pub fn verify(&self) -> bool {
        is_factorization(&self.left, &self.right, self.n).unwrap_or(false)
    }
}

/// Whether every residue mod `n` is hit exactly once by `t + r`.
pub fn is_factorization(t: &NatSet, r: &NatSet, n: u64) -> Result<bool, CyclicError> {
    if n == 0 {
        return Err(CyclicError::ZeroModulus);
    }
    if (t.len() as u64).checked_mul(r.len() as u64) != Some(n) {
        return Ok(false);
    }
    let mut hit = vec![false; n as usize];
    for &x in t {
        for &y in r {
            let z = ((x % n + y % n) % n) as usize;
            if hit[z] {
                return Ok(false);
            }
            hit[z] = true;
        }
    }
    Ok(true)
}

/// `X_(n)`: residues of the elements of `X` in `{0, ..., n-1}`.
pub fn residues(x: &NatSet, n: u64) -> NatSet {
    x.iter().map(|v| v % n).collect()
}

/// Number of prime factors of `n` counted with multiplicity.
pub fn omega(n: u64) -> u32 {
    let mut m = n;
    let mut count = 0;
    let mut p = 2;
    while p * p <= m {
        while m % p == 0 {
            m /= p;
            count += 1;
        }
        p += 1;
    }
    if m > 1 {
        count += 1;
    }
    count
}

pub fn is_prime(n: u64) -> bool {
    omega(n) == 1
}

fn mask_to_set(mask: u64) -> NatSet {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// All factorizations `(T, R)` with `T, R ⊆ {0, ..., n-1}`, ordered by `(T, R)`.
pub fn enumerate_factorizations(n: u64, bound: u64) -> Result<Vec<FactorizationPair>, CyclicError> {
    if n == 0 {
        return Err(CyclicError::ZeroModulus);
    }
    if n > bound || n > 24 {
        return Err(CyclicError::BoundExceeded { n, bound: bound.min(24) });
    }
    let full: u64 = (1u64 << n) - 1;
    let rot = |mask: u64, by: u64| -> u64 {
        if by == 0 {
            mask
        } else {
            ((mask << by) | (mask >> (n - by))) & full
        }
    };
    let mut out = Vec::new();
    for t_mask in 1..=full {
        let size = t_mask.count_ones() as u64;
        if n % size != 0 {
            continue;
        }
        // Exact cover of Z_n by translates r + T: the smallest uncovered residue z forces
        // r = z - t for some t in T, so each R is produced once.
        let t_elems: Vec<u64> = (0..n).filter(|i| t_mask >> i & 1 == 1).collect();
        let mut stack: Vec<(u64, u64)> = vec![(0, 0)];
        let mut found: Vec<u64> = Vec::new();
        while let Some((covered, r_mask)) = stack.pop() {
            if covered == full {
                found.push(r_mask);
                continue;
            }
            let z = (!covered & full).trailing_zeros() as u64;
            for &t in &t_elems {
                let r = (z + n - t) % n;
                let shifted = rot(t_mask, r);
                if shifted & covered == 0 && r_mask >> r & 1 == 0 {
                    stack.push((covered | shifted, r_mask | 1 << r));
                }
            }
        }
        found.sort_by_key(|&m| mask_to_set(m));
        found.dedup();
        let t_set = mask_to_set(t_mask);
        for r_mask in found {
            out.push(FactorizationPair::new(n, t_set.clone(), mask_to_set(r_mask), PairKind::Factorization));
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat_set as s;

    #[test]
    fn factorization_examples() {
        assert!(is_factorization(&s(&[0, 1]), &s(&[0, 2, 4]), 6).unwrap());
        assert!(is_factorization(&s(&[0]), &s(&[0]), 1).unwrap());
        assert!(!is_factorization(&s(&[0, 1]), &s(&[0, 1]), 4).unwrap());
        assert_eq!(is_factorization(&s(&[0]), &s(&[0]), 0), Err(CyclicError::ZeroModulus));
    }

    #[test]
    fn residue_examples() {
        assert_eq!(residues(&s(&[7, 8]), 6), s(&[1, 2]));
        assert_eq!(residues(&s(&[]), 5), s(&[]));
        assert_eq!(residues(&s(&[0, 3]), 2), s(&[0, 1]));
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(12), 3);
        assert_eq!(omega(1), 0);
        assert_eq!(omega(7), 1);
        assert_eq!(omega(16), 4);
    }

    #[test]
    fn enumeration_small() {
        let one = enumerate_factorizations(1, DEFAULT_N_BOUND).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!((one[0].left.clone(), one[0].right.clone()), (s(&[0]), s(&[0])));
        let two = enumerate_factorizations(2, DEFAULT_N_BOUND).unwrap();
        assert!(two.iter().any(|p| p.left == s(&[0, 1]) && p.right == s(&[0])));
        assert!(two.iter().any(|p| p.left == s(&[0]) && p.right == s(&[0, 1])));
        let six = enumerate_factorizations(6, DEFAULT_N_BOUND).unwrap();
        assert!(six.iter().any(|p| p.left == s(&[1, 2]) && p.right == s(&[1, 3, 5])));
        assert_eq!(enumerate_factorizations(17, DEFAULT_N_BOUND), Err(CyclicError::BoundExceeded { n: 17, bound: 16 }));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 1..=6u64 {
            let mut brute = Vec::new();
            for t in 1u64..1 << n {
                for r in 1u64..1 << n {
                    let (ts, rs) = (mask_to_set(t), mask_to_set(r));
                    if is_factorization(&ts, &rs, n).unwrap() {
                        brute.push((ts, rs));
                    }
                }
            }
            brute.sort();
            let got: Vec<_> = enumerate_factorizations(n, 16).unwrap().into_iter().map(|p| (p.left, p.right)).collect();
            assert_eq!(got, brute, "n = {n}");
        }
    }
}
