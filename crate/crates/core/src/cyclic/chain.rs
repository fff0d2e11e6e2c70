use serde::{Deserialize, Serialize};

use super::CyclicError;

/// A chain `1 = k_0 | k_1 | ... | k_s = n` of distinct divisors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct DivisorChain(Vec<u64>);

impl DivisorChain {
    pub fn new(chain: Vec<u64>) -> Result<Self, CyclicError> {
        if chain.first() != Some(&1) {
            return Err(CyclicError::InvalidChain(chain, "must start at 1"));
        }
        if chain.len() == 1 {
            // The chain of Z_1 is the single divisor 1.
            return Ok(DivisorChain(chain));
        }
        for w in chain.windows(2) {
            if w[1] <= w[0] || w[1] % w[0] != 0 {
                return Err(CyclicError::InvalidChain(chain, "each step must be a proper multiple"));
            }
        }
        Ok(DivisorChain(chain))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn n(&self) -> u64 {
        *self.0.last().unwrap()
    }

    /// The length `s` of the chain (number of steps).
    pub fn steps(&self) -> usize {
        self.0.len() - 1
    }

    /// The chain with its last divisor removed, i.e. the chain of `Z_h` with `h = k_{s-1}`.
    pub fn prefix(&self) -> Option<DivisorChain> {
        (self.0.len() > 1).then(|| DivisorChain(self.0[..self.0.len() - 1].to_vec()))
    }

    /// `h = k_{s-1}` and `g = n / h` for the last step.
    pub fn last_step(&self) -> Option<(u64, u64)> {
        let s = self.steps();
        (s >= 1).then(|| (self.0[s - 1], self.0[s] / self.0[s - 1]))
    }

    pub fn extend(&self, next: u64) -> Result<DivisorChain, CyclicError> {
        let mut v = self.0.clone();
        v.push(next);
        DivisorChain::new(v)
    }
}

impl TryFrom<Vec<u64>> for DivisorChain {
    type Error = CyclicError;

    fn try_from(v: Vec<u64>) -> Result<Self, Self::Error> {
        DivisorChain::new(v)
    }
}

impl From<DivisorChain> for Vec<u64> {
    fn from(c: DivisorChain) -> Vec<u64> {
        c.0
    }
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// All divisor chains of `n`, in lexicographic order.
pub fn divisor_chains(n: u64) -> Vec<DivisorChain> {
    fn go(cur: &mut Vec<u64>, n: u64, out: &mut Vec<DivisorChain>) {
        let last = *cur.last().unwrap();
        if last == n {
            out.push(DivisorChain(cur.clone()));
            return;
        }
        for d in (last + 1..=n).filter(|d| d % last == 0 && n % d == 0) {
            cur.push(d);
            go(cur, n, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n >= 1 {
        go(&mut vec![1], n, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(DivisorChain::new(vec![1, 2, 6]).is_ok());
        assert!(DivisorChain::new(vec![1]).is_ok());
        assert!(DivisorChain::new(vec![2, 6]).is_err());
        assert!(DivisorChain::new(vec![1, 4, 6]).is_err());
        assert!(DivisorChain::new(vec![1, 2, 2]).is_err());
    }

    #[test]
    fn chains_of_twelve() {
        let c = divisor_chains(12);
        assert_eq!(c.len(), 8);
        assert_eq!(c[0].as_slice(), &[1, 2, 4, 12]);
        assert_eq!(divisor_chains(1).len(), 1);
        assert_eq!(divisor_chains(7).len(), 1);
    }
}
