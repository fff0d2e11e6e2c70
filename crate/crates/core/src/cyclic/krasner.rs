use super::{divisor_chains, CyclicError, DivisorChain, FactorizationPair, PairKind};
use crate::polynomials::{repunit, ExpPoly};
use crate::NatSet;

/// `{0, step, 2 step, ..., (count - 1) step}`, i.e. `(a^{count step} - 1) / (a^step - 1)`.
pub(crate) fn progression(step: u64, count: u64) -> NatSet {
    (0..count).map(|k| k * step).collect()
}

pub(crate) fn sumset(x: &NatSet, y: &NatSet) -> NatSet {
    x.iter().flat_map(|a| y.iter().map(move |b| a + b)).collect()
}

/// The Krasner pair of a divisor chain: the first coordinate collects the quotient factors
/// of even index, the second those of odd index.
pub fn krasner_from_chain(chain: &DivisorChain) -> Result<FactorizationPair, CyclicError> {
    let k = chain.as_slice();
    let mut even = ExpPoly::from_multiset([0]);
    let mut odd = ExpPoly::from_multiset([0]);
    for j in 1..k.len() {
        let factor = ExpPoly::of_set(&progression(k[j - 1], k[j] / k[j - 1]));
        if j % 2 == 0 {
            even = even.mul(&factor);
        } else {
            odd = odd.mul(&factor);
        }
    }
    let n = chain.n();
    let product = even.mul(&odd).to_int_poly()?;
    if product != repunit(n as usize) {
        return Err(CyclicError::ContractViolation(format!(
            "Krasner product for chain {k:?} is not (a^n - 1)/(a - 1)"
        )));
    }
    let (Some(i), Some(j)) = (even.to_set(), odd.to_set()) else {
        return Err(CyclicError::ContractViolation("Krasner factor is not a set".into()));
    };
    Ok(FactorizationPair::new(n, i, j, PairKind::Krasner).with_chain(chain))
}

/// `a^I a^J = (a^n - 1)/(a - 1)` exactly, with no modular reduction.
pub fn is_krasner(i: &NatSet, j: &NatSet, n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let prod = ExpPoly::of_set(i).mul(&ExpPoly::of_set(j));
    matches!(prod.to_int_poly(), Ok(p) if p == repunit(n as usize))
}

/// One Krasner pair per divisor chain of `n`, in chain order.
pub fn enumerate_krasner(n: u64) -> Result<Vec<FactorizationPair>, CyclicError> {
    if n == 0 {
        return Err(CyclicError::ZeroModulus);
    }
    let mut out: Vec<FactorizationPair> = Vec::new();
    for c in divisor_chains(n) {
        let p = krasner_from_chain(&c)?;
        if !out.iter().any(|q| q.left == p.left && q.right == p.right) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Every Krasner pair of order `n` in both orientations.
///
/// The alternating-product formula fixes which coordinate receives the even factors; the
/// pair relation `a^I a^J = (a^n-1)/(a-1)` is symmetric, so the swapped pairs are Krasner too.
pub fn krasner_pairs(n: u64) -> Result<Vec<FactorizationPair>, CyclicError> {
    let mut out = enumerate_krasner(n)?;
    let swapped: Vec<_> = out.iter().map(FactorizationPair::swapped).collect();
    for p in swapped {
        if !out.iter().any(|q| q.left == p.left && q.right == p.right) {
            out.push(p);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KrasnerSide {
    First,
    Second,
}

/// The last recursion step of a Krasner pair: exactly one coordinate is
/// `K + {0, h, ..., (g-1)h}` with `h = k_{s-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LastStep {
    pub h: u64,
    pub g: u64,
    pub side: KrasnerSide,
    /// The Krasner pair of order `h` left after removing the progression.
    pub reduced: (NatSet, NatSet),
    pub prefix: DivisorChain,
}

fn strip_progression(x: &NatSet, h: u64, g: u64) -> Option<NatSet> {
    let base: NatSet = x.iter().copied().filter(|&v| v < h).collect();
    (sumset(&base, &progression(h, g)) == *x).then_some(base)
}

pub fn last_step(i: &NatSet, j: &NatSet, chain: &DivisorChain) -> Result<Option<LastStep>, CyclicError> {
    let Some((h, g)) = chain.last_step() else {
        return Ok(None);
    };
    let prefix = chain.prefix().expect("chain has a step");
    let first = strip_progression(i, h, g).filter(|b| is_krasner(b, j, h));
    let second = strip_progression(j, h, g).filter(|b| is_krasner(i, b, h));
    match (first, second) {
        (Some(b), None) => Ok(Some(LastStep { h, g, side: KrasnerSide::First, reduced: (b, j.clone()), prefix })),
        (None, Some(b)) => Ok(Some(LastStep { h, g, side: KrasnerSide::Second, reduced: (i.clone(), b), prefix })),
        (None, None) => Err(CyclicError::ContractViolation(format!(
            "({i:?}, {j:?}) does not decompose along chain {:?}",
            chain.as_slice()
        ))),
        (Some(_), Some(_)) => Err(CyclicError::ContractViolation(format!(
            "({i:?}, {j:?}) decomposes on both sides along chain {:?}",
            chain.as_slice()
        ))),
    }
}

/// Finds the divisor chain whose Krasner pair is `(i, j)` in either orientation.
pub fn chain_of_krasner(i: &NatSet, j: &NatSet, n: u64) -> Option<DivisorChain> {
    divisor_chains(n).into_iter().find(|c| krasner_from_chain(c).map(|p| p.same_unordered(i, j)).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::is_factorization;
    use crate::nat_set as s;

    fn chain(v: &[u64]) -> DivisorChain {
        DivisorChain::new(v.to_vec()).unwrap()
    }

    #[test]
    fn chain_examples() {
        let p = krasner_from_chain(&chain(&[1, 2, 6])).unwrap();
        assert_eq!((p.left.clone(), p.right.clone()), (s(&[0, 2, 4]), s(&[0, 1])));
        assert!(p.same_unordered(&s(&[0, 1]), &s(&[0, 2, 4])));
        let p = krasner_from_chain(&chain(&[1, 5])).unwrap();
        assert_eq!((p.left, p.right), (s(&[0]), s(&[0, 1, 2, 3, 4])));
        let p = krasner_from_chain(&chain(&[1, 2, 6, 12])).unwrap();
        assert!(p.same_unordered(&s(&[0, 2, 4]), &s(&[0, 1, 6, 7])));
        let p = krasner_from_chain(&chain(&[1])).unwrap();
        assert_eq!((p.left, p.right), (s(&[0]), s(&[0])));
    }

    #[test]
    fn is_krasner_examples() {
        assert!(is_krasner(&s(&[0, 1]), &s(&[0, 2, 4]), 6));
        assert!(is_krasner(&s(&[0]), &s(&[0]), 1));
        assert!(!is_krasner(&s(&[1, 2]), &s(&[1, 3, 5]), 6));
        // a factorization mod n that needs reduction is not Krasner
        assert!(is_factorization(&s(&[0, 3]), &s(&[0, 1, 2]), 6).unwrap());
        assert!(is_krasner(&s(&[0, 3]), &s(&[0, 1, 2]), 6));
        assert!(is_factorization(&s(&[0, 5]), &s(&[0, 2, 4]), 6).unwrap());
        assert!(!is_krasner(&s(&[0, 5]), &s(&[0, 2, 4]), 6));
    }

    #[test]
    fn enumerate_examples() {
        let two = enumerate_krasner(2).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!((two[0].left.clone(), two[0].right.clone()), (s(&[0]), s(&[0, 1])));
        assert_eq!(enumerate_krasner(12).unwrap().len(), 8);
        assert!(enumerate_krasner(6).unwrap().iter().any(|p| p.same_unordered(&s(&[0, 1]), &s(&[0, 2, 4]))));
        assert_eq!(krasner_pairs(12).unwrap().len(), 16);
        assert_eq!(krasner_pairs(1).unwrap().len(), 1);
    }

    #[test]
    fn exactly_one_side_decomposes() {
        for n in 2..=16 {
            for c in divisor_chains(n) {
                let p = krasner_from_chain(&c).unwrap();
                for (i, j) in [(&p.left, &p.right), (&p.right, &p.left)] {
                    let step = last_step(i, j, &c).unwrap().unwrap();
                    let expected = if c.steps() % 2 == 0 { KrasnerSide::First } else { KrasnerSide::Second };
                    let expected = if std::ptr::eq(i, &p.left) {
                        expected
                    } else if expected == KrasnerSide::First {
                        KrasnerSide::Second
                    } else {
                        KrasnerSide::First
                    };
                    assert_eq!(step.side, expected, "chain {:?}", c.as_slice());
                    let (bi, bj) = &step.reduced;
                    let sub = krasner_from_chain(&step.prefix).unwrap();
                    assert!(sub.same_unordered(bi, bj));
                }
                assert_eq!(chain_of_krasner(&p.right, &p.left, n), Some(c));
            }
        }
    }
}
