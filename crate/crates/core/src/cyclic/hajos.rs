use std::collections::{BTreeMap, BTreeSet};

use super::krasner::{progression, sumset};
use super::{
    divisor_chains, is_factorization, krasner_pairs, residues, CyclicError, DivisorChain, FactorizationPair, PairKind,
};
use crate::polynomials::IntPoly;
use crate::NatSet;

/// `S ∘ T`: every set `{s_1 + t_1, ..., s_q + t_q}` for a choice of `t_i ∈ T`.
pub fn circ(s: &NatSet, t: &NatSet) -> BTreeSet<NatSet> {
    let mut family: BTreeSet<NatSet> = BTreeSet::new();
    family.insert(NatSet::new());
    for &x in s {
        family = family
            .iter()
            .flat_map(|partial| {
                t.iter().map(move |&y| {
                    let mut next = partial.clone();
                    next.insert(x + y);
                    next
                })
            })
            .collect();
    }
    family
}

/// `F ∘ T` for a family `F`: the union of `S ∘ T` over `S ∈ F`.
pub fn circ_family(family: &BTreeSet<NatSet>, t: &NatSet) -> BTreeSet<NatSet> {
    family.iter().flat_map(|s| circ(s, t)).collect()
}

/// The two alternating families of the Hajós construction along `chain`: the first starts
/// with a sum step (`·`), the second with a `∘` step, and each alternates afterwards.
pub fn hcg_families(chain: &DivisorChain) -> (BTreeSet<NatSet>, BTreeSet<NatSet>) {
    let k = chain.as_slice();
    let mut plus_first: BTreeSet<NatSet> = BTreeSet::from([NatSet::from([0])]);
    let mut circ_first = plus_first.clone();
    for j in 1..k.len() {
        let q = progression(k[j - 1], k[j] / k[j - 1]);
        let sum_step = |f: &BTreeSet<NatSet>| f.iter().map(|x| sumset(x, &q)).collect();
        if j % 2 == 1 {
            plus_first = sum_step(&plus_first);
            circ_first = circ_family(&circ_first, &q);
        } else {
            plus_first = circ_family(&plus_first, &q);
            circ_first = sum_step(&circ_first);
        }
    }
    (plus_first, circ_first)
}

/// Pairs `(R, T)` with `a^R` in the sum-first family and `a^T` in the `∘`-first family, in
/// both orientations.
pub fn hcg_pairs(chain: &DivisorChain) -> BTreeSet<(NatSet, NatSet)> {
    let (fr, ft) = hcg_families(chain);
    let mut out = BTreeSet::new();
    for r in &fr {
        for t in &ft {
            out.insert((r.clone(), t.clone()));
            out.insert((t.clone(), r.clone()));
        }
    }
    out
}

/// Hajós factorizations defined by `chain`, built by the recursion: the base case is
/// `({0..n-1}, {t})`, and each step maps a Hajós pair `(R, T)` of `Z_h` to
/// `(R + {0, h, .., (g-1)h}, T ∘ {0, h, .., (g-1)h})`; both orientations are kept.
pub fn hajos_by_chain(chain: &DivisorChain) -> BTreeSet<(NatSet, NatSet)> {
    let n = chain.n();
    let Some(prefix) = chain.prefix() else {
        return BTreeSet::from([(NatSet::from([0]), NatSet::from([0]))]);
    };
    let mut out = BTreeSet::new();
    if prefix.steps() == 0 {
        let full: NatSet = (0..n).collect();
        for t in 0..n {
            out.insert((full.clone(), NatSet::from([t])));
            out.insert((NatSet::from([t]), full.clone()));
        }
        return out;
    }
    let (h, g) = chain.last_step().expect("chain has a step");
    let step = progression(h, g);
    for (r, t) in hajos_by_chain(&prefix) {
        let r1 = sumset(&r, &step);
        for t1 in circ(&t, &step) {
            out.insert((r1.clone(), t1.clone()));
            out.insert((t1, r1.clone()));
        }
    }
    out
}

/// A Hajós factorization with every divisor chain that defines it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HajosEntry {
    pub pair: FactorizationPair,
    pub chains: Vec<DivisorChain>,
}

/// All Hajós factorizations of `Z_n`, sorted by `(R, T)`; `pair.chain` is the first
/// defining chain in lexicographic order.
pub fn hajos_enumerate(n: u64, bound: u64) -> Result<Vec<HajosEntry>, CyclicError> {
    if n == 0 {
        return Err(CyclicError::ZeroModulus);
    }
    if n > bound {
        return Err(CyclicError::BoundExceeded { n, bound });
    }
    let mut by_pair: BTreeMap<(NatSet, NatSet), Vec<DivisorChain>> = BTreeMap::new();
    for c in divisor_chains(n) {
        for pair in hajos_by_chain(&c) {
            by_pair.entry(pair).or_default().push(c.clone());
        }
    }
    Ok(by_pair
        .into_iter()
        .map(|((r, t), chains)| HajosEntry {
            pair: FactorizationPair::new(n, r, t, PairKind::Hajos).with_chain(&chains[0]),
            chains,
        })
        .collect())
}

/// The set `M` with `a^R = a^I (1 + a^M (a - 1))`, if the quotient
/// `(a^R - a^I) / (a^I (a - 1))` exists and has 0/1 coefficients.
pub fn solve_eq_ef(r: &NatSet, i: &NatSet) -> Option<NatSet> {
    if i.is_empty() || r.len() != i.len() {
        // Evaluating at a = 1 forces |R| = |I|.
        return None;
    }
    let num = IntPoly::of_set(r).sub(&IntPoly::of_set(i)).ok()?;
    let den = IntPoly::of_set(i).mul(&IntPoly::a_minus_one()).ok()?;
    num.exact_divide(&den).ok().flatten()?.to_set()
}

/// Krasner pairs `(I, J)` of order `n` such that `(I, T)` and `(R, J)` both factorize `Z_n`.
/// Sets are reduced mod `n` first.
pub fn krasner_companions(r: &NatSet, t: &NatSet, n: u64) -> Result<Vec<FactorizationPair>, CyclicError> {
    let (r, t) = (residues(r, n), residues(t, n));
    let mut out = Vec::new();
    for k in krasner_pairs(n)? {
        if is_factorization(&k.left, &t, n)? && is_factorization(&r, &k.right, n)? {
            out.push(k);
        }
    }
    Ok(out)
}

/// Hajós membership by the polynomial characterization: after reduction mod `n`, some
/// Krasner `(I, J)` admits sets `M`, `L` with `a^R = a^I(1 + a^M(a-1))` and
/// `a^T = a^J(1 + a^L(a-1))`.
pub fn is_hajos(r: &NatSet, t: &NatSet, n: u64) -> Result<bool, CyclicError> {
    if n == 0 {
        return Err(CyclicError::ZeroModulus);
    }
    let (r, t) = (residues(r, n), residues(t, n));
    Ok(krasner_pairs(n)?.iter().any(|k| solve_eq_ef(&r, &k.left).is_some() && solve_eq_ef(&t, &k.right).is_some()))
}
