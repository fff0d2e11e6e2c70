use serde::Serialize;

use super::krasner::sumset;
use super::{is_krasner, residues, CyclicError};
use crate::polynomials::{ExpPoly, IntPoly};
use crate::NatSet;

/// Splitting of `M` in `a^R = a^I(1 + a^M(a-1))` into the part explaining the reduced set
/// `R' = R mod n` and the part produced by the lifts `r + λ n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct L72Decomposition {
    pub m_reduced: NatSet,
    pub m_lift: NatSet,
    /// Multiset `H`, sorted.
    pub h: Vec<u64>,
    pub r_reduced: NatSet,
    /// Whether `I + max M' + 1 ⊆ {0..n-1}` was checked; skipped when `M'` is empty.
    pub containment_checked: bool,
}

fn ef_rhs(i: &NatSet, m: &IntPoly) -> Result<IntPoly, CyclicError> {
    Ok(IntPoly::of_set(i).mul(&IntPoly::one().add(&m.mul(&IntPoly::a_minus_one())?)?)?)
}

fn violation(msg: impl Into<String>) -> CyclicError {
    CyclicError::ContractViolation(msg.into())
}

/// Decomposes `M = M' ⊔ M''` with `a^{R'} = a^I(1 + a^{M'}(a-1))`, `a^{M''} = a^J a^H` and
/// `a^R = a^{R'} + a^I (a-1) a^{M''}`, re-verifying every identity before returning.
pub fn lemma_l72_decompose(
    i: &NatSet,
    j: &NatSet,
    r: &NatSet,
    m: &NatSet,
    n: u64,
) -> Result<L72Decomposition, CyclicError> {
    if n == 0 {
        return Err(CyclicError::ZeroModulus);
    }
    if !is_krasner(i, j, n) {
        return Err(violation(format!("({i:?}, {j:?}) is not a Krasner pair of order {n}")));
    }
    let a_r = IntPoly::of_set(r);
    if ef_rhs(i, &IntPoly::of_set(m))? != a_r {
        return Err(violation("a^R != a^I(1 + a^M(a-1))"));
    }
    let r_reduced = residues(r, n);
    if r_reduced.len() != r.len() {
        return Err(violation("elements of R are not distinct mod n"));
    }

    // H = ⊎_q (r_q + {0, n, ..., (λ_q - 1) n}) where r = r_q + λ_q n.
    let mut h = Vec::new();
    for &x in r {
        let (base, lambda) = (x % n, x / n);
        h.extend((0..lambda).map(|k| base + k * n));
    }
    let a_h = ExpPoly::from_multiset(h.iter().copied());
    let m_lift = ExpPoly::of_set(j).mul(&a_h).to_set().ok_or_else(|| violation("a^J a^H has a coefficient above 1"))?;
    if !m_lift.is_subset(m) {
        return Err(violation("M'' is not contained in M"));
    }
    let m_reduced: NatSet = m.difference(&m_lift).copied().collect();

    let a_r_reduced = IntPoly::of_set(&r_reduced);
    if ef_rhs(i, &IntPoly::of_set(&m_reduced))? != a_r_reduced {
        return Err(violation("a^{R'} != a^I(1 + a^{M'}(a-1))"));
    }
    let lifted = IntPoly::of_set(i).mul(&IntPoly::a_minus_one())?.mul(&IntPoly::of_set(&m_lift))?;
    if a_r_reduced.add(&lifted)? != a_r {
        return Err(violation("a^R != a^{R'} + a^I(a-1)a^{M''}"));
    }
    let containment_checked = match m_reduced.iter().next_back() {
        Some(&top) => {
            let shifted = sumset(i, &NatSet::from([top + 1]));
            if shifted.iter().any(|&x| x >= n) {
                return Err(violation("I + max M' + 1 leaves {0..n-1}"));
            }
            true
        }
        None => false,
    };
    Ok(L72Decomposition { m_reduced, m_lift, h, r_reduced, containment_checked })
}
