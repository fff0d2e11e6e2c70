use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::PolyError;

/// Dense integer polynomial in a single letter `a`.
///
/// Coefficients are `i64` with checked arithmetic; overflow is reported, never wrapped.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![1] }
    }

    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// `c * a^e`
    pub fn monomial(e: usize, c: i64) -> Self {
        let mut v = vec![0; e + 1];
        v[e] = c;
        Self::from_coeffs(v)
    }

    /// `a^n - 1`
    pub fn power_minus_one(n: usize) -> Self {
        let mut v = vec![0; n + 1];
        v[n] += 1;
        v[0] -= 1;
        Self::from_coeffs(v)
    }

    /// `a - 1`
    pub fn a_minus_one() -> Self {
        IntPoly { coeffs: vec![-1, 1] }
    }

    /// `a^X` for a set of exponents.
    pub fn of_set(set: &BTreeSet<u64>) -> Self {
        let mut v = vec![0; set.iter().next_back().map_or(0, |&m| m as usize + 1)];
        for &e in set {
            v[e as usize] += 1;
        }
        Self::from_coeffs(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, e: usize) -> i64 {
        self.coeffs.get(e).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn add(&self, other: &IntPoly) -> Result<IntPoly, PolyError> {
        let len = self.coeffs.len().max(other.coeffs.len());
        let v = (0..len)
            .map(|i| self.coeff(i).checked_add(other.coeff(i)).ok_or(PolyError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Self::from_coeffs(v))
    }

    pub fn sub(&self, other: &IntPoly) -> Result<IntPoly, PolyError> {
        let len = self.coeffs.len().max(other.coeffs.len());
        let v = (0..len)
            .map(|i| self.coeff(i).checked_sub(other.coeff(i)).ok_or(PolyError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Self::from_coeffs(v))
    }

    pub fn mul(&self, other: &IntPoly) -> Result<IntPoly, PolyError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut v = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.coeffs.iter().enumerate() {
                let t = x.checked_mul(y).ok_or(PolyError::Overflow)?;
                v[i + j] = v[i + j].checked_add(t).ok_or(PolyError::Overflow)?;
            }
        }
        Ok(Self::from_coeffs(v))
    }

    /// Returns `Q` with `self = divisor * Q` over the integers, or `None` when no such `Q` exists.
    pub fn exact_divide(&self, divisor: &IntPoly) -> Result<Option<IntPoly>, PolyError> {
        let Some(dd) = divisor.degree() else {
            return Err(PolyError::DivisionByZero);
        };
        let Some(nd) = self.degree() else {
            return Ok(Some(Self::zero()));
        };
        if nd < dd {
            return Ok(None);
        }
        let lead = divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0i64; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd];
            if c == 0 {
                continue;
            }
            if c % lead != 0 {
                return Ok(None);
            }
            let q = c / lead;
            quot[k] = q;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                let t = q.checked_mul(d).ok_or(PolyError::Overflow)?;
                rem[k + i] = rem[k + i].checked_sub(t).ok_or(PolyError::Overflow)?;
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return Ok(None);
        }
        Ok(Some(Self::from_coeffs(quot)))
    }

    /// The exponent multiset when all coefficients are nonnegative.
    pub fn to_exp_poly(&self) -> Option<ExpPoly> {
        let mut m = BTreeMap::new();
        for (e, &c) in self.coeffs.iter().enumerate() {
            if c < 0 {
                return None;
            }
            if c > 0 {
                m.insert(e as u64, c as u64);
            }
        }
        Some(ExpPoly { coeffs: m })
    }

    /// The exponent set when all coefficients are 0 or 1.
    pub fn to_set(&self) -> Option<BTreeSet<u64>> {
        self.to_exp_poly().and_then(|e| e.to_set())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                f.write_str("-")?;
            }
            first = false;
            let m = c.unsigned_abs();
            match (e, m) {
                (0, _) => write!(f, "{m}")?,
                (_, 1) => write!(f, "a^{e}")?,
                _ => write!(f, "{m}a^{e}")?,
            }
        }
        Ok(())
    }
}

/// Nonnegative-coefficient polynomial in one letter; equivalently a finite multiset of naturals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExpPoly {
    coeffs: BTreeMap<u64, u64>,
}

impl ExpPoly {
    /// `a^H` for a multiset `H` given as a list with repetitions.
    pub fn from_multiset(items: impl IntoIterator<Item = u64>) -> Self {
        let mut coeffs = BTreeMap::new();
        for x in items {
            *coeffs.entry(x).or_insert(0) += 1;
        }
        ExpPoly { coeffs }
    }

    pub fn of_set(set: &BTreeSet<u64>) -> Self {
        Self::from_multiset(set.iter().copied())
    }

    /// Recovers the multiset, sorted ascending.
    pub fn to_multiset(&self) -> Vec<u64> {
        self.coeffs.iter().flat_map(|(&e, &c)| std::iter::repeat_n(e, c as usize)).collect()
    }

    pub fn coeff(&self, e: u64) -> u64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when the polynomial is `a^X` for a set `X`.
    pub fn is_characteristic(&self) -> bool {
        self.coeffs.values().all(|&c| c == 1)
    }

    pub fn to_set(&self) -> Option<BTreeSet<u64>> {
        self.is_characteristic().then(|| self.coeffs.keys().copied().collect())
    }

    /// `a^{M ∪ L} = a^M + a^L` (multiset union).
    pub fn add(&self, other: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (&e, &c) in &other.coeffs {
            *out.coeffs.entry(e).or_insert(0) += c;
        }
        out
    }

    /// `a^{M + L} = a^M a^L` (sumset with multiplicities).
    pub fn mul(&self, other: &ExpPoly) -> ExpPoly {
        let mut out = BTreeMap::new();
        for (&e1, &c1) in &self.coeffs {
            for (&e2, &c2) in &other.coeffs {
                *out.entry(e1 + e2).or_insert(0) += c1 * c2;
            }
        }
        ExpPoly { coeffs: out }
    }

    pub fn to_int_poly(&self) -> Result<IntPoly, PolyError> {
        let len = self.coeffs.keys().next_back().map_or(0, |&m| m as usize + 1);
        let mut v = vec![0i64; len];
        for (&e, &c) in &self.coeffs {
            v[e as usize] = i64::try_from(c).map_err(|_| PolyError::Overflow)?;
        }
        Ok(IntPoly::from_coeffs(v))
    }
}

impl fmt::Debug for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_int_poly() {
            Ok(p) => write!(f, "{p:?}"),
            Err(_) => write!(f, "{:?}", self.coeffs),
        }
    }
}

/// `(a^n - 1) / (a - 1) = 1 + a + ... + a^{n-1}`
pub fn repunit(n: usize) -> IntPoly {
    IntPoly::from_coeffs(vec![1; n])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn exp_poly_examples() {
        let h = ExpPoly::from_multiset([0, 0, 1, 1, 1, 3, 4]);
        assert_eq!(h.to_int_poly().unwrap(), IntPoly::from_coeffs(vec![2, 3, 0, 1, 1]));
        assert_eq!(h.to_multiset(), vec![0, 0, 1, 1, 1, 3, 4]);
        assert!(ExpPoly::from_multiset([]).is_zero());
        assert_eq!(ExpPoly::from_multiset([0]).to_int_poly().unwrap(), IntPoly::one());
    }

    #[test]
    fn bijection_laws() {
        let m = ExpPoly::from_multiset([0, 2]);
        let l = ExpPoly::from_multiset([1, 2]);
        assert_eq!(m.mul(&l), ExpPoly::from_multiset([1, 2, 3, 4]));
        assert_eq!(m.add(&l), ExpPoly::from_multiset([0, 1, 2, 2]));
        assert!(!m.add(&l).is_characteristic());
    }

    #[test]
    fn division_examples() {
        let q = IntPoly::power_minus_one(6).exact_divide(&IntPoly::power_minus_one(2)).unwrap();
        assert_eq!(q, Some(IntPoly::of_set(&set(&[0, 2, 4]))));
        let p = IntPoly::from_coeffs(vec![3, -1, 4]);
        assert_eq!(p.exact_divide(&IntPoly::one()).unwrap(), Some(p.clone()));
        assert_eq!(IntPoly::power_minus_one(3).exact_divide(&IntPoly::power_minus_one(2)).unwrap(), None);
        assert!(matches!(p.exact_divide(&IntPoly::zero()), Err(PolyError::DivisionByZero)));
        assert_eq!(IntPoly::zero().exact_divide(&p).unwrap(), Some(IntPoly::zero()));
    }

    #[test]
    fn non_monic_divisor() {
        let d = IntPoly::from_coeffs(vec![1, 2]);
        let q = IntPoly::from_coeffs(vec![-1, 0, 3]);
        assert_eq!(d.mul(&q).unwrap().exact_divide(&d).unwrap(), Some(q));
        assert_eq!(IntPoly::from_coeffs(vec![1, 1]).exact_divide(&d).unwrap(), None);
    }
}
