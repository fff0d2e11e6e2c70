use std::collections::{BTreeMap, BTreeSet};

use maxcode::analysis::{compute_xw, compute_xw_with_bound, enumerate_system, separators_of, CodeContext};
use maxcode::arrangements::{eq_ec2_build, good_arrangement_columns, good_arrangement_rows, has_companion, verify_gap};
use maxcode::codes::{build_code_from_ps, is_code, FiniteCode};
use maxcode::cyclic::{chain_of_krasner, divisor_chains, hajos_enumerate, is_factorization, krasner_from_chain};
use maxcode::polynomials::{repunit, ExpPoly, IntPoly, NcPoly};
use maxcode::word::{Alphabet, Word};
use maxcode::NatSet;
use num_bigint::BigInt;
use proptest::prelude::*;

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-20i64..=20, 0..8)
}

fn naive_product(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; (a.len() + b.len()).saturating_sub(1)];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(vec![b'a', b'b']), 0..4).prop_map(Word::from_letters)
}

fn nc_poly() -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((word(), -3i64..=3), 0..5)
        .prop_map(|terms| NcPoly::from_terms(Alphabet::binary(), terms).unwrap())
}

fn word_set(max_len: usize) -> impl Strategy<Value = BTreeSet<Word>> {
    let pool: Vec<Word> = (1..=max_len).flat_map(|l| Alphabet::binary().words_of_length(l)).collect();
    prop::collection::btree_set(prop::sample::select(pool), 0..4).prop_map(|mut s| {
        s.insert(Word::empty());
        s
    })
}

/// A factorizing code built from random `P`, `S`, when construction succeeds with a small code.
fn built_code() -> impl Strategy<Value = Option<FiniteCode>> {
    (word_set(2), word_set(2)).prop_map(|(p, s)| {
        build_code_from_ps(&Alphabet::binary(), &p, &s).ok().filter(|c| !c.is_empty() && c.len() <= 8)
    })
}

proptest! {
    #[test]
    fn int_mul_is_convolution(a in coeffs(), b in coeffs()) {
        let got = IntPoly::from_coeffs(a.clone()).mul(&IntPoly::from_coeffs(b.clone())).unwrap();
        prop_assert_eq!(got, IntPoly::from_coeffs(naive_product(&a, &b)));
    }

    #[test]
    fn exact_divide_recovers_quotient(d in coeffs(), q in coeffs()) {
        let d = IntPoly::from_coeffs(d);
        prop_assume!(!d.is_zero());
        let q = IntPoly::from_coeffs(q);
        prop_assert_eq!(d.mul(&q).unwrap().exact_divide(&d).unwrap(), Some(q));
    }

    #[test]
    fn exp_poly_round_trip(items in prop::collection::vec(0u64..12, 0..10)) {
        let e = ExpPoly::from_multiset(items.iter().copied());
        prop_assert_eq!(e.to_int_poly().unwrap().to_exp_poly(), Some(e.clone()));
        let mut sorted = items.clone();
        sorted.sort_unstable();
        prop_assert_eq!(e.to_multiset(), sorted);
    }

    #[test]
    fn nc_mul_sums_over_splits(p in nc_poly(), q in nc_poly(), target in word()) {
        let product = p.mul(&q).unwrap();
        let expected: BigInt = (0..=target.len())
            .map(|k| p.coeff(&target.slice(0, k)) * q.coeff(&target.slice(k, target.len())))
            .sum();
        prop_assert_eq!(product.coeff(&target), expected);
    }

    #[test]
    fn nc_mul_is_associative(p in nc_poly(), q in nc_poly(), r in nc_poly()) {
        let left = p.mul(&q).unwrap().mul(&r).unwrap();
        let right = p.mul(&q.mul(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn subsets_of_codes_are_codes(code in built_code(), drop in any::<prop::sample::Index>()) {
        let Some(code) = code else { return Ok(()) };
        let words: Vec<Word> = code.words().iter().cloned().collect();
        let removed = drop.index(words.len());
        let rest = words.iter().enumerate().filter(|&(k, _)| k != removed).map(|(_, w)| w.clone());
        prop_assert!(is_code(&FiniteCode::new(Alphabet::binary(), rest).unwrap()).is_code);
    }

    #[test]
    fn system_pairs_factorize(code in built_code()) {
        let Some(code) = code else { return Ok(()) };
        let ctx = CodeContext::maximal(&code, b'a').unwrap();
        let system = enumerate_system(&ctx).unwrap();
        for (p, q) in system.pairs() {
            prop_assert!(is_factorization(p, q, ctx.n).unwrap());
        }
    }

    #[test]
    fn bayonet_tables_are_stable(code in built_code()) {
        let Some(code) = code else { return Ok(()) };
        let ctx = CodeContext::maximal(&code, b'a').unwrap();
        for w in separators_of(&ctx).into_iter().take(3) {
            let table = compute_xw(&ctx, &w).unwrap();
            prop_assert_eq!(table.len() as u64, ctx.n);
            let wider = compute_xw_with_bound(&ctx, &w, 2 * table.bound).unwrap();
            prop_assert_eq!(&wider.elements, &table.elements);
        }
    }
}

fn krasner_cases() -> Vec<(NatSet, NatSet, u64)> {
    (1..=12u64)
        .flat_map(|n| divisor_chains(n).into_iter().map(move |c| (c, n)))
        .map(|(c, n)| {
            let p = krasner_from_chain(&c).unwrap();
            (p.left, p.right, n)
        })
        .collect()
}

#[test]
fn krasner_pairs_tile_the_repunit() {
    for (i, j, n) in krasner_cases() {
        let product = IntPoly::of_set(&i).mul(&IntPoly::of_set(&j)).unwrap();
        assert_eq!(product, repunit(n as usize), "{i:?} {j:?}");
    }
}

#[test]
fn arrangements_satisfy_gap_and_duality() {
    let mut checked = 0;
    for n in [4u64, 6, 8, 12] {
        let hajos = hajos_enumerate(n, 16).unwrap();
        for (i, j, m) in krasner_cases().into_iter().filter(|c| c.2 == n) {
            let chain = chain_of_krasner(&i, &j, m).unwrap();
            let family: Vec<(NatSet, NatSet)> = hajos
                .iter()
                .map(|e| (e.pair.left.clone(), e.pair.right.clone()))
                .filter(|(r, t)| has_companion(r, t, &i, &j, n))
                .take(4)
                .collect();
            if family.is_empty() {
                continue;
            }
            let d = good_arrangement_rows(&family, (&i, &j), &chain).unwrap();
            let strict = d.rows().iter().flatten().all(|&x| x < n);
            assert!(verify_gap(&d, &j, n, strict).holds(), "Z_{n} ({i:?}, {j:?})");
            let cols = good_arrangement_columns(&family, (&i, &j), &chain).unwrap();
            assert_eq!(cols.transpose(), d);
            checked += 1;
        }
    }
    assert!(checked > 10, "{checked}");
}

#[test]
fn krasner_codes_match_the_bayonet_formula() {
    for (i, j, n) in krasner_cases() {
        let powers = |e: &NatSet| e.iter().map(|&k| Word::power(b'a', k as usize)).collect();
        let code = build_code_from_ps(&Alphabet::binary(), &powers(&i), &powers(&j)).unwrap();
        let one_b: BTreeSet<Word> = code.words().iter().filter(|w| w.count(b'b') == 1).cloned().collect();
        let formula: BTreeSet<Word> =
            eq_ec2_build(&i, &j, &NatSet::new(), &NatSet::new(), &BTreeMap::new(), &BTreeMap::new())
                .unwrap()
                .iter()
                .map(|b| b.to_word(b'a'))
                .collect();
        assert_eq!(one_b, formula, "({i:?}, {j:?}) mod {n}");
    }
}
