//! Good arrangements of Hajós families and of sets of bayonet words `a^i w a^j`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclic::{
    chain_of_krasner, is_krasner, last_step, residues, solve_eq_ef, CyclicError, DivisorChain, KrasnerSide,
};
use crate::matching::max_matching;
use crate::polynomials::NcPoly;
use crate::word::{Alphabet, Word};
use crate::NatSet;

/// Default budget for `find_good_arrangement`, counted in explored candidate rows.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("matrix must be rectangular with at least one row and column")]
    NotRectangular,
    #[error("({i:?}, {j:?}) is not a Krasner pair of order {n}")]
    NotKrasner { i: NatSet, j: NatSet, n: u64 },
    #[error("row {row} is not a Hajós factorization with the given Krasner companion")]
    NotJointlyHajos { row: usize },
    #[error("row {row}: {reason}")]
    DecompositionFailed { row: usize, reason: String },
    #[error("bayonet words do not share one separator")]
    MixedSeparators,
    #[error("not a language: coefficient {coeff} at {word}")]
    NotALanguage { word: String, coeff: BigInt },
    #[error("coefficient {coeff} at {word} exceeds 1")]
    Multiplicity { word: String, coeff: BigInt },
    #[error("search budget of {0} candidates exceeded")]
    BudgetExceeded(u64),
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
}

/// Rectangular matrix of naturals, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NatMatrix {
    rows: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct NatMatrixRepr {
    m: usize,
    l: usize,
    entries: Vec<Vec<u64>>,
}

impl Serialize for NatMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        NatMatrixRepr { m: self.m(), l: self.l(), entries: self.rows.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NatMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = NatMatrixRepr::deserialize(d)?;
        let m = NatMatrix::new(r.entries).map_err(serde::de::Error::custom)?;
        if (m.m(), m.l()) != (r.m, r.l) {
            return Err(serde::de::Error::custom("declared shape does not match entries"));
        }
        Ok(m)
    }
}

impl NatMatrix {
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self, ArrangementError> {
        let l = rows.first().map_or(0, Vec::len);
        if l == 0 || rows.iter().any(|r| r.len() != l) {
            return Err(ArrangementError::NotRectangular);
        }
        Ok(NatMatrix { rows })
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn l(&self) -> usize {
        self.rows[0].len()
    }

    pub fn get(&self, p: usize, q: usize) -> u64 {
        self.rows[p][q]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn column(&self, q: usize) -> Vec<u64> {
        self.rows.iter().map(|r| r[q]).collect()
    }

    pub fn transpose(&self) -> NatMatrix {
        NatMatrix { rows: (0..self.l()).map(|q| self.column(q)).collect() }
    }

    pub fn row_sets(&self) -> Vec<NatSet> {
        self.rows.iter().map(|r| r.iter().copied().collect()).collect()
    }

    pub fn column_sets(&self) -> Vec<NatSet> {
        self.transpose().row_sets()
    }

    /// `A_(n)`: every entry reduced mod `n`.
    pub fn reduce(&self, n: u64) -> NatMatrix {
        NatMatrix { rows: self.rows.iter().map(|r| r.iter().map(|x| x % n).collect()).collect() }
    }
}

/// A word `a^i sep a^j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bayonet {
    pub i: u64,
    pub sep: Word,
    pub j: u64,
}

impl Bayonet {
    pub fn new(i: u64, sep: Word, j: u64) -> Self {
        Bayonet { i, sep, j }
    }

    /// `a^i b a^j`.
    pub fn b(i: u64, j: u64) -> Self {
        Bayonet { i, sep: Word::from_letters(*b"b"), j }
    }

    pub fn to_word(&self, letter: u8) -> Word {
        Word::power(letter, self.i as usize).concat(&self.sep).concat(&Word::power(letter, self.j as usize))
    }

    /// Splits a word as `a^i core a^j`; the separator of `a^k` is empty.
    pub fn of_word(word: &Word, letter: u8) -> Self {
        let (lead, core, trail) = word.strip_letter(letter);
        Bayonet { i: lead as u64, sep: core, j: trail as u64 }
    }
}

/// Matrix of bayonet words sharing one separator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordMatrix {
    pub sep: Word,
    /// `(i, j)` exponents of `a^i sep a^j`, row-major.
    pub entries: Vec<Vec<(u64, u64)>>,
}

impl WordMatrix {
    pub fn new(entries: Vec<Vec<Bayonet>>) -> Result<Self, ArrangementError> {
        let l = entries.first().map_or(0, Vec::len);
        if l == 0 || entries.iter().any(|r| r.len() != l) {
            return Err(ArrangementError::NotRectangular);
        }
        let sep = entries[0][0].sep.clone();
        if entries.iter().flatten().any(|b| b.sep != sep) {
            return Err(ArrangementError::MixedSeparators);
        }
        let entries = entries.into_iter().map(|r| r.into_iter().map(|b| (b.i, b.j)).collect()).collect();
        Ok(WordMatrix { sep, entries })
    }

    pub fn m(&self) -> usize {
        self.entries.len()
    }

    pub fn l(&self) -> usize {
        self.entries[0].len()
    }

    pub fn bayonet(&self, p: usize, q: usize) -> Bayonet {
        let (i, j) = self.entries[p][q];
        Bayonet::new(i, self.sep.clone(), j)
    }

    pub fn bayonets(&self) -> Vec<Vec<Bayonet>> {
        (0..self.m()).map(|p| (0..self.l()).map(|q| self.bayonet(p, q)).collect()).collect()
    }
}

/// The induced arrangements of the rows (left exponents) and of the columns (right exponents).
pub fn induced_arrangements(w: &WordMatrix) -> (NatMatrix, NatMatrix) {
    let pick =
        |f: fn(&(u64, u64)) -> u64| NatMatrix { rows: w.entries.iter().map(|r| r.iter().map(f).collect()).collect() };
    (pick(|e| e.0), pick(|e| e.1))
}

/// Whether `(R, T)` is Hajós with `(I, J)` as Krasner companion: after reduction mod `n` both
/// `a^R = a^I(1 + a^M(a-1))` and `a^T = a^J(1 + a^L(a-1))` are solvable.
pub fn has_companion(r: &NatSet, t: &NatSet, i: &NatSet, j: &NatSet, n: u64) -> bool {
    solve_eq_ef(&residues(r, n), i).is_some() && solve_eq_ef(&residues(t, n), j).is_some()
}

/// The good arrangement of one reduced set `r ⊆ {0..n-1}` along `chain`.
fn arrange_reduced(r: &NatSet, i: &NatSet, j: &NatSet, chain: &DivisorChain) -> Result<Vec<u64>, String> {
    let n = chain.n();
    if chain.steps() <= 1 {
        let full: NatSet = (0..n).collect();
        return if i == &full && r == &full {
            Ok((0..n).collect())
        } else if i.len() == 1 && r.len() == 1 {
            Ok(r.iter().copied().collect())
        } else {
            Err(format!("{r:?} matches neither base case for order {n}"))
        };
    }
    let step = last_step(i, j, chain).map_err(|e| e.to_string())?.expect("chain has a step");
    let (h, g) = (step.h, step.g);
    let (ri, rj) = &step.reduced;
    match step.side {
        KrasnerSide::First => {
            let base: NatSet = r.iter().copied().filter(|&x| x < h).collect();
            let rebuilt: NatSet = (0..g).flat_map(|k| base.iter().map(move |x| x + k * h)).collect();
            if &rebuilt != r {
                return Err(format!("{r:?} is not R' + {{0, {h}, .., {}}}", (g - 1) * h));
            }
            let inner = arrange_reduced(&base, ri, rj, &step.prefix)?;
            Ok((0..g).flat_map(|k| inner.iter().map(move |x| x + k * h)).collect())
        }
        KrasnerSide::Second => {
            let base = residues(r, h);
            if base.len() != r.len() {
                return Err(format!("{r:?} has repeated residues mod {h}"));
            }
            let inner = arrange_reduced(&base, ri, rj, &step.prefix)?;
            Ok(inner.iter().map(|&v| *r.iter().find(|&&x| x % h == v).expect("residue present")).collect())
        }
    }
}

/// Lays out each set of `sets` as one row, in the good-arrangement order for `a^R` with
/// companion factor `a^I`. Entries keep their original (unreduced) values.
pub fn arrange_sets(
    sets: &[NatSet],
    i: &NatSet,
    j: &NatSet,
    chain: &DivisorChain,
) -> Result<NatMatrix, ArrangementError> {
    let n = chain.n();
    if !is_krasner(i, j, n) || chain_of_krasner(i, j, n).as_ref() != Some(chain) {
        return Err(ArrangementError::NotKrasner { i: i.clone(), j: j.clone(), n });
    }
    let mut rows = Vec::with_capacity(sets.len());
    for (row, r) in sets.iter().enumerate() {
        let reduced = residues(r, n);
        if reduced.len() != r.len() {
            return Err(ArrangementError::DecompositionFailed {
                row,
                reason: format!("{r:?} has repeated residues mod {n}"),
            });
        }
        let order = arrange_reduced(&reduced, i, j, chain)
            .map_err(|reason| ArrangementError::DecompositionFailed { row, reason })?;
        rows.push(order.iter().map(|&v| *r.iter().find(|&&x| x % n == v).expect("residue present")).collect());
    }
    NatMatrix::new(rows)
}

/// The good arrangement of `R_1 ∪ .. ∪ R_m` with respect to the rows.
pub fn good_arrangement_rows(
    family: &[(NatSet, NatSet)],
    companion: (&NatSet, &NatSet),
    chain: &DivisorChain,
) -> Result<NatMatrix, ArrangementError> {
    let (i, j) = companion;
    let n = chain.n();
    for (row, (r, t)) in family.iter().enumerate() {
        if !has_companion(r, t, i, j, n) {
            return Err(ArrangementError::NotJointlyHajos { row });
        }
    }
    let sets: Vec<NatSet> = family.iter().map(|(r, _)| r.clone()).collect();
    arrange_sets(&sets, i, j, chain)
}

/// The good arrangement with respect to the columns: the transpose of the rows construction.
pub fn good_arrangement_columns(
    family: &[(NatSet, NatSet)],
    companion: (&NatSet, &NatSet),
    chain: &DivisorChain,
) -> Result<NatMatrix, ArrangementError> {
    Ok(good_arrangement_rows(family, companion, chain)?.transpose())
}

/// Per-column witness of the column-sum property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapColumn {
    pub j_seq: Vec<u64>,
    pub n_q: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GapOutcome {
    Certificate(Vec<GapColumn>),
    /// Index of the first column with no admissible `n_q`, or of a column left without a
    /// distinct value.
    Failure {
        column: usize,
        reason: String,
    },
}

impl GapOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, GapOutcome::Certificate(_))
    }
}

/// Looks for `j_{p,q} ∈ J` with `r_{p,q} + j_{p,q} = n_q` down each column (mod `n` unless
/// `strict`), with the `n_q` pairwise distinct.
pub fn verify_gap(d: &NatMatrix, j: &NatSet, n: u64, strict: bool) -> GapOutcome {
    if n == 0 {
        return GapOutcome::Failure { column: 0, reason: "modulus must be positive".into() };
    }
    let mut candidates: Vec<Vec<u64>> = Vec::with_capacity(d.l());
    for q in 0..d.l() {
        let col = d.column(q);
        if strict && col.iter().any(|&r| r >= n) {
            return GapOutcome::Failure { column: q, reason: "entry not below n".into() };
        }
        let first = col[0];
        let cands: Vec<u64> = if strict {
            j.iter().map(|x| first + x).filter(|&v| col.iter().all(|&r| v >= r && j.contains(&(v - r)))).collect()
        } else {
            let jr = residues(j, n);
            residues(&j.iter().map(|x| first + x).collect(), n)
                .into_iter()
                .filter(|&v| col.iter().all(|&r| jr.contains(&((v + n - r % n) % n))))
                .collect()
        };
        if cands.is_empty() {
            return GapOutcome::Failure { column: q, reason: "no common value".into() };
        }
        candidates.push(cands);
    }
    let values: Vec<u64> = candidates.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let adj: Vec<Vec<usize>> =
        candidates.iter().map(|c| c.iter().map(|v| values.binary_search(v).expect("value listed")).collect()).collect();
    let chosen = max_matching(&adj, values.len());
    let mut cert = Vec::with_capacity(d.l());
    for (q, pick) in chosen.iter().enumerate() {
        let Some(idx) = pick else {
            return GapOutcome::Failure { column: q, reason: "values cannot be made distinct".into() };
        };
        let n_q = values[*idx];
        let j_seq =
            d.column(q)
                .iter()
                .map(|&r| {
                    if strict {
                        n_q - r
                    } else {
                        *j.iter().find(|&&x| (r + x) % n == n_q).expect("candidate admissible")
                    }
                })
                .collect();
        cert.push(GapColumn { j_seq, n_q });
    }
    GapOutcome::Certificate(cert)
}

/// Result of checking the three good-arrangement conditions on a word matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodArrangementCheck {
    pub good: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_condition: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<u64>>,
}

impl GoodArrangementCheck {
    fn fail(condition: u8, reason: impl Into<String>, chain: Option<&DivisorChain>) -> Self {
        GoodArrangementCheck {
            good: false,
            failed_condition: Some(condition),
            reason: Some(reason.into()),
            chain: chain.map(|c| c.as_slice().to_vec()),
        }
    }
}

/// Checks that `w` is a good arrangement with `(I, J)` as Krasner associated pair.
pub fn is_good_arrangement(w: &WordMatrix, i: &NatSet, j: &NatSet) -> GoodArrangementCheck {
    let n = (w.m() * w.l()) as u64;
    let Some(chain) = chain_of_krasner(i, j, n).filter(|_| is_krasner(i, j, n)) else {
        return GoodArrangementCheck::fail(1, format!("({i:?}, {j:?}) is not Krasner of order {n}"), None);
    };
    let (rows, cols) = induced_arrangements(w);
    let row_sets = rows.row_sets();
    let col_sets = cols.column_sets();
    if row_sets.iter().any(|r| r.len() != w.l()) || col_sets.iter().any(|t| t.len() != w.m()) {
        return GoodArrangementCheck::fail(1, "repeated exponent in a row or column", Some(&chain));
    }
    for (p, r) in row_sets.iter().enumerate() {
        for (q, t) in col_sets.iter().enumerate() {
            if !has_companion(r, t, i, j, n) {
                return GoodArrangementCheck::fail(
                    1,
                    format!("(row {p}, column {q}) is not Hajós with companion (I, J)"),
                    Some(&chain),
                );
            }
        }
    }
    match arrange_sets(&row_sets, i, j, &chain) {
        Ok(d) if d == rows => {}
        Ok(_) => return GoodArrangementCheck::fail(2, "row order differs from the good arrangement", Some(&chain)),
        Err(e) => return GoodArrangementCheck::fail(2, e.to_string(), Some(&chain)),
    }
    match arrange_sets(&col_sets, j, i, &chain) {
        Ok(d) if d.transpose() == cols => {}
        Ok(_) => return GoodArrangementCheck::fail(3, "column order differs from the good arrangement", Some(&chain)),
        Err(e) => return GoodArrangementCheck::fail(3, e.to_string(), Some(&chain)),
    }
    GoodArrangementCheck { good: true, failed_condition: None, reason: None, chain: Some(chain.as_slice().to_vec()) }
}

fn common_separator(c1: &BTreeSet<Bayonet>) -> Result<Option<Word>, ArrangementError> {
    let mut it = c1.iter();
    let Some(first) = it.next() else { return Ok(None) };
    if it.any(|b| b.sep != first.sep) {
        return Err(ArrangementError::MixedSeparators);
    }
    Ok(Some(first.sep.clone()))
}

/// Searches for a good arrangement of `c1` with `(I, J)` as Krasner associated pair.
///
/// The search partitions `c1` into `|J|` rows of `|I|` words whose left exponents satisfy the
/// companion equation for `I`; inside a partition the order of each row and of the rows is
/// fixed by the recursive construction, so each partition yields one candidate matrix.
pub fn find_good_arrangement(
    c1: &BTreeSet<Bayonet>,
    i: &NatSet,
    j: &NatSet,
    budget: u64,
) -> Result<Option<WordMatrix>, ArrangementError> {
    let n = (i.len() * j.len()) as u64;
    let Some(sep) = common_separator(c1)? else { return Ok(None) };
    if c1.len() as u64 != n {
        return Ok(None);
    }
    let Some(chain) = chain_of_krasner(i, j, n).filter(|_| is_krasner(i, j, n)) else {
        return Err(ArrangementError::NotKrasner { i: i.clone(), j: j.clone(), n });
    };
    let words: Vec<(u64, u64)> = c1.iter().map(|b| (b.i, b.j)).collect();
    let mut search = PartitionSearch {
        words: &words,
        row_len: i.len(),
        i,
        j,
        chain: &chain,
        sep: &sep,
        budget,
        spent: 0,
        used: vec![false; words.len()],
        rows: Vec::new(),
    };
    search.run()
}

struct PartitionSearch<'a> {
    words: &'a [(u64, u64)],
    row_len: usize,
    i: &'a NatSet,
    j: &'a NatSet,
    chain: &'a DivisorChain,
    sep: &'a Word,
    budget: u64,
    spent: u64,
    used: Vec<bool>,
    rows: Vec<Vec<usize>>,
}

impl PartitionSearch<'_> {
    fn run(&mut self) -> Result<Option<WordMatrix>, ArrangementError> {
        let Some(first) = self.used.iter().position(|u| !u) else {
            return Ok(self.assemble());
        };
        self.used[first] = true;
        let found = self.extend_row(vec![first], first + 1)?;
        self.used[first] = false;
        Ok(found)
    }

    fn extend_row(&mut self, row: Vec<usize>, from: usize) -> Result<Option<WordMatrix>, ArrangementError> {
        let n = self.chain.n();
        if row.len() == self.row_len {
            self.spent += 1;
            if self.spent > self.budget {
                return Err(ArrangementError::BudgetExceeded(self.budget));
            }
            let r: NatSet = row.iter().map(|&k| self.words[k].0).collect();
            if solve_eq_ef(&residues(&r, n), self.i).is_none() {
                return Ok(None);
            }
            self.rows.push(row);
            let found = self.run()?;
            self.rows.pop();
            return Ok(found);
        }
        for k in from..self.words.len() {
            if self.used[k] || row.iter().any(|&x| self.words[x].0 % n == self.words[k].0 % n) {
                continue;
            }
            self.used[k] = true;
            let mut next = row.clone();
            next.push(k);
            let found = self.extend_row(next, k + 1)?;
            self.used[k] = false;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn assemble(&self) -> Option<WordMatrix> {
        let rows: Vec<Vec<(u64, u64)>> =
            self.rows.iter().map(|row| row.iter().map(|&k| self.words[k]).collect()).collect();
        arrange_partition(&rows, self.sep, self.i, self.j)
    }
}

/// Orders a partition of bayonet exponents into rows as the good arrangement dictates: each
/// row by the rows construction for `a^I`, the rows by the columns construction applied to
/// the first column. Returns the matrix only if it passes [`is_good_arrangement`].
pub fn arrange_partition(rows: &[Vec<(u64, u64)>], sep: &Word, i: &NatSet, j: &NatSet) -> Option<WordMatrix> {
    let n = (i.len() * j.len()) as u64;
    let chain = chain_of_krasner(i, j, n).filter(|_| is_krasner(i, j, n))?;
    let mut ordered_rows: Vec<Vec<(u64, u64)>> = Vec::with_capacity(rows.len());
    for row in rows {
        let r: NatSet = row.iter().map(|e| e.0).collect();
        if r.len() != row.len() {
            return None;
        }
        let order = arrange_sets(&[r], i, j, &chain).ok()?;
        ordered_rows
            .push(order.rows()[0].iter().map(|&x| row.iter().find(|e| e.0 == x).copied()).collect::<Option<Vec<_>>>()?);
    }
    let t1: NatSet = ordered_rows.iter().map(|r| r[0].1).collect();
    if t1.len() != ordered_rows.len() || residues(&t1, n).len() != t1.len() {
        return None;
    }
    let col_order = arrange_sets(&[t1], j, i, &chain).ok()?;
    let rank: BTreeMap<u64, usize> = col_order.rows()[0].iter().enumerate().map(|(k, &v)| (v, k)).collect();
    ordered_rows.sort_by_key(|r| rank[&r[0].1]);
    let candidate = WordMatrix { sep: sep.clone(), entries: ordered_rows };
    is_good_arrangement(&candidate, i, j).good.then_some(candidate)
}

/// Parameters `t_i` and `λ_{i,k}` of the normal form
/// `C1 mod n = Σ_k Σ_i a^{i + λ_{i,k} h} b a^{t_i + k h}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct E1Form {
    pub h: u64,
    pub g: u64,
    pub t: Vec<u64>,
    /// `lambda[i][k]`.
    pub lambda: Vec<Vec<u64>>,
}

pub fn eq_e1_form(c1: &BTreeSet<Bayonet>, h: u64, g: u64) -> Option<E1Form> {
    let n = h.checked_mul(g).filter(|&n| n > 0)?;
    if c1.len() as u64 != n || common_separator(c1).ok()?.is_none() {
        return None;
    }
    let reduced: BTreeSet<(u64, u64)> = c1.iter().map(|b| (b.i % n, b.j % n)).collect();
    if reduced.len() as u64 != n {
        return None;
    }
    let mut t: Vec<Option<u64>> = vec![None; h as usize];
    let mut lambda: Vec<Vec<Option<u64>>> = vec![vec![None; g as usize]; h as usize];
    for (r, v) in reduced {
        let (i, lam) = ((r % h) as usize, r / h);
        let (k, ti) = ((v / h) as usize, v % h);
        if *t[i].get_or_insert(ti) != ti || lambda[i][k].replace(lam).is_some() {
            return None;
        }
    }
    Some(E1Form {
        h,
        g,
        t: t.into_iter().collect::<Option<_>>()?,
        lambda: lambda.into_iter().map(|r| r.into_iter().collect::<Option<_>>()).collect::<Option<_>>()?,
    })
}

fn a_pow(alphabet: &Alphabet, k: u64) -> NcPoly {
    NcPoly::monomial(alphabet.clone(), Word::power(b'a', k as usize), 1.into())
}

fn a_set(alphabet: &Alphabet, s: &NatSet) -> NcPoly {
    let words: Vec<Word> = s.iter().map(|&k| Word::power(b'a', k as usize)).collect();
    NcPoly::characteristic(alphabet.clone(), &words).expect("words over {a}")
}

/// Evaluates
/// `C1 = a^I b a^J + Σ_{i ∈ I'} a^i b a^{L_i}(a-1) a^J + Σ_{j ∈ J'} a^I (a-1) a^{M_j} b a^j`
/// over `{a, b}` and returns its support, requiring 0/1 coefficients. A missing `L_i` or
/// `M_j` is the empty set.
pub fn eq_ec2_build(
    i: &NatSet,
    j: &NatSet,
    i_prime: &NatSet,
    j_prime: &NatSet,
    l: &BTreeMap<u64, NatSet>,
    m: &BTreeMap<u64, NatSet>,
) -> Result<BTreeSet<Bayonet>, ArrangementError> {
    let n = (i.len() * j.len()) as u64;
    if !is_krasner(i, j, n) {
        return Err(ArrangementError::NotKrasner { i: i.clone(), j: j.clone(), n });
    }
    let ab = Alphabet::binary();
    let b = NcPoly::monomial(ab.clone(), Word::from_letters(*b"b"), 1.into());
    let a_minus_one = a_pow(&ab, 1).sub(&NcPoly::one(ab.clone())).expect("same alphabet");
    let (pi, pj) = (a_set(&ab, i), a_set(&ab, j));
    let empty = NatSet::new();
    let mul = |x: &NcPoly, y: &NcPoly| x.mul(y).expect("same alphabet");
    let mut c1 = mul(&mul(&pi, &b), &pj);
    for &x in i_prime {
        let lx = a_set(&ab, l.get(&x).unwrap_or(&empty));
        let term = mul(&mul(&mul(&a_pow(&ab, x), &b), &mul(&lx, &a_minus_one)), &pj);
        c1 = c1.add(&term).expect("same alphabet");
    }
    for &y in j_prime {
        let my = a_set(&ab, m.get(&y).unwrap_or(&empty));
        let term = mul(&mul(&mul(&pi, &a_minus_one), &mul(&my, &b)), &a_pow(&ab, y));
        c1 = c1.add(&term).expect("same alphabet");
    }
    match c1.to_language() {
        Ok(words) => Ok(words.iter().map(|w| Bayonet::of_word(w, b'a')).collect()),
        Err((word, coeff)) if coeff < BigInt::from(0) => {
            Err(ArrangementError::NotALanguage { word: word.to_string(), coeff })
        }
        Err((word, coeff)) => Err(ArrangementError::Multiplicity { word: word.to_string(), coeff }),
    }
}
