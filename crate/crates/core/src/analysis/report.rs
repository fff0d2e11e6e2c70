use std::collections::BTreeSet;

use serde::Serialize;

use super::construct::{associated_pair, ArrangementSource};
use super::{
    compute_xw, enumerate_system, good_arrangement_from_system, injection_from_good_arrangement, replay_triangle_chain,
    triangle_property, AnalysisError, BayonetTable, CodeContext, Injection, SystemOfFactorizations,
};
use crate::arrangements::{find_good_arrangement, Bayonet, WordMatrix};
use crate::codes::FiniteCode;
use crate::cyclic::{is_prime, krasner_pairs, omega};
use crate::word::Word;
use crate::NatSet;

pub const SCHEMA_VERSION: u32 = 1;

/// Separators `w` worth analysing: the nonempty cores `w` of codewords `a^i w a^j`, and every
/// letter other than `a`.
pub fn separators_of(ctx: &CodeContext) -> Vec<Word> {
    let mut out: BTreeSet<Word> =
        ctx.code.words().iter().map(|x| Bayonet::of_word(x, ctx.letter).sep).filter(|w| !w.is_empty()).collect();
    out.extend(ctx.code.alphabet().letters().filter(|&c| c != ctx.letter).map(|c| Word::power(c, 1)));
    out.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArrangementReport {
    pub associated: (NatSet, NatSet),
    pub matrix: WordMatrix,
    pub via: ArrangementSource,
    pub injection: Injection,
    /// The counting chain from `X_w` through the injection image to the grid holds.
    pub chain_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparatorReport {
    pub w: Word,
    #[serde(rename = "Xw")]
    pub xw: Vec<[u64; 2]>,
    pub triangle: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triangle_violation_k: Option<u64>,
    pub arrangement: Option<ArrangementReport>,
}

impl SeparatorReport {
    fn new(table: &BayonetTable, arrangement: Option<ArrangementReport>) -> Self {
        let verdict = triangle_property(&table.elements);
        SeparatorReport {
            w: table.sep.clone(),
            xw: table.elements.iter().map(|&(i, j)| [i, j]).collect(),
            triangle: verdict.holds,
            triangle_violation_k: verdict.violation_k,
            arrangement,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub code: FiniteCode,
    pub letter: String,
    pub n: u64,
    pub lefts: Vec<Vec<u64>>,
    pub rights: Vec<Vec<u64>>,
    /// Krasner pairs `(P, Q)` of the system.
    pub krasner_pairs: Vec<(NatSet, NatSet)>,
    /// The system pair driving the arrangements, if any qualifies.
    pub pair: Option<(NatSet, NatSet)>,
    pub separators: Vec<SeparatorReport>,
}

fn violation(ctx: &CodeContext, claim: String, w: &Word) -> AnalysisError {
    AnalysisError::TheoremViolation { claim, bundle: ctx.bundle(serde_json::json!({ "w": w })) }
}

fn table_of(ctx: &CodeContext, w: &Word) -> Result<BayonetTable, AnalysisError> {
    let table = compute_xw(ctx, w)?;
    if table.len() as u64 != ctx.n {
        return Err(violation(ctx, format!("|X_{w}| = {} differs from the order {}", table.len(), ctx.n), w));
    }
    Ok(table)
}

/// Certifies an arrangement through its injection and the counting chain.
fn certify(
    ctx: &CodeContext,
    table: &BayonetTable,
    associated: (NatSet, NatSet),
    matrix: WordMatrix,
    via: ArrangementSource,
) -> Result<ArrangementReport, AnalysisError> {
    let injection = injection_from_good_arrangement(&matrix, &associated.0, &associated.1)?;
    let chain = replay_triangle_chain(&injection);
    if !chain.holds {
        return Err(violation(ctx, format!("counting chain fails at K = {:?}", chain.violation_k), &table.sep));
    }
    if !triangle_property(&table.elements).holds {
        return Err(violation(ctx, format!("X_{} breaks the triangle bound", table.sep), &table.sep));
    }
    Ok(ArrangementReport { associated, matrix, via, injection, chain_holds: chain.holds })
}

fn system_pair_report(
    ctx: &CodeContext,
    system: &SystemOfFactorizations,
    table: &BayonetTable,
    pair: &(NatSet, NatSet),
    budget: u64,
) -> Result<ArrangementReport, AnalysisError> {
    let arr = good_arrangement_from_system(ctx, system, table, &pair.0, &pair.1, budget)?;
    certify(ctx, table, arr.associated, arr.matrix, arr.via)
}

/// The first system pair that is Krasner, else the first with a singleton factor.
fn driving_pair(system: &SystemOfFactorizations) -> Option<(NatSet, NatSet)> {
    let mut candidates = system.krasner_pairs().into_iter();
    candidates.next().or_else(|| {
        system.pairs().find(|(p, q)| associated_pair(p, q, system.n).is_some()).map(|(p, q)| (p.clone(), q.clone()))
    })
}

/// Full analysis of a maximal code: its system of factorizations and, per separator, `X_w`,
/// the triangle status and, when the system allows it, a certified good arrangement.
pub fn analyze(ctx: &CodeContext, budget: u64) -> Result<AnalysisReport, AnalysisError> {
    let system = enumerate_system(ctx)?;
    let pair = driving_pair(&system);
    let mut separators = Vec::new();
    for w in separators_of(ctx) {
        let table = table_of(ctx, &w)?;
        let arrangement = match &pair {
            Some(pair) => Some(system_pair_report(ctx, &system, &table, pair, budget)?),
            None => None,
        };
        separators.push(SeparatorReport::new(&table, arrangement));
    }
    let sets = |v: &[super::SidedSet]| v.iter().map(|s| s.residues.iter().copied().collect()).collect();
    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        code: ctx.code.clone(),
        letter: (ctx.letter as char).to_string(),
        n: ctx.n,
        lefts: sets(&system.lefts),
        rights: sets(&system.rights),
        krasner_pairs: system.krasner_pairs(),
        pair,
        separators,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    /// `a^p ∈ X` with `p` prime.
    Prime,
    /// Some system pair has a singleton factor.
    Singleton,
    /// Evidence only: `Ω(n) <= 2`.
    Omega2,
    /// Evidence only: some system pair has a factor of size at most 2.
    Pair2,
}

impl ScanMode {
    /// Whether a failure in this mode contradicts a proven statement.
    pub fn is_guaranteed(self) -> bool {
        matches!(self, ScanMode::Prime | ScanMode::Singleton)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub schema_version: u32,
    pub mode: ScanMode,
    pub code: FiniteCode,
    pub n: u64,
    pub pair: Option<(NatSet, NatSet)>,
    pub separators: Vec<SeparatorReport>,
    /// Every separator satisfies the triangle bound.
    pub all_triangle: bool,
}

/// Searches every Krasner pair of order `n` for a good arrangement of `X_w`.
fn any_good_arrangement(
    ctx: &CodeContext,
    table: &BayonetTable,
    budget: u64,
) -> Result<Option<ArrangementReport>, AnalysisError> {
    for pair in krasner_pairs(ctx.n)? {
        if let Some(matrix) = find_good_arrangement(&table.bayonets(), &pair.left, &pair.right, budget)? {
            let associated = (pair.left, pair.right);
            return certify(ctx, table, associated, matrix, ArrangementSource::Search).map(Some);
        }
    }
    Ok(None)
}

/// Replays the prime and singleton corollaries on one code, or collects evidence on the
/// Ω(n) <= 2 and two-element-factor extensions.
pub fn corollary_scan(ctx: &CodeContext, mode: ScanMode, budget: u64) -> Result<ScanReport, AnalysisError> {
    let system = enumerate_system(ctx)?;
    let n = ctx.n;
    let small_pair =
        |bound: usize| system.pairs().find(|(p, q)| p.len().min(q.len()) <= bound).map(|(p, q)| (p.clone(), q.clone()));
    let pair = match mode {
        ScanMode::Prime if n == 1 || is_prime(n) => small_pair(1),
        ScanMode::Prime => return Err(AnalysisError::Hypothesis(format!("the order {n} is not prime"))),
        ScanMode::Singleton => match small_pair(1) {
            Some(p) => Some(p),
            None => return Err(AnalysisError::Hypothesis("no system pair has a singleton factor".into())),
        },
        ScanMode::Omega2 if omega(n) <= 2 => None,
        ScanMode::Omega2 => return Err(AnalysisError::Hypothesis(format!("Ω({n}) exceeds 2"))),
        ScanMode::Pair2 => match small_pair(2) {
            Some(p) => Some(p),
            None => return Err(AnalysisError::Hypothesis("no system pair has a factor of size <= 2".into())),
        },
    };
    let mut separators = Vec::new();
    for w in separators_of(ctx) {
        let table = table_of(ctx, &w)?;
        let arrangement = match (&pair, mode.is_guaranteed()) {
            (Some(pair), true) => Some(system_pair_report(ctx, &system, &table, pair, budget)?),
            _ => any_good_arrangement(ctx, &table, budget)?,
        };
        let report = SeparatorReport::new(&table, arrangement);
        if mode.is_guaranteed() && !report.triangle {
            return Err(violation(ctx, format!("X_{w} breaks the triangle bound"), &w));
        }
        separators.push(report);
    }
    Ok(ScanReport {
        schema_version: SCHEMA_VERSION,
        mode,
        code: ctx.code.clone(),
        n,
        pair,
        all_triangle: separators.iter().all(|s| s.triangle),
        separators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::DEFAULT_MATCHING_BUDGET;
    use crate::nat_set as s;
    use crate::word::w;

    fn ctx(words: &[&str]) -> CodeContext {
        CodeContext::maximal(&FiniteCode::from_strs("ab", words).unwrap(), b'a').unwrap()
    }

    fn seven() -> CodeContext {
        ctx(&["aaaaaa", "b", "baa", "baaaa", "ab", "abaa", "abaaaa"])
    }

    #[test]
    fn separators() {
        assert_eq!(separators_of(&seven()), vec![w("b")]);
        let c = ctx(&["aa", "ab", "ba", "bb"]);
        assert_eq!(separators_of(&c), vec![w("b"), w("bb")]);
    }

    #[test]
    fn analyze_seven_word_code() {
        let r = analyze(&seven(), DEFAULT_MATCHING_BUDGET).unwrap();
        assert_eq!(r.n, 6);
        assert!(r.lefts.contains(&vec![0, 2, 4]) && r.rights.contains(&vec![0, 1]));
        assert_eq!(r.pair, Some((s(&[0, 2, 4]), s(&[0, 1]))));
        let sep = &r.separators[0];
        assert!(sep.triangle && sep.arrangement.as_ref().unwrap().chain_holds);
        let json = serde_json::to_value(&r).unwrap();
        for key in ["code", "letter", "n", "lefts", "rights", "separators"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert!(json["separators"][0].get("Xw").is_some());
    }

    #[test]
    fn analyze_trivial_code() {
        let r = analyze(&ctx(&["a", "b"]), DEFAULT_MATCHING_BUDGET).unwrap();
        assert_eq!((r.n, r.lefts.clone(), r.rights.clone()), (1, vec![vec![0]], vec![vec![0]]));
        assert_eq!(r.separators[0].xw, vec![[0, 0]]);
    }

    #[test]
    fn scan_modes() {
        let prime = ctx(&["aa", "ab", "ba", "bb"]);
        let r = corollary_scan(&prime, ScanMode::Prime, DEFAULT_MATCHING_BUDGET).unwrap();
        assert!(r.all_triangle && r.separators.iter().all(|s| s.arrangement.is_some()));
        assert!(corollary_scan(&ctx(&["a", "b"]), ScanMode::Prime, 100).unwrap().all_triangle);
        let c = seven();
        assert!(matches!(corollary_scan(&c, ScanMode::Prime, 100), Err(AnalysisError::Hypothesis(_))));
        assert!(matches!(corollary_scan(&c, ScanMode::Singleton, 100), Err(AnalysisError::Hypothesis(_))));
        let prefix = ctx(&["aaaa", "b", "ab", "aab", "aaab"]);
        assert!(corollary_scan(&prefix, ScanMode::Singleton, DEFAULT_MATCHING_BUDGET).unwrap().all_triangle);
        let r = corollary_scan(&c, ScanMode::Omega2, DEFAULT_MATCHING_BUDGET).unwrap();
        assert!(r.separators[0].arrangement.is_some());
        assert!(corollary_scan(&c, ScanMode::Pair2, DEFAULT_MATCHING_BUDGET).unwrap().all_triangle);
    }
}
