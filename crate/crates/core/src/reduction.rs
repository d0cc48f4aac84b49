//! The reduction relation on finite sorted prefixes and finite
//! approximations of FR sets.
//!
//! A reduction witness assigns to each output position a block of strictly
//! increasing source indices and an orderly term; blocks of later positions
//! lie strictly to the right of earlier ones, with gaps permitted. All
//! searches are deterministic: blocks are explored in lexicographically
//! least index order and terms in enumeration order, so reports reproduce
//! bit-for-bit.
//!
//! Every result here is a bounded approximation. A `Mixed` verdict is
//! conclusive; `Contained` and `Disjoint` are evidence relative to the
//! recorded bounds only.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::algebra::{Element, Signature, SortId, SortWord, SortedPrefix};
use crate::matrices::Coloring;
use crate::terms::{
    enumerate_orderly_terms_capped, evaluate, term_profile, Term, TermError, DEFAULT_TERM_CAP,
};

/// Caps for a reduction or FR search: term shape bounds plus guards
/// against combinatorial blowup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_arity: usize,
    pub max_depth: usize,
    pub term_cap: usize,
    pub candidate_cap: usize,
}

impl SearchBounds {
    pub fn new(max_arity: usize, max_depth: usize) -> Self {
        SearchBounds {
            max_arity,
            max_depth,
            term_cap: DEFAULT_TERM_CAP,
            candidate_cap: 100_000,
        }
    }
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds::new(4, 3)
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("search exceeded its cap of {cap} {what}")]
    BoundsTooLarge { cap: usize, what: &'static str },
    #[error(transparent)]
    Term(#[from] TermError),
}

fn lift_term_error(e: TermError) -> ReductionError {
    match e {
        TermError::BoundsTooLarge { cap } => ReductionError::BoundsTooLarge {
            cap,
            what: "terms",
        },
        other => ReductionError::Term(other),
    }
}

/// One output position of a witness: the source block and the orderly term
/// applied to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPart {
    pub block: Vec<usize>,
    pub term: Term,
}

/// A verified explanation of `a <= b`: per output position, a block of
/// source indices and a term evaluating to the output element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionWitness {
    pub parts: Vec<WitnessPart>,
}

impl ReductionWitness {
    /// Re-checks the witness against the two prefixes: strictly increasing
    /// blocks in strictly increasing order, exact evaluation, and matching
    /// codomain sorts.
    pub fn verify(&self, a: &SortedPrefix, b: &SortedPrefix, sig: &Signature) -> bool {
        if self.parts.len() != a.len() {
            return false;
        }
        let mut last: Option<usize> = None;
        for (j, part) in self.parts.iter().enumerate() {
            if part.block.is_empty() {
                return false;
            }
            if part.block.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            if let Some(prev) = last {
                if part.block[0] <= prev {
                    return false;
                }
            }
            if *part.block.last().unwrap() >= b.len() {
                return false;
            }
            let profile = match term_profile(&part.term, sig) {
                Ok(p) => p,
                Err(_) => return false,
            };
            if profile.codomain != a.word.prefix[j] {
                return false;
            }
            let args = b.select(&part.block);
            match evaluate(&part.term, sig, &args.items) {
                Ok(v) if v == a.items[j] => {}
                _ => return false,
            }
            last = Some(*part.block.last().unwrap());
        }
        true
    }
}

/// Orderly terms grouped by codomain and domain word, for quick lookup
/// while matching blocks.
struct TermTable {
    by_domain: HashMap<(SortId, Vec<SortId>), Vec<Term>>,
}

impl TermTable {
    fn build(
        sig: &Signature,
        codomains: &[SortId],
        bounds: &SearchBounds,
    ) -> Result<TermTable, ReductionError> {
        let mut by_domain: HashMap<(SortId, Vec<SortId>), Vec<Term>> = HashMap::new();
        let mut seen: Vec<SortId> = Vec::new();
        for &codomain in codomains {
            if seen.contains(&codomain) {
                continue;
            }
            seen.push(codomain);
            let terms = enumerate_orderly_terms_capped(
                sig,
                codomain,
                bounds.max_arity,
                bounds.max_depth,
                bounds.term_cap,
            )
            .map_err(lift_term_error)?;
            for t in terms {
                let profile = term_profile(&t, sig).expect("enumerated terms are orderly");
                by_domain
                    .entry((codomain, profile.domain_word))
                    .or_default()
                    .push(t);
            }
        }
        Ok(TermTable { by_domain })
    }

    fn matching(&self, codomain: SortId, domain: &[SortId]) -> &[Term] {
        self.by_domain
            .get(&(codomain, domain.to_vec()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

/// Decides `a <= b` within bounds by deterministic backtracking over
/// (block, term) choices. `None` means no witness within bounds, not a
/// proof of non-reduction.
pub fn check_reduction(
    a: &SortedPrefix,
    b: &SortedPrefix,
    sig: &Signature,
    bounds: &SearchBounds,
) -> Result<Option<ReductionWitness>, ReductionError> {
    let table = TermTable::build(sig, &a.word.prefix, bounds)?;
    let mut parts: Vec<WitnessPart> = Vec::with_capacity(a.len());
    if search_witness(a, b, sig, bounds, &table, 0, 0, &mut parts) {
        Ok(Some(ReductionWitness { parts }))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn search_witness(
    a: &SortedPrefix,
    b: &SortedPrefix,
    sig: &Signature,
    bounds: &SearchBounds,
    table: &TermTable,
    j: usize,
    start: usize,
    parts: &mut Vec<WitnessPart>,
) -> bool {
    if j == a.len() {
        return true;
    }
    let codomain = a.word.prefix[j];
    let mut block: Vec<usize> = Vec::new();
    for first in start..b.len() {
        block.push(first);
        if try_block(a, b, sig, bounds, table, j, codomain, &mut block, parts) {
            return true;
        }
        block.pop();
    }
    false
}

/// Tries the current block as position `j`'s source, then its extensions,
/// in lexicographic pre-order.
#[allow(clippy::too_many_arguments)]
fn try_block(
    a: &SortedPrefix,
    b: &SortedPrefix,
    sig: &Signature,
    bounds: &SearchBounds,
    table: &TermTable,
    j: usize,
    codomain: SortId,
    block: &mut Vec<usize>,
    parts: &mut Vec<WitnessPart>,
) -> bool {
    let domain: Vec<SortId> = block.iter().map(|&i| b.word.prefix[i]).collect();
    let args = b.select(block);
    for term in table.matching(codomain, &domain) {
        match evaluate(term, sig, &args.items) {
            Ok(v) if v == a.items[j] => {
                parts.push(WitnessPart {
                    block: block.clone(),
                    term: term.clone(),
                });
                let next_start = block.last().unwrap() + 1;
                if search_witness(a, b, sig, bounds, table, j + 1, next_start, parts) {
                    return true;
                }
                parts.pop();
            }
            _ => {}
        }
    }
    if block.len() < bounds.max_arity {
        let last = *block.last().unwrap();
        for next in last + 1..b.len() {
            block.push(next);
            if try_block(a, b, sig, bounds, table, j, codomain, block, parts) {
                return true;
            }
            block.pop();
        }
    }
    false
}

/// How an element of an FR set was produced: an orderly term applied to a
/// block of source indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub term: Term,
    pub block: Vec<usize>,
}

/// A finite approximation of an FR set: deduplicated exact elements of the
/// target sort, each with one producing (term, block) pair, plus the
/// bounds the approximation was computed under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrSet {
    sort: SortId,
    entries: BTreeMap<Element, Provenance>,
    pub prefix_len: usize,
    pub max_arity: usize,
    pub max_depth: usize,
}

impl FrSet {
    pub fn sort(&self) -> SortId {
        self.sort
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.entries.contains_key(e)
    }

    /// Elements in canonical ascending order.
    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.entries.keys()
    }

    pub fn provenance(&self, e: &Element) -> Option<&Provenance> {
        self.entries.get(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, &Provenance)> {
        self.entries.iter()
    }

    pub fn is_subset_of(&self, other: &FrSet) -> bool {
        self.entries.keys().all(|e| other.contains(e))
    }
}

/// Computes all values `f(tau)` where `f` ranges over orderly terms with
/// the target codomain and `tau` over sort-matching subsequences of `b`,
/// within bounds. This is the finite form of the FR set of an
/// Omega-sorted sequence.
pub fn fr_set(
    b: &SortedPrefix,
    target: SortId,
    sig: &Signature,
    bounds: &SearchBounds,
) -> Result<FrSet, ReductionError> {
    let table = TermTable::build(sig, &[target], bounds)?;
    let mut entries: BTreeMap<Element, Provenance> = BTreeMap::new();
    let mut block: Vec<usize> = Vec::new();
    let mut visited = 0usize;
    for first in 0..b.len() {
        block.push(first);
        collect_fr(b, sig, bounds, &table, target, &mut block, &mut entries, &mut visited)?;
        block.pop();
    }
    Ok(FrSet {
        sort: target,
        entries,
        prefix_len: b.len(),
        max_arity: bounds.max_arity,
        max_depth: bounds.max_depth,
    })
}

#[allow(clippy::too_many_arguments)]
fn collect_fr(
    b: &SortedPrefix,
    sig: &Signature,
    bounds: &SearchBounds,
    table: &TermTable,
    target: SortId,
    block: &mut Vec<usize>,
    entries: &mut BTreeMap<Element, Provenance>,
    visited: &mut usize,
) -> Result<(), ReductionError> {
    *visited += 1;
    if *visited > bounds.candidate_cap {
        return Err(ReductionError::BoundsTooLarge {
            cap: bounds.candidate_cap,
            what: "subsequences",
        });
    }
    let domain: Vec<SortId> = block.iter().map(|&i| b.word.prefix[i]).collect();
    let args = b.select(block);
    for term in table.matching(target, &domain) {
        let value = evaluate(term, sig, &args.items).map_err(lift_term_error)?;
        entries.entry(value).or_insert_with(|| Provenance {
            term: term.clone(),
            block: block.clone(),
        });
    }
    if block.len() < bounds.max_arity {
        let last = *block.last().unwrap();
        for next in last + 1..b.len() {
            block.push(next);
            collect_fr(b, sig, bounds, table, target, block, entries, visited)?;
            block.pop();
        }
    }
    Ok(())
}

/// A deterministic finite stand-in for an Omega sort word: round-robin
/// over the recurring sorts, starting at `first`.
pub fn schedule_sort_word(recurring: &[SortId], first: SortId, length: usize) -> SortWord {
    assert!(length >= 1, "sort words have positive length");
    let mut cycle: Vec<SortId> = recurring.to_vec();
    cycle.sort();
    cycle.dedup();
    let pivot = cycle
        .iter()
        .position(|&s| s == first)
        .expect("the first sort must be among the recurring sorts");
    cycle.rotate_left(pivot);
    let prefix = (0..length).map(|i| cycle[i % cycle.len()]).collect();
    SortWord {
        prefix,
        recurring: {
            let mut r = cycle.clone();
            r.sort();
            r
        },
    }
}

/// Enumerates every e-sorted prefix of the given length that reduces to
/// `b` within bounds, each with its first witness in search order.
/// Distinct value sequences appear once, in discovery order.
pub fn enumerate_sorted_reductions(
    b: &SortedPrefix,
    word: &SortWord,
    sig: &Signature,
    out_len: usize,
    bounds: &SearchBounds,
) -> Result<Vec<(SortedPrefix, ReductionWitness)>, ReductionError> {
    // A prefix longer than the word (or the source) is infeasible: blocks
    // are disjoint, so there is nothing to enumerate.
    if word.prefix.len() < out_len || b.len() < out_len {
        return Ok(Vec::new());
    }
    let word = word.truncate(out_len);
    let table = TermTable::build(sig, &word.prefix, bounds)?;
    let mut out: Vec<(SortedPrefix, ReductionWitness)> = Vec::new();
    let mut seen: HashSet<Vec<Element>> = HashSet::new();
    let mut items: Vec<Element> = Vec::new();
    let mut parts: Vec<WitnessPart> = Vec::new();
    sweep(
        b, &word, sig, bounds, &table, 0, 0, &mut items, &mut parts, &mut seen, &mut out,
    )?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    b: &SortedPrefix,
    word: &SortWord,
    sig: &Signature,
    bounds: &SearchBounds,
    table: &TermTable,
    j: usize,
    start: usize,
    items: &mut Vec<Element>,
    parts: &mut Vec<WitnessPart>,
    seen: &mut HashSet<Vec<Element>>,
    out: &mut Vec<(SortedPrefix, ReductionWitness)>,
) -> Result<(), ReductionError> {
    if j == word.prefix.len() {
        if seen.insert(items.clone()) {
            if out.len() >= bounds.candidate_cap {
                return Err(ReductionError::BoundsTooLarge {
                    cap: bounds.candidate_cap,
                    what: "reduction candidates",
                });
            }
            out.push((
                SortedPrefix::new(items.clone(), word.clone()),
                ReductionWitness {
                    parts: parts.clone(),
                },
            ));
        }
        return Ok(());
    }
    let codomain = word.prefix[j];
    let mut block: Vec<usize> = Vec::new();
    for first in start..b.len() {
        block.push(first);
        sweep_block(
            b, word, sig, bounds, table, j, codomain, &mut block, items, parts, seen, out,
        )?;
        block.pop();
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn sweep_block(
    b: &SortedPrefix,
    word: &SortWord,
    sig: &Signature,
    bounds: &SearchBounds,
    table: &TermTable,
    j: usize,
    codomain: SortId,
    block: &mut Vec<usize>,
    items: &mut Vec<Element>,
    parts: &mut Vec<WitnessPart>,
    seen: &mut HashSet<Vec<Element>>,
    out: &mut Vec<(SortedPrefix, ReductionWitness)>,
) -> Result<(), ReductionError> {
    let domain: Vec<SortId> = block.iter().map(|&i| b.word.prefix[i]).collect();
    let args = b.select(block);
    for term in table.matching(codomain, &domain) {
        let value = evaluate(term, sig, &args.items).map_err(lift_term_error)?;
        items.push(value);
        parts.push(WitnessPart {
            block: block.clone(),
            term: term.clone(),
        });
        let next_start = block.last().unwrap() + 1;
        sweep(
            b, word, sig, bounds, table, j + 1, next_start, items, parts, seen, out,
        )?;
        parts.pop();
        items.pop();
    }
    if block.len() < bounds.max_arity {
        let last = *block.last().unwrap();
        for next in last + 1..b.len() {
            block.push(next);
            sweep_block(
                b, word, sig, bounds, table, j, codomain, block, items, parts, seen, out,
            )?;
            block.pop();
        }
    }
    Ok(())
}

/// Verdict of an FR set against a coloring. `Mixed` is conclusive evidence
/// of non-homogeneity; the other verdicts hold relative to bounds. An
/// empty set is contained vacuously and flagged as such.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Contained { vacuous: bool },
    Disjoint,
    Mixed { inside: Element, outside: Element },
}

impl Verdict {
    pub fn is_mixed(&self) -> bool {
        matches!(self, Verdict::Mixed { .. })
    }

    pub fn is_pure(&self) -> bool {
        !self.is_mixed()
    }

    pub fn describe(&self) -> String {
        match self {
            Verdict::Contained { vacuous: false } => "contained".to_string(),
            Verdict::Contained { vacuous: true } => "contained (vacuous)".to_string(),
            Verdict::Disjoint => "disjoint".to_string(),
            Verdict::Mixed { inside, outside } => {
                format!("mixed (in: {inside}, out: {outside})")
            }
        }
    }
}

/// Classifies an FR set against a coloring of the same phylum, returning
/// one witness of each side when the set is mixed.
pub fn check_homogeneous(fr: &FrSet, coloring: &Coloring) -> Verdict {
    assert_eq!(
        fr.sort(),
        coloring.phylum(),
        "coloring phylum must match the FR set sort"
    );
    let mut inside: Option<Element> = None;
    let mut outside: Option<Element> = None;
    for e in fr.elements() {
        if coloring.contains(e) {
            inside.get_or_insert_with(|| e.clone());
        } else {
            outside.get_or_insert_with(|| e.clone());
        }
        if inside.is_some() && outside.is_some() {
            break;
        }
    }
    match (inside, outside) {
        (Some(i), Some(o)) => Verdict::Mixed {
            inside: i,
            outside: o,
        },
        (Some(_), None) => Verdict::Contained { vacuous: false },
        (None, Some(_)) => Verdict::Disjoint,
        (None, None) => Verdict::Contained { vacuous: true },
    }
}
