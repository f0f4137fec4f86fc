//! Brute-force congruence closure over a monoid presentation, breadth-first
//! within explicit size bounds. "Equal" answers are sound; "not found" only
//! says the bounded universe contains no connecting path.
//!
//! Each rewrite step is invertible and paths compose inside the size-capped
//! universe, so bounded reachability is an equivalence relation there; the
//! agreement sweep exploits that by exploring each bounded class exactly once.

use super::canonical::{canonicalize_m, CanonicalM};
use super::{Gen, MWord, MonoidPresentation};
use crate::error::Error;
use crate::par;
use serde::Serialize;
use std::collections::{HashMap, HashSet};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OracleAnswer {
    Equal,
    NotFoundWithinBounds,
}

/// Nibble-packed word over ≤ 32 generators with multiplicities ≤ 15.
type Packed = u128;

struct PackedUniverse {
    gens: usize,
    max_size: u64,
    visited_cap: usize,
    /// moves: (remove, add, size_delta); both sides as (gen, count) lists.
    moves: Vec<(Vec<(usize, u64)>, Vec<(usize, u64)>, i64)>,
}

fn pack(counts: &[u64]) -> Packed {
    let mut p: Packed = 0;
    for (i, &c) in counts.iter().enumerate() {
        debug_assert!(c < 16);
        p |= (c as Packed) << (4 * i);
    }
    p
}

fn nibble(p: Packed, i: usize) -> u64 {
    ((p >> (4 * i)) & 0xF) as u64
}

impl PackedUniverse {
    fn new(pres: &MonoidPresentation, max_size: u64, visited_cap: usize) -> Result<Self, Error> {
        let gens = pres.generators.len();
        if gens > 32 {
            return Err(Error::BoundExceeded(format!(
                "oracle supports at most 32 instantiated generators, got {gens}"
            )));
        }
        if max_size > 15 {
            return Err(Error::BoundExceeded(
                "oracle word-size bound must be at most 15".into(),
            ));
        }
        let mut moves = Vec::new();
        for (lhs, rhs) in &pres.relations {
            let dl: i64 = lhs.iter().map(|&(_, m)| m as i64).sum();
            let dr: i64 = rhs.iter().map(|&(_, m)| m as i64).sum();
            moves.push((lhs.clone(), rhs.clone(), dr - dl));
            moves.push((rhs.clone(), lhs.clone(), dl - dr));
        }
        Ok(PackedUniverse {
            gens,
            max_size,
            visited_cap,
            moves,
        })
    }

    fn pack_word(&self, w: &[(usize, u64)]) -> Result<Packed, Error> {
        let mut counts = vec![0u64; self.gens];
        for &(g, m) in w {
            if g >= self.gens {
                return Err(Error::Malformed(format!("generator id {g} out of range")));
            }
            counts[g] += m;
        }
        if counts.iter().sum::<u64>() > self.max_size {
            return Err(Error::BoundExceeded(
                "input word exceeds the oracle size bound".into(),
            ));
        }
        if counts.iter().any(|&c| c > 15) {
            return Err(Error::BoundExceeded(
                "input multiplicity exceeds the packed range".into(),
            ));
        }
        Ok(pack(&counts))
    }

    /// All states reachable from `start` through the bounded universe.
    /// Stops early (returning whether the target was seen) when given one.
    fn explore(
        &self,
        start: Packed,
        target: Option<Packed>,
    ) -> Result<(HashSet<Packed>, bool), Error> {
        let mut visited: HashSet<Packed> = HashSet::new();
        let mut queue: Vec<Packed> = vec![start];
        visited.insert(start);
        if target == Some(start) {
            return Ok((visited, true));
        }
        let mut head = 0;
        while head < queue.len() {
            let cur = queue[head];
            head += 1;
            let size: u64 = (0..self.gens).map(|i| nibble(cur, i)).sum();
            'moves: for (remove, add, delta) in &self.moves {
                if size as i64 + delta > self.max_size as i64 {
                    continue;
                }
                for &(g, m) in remove {
                    if nibble(cur, g) < m {
                        continue 'moves;
                    }
                }
                let mut next = cur;
                for &(g, m) in remove {
                    next -= (m as Packed) << (4 * g);
                }
                for &(g, m) in add {
                    if nibble(next, g) + m > 15 {
                        continue 'moves;
                    }
                    next += (m as Packed) << (4 * g);
                }
                if visited.insert(next) {
                    if visited.len() > self.visited_cap {
                        return Err(Error::BoundExceeded(format!(
                            "oracle closure exceeded {} states",
                            self.visited_cap
                        )));
                    }
                    if target == Some(next) {
                        return Ok((visited, true));
                    }
                    queue.push(next);
                }
            }
        }
        Ok((visited, false))
    }
}

const DEFAULT_VISITED_CAP: usize = 20_000_000;

/// Breadth-first congruence closure between two words of a presentation.
pub fn oracle_equiv(
    pres: &MonoidPresentation,
    w1: &[(usize, u64)],
    w2: &[(usize, u64)],
    max_size: u64,
) -> Result<OracleAnswer, Error> {
    let uni = PackedUniverse::new(pres, max_size, DEFAULT_VISITED_CAP)?;
    let a = uni.pack_word(w1)?;
    let b = uni.pack_word(w2)?;
    let (_, found) = uni.explore(a, Some(b))?;
    Ok(if found {
        OracleAnswer::Equal
    } else {
        OracleAnswer::NotFoundWithinBounds
    })
}

/// Oracle specialized to the leveled monoid: relation schemas instantiated up
/// to `max_index`, search capped at `max_size`.
pub fn oracle_equiv_m(
    w1: &MWord,
    w2: &MWord,
    max_size: u64,
    max_index: u32,
) -> Result<OracleAnswer, Error> {
    if w1.max_index() > max_index || w2.max_index() > max_index {
        return Err(Error::BoundExceeded(
            "word index exceeds the oracle index bound".into(),
        ));
    }
    let pres = MonoidPresentation::leveled(max_index);
    oracle_equiv(
        &pres,
        &pres.word_from_mword(w1),
        &pres.word_from_mword(w2),
        max_size,
    )
}

/// The full bounded congruence class of a word (as packed states).
pub fn bounded_class(
    pres: &MonoidPresentation,
    w: &[(usize, u64)],
    max_size: u64,
) -> Result<Vec<Vec<(usize, u64)>>, Error> {
    let uni = PackedUniverse::new(pres, max_size, DEFAULT_VISITED_CAP)?;
    let start = uni.pack_word(w)?;
    let (visited, _) = uni.explore(start, None)?;
    let mut out: Vec<Vec<(usize, u64)>> = visited
        .into_iter()
        .map(|p| {
            (0..uni.gens)
                .filter_map(|g| {
                    let m = nibble(p, g);
                    (m > 0).then_some((g, m))
                })
                .collect()
        })
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct AgreementReport {
    pub base_words: usize,
    pub canonical_classes: usize,
    pub bounded_classes_explored: usize,
    pub states_visited: usize,
    pub largest_class: usize,
    pub disagreements: Vec<(String, String)>,
}

impl AgreementReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Enumerate every word with total size ≤ `max_size` and index ≤ `max_index`.
pub fn enumerate_words(max_size: u64, max_index: u32) -> Vec<MWord> {
    let mut symbols: Vec<Gen> = Vec::new();
    for i in 0..=max_index {
        symbols.push(Gen::x(i));
        symbols.push(Gen::y(i));
        symbols.push(Gen::z(i));
    }
    for i in 1..=max_index {
        symbols.push(Gen::a(i));
    }
    let mut out = Vec::new();
    let mut stack: Vec<(Gen, u64)> = Vec::new();
    fn rec(
        symbols: &[Gen],
        pos: usize,
        remaining: u64,
        stack: &mut Vec<(Gen, u64)>,
        out: &mut Vec<MWord>,
    ) {
        if pos == symbols.len() {
            out.push(MWord::from_pairs(stack.iter().copied()));
            return;
        }
        for m in 0..=remaining {
            if m > 0 {
                stack.push((symbols[pos], m));
            }
            rec(symbols, pos + 1, remaining - m, stack, out);
            if m > 0 {
                stack.pop();
            }
        }
    }
    rec(&symbols, 0, max_size, &mut stack, &mut out);
    out
}

/// Sweep every pair of words within the base bounds and confirm the canonical
/// forms agree with the bounded congruence-closure oracle on every pair the
/// oracle resolves. One breadth-first exploration per bounded class; classes
/// are grouped by canonical form and groups run in parallel.
pub fn oracle_agreement_sweep(
    base_size: u64,
    base_index: u32,
    oracle_size: u64,
    oracle_index: u32,
) -> Result<AgreementReport, Error> {
    let words = enumerate_words(base_size, base_index);
    let pres = MonoidPresentation::leveled(oracle_index);
    let uni = PackedUniverse::new(&pres, oracle_size, DEFAULT_VISITED_CAP)?;

    // Pack every base word and group by canonical form.
    let mut canon_ids: HashMap<CanonicalM, usize> = HashMap::new();
    let mut groups: Vec<Vec<Packed>> = Vec::new();
    let mut packed_to_canon: HashMap<Packed, usize> = HashMap::new();
    let mut packed_to_text: HashMap<Packed, String> = HashMap::new();
    for w in &words {
        let c = canonicalize_m(w);
        let next_id = canon_ids.len();
        let id = *canon_ids.entry(c).or_insert(next_id);
        if id == groups.len() {
            groups.push(Vec::new());
        }
        let p = uni.pack_word(&pres.word_from_mword(w))?;
        groups[id].push(p);
        packed_to_canon.insert(p, id);
        packed_to_text.insert(p, w.to_string());
    }

    let base_words = words.len();
    let canonical_classes = groups.len();

    struct GroupOutcome {
        explored: usize,
        visited: usize,
        largest: usize,
        disagreements: Vec<(Packed, Packed)>,
    }

    let uni_ref = &uni;
    let packed_to_canon_ref = &packed_to_canon;
    let outcomes: Vec<Result<GroupOutcome, Error>> =
        par::map_items(groups.iter().enumerate().collect::<Vec<_>>(), |(gid, members)| {
            let mut covered: HashSet<Packed> = HashSet::new();
            let mut outcome = GroupOutcome {
                explored: 0,
                visited: 0,
                largest: 0,
                disagreements: Vec::new(),
            };
            for &start in members {
                if covered.contains(&start) {
                    continue;
                }
                let (class, _) = uni_ref.explore(start, None)?;
                outcome.explored += 1;
                outcome.visited += class.len();
                outcome.largest = outcome.largest.max(class.len());
                for state in class {
                    if let Some(&cid) = packed_to_canon_ref.get(&state) {
                        if cid == gid {
                            covered.insert(state);
                        } else {
                            // Oracle connects two words the canonical form separates.
                            outcome.disagreements.push((start, state));
                        }
                    }
                }
            }
            Ok(outcome)
        });

    let mut report = AgreementReport {
        base_words,
        canonical_classes,
        bounded_classes_explored: 0,
        states_visited: 0,
        largest_class: 0,
        disagreements: Vec::new(),
    };
    for outcome in outcomes {
        let o = outcome?;
        report.bounded_classes_explored += o.explored;
        report.states_visited += o.visited;
        report.largest_class = report.largest_class.max(o.largest);
        for (a, b) in o.disagreements {
            report
                .disagreements
                .push((packed_to_text[&a].clone(), packed_to_text[&b].clone()));
        }
    }
    report.disagreements.sort();
    report.disagreements.dedup();
    Ok(report)
}
