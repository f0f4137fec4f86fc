//! Finitely presented commutative monoids with a decision layer.
//!
//! The main inhabitant is the monoid on generators `x_n, y_n, z_n, a_n`
//! subject to the level/pedestal relations; words get fast canonical forms,
//! while a generic breadth-first congruence-closure oracle over any
//! presentation serves as the independent cross-check. Bounded searches
//! answer order (`≤`) and refinement questions with explicit witnesses.

mod canonical;
mod oracle;
mod search;

pub use canonical::{add_m, canonicalize_m, equals_m, mbar_project, CanonicalM, CanonicalMbar};
pub use oracle::{
    bounded_class, oracle_agreement_sweep, oracle_equiv, oracle_equiv_m, AgreementReport,
    OracleAnswer,
};
pub use search::{
    le_bounded, property_battery_m, refine_bounded, BatteryReport, LeAnswer, SearchBounds,
};

use crate::scalar::{pow2, Q};
use num::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Generator families. `A`-indices start at 1, the rest at 0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum GenKind {
    X,
    Y,
    Z,
    A,
}

impl GenKind {
    pub fn letter(&self) -> &'static str {
        match self {
            GenKind::X => "x",
            GenKind::Y => "y",
            GenKind::Z => "z",
            GenKind::A => "a",
        }
    }

    pub fn from_letter(s: &str) -> Option<GenKind> {
        match s {
            "x" => Some(GenKind::X),
            "y" => Some(GenKind::Y),
            "z" => Some(GenKind::Z),
            "a" => Some(GenKind::A),
            _ => None,
        }
    }
}

/// An indexed generator symbol.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Gen {
    pub kind: GenKind,
    pub index: u32,
}

impl Gen {
    pub fn new(kind: GenKind, index: u32) -> Gen {
        if kind == GenKind::A {
            assert!(index >= 1, "a-generators are indexed from 1");
        }
        Gen { kind, index }
    }

    pub fn x(i: u32) -> Gen {
        Gen::new(GenKind::X, i)
    }
    pub fn y(i: u32) -> Gen {
        Gen::new(GenKind::Y, i)
    }
    pub fn z(i: u32) -> Gen {
        Gen::new(GenKind::Z, i)
    }
    pub fn a(i: u32) -> Gen {
        Gen::new(GenKind::A, i)
    }
}

// Deterministic order: by index, then x < y < z < a.
impl Ord for Gen {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.index, self.kind).cmp(&(other.index, other.kind))
    }
}

impl PartialOrd for Gen {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A word: finite multiset of generators.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct MWord {
    mult: BTreeMap<Gen, u64>,
}

impl MWord {
    pub fn zero() -> MWord {
        MWord::default()
    }

    pub fn gen(g: Gen) -> MWord {
        MWord::from_pairs([(g, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Gen, u64)>) -> MWord {
        let mut w = MWord::default();
        for (g, m) in pairs {
            w.push(g, m);
        }
        w
    }

    pub fn push(&mut self, g: Gen, m: u64) {
        if m == 0 {
            return;
        }
        *self.mult.entry(g).or_insert(0) += m;
    }

    pub fn add(&self, other: &MWord) -> MWord {
        let mut w = self.clone();
        for (&g, &m) in &other.mult {
            w.push(g, m);
        }
        w
    }

    pub fn multiplicity(&self, g: Gen) -> u64 {
        self.mult.get(&g).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Gen, u64)> + '_ {
        self.mult.iter().map(|(&g, &m)| (g, m))
    }

    pub fn size(&self) -> u64 {
        self.mult.values().sum()
    }

    pub fn max_index(&self) -> u32 {
        self.mult.keys().map(|g| g.index).max().unwrap_or(0)
    }

    pub fn is_pedestal(&self) -> bool {
        self.mult.keys().all(|g| g.kind == GenKind::A)
    }

    /// JSON wire format: array of [letter, index, multiplicity] triples.
    pub fn to_json(&self) -> String {
        let triples: Vec<(String, u32, u64)> = self
            .iter()
            .map(|(g, m)| (g.kind.letter().to_string(), g.index, m))
            .collect();
        serde_json::to_string(&triples).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<MWord, crate::Error> {
        let triples: Vec<(String, u32, u64)> = serde_json::from_str(text)
            .map_err(|e| crate::Error::Malformed(format!("word JSON: {e}")))?;
        let mut w = MWord::default();
        for (letter, index, mult) in triples {
            let kind = GenKind::from_letter(&letter)
                .ok_or_else(|| crate::Error::Malformed(format!("unknown generator {letter:?}")))?;
            if kind == GenKind::A && index == 0 {
                return Err(crate::Error::Malformed("a-generator with index 0".into()));
            }
            w.push(Gen::new(kind, index), mult);
        }
        Ok(w)
    }
}

impl fmt::Display for MWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mult.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(g, m)| {
                if m == 1 {
                    format!("{}{}", g.kind.letter(), g.index)
                } else {
                    format!("{}*{}{}", m, g.kind.letter(), g.index)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for MWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The order-unit u = x_0 + y_0.
pub fn order_unit() -> MWord {
    MWord::from_pairs([(Gen::x(0), 1), (Gen::y(0), 1)])
}

/// The state homomorphism: every generator at index n takes value 2^{−n}.
/// Constant on congruence classes.
pub fn state_value(w: &MWord) -> Q {
    let mut acc = Q::zero();
    for (g, m) in w.iter() {
        acc += pow2(-(g.index as i64)) * Q::from_integer(m.into());
    }
    acc
}

/// A finite commutative monoid presentation: named generators and relation
/// pairs of words (multisets of generator ids).
#[derive(Clone, Debug)]
pub struct MonoidPresentation {
    pub generators: Vec<String>,
    pub relations: Vec<(Vec<(usize, u64)>, Vec<(usize, u64)>)>,
    pub index_bound: u32,
}

#[derive(Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<GraphEdge>,
    partitions: BTreeMap<String, Vec<Vec<usize>>>,
}

#[derive(Deserialize)]
struct GraphEdge {
    source: String,
    range: String,
}

impl MonoidPresentation {
    /// The level/pedestal presentation with generator indices up to `bound`:
    /// `x_0+y_0 = x_0+z_0`, `y_l = y_{l+1}+a_{l+1}`, `z_l = z_{l+1}+a_{l+1}`,
    /// `x_l = x_{l+1}+y_{l+1} = x_{l+1}+z_{l+1}`.
    pub fn leveled(bound: u32) -> MonoidPresentation {
        let mut names = Vec::new();
        let id = |kind: GenKind, i: u32, bound: u32| -> usize {
            match kind {
                GenKind::X => i as usize,
                GenKind::Y => (bound + 1) as usize + i as usize,
                GenKind::Z => 2 * (bound + 1) as usize + i as usize,
                GenKind::A => 3 * (bound + 1) as usize + (i - 1) as usize,
            }
        };
        for kind in [GenKind::X, GenKind::Y, GenKind::Z] {
            for i in 0..=bound {
                names.push(format!("{}{}", kind.letter(), i));
            }
        }
        for i in 1..=bound {
            names.push(format!("a{i}"));
        }
        let mut relations = Vec::new();
        relations.push((
            vec![(id(GenKind::X, 0, bound), 1), (id(GenKind::Y, 0, bound), 1)],
            vec![(id(GenKind::X, 0, bound), 1), (id(GenKind::Z, 0, bound), 1)],
        ));
        for l in 0..bound {
            relations.push((
                vec![(id(GenKind::Y, l, bound), 1)],
                vec![
                    (id(GenKind::Y, l + 1, bound), 1),
                    (id(GenKind::A, l + 1, bound), 1),
                ],
            ));
            relations.push((
                vec![(id(GenKind::Z, l, bound), 1)],
                vec![
                    (id(GenKind::Z, l + 1, bound), 1),
                    (id(GenKind::A, l + 1, bound), 1),
                ],
            ));
            relations.push((
                vec![(id(GenKind::X, l, bound), 1)],
                vec![
                    (id(GenKind::X, l + 1, bound), 1),
                    (id(GenKind::Y, l + 1, bound), 1),
                ],
            ));
            relations.push((
                vec![(id(GenKind::X, l, bound), 1)],
                vec![
                    (id(GenKind::X, l + 1, bound), 1),
                    (id(GenKind::Z, l + 1, bound), 1),
                ],
            ));
        }
        MonoidPresentation {
            generators: names,
            relations,
            index_bound: bound,
        }
    }

    /// Generator id of a symbol inside `leveled(bound)`.
    pub fn leveled_id(&self, g: Gen) -> usize {
        let bound = self.index_bound;
        assert!(g.index <= bound, "generator index beyond presentation bound");
        match g.kind {
            GenKind::X => g.index as usize,
            GenKind::Y => (bound + 1) as usize + g.index as usize,
            GenKind::Z => 2 * (bound + 1) as usize + g.index as usize,
            GenKind::A => 3 * (bound + 1) as usize + (g.index - 1) as usize,
        }
    }

    pub fn word_from_mword(&self, w: &MWord) -> Vec<(usize, u64)> {
        w.iter().map(|(g, m)| (self.leveled_id(g), m)).collect()
    }

    /// Graph-monoid presentation: one generator per vertex, one relation
    /// `v = Σ_{e ∈ X} r(e)` per vertex `v` and group `X` in its partition.
    pub fn from_graph_json(text: &str) -> Result<MonoidPresentation, crate::Error> {
        let graph: GraphJson = serde_json::from_str(text)
            .map_err(|e| crate::Error::Malformed(format!("graph JSON: {e}")))?;
        let vid = |name: &str| -> Result<usize, crate::Error> {
            graph
                .vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| crate::Error::Malformed(format!("unknown vertex {name:?}")))
        };
        let mut relations = Vec::new();
        for (vertex, groups) in &graph.partitions {
            let v = vid(vertex)?;
            for group in groups {
                let mut rhs: BTreeMap<usize, u64> = BTreeMap::new();
                for &edge_id in group {
                    let edge = graph.edges.get(edge_id).ok_or_else(|| {
                        crate::Error::Malformed(format!("edge id {edge_id} out of range"))
                    })?;
                    if edge.source != *vertex {
                        return Err(crate::Error::Malformed(format!(
                            "edge {edge_id} in partition of {vertex:?} has source {:?}",
                            edge.source
                        )));
                    }
                    *rhs.entry(vid(&edge.range)?).or_insert(0) += 1;
                }
                relations.push((vec![(v, 1)], rhs.into_iter().collect()));
            }
        }
        Ok(MonoidPresentation {
            generators: graph.vertices,
            relations,
            index_bound: 0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    #[test]
    fn state_values() {
        assert_eq!(state_value(&MWord::gen(Gen::x(2))), q(1, 4));
        assert_eq!(state_value(&MWord::zero()), qi(0));
        assert_eq!(state_value(&order_unit()), qi(2));
    }

    #[test]
    fn word_json_round_trip() {
        let w = MWord::from_pairs([(Gen::x(0), 1), (Gen::y(0), 1)]);
        assert_eq!(w.to_json(), r#"[["x",0,1],["y",0,1]]"#);
        assert_eq!(MWord::from_json(&w.to_json()).unwrap(), w);
        assert!(MWord::from_json(r#"[["a",0,1]]"#).is_err());
        assert!(MWord::from_json(r#"[["w",0,1]]"#).is_err());
    }

    #[test]
    fn graph_presentation_parses() {
        // Two partition groups at the root vertex, mirroring the basic
        // one-relation separated graph.
        let text = r#"{
            "vertices": ["v", "w1", "w2", "w3"],
            "edges": [
                {"source": "v", "range": "w1"},
                {"source": "v", "range": "w2"},
                {"source": "v", "range": "w1"},
                {"source": "v", "range": "w3"}
            ],
            "partitions": {"v": [[0, 1], [2, 3]]}
        }"#;
        let pres = MonoidPresentation::from_graph_json(text).unwrap();
        assert_eq!(pres.generators.len(), 4);
        assert_eq!(pres.relations.len(), 2);
        // v = w1 + w2 and v = w1 + w3.
        assert_eq!(pres.relations[0], (vec![(0, 1)], vec![(1, 1), (2, 1)]));
        assert_eq!(pres.relations[1], (vec![(0, 1)], vec![(1, 1), (3, 1)]));
    }
}
