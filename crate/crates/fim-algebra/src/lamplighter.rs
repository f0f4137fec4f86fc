//! The wreath-product group algebra over ℚ: finitely many lamps on ℤ and a
//! shift, with the averaging idempotents at each lamp. The partial isometry
//! built from the lamp-0 idempotent and the shift embeds the walk-triple
//! algebra, and the coefficient-at-identity trace gives an independent oracle
//! for the weighted ranks of its projections.

use crate::algebra::AlgebraElem;
use crate::scalar::{pow2, q, q_to_string, Q};
use num::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A group element: the set of switched-on lamps and the shift.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LampElem {
    pub lamps: BTreeSet<i64>,
    pub shift: i64,
}

impl LampElem {
    pub fn identity() -> LampElem {
        LampElem {
            lamps: BTreeSet::new(),
            shift: 0,
        }
    }

    pub fn lamp(i: i64) -> LampElem {
        LampElem {
            lamps: [i].into_iter().collect(),
            shift: 0,
        }
    }

    pub fn shift_by(k: i64) -> LampElem {
        LampElem {
            lamps: BTreeSet::new(),
            shift: k,
        }
    }

    /// Group law: the left shift conjugates the right factor's lamps
    /// (t^k a_i t^{−k} = a_{i−k}), lamp sets combine by symmetric difference.
    pub fn mul(&self, other: &LampElem) -> LampElem {
        let mut lamps = self.lamps.clone();
        for &i in &other.lamps {
            let j = i - self.shift;
            if !lamps.insert(j) {
                lamps.remove(&j);
            }
        }
        LampElem {
            lamps,
            shift: self.shift + other.shift,
        }
    }

    pub fn inverse(&self) -> LampElem {
        LampElem {
            lamps: self.lamps.iter().map(|&i| i + self.shift).collect(),
            shift: -self.shift,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.lamps.is_empty() && self.shift == 0
    }
}

impl fmt::Display for LampElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> = self.lamps.iter().map(|i| format!("a({i})")).collect();
        if self.shift != 0 {
            parts.push(if self.shift == 1 {
                "t".to_string()
            } else {
                format!("t^{}", self.shift)
            });
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// An element of the group algebra: finite rational combination of group
/// elements.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct GroupAlgElem {
    terms: BTreeMap<LampElem, Q>,
}

impl GroupAlgElem {
    pub fn zero() -> GroupAlgElem {
        GroupAlgElem::default()
    }

    pub fn one() -> GroupAlgElem {
        GroupAlgElem::from_group(LampElem::identity())
    }

    pub fn from_group(g: LampElem) -> GroupAlgElem {
        let mut e = GroupAlgElem::default();
        e.add_term(g, Q::one());
        e
    }

    pub fn add_term(&mut self, g: LampElem, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(g) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &GroupAlgElem) -> GroupAlgElem {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GroupAlgElem) -> GroupAlgElem {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Q) -> GroupAlgElem {
        let mut out = GroupAlgElem::default();
        if k.is_zero() {
            return out;
        }
        for (g, c) in &self.terms {
            out.add_term(g.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn mul(&self, other: &GroupAlgElem) -> GroupAlgElem {
        let mut out = GroupAlgElem::default();
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                out.add_term(g.mul(h), a.clone() * b.clone());
            }
        }
        out
    }

    /// The involution: inverse on group elements, conjugation (identity over
    /// ℚ) on coefficients.
    pub fn star(&self) -> GroupAlgElem {
        let mut out = GroupAlgElem::default();
        for (g, c) in &self.terms {
            out.add_term(g.inverse(), c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The canonical trace restricted to the group algebra: the coefficient
    /// of the identity element.
    pub fn trace(&self) -> Q {
        self.terms
            .get(&LampElem::identity())
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn pow(&self, e: u64) -> GroupAlgElem {
        let mut acc = GroupAlgElem::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Debug for GroupAlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, c)| format!("{} {}", q_to_string(c), g))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The averaging idempotent at lamp i: (1 + a_i)/2.
pub fn e_idem(i: i64) -> GroupAlgElem {
    let mut out = GroupAlgElem::default();
    out.add_term(LampElem::identity(), q(1, 2));
    out.add_term(LampElem::lamp(i), q(1, 2));
    out
}

/// f_i = 1 − e_i.
pub fn f_idem(i: i64) -> GroupAlgElem {
    GroupAlgElem::one().sub(&e_idem(i))
}

/// The embedded generator: e_0·t.
pub fn s_tilde() -> GroupAlgElem {
    e_idem(0).mul(&GroupAlgElem::from_group(LampElem::shift_by(1)))
}

/// The star-homomorphism determined by s ↦ e_0 t, extended term by term via
/// the exponent normal form.
pub fn embed_a(a: &AlgebraElem) -> GroupAlgElem {
    let s = s_tilde();
    let s_star = s.star();
    let mut out = GroupAlgElem::default();
    for (t, c) in a.terms() {
        let n = t.to_normal();
        let mut acc = GroupAlgElem::one();
        for _ in 0..n.k {
            acc = acc.mul(&s);
        }
        for _ in 0..n.l {
            acc = acc.mul(&s_star);
        }
        for _ in 0..n.m {
            acc = acc.mul(&s);
        }
        out = out.add(&acc.scale(c));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct EmbeddingReport {
    pub corner_bound: u64,
    pub central_bound: u64,
    pub product_identity: bool,
    pub idempotence: bool,
    pub corner_traces: bool,
    pub central_traces: bool,
    pub representation_agreement: bool,
    pub central_trace_total: String,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.product_identity
            && self.idempotence
            && self.corner_traces
            && self.central_traces
            && self.representation_agreement
    }
}

/// For all i+j ≤ corner_bound: the image of q_{−i,j} equals
/// f_{−i}·(e_{−i+1}⋯e_j)·f_{j+1} in the group algebra, is idempotent, and has
/// trace 2^{−(i+j+2)}; for n ≤ central_bound the central projections have
/// trace (n+1)·2^{−(n+2)}. Every trace is cross-checked against the weighted
/// rank computed from the truncated representation.
pub fn verify_embedding_suite(corner_bound: u64, central_bound: u64) -> EmbeddingReport {
    let mut product_identity = true;
    let mut idempotence = true;
    let mut corner_traces = true;
    let mut central_traces = true;
    let mut representation_agreement = true;

    for total in 0..=corner_bound {
        for i in 0..=total {
            let j = total - i;
            let phi = embed_a(&crate::algebra::q_proj(i, j));

            // f_{−i}(e_{−i+1}⋯e_{−1}e_0e_1⋯e_j)f_{j+1}.
            let mut middle = GroupAlgElem::one();
            let mut col = -(i as i64) + 1;
            while col <= j as i64 {
                middle = middle.mul(&e_idem(col));
                col += 1;
            }
            let direct = f_idem(-(i as i64)).mul(&middle).mul(&f_idem(j as i64 + 1));
            if phi != direct {
                product_identity = false;
            }
            if phi.mul(&phi) != phi {
                idempotence = false;
            }
            let expected = pow2(-(i as i64 + j as i64 + 2));
            if phi.trace() != expected {
                corner_traces = false;
            }
            // The representation-side weighted rank must agree exactly.
            let t = 2 * (i + j) as usize + 4;
            let rank = crate::repr::vn_rank(&crate::repr::represent(
                &crate::algebra::q_proj(i, j),
                t,
            ));
            if rank.exact != Some(expected) {
                representation_agreement = false;
            }
        }
    }

    let mut total_trace = Q::zero();
    for n in 0..=central_bound {
        let phi = embed_a(&crate::algebra::h_proj(n));
        let expected = Q::from_integer((n + 1).into()) * pow2(-(n as i64 + 2));
        let tr = phi.trace();
        if tr != expected {
            central_traces = false;
        }
        total_trace += tr;
        let t = 2 * n as usize + 4;
        let rank = crate::repr::vn_rank(&crate::repr::represent(&crate::algebra::h_proj(n), t));
        if rank.exact != Some(expected) {
            representation_agreement = false;
        }
    }

    EmbeddingReport {
        corner_bound,
        central_bound,
        product_identity,
        idempotence,
        corner_traces,
        central_traces,
        representation_agreement,
        central_trace_total: q_to_string(&total_trace),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{h_proj, q_proj};
    use crate::scalar::qi;

    #[test]
    fn group_law() {
        // t^{−1} a_0 t = a_1.
        let t = LampElem::shift_by(1);
        let t_inv = LampElem::shift_by(-1);
        let a0 = LampElem::lamp(0);
        assert_eq!(t_inv.mul(&a0).mul(&t), LampElem::lamp(1));
        // Lamps are involutions and commute.
        assert_eq!(a0.mul(&a0), LampElem::identity());
        let a1 = LampElem::lamp(1);
        assert_eq!(a0.mul(&a1), a1.mul(&a0));
        // Inverses.
        let g = LampElem {
            lamps: [-2, 1].into_iter().collect(),
            shift: 3,
        };
        assert_eq!(g.mul(&g.inverse()), LampElem::identity());
        assert_eq!(g.inverse().mul(&g), LampElem::identity());
    }

    #[test]
    fn display_form() {
        let g = LampElem {
            lamps: [-1, 0].into_iter().collect(),
            shift: 3,
        };
        assert_eq!(g.to_string(), "a(-1) a(0) t^3");
        assert_eq!(LampElem::identity().to_string(), "1");
    }

    #[test]
    fn embedded_generator_projections() {
        let s = s_tilde();
        // s̃ s̃* = e_0 and s̃* s̃ = e_1.
        assert_eq!(s.mul(&s.star()), e_idem(0));
        assert_eq!(s.star().mul(&s), e_idem(1));
        // s̃^i (s̃*)^i = e_{−i+1}⋯e_0.
        for i in 1..=4u64 {
            let lhs = s.pow(i).mul(&s.star().pow(i));
            let mut rhs = GroupAlgElem::one();
            for c in (-(i as i64) + 1)..=0 {
                rhs = rhs.mul(&e_idem(c));
            }
            assert_eq!(lhs, rhs, "i = {i}");
        }
    }

    #[test]
    fn embed_is_star_homomorphism() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mut a = AlgebraElem::zero();
            let mut b = AlgebraElem::zero();
            for _ in 0..2 {
                let lo = rng.gen_range(-2..=0i64);
                let hi = rng.gen_range(0..=2i64);
                let end = rng.gen_range(lo..=hi);
                a.add_term(crate::munn::MunnTriple::new(lo, hi, end), qi(rng.gen_range(-2..=2)));
                let lo = rng.gen_range(-2..=0i64);
                let hi = rng.gen_range(0..=2i64);
                let end = rng.gen_range(lo..=hi);
                b.add_term(crate::munn::MunnTriple::new(lo, hi, end), qi(rng.gen_range(-2..=2)));
            }
            assert_eq!(embed_a(&(&a * &b)), embed_a(&a).mul(&embed_a(&b)));
            assert_eq!(embed_a(&a.star()), embed_a(&a).star());
            assert_eq!(embed_a(&(&a + &b)), embed_a(&a).add(&embed_a(&b)));
        }
    }

    #[test]
    fn trace_properties() {
        assert_eq!(GroupAlgElem::one().trace(), qi(1));
        assert_eq!(e_idem(0).trace(), q(1, 2));
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let mut x = GroupAlgElem::zero();
            let mut y = GroupAlgElem::zero();
            for _ in 0..3 {
                let g = LampElem {
                    lamps: (0..rng.gen_range(0..3))
                        .map(|_| rng.gen_range(-2..=2))
                        .collect(),
                    shift: rng.gen_range(-2..=2),
                };
                x.add_term(g, qi(rng.gen_range(-3..=3)));
                let g = LampElem {
                    lamps: (0..rng.gen_range(0..3))
                        .map(|_| rng.gen_range(-2..=2))
                        .collect(),
                    shift: rng.gen_range(-2..=2),
                };
                y.add_term(g, qi(rng.gen_range(-3..=3)));
            }
            assert_eq!(x.mul(&y).trace(), y.mul(&x).trace());
        }
    }

    #[test]
    fn corner_trace_values() {
        assert_eq!(embed_a(&q_proj(0, 0)).trace(), q(1, 4));
        assert_eq!(embed_a(&q_proj(1, 2)).trace(), pow2(-5));
        assert_eq!(embed_a(&h_proj(2)).trace(), q(3, 16));
    }

    #[test]
    fn oracle_agreement_catalog() {
        // Projections from the catalog have matching trace and weighted rank.
        let t = 16;
        let catalog: Vec<AlgebraElem> = vec![
            AlgebraElem::monomial(1, 1, 0),
            AlgebraElem::monomial(0, 1, 1),
            AlgebraElem::monomial(3, 3, 0),
            q_proj(2, 1),
            h_proj(3),
        ];
        for p in catalog {
            let tr = embed_a(&p).trace();
            let rank = crate::repr::vn_rank(&crate::repr::represent(&p, t));
            assert_eq!(rank.exact, Some(tr), "catalog element {p:?}");
        }
    }

    #[test]
    fn embedding_suite_small() {
        let report = verify_embedding_suite(4, 4);
        assert!(report.passed(), "{report:#?}");
    }
}
