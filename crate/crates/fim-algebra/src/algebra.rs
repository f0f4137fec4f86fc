//! The semigroup algebra of the walk-triple monoid over ℚ, with its
//! involution, the corner projections q_{−i,j}, the central projections h_n,
//! and socle-support tests.
//!
//! Elements are stored over canonical triples, so equality of algebra
//! elements is literal equality of the stored association.

use crate::munn::{MunnTriple, NormalWord};
use crate::scalar::{q_to_string, Q};
use num::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgebraElem {
    terms: BTreeMap<MunnTriple, Q>,
}

impl AlgebraElem {
    pub fn zero() -> AlgebraElem {
        AlgebraElem::default()
    }

    pub fn one() -> AlgebraElem {
        AlgebraElem::from_triple(MunnTriple::one())
    }

    pub fn s() -> AlgebraElem {
        AlgebraElem::from_triple(MunnTriple::s())
    }

    pub fn s_star() -> AlgebraElem {
        AlgebraElem::from_triple(MunnTriple::s_star())
    }

    pub fn from_triple(t: MunnTriple) -> AlgebraElem {
        let mut e = AlgebraElem::zero();
        e.add_term(t, Q::one());
        e
    }

    pub fn scalar(c: Q) -> AlgebraElem {
        let mut e = AlgebraElem::zero();
        e.add_term(MunnTriple::one(), c);
        e
    }

    /// s^k (s*)^l s^m with l ≥ k and l ≥ m.
    pub fn monomial(k: u64, l: u64, m: u64) -> AlgebraElem {
        assert!(l >= k && l >= m, "monomial exponents must satisfy l ≥ k, m");
        AlgebraElem::from_triple(MunnTriple::from_normal(&NormalWord { k, l, m }))
    }

    pub fn add_term(&mut self, t: MunnTriple, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(t).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MunnTriple, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, t: &MunnTriple) -> Q {
        self.terms.get(t).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> AlgebraElem {
        if c.is_zero() {
            return AlgebraElem::zero();
        }
        let mut e = AlgebraElem::zero();
        for (t, v) in &self.terms {
            e.add_term(*t, v.clone() * c.clone());
        }
        e
    }

    /// Involution: reverse each triple, conjugate coefficients (identity on ℚ).
    pub fn star(&self) -> AlgebraElem {
        let mut e = AlgebraElem::zero();
        for (t, v) in &self.terms {
            e.add_term(t.star(), v.clone());
        }
        e
    }

    pub fn pow(&self, e: u64) -> AlgebraElem {
        let mut acc = AlgebraElem::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate a polynomial (ascending coefficients) at s.
    pub fn poly_at_s(coeffs: &[Q]) -> AlgebraElem {
        let mut acc = AlgebraElem::zero();
        let mut power = AlgebraElem::one();
        for c in coeffs {
            acc = &acc + &power.scale(c);
            power = &power * &AlgebraElem::s();
        }
        acc
    }

    /// JSON wire format: list of {triple: [lo, hi, end], coeff: "p/q"}.
    pub fn to_json(&self) -> String {
        #[derive(serde::Serialize)]
        struct Term {
            triple: [i64; 3],
            coeff: String,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(t, c)| Term {
                triple: [t.lo, t.hi, t.end],
                coeff: q_to_string(c),
            })
            .collect();
        serde_json::to_string(&terms).expect("serializable")
    }
}

impl Add for &AlgebraElem {
    type Output = AlgebraElem;
    fn add(self, rhs: Self) -> AlgebraElem {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.add_term(*t, c.clone());
        }
        out
    }
}

impl Sub for &AlgebraElem {
    type Output = AlgebraElem;
    fn sub(self, rhs: Self) -> AlgebraElem {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.add_term(*t, -c.clone());
        }
        out
    }
}

impl Neg for &AlgebraElem {
    type Output = AlgebraElem;
    fn neg(self) -> AlgebraElem {
        AlgebraElem::zero().sub(self)
    }
}

impl Mul for &AlgebraElem {
    type Output = AlgebraElem;
    fn mul(self, rhs: Self) -> AlgebraElem {
        let mut out = AlgebraElem::zero();
        for (ta, ca) in &self.terms {
            for (tb, cb) in &rhs.terms {
                out.add_term(ta.mul(tb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl fmt::Debug for AlgebraElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| format!("{} [{}]", q_to_string(c), t))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// s^i(s*)^i − s^{i+1}(s*)^{i+1}.
fn left_chain_gap(i: u64) -> AlgebraElem {
    &AlgebraElem::monomial(i, i, 0) - &AlgebraElem::monomial(i + 1, i + 1, 0)
}

/// (s*)^j s^j − (s*)^{j+1} s^{j+1}.
fn right_chain_gap(j: u64) -> AlgebraElem {
    &AlgebraElem::monomial(0, j, j) - &AlgebraElem::monomial(0, j + 1, j + 1)
}

fn q_proj_uncached(i: u64, j: u64) -> AlgebraElem {
    &left_chain_gap(i) * &right_chain_gap(j)
}

static Q_PROJ_MEMO: OnceLock<RwLock<HashMap<(u64, u64), AlgebraElem>>> = OnceLock::new();
static H_PROJ_MEMO: OnceLock<RwLock<HashMap<u64, AlgebraElem>>> = OnceLock::new();

/// Corner projection q_{−i,j} = (s^i(s*)^i − s^{i+1}(s*)^{i+1})·((s*)^j s^j −
/// (s*)^{j+1} s^{j+1}); a minimal projection.
pub fn q_proj(i: u64, j: u64) -> AlgebraElem {
    let memo = Q_PROJ_MEMO.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(v) = memo.read().expect("lock").get(&(i, j)) {
        return v.clone();
    }
    let v = q_proj_uncached(i, j);
    memo.write().expect("lock").insert((i, j), v.clone());
    v
}

/// Central projection h_n = q_{0,n} + q_{−1,n−1} + ⋯ + q_{−n,0}.
pub fn h_proj(n: u64) -> AlgebraElem {
    let memo = H_PROJ_MEMO.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(v) = memo.read().expect("lock").get(&n) {
        return v.clone();
    }
    let mut acc = AlgebraElem::zero();
    for i in 0..=n {
        acc = &acc + &q_proj(i, n - i);
    }
    memo.write().expect("lock").insert(n, acc.clone());
    acc
}

/// 1 − ss*.
pub fn one_minus_ss() -> AlgebraElem {
    &AlgebraElem::one() - &AlgebraElem::monomial(1, 1, 0)
}

/// 1 − s*s.
pub fn one_minus_sstar_s() -> AlgebraElem {
    &AlgebraElem::one() - &AlgebraElem::monomial(0, 1, 1)
}

/// Matrix unit ε_{ij} (1-based, 1 ≤ i, j ≤ n+1) inside the h_n block.
pub fn epsilon(n: u64, i: u64, j: u64) -> AlgebraElem {
    assert!((1..=n + 1).contains(&i) && (1..=n + 1).contains(&j));
    let corner = q_proj(i - 1, n + 1 - i);
    if i <= j {
        let shift = AlgebraElem::from_triple(MunnTriple::s_star().pow(j - i));
        &corner * &shift
    } else {
        let shift = AlgebraElem::from_triple(MunnTriple::s().pow(i - j));
        &corner * &shift
    }
}

/// Does a lie in the span of the blocks h_0A, …, h_TA? Exactly when
/// a = Σ_{n ≤ T} h_n·a.
pub fn is_socle_supported(a: &AlgebraElem, truncation: u64) -> bool {
    let mut acc = AlgebraElem::zero();
    for n in 0..=truncation {
        acc = &acc + &(&h_proj(n) * a);
    }
    acc == *a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn ss() -> AlgebraElem {
        AlgebraElem::monomial(1, 1, 0)
    }

    fn sstar_s() -> AlgebraElem {
        AlgebraElem::monomial(0, 1, 1)
    }

    #[test]
    fn ring_identities() {
        let p = one_minus_ss();
        assert_eq!(&p * &p, p);
        // ss*s = s.
        let lhs = &(&AlgebraElem::s() * &AlgebraElem::s_star()) * &AlgebraElem::s();
        assert!((&lhs - &AlgebraElem::s()).is_zero());
        // Commuting projections.
        let a = &ss() * &sstar_s();
        let b = &sstar_s() * &ss();
        assert!((&a - &b).is_zero());
    }

    #[test]
    fn q_proj_zero_zero_has_four_terms() {
        let q00 = q_proj(0, 0);
        let expect = &one_minus_ss() * &one_minus_sstar_s();
        assert_eq!(q00, expect);
        assert_eq!(q00.num_terms(), 4);
        assert_eq!(&q00 * &q00, q00);
    }

    #[test]
    fn q_proj_orthogonality() {
        for i in 0..=3u64 {
            for j in 0..=(3 - i) {
                for i2 in 0..=3u64 {
                    for j2 in 0..=(3 - i2) {
                        let prod = &q_proj(i, j) * &q_proj(i2, j2);
                        if (i, j) == (i2, j2) {
                            assert_eq!(prod, q_proj(i, j));
                        } else {
                            assert!(prod.is_zero(), "q({i},{j})·q({i2},{j2})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn q_proj_self_adjoint() {
        for (i, j) in [(0, 0), (1, 2), (2, 1), (0, 3)] {
            let p = q_proj(i, j);
            assert_eq!(p.star(), p);
        }
    }

    #[test]
    fn h_proj_basics() {
        assert_eq!(h_proj(0), &one_minus_ss() * &one_minus_sstar_s());
        // Central: commutes with s, to a useful depth.
        for n in 0..=8u64 {
            let h = h_proj(n);
            let lhs = &h * &AlgebraElem::s();
            let rhs = &AlgebraElem::s() * &h;
            assert!((&lhs - &rhs).is_zero(), "h_{n} s ≠ s h_{n}");
        }
        for n in 0..=6u64 {
            for m in 0..=6u64 {
                let prod = &h_proj(n) * &h_proj(m);
                if n == m {
                    assert_eq!(prod, h_proj(n));
                } else {
                    assert!(prod.is_zero());
                }
            }
        }
    }

    #[test]
    fn chain_of_projections_decreases() {
        // e ≥ f as idempotents: ef = fe = f; checked along s^i(s*)^i.
        let mut prev = AlgebraElem::one();
        for i in 1..=6u64 {
            let cur = AlgebraElem::monomial(i, i, 0);
            assert_eq!(&prev * &cur, cur);
            assert_eq!(&cur * &prev, cur);
            prev = cur;
        }
        let mut prev = AlgebraElem::one();
        for i in 1..=6u64 {
            let cur = AlgebraElem::monomial(0, i, i);
            assert_eq!(&prev * &cur, cur);
            assert_eq!(&cur * &prev, cur);
            prev = cur;
        }
    }

    #[test]
    fn shift_identities() {
        // s^i (s*)^i s = s s^{i−1} (s*)^{i−1} for i ≤ 6.
        for i in 1..=6u64 {
            let lhs = &AlgebraElem::monomial(i, i, 0) * &AlgebraElem::s();
            let rhs = &AlgebraElem::s() * &AlgebraElem::monomial(i - 1, i - 1, 0);
            assert!((&lhs - &rhs).is_zero(), "i = {i}");
        }
    }

    #[test]
    fn matrix_units_multiply() {
        for n in 0..=5u64 {
            // ε_{ij} ε_{jk} = ε_{ik}; Σ ε_{ii} = h_n.
            for i in 1..=n + 1 {
                for j in 1..=n + 1 {
                    for k in 1..=n + 1 {
                        let prod = &epsilon(n, i, j) * &epsilon(n, j, k);
                        assert_eq!(prod, epsilon(n, i, k), "n={n} i={i} j={j} k={k}");
                    }
                }
            }
            let mut diag = AlgebraElem::zero();
            for i in 1..=n + 1 {
                diag = &diag + &epsilon(n, i, i);
            }
            assert_eq!(diag, h_proj(n));
        }
    }

    #[test]
    fn matrix_unit_two_sided_form() {
        // q_{1−i,n+1−i}(s*)^{j−i} = (s*)^{j−i} q_{1−j,n+1−j} for i ≤ j.
        for n in 1..=4u64 {
            for i in 1..=n + 1 {
                for j in i..=n + 1 {
                    let left = epsilon(n, i, j);
                    let shift = AlgebraElem::from_triple(MunnTriple::s_star().pow(j - i));
                    let right = &shift * &q_proj(j - 1, n + 1 - j);
                    assert_eq!(left, right, "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn socle_support() {
        assert!(is_socle_supported(&q_proj(1, 2), 3));
        assert!(is_socle_supported(&AlgebraElem::zero(), 0));
        for t in 0..4u64 {
            assert!(!is_socle_supported(&AlgebraElem::s(), t), "T = {t}");
        }
    }

    #[test]
    fn scalar_and_ops() {
        let two_s = AlgebraElem::s().scale(&qi(2));
        assert_eq!(&two_s - &AlgebraElem::s(), AlgebraElem::s());
        let p = AlgebraElem::poly_at_s(&[qi(1), qi(0), qi(1)]);
        // 1 + s².
        assert_eq!(p.coefficient(&MunnTriple::one()), qi(1));
        assert_eq!(p.coefficient(&MunnTriple::s().pow(2)), qi(1));
        assert_eq!(p.num_terms(), 2);
    }
}
