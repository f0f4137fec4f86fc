//! Truncated product representation: the algebra maps into ∏_{n≤T} M_{n+1}(ℚ)
//! with the generator going to the lower shift in every component. Exact rank
//! sequences, the 2^{−(n+2)}-weighted rank with certified affine-periodic
//! tail patterns, and localization inverses all live here.

use crate::algebra::AlgebraElem;
use crate::error::Error;
use crate::matrix::ExactMatrix;
use crate::par;
use crate::scalar::{pow2, q_to_string, Q};
use crate::series::{Poly, RationalSeries};
use num::{One, Zero};
use serde::Serialize;

/// Componentwise image of an expression at truncation T: component n is a
/// d(n+1) × d(n+1) exact matrix (d = block size, 1 for plain elements).
#[derive(Clone, PartialEq, Debug)]
pub struct TruncatedRep {
    block: usize,
    components: Vec<ExactMatrix>,
}

impl TruncatedRep {
    pub fn from_components(components: Vec<ExactMatrix>) -> TruncatedRep {
        for (n, c) in components.iter().enumerate() {
            assert_eq!(c.rows(), n + 1, "component {n} has wrong size");
            assert_eq!(c.cols(), n + 1, "component {n} has wrong size");
        }
        TruncatedRep {
            block: 1,
            components,
        }
    }

    pub fn truncation(&self) -> usize {
        self.components.len() - 1
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn component(&self, n: usize) -> &ExactMatrix {
        &self.components[n]
    }

    pub fn components(&self) -> &[ExactMatrix] {
        &self.components
    }

    pub fn identity(truncation: usize) -> TruncatedRep {
        TruncatedRep::from_components(
            (0..=truncation).map(|n| ExactMatrix::identity(n + 1)).collect(),
        )
    }

    pub fn zero(truncation: usize) -> TruncatedRep {
        TruncatedRep::from_components(
            (0..=truncation).map(|n| ExactMatrix::zero(n + 1, n + 1)).collect(),
        )
    }

    fn zip(&self, other: &TruncatedRep, f: impl Fn(&ExactMatrix, &ExactMatrix) -> ExactMatrix + Sync) -> TruncatedRep {
        assert_eq!(self.truncation(), other.truncation(), "truncation mismatch");
        assert_eq!(self.block, other.block, "block mismatch");
        let comps = par::map_components(self.components.len(), |n| {
            f(&self.components[n], &other.components[n])
        });
        TruncatedRep {
            block: self.block,
            components: comps,
        }
    }

    pub fn add(&self, other: &TruncatedRep) -> TruncatedRep {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &TruncatedRep) -> TruncatedRep {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &TruncatedRep) -> TruncatedRep {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, k: &Q) -> TruncatedRep {
        TruncatedRep {
            block: self.block,
            components: self.components.iter().map(|c| c.scale(k)).collect(),
        }
    }

    /// The involution: conjugate transpose (plain transpose over ℚ).
    pub fn adjoint(&self) -> TruncatedRep {
        TruncatedRep {
            block: self.block,
            components: self.components.iter().map(|c| c.transpose()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// Componentwise exact inverse; reports the first singular component.
    pub fn inverse(&self) -> Result<TruncatedRep, Error> {
        let comps = par::map_components(self.components.len(), |n| {
            self.components[n]
                .inverse()
                .ok_or(Error::SingularComponent { component: n })
        });
        let mut out = Vec::with_capacity(comps.len());
        for c in comps {
            out.push(c?);
        }
        Ok(TruncatedRep {
            block: self.block,
            components: out,
        })
    }

    /// Assemble a d×d block matrix over the algebra into one representation
    /// with components of size d(n+1).
    pub fn from_blocks(blocks: &[Vec<TruncatedRep>]) -> TruncatedRep {
        let d = blocks.len();
        assert!(d > 0 && blocks.iter().all(|row| row.len() == d));
        let t = blocks[0][0].truncation();
        for row in blocks {
            for b in row {
                assert_eq!(b.truncation(), t);
                assert_eq!(b.block, 1, "nested blocks are not supported");
            }
        }
        let components = (0..=t)
            .map(|n| {
                let size = n + 1;
                let mut m = ExactMatrix::zero(d * size, d * size);
                for (br, row) in blocks.iter().enumerate() {
                    for (bc, block) in row.iter().enumerate() {
                        for (r, c, v) in block.components[n].iter() {
                            m.set(br * size + r, bc * size + c, v.clone());
                        }
                    }
                }
                m
            })
            .collect();
        TruncatedRep {
            block: d,
            components,
        }
    }
}

/// Image of an algebra element at truncation T. In component n the generator
/// acts as the (n+1)-dimensional lower shift; a monomial s^k (s*)^l s^m sends
/// basis vector i to basis vector i + k + m − l under the walk constraints.
pub fn represent(a: &AlgebraElem, truncation: usize) -> TruncatedRep {
    let terms: Vec<(u64, u64, u64, Q)> = a
        .terms()
        .map(|(t, c)| {
            let n = t.to_normal();
            (n.k, n.l, n.m, c.clone())
        })
        .collect();
    let components = par::map_components(truncation + 1, |n| {
        let size = n + 1;
        let mut m = ExactMatrix::zero(size, size);
        for (k, l, mm, c) in &terms {
            let (k, l, mm) = (*k as i64, *l as i64, *mm as i64);
            for i in 1..=(size as i64) {
                let mid = i + mm;
                let low = mid - l;
                let out = low + k;
                if mid <= size as i64 && low >= 1 && out <= size as i64 {
                    let prev = m.get(out as usize - 1, i as usize - 1);
                    m.set(out as usize - 1, i as usize - 1, prev + c.clone());
                }
            }
        }
        m
    });
    TruncatedRep {
        block: 1,
        components,
    }
}

/// Exact rank of every component.
pub fn rank_sequence(rep: &TruncatedRep) -> Vec<usize> {
    par::map_components(rep.components.len(), |n| rep.components[n].rank())
}

/// One residue class of the certified rank law: rank_n = alpha·(n+1) + beta.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueLaw {
    pub alpha: String,
    pub beta: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankPattern {
    pub start: usize,
    pub period: usize,
    pub residues: Vec<ResidueLaw>,
}

/// Weighted rank at truncation T: `partial` sums rank_n·2^{−(n+2)} over the
/// computed components, `tail_bound` is the worst case for the rest, and
/// `exact` is emitted only when an affine-periodic rank law verifies on every
/// computed component from `pattern.start` on.
#[derive(Clone, Debug)]
pub struct RankResult {
    pub partial: Q,
    pub tail_bound: Q,
    pub pattern: Option<RankPattern>,
    pub exact: Option<Q>,
}

impl RankResult {
    /// Certified enclosure: collapses to a point once the pattern verifies.
    pub fn enclosure(&self) -> (Q, Q) {
        match &self.exact {
            Some(e) => (e.clone(), e.clone()),
            None => (self.partial.clone(), self.partial.clone() + self.tail_bound.clone()),
        }
    }
}

const MAX_PATTERN_PERIOD: usize = 8;

fn fit_residue(samples: &[(usize, usize)]) -> Option<(Q, Q)> {
    // rank = alpha (n+1) + beta through the first two samples, verified on the rest.
    if samples.len() < 2 {
        return None;
    }
    let (n1, r1) = samples[0];
    let (n2, r2) = samples[1];
    let alpha = (crate::scalar::qi(r2 as i64) - crate::scalar::qi(r1 as i64))
        / (crate::scalar::qi(n2 as i64) - crate::scalar::qi(n1 as i64));
    let beta = crate::scalar::qi(r1 as i64) - alpha.clone() * crate::scalar::qi(n1 as i64 + 1);
    for &(n, r) in &samples[2..] {
        let predicted = alpha.clone() * crate::scalar::qi(n as i64 + 1) + beta.clone();
        if predicted != crate::scalar::qi(r as i64) {
            return None;
        }
    }
    Some((alpha, beta))
}

/// Closed form of Σ_{j≥0} (alpha·(n+1) + beta)·2^{−(n+2)} over n = first + jN.
fn residue_tail_sum(alpha: &Q, beta: &Q, first: usize, period: usize) -> Q {
    let q = pow2(-(period as i64));
    let one_minus_q = Q::one() - q.clone();
    let head = pow2(-(first as i64 + 2));
    let linear = (alpha.clone() * crate::scalar::qi(first as i64 + 1) + beta.clone())
        / one_minus_q.clone();
    let growth = alpha.clone() * crate::scalar::qi(period as i64) * q.clone()
        / (one_minus_q.clone() * one_minus_q);
    head * (linear + growth)
}

/// Weighted rank with pattern certification.
pub fn vn_rank(rep: &TruncatedRep) -> RankResult {
    let ranks = rank_sequence(rep);
    vn_rank_of_sequence(&ranks, rep.block)
}

pub fn vn_rank_of_sequence(ranks: &[usize], block: usize) -> RankResult {
    let t = ranks.len() - 1;
    let mut partial = Q::zero();
    for (n, &r) in ranks.iter().enumerate() {
        partial += crate::scalar::qi(r as i64) * pow2(-(n as i64 + 2));
    }
    // Σ_{n>T} d(n+1)2^{−(n+2)} = d(T+3)2^{−(T+2)}.
    let tail_bound = crate::scalar::qi(block as i64)
        * crate::scalar::qi(t as i64 + 3)
        * pow2(-(t as i64 + 2));

    let mut found: Option<(usize, usize, Vec<(Q, Q)>)> = None;
    'search: for period in 1..=MAX_PATTERN_PERIOD.min(t.max(1)) {
        'starts: for start in 0..=t / 2 {
            let mut laws = Vec::with_capacity(period);
            for r in 0..period {
                let samples: Vec<(usize, usize)> = (start..=t)
                    .filter(|n| (n - start) % period == r)
                    .map(|n| (n, ranks[n]))
                    .collect();
                if samples.len() < 3 {
                    continue 'starts;
                }
                match fit_residue(&samples) {
                    Some((alpha, beta)) => {
                        // Slopes stay within the block size.
                        if alpha < Q::zero() || alpha > crate::scalar::qi(block as i64) {
                            continue 'starts;
                        }
                        laws.push((alpha, beta));
                    }
                    None => continue 'starts,
                }
            }
            found = Some((start, period, laws));
            break 'search;
        }
    }

    let (pattern, exact) = match found {
        None => (None, None),
        Some((start, period, laws)) => {
            let mut exact = Q::zero();
            for (n, &r) in ranks.iter().enumerate().take(start) {
                exact += crate::scalar::qi(r as i64) * pow2(-(n as i64 + 2));
            }
            for (r, (alpha, beta)) in laws.iter().enumerate() {
                exact += residue_tail_sum(alpha, beta, start + r, period);
            }
            let pattern = RankPattern {
                start,
                period,
                residues: laws
                    .iter()
                    .map(|(a, b)| ResidueLaw {
                        alpha: q_to_string(a),
                        beta: q_to_string(b),
                    })
                    .collect(),
            };
            (Some(pattern), Some(exact))
        }
    };

    if let Some(e) = &exact {
        assert!(
            *e >= partial && *e <= partial.clone() + tail_bound.clone(),
            "certified value escapes the enclosure"
        );
    }
    RankResult {
        partial,
        tail_bound,
        pattern,
        exact,
    }
}

/// Componentwise inverse of f(s) for a polynomial with f(0) = 1: every
/// component is unipotent lower-triangular, inverted by the finite geometric
/// series.
pub fn localize_inverse(f: &Poly, truncation: usize) -> Result<TruncatedRep, Error> {
    if !f.coeff(0).is_one() {
        return Err(Error::Precondition(
            "localization needs constant term 1".into(),
        ));
    }
    let rep = represent(&AlgebraElem::poly_at_s(f.coeffs()), truncation);
    let comps = par::map_components(truncation + 1, |n| rep.components[n].unipotent_inverse());
    let mut out = Vec::with_capacity(comps.len());
    for c in comps {
        out.push(c?);
    }
    Ok(TruncatedRep {
        block: 1,
        components: out,
    })
}

/// Componentwise inverse of f(s)* (upper unipotent).
pub fn adjoint_inverse(f: &Poly, truncation: usize) -> Result<TruncatedRep, Error> {
    if !f.coeff(0).is_one() {
        return Err(Error::Precondition(
            "localization needs constant term 1".into(),
        ));
    }
    let rep = represent(&AlgebraElem::poly_at_s(f.coeffs()), truncation).adjoint();
    let comps = par::map_components(truncation + 1, |n| rep.components[n].unipotent_inverse());
    let mut out = Vec::with_capacity(comps.len());
    for c in comps {
        out.push(c?);
    }
    Ok(TruncatedRep {
        block: 1,
        components: out,
    })
}

#[derive(Debug, Serialize)]
pub struct InverseFormulaReport {
    pub degree: usize,
    pub checked_from: usize,
    pub truncation: usize,
    pub all_equal: bool,
    pub failures: Vec<usize>,
}

/// Exact verification of the adjoint-inverse congruence: with
/// f_1(x) = a_n + a_{n−1}x + ⋯ + a_1 x^{n−1} + x^n and
/// P_i(x) = −Σ_{j≤i} a_{n−j} x^{i−j},
///
///   (f(s)*)^{−1} = f_1(s)^{−1} s^n − Σ_i f_1(s)^{−1} s^i (1−ss*) P_i(s)* (f(s)*)^{−1}
///
/// holds exactly in every component of size ≥ n.
pub fn verify_inverse_formula(f: &Poly, truncation: usize) -> Result<InverseFormulaReport, Error> {
    let n = match f.deg() {
        Some(d) if d >= 1 => d,
        _ => {
            return Err(Error::Precondition(
                "adjoint-inverse formula needs degree ≥ 1".into(),
            ))
        }
    };
    if !f.coeff(0).is_one() {
        return Err(Error::Precondition("constant term must be 1".into()));
    }
    let a = |i: usize| f.coeff(i);

    // f_1 = a_n + a_{n−1}x + … + a_1 x^{n−1} + x^n.
    let f1 = Poly::new((0..=n).map(|i| if i == n { Q::one() } else { a(n - i) }).collect());
    let lead = f1.coeff(0);
    debug_assert!(!lead.is_zero());
    // f_1(s)^{−1} via the unipotent inverse of f_1/a_n.
    let f1_scaled = f1.scale(&(Q::one() / lead.clone()));
    let f1_inv = localize_inverse(&f1_scaled, truncation)?.scale(&(Q::one() / lead));

    let fstar_inv = adjoint_inverse(f, truncation)?;
    let s_rep = represent(&AlgebraElem::s(), truncation);
    let one_minus_ss = represent(&crate::algebra::one_minus_ss(), truncation);

    let mut rhs = f1_inv.mul(&power(&s_rep, n));
    for i in 0..n {
        // P_i(x) = −Σ_{j=0}^{i} a_{n−j} x^{i−j}.
        let mut coeffs = vec![Q::zero(); i + 1];
        for j in 0..=i {
            coeffs[i - j] = -a(n - j);
        }
        let p_i = represent(&AlgebraElem::poly_at_s(&coeffs), truncation).adjoint();
        let term = f1_inv
            .mul(&power(&s_rep, i))
            .mul(&one_minus_ss)
            .mul(&p_i)
            .mul(&fstar_inv);
        rhs = rhs.sub(&term);
    }

    let checked_from = n.saturating_sub(1);
    let mut failures = Vec::new();
    for m in checked_from..=truncation {
        if fstar_inv.component(m) != rhs.component(m) {
            failures.push(m);
        }
    }
    Ok(InverseFormulaReport {
        degree: n,
        checked_from,
        truncation,
        all_equal: failures.is_empty(),
        failures,
    })
}

pub fn power(rep: &TruncatedRep, e: usize) -> TruncatedRep {
    let mut acc = TruncatedRep::identity(rep.truncation());
    for _ in 0..e {
        acc = acc.mul(rep);
    }
    acc
}

#[derive(Debug, Serialize)]
pub struct BasisProbeSample {
    pub i: usize,
    pub k: usize,
    pub shift: usize,
    pub f: String,
    pub checked_from: usize,
    pub single_entry_everywhere: bool,
    pub coefficients_match: bool,
}

/// For 𝔣 = s^j f^{−1}, the element (s*)^i (1−s*s) 𝔣 (1−ss*) (s*)^k has, in
/// each large-enough component n, the single entry β_{n−j} at position
/// (n+1−i, k+1), where f^{−1} = Σ β_l x^l. Checked exactly against the
/// series expansion.
pub fn basis_independence_probe(
    samples: &[(usize, usize, usize, Poly)],
    truncation: usize,
) -> Result<Vec<BasisProbeSample>, Error> {
    let mut out = Vec::new();
    for (i, k, j, f) in samples {
        let finv = RationalSeries::inverse_of_poly(f)?;
        let betas = finv.coeffs(truncation + 1);
        let s_star = represent(&AlgebraElem::s_star(), truncation);
        let left = power(&s_star, *i)
            .mul(&represent(&crate::algebra::one_minus_sstar_s(), truncation));
        let middle = power(&represent(&AlgebraElem::s(), truncation), *j)
            .mul(&localize_inverse(f, truncation)?);
        let right = represent(&crate::algebra::one_minus_ss(), truncation)
            .mul(&power(&s_star, *k));
        let b = left.mul(&middle).mul(&right);

        let checked_from = (*j + 1).max(*i).max(*k);
        let mut single = true;
        let mut coeffs_ok = true;
        for n in checked_from..=truncation {
            let comp = b.component(n);
            let mut expected = ExactMatrix::zero(n + 1, n + 1);
            let beta = betas[n - j].clone();
            if !beta.is_zero() {
                expected.set(n - i, *k, beta);
            }
            if comp != &expected {
                if comp.nnz() > 1 {
                    single = false;
                }
                coeffs_ok = false;
            }
        }
        out.push(BasisProbeSample {
            i: *i,
            k: *k,
            shift: *j,
            f: format!("{f:?}"),
            checked_from,
            single_entry_everywhere: single,
            coefficients_match: coeffs_ok,
        });
    }
    Ok(out)
}

/// Stack the images of all monomials s^k (s*)^l s^m with l ≤ l_bound as
/// vectors and compute the exact rank: full rank means the truncated
/// representation separates them.
pub fn faithfulness_probe(l_bound: u64, truncation: usize) -> (usize, usize) {
    let mut monomials = Vec::new();
    for l in 0..=l_bound {
        for k in 0..=l {
            for m in 0..=l {
                monomials.push(AlgebraElem::monomial(k, l, m));
            }
        }
    }
    let width: usize = (0..=truncation).map(|n| (n + 1) * (n + 1)).sum();
    let mut stacked = ExactMatrix::zero(monomials.len(), width);
    for (row, mono) in monomials.iter().enumerate() {
        let rep = represent(mono, truncation);
        let mut offset = 0;
        for n in 0..=truncation {
            let comp = rep.component(n);
            for (r, c, v) in comp.iter() {
                stacked.set(row, offset + r * (n + 1) + c, v.clone());
            }
            offset += (n + 1) * (n + 1);
        }
    }
    (monomials.len(), stacked.rank())
}

/// JSON report for a weighted-rank computation.
#[derive(Debug, Serialize)]
pub struct RankReport {
    pub expr: String,
    #[serde(rename = "T")]
    pub truncation: usize,
    pub ranks: Vec<usize>,
    pub partial: String,
    pub tail: String,
    pub pattern: Option<RankPattern>,
    pub exact: Option<String>,
}

impl RankReport {
    pub fn new(expr: &str, truncation: usize, ranks: Vec<usize>, result: &RankResult) -> Self {
        RankReport {
            expr: expr.to_string(),
            truncation,
            ranks,
            partial: q_to_string(&result.partial),
            tail: q_to_string(&result.tail_bound),
            pattern: result.pattern.clone(),
            exact: result.exact.as_ref().map(q_to_string),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{h_proj, one_minus_ss, q_proj, AlgebraElem};
    use crate::matrix::lower_shift;
    use crate::scalar::{q, qi};

    #[test]
    fn represent_s_small() {
        let rep = represent(&AlgebraElem::s(), 2);
        assert!(rep.component(0).is_zero());
        assert_eq!(rep.component(1), &lower_shift(2));
        assert_eq!(rep.component(2), &lower_shift(3));
    }

    #[test]
    fn represent_identity() {
        let rep = represent(&AlgebraElem::one(), 3);
        for n in 0..=3 {
            assert_eq!(rep.component(n), &ExactMatrix::identity(n + 1));
        }
    }

    #[test]
    fn represent_q_proj_is_minimal_projection() {
        // q_{0,n} lands as a rank-one idempotent in component n, zero elsewhere.
        for n in 0..=3usize {
            let rep = represent(&q_proj(0, n as u64), 5);
            for m in 0..=5usize {
                let comp = rep.component(m);
                if m == n {
                    assert_eq!(comp.rank(), 1);
                    assert_eq!(&(comp * comp), comp);
                } else {
                    assert!(comp.is_zero(), "n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn homomorphism_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let t = 12;
        for _ in 0..50 {
            let mut a = AlgebraElem::zero();
            let mut b = AlgebraElem::zero();
            for _ in 0..3 {
                let lo = rng.gen_range(-3..=0i64);
                let hi = rng.gen_range(0..=3i64);
                let end = rng.gen_range(lo..=hi);
                a.add_term(crate::munn::MunnTriple::new(lo, hi, end), qi(rng.gen_range(-2..=2)));
                let lo = rng.gen_range(-3..=0i64);
                let hi = rng.gen_range(0..=3i64);
                let end = rng.gen_range(lo..=hi);
                b.add_term(crate::munn::MunnTriple::new(lo, hi, end), qi(rng.gen_range(-2..=2)));
            }
            let lhs = represent(&(&a * &b), t);
            let rhs = represent(&a, t).mul(&represent(&b, t));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rank_sequence_of_s_plus_sstar() {
        // Path-graph adjacency: nullity 1 exactly when the size n+1 is odd.
        let rep = represent(&(&AlgebraElem::s() + &AlgebraElem::s_star()), 40);
        let ranks = rank_sequence(&rep);
        for (n, &r) in ranks.iter().enumerate() {
            let expected = if n % 2 == 0 { n } else { n + 1 };
            assert_eq!(r, expected, "component {n}");
        }
    }

    #[test]
    fn rank_sequence_of_corner_projection() {
        let rep = represent(&one_minus_ss(), 12);
        let ranks = rank_sequence(&rep);
        for (n, &r) in ranks.iter().enumerate() {
            assert_eq!(r, 1, "component {n}");
        }
        assert!(rank_sequence(&TruncatedRep::zero(6)).iter().all(|&r| r == 0));
    }

    #[test]
    fn weighted_rank_headline() {
        let rep = represent(&(&AlgebraElem::s() + &AlgebraElem::s_star()), 64);
        let r = vn_rank(&rep);
        assert_eq!(r.exact, Some(q(2, 3)));
        let (lo, hi) = r.enclosure();
        assert_eq!(lo, hi);
        assert!(r.partial <= q(2, 3));
        assert!(q(2, 3) <= r.partial.clone() + r.tail_bound.clone());
    }

    #[test]
    fn weighted_rank_of_identity_and_projections() {
        let rep = represent(&AlgebraElem::one(), 48);
        assert_eq!(vn_rank(&rep).exact, Some(qi(1)));
        for (i, j) in [(0usize, 0usize), (1, 2), (2, 1)] {
            let rep = represent(&q_proj(i as u64, j as u64), 24);
            assert_eq!(
                vn_rank(&rep).exact,
                Some(pow2(-(i as i64 + j as i64 + 2))),
                "q({i},{j})"
            );
        }
        for n in 0..=4u64 {
            let rep = represent(&h_proj(n), 24);
            assert_eq!(
                vn_rank(&rep).exact,
                Some(qi(n as i64 + 1) * pow2(-(n as i64 + 2)))
            );
        }
    }

    #[test]
    fn weight_normalization_closed_form() {
        // Σ_{n≤T}(n+1)2^{−(n+2)} + tail = 1.
        for t in [0usize, 3, 10, 33] {
            let ranks: Vec<usize> = (0..=t).map(|n| n + 1).collect();
            let r = vn_rank_of_sequence(&ranks, 1);
            assert_eq!(r.partial.clone() + r.tail_bound.clone(), qi(1), "T={t}");
        }
    }

    #[test]
    fn localize_inverse_cases() {
        // f = 1: identity.
        let inv = localize_inverse(&Poly::one(), 6).unwrap();
        assert_eq!(inv, TruncatedRep::identity(6));
        // f = 1 − x: the all-ones lower triangle.
        let inv = localize_inverse(&Poly::from_ints(&[1, -1]), 6).unwrap();
        for n in 0..=6usize {
            let comp = inv.component(n);
            for r in 0..=n {
                for c in 0..=n {
                    assert_eq!(comp.get(r, c), if r >= c { qi(1) } else { qi(0) });
                }
            }
        }
        // (1−ss*)·f(s)^{−1} = (1−ss*) for f = 1+x.
        let t = 8;
        let p = represent(&one_minus_ss(), t);
        let inv = localize_inverse(&Poly::from_ints(&[1, 1]), t).unwrap();
        assert_eq!(p.mul(&inv), p);
        // Non-unit constant term is rejected.
        assert!(localize_inverse(&Poly::from_ints(&[2, 1]), 3).is_err());
    }

    #[test]
    fn inverse_formula_small_degrees() {
        for (f, label) in [
            (Poly::from_ints(&[1, 1]), "1+x"),
            (Poly::from_ints(&[1, 1, 1]), "1+x+x^2"),
            (Poly::from_ints(&[1, -2, 0, 1]), "1-2x+x^3"),
        ] {
            let report = verify_inverse_formula(&f, 16).unwrap();
            assert!(report.all_equal, "{label}: {:?}", report.failures);
        }
        assert!(verify_inverse_formula(&Poly::one(), 8).is_err());
    }

    #[test]
    fn basis_probe_examples() {
        let samples = vec![
            (0usize, 0usize, 0usize, Poly::from_ints(&[1, -1])),
            (1, 0, 1, Poly::from_ints(&[1, 1])),
            (0, 0, 2, Poly::one()),
        ];
        let out = basis_independence_probe(&samples, 16).unwrap();
        for s in &out {
            assert!(s.coefficients_match, "{s:?}");
            assert!(s.single_entry_everywhere, "{s:?}");
        }
    }

    #[test]
    fn faithfulness_small() {
        let (count, rank) = faithfulness_probe(3, 8);
        assert_eq!(count, rank);
    }

    #[test]
    fn block_assembly_rank() {
        // The 2×2 identity block has unnormalized weighted rank 2.
        let t = 24;
        let id = TruncatedRep::identity(t);
        let z = TruncatedRep::zero(t);
        let block = TruncatedRep::from_blocks(&[
            vec![id.clone(), z.clone()],
            vec![z, id],
        ]);
        let r = vn_rank(&block);
        assert_eq!(r.exact, Some(qi(2)));
    }
}
