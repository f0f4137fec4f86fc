//! Expression-level calculus over the truncated product: localization
//! inverses, central series elements, the two corner equivalence identities,
//! the Hadamard compression identity, term-form closure probes, and the
//! worked rank-decomposition example.

use crate::algebra::{one_minus_ss, one_minus_sstar_s, AlgebraElem};
use crate::error::Error;
use crate::matrix::ExactMatrix;
use crate::repr::{
    adjoint_inverse, localize_inverse, power, rank_sequence, represent, vn_rank, RankResult,
    TruncatedRep,
};
use crate::scalar::{q, Q};
use crate::series::{hadamard, Poly, QFraction, RationalSeries};
use num::{One, Zero};
use serde::Serialize;

/// Argument of a central `psi(...)` atom.
#[derive(Clone, Debug)]
pub enum PsiArg {
    Series(RationalSeries),
    Fraction(QFraction),
}

impl PsiArg {
    fn coeff(&self, n: usize) -> Q {
        match self {
            PsiArg::Series(s) => s.coeff(n),
            PsiArg::Fraction(f) => f.coeff(n),
        }
    }
}

/// Expression tree over the generator, rational scalars, and central
/// series elements.
#[derive(Clone, Debug)]
pub enum ClosureExpr {
    S,
    Scalar(Q),
    Psi(PsiArg),
    Add(Box<ClosureExpr>, Box<ClosureExpr>),
    Sub(Box<ClosureExpr>, Box<ClosureExpr>),
    Mul(Box<ClosureExpr>, Box<ClosureExpr>),
    Neg(Box<ClosureExpr>),
    Inv(Box<ClosureExpr>),
    Adj(Box<ClosureExpr>),
}

impl ClosureExpr {
    pub fn s() -> ClosureExpr {
        ClosureExpr::S
    }

    pub fn scalar_int(n: i64) -> ClosureExpr {
        ClosureExpr::Scalar(crate::scalar::qi(n))
    }
}

/// Componentwise evaluation at truncation T. `psi` contributes its n-th
/// coefficient times the component identity; `inv` inverts each component
/// exactly and reports the first singular one.
pub fn eval(expr: &ClosureExpr, truncation: usize) -> Result<TruncatedRep, Error> {
    match expr {
        ClosureExpr::S => Ok(represent(&AlgebraElem::s(), truncation)),
        ClosureExpr::Scalar(c) => Ok(TruncatedRep::identity(truncation).scale(c)),
        ClosureExpr::Psi(arg) => {
            let comps = (0..=truncation)
                .map(|n| ExactMatrix::identity(n + 1).scale(&arg.coeff(n)))
                .collect();
            Ok(TruncatedRep::from_components(comps))
        }
        ClosureExpr::Add(a, b) => Ok(eval(a, truncation)?.add(&eval(b, truncation)?)),
        ClosureExpr::Sub(a, b) => Ok(eval(a, truncation)?.sub(&eval(b, truncation)?)),
        ClosureExpr::Mul(a, b) => Ok(eval(a, truncation)?.mul(&eval(b, truncation)?)),
        ClosureExpr::Neg(a) => Ok(eval(a, truncation)?.scale(&-Q::one())),
        ClosureExpr::Inv(a) => eval(a, truncation)?.inverse(),
        ClosureExpr::Adj(a) => Ok(eval(a, truncation)?.adjoint()),
    }
}

/// ψ of a series as a representation: central, coefficient n on component n.
pub fn psi_rep(series: &RationalSeries, truncation: usize) -> TruncatedRep {
    let coeffs = series.coeffs(truncation + 1);
    let comps = coeffs
        .into_iter()
        .enumerate()
        .map(|(n, c)| ExactMatrix::identity(n + 1).scale(&c))
        .collect();
    TruncatedRep::from_components(comps)
}

/// A(s) for a rational series A = P/Q with Q(0) = 1: P(s)·Q(s)^{−1}.
pub fn series_at_s(a: &RationalSeries, truncation: usize) -> Result<TruncatedRep, Error> {
    let num = represent(&AlgebraElem::poly_at_s(a.num().coeffs()), truncation);
    Ok(num.mul(&localize_inverse(a.den(), truncation)?))
}

#[derive(Debug, Serialize)]
pub struct EquivalenceReport {
    pub truncation: usize,
    pub corner_identity_left: bool,
    pub corner_identity_right: bool,
    pub unit_identity: bool,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.corner_identity_left && self.corner_identity_right && self.unit_identity
    }
}

/// The two corner equivalence identities and the lifted unit:
///   (1−ss*)(1−s*)^{−1}(1−s*s)(1−s)^{−1}(1−ss*) = 1−ss*,
///   (1−s*s)(1−s)^{−1}(1−ss*)(1−s*)^{−1}(1−s*s) = 1−s*s,
/// and u·v = v·u = 1 for u = s + (1−ss*)(1−s*)^{−1}(1−s*s),
/// v = s* + (1−s*s)(1−s)^{−1}(1−ss*); all exact per component.
pub fn verify_equivalence_identities(truncation: usize) -> Result<EquivalenceReport, Error> {
    if truncation < 2 {
        return Err(Error::Precondition("needs truncation ≥ 2".into()));
    }
    let one_minus_x = Poly::from_ints(&[1, -1]);
    let p = represent(&one_minus_ss(), truncation);
    let q_ = represent(&one_minus_sstar_s(), truncation);
    let inv_one_minus_s = localize_inverse(&one_minus_x, truncation)?;
    let inv_one_minus_sstar = adjoint_inverse(&one_minus_x, truncation)?;

    let left = p
        .mul(&inv_one_minus_sstar)
        .mul(&q_)
        .mul(&inv_one_minus_s)
        .mul(&p);
    let corner_identity_left = left == p;

    let right = q_
        .mul(&inv_one_minus_s)
        .mul(&p)
        .mul(&inv_one_minus_sstar)
        .mul(&q_);
    let corner_identity_right = right == q_;

    let s_rep = represent(&AlgebraElem::s(), truncation);
    let u = s_rep.add(&p.mul(&inv_one_minus_sstar).mul(&q_));
    let v = s_rep
        .adjoint()
        .add(&q_.mul(&inv_one_minus_s).mul(&p));
    let id = TruncatedRep::identity(truncation);
    let unit_identity = u.mul(&v) == id && v.mul(&u) == id;

    Ok(EquivalenceReport {
        truncation,
        corner_identity_left,
        corner_identity_right,
        unit_identity,
    })
}

#[derive(Debug, Serialize)]
pub struct HadamardReport {
    pub truncation: usize,
    pub identity_holds: bool,
    pub mirror_holds: bool,
}

impl HadamardReport {
    pub fn passed(&self) -> bool {
        self.identity_holds && self.mirror_holds
    }
}

/// The compression identity: (1−ss*)·A(s)*·(1−s*s)·B(s)·(1−ss*) equals
/// ψ(A⊙B)·(1−ss*) exactly per component (coefficients are rational, so
/// conjugation is trivial), together with its mirror
/// (1−s*s)·A(s)·(1−ss*)·B(s)*·(1−s*s) = ψ(A⊙B)·(1−s*s).
pub fn verify_hadamard_identity(
    a: &RationalSeries,
    b: &RationalSeries,
    truncation: usize,
) -> Result<HadamardReport, Error> {
    let p = represent(&one_minus_ss(), truncation);
    let q_ = represent(&one_minus_sstar_s(), truncation);
    let a_at_s = series_at_s(a, truncation)?;
    let b_at_s = series_at_s(b, truncation)?;
    let product = hadamard(a, b);
    let psi = psi_rep(&product, truncation);

    let lhs = p.mul(&a_at_s.adjoint()).mul(&q_).mul(&b_at_s).mul(&p);
    let rhs = psi.mul(&p);
    let identity_holds = lhs == rhs;

    let lhs_m = q_.mul(&a_at_s).mul(&p).mul(&b_at_s.adjoint()).mul(&q_);
    let rhs_m = psi.mul(&q_);
    let mirror_holds = lhs_m == rhs_m;

    Ok(HadamardReport {
        truncation,
        identity_holds,
        mirror_holds,
    })
}

// ---------------------------------------------------------------------------
// Term forms of the localized corner ideals
// ---------------------------------------------------------------------------

/// Sample term shapes in the localized two-sided ideal calculus.
#[derive(Clone, Debug)]
pub enum SigmaTerm {
    /// f(s)^{−1} s^i (1−ss*) (s*)^j
    FormA { f: Poly, i: usize, j: usize },
    /// (s*)^i (1−s*s) s^j f(s)^{−1}
    FormB { i: usize, j: usize, f: Poly },
    /// (s*)^i (1−s*s) s^j f(s)^{−1} (1−ss*) (s*)^k
    FormC {
        i: usize,
        j: usize,
        f: Poly,
        k: usize,
    },
    /// A finitely supported element.
    Socle(AlgebraElem),
}

impl SigmaTerm {
    pub fn eval(&self, truncation: usize) -> Result<TruncatedRep, Error> {
        let s_rep = represent(&AlgebraElem::s(), truncation);
        let sstar = s_rep.adjoint();
        let p = represent(&one_minus_ss(), truncation);
        let q_ = represent(&one_minus_sstar_s(), truncation);
        Ok(match self {
            SigmaTerm::FormA { f, i, j } => localize_inverse(f, truncation)?
                .mul(&power(&s_rep, *i))
                .mul(&p)
                .mul(&power(&sstar, *j)),
            SigmaTerm::FormB { i, j, f } => power(&sstar, *i)
                .mul(&q_)
                .mul(&power(&s_rep, *j))
                .mul(&localize_inverse(f, truncation)?),
            SigmaTerm::FormC { i, j, f, k } => power(&sstar, *i)
                .mul(&q_)
                .mul(&power(&s_rep, *j))
                .mul(&localize_inverse(f, truncation)?)
                .mul(&p)
                .mul(&power(&sstar, *k)),
            SigmaTerm::Socle(a) => represent(a, truncation),
        })
    }
}

#[derive(Clone, Debug)]
pub enum RightMultiplier {
    S,
    SStar,
    Inv(Poly),
}

impl RightMultiplier {
    fn eval(&self, truncation: usize) -> Result<TruncatedRep, Error> {
        Ok(match self {
            RightMultiplier::S => represent(&AlgebraElem::s(), truncation),
            RightMultiplier::SStar => represent(&AlgebraElem::s_star(), truncation),
            RightMultiplier::Inv(g) => localize_inverse(g, truncation)?,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct ClosureProbeCase {
    pub term: String,
    pub multiplier: String,
    pub solved: bool,
    /// Largest component index below the solve window where the residual is
    /// nonzero (the finitely supported correction), if any.
    pub residual_extent: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct ClosureProbeReport {
    pub truncation: usize,
    pub window_start: usize,
    pub dictionary_size: usize,
    pub cases: Vec<ClosureProbeCase>,
}

impl ClosureProbeReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.solved)
    }
}

fn flatten_tail(rep: &TruncatedRep, from: usize) -> Vec<Q> {
    let mut out = Vec::new();
    for n in from..=rep.truncation() {
        let comp = rep.component(n);
        for r in 0..=n {
            for c in 0..=n {
                out.push(comp.get(r, c));
            }
        }
    }
    out
}

/// Exact inhomogeneous solve via the kernel of the augmented matrix.
fn solve_exact(columns: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let rows = rhs.len();
    let cols = columns.len();
    let m = ExactMatrix::from_fn(rows, cols + 1, |r, c| {
        if c < cols {
            columns[c][r].clone()
        } else {
            rhs[r].clone()
        }
    });
    for v in m.kernel_basis() {
        if !v[cols].is_zero() {
            let scale = -Q::one() / v[cols].clone();
            return Some(v[..cols].iter().map(|x| x.clone() * scale.clone()).collect());
        }
    }
    None
}

/// Multiply each sample term on the right and re-express the result, beyond a
/// finitely supported correction, as an exact linear combination of a
/// generated dictionary of term images. Failures are surfaced as candidate
/// counterexamples, not repaired.
pub fn term_form_closure_probe(
    samples: &[SigmaTerm],
    multipliers: &[RightMultiplier],
    truncation: usize,
) -> Result<ClosureProbeReport, Error> {
    let window_start = truncation / 2;

    // Gather the polynomial pool: sample f's, multiplier g's, and products.
    let mut pool: Vec<Poly> = vec![Poly::one()];
    let push_unique = |pool: &mut Vec<Poly>, p: Poly| {
        if !pool.iter().any(|q| q == &p) {
            pool.push(p);
        }
    };
    for t in samples {
        match t {
            SigmaTerm::FormA { f, .. } | SigmaTerm::FormB { f, .. } | SigmaTerm::FormC { f, .. } => {
                push_unique(&mut pool, f.clone())
            }
            SigmaTerm::Socle(_) => {}
        }
    }
    let mut multiplier_polys = Vec::new();
    for m in multipliers {
        if let RightMultiplier::Inv(g) = m {
            push_unique(&mut pool, g.clone());
            multiplier_polys.push(g.clone());
        }
    }
    let base_len = pool.len();
    for a in 0..base_len {
        for g in &multiplier_polys {
            let prod = &pool[a] * g;
            push_unique(&mut pool, prod);
        }
    }

    let max_index = samples
        .iter()
        .map(|t| match t {
            SigmaTerm::FormA { i, j, .. } => *i.max(j),
            SigmaTerm::FormB { i, j, .. } => *i.max(j),
            SigmaTerm::FormC { i, j, k, .. } => *i.max(j).max(k),
            SigmaTerm::Socle(_) => 0,
        })
        .max()
        .unwrap_or(0)
        + 2;

    // Dictionary: A-, B-, C-form images over the pool within index bounds.
    let mut dictionary: Vec<TruncatedRep> = Vec::new();
    for f in &pool {
        for i in 0..=max_index {
            for j in 0..=max_index {
                dictionary.push(
                    SigmaTerm::FormA {
                        f: f.clone(),
                        i,
                        j,
                    }
                    .eval(truncation)?,
                );
                dictionary.push(
                    SigmaTerm::FormB {
                        i,
                        j,
                        f: f.clone(),
                    }
                    .eval(truncation)?,
                );
            }
        }
    }
    for f in &pool {
        for i in 0..=max_index.min(2) {
            for j in 0..=max_index.min(2) {
                for k in 0..=max_index.min(2) {
                    dictionary.push(
                        SigmaTerm::FormC {
                            i,
                            j,
                            f: f.clone(),
                            k,
                        }
                        .eval(truncation)?,
                    );
                }
            }
        }
    }
    let columns: Vec<Vec<Q>> = dictionary
        .iter()
        .map(|rep| flatten_tail(rep, window_start))
        .collect();

    let mut cases = Vec::new();
    for term in samples {
        let base = term.eval(truncation)?;
        for mult in multipliers {
            let product = base.mul(&mult.eval(truncation)?);
            let rhs = flatten_tail(&product, window_start);
            let solution = solve_exact(&columns, &rhs);
            let solved = solution.is_some();
            let residual_extent = solution.and_then(|coeffs| {
                // The head difference is the finitely supported correction.
                let mut extent = None;
                for n in (0..window_start).rev() {
                    let mut combo = ExactMatrix::zero(n + 1, n + 1);
                    for (rep, c) in dictionary.iter().zip(&coeffs) {
                        if !c.is_zero() {
                            combo = &combo + &rep.component(n).scale(c);
                        }
                    }
                    if &combo != product.component(n) {
                        extent = Some(n);
                        break;
                    }
                }
                extent
            });
            cases.push(ClosureProbeCase {
                term: format!("{term:?}"),
                multiplier: format!("{mult:?}"),
                solved,
                residual_extent,
            });
        }
    }

    Ok(ClosureProbeReport {
        truncation,
        window_start,
        dictionary_size: dictionary.len(),
        cases,
    })
}

// ---------------------------------------------------------------------------
// The worked example: the rank of s + s*
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct ExampleReport {
    pub truncation: usize,
    pub alpha_squares_to_zero: bool,
    pub alpha_carries_left_factor: bool,
    pub beta_carries_right_factor: bool,
    pub rank_additivity: bool,
    pub rank_sstar_s: Option<String>,
    pub rank_odd_corner: Option<String>,
    pub rank_s_plus_sstar: Option<String>,
    pub enclosure_width_is_zero: bool,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.alpha_squares_to_zero
            && self.alpha_carries_left_factor
            && self.beta_carries_right_factor
            && self.rank_additivity
            && self.rank_sstar_s.as_deref() == Some("1/2")
            && self.rank_odd_corner.as_deref() == Some("1/6")
            && self.rank_s_plus_sstar.as_deref() == Some("2/3")
    }
}

/// The decomposition of (s+s*) into a unit-corrected triangular part and an
/// odd-component corner, with the three weighted ranks 1/2, 1/6, 2/3.
pub fn example_suite(truncation: usize) -> Result<ExampleReport, Error> {
    if truncation < 8 {
        return Err(Error::Precondition("needs truncation ≥ 8".into()));
    }
    let t = truncation;
    let s_rep = represent(&AlgebraElem::s(), t);
    let sstar = s_rep.adjoint();
    let q_ = represent(&one_minus_sstar_s(), t);
    let id = TruncatedRep::identity(t);

    // Central (1,0,1,0,…) pattern and its complement.
    let alternating = RationalSeries::new(Poly::one(), Poly::from_ints(&[1, 0, -1]))?;
    let g1 = psi_rep(&alternating, t);
    let g2 = id.sub(&g1);

    let one_plus_s2 = represent(&AlgebraElem::poly_at_s(&[Q::one(), Q::zero(), Q::one()]), t);
    let inv_one_plus_s2 = localize_inverse(&Poly::from_ints(&[1, 0, 1]), t)?;
    let inv_one_plus_sstar2 = adjoint_inverse(&Poly::from_ints(&[1, 0, 1]), t)?;

    let alpha = g1.mul(&q_).mul(&power(&s_rep, 2)).mul(&inv_one_plus_s2);
    let beta = sstar
        .mul(&s_rep)
        .mul(&inv_one_plus_sstar2)
        .mul(&sstar)
        .mul(&q_)
        .mul(&s_rep)
        .mul(&g2);

    let alpha_squares_to_zero = alpha.mul(&alpha).is_zero();

    // α·s*(1+s²) = g1(1−s*s)s.
    let lhs = alpha.mul(&sstar).mul(&one_plus_s2);
    let rhs = g1.mul(&q_).mul(&s_rep);
    let alpha_carries_left_factor = lhs == rhs;

    // (s+s*)·β = g2(1−s*s)s.
    let s_plus = s_rep.add(&sstar);
    let lhs = s_plus.mul(&beta);
    let rhs2 = g2.mul(&q_).mul(&s_rep);
    let beta_carries_right_factor = lhs == rhs2;

    // Componentwise rank additivity of the decomposition.
    let left_part = id.add(&alpha).mul(&sstar).mul(&one_plus_s2);
    let right_part = g2.mul(&q_).mul(&s_rep);
    let ranks_total = rank_sequence(&s_plus);
    let ranks_left = rank_sequence(&left_part);
    let ranks_right = rank_sequence(&right_part);
    let rank_additivity = ranks_total
        .iter()
        .zip(ranks_left.iter().zip(&ranks_right))
        .all(|(&t, (&l, &r))| t == l + r);

    let rk = |result: &RankResult| result.exact.as_ref().map(crate::scalar::q_to_string);
    let r_sstar_s = vn_rank(&sstar.mul(&s_rep));
    let odd_corner = g2.mul(&q_).mul(&s_rep).mul(&sstar);
    let r_odd = vn_rank(&odd_corner);
    let r_total = vn_rank(&s_plus);
    let enclosure = r_total.enclosure();

    Ok(ExampleReport {
        truncation,
        alpha_squares_to_zero,
        alpha_carries_left_factor,
        beta_carries_right_factor,
        rank_additivity,
        rank_sstar_s: rk(&r_sstar_s),
        rank_odd_corner: rk(&r_odd),
        rank_s_plus_sstar: rk(&r_total),
        enclosure_width_is_zero: enclosure.0 == enclosure.1 && r_total.exact == Some(q(2, 3)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    #[test]
    fn eval_basics() {
        let t = 6;
        let one = eval(&ClosureExpr::scalar_int(1), t).unwrap();
        assert_eq!(one, TruncatedRep::identity(t));

        // psi of the alternating pattern: identity on even components, zero on odd.
        let alternating = RationalSeries::new(Poly::one(), Poly::from_ints(&[1, 0, -1])).unwrap();
        let g1 = eval(&ClosureExpr::Psi(PsiArg::Series(alternating)), t).unwrap();
        for n in 0..=t {
            if n % 2 == 0 {
                assert_eq!(g1.component(n), &ExactMatrix::identity(n + 1));
            } else {
                assert!(g1.component(n).is_zero());
            }
        }

        // inv(1 − s) is the all-ones lower triangle.
        let expr = ClosureExpr::Inv(Box::new(ClosureExpr::Sub(
            Box::new(ClosureExpr::scalar_int(1)),
            Box::new(ClosureExpr::S),
        )));
        let inv = eval(&expr, t).unwrap();
        for n in 0..=t {
            for r in 0..=n {
                for c in 0..=r {
                    assert_eq!(inv.component(n).get(r, c), qi(1));
                }
            }
        }
    }

    #[test]
    fn eval_rejects_singular_inverse() {
        // s is singular in every component.
        let expr = ClosureExpr::Inv(Box::new(ClosureExpr::S));
        match eval(&expr, 4) {
            Err(Error::SingularComponent { component }) => assert_eq!(component, 0),
            other => panic!("expected singular component, got {other:?}"),
        }
    }

    #[test]
    fn equivalence_identities_hold() {
        let report = verify_equivalence_identities(16).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(verify_equivalence_identities(1).is_err());
    }

    #[test]
    fn hadamard_identity_samples() {
        let geo = RationalSeries::new(Poly::one(), Poly::from_ints(&[1, -1])).unwrap();
        let geo2 = RationalSeries::new(Poly::one(), Poly::from_ints(&[1, -2])).unwrap();
        let poly = RationalSeries::from_poly(Poly::from_ints(&[1, 3, 0, 1]));
        for (a, b) in [(&geo, &geo), (&geo, &geo2), (&poly, &geo2), (&poly, &poly)] {
            let report = verify_hadamard_identity(a, b, 16).unwrap();
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn psi_is_hadamard_homomorphism() {
        let t = 12;
        let a = RationalSeries::new(Poly::one(), Poly::from_ints(&[1, -2])).unwrap();
        let b = RationalSeries::new(Poly::from_ints(&[1, 1]), Poly::from_ints(&[1, 0, -1]))
            .unwrap();
        let lhs = psi_rep(&hadamard(&a, &b), t);
        let rhs = psi_rep(&a, t).mul(&psi_rep(&b, t));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn example_suite_full() {
        let report = example_suite(24).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn mixed_ideal_products_are_finitely_supported() {
        // A form-(A) term times a form-(B) term vanishes in all large components.
        let t = 20;
        let a = SigmaTerm::FormA {
            f: Poly::from_ints(&[1, 1]),
            i: 1,
            j: 2,
        };
        let b = SigmaTerm::FormB {
            i: 2,
            j: 1,
            f: Poly::from_ints(&[1, -1]),
        };
        let prod = a.eval(t).unwrap().mul(&b.eval(t).unwrap());
        for n in 8..=t {
            assert!(prod.component(n).is_zero(), "component {n}");
        }
    }
}
