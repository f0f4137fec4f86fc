//! Rational power series under the Hadamard (coefficientwise) product:
//! linear-recurrence-backed coefficients, exact Hankel-rank minimization,
//! certified quasi-periodic zero sets, support idempotents, and the quotient
//! ring of formal fractions with explicit quasi-inverses.
//!
//! Identity claims are certified through recurrence algebra; coefficient
//! windows are used for pattern discovery only.

use crate::error::Error;
use crate::matrix::ExactMatrix;
use crate::scalar::Q;
use num::{One, Zero};
use serde::Serialize;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// Dense polynomial over ℚ, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly(Vec<Q>);

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn one() -> Poly {
        Poly(vec![Q::one()])
    }

    pub fn x() -> Poly {
        Poly(vec![Q::zero(), Q::one()])
    }

    pub fn x_pow(k: usize) -> Poly {
        let mut v = vec![Q::zero(); k + 1];
        v[k] = Q::one();
        Poly(v)
    }

    pub fn constant(c: Q) -> Poly {
        Poly::new(vec![c])
    }

    pub fn from_ints(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| crate::scalar::qi(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; 0 for the zero polynomial by convention of callers that
    /// only use it through `deg_or_zero`.
    pub fn deg(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn deg_or_zero(&self) -> usize {
        self.deg().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.0.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, k: &Q) -> Poly {
        Poly::new(self.0.iter().map(|c| c.clone() * k.clone()).collect())
    }

    /// Euclidean division: (quotient, remainder).
    pub fn divmod(&self, den: &Poly) -> (Poly, Poly) {
        assert!(!den.is_zero(), "division by the zero polynomial");
        let mut rem = self.0.clone();
        let dd = den.0.len() - 1;
        let lead = den.0[dd].clone();
        if rem.len() <= dd {
            return (Poly::zero(), Poly::new(rem));
        }
        let mut quo = vec![Q::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            quo[i - dd] = c.clone();
            for j in 0..=dd {
                let delta = c.clone() * den.0[j].clone();
                rem[i - dd + j] -= delta;
            }
        }
        (Poly::new(quo), Poly::new(rem))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.0.last().expect("nonzero").clone();
        a.scale(&(Q::one() / lead))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: Self) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: Self) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.0.iter().map(|c| -c.clone()).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: Self) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = crate::scalar::q_to_string(c);
            parts.push(match i {
                0 => cs,
                1 if c.is_one() => "x".to_string(),
                1 => format!("{cs}x"),
                _ if c.is_one() => format!("x^{i}"),
                _ => format!("{cs}x^{i}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// Rational series
// ---------------------------------------------------------------------------

/// A rational series `num/den` with `den(0) = 1`, reduced. The coefficient
/// stream satisfies the order-`d` recurrence read off `den` from index
/// `valid_from()` onward (`d` = deg den).
#[derive(Clone)]
pub struct RationalSeries {
    num: Poly,
    den: Poly,
}

impl RationalSeries {
    pub fn new(num: Poly, den: Poly) -> Result<RationalSeries, Error> {
        if den.is_zero() || den.coeff(0).is_zero() {
            return Err(Error::Malformed(
                "series denominator needs a nonzero constant term".into(),
            ));
        }
        if num.is_zero() {
            return Ok(RationalSeries {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den);
        let (num, _) = num.divmod(&g);
        let (den, _) = den.divmod(&g);
        // Normalize den(0) = 1.
        let c0 = den.coeff(0);
        debug_assert!(!c0.is_zero());
        let inv = Q::one() / c0;
        Ok(RationalSeries {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(p: Poly) -> RationalSeries {
        RationalSeries {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> RationalSeries {
        RationalSeries::from_poly(Poly::zero())
    }

    /// The Hadamard unit: all coefficients 1, i.e. 1/(1−x).
    pub fn hadamard_unit() -> RationalSeries {
        RationalSeries::new(Poly::one(), Poly::from_ints(&[1, -1])).expect("unit")
    }

    /// 1/f for a polynomial f with f(0) ≠ 0 (the geometric-series expansion).
    pub fn inverse_of_poly(f: &Poly) -> Result<RationalSeries, Error> {
        RationalSeries::new(Poly::one(), f.clone())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Recurrence order (deg den).
    pub fn order(&self) -> usize {
        self.den.deg_or_zero()
    }

    /// Index from which the pure order-`order()` recurrence generates the
    /// stream (full history available, numerator exhausted).
    pub fn valid_from(&self) -> usize {
        if self.num.is_zero() {
            return 0;
        }
        (self.num.deg_or_zero() + 1).max(self.order())
    }

    /// First `count` coefficients by recurrence unrolling.
    pub fn coeffs(&self, count: usize) -> Vec<Q> {
        let mut out: Vec<Q> = Vec::with_capacity(count);
        let d = self.den.deg_or_zero();
        for n in 0..count {
            let mut c = self.num.coeff(n);
            for i in 1..=d.min(n) {
                c -= self.den.coeff(i) * out[n - i].clone();
            }
            out.push(c);
        }
        out
    }

    pub fn coeff(&self, n: usize) -> Q {
        self.coeffs(n + 1).pop().expect("nonempty")
    }

    pub fn add(&self, other: &RationalSeries) -> RationalSeries {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        RationalSeries::new(num, &self.den * &other.den).expect("denominators have unit terms")
    }

    pub fn sub(&self, other: &RationalSeries) -> RationalSeries {
        let num = &(&self.num * &other.den) - &(&other.num * &self.den);
        RationalSeries::new(num, &self.den * &other.den).expect("denominators have unit terms")
    }

    pub fn scale(&self, k: &Q) -> RationalSeries {
        RationalSeries::new(self.num.scale(k), self.den.clone()).expect("same denominator")
    }

    /// Multiply by x^k (shift coefficients k slots to the right).
    pub fn shift(&self, k: usize) -> RationalSeries {
        RationalSeries::new(&self.num * &Poly::x_pow(k), self.den.clone()).expect("shift")
    }
}

impl PartialEq for RationalSeries {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl fmt::Debug for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

/// Hadamard (coefficientwise) product. The product tail satisfies a
/// recurrence of order at most d_a·d_b; the minimal one is recovered by exact
/// Hankel-rank computation on a window, then the fraction is rebuilt and
/// verified against the window.
pub fn hadamard(a: &RationalSeries, b: &RationalSeries) -> RationalSeries {
    if a.is_zero() || b.is_zero() {
        return RationalSeries::zero();
    }
    let cap = a.order().max(1) * b.order().max(1);
    let t0 = a.valid_from().max(b.valid_from());
    let window = t0 + 2 * cap + 2;
    let ca = a.coeffs(window);
    let cb = b.coeffs(window);
    let c: Vec<Q> = ca
        .into_iter()
        .zip(cb)
        .map(|(x, y)| x * y)
        .collect();

    // Hankel matrix of the pure tail.
    let tail = &c[t0..];
    let h = ExactMatrix::from_fn(cap + 1, cap + 1, |i, j| tail[i + j].clone());
    let r = h.rank();

    // Minimal recurrence from the kernel of the (r+1)-column Hankel system.
    let den = if r == 0 {
        Poly::one()
    } else {
        let rows = tail.len() - r;
        let sys = ExactMatrix::from_fn(rows, r + 1, |i, j| tail[i + j].clone());
        let kernel = sys.kernel_basis();
        let v = kernel
            .into_iter()
            .find(|v| !v[r].is_zero())
            .expect("rank-r tail has a monic annihilator");
        let top = v[r].clone();
        // den = 1 + q_1 x + … + q_r x^r with q_k = v_{r−k}/v_r.
        let mut q = vec![Q::one()];
        for k in 1..=r {
            q.push(v[r - k].clone() / top.clone());
        }
        Poly::new(q)
    };

    // Numerator: (den · C) must vanish from t0 + r on; keep the prefix.
    let dd = den.deg_or_zero();
    let mut prod = vec![Q::zero(); window];
    for (n, slot) in prod.iter_mut().enumerate() {
        let mut acc = Q::zero();
        for i in 0..=dd.min(n) {
            acc += den.coeff(i) * c[n - i].clone();
        }
        *slot = acc;
    }
    for (n, v) in prod.iter().enumerate().take(window).skip(t0 + r) {
        assert!(
            v.is_zero(),
            "hadamard window reconstruction failed at coefficient {n}"
        );
    }
    let num = Poly::new(prod[..(t0 + r).min(window)].to_vec());
    let result = RationalSeries::new(num, den).expect("den(0) = 1");
    debug_assert_eq!(result.coeffs(window), c);
    result
}

// ---------------------------------------------------------------------------
// Zero sets
// ---------------------------------------------------------------------------

/// A quasi-periodic subset of ℤ⁺: a finite exceptional set together with
/// finitely many arithmetic progressions of common difference `period`; each
/// progression is recorded by its residue and the index it actually starts
/// from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiPeriodicSet {
    pub exceptional: Vec<u64>,
    pub period: u64,
    pub residues: Vec<u64>,
    /// Start index of each progression (same order as `residues`); equals the
    /// residue when the progression is full.
    pub starts: Vec<u64>,
}

impl QuasiPeriodicSet {
    pub fn contains(&self, n: u64) -> bool {
        if self.exceptional.binary_search(&n).is_ok() {
            return true;
        }
        if self.period == 0 {
            return false;
        }
        self.residues
            .iter()
            .zip(&self.starts)
            .any(|(&r, &s)| n % self.period == r && n >= s)
    }

    pub fn is_empty(&self) -> bool {
        self.exceptional.is_empty() && self.residues.is_empty()
    }
}

/// Characteristic polynomial by the Faddeev–LeVerrier recurrence (exact).
fn char_poly(m: &ExactMatrix) -> Poly {
    let n = m.rows();
    let trace = |a: &ExactMatrix| -> Q { (0..n).map(|i| a.get(i, i)).sum() };
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut mk = m.clone();
    for k in 1..=n {
        let ck = trace(&mk) / crate::scalar::qi(k as i64);
        coeffs[n - k] = -ck.clone();
        if k < n {
            let adjusted = &mk - &ExactMatrix::identity(n).scale(&ck);
            mk = m.checked_mul(&adjusted).expect("square");
        }
    }
    Poly::new(coeffs)
}

/// Companion matrix of the tail recurrence of `a` (order d): maps the state
/// (γ_m, …, γ_{m+d−1}) to (γ_{m+1}, …, γ_{m+d}).
fn companion(a: &RationalSeries) -> Option<ExactMatrix> {
    let d = a.order();
    if d == 0 {
        return None;
    }
    let mut m = ExactMatrix::zero(d, d);
    for i in 0..d - 1 {
        m.set(i, i + 1, Q::one());
    }
    for j in 0..d {
        // γ_{m+d} = −q_1 γ_{m+d−1} − … − q_d γ_m.
        m.set(d - 1, j, -a.den.coeff(d - j));
    }
    Some(m)
}

/// Certified zero set of a rational series. Scans a coefficient window to
/// propose (exceptional set, period, residues), then certifies each claimed
/// all-zero residue class: the subsampled stream satisfies the derived
/// recurrence of order ≤ d (characteristic polynomial of the N-th power of
/// the companion matrix), so an observed run of d consecutive zeros past the
/// validity index proves the class vanishes from there on. Claimed nonzero
/// classes carry a latest-possible witness. Errors when no period up to
/// `period_bound` certifies.
pub fn zero_set(
    a: &RationalSeries,
    period_bound: u64,
    scan_window: usize,
) -> Result<QuasiPeriodicSet, Error> {
    if a.is_zero() {
        return Ok(QuasiPeriodicSet {
            exceptional: vec![],
            period: 1,
            residues: vec![0],
            starts: vec![0],
        });
    }
    if period_bound == 0 {
        return Err(Error::BoundExceeded("period bound must be positive".into()));
    }
    let d = a.order();
    let run = d.max(1);
    let t0 = a.valid_from();
    let window = scan_window.max(t0 + (period_bound as usize) * (d + 3) + 2 * d + 8);
    let coeffs = a.coeffs(window);
    let comp = companion(a);

    'periods: for period in 1..=period_bound {
        let n = period as usize;
        // Sporadic zeros are tolerated only below this index.
        let margin = window.saturating_sub(n * (run + 2));
        if margin <= t0 {
            continue;
        }
        let mut residues = Vec::new();
        let mut starts = Vec::new();
        let mut exceptional = Vec::new();

        // Derived recurrence for period-N subsampling: char poly of comp^N.
        let derived = comp.as_ref().map(|m| char_poly(&m.pow(n)));

        for r in 0..n {
            let idxs: Vec<usize> = (r..window).step_by(n).collect();
            // Longest all-zero suffix of the class.
            let mut suffix_start = idxs.len();
            while suffix_start > 0 && coeffs[idxs[suffix_start - 1]].is_zero() {
                suffix_start -= 1;
            }
            let zero_suffix_len = idxs.len() - suffix_start;
            let first_valid_slot = idxs.iter().position(|&i| i >= t0).unwrap_or(idxs.len());
            let certifiable = zero_suffix_len >= run
                && suffix_start >= first_valid_slot
                && suffix_start < idxs.len();
            if certifiable {
                // Explicit certificate: the derived recurrence annihilates
                // the observed subsampled tail.
                if let Some(p) = &derived {
                    let dd = p.deg_or_zero();
                    let sub: Vec<&Q> = idxs
                        .iter()
                        .filter(|&&i| i >= t0)
                        .map(|&i| &coeffs[i])
                        .collect();
                    for m0 in 0..sub.len().saturating_sub(dd) {
                        let mut acc = Q::zero();
                        for k in 0..=dd {
                            acc += p.coeff(k) * sub[m0 + k].clone();
                        }
                        assert!(
                            acc.is_zero(),
                            "derived recurrence failed on subsampled stream"
                        );
                    }
                }
                residues.push(r as u64);
                starts.push(idxs[suffix_start] as u64);
                for &i in &idxs[..suffix_start] {
                    if coeffs[i].is_zero() {
                        exceptional.push(i as u64);
                    }
                }
            } else {
                // Class claimed nonzero: no zeros allowed beyond the margin.
                for &i in &idxs {
                    if coeffs[i].is_zero() {
                        if i >= margin {
                            continue 'periods;
                        }
                        exceptional.push(i as u64);
                    }
                }
            }
        }

        exceptional.sort_unstable();
        exceptional.dedup();
        let result = QuasiPeriodicSet {
            exceptional,
            period,
            residues,
            starts,
        };
        // Cross-check the window against the assembled set.
        for (i, c) in coeffs.iter().enumerate() {
            debug_assert_eq!(
                c.is_zero(),
                result.contains(i as u64),
                "window mismatch at {i}"
            );
        }
        return Ok(result);
    }
    Err(Error::BoundExceeded(format!(
        "no certified period up to {period_bound}"
    )))
}

/// The 0/1-coefficient series supported exactly on the certified zero set of
/// `a`: progressions contribute x^{start}/(1−x^N), sporadic zeros a
/// polynomial. Verified at recurrence level: e⊙e = e and e⊙a = 0.
pub fn support_idempotent(
    a: &RationalSeries,
    period_bound: u64,
    scan_window: usize,
) -> Result<RationalSeries, Error> {
    let zs = zero_set(a, period_bound, scan_window)?;
    let mut e = RationalSeries::zero();
    if !zs.residues.is_empty() {
        let mut den = vec![Q::zero(); zs.period as usize + 1];
        den[0] = Q::one();
        den[zs.period as usize] = -Q::one();
        let den = Poly::new(den);
        for &s in &zs.starts {
            e = e.add(&RationalSeries::new(Poly::x_pow(s as usize), den.clone())?);
        }
    }
    for &j in &zs.exceptional {
        e = e.add(&RationalSeries::from_poly(Poly::x_pow(j as usize)));
    }
    // Recurrence-level verification, not windowed.
    let ee = hadamard(&e, &e);
    if ee != e {
        return Err(Error::Malformed(
            "support idempotent failed e⊙e = e".into(),
        ));
    }
    if !hadamard(&e, a).is_zero() {
        return Err(Error::Malformed(
            "support idempotent failed e⊙a = 0".into(),
        ));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// The quotient ring of formal Hadamard fractions
// ---------------------------------------------------------------------------

/// Formal fraction num ⊙ den† in the Hadamard quotient ring; `den` certified
/// free of zero coefficients.
#[derive(Clone, Debug)]
pub struct QFraction {
    pub num: RationalSeries,
    pub den: RationalSeries,
}

pub const DEFAULT_PERIOD_BOUND: u64 = 64;
pub const DEFAULT_SCAN_WINDOW: usize = 256;

impl QFraction {
    pub fn new(num: RationalSeries, den: RationalSeries) -> Result<QFraction, Error> {
        let zs = zero_set(&den, DEFAULT_PERIOD_BOUND, DEFAULT_SCAN_WINDOW)?;
        if !zs.is_empty() {
            return Err(Error::Precondition(
                "fraction denominator has zero coefficients".into(),
            ));
        }
        Ok(QFraction { num, den })
    }

    pub fn from_series(num: RationalSeries) -> QFraction {
        QFraction {
            num,
            den: RationalSeries::hadamard_unit(),
        }
    }

    /// Coefficient of the represented stream: num_n / den_n.
    pub fn coeff(&self, n: usize) -> Q {
        self.num.coeff(n) / self.den.coeff(n)
    }

    pub fn hadamard(&self, other: &QFraction) -> QFraction {
        QFraction {
            num: hadamard(&self.num, &other.num),
            den: hadamard(&self.den, &other.den),
        }
    }
}

/// Equality in the quotient ring: num_p ⊙ den_q = num_q ⊙ den_p.
pub fn q_equal(p: &QFraction, q: &QFraction) -> bool {
    hadamard(&p.num, &q.den) == hadamard(&q.num, &p.den)
}

/// Quasi-inverse of a ⊙ b†: ((1−e) ⊙ b) ⊙ (a+e)† with e the support
/// idempotent of the numerator's zero set.
pub fn q_quasi_inverse(p: &QFraction) -> Result<QFraction, Error> {
    let e = support_idempotent(&p.num, DEFAULT_PERIOD_BOUND, DEFAULT_SCAN_WINDOW)?;
    let complement = RationalSeries::hadamard_unit().sub(&e);
    QFraction::new(hadamard(&complement, &p.den), p.num.add(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn geometric(k: i64) -> RationalSeries {
        // 1/(1−kx): coefficients k^n.
        RationalSeries::new(Poly::one(), Poly::from_ints(&[1, -k])).unwrap()
    }

    #[test]
    fn coefficients_of_geometric() {
        let g = geometric(2);
        assert_eq!(g.coeffs(5), vec![qi(1), qi(2), qi(4), qi(8), qi(16)]);
        assert_eq!(g.coeff(10), qi(1024));
    }

    #[test]
    fn reduction_to_lowest_terms() {
        // (1−x²)/(1−x) = 1+x.
        let s = RationalSeries::new(Poly::from_ints(&[1, 0, -1]), Poly::from_ints(&[1, -1]))
            .unwrap();
        assert_eq!(s.num(), &Poly::from_ints(&[1, 1]));
        assert_eq!(s.den(), &Poly::one());
    }

    #[test]
    fn hadamard_of_geometrics() {
        // Coefficientwise 1·2^n = 2^n, verified on 100 coefficients.
        let prod = hadamard(&geometric(1), &geometric(2));
        assert_eq!(prod.coeffs(100), geometric(2).coeffs(100));
        assert_eq!(prod, geometric(2));
        // The Hadamard unit is neutral.
        let a = RationalSeries::new(Poly::from_ints(&[2, 1]), Poly::from_ints(&[1, -1, -1]))
            .unwrap();
        assert_eq!(hadamard(&a, &RationalSeries::hadamard_unit()), a);
    }

    #[test]
    fn hadamard_with_transients() {
        // x³/(1−x) ⊙ 1/(1−2x): coefficients 0,0,0,8,16,32,…
        let a = RationalSeries::new(Poly::x_pow(3), Poly::from_ints(&[1, -1])).unwrap();
        let p = hadamard(&a, &geometric(2));
        let c = p.coeffs(8);
        assert_eq!(c[..3], [qi(0), qi(0), qi(0)]);
        for n in 3..8 {
            assert_eq!(c[n], crate::scalar::pow2(n as i64));
        }
        // Minimal order stays 1: den = 1 − 2x after reduction.
        assert_eq!(p.order(), 1);
    }

    #[test]
    fn char_poly_of_companion() {
        // Fibonacci companion: char λ² − λ − 1.
        let s = RationalSeries::new(Poly::one(), Poly::from_ints(&[1, -1, -1])).unwrap();
        let m = companion(&s).unwrap();
        assert_eq!(char_poly(&m), Poly::from_ints(&[-1, -1, 1]));
    }

    #[test]
    fn zero_set_of_alternating() {
        // 1/(1−x²): coefficients 1,0,1,0,… zeros exactly at the odd indices.
        let s = RationalSeries::new(Poly::one(), Poly::from_ints(&[1, 0, -1])).unwrap();
        let zs = zero_set(&s, 8, 64).unwrap();
        assert_eq!(zs.period, 2);
        assert_eq!(zs.residues, vec![1]);
        assert_eq!(zs.starts, vec![1]);
        assert!(zs.exceptional.is_empty());
        for n in 0..50 {
            assert_eq!(zs.contains(n), n % 2 == 1);
        }
    }

    #[test]
    fn zero_set_of_all_ones_is_empty() {
        let zs = zero_set(&geometric(1), 8, 64).unwrap();
        assert!(zs.is_empty());
    }

    #[test]
    fn zero_set_with_finite_head() {
        // x³/(1−x): zeros exactly {0, 1, 2}.
        let s = RationalSeries::new(Poly::x_pow(3), Poly::from_ints(&[1, -1])).unwrap();
        let zs = zero_set(&s, 8, 64).unwrap();
        assert_eq!(zs.exceptional, vec![0, 1, 2]);
        assert!(zs.residues.is_empty());
    }

    #[test]
    fn zero_set_with_shifted_progression() {
        // 1/(1−x²) + x + x³: zeros at odd indices ≥ 5 only.
        let s = RationalSeries::new(Poly::one(), Poly::from_ints(&[1, 0, -1]))
            .unwrap()
            .add(&RationalSeries::from_poly(Poly::from_ints(&[0, 1, 0, 1])));
        let zs = zero_set(&s, 8, 64).unwrap();
        assert_eq!(zs.period, 2);
        assert_eq!(zs.residues, vec![1]);
        assert_eq!(zs.starts, vec![5]);
        assert!(zs.exceptional.is_empty());
        for n in 0..60 {
            assert_eq!(zs.contains(n), n % 2 == 1 && n >= 5, "n = {n}");
        }
    }

    #[test]
    fn support_idempotents() {
        // Zeros at odd indices give e = x/(1−x²).
        let s = RationalSeries::new(Poly::one(), Poly::from_ints(&[1, 0, -1])).unwrap();
        let e = support_idempotent(&s, 8, 64).unwrap();
        let expect = RationalSeries::new(Poly::x(), Poly::from_ints(&[1, 0, -1])).unwrap();
        assert_eq!(e, expect);
        // Empty zero set gives e = 0.
        let e = support_idempotent(&geometric(1), 8, 64).unwrap();
        assert!(e.is_zero());
        // Finite zero set gives the polynomial 1 + x + x².
        let s = RationalSeries::new(Poly::x_pow(3), Poly::from_ints(&[1, -1])).unwrap();
        let e = support_idempotent(&s, 8, 64).unwrap();
        assert_eq!(e, RationalSeries::from_poly(Poly::from_ints(&[1, 1, 1])));
    }

    #[test]
    fn quasi_inverse_of_idempotent_pattern() {
        // The (1,0,1,0,…) idempotent is its own quasi-inverse.
        let s = RationalSeries::new(Poly::one(), Poly::from_ints(&[1, 0, -1])).unwrap();
        let p = QFraction::from_series(s);
        let inv = q_quasi_inverse(&p).unwrap();
        assert!(q_equal(&p, &inv));
    }

    #[test]
    fn quasi_inverse_of_two_powers() {
        // 2^n inverts coefficientwise to 2^{−n} = (1 − x/2)^{-1}; verified on
        // 100 coefficients and at the fraction level.
        let p = QFraction::from_series(geometric(2));
        let inv = q_quasi_inverse(&p).unwrap();
        let expect = RationalSeries::new(
            Poly::one(),
            Poly::new(vec![qi(1), q(-1, 2)]),
        )
        .unwrap();
        for n in 0..100 {
            assert_eq!(inv.coeff(n), expect.coeff(n));
        }
        assert!(q_equal(&inv, &QFraction::from_series(expect)));
    }

    #[test]
    fn quasi_inverse_axioms() {
        let samples = vec![
            QFraction::from_series(geometric(2)),
            QFraction::from_series(
                RationalSeries::new(Poly::one(), Poly::from_ints(&[1, 0, -1])).unwrap(),
            ),
            QFraction::from_series(RationalSeries::from_poly(Poly::from_ints(&[0, 0, 3]))),
            QFraction::new(geometric(3), geometric(2)).unwrap(),
        ];
        for p in samples {
            let pi = q_quasi_inverse(&p).unwrap();
            let papa = p.hadamard(&pi).hadamard(&p);
            assert!(q_equal(&papa, &p));
            let ipai = pi.hadamard(&p).hadamard(&pi);
            assert!(q_equal(&ipai, &pi));
        }
    }

    #[test]
    fn fraction_denominator_checked() {
        // A denominator with zero coefficients is rejected.
        let bad = RationalSeries::new(Poly::one(), Poly::from_ints(&[1, 0, -1])).unwrap();
        assert!(QFraction::new(geometric(1), bad).is_err());
    }

    #[test]
    fn hadamard_assoc_comm_sampled() {
        let samples = vec![
            geometric(1),
            geometric(2),
            RationalSeries::new(Poly::from_ints(&[1, 1]), Poly::from_ints(&[1, -1, -1]))
                .unwrap(),
            RationalSeries::new(Poly::x_pow(2), Poly::from_ints(&[1, -3])).unwrap(),
        ];
        for a in &samples {
            for b in &samples {
                let ab = hadamard(a, b);
                let ba = hadamard(b, a);
                assert_eq!(ab.coeffs(200), ba.coeffs(200));
                assert_eq!(ab, ba);
                for c in &samples {
                    let left = hadamard(&ab, c);
                    let right = hadamard(a, &hadamard(b, c));
                    assert_eq!(left.coeffs(200), right.coeffs(200));
                }
            }
        }
    }
}
