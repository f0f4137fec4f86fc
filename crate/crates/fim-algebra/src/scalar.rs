//! Exact scalars: arbitrary-precision rationals and the field interface the
//! matrix substrate is written against.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// The base field. `BigRational` keeps fractions reduced with a positive
/// denominator, which is exactly the invariant we need.
pub type Q = BigRational;

/// Minimal field interface: exact arithmetic, no topology.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl Field for Q {}

/// `n` as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n/d` as a rational. Panics on `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `2^e` for any integer exponent, exact.
pub fn pow2(e: i64) -> Q {
    if e >= 0 {
        Q::from_integer(BigInt::one() << e as usize)
    } else {
        Q::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// True when the reduced denominator is a power of two (membership in ℤ[1/2]).
pub fn is_dyadic(x: &Q) -> bool {
    let mut d = x.denom().abs();
    let two = BigInt::from(2);
    while (&d % &two).is_zero() {
        d /= &two;
    }
    d.is_one()
}

/// Render as `p/q` (or just `p` for integers); used by the JSON reports.
pub fn q_to_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `p` or `p/q`.
pub fn q_from_str(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
        Some((n, d)) => {
            let n = n.trim().parse::<BigInt>().ok()?;
            let d = d.trim().parse::<BigInt>().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_both_signs() {
        assert_eq!(pow2(0), qi(1));
        assert_eq!(pow2(3), qi(8));
        assert_eq!(pow2(-2), q(1, 4));
        assert_eq!(pow2(-6) * pow2(6), qi(1));
    }

    #[test]
    fn dyadic_detection() {
        assert!(is_dyadic(&q(3, 16)));
        assert!(is_dyadic(&qi(7)));
        assert!(!is_dyadic(&q(1, 3)));
        assert!(!is_dyadic(&q(5, 6)));
    }

    #[test]
    fn string_round_trip() {
        for s in ["0", "-7", "2/3", "-11/64"] {
            let v = q_from_str(s).unwrap();
            assert_eq!(q_to_string(&v), s);
        }
        assert_eq!(q_from_str("4/6").unwrap(), q(2, 3));
        assert!(q_from_str("1/0").is_none());
    }
}
