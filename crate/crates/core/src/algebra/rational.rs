//! Arbitrary-precision rationals.
//!
//! `Q` is `num_rational::BigRational`, which already keeps the fraction
//! reduced with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

/// Canonical text: `a` or `a/b`.
pub fn fmt_q(c: &Q) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Least common multiple of the denominators.
pub fn lcm_denoms<'a>(it: impl IntoIterator<Item = &'a Q>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

/// Gcd of the numerators (nonnegative; zero for an empty or all-zero list).
pub fn gcd_numers<'a>(it: impl IntoIterator<Item = &'a Q>) -> BigInt {
    it.into_iter()
        .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
}

pub fn is_integer(c: &Q) -> bool {
    c.denom().is_one()
}

pub fn abs_q(c: &Q) -> Q {
    c.abs()
}

/// `(-1)^k`
pub fn sign_q(k: i64) -> Q {
    if k.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}
