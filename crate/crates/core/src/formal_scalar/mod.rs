//! The base field: completed Newton-Puiseux series `ℂ⟨⟨λ⟩⟩` over `ℚ(i)`.
//!
//! Elements are stored as finite prefixes with an explicit truncation order,
//! so precision loss is always visible in the data.

mod complex;
mod order;
mod series;

pub use complex::CRational;
pub use order::{AbsValue, Order, Valuation};
pub use series::FormalScalar;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational in canonical reduced form.
pub type Rational = num_rational::BigRational;

/// Builds `num/den` from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`; whitespace around the parts is ignored.
pub fn parse_rational(s: &str) -> Option<Rational> {
    use num_traits::Num;
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str_radix(n, 10).ok()?;
    let d = BigInt::from_str_radix(d, 10).ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Exact `k`-th root of a nonnegative integer, if it exists.
fn exact_int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact `k`-th root of a nonnegative rational, if it exists.
pub fn exact_root(x: &Rational, k: u32) -> Option<Rational> {
    if x.is_negative() || k == 0 {
        return None;
    }
    let n = exact_int_root(x.numer(), k)?;
    let d = exact_int_root(x.denom(), k)?;
    Some(Rational::new(n, d))
}

/// Exact square root of a nonnegative rational, if it exists.
pub fn exact_sqrt(x: &Rational) -> Option<Rational> {
    exact_root(x, 2)
}

/// `x^e` for a rational `x > 0` and rational `e`, when the result is rational.
pub fn rational_power(x: &Rational, e: &Rational) -> Option<Rational> {
    if !x.is_positive() {
        return if x.is_zero() && e.is_positive() { Some(Rational::zero()) } else { None };
    }
    let den: u32 = e.denom().try_into().ok()?;
    let root = exact_root(x, den)?;
    let num: i32 = e.numer().try_into().ok()?;
    Some(pow_i32(&root, num))
}

/// Integer power, negative exponents allowed for nonzero bases.
pub fn pow_i32(x: &Rational, e: i32) -> Rational {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `n (n-1) ··· (n-k+1)`.
pub(crate) fn falling_factorial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

