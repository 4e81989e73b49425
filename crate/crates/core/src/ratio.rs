//! Exact rational values and small combinatorial helpers.
//!
//! All exact densities in this crate are carried as [`Rational`], a reduced
//! fraction of arbitrary-precision integers with a positive denominator
//! (both guaranteed by the `num-rational` constructors).

use alloc::string::String;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

/// Exact fraction of arbitrary-precision integers; always reduced, denominator > 0.
pub type Rational = num_rational::Ratio<BigInt>;

/// Builds `num/den` from machine integers.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `n!` as an arbitrary-precision integer.
pub fn factorial(n: u64) -> BigUint {
    (2..=n).map(BigUint::from).product()
}

/// `n!` when it fits a `u64` (valid for `n <= 20`).
pub fn factorial_u64(n: u64) -> u64 {
    debug_assert!(n <= 20);
    (2..=n).product::<u64>().max(1)
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

/// Renders a rational as `p/q`, or a bare integer when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    if r.denom().is_one() {
        let _ = write!(s, "{}", r.numer());
    } else {
        let _ = write!(s, "{}/{}", r.numer(), r.denom());
    }
    s
}

/// Parses `p/q` or a bare integer. Returns `None` on malformed input or a
/// zero denominator.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let num: BigInt = p.trim().parse().ok()?;
            let den: BigInt = q.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Rational::new(num, den))
        }
        None => {
            let num: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(num))
        }
    }
}

/// Nearest-value float rendering of a rational (for report columns only;
/// exact paths never round).
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
