//! Exact rationals and small combinatorial helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::ParseError;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `n!/d!` as an exact rational (either may be the larger).
pub fn factorial_ratio(n: u32, d: u32) -> Rational {
    Rational::new(factorial(n), factorial(d))
}

/// Parses `"3"`, `"-3/7"`, or `"3/7"`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Syntax {
        pos: 0,
        message: format!("not a rational number: {s:?}"),
    };
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions() {
        assert_eq!(parse_rational("3/7").unwrap(), ratio(3, 7));
        assert_eq!(parse_rational(" -6/4 ").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("12").unwrap(), rat(12));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn lowest_terms() {
        let r = ratio(10, -4);
        assert_eq!(r.numer(), &BigInt::from(-5));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(ratio(0, 5), Rational::zero());
    }

    #[test]
    fn combinatorics() {
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(factorial_ratio(3, 5), ratio(1, 20));
    }
}
