//! Arbitrary-precision rationals and a few exact integer helpers.

use alloc::format;
use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical text form: `"p/q"` in lowest terms, or `"p"` when the value is an integer.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a fraction: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Binomial coefficient, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc
            .checked_mul(u128::from(n - i))
            .expect("binomial overflow")
            / u128::from(i + 1);
    }
    acc
}

/// Binomial with signed arguments, zero outside `0 <= k <= n`.
pub fn binomial_i(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 || k > n {
        0
    } else {
        binomial(n as u64, k as u64)
    }
}

/// Exact square root of a nonnegative rational, if it is a rational square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    let rn = n.sqrt();
    let rd = d.sqrt();
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rational::new(rn, rd))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    let mut l = BigInt::one();
    for v in values {
        l = num_integer::Integer::lcm(&l, v.denom());
    }
    l
}

pub fn floor_int(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

pub fn ceil_int(q: &Rational) -> BigInt {
    q.ceil().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_strings() {
        assert_eq!(format_rational(&ratio(405, 4)), "405/4");
        assert_eq!(format_rational(&int(560)), "560");
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
        assert_eq!(parse_rational("10/4").unwrap(), ratio(5, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(10, 5), 252);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial_i(4, -1), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }

    #[test]
    fn squares() {
        assert_eq!(rational_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(rational_sqrt(&int(2)), None);
        assert_eq!(rational_sqrt(&int(-4)), None);
        assert_eq!(rational_sqrt(&int(0)), Some(int(0)));
    }
}
