//! Text encoding of exact rationals as `"p/q"` strings.
//!
//! The canonical form has `q > 0`, `gcd(p, q) = 1`, and omits `/q` when `q = 1`.
//! Parsing is strict: signs other than a single leading `-`, whitespace,
//! leading zeros and unreduced fractions are rejected so that every accepted
//! string has exactly one value and re-encodes to itself (up to an explicit `/1`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::FieldError;

/// Inputs longer than this are rejected before any big-integer work.
pub const MAX_FRACTION_LEN: usize = 4096;

pub fn format_fraction(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn parse_digits(text: &str, whole: &str) -> Result<BigInt, FieldError> {
    let malformed = || FieldError::MalformedFraction(whole.to_string());
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    if text.len() > 1 && text.starts_with('0') {
        return Err(malformed());
    }
    text.parse::<BigInt>().map_err(|_| malformed())
}

pub fn parse_fraction(text: &str) -> Result<BigRational, FieldError> {
    let malformed = || FieldError::MalformedFraction(text.to_string());
    if text.len() > MAX_FRACTION_LEN {
        return Err(malformed());
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (num_text, den_text) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let mut numer = parse_digits(num_text, text)?;
    if negative {
        if numer.is_zero() {
            return Err(malformed());
        }
        numer = -numer;
    }
    let denom = match den_text {
        Some(d) => parse_digits(d, text)?,
        None => BigInt::one(),
    };
    if !denom.is_positive() {
        return Err(malformed());
    }
    if !numer.gcd(&denom).is_one() && !(numer.is_zero() && denom.is_one()) {
        return Err(malformed());
    }
    Ok(BigRational::new_raw(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_fraction(&q(5, 3)), "5/3");
        assert_eq!(format_fraction(&q(-4, 2)), "-2");
        assert_eq!(format_fraction(&q(0, 7)), "0");
        assert_eq!(format_fraction(&q(3, -6)), "-1/2");
    }

    #[test]
    fn parses_canonical_strings() {
        assert_eq!(parse_fraction("5/3").unwrap(), q(5, 3));
        assert_eq!(parse_fraction("-7").unwrap(), q(-7, 1));
        assert_eq!(parse_fraction("0").unwrap(), q(0, 1));
        assert_eq!(parse_fraction("4/1").unwrap(), q(4, 1));
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "", "-", "/", "1/", "/2", "2/4", "1/0", "1/-2", "+1", " 1", "1 ", "01", "-0", "1/02", "1.5",
            "1/2/3", "0/5", "--1", "abc",
        ] {
            assert!(parse_fraction(bad).is_err(), "accepted {bad:?}");
        }
    }
}
