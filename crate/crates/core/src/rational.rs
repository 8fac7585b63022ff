//! Exact rational numbers: parsing and canonical text form.
//!
//! Accepted literals are integers (`-3`), fractions (`7/4`) and finite
//! decimals (`-0.125`). The canonical output form is `p` or `p/q` in lowest
//! terms with a positive denominator.

use num::{BigInt, BigRational, One, Zero};

pub type Rational = BigRational;

/// Parse an integer, fraction or decimal literal.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = parse_int(num)?;
        let den: BigInt = parse_int(den)?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let digits = int_part.trim_start_matches(['+', '-']);
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let whole = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse::<BigInt>().ok()?
        };
        let scale = num::pow(BigInt::from(10), frac_part.len());
        let frac: BigInt = frac_part.parse().ok()?;
        let magnitude = Rational::new(whole * &scale + frac, scale);
        return Some(if negative { -magnitude } else { magnitude });
    }
    parse_int(s).map(Rational::from_integer)
}

fn parse_int(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical text form: `p` for integers, otherwise `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
