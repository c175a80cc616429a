//! Exact rational arithmetic used for every grid threshold and accept/reject
//! decision. No floating point is involved in any comparison that affects a
//! result.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_usize(n: usize) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Floor of a non-negative rational as `usize`.
pub fn floor_usize(r: &Rat) -> usize {
    debug_assert!(!r.is_negative());
    r.floor().to_integer().to_usize().unwrap_or(usize::MAX)
}

/// Ceiling of a non-negative rational as `usize`.
pub fn ceil_usize(r: &Rat) -> usize {
    debug_assert!(!r.is_negative());
    r.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
}

/// Parses a plain decimal literal such as `0.125`, `2`, or `.5` exactly.
pub fn parse_decimal(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1i64, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return None;
    }
    let mut parts = body.splitn(2, '.');
    let int_part = parts.next().unwrap_or("");
    let frac_part = parts.next().unwrap_or("");
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let int_val: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part.parse().ok()?
    };
    let mut num = int_val;
    let mut den = BigInt::one();
    for c in frac_part.chars() {
        num = num * 10 + (c as u8 - b'0');
        den *= 10;
    }
    let mut r = Rat::new(num, den);
    if sign < 0 {
        r = -r;
    }
    Some(r)
}

/// Renders a rational as `p/q` (or just `p` when integral).
pub fn display(r: &Rat) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The descending geometric grid `start, start/(1+eps), ...` down to `min`
/// (inclusive: the last emitted value is the first one `>= min`; a final value
/// below `min` is not emitted).
pub fn geometric_down(start: &Rat, eps: &Rat, min: &Rat) -> Vec<Rat> {
    let ratio = Rat::one() + eps.clone();
    let mut out = Vec::new();
    let mut cur = start.clone();
    while cur >= *min {
        out.push(cur.clone());
        cur /= ratio.clone();
        if out.len() > 100_000 {
            break;
        }
    }
    out
}

/// `r` rounded to an f64 for reporting only.
pub fn approx_f64(r: &Rat) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_decimal("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_decimal("2").unwrap(), rat_int(2));
        assert_eq!(parse_decimal(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_decimal("-0.1").unwrap(), rat(-1, 10));
        assert!(parse_decimal("abc").is_none());
        assert!(parse_decimal("").is_none());
    }

    #[test]
    fn geometric_grid_endpoints() {
        let grid = geometric_down(&rat_int(1), &rat(1, 1), &rat(1, 8));
        // 1, 1/2, 1/4, 1/8
        assert_eq!(grid.len(), 4);
        assert_eq!(grid[3], rat(1, 8));
    }
}
