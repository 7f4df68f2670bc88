//! Exact rational helpers shared by the geometric modules.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary-precision rational.
pub type Q = BigRational;

/// `n / d` as a [`Q`].
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a [`Q`].
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

/// Whether `x` is an integer.
pub fn is_int(x: &Q) -> bool {
    x.is_integer()
}

/// `x` as an `i64` if it is a small integer.
pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        i64::try_from(x.to_integer()).ok()
    } else {
        None
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()))
}

/// Nearest `f64`.
pub fn to_f64(x: &Q) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

/// Render as `n` or `n/d`.
pub fn render(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `n`, `n/d` or a terminating decimal such as `-0.75`.
pub fn parse(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((w, f)) = s.split_once('.') {
        if f.is_empty() || !f.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = w.starts_with('-');
        let digits = format!("{}{}", w.trim_start_matches('-'), f);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), f.len());
        let v = Q::new(n, d);
        return Some(if neg { -v } else { v });
    }
    s.parse::<BigInt>().ok().map(Q::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/4"), Some(q(3, 4)));
        assert_eq!(parse("-0.75"), Some(q(-3, 4)));
        assert_eq!(parse("2"), Some(qi(2)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(render(&q(-6, 8)), "-3/4");
    }

    #[test]
    fn fractional_part_is_nonnegative() {
        assert_eq!(frac(&q(-1, 3)), q(2, 3));
        assert_eq!(frac(&qi(5)), qi(0));
    }
}
