//! Exact rational helpers: text forms, closed intervals, serde adapters.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Parse `"p/q"`, `"p"` or `"-p/q"` into a rational in lowest terms.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::InvalidArgument(format!("not a rational: {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::InvalidArgument(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn pow2(exp: i64) -> BigRational {
    if exp >= 0 {
        BigRational::from_integer(BigInt::one() << (exp as usize))
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << ((-exp) as usize))
    }
}

pub fn rational_from_biguint(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// Approximate `log2 |x|`, for diagnostics only. `None` for zero.
pub fn approx_log2(x: &BigRational) -> Option<f64> {
    if x.is_zero() {
        return None;
    }
    Some(approx_log2_int(x.numer()) - approx_log2_int(x.denom()))
}

fn approx_log2_int(n: &BigInt) -> f64 {
    let n = n.abs();
    let bits = n.bits();
    if bits <= 64 {
        let v: u64 = n.try_into().expect("fits");
        return (v as f64).log2();
    }
    let shift = bits - 64;
    let top: u64 = (&n >> shift).try_into().expect("fits");
    (top as f64).log2() + shift as f64
}

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    /// Interval spanned by two endpoints in either order.
    pub fn hull(a: BigRational, b: BigRational) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if self.lo >= other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi <= other.hi { &self.hi } else { &other.hi };
        (lo <= hi).then(|| Interval { lo: lo.clone(), hi: hi.clone() })
    }

    pub fn scale(&self, k: &BigRational) -> Interval {
        Interval::hull(&self.lo * k, &self.hi * k)
    }

    pub fn add_scalar(&self, k: &BigRational) -> Interval {
        Interval { lo: &self.lo + k, hi: &self.hi + k }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
        let lo = products.iter().min().expect("nonempty").clone();
        let hi = products.iter().max().expect("nonempty").clone();
        Interval { lo, hi }
    }

    /// Upper bound on `|x|` over the interval.
    pub fn magnitude(&self) -> BigRational {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [format_rational(&self.lo), format_rational(&self.hi)].serialize(s)
    }
}

/// Serde adapter: rational as `"p/q"` string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        format_rational(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let text = NumberText::deserialize(d)?;
        parse_rational(&text.0).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: big integer as decimal string.
pub mod bigint_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let text = NumberText::deserialize(d)?;
        BigInt::from_str(text.0.trim()).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: unsigned big integer as decimal string.
pub mod biguint_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        let text = NumberText::deserialize(d)?;
        BigUint::from_str(text.0.trim()).map_err(serde::de::Error::custom)
    }
}

/// Accepts either a JSON string or a JSON integer and keeps its text.
#[derive(Debug, Clone)]
pub struct NumberText(pub String);

impl<'de> Deserialize<'de> for NumberText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => Ok(NumberText(s)),
            serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => Ok(NumberText(n.to_string())),
            other => Err(serde::de::Error::custom(format!("expected integer or \"p/q\" string, got {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parses_and_formats() {
        assert_eq!(format_rational(&q("6/4")), "3/2");
        assert_eq!(format_rational(&q("-10/5")), "-2");
        assert_eq!(format_rational(&q(" 7 ")), "7");
        assert_eq!(format_rational(&q("3/-6")), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn interval_ops() {
        let a = Interval::new(q("-1"), q("2"));
        let b = Interval::new(q("3"), q("4"));
        assert_eq!(a.mul(&b), Interval::new(q("-4"), q("8")));
        assert_eq!(a.scale(&q("-2")), Interval::new(q("-4"), q("2")));
        assert!(!a.intersects(&b));
        assert_eq!(a.intersect(&Interval::new(q("1"), q("5"))), Some(Interval::new(q("1"), q("2"))));
        assert_eq!(a.magnitude(), q("2"));
        assert_eq!(a.midpoint(), q("1/2"));
    }

    #[test]
    fn approx_log2_of_large_values() {
        let big = BigRational::from_integer(BigInt::one() << 300usize);
        assert!((approx_log2(&big).unwrap() - 300.0).abs() < 1e-9);
        assert!((approx_log2(&q("1/8")).unwrap() + 3.0).abs() < 1e-12);
        assert_eq!(approx_log2(&q("0")), None);
    }
}
