//! Rigorous enclosures of `f_0(1/b)`.
//!
//! The partial product over levels `y < n` is exact. For the tail, every
//! factor lies in `[1 - T_y, 1 + T_y]` with `T_y = sum_s |c(s,y)| b^(-s Q_y)`,
//! and with `M = max |c|`
//!
//! ```text
//! sum_{y >= n} T_y <= M (b / (b - 1))^2 b^(-Q_n) =: S_n
//! ```
//!
//! because `Q_{y+1} >= Q_y + 1`. When `S_n < 1` the tail product lies in
//! `[1 - S_n, 1 / (1 - S_n)]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::Interval;
use crate::numeration::weight;
use crate::product::spec::ProductSpec;

/// Give up after this many levels; `Q_n >= 2^n` so this is never reached for
/// sensible targets.
pub const MAX_DEPTH: usize = 64;

fn check_base(b: u64) -> Result<()> {
    if b < 2 {
        return Err(Error::DivergentSpec(format!("evaluation point 1/{b} is not inside the unit disk")));
    }
    Ok(())
}

fn q_exponent(spec: &ProductSpec, y: usize) -> Result<u32> {
    weight(&spec.radix, y).to_u32().ok_or_else(|| Error::InvalidArgument(format!("Q_{y} is too large to raise b to")))
}

/// Exact value of factor `y` at `z = 1/b`.
pub fn factor_value(spec: &ProductSpec, b: u64, y: usize) -> Result<BigRational> {
    let spec = spec.real_view()?;
    factor_value_real(&spec, b, y)
}

fn factor_value_real(spec: &ProductSpec, b: u64, y: usize) -> Result<BigRational> {
    let qy = q_exponent(spec, y)?;
    let bb = BigInt::from(b);
    let mut total = BigRational::one();
    for s in 1..=spec.radix.max_digit(y) {
        let c = spec.c(s, y).to_rational()?;
        if c.is_zero() {
            continue;
        }
        let exp = (s as u32).checked_mul(qy).ok_or_else(|| Error::InvalidArgument("exponent overflow".into()))?;
        total += c / BigRational::from_integer(bb.pow(exp));
    }
    Ok(total)
}

/// `prod_{y < n} F_y(1/b)` exactly.
pub fn partial_product(spec: &ProductSpec, b: u64, n: usize) -> Result<BigRational> {
    check_base(b)?;
    let spec = spec.real_view()?;
    let mut acc = BigRational::one();
    for y in 0..n {
        let f = factor_value_real(&spec, b, y)?;
        if f.is_zero() {
            return Err(Error::ZeroFactor { level: y });
        }
        acc *= f;
    }
    Ok(acc)
}

/// Tail bound `S_n`.
pub fn tail_bound(spec: &ProductSpec, b: u64, n: usize) -> Result<BigRational> {
    let m = spec.real_view()?.max_abs_coefficient();
    let ratio = BigRational::new(BigInt::from(b), BigInt::from(b - 1));
    let qn = q_exponent(spec, n)?;
    Ok(m * &ratio * &ratio / BigRational::from_integer(BigInt::from(b).pow(qn)))
}

/// Enclosure from the raw depth-`n` bound, before intersecting with
/// shallower ones. `None` while the tail bound is still 1 or more.
pub fn raw_enclosure(spec: &ProductSpec, b: u64, n: usize) -> Result<Option<Interval>> {
    check_base(b)?;
    let partial = partial_product(spec, b, n)?;
    let s = tail_bound(spec, b, n)?;
    if s >= BigRational::one() {
        return Ok(None);
    }
    let one = BigRational::one();
    let tail = Interval::new(&one - &s, one.clone() / (&one - &s));
    Ok(Some(tail.scale(&partial)))
}

/// Nested enclosures for depths `0..=max_depth`. Each one is the raw
/// depth bound intersected with all earlier ones; depths whose tail bound is
/// not yet below 1 are skipped.
pub fn enclosure_sequence(spec: &ProductSpec, b: u64, max_depth: usize) -> Result<Vec<(usize, Interval)>> {
    let mut out: Vec<(usize, Interval)> = Vec::new();
    for n in 0..=max_depth {
        let Some(raw) = raw_enclosure(spec, b, n)? else { continue };
        let next = match out.last() {
            Some((_, prev)) => prev.intersect(&raw).expect("valid enclosures of the same value intersect"),
            None => raw,
        };
        out.push((n, next));
    }
    Ok(out)
}

/// Interval of width at most `2 * target` containing `f_0(1/b)`, together
/// with the depth used.
pub fn evaluate_with_depth(spec: &ProductSpec, b: u64, target: &BigRational) -> Result<(Interval, usize)> {
    check_base(b)?;
    if !target.is_positive() {
        return Err(Error::InvalidArgument("target error must be positive".into()));
    }
    let limit = target * BigRational::from_integer(BigInt::from(2));
    let mut current: Option<Interval> = None;
    for n in 0..=MAX_DEPTH {
        let Some(raw) = raw_enclosure(spec, b, n)? else { continue };
        let next = match current {
            Some(prev) => prev.intersect(&raw).expect("valid enclosures of the same value intersect"),
            None => raw,
        };
        if next.width() <= limit {
            return Ok((next, n));
        }
        current = Some(next);
    }
    Err(Error::InvalidArgument(format!("target not reached within {MAX_DEPTH} levels")))
}

pub fn evaluate(spec: &ProductSpec, b: u64, target: &BigRational) -> Result<Interval> {
    evaluate_with_depth(spec, b, target).map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rational;
    use crate::numeration::RadixSequence;
    use crate::product::spec::ratio;
    use crate::rules::RowRule;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn geometric_binary_at_one_half() {
        let spec = ProductSpec::geometric(RadixSequence::binary());
        let i = evaluate(&spec, 2, &q("1/1000000000000")).unwrap();
        assert!(i.contains(&q("2")));
        assert!(i.width() <= q("2/1000000000000"));
    }

    #[test]
    fn geometric_periodic_radix_at_one_seventh() {
        let spec = ProductSpec::geometric(RadixSequence::Periodic { qs: vec![3, 5] });
        let target = BigRational::new(BigInt::one(), BigInt::from(10).pow(30));
        let (i, depth) = evaluate_with_depth(&spec, 7, &target).unwrap();
        assert!(i.contains(&q("7/6")));
        assert!(i.width() <= &target * BigRational::from_integer(2.into()));
        assert!(depth <= 4);
        // partial products are exact: prod_{y<n} F_y = (1 - 7^-Q_n) * 7/6
        for n in 0..4 {
            let qn = weight(&spec.radix, n).to_u32().unwrap();
            let expected = (BigRational::one() - BigRational::new(1.into(), BigInt::from(7).pow(qn))) * q("7/6");
            assert_eq!(partial_product(&spec, 7, n).unwrap(), expected);
        }
    }

    #[test]
    fn thue_morse_enclosures_nest() {
        let spec = ProductSpec::thue_morse();
        let seq = enclosure_sequence(&spec, 2, 8).unwrap();
        assert!(seq.len() >= 5);
        for w in seq.windows(2) {
            assert!(w[0].1.contains_interval(&w[1].1));
        }
        let last = &seq.last().unwrap().1;
        assert!(last.width() < q("1/1000000000000000000"));
    }

    #[test]
    fn zero_factor_and_bad_base() {
        // 1 - 2 * (1/2) = 0 at level 0
        let spec =
            ProductSpec::rational(RadixSequence::binary(), RowRule::Constant { values: vec![ratio(-2, 1)] }).unwrap();
        assert!(matches!(evaluate(&spec, 2, &q("1/100")), Err(Error::ZeroFactor { level: 0 })));
        let g = ProductSpec::geometric(RadixSequence::binary());
        assert!(matches!(evaluate(&g, 1, &q("1/100")), Err(Error::DivergentSpec(_))));
        assert!(evaluate(&g, 2, &q("0")).is_err());
    }

    #[test]
    fn unit_root_order_two_evaluates_like_signs() {
        let tm = ProductSpec::unit_root(RadixSequence::binary(), 2, RowRule::Constant { values: vec![1] }).unwrap();
        let a = evaluate(&tm, 3, &q("1/10000000000")).unwrap();
        let b = evaluate(&ProductSpec::thue_morse(), 3, &q("1/10000000000")).unwrap();
        assert_eq!(a, b);
        let cubic = ProductSpec::unit_root(RadixSequence::binary(), 3, RowRule::Constant { values: vec![1] }).unwrap();
        assert!(matches!(evaluate(&cubic, 2, &q("1/10")), Err(Error::UnsupportedDomain(_))));
    }
}
