//! Log-space checks of the approximation inequalities
//!
//! ```text
//! FIRST:  (1 + |r|) |alpha|^(1+e) |beta|^(2+e) |C_n B_n|^(3+e) < b^((1 - L e) Q_n)
//! SECOND: (1 + |r|) |alpha|^e |beta C_n B_n|^(1+e)            < b^((1 - L e) Q_n)
//! ```
//!
//! with `r = alpha / beta` and `B_n` the product of the reduced denominators
//! of `c(s, y)` over `y < n`.

use std::cmp::Ordering;
use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::log2::{log2_biguint, log2_u64, LogBracket};
use crate::numeration::{weight, RadixSequence};
use crate::primes::prime_factors;
use crate::product::spec::{Coefficients, ProductSpec, RationalRule};

use super::logcmp::{compare, log2_one_plus_abs};
use super::report::{
    format_log, format_primes, FactoredInt, InequalityReport, InequalityRow, Variant, WitnessEvidence,
};
use super::witness::{build_approximant, find_repetition, RationalApproximant, DEFAULT_WINDOW};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Thm21Variant {
    First,
    Second,
}

/// Product of the reduced denominators of every `c(s, y)` with `y < n`.
pub fn level_denominators(spec: &ProductSpec, n: usize) -> Result<FactoredInt> {
    let spec = spec.real_view()?;
    let mut acc = FactoredInt::one();
    for y in 0..n {
        for s in 1..=spec.radix.max_digit(y) {
            acc.mul_denominator(&spec.c(s, y).denominator()?);
        }
    }
    Ok(acc)
}

/// The product with `c(1, y) = 1 / 2^(2^y)` at factorial levels
/// `y = 1, 2, 6, 24, ...` and `1` elsewhere, on the binary radix; `b0`
/// replaces the base 2 of the coefficients.
pub fn corollary22_spec(b0: u64) -> Result<ProductSpec> {
    ProductSpec::new(RadixSequence::binary(), Coefficients::Rational(RationalRule::FactorialSupport { base: b0 }))
}

/// Per-tail data gathered before `L` is known.
struct TailData {
    approx: RationalApproximant,
    b_n: FactoredInt,
    q_n: BigRational,
}

fn gather(exec: Exec, spec: &ProductSpec, range: &RangeInclusive<usize>, l: Option<u64>) -> Result<Vec<TailData>> {
    let window = l.unwrap_or(DEFAULT_WINDOW);
    exec.try_map_range(*range.start() as u64, *range.end() as u64 + 1, |n| {
        let n = n as usize;
        let w = find_repetition(spec, n, window)?;
        let approx = build_approximant(spec, &w)?;
        Ok(TailData {
            approx,
            b_n: level_denominators(spec, n)?,
            q_n: BigRational::from_integer(BigInt::from(weight(&spec.radix, n))),
        })
    })
}

fn validate(b: u64, epsilon: &BigRational, range: &RangeInclusive<usize>) -> Result<()> {
    if b < 2 {
        return Err(Error::InvalidArgument(format!("b = {b} must be at least 2")));
    }
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    if range.is_empty() {
        return Err(Error::InvalidArgument("empty index range".into()));
    }
    Ok(())
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn abs_log2_int(v: &BigInt, precision: u32) -> LogBracket {
    log2_biguint(&v.abs().to_biguint().expect("nonnegative"), precision)
}

/// Right-hand side `(1 - L e) Q_n log2 b`.
fn rhs(b: u64, l: u64, epsilon: &BigRational, q_n: &BigRational, precision: u32) -> LogBracket {
    let k = (BigRational::one() - rat(l as i64) * epsilon) * q_n;
    log2_u64(b, precision).scale(&k)
}

fn evidence(d: &TailData) -> WitnessEvidence {
    let w = &d.approx.witness;
    WitnessEvidence {
        s: w.s,
        t: w.t,
        alpha: w.alpha.to_string(),
        beta: w.beta.to_string(),
        c: d.approx.c.to_string(),
        b: d.b_n.to_string(),
    }
}

/// Attach the decay column `log2(|r| b^-Q_n)` and its certified monotonicity.
fn decay_column(rows: &mut [InequalityRow], data: &[TailData], b: u64) -> Result<bool> {
    let mut prev: Option<LogBracket> = None;
    let mut monotone = true;
    for (row, d) in rows.iter_mut().zip(data) {
        let w = &d.approx.witness;
        let mut precision = 64;
        let value = loop {
            let v = w.ratio.abs_log2(precision).sub(&log2_u64(b, precision).scale(&d.q_n));
            // settle the comparison with the previous row when possible
            let settled = prev.as_ref().is_none_or(|p| v.hi < p.lo || v.lo >= p.hi);
            if settled || precision >= 4096 {
                break v;
            }
            precision *= 4;
        };
        if let Some(p) = &prev {
            let decreasing = value.hi < p.lo;
            monotone &= decreasing;
            row.decay_decreasing = Some(decreasing);
        }
        row.decay_log2 = Some(format_log(&value));
        prev = Some(value);
    }
    Ok(monotone)
}

pub fn check_theorem21(
    spec: &ProductSpec,
    b: u64,
    epsilon: &BigRational,
    variant: Thm21Variant,
    range: RangeInclusive<usize>,
    l: Option<u64>,
) -> Result<InequalityReport> {
    check_theorem21_with(Exec::default(), spec, b, epsilon, variant, range, l)
}

/// `l = None` searches witnesses in a window of [`DEFAULT_WINDOW`] and then
/// takes the least admissible `L`, the largest `s_n + t_n` over the range.
pub fn check_theorem21_with(
    exec: Exec,
    spec: &ProductSpec,
    b: u64,
    epsilon: &BigRational,
    variant: Thm21Variant,
    range: RangeInclusive<usize>,
    l: Option<u64>,
) -> Result<InequalityReport> {
    validate(b, epsilon, &range)?;
    let data = gather(exec, spec, &range, l)?;
    let l = l.unwrap_or_else(|| data.iter().map(|d| d.approx.witness.s + d.approx.witness.t).max().unwrap_or(1));
    let one = BigRational::one();
    let two = rat(2);
    let three = rat(3);
    let rows = exec.try_map_range(0, data.len() as u64, |i| {
        let d = &data[i as usize];
        let n = range.start() + i as usize;
        let w = &d.approx.witness;
        let cmp = compare(n, |p| {
            let ratio_term = log2_one_plus_abs(&w.ratio, p)?;
            let alpha = abs_log2_int(&w.alpha, p);
            let beta = w.beta.log2(p);
            let cb = log2_biguint(&d.approx.c, p).add(&d.b_n.log2(p));
            let lhs = match variant {
                Thm21Variant::First => ratio_term
                    .add(&alpha.scale(&(&one + epsilon)))
                    .add(&beta.scale(&(&two + epsilon)))
                    .add(&cb.scale(&(&three + epsilon))),
                Thm21Variant::Second => {
                    ratio_term.add(&alpha.scale(epsilon)).add(&beta.add(&cb).scale(&(&one + epsilon)))
                }
            };
            Ok((lhs, rhs(b, l, epsilon, &d.q_n, p)))
        })?;
        let mut row = InequalityRow::from_comparison(n, &cmp, cmp.ordering == Ordering::Less);
        row.witness = Some(evidence(d));
        Ok::<_, Error>(row)
    })?;
    let mut rows = rows;
    let decay_monotone = decay_column(&mut rows, &data, b)?;
    let prime_set = match variant {
        Thm21Variant::First => None,
        Thm21Variant::Second => {
            let mut primes: Vec<BigUint> = spec.prime_support()?.into_iter().collect();
            for d in &data {
                primes.extend(d.approx.witness.primes());
                if !d.approx.c.is_one() {
                    primes.extend(prime_factors(&d.approx.c));
                }
            }
            Some(format_primes(primes))
        }
    };
    let summary = InequalityReport::summarize(&rows);
    Ok(InequalityReport {
        variant: match variant {
            Thm21Variant::First => Variant::Thm21First,
            Thm21Variant::Second => Variant::Thm21Second,
        },
        epsilon: epsilon.clone(),
        b,
        l: Some(l),
        c: None,
        rows,
        summary,
        prime_set,
        decay_monotone: Some(decay_monotone),
    })
}

/// The specialized inequality `2 |beta_n prod_{y<n} b_{1,y}|^(1+e) <
/// b^((1 - e) 2^n)` for the factorial-support product, with the constant
/// factor of the underlying estimate dropped.
pub fn check_corollary22(
    b0: u64,
    b: u64,
    epsilon: &BigRational,
    range: RangeInclusive<usize>,
) -> Result<InequalityReport> {
    validate(b, epsilon, &range)?;
    let spec = corollary22_spec(b0)?;
    let data = gather(Exec::default(), &spec, &range, Some(1))?;
    let one = BigRational::one();
    let rows = data
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let n = range.start() + i;
            let w = &d.approx.witness;
            let cmp = compare(n, |p| {
                let lhs =
                    LogBracket::exact(one.clone()).add(&w.beta.log2(p).add(&d.b_n.log2(p)).scale(&(&one + epsilon)));
                Ok((lhs, rhs(b, 1, epsilon, &d.q_n, p)))
            })?;
            let mut row = InequalityRow::from_comparison(n, &cmp, cmp.ordering == Ordering::Less);
            row.witness = Some(evidence(d));
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = InequalityReport::summarize(&rows);
    Ok(InequalityReport {
        variant: Variant::Cor22,
        epsilon: epsilon.clone(),
        b,
        l: Some(1),
        c: None,
        rows,
        summary,
        prime_set: Some(format_primes(prime_factors(&BigUint::from(b0)))),
        decay_monotone: None,
    })
}
