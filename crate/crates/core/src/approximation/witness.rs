//! Repetition witnesses `(s, t, alpha / beta)` and the rational approximants
//! they induce.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{bigint_str, biguint_str};
use crate::primes::prime_factors;
use crate::product::spec::ProductSpec;
use crate::product::stream::coefficient_u64;
use crate::product::value::{CoefficientValue, Denominator};

/// Window searched when the caller does not fix `L`.
pub const DEFAULT_WINDOW: u64 = 64;

/// Extra degrees inspected past the guaranteed remainder order.
const REMAINDER_LOOKAHEAD: u64 = 4;

/// `(alpha / beta) a_n(t) = a_n(t + s)` with `a_n(t) != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepetitionWitness {
    pub n: usize,
    pub s: u64,
    pub t: u64,
    #[serde(serialize_with = "serialize_display")]
    pub ratio: CoefficientValue,
    #[serde(with = "bigint_str")]
    pub alpha: BigInt,
    #[serde(serialize_with = "serialize_display")]
    pub beta: Denominator,
    #[serde(rename = "L")]
    pub l: u64,
}

fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl RepetitionWitness {
    /// Primes of `alpha` and `beta`.
    pub fn primes(&self) -> Vec<BigUint> {
        let mut out = Vec::new();
        let a = self.alpha.abs().to_biguint().expect("nonnegative");
        if !a.is_one() {
            out.extend(prime_factors(&a));
        }
        out.extend(denominator_primes(&self.beta));
        out
    }
}

pub(crate) fn denominator_primes(d: &Denominator) -> Vec<BigUint> {
    match d {
        Denominator::Int(n) if n.is_one() => Vec::new(),
        Denominator::Int(n) => prime_factors(n),
        Denominator::Pow { base, .. } => prime_factors(&BigUint::from(*base)),
    }
}

/// First witness in the window `t + s <= window`: smallest `t`, then
/// smallest `s`, with both anchors nonzero.
pub fn find_repetition(spec: &ProductSpec, n: usize, l: u64) -> Result<RepetitionWitness> {
    if l == 0 {
        return Err(Error::InvalidArgument("L must be at least 1".into()));
    }
    let spec = spec.real_view()?;
    let window: Vec<CoefficientValue> = (0..=l).map(|m| coefficient_u64(&spec, n, m)).collect::<Result<_>>()?;
    let no_witness = || Error::NoWitness { tail: n, window: l as usize };
    let t = window.iter().position(|a| !a.is_zero()).ok_or_else(no_witness)?;
    let s = window[t + 1..].iter().position(|a| !a.is_zero()).ok_or_else(no_witness)? + 1;
    let ratio = window[t + s].div(&window[t])?;
    let alpha = ratio.numerator()?;
    let beta = ratio.denominator()?;
    Ok(RepetitionWitness { n, s: s as u64, t: t as u64, ratio, alpha, beta, l })
}

/// `p_n(z) / (1 - (alpha / beta) z^s)` matching `f_n` through degree `s + t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalApproximant {
    pub witness: RepetitionWitness,
    /// Coefficients of `p_n`, constant term first, degree at most `s + t - 1`.
    #[serde(serialize_with = "serialize_rationals")]
    pub p: Vec<BigRational>,
    /// Least positive integer with `C_n p_n` integral.
    #[serde(rename = "C", with = "biguint_str")]
    pub c: BigUint,
    /// Degree of the first nonzero coefficient of
    /// `(1 - (alpha / beta) z^s) f_n - p_n` seen within the lookahead, if any.
    pub remainder_order: Option<u64>,
}

fn serialize_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::exact::format_rational))
}

impl RationalApproximant {
    /// `p_n(x)` exactly.
    pub fn eval_p(&self, x: &BigRational) -> BigRational {
        self.p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// `C_n p_n` as integers.
    pub fn integer_p(&self) -> Vec<BigInt> {
        let c = BigRational::from_integer(BigInt::from(self.c.clone()));
        self.p.iter().map(|v| (v * &c).to_integer()).collect()
    }
}

/// Coefficient `m` of `(1 - r z^s) f_n(z)`.
fn shifted_difference(spec: &ProductSpec, w: &RepetitionWitness, m: u64) -> Result<CoefficientValue> {
    let a = coefficient_u64(spec, w.n, m)?;
    if m < w.s {
        return Ok(a);
    }
    let back = coefficient_u64(spec, w.n, m - w.s)?.mul(&w.ratio)?;
    a.sub(&back)
}

pub fn build_approximant(spec: &ProductSpec, w: &RepetitionWitness) -> Result<RationalApproximant> {
    let spec = spec.real_view()?;
    let order = w.s + w.t;
    let mut p = Vec::with_capacity(order as usize);
    for m in 0..order {
        p.push(shifted_difference(&spec, w, m)?.to_rational()?);
    }
    // the remainder starts at degree s + t + 1 at the earliest
    let top = shifted_difference(&spec, w, order)?;
    if !top.is_zero() {
        return Err(Error::WitnessInvalid { degree: order as usize });
    }
    let mut remainder_order = None;
    for m in order + 1..=order + REMAINDER_LOOKAHEAD {
        match shifted_difference(&spec, w, m) {
            Ok(v) if !v.is_zero() => {
                remainder_order = Some(m);
                break;
            }
            Ok(_) => {}
            // past the guaranteed range the check is best effort
            Err(Error::CapExceeded { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    let c = p.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom())).to_biguint().expect("positive");
    Ok(RationalApproximant { witness: w.clone(), p, c, remainder_order })
}
