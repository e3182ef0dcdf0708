//! The dyadic product `prod_y (1 + (f_y / F_y) z^(2^y))` and its smallness
//! condition
//!
//! ```text
//! |f_y / F_y| <= |F_0 ... F_{y-1}|^-(e + k) b^(-e 2^y)
//! ```
//!
//! with `k = 2`, or `k = 1` when the `F_y` have finitely many primes.

use std::cmp::Ordering;
use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::NumberText;
use crate::log2::{log2_biguint, log2_u64, LogBracket};
use crate::primes::prime_factors;
use crate::product::value::{materialization_cap, power_bits};

use super::logcmp::compare;
use super::report::{format_primes, InequalityReport, InequalityRow, Variant};

/// Integer in JSON: decimal string or plain number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntText(pub BigInt);

impl<'de> Deserialize<'de> for IntText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = NumberText::deserialize(d)?;
        text.0.trim().parse::<BigInt>().map(IntText).map_err(serde::de::Error::custom)
    }
}

impl Serialize for IntText {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

fn default_mult() -> IntText {
    IntText(BigInt::one())
}

/// Finitely described integer sequence indexed by `y >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IntSequence {
    Constant {
        value: IntText,
    },
    Periodic {
        values: Vec<IntText>,
    },
    Table {
        values: Vec<IntText>,
        default: IntText,
    },
    /// `mult * base^(coeff * ratio^y)`.
    Power {
        base: u64,
        coeff: u64,
        ratio: u64,
        #[serde(default = "default_mult")]
        mult: IntText,
    },
}

/// `mult * base^exp`, never written out unless small.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerInt {
    pub mult: BigInt,
    pub base: u64,
    pub exp: BigUint,
}

impl PowerInt {
    fn int(v: &BigInt) -> Self {
        PowerInt { mult: v.clone(), base: 2, exp: BigUint::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.mult.is_zero()
    }

    pub fn abs_log2(&self, precision: u32) -> LogBracket {
        let m = log2_biguint(&self.mult.abs().to_biguint().expect("nonnegative"), precision);
        if self.exp.is_zero() {
            return m;
        }
        m.add(&log2_u64(self.base, precision).scale(&BigRational::from_integer(BigInt::from(self.exp.clone()))))
    }

    fn fits(&self) -> bool {
        power_bits(self.base, &self.exp) + self.mult.bits() <= BigUint::from(materialization_cap())
    }

    fn abs_value(&self) -> BigUint {
        let e = self.exp.to_u32().expect("checked by fits");
        self.mult.abs().to_biguint().expect("nonnegative") * BigUint::from(self.base).pow(e)
    }

    pub fn coprime_to(&self, c: u64) -> bool {
        let c = BigInt::from(c);
        !self.is_zero()
            && self.mult.gcd(&c).is_one()
            && (self.exp.is_zero() || BigInt::from(self.base).gcd(&c).is_one())
    }

    /// `|self| <= |other|` for a nonzero `other`.
    fn abs_le(&self, other: &PowerInt, index: usize) -> Result<bool> {
        if self.is_zero() {
            return Ok(true);
        }
        if self.fits() && other.fits() {
            return Ok(self.abs_value() <= other.abs_value());
        }
        let cmp = compare(index, |p| Ok((self.abs_log2(p), other.abs_log2(p))))?;
        Ok(cmp.ordering != Ordering::Greater)
    }
}

impl IntSequence {
    pub fn value(&self, y: usize) -> Result<PowerInt> {
        let empty = || Error::InvalidArgument("integer sequence has no values".into());
        Ok(match self {
            IntSequence::Constant { value } => PowerInt::int(&value.0),
            IntSequence::Periodic { values } => {
                let v = values.get(y % values.len().max(1)).ok_or_else(empty)?;
                PowerInt::int(&v.0)
            }
            IntSequence::Table { values, default } => PowerInt::int(&values.get(y).unwrap_or(default).0),
            IntSequence::Power { base, coeff, ratio, mult } => {
                if *base < 2 {
                    return Err(Error::InvalidArgument(format!("power base {base} must be at least 2")));
                }
                let y = u32::try_from(y).map_err(|_| Error::InvalidArgument("index too large".into()))?;
                PowerInt {
                    mult: mult.0.clone(),
                    base: *base,
                    exp: BigUint::from(*coeff) * BigUint::from(*ratio).pow(y),
                }
            }
        })
    }

    /// Primes of every value the sequence can take, by inspecting the rule.
    pub fn primes(&self) -> Vec<BigUint> {
        let of = |v: &BigInt| {
            let n = v.abs().to_biguint().expect("nonnegative");
            if n.is_zero() || n.is_one() {
                Vec::new()
            } else {
                prime_factors(&n)
            }
        };
        match self {
            IntSequence::Constant { value } => of(&value.0),
            IntSequence::Periodic { values } => values.iter().flat_map(|v| of(&v.0)).collect(),
            IntSequence::Table { values, default } => {
                values.iter().chain(std::iter::once(default)).flat_map(|v| of(&v.0)).collect()
            }
            IntSequence::Power { base, coeff, mult, .. } => {
                let mut out = of(&mult.0);
                if *coeff > 0 {
                    out.extend(of(&BigInt::from(*base)));
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prop23Variant {
    Main,
    Remark,
}

pub fn check_prop23(
    f: &IntSequence,
    big_f: &IntSequence,
    b: u64,
    c: u64,
    epsilon: &BigRational,
    variant: Prop23Variant,
    range: RangeInclusive<usize>,
) -> Result<InequalityReport> {
    if b < 2 || c < 2 || c > b {
        return Err(Error::InvalidArgument(format!("need 2 <= c <= b, got c = {c}, b = {b}")));
    }
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    if range.is_empty() {
        return Err(Error::InvalidArgument("empty index range".into()));
    }
    let k = BigRational::from_integer(BigInt::from(match variant {
        Prop23Variant::Main => 2,
        Prop23Variant::Remark => 1,
    }));
    let weight = &k + epsilon;
    let denominators: Vec<PowerInt> = (0..=*range.end()).map(|y| big_f.value(y)).collect::<Result<_>>()?;
    for (y, d) in denominators.iter().enumerate() {
        if d.is_zero() {
            return Err(Error::HypothesisViolated { index: y, reason: "F_y = 0".into() });
        }
    }
    let mut rows = Vec::new();
    for y in range.clone() {
        let fy = f.value(y)?;
        let fy_den = &denominators[y];
        if !fy.abs_le(fy_den, y)? {
            return Err(Error::HypothesisViolated { index: y, reason: "|f_y| > |F_y|".into() });
        }
        let rhs_at = |p: u32| {
            let sum =
                denominators[..y].iter().fold(LogBracket::exact(BigRational::zero()), |acc, d| acc.add(&d.abs_log2(p)));
            let tail = BigRational::from_integer(BigInt::one() << y) * epsilon;
            sum.scale(&weight).add(&log2_u64(b, p).scale(&tail)).neg()
        };
        let mut row = if fy.is_zero() {
            let rhs = rhs_at(64);
            let mut row = InequalityRow::from_comparison(
                y,
                &super::logcmp::Comparison { ordering: Ordering::Less, lhs: rhs.clone(), rhs, precision: 64 },
                true,
            );
            row.lhs_log2 = None;
            row.lhs_bounds = ["-inf".into(), "-inf".into()];
            row
        } else {
            let cmp = compare(y, |p| Ok((fy.abs_log2(p).sub(&fy_den.abs_log2(p)), rhs_at(p))))?;
            let holds = cmp.ordering != Ordering::Greater;
            InequalityRow::from_comparison(y, &cmp, holds)
        };
        row.coprime = Some(fy.coprime_to(c));
        rows.push(row);
    }
    let summary = InequalityReport::summarize(&rows);
    Ok(InequalityReport {
        variant: match variant {
            Prop23Variant::Main => Variant::Prop23,
            Prop23Variant::Remark => Variant::Prop23Remark,
        },
        epsilon: epsilon.clone(),
        b,
        l: None,
        c: Some(c),
        rows,
        summary,
        prime_set: match variant {
            Prop23Variant::Main => None,
            Prop23Variant::Remark => Some(format_primes(big_f.primes())),
        },
        decay_monotone: None,
    })
}
