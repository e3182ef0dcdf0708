//! Report shapes shared by the inequality checkers.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::exact::{format_rational, rational_str};
use crate::log2::{log2_biguint, log2_u64, LogBracket};
use crate::primes::prime_factors;
use crate::product::value::{materialization_cap, power_bits, Denominator};

use super::logcmp::{format_bracket, representative, Comparison};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Variant {
    Thm21First,
    Thm21Second,
    Prop23,
    Prop23Remark,
    Cor22,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Summary {
    AllHold,
    FirstFailure(usize),
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summary::AllHold => f.write_str("ALL_HOLD"),
            Summary::FirstFailure(i) => write!(f, "FIRST_FAILURE({i})"),
        }
    }
}

impl Serialize for Summary {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Witness data behind one row of an approximation check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessEvidence {
    pub s: u64,
    pub t: u64,
    pub alpha: String,
    pub beta: String,
    #[serde(rename = "C")]
    pub c: String,
    #[serde(rename = "B")]
    pub b: String,
}

fn serialize_log<S: Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.collect_str(&format_rational(r)),
        None => s.serialize_str("-inf"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityRow {
    pub n: usize,
    /// Exact when the bracket is a point, its midpoint otherwise; `None`
    /// (written `"-inf"`) when the left side is zero.
    #[serde(serialize_with = "serialize_log")]
    pub lhs_log2: Option<BigRational>,
    #[serde(with = "rational_str")]
    pub rhs_log2: BigRational,
    pub lhs_bounds: [String; 2],
    pub rhs_bounds: [String; 2],
    pub holds: bool,
    /// Bits of precision at which the comparison was settled.
    pub precision: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessEvidence>,
    /// `log2(|alpha / beta| b^-Q_n)`, representative value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay_log2: Option<String>,
    /// Certified strictly below the previous row's decay value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay_decreasing: Option<bool>,
    /// `gcd(f_y, c) = 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coprime: Option<bool>,
}

impl InequalityRow {
    pub fn from_comparison(n: usize, cmp: &Comparison, holds: bool) -> Self {
        InequalityRow {
            n,
            lhs_log2: Some(representative(&cmp.lhs)),
            rhs_log2: representative(&cmp.rhs),
            lhs_bounds: format_bracket(&cmp.lhs),
            rhs_bounds: format_bracket(&cmp.rhs),
            holds,
            precision: cmp.precision,
            witness: None,
            decay_log2: None,
            decay_decreasing: None,
            coprime: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub variant: Variant,
    #[serde(with = "rational_str")]
    pub epsilon: BigRational,
    pub b: u64,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<u64>,
    pub rows: Vec<InequalityRow>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_set: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay_monotone: Option<bool>,
}

impl InequalityReport {
    pub fn summarize(rows: &[InequalityRow]) -> Summary {
        rows.iter().find(|r| !r.holds).map_or(Summary::AllHold, |r| Summary::FirstFailure(r.n))
    }

    pub fn all_hold(&self) -> bool {
        self.summary == Summary::AllHold
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Positive integer `int * prod base^exp`, kept factored so that powers past
/// the materialization cap stay symbolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInt {
    int: BigUint,
    pows: BTreeMap<u64, BigUint>,
}

impl Default for FactoredInt {
    fn default() -> Self {
        FactoredInt::one()
    }
}

impl FactoredInt {
    pub fn one() -> Self {
        FactoredInt { int: BigUint::one(), pows: BTreeMap::new() }
    }

    pub fn mul_denominator(&mut self, d: &Denominator) {
        match d {
            Denominator::Int(n) => self.int *= n,
            Denominator::Pow { base, exp } => *self.pows.entry(*base).or_default() += exp,
        }
    }

    pub fn log2(&self, precision: u32) -> LogBracket {
        let mut acc = log2_biguint(&self.int, precision);
        for (base, exp) in &self.pows {
            acc = acc.add(&log2_u64(*base, precision).scale(&BigRational::from_integer(BigInt::from(exp.clone()))));
        }
        acc
    }

    pub fn primes(&self) -> Vec<BigUint> {
        let mut out = if self.int.is_one() { Vec::new() } else { prime_factors(&self.int) };
        for base in self.pows.keys() {
            out.extend(prime_factors(&BigUint::from(*base)));
        }
        out
    }

    pub fn materialize(&self) -> Result<BigUint> {
        let mut acc = self.int.clone();
        for (base, exp) in &self.pows {
            let d = Denominator::Pow { base: *base, exp: exp.clone() };
            acc *= d.materialize()?;
        }
        Ok(acc)
    }

    /// Would [`materialize`](Self::materialize) stay under the cap?
    pub fn fits(&self) -> bool {
        let mut bits = BigUint::from(self.int.bits());
        for (base, exp) in &self.pows {
            bits += power_bits(*base, exp);
        }
        bits <= BigUint::from(materialization_cap())
    }
}

impl fmt::Display for FactoredInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.fits() {
            return write!(f, "{}", self.materialize().expect("fits"));
        }
        let mut parts = Vec::new();
        if !self.int.is_one() {
            parts.push(self.int.to_string());
        }
        parts.extend(self.pows.iter().map(|(b, e)| format!("{b}^{e}")));
        f.write_str(&parts.join("*"))
    }
}

pub(crate) fn format_primes(primes: impl IntoIterator<Item = BigUint>) -> Vec<String> {
    let set: std::collections::BTreeSet<BigUint> = primes.into_iter().collect();
    set.into_iter().map(|p| p.to_string()).collect()
}

pub(crate) fn format_log(b: &LogBracket) -> String {
    format_rational(&representative(b))
}
