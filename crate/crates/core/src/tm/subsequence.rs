//! Arithmetic subsequences `a(N + n l)`: their values at `1/b` and an exact
//! scan for ultimate periodicity.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::Interval;
use crate::exec::Exec;

use super::{letter_u64, TMSpec};

/// How residues become numbers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ValueMap {
    /// `r -> exp(2 pi i r / L)`, for `L <= 3`. Values are written in the
    /// basis `1` (`L <= 2`) or `1, omega` with `omega^2 + omega + 1 = 0`.
    #[default]
    Roots,
    /// `r -> values[r]`, any `L`.
    Table(Vec<BigRational>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Real,
    Omega,
}

/// Enclosure of `sum_n v(a(N + n l)) / b^(n + 1)`, one interval per basis
/// coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsequenceValue {
    pub basis: Basis,
    pub components: Vec<Interval>,
    /// Number of summed terms.
    pub terms: u64,
}

fn coordinates(map: &ValueMap, l: u64) -> Result<(Basis, Vec<Vec<BigRational>>)> {
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    match map {
        ValueMap::Roots => match l {
            1 => Ok((Basis::Real, vec![vec![int(1)]])),
            2 => Ok((Basis::Real, vec![vec![int(1)], vec![int(-1)]])),
            3 => Ok((Basis::Omega, vec![vec![int(1), int(0)], vec![int(0), int(1)], vec![int(-1), int(-1)]])),
            _ => {
                Err(Error::UnsupportedDomain(format!("exact values of roots of unity of order {l} are not supported")))
            }
        },
        ValueMap::Table(values) => {
            if values.len() as u64 != l {
                return Err(Error::InvalidArgument(format!("value table has {} entries, L = {l}", values.len())));
            }
            Ok((Basis::Real, values.iter().map(|v| vec![v.clone()]).collect()))
        }
    }
}

fn index(n0: u64, l: u64, n: u64) -> Result<u64> {
    l.checked_mul(n)
        .and_then(|x| x.checked_add(n0))
        .ok_or_else(|| Error::InvalidArgument("subsequence index overflows 64 bits".into()))
}

pub fn subsequence_value(
    spec: &TMSpec,
    map: &ValueMap,
    n0: u64,
    l: u64,
    b: u64,
    target: &BigRational,
) -> Result<SubsequenceValue> {
    if l == 0 {
        return Err(Error::InvalidArgument("step l must be at least 1".into()));
    }
    if b < 2 {
        return Err(Error::InvalidArgument(format!("b = {b} must be at least 2")));
    }
    if !target.is_positive() {
        return Err(Error::InvalidArgument("target error must be positive".into()));
    }
    let (basis, coords) = coordinates(map, spec.l)?;
    let dims = coords[0].len();
    let bound = coords.iter().flatten().map(|v| v.abs()).max().unwrap_or_else(BigRational::zero);
    let bb = BigInt::from(b);
    // tail after k terms: bound / (b^k (b - 1))
    let mut k = 0u64;
    let mut bk = BigInt::one();
    loop {
        let tail = &bound / BigRational::from_integer(&bk * (&bb - 1));
        if tail <= *target {
            break;
        }
        k += 1;
        bk *= &bb;
    }
    let mut sums = vec![BigRational::zero(); dims];
    let mut scale = BigRational::new(BigInt::one(), bb.clone());
    for n in 0..k {
        let r = letter_u64(spec, index(n0, l, n)?) as usize;
        for (sum, v) in sums.iter_mut().zip(&coords[r]) {
            if !v.is_zero() {
                *sum += v * &scale;
            }
        }
        scale /= BigRational::from_integer(bb.clone());
    }
    let tail = &bound / BigRational::from_integer(&bk * (&bb - 1));
    let components = sums.into_iter().map(|s| Interval::new(&s - &tail, &s + &tail)).collect();
    Ok(SubsequenceValue { basis, components, terms: k })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanVerdict {
    Periodic { preperiod: u64, period: u64 },
    NoPeriodUpTo { max_period: u64, horizon: u64 },
}

impl fmt::Display for ScanVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanVerdict::Periodic { preperiod, period } => write!(f, "PERIODIC({preperiod}, {period})"),
            ScanVerdict::NoPeriodUpTo { max_period, horizon } => write!(f, "NO_PERIOD_UP_TO({max_period}, {horizon})"),
        }
    }
}

impl Serialize for ScanVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn subsequence_period_scan(spec: &TMSpec, n0: u64, l: u64, max_period: u64, horizon: u64) -> Result<ScanVerdict> {
    subsequence_period_scan_with(Exec::default(), spec, n0, l, max_period, horizon)
}

/// Smallest period `p <= max_period` such that `x_i = x_{i+p}` for every
/// `i >= pre` inside the horizon with `pre <= horizon / 2`, reported with
/// its least such `pre`.
pub fn subsequence_period_scan_with(
    exec: Exec,
    spec: &TMSpec,
    n0: u64,
    l: u64,
    max_period: u64,
    horizon: u64,
) -> Result<ScanVerdict> {
    if l == 0 || max_period == 0 {
        return Err(Error::InvalidArgument("step and max period must be at least 1".into()));
    }
    if horizon < 2 * max_period {
        return Err(Error::InvalidArgument(format!("horizon {horizon} is below twice the max period {max_period}")));
    }
    let xs: Vec<u64> = exec.try_map_range(0, horizon, |n| Ok::<_, Error>(letter_u64(spec, index(n0, l, n)?)))?;
    let preperiods = exec.map_range(1, max_period + 1, |p| {
        let p = p as usize;
        (0..xs.len() - p).rev().find(|&i| xs[i] != xs[i + p]).map_or(0, |i| i as u64 + 1)
    });
    Ok(preperiods
        .into_iter()
        .enumerate()
        .find(|(_, pre)| *pre <= horizon / 2)
        .map(|(i, preperiod)| ScanVerdict::Periodic { preperiod, period: i as u64 + 1 })
        .unwrap_or(ScanVerdict::NoPeriodUpTo { max_period, horizon }))
}
