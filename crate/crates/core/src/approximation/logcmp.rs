//! Certified comparison of logarithms with escalating precision.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::log2::{log2_rational, LogBracket};
use crate::product::value::CoefficientValue;

/// Working precisions tried in turn, in bits.
pub const PRECISIONS: [u32; 5] = [64, 256, 1024, 4096, 16384];

/// Outcome of a certified comparison of `lhs` against `rhs`.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub ordering: Ordering,
    pub lhs: LogBracket,
    pub rhs: LogBracket,
    pub precision: u32,
}

/// Compare two quantities given as log brackets that can be recomputed at any
/// precision. Equality is only reported when both sides are exact.
pub fn compare<F>(index: usize, mut sides: F) -> Result<Comparison>
where
    F: FnMut(u32) -> Result<(LogBracket, LogBracket)>,
{
    for precision in PRECISIONS {
        let (lhs, rhs) = sides(precision)?;
        let ordering = if lhs.hi < rhs.lo {
            Some(Ordering::Less)
        } else if lhs.lo > rhs.hi {
            Some(Ordering::Greater)
        } else if lhs.is_exact() && rhs.is_exact() && lhs.lo == rhs.lo {
            Some(Ordering::Equal)
        } else {
            None
        };
        if let Some(ordering) = ordering {
            return Ok(Comparison { ordering, lhs, rhs, precision });
        }
    }
    Err(Error::AmbiguousComparison { index, bits: *PRECISIONS.last().expect("nonempty") })
}

/// Bracket of `log2(1 + |x|)`.
///
/// When `x` is too large to write out it is tiny (a huge denominator), and
/// `log2(1 + |x|) <= |x| / ln 2 < 2 |x|` gives the upper end.
pub fn log2_one_plus_abs(x: &CoefficientValue, precision: u32) -> Result<LogBracket> {
    match x.abs_rational() {
        Ok(r) => Ok(log2_rational(&(BigRational::one() + r), precision)),
        Err(Error::CapExceeded { bits, cap }) => {
            let lx = x.abs_log2(precision);
            let limit = -BigRational::from_integer((precision as i64 + 1).into());
            if lx.hi >= limit {
                return Err(Error::CapExceeded { bits, cap });
            }
            Ok(LogBracket { lo: BigRational::zero(), hi: crate::exact::pow2(-(precision as i64)) })
        }
        Err(e) => Err(e),
    }
}

pub fn format_bracket(b: &LogBracket) -> [String; 2] {
    [crate::exact::format_rational(&b.lo), crate::exact::format_rational(&b.hi)]
}

/// Representative value of a bracket: exact when it is, midpoint otherwise.
pub fn representative(b: &LogBracket) -> BigRational {
    if b.is_exact() {
        b.lo.clone()
    } else {
        b.midpoint()
    }
}
