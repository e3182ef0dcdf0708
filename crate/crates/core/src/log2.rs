//! Certified base-2 logarithms with rational endpoints.
//!
//! `log2` of a positive integer is bracketed by running the bit-by-bit
//! squaring algorithm twice on a fixed-point mantissa: once rounding every
//! step down (lower bound) and once rounding up (upper bound). Powers of two
//! come out exact.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::pow2;

/// Enclosure `[lo, hi]` of a real logarithm. `lo == hi` means exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogBracket {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl LogBracket {
    pub fn exact(v: BigRational) -> Self {
        LogBracket { lo: v.clone(), hi: v }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, other: &LogBracket) -> LogBracket {
        LogBracket { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn neg(&self) -> LogBracket {
        LogBracket { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn sub(&self, other: &LogBracket) -> LogBracket {
        self.add(&other.neg())
    }

    /// Multiply by an exact rational factor of either sign.
    pub fn scale(&self, k: &BigRational) -> LogBracket {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            LogBracket { lo: a, hi: b }
        } else {
            LogBracket { lo: b, hi: a }
        }
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }
}

/// Bracket of `log2 n` for `n > 0`, width at most `2^-precision`.
pub fn log2_biguint(n: &BigUint, precision: u32) -> LogBracket {
    assert!(!n.is_zero(), "log2 of zero");
    let k = n.bits() - 1;
    let int_part = BigRational::from_integer(BigInt::from(k));
    if n.count_ones() == 1 {
        return LogBracket::exact(int_part);
    }
    let frac_bits = precision as u64 + 16;
    let one = BigUint::one() << frac_bits;
    let two = &one << 1u32;

    // mantissa n / 2^k in [1, 2), scaled by 2^frac_bits
    let (y_lo, y_hi) = if frac_bits >= k {
        let y = n << (frac_bits - k);
        (y.clone(), y)
    } else {
        let shift = k - frac_bits;
        let y = n >> shift;
        let exact = (&y << shift) == *n;
        let up = if exact { y.clone() } else { &y + 1u32 };
        (y, up)
    };

    let lo_bits = mantissa_bits(y_lo, precision, frac_bits, &two, false);
    let hi_bits = mantissa_bits(y_hi, precision, frac_bits, &two, true);
    let scale = pow2(-(precision as i64));
    let lo = &int_part + BigRational::from_integer(BigInt::from(lo_bits)) * &scale;
    let hi = &int_part + BigRational::from_integer(BigInt::from(hi_bits) + 1) * &scale;
    LogBracket { lo, hi }
}

/// Extract `precision` binary digits of log2(y / 2^frac_bits) with directed rounding.
fn mantissa_bits(mut y: BigUint, precision: u32, frac_bits: u64, two: &BigUint, round_up: bool) -> BigUint {
    let mask = (BigUint::one() << frac_bits) - 1u32;
    let mut acc = BigUint::zero();
    for _ in 0..precision {
        let sq = &y * &y;
        let inexact = round_up && !(&sq & &mask).is_zero();
        y = sq >> frac_bits;
        if inexact {
            y += 1u32;
        }
        acc <<= 1u32;
        if &y >= two {
            acc += 1u32;
            let odd = y.bit(0);
            y >>= 1u32;
            if round_up && odd {
                y += 1u32;
            }
        }
    }
    acc
}

/// Bracket of `log2 |x|` for a nonzero rational.
pub fn log2_rational(x: &BigRational, precision: u32) -> LogBracket {
    assert!(!x.is_zero(), "log2 of zero");
    let num = x.numer().abs().to_biguint().expect("positive");
    let den = x.denom().abs().to_biguint().expect("positive");
    let top = log2_biguint(&num, precision);
    if den.is_one() {
        return top;
    }
    top.sub(&log2_biguint(&den, precision))
}

/// Bracket of `log2 b` for a small positive integer.
pub fn log2_u64(b: u64, precision: u32) -> LogBracket {
    log2_biguint(&BigUint::from(b), precision)
}
