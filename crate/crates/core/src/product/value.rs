use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::format_rational;
use crate::log2::{log2_biguint, log2_u64, LogBracket};

/// Default ceiling on the size of a materialized power, in bits.
pub const DEFAULT_CAP_BITS: u64 = 1 << 20;

static CAP_BITS: AtomicU64 = AtomicU64::new(DEFAULT_CAP_BITS);

/// Current materialization cap in bits.
pub fn materialization_cap() -> u64 {
    CAP_BITS.load(Ordering::Relaxed)
}

/// Change the process-wide materialization cap.
pub fn set_materialization_cap(bits: u64) {
    CAP_BITS.store(bits.max(64), Ordering::Relaxed);
}

/// `ceil(log2 base)`, the bits each factor of `base` contributes at most.
fn bits_per_factor(base: u64) -> u64 {
    64 - (base - 1).leading_zeros() as u64
}

/// Bits needed to write `base^exp`, as an upper estimate.
pub fn power_bits(base: u64, exp: &BigUint) -> BigUint {
    exp * bits_per_factor(base)
}

/// Exact value of one product coefficient `a_{s,y} / b_{s,y}`, or of a
/// product of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoefficientValue {
    /// Lowest terms, positive denominator.
    Rational(BigRational),
    /// `num / den_base^den_exp`, kept symbolic because the power is larger
    /// than the materialization cap. Normalized: `num` is nonzero and not
    /// divisible by `den_base`.
    BigPow { num: BigInt, den_base: u64, den_exp: BigUint },
    /// `exp(2 pi i residue / order)`.
    UnitRoot { residue: u64, order: u64 },
}

impl CoefficientValue {
    pub fn one() -> Self {
        CoefficientValue::Rational(BigRational::one())
    }

    pub fn zero() -> Self {
        CoefficientValue::Rational(BigRational::zero())
    }

    pub fn integer(v: i64) -> Self {
        CoefficientValue::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn unit_root(residue: u64, order: u64) -> Self {
        CoefficientValue::UnitRoot { residue: residue % order, order }
    }

    /// `num / base^exp`, materialized when it fits under the cap.
    pub fn big_pow(num: BigInt, base: u64, exp: BigUint) -> Self {
        assert!(base >= 2, "power base must be at least 2");
        if num.is_zero() {
            return CoefficientValue::zero();
        }
        let mut num = num;
        let mut exp = exp;
        let b = BigInt::from(base);
        while !exp.is_zero() {
            let (q, r) = num.div_rem(&b);
            if !r.is_zero() {
                break;
            }
            num = q;
            exp -= 1u32;
        }
        if power_bits(base, &exp) <= BigUint::from(materialization_cap()) {
            let e = exp.to_u32().expect("exponent below cap");
            let den = BigInt::from(base).pow(e);
            CoefficientValue::Rational(BigRational::new(num, den))
        } else {
            CoefficientValue::BigPow { num, den_base: base, den_exp: exp }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CoefficientValue::Rational(r) => r.is_zero(),
            _ => false,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            CoefficientValue::Rational(r) => r.is_one(),
            CoefficientValue::UnitRoot { residue, .. } => *residue == 0,
            CoefficientValue::BigPow { .. } => false,
        }
    }

    fn cap_exceeded(base: u64, exp: &BigUint) -> Error {
        Error::CapExceeded { bits: power_bits(base, exp).to_string(), cap: materialization_cap() }
    }

    /// Exact rational value. Unit roots of order 1 and 2 map to `1` and `-1`.
    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            CoefficientValue::Rational(r) => Ok(r.clone()),
            CoefficientValue::BigPow { den_base, den_exp, .. } => Err(Self::cap_exceeded(*den_base, den_exp)),
            CoefficientValue::UnitRoot { residue, order } => match (*order, *residue) {
                (1, _) | (2, 0) => Ok(BigRational::one()),
                (2, 1) => Ok(-BigRational::one()),
                _ => Err(Error::UnsupportedDomain(format!("root of unity of order {order} is not rational"))),
            },
        }
    }

    pub fn mul(&self, other: &CoefficientValue) -> Result<CoefficientValue> {
        use CoefficientValue::*;
        match (self, other) {
            (Rational(a), Rational(b)) => Ok(Rational(a * b)),
            (UnitRoot { residue: r1, order: o1 }, UnitRoot { residue: r2, order: o2 }) if o1 == o2 => {
                Ok(CoefficientValue::unit_root(r1 + r2, *o1))
            }
            (UnitRoot { .. }, _) | (_, UnitRoot { .. }) => {
                Err(Error::UnsupportedDomain("cannot mix unit roots with rational coefficients".into()))
            }
            (Rational(r), BigPow { num, den_base, den_exp }) | (BigPow { num, den_base, den_exp }, Rational(r)) => {
                if r.is_zero() {
                    return Ok(CoefficientValue::zero());
                }
                // r = p / (d * base^k) with d coprime to base folds into the power
                let (k, rest) = split_base_power(r.denom(), *den_base);
                if !rest.is_one() {
                    return Err(Self::cap_exceeded(*den_base, den_exp));
                }
                Ok(CoefficientValue::big_pow(num * r.numer(), *den_base, den_exp + k))
            }
            (BigPow { num: n1, den_base: b1, den_exp: e1 }, BigPow { num: n2, den_base: b2, den_exp: e2 }) => {
                if b1 != b2 {
                    return Err(Self::cap_exceeded(*b1.max(b2), e1.max(e2)));
                }
                Ok(CoefficientValue::big_pow(n1 * n2, *b1, e1 + e2))
            }
        }
    }

    pub fn recip(&self) -> Result<CoefficientValue> {
        match self {
            CoefficientValue::Rational(r) => {
                if r.is_zero() {
                    Err(Error::InvalidArgument("reciprocal of zero".into()))
                } else {
                    Ok(CoefficientValue::Rational(r.recip()))
                }
            }
            CoefficientValue::UnitRoot { residue, order } => {
                Ok(CoefficientValue::unit_root(order - residue % order, *order))
            }
            CoefficientValue::BigPow { den_base, den_exp, .. } => Err(Self::cap_exceeded(*den_base, den_exp)),
        }
    }

    pub fn div(&self, other: &CoefficientValue) -> Result<CoefficientValue> {
        use CoefficientValue::*;
        match (self, other) {
            // same-base powers divide without materializing when the result
            // still has a nonnegative exponent
            (BigPow { num: n1, den_base: b1, den_exp: e1 }, BigPow { num: n2, den_base: b2, den_exp: e2 })
                if b1 == b2 && e1 >= e2 && n2.abs().is_one() =>
            {
                Ok(CoefficientValue::big_pow(n1 * n2, *b1, e1 - e2))
            }
            (_, BigPow { .. }) if self.is_zero() => Ok(CoefficientValue::zero()),
            _ => self.mul(&other.recip()?),
        }
    }

    /// Exact difference; equal values cancel without materializing.
    pub fn sub(&self, other: &CoefficientValue) -> Result<CoefficientValue> {
        if self == other {
            return Ok(CoefficientValue::zero());
        }
        Ok(CoefficientValue::Rational(self.to_rational()? - other.to_rational()?))
    }

    pub fn neg(&self) -> Result<CoefficientValue> {
        match self {
            CoefficientValue::Rational(r) => Ok(CoefficientValue::Rational(-r)),
            CoefficientValue::BigPow { num, den_base, den_exp } => {
                Ok(CoefficientValue::BigPow { num: -num, den_base: *den_base, den_exp: den_exp.clone() })
            }
            CoefficientValue::UnitRoot { .. } => Err(Error::UnsupportedDomain("negation of a unit root".into())),
        }
    }

    /// `|x|` as a rational, materializing if needed.
    pub fn abs_rational(&self) -> Result<BigRational> {
        match self {
            CoefficientValue::UnitRoot { .. } => Ok(BigRational::one()),
            _ => Ok(self.to_rational()?.abs()),
        }
    }

    /// Numerator of the value in lowest terms (unit roots: error).
    pub fn numerator(&self) -> Result<BigInt> {
        match self {
            CoefficientValue::Rational(r) => Ok(r.numer().clone()),
            CoefficientValue::BigPow { num, .. } => Ok(num.clone()),
            CoefficientValue::UnitRoot { .. } => Err(Error::UnsupportedDomain("numerator of a unit root".into())),
        }
    }

    /// Denominator in lowest terms, either materialized or as `base^exp`.
    pub fn denominator(&self) -> Result<Denominator> {
        match self {
            CoefficientValue::Rational(r) => Ok(Denominator::Int(r.denom().to_biguint().expect("positive"))),
            CoefficientValue::BigPow { den_base, den_exp, .. } => {
                Ok(Denominator::Pow { base: *den_base, exp: den_exp.clone() })
            }
            CoefficientValue::UnitRoot { .. } => Err(Error::UnsupportedDomain("denominator of a unit root".into())),
        }
    }

    /// Bracket of `log2 |x|` for a nonzero value.
    pub fn abs_log2(&self, precision: u32) -> LogBracket {
        match self {
            CoefficientValue::Rational(r) => crate::log2::log2_rational(r, precision),
            CoefficientValue::BigPow { num, den_base, den_exp } => {
                let top = log2_biguint(&num.abs().to_biguint().expect("positive"), precision);
                let exp = BigRational::from_integer(BigInt::from(den_exp.clone()));
                top.sub(&log2_u64(*den_base, precision).scale(&exp))
            }
            CoefficientValue::UnitRoot { .. } => LogBracket::exact(BigRational::zero()),
        }
    }
}

/// Denominator of a coefficient, possibly too large to write out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Denominator {
    Int(BigUint),
    Pow { base: u64, exp: BigUint },
}

impl Denominator {
    pub fn log2(&self, precision: u32) -> LogBracket {
        match self {
            Denominator::Int(n) => log2_biguint(n, precision),
            Denominator::Pow { base, exp } => {
                log2_u64(*base, precision).scale(&BigRational::from_integer(BigInt::from(exp.clone())))
            }
        }
    }

    pub fn materialize(&self) -> Result<BigUint> {
        match self {
            Denominator::Int(n) => Ok(n.clone()),
            Denominator::Pow { base, exp } => {
                if power_bits(*base, exp) > BigUint::from(materialization_cap()) {
                    return Err(CoefficientValue::cap_exceeded(*base, exp));
                }
                Ok(BigUint::from(*base).pow(exp.to_u32().expect("below cap")))
            }
        }
    }
}

impl fmt::Display for Denominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Denominator::Int(n) => write!(f, "{n}"),
            Denominator::Pow { base, exp } => write!(f, "{base}^{exp}"),
        }
    }
}

/// Split `n = base^k * rest` with `rest` not divisible by `base`.
fn split_base_power(n: &BigInt, base: u64) -> (BigUint, BigInt) {
    let b = BigInt::from(base);
    let mut k = 0u64;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(&b);
        if !r.is_zero() || rest.is_zero() {
            break;
        }
        rest = q;
        k += 1;
    }
    (BigUint::from(k), rest)
}

impl fmt::Display for CoefficientValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientValue::Rational(r) => f.write_str(&format_rational(r)),
            CoefficientValue::BigPow { num, den_base, den_exp } => write!(f, "{num}/{den_base}^{den_exp}"),
            CoefficientValue::UnitRoot { residue, order } => write!(f, "zeta{order}^{residue}"),
        }
    }
}

impl Serialize for CoefficientValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CoefficientValue::Rational(r) => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("num", &r.numer().to_string())?;
                m.serialize_entry("den", &r.denom().to_string())?;
                m.end()
            }
            CoefficientValue::BigPow { num, den_base, den_exp } => {
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("num", &num.to_string())?;
                m.serialize_entry("den_base", den_base)?;
                m.serialize_entry("den_exp", &den_exp.to_string())?;
                m.end()
            }
            CoefficientValue::UnitRoot { residue, order } => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("residue", residue)?;
                m.serialize_entry("order", order)?;
                m.end()
            }
        }
    }
}
