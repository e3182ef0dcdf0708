use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, NumberText};
use crate::numeration::RadixSequence;
use crate::primes::prime_factors;
use crate::product::value::CoefficientValue;
use crate::rules::RowRule;

/// Rule for rational coefficients `a_{s,y} / b_{s,y}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RationalRule {
    Rows(RowRule<BigRational>),
    /// `1 / base^(2^y)` when `y = m!` for some `m >= 1`, and `1` elsewhere.
    FactorialSupport {
        base: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coefficients {
    Rational(RationalRule),
    /// Residues `r` standing for `exp(2 pi i r / order)`.
    UnitRoot {
        order: u64,
        rule: RowRule<u64>,
    },
}

/// The infinite product `prod_y (1 + sum_s c(s, y) z^(s Q_y))` over a radix
/// sequence, with `1 <= s <= q_{y+1} - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpec {
    pub radix: RadixSequence,
    pub coeffs: Coefficients,
}

/// Is `y = m!` for some `m >= 1`?
pub fn is_factorial(y: usize) -> bool {
    let mut f = 1usize;
    let mut m = 1usize;
    while f < y {
        m += 1;
        match f.checked_mul(m) {
            Some(next) => f = next,
            None => return false,
        }
    }
    f == y
}

impl ProductSpec {
    pub fn new(radix: RadixSequence, coeffs: Coefficients) -> Result<Self> {
        let spec = ProductSpec { radix, coeffs };
        spec.validate()?;
        Ok(spec)
    }

    pub fn rational(radix: RadixSequence, rule: RowRule<BigRational>) -> Result<Self> {
        ProductSpec::new(radix, Coefficients::Rational(RationalRule::Rows(rule)))
    }

    pub fn unit_root(radix: RadixSequence, order: u64, rule: RowRule<u64>) -> Result<Self> {
        ProductSpec::new(radix, Coefficients::UnitRoot { order, rule })
    }

    /// Every coefficient equal to 1; the product telescopes to `1 / (1 - z)`.
    pub fn geometric(radix: RadixSequence) -> Self {
        ProductSpec::rational(radix, RowRule::Constant { values: vec![BigRational::one()] }).expect("valid radix")
    }

    /// Binary radix with every coefficient `-1`: the Thue-Morse generating function.
    pub fn thue_morse() -> Self {
        ProductSpec::rational(RadixSequence::binary(), RowRule::Constant { values: vec![-BigRational::one()] })
            .expect("valid")
    }

    pub fn validate(&self) -> Result<()> {
        self.radix.validate()?;
        match &self.coeffs {
            Coefficients::Rational(RationalRule::Rows(rule)) => rule.validate(),
            Coefficients::Rational(RationalRule::FactorialSupport { base }) => {
                if *base < 2 {
                    Err(Error::InvalidSpec(format!("factorial support base {base} is below 2")))
                } else {
                    Ok(())
                }
            }
            Coefficients::UnitRoot { order, rule } => {
                rule.validate()?;
                if *order == 0 {
                    return Err(Error::InvalidSpec("unit root order must be at least 1".into()));
                }
                if let Some(bad) = rule.all_values().into_iter().find(|&&r| r >= *order) {
                    return Err(Error::InvalidSpec(format!("residue {bad} is not below L = {order}")));
                }
                Ok(())
            }
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.coeffs, Coefficients::Rational(_))
    }

    pub fn unit_order(&self) -> Option<u64> {
        match self.coeffs {
            Coefficients::UnitRoot { order, .. } => Some(order),
            _ => None,
        }
    }

    /// Multiplicative identity of the coefficient domain.
    pub fn one(&self) -> CoefficientValue {
        match self.coeffs {
            Coefficients::UnitRoot { order, .. } => CoefficientValue::unit_root(0, order),
            _ => CoefficientValue::one(),
        }
    }

    /// The coefficient `c(s, y)` of `z^(s Q_y)` in factor `y`.
    pub fn c(&self, s: u64, y: usize) -> CoefficientValue {
        match &self.coeffs {
            Coefficients::Rational(RationalRule::Rows(rule)) => CoefficientValue::Rational(rule.value(s, y).clone()),
            Coefficients::Rational(RationalRule::FactorialSupport { base }) => {
                if is_factorial(y) {
                    CoefficientValue::big_pow(BigInt::one(), *base, BigUint::one() << y)
                } else {
                    CoefficientValue::one()
                }
            }
            Coefficients::UnitRoot { order, rule } => CoefficientValue::unit_root(*rule.value(s, y), *order),
        }
    }

    /// Same product with rational coefficients; unit roots of order 1 and 2
    /// become `1` and `-1`.
    pub fn real_view(&self) -> Result<ProductSpec> {
        match &self.coeffs {
            Coefficients::Rational(_) => Ok(self.clone()),
            Coefficients::UnitRoot { order, rule } if *order <= 2 => {
                let rule =
                    rule.map(|&r| if r % 2 == 1 && *order == 2 { -BigRational::one() } else { BigRational::one() });
                ProductSpec::rational(self.radix.clone(), rule)
            }
            Coefficients::UnitRoot { order, .. } => Err(Error::UnsupportedDomain(format!(
                "coefficients are roots of unity of order {order}, not rationals"
            ))),
        }
    }

    /// Upper bound on `|c(s, y)|` over all `s, y`.
    pub fn max_abs_coefficient(&self) -> BigRational {
        match &self.coeffs {
            Coefficients::Rational(RationalRule::Rows(rule)) => {
                rule.all_values().into_iter().map(|v| v.abs()).max().unwrap_or_else(BigRational::zero)
            }
            _ => BigRational::one(),
        }
    }

    /// Primes dividing any numerator or denominator the rule can produce,
    /// found by inspecting the rule. Composite cofactors that resist trial
    /// division are reported as they are.
    pub fn prime_support(&self) -> Result<BTreeSet<BigUint>> {
        match &self.coeffs {
            Coefficients::Rational(RationalRule::Rows(rule)) => {
                let mut out = BTreeSet::new();
                for v in rule.all_values() {
                    for part in [v.numer(), v.denom()] {
                        let n = part.abs().to_biguint().expect("nonnegative");
                        if !n.is_zero() {
                            out.extend(prime_factors(&n));
                        }
                    }
                }
                Ok(out)
            }
            Coefficients::Rational(RationalRule::FactorialSupport { base }) => {
                Ok(prime_factors(&BigUint::from(*base)).into_iter().collect())
            }
            Coefficients::UnitRoot { .. } => {
                let view = self.real_view()?;
                view.prime_support()
            }
        }
    }

    /// Wire form.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::SpecParse(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum DomainTag {
    Rational,
    UnitRoot,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProductSpec {
    radix: RadixSequence,
    domain: DomainTag,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    order: Option<u64>,
    coeffs: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum FactorialRaw {
    FactorialSupport { base: u64 },
}

/// Rational value in JSON: `"p/q"` string or plain integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalText(pub BigRational);

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = NumberText::deserialize(d)?;
        parse_rational(&text.0).map(RationalText).map_err(serde::de::Error::custom)
    }
}

impl Serialize for RationalText {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        format_rational(&self.0).serialize(s)
    }
}

impl Serialize for ProductSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (domain, order, coeffs) = match &self.coeffs {
            Coefficients::Rational(RationalRule::Rows(rule)) => {
                let rule = rule.map(|v| RationalText(v.clone()));
                (DomainTag::Rational, None, serde_json::to_value(rule))
            }
            Coefficients::Rational(RationalRule::FactorialSupport { base }) => {
                (DomainTag::Rational, None, serde_json::to_value(FactorialRaw::FactorialSupport { base: *base }))
            }
            Coefficients::UnitRoot { order, rule } => (DomainTag::UnitRoot, Some(*order), serde_json::to_value(rule)),
        };
        let coeffs = coeffs.map_err(serde::ser::Error::custom)?;
        RawProductSpec { radix: self.radix.clone(), domain, order, coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProductSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawProductSpec::deserialize(d)?;
        let kind = raw.coeffs.get("kind").and_then(|k| k.as_str()).unwrap_or_default().to_owned();
        let coeffs = match raw.domain {
            DomainTag::Rational => {
                if raw.order.is_some() {
                    return Err(D::Error::custom("\"L\" is only allowed for the unit_root domain"));
                }
                if kind == "factorial_support" {
                    let FactorialRaw::FactorialSupport { base } =
                        serde_json::from_value(raw.coeffs).map_err(D::Error::custom)?;
                    Coefficients::Rational(RationalRule::FactorialSupport { base })
                } else {
                    let rule: RowRule<RationalText> = serde_json::from_value(raw.coeffs).map_err(D::Error::custom)?;
                    Coefficients::Rational(RationalRule::Rows(rule.map(|v| v.0.clone())))
                }
            }
            DomainTag::UnitRoot => {
                let order = raw.order.ok_or_else(|| D::Error::custom("unit_root domain needs \"L\""))?;
                if kind == "factorial_support" {
                    return Err(D::Error::custom("factorial_support is a rational-domain rule"));
                }
                let rule: RowRule<u64> = serde_json::from_value(raw.coeffs).map_err(D::Error::custom)?;
                Coefficients::UnitRoot { order, rule }
            }
        };
        let spec = ProductSpec { radix: raw.radix, coeffs };
        spec.validate().map_err(D::Error::custom)?;
        Ok(spec)
    }
}

/// Levels `y <= limit` where a factorial-support rule is not 1.
pub fn factorial_positions_up_to(limit: usize) -> Vec<usize> {
    (1..=limit).filter(|&y| is_factorial(y)).collect()
}

/// Convenience for tests and callers holding small integers.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn factorial_positions() {
        assert_eq!(factorial_positions_up_to(130), vec![1, 2, 6, 24, 120]);
        assert!(!is_factorial(0));
        assert!(!is_factorial(7));
    }

    #[test]
    fn json_roundtrip_examples() {
        let text =
            r#"{"radix":{"kind":"constant","q":2},"domain":"rational","coeffs":{"kind":"constant","values":["-1"]}}"#;
        let spec = ProductSpec::from_json(text).unwrap();
        assert_eq!(spec, ProductSpec::thue_morse());
        let back = ProductSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);

        let tm = r#"{"radix":{"kind":"constant","q":2},"domain":"unit_root","L":2,"coeffs":{"kind":"constant","values":[1]}}"#;
        let spec = ProductSpec::from_json(tm).unwrap();
        assert_eq!(spec.unit_order(), Some(2));
        assert_eq!(spec.real_view().unwrap(), ProductSpec::thue_morse());

        let fac =
            r#"{"radix":{"kind":"constant","q":2},"domain":"rational","coeffs":{"kind":"factorial_support","base":2}}"#;
        let spec = ProductSpec::from_json(fac).unwrap();
        assert_eq!(ProductSpec::from_json(&spec.to_json()).unwrap(), spec);
    }

    #[test]
    fn json_rejections() {
        let bad = [
            r#"{"radix":{"kind":"constant","q":1},"domain":"rational","coeffs":{"kind":"constant","values":["1"]}}"#,
            r#"{"radix":{"kind":"constant","q":2},"domain":"unit_root","coeffs":{"kind":"constant","values":[1]}}"#,
            r#"{"radix":{"kind":"constant","q":2},"domain":"unit_root","L":2,"coeffs":{"kind":"constant","values":[2]}}"#,
            r#"{"radix":{"kind":"constant","q":2},"domain":"rational","coeffs":{"kind":"constant","values":["1/0"]}}"#,
            r#"{"radix":{"kind":"constant","q":2},"domain":"rational","coeffs":{"kind":"constant","values":["1"]},"extra":1}"#,
            r#"{"radix":{"kind":"constant","q":2},"domain":"rational","L":3,"coeffs":{"kind":"constant","values":["1"]}}"#,
            r#"not json"#,
        ];
        for text in bad {
            assert!(matches!(ProductSpec::from_json(text), Err(Error::SpecParse(_))), "{text}");
        }
    }

    #[test]
    fn factorial_support_values() {
        let spec = ProductSpec::new(
            RadixSequence::binary(),
            Coefficients::Rational(RationalRule::FactorialSupport { base: 2 }),
        )
        .unwrap();
        assert_eq!(spec.c(1, 1), CoefficientValue::Rational(ratio(1, 4)));
        assert_eq!(spec.c(1, 2), CoefficientValue::Rational(ratio(1, 16)));
        assert_eq!(spec.c(1, 3), CoefficientValue::one());
        assert!(matches!(spec.c(1, 24), CoefficientValue::BigPow { .. }));
    }

    #[test]
    fn prime_support_by_inspection() {
        let spec = ProductSpec::rational(
            RadixSequence::binary(),
            RowRule::Table { rows: vec![vec![ratio(3, 10)]], default: vec![ratio(-7, 1)] },
        )
        .unwrap();
        let primes: Vec<u64> = spec.prime_support().unwrap().iter().map(|p| p.to_u64().unwrap()).collect();
        assert_eq!(primes, vec![2, 3, 5, 7]);
    }
}
