//! Integer triples `(x1, x2, x3)` whose linear form
//! `(x1 - x2) f_0(1/b) - x3` is small, with heights and p-adic weights.

use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{approx_log2, bigint_str, biguint_str, rational_str, Interval};
use crate::exec::Exec;
use crate::numeration::weight;
use crate::primes::{prime_factors_u64, valuation};
use crate::product::evaluate::{evaluate, partial_product};
use crate::product::spec::ProductSpec;
use crate::product::value::{materialization_cap, power_bits};

use super::theorem::level_denominators;
use super::witness::{build_approximant, find_repetition, DEFAULT_WINDOW};

/// How the linear form is assembled from the triple.
pub const LINEAR_FORM: &str = "(x1 - x2) * f0(1/b) - x3";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchmidtTriple {
    pub n: usize,
    #[serde(with = "bigint_str")]
    pub x1: BigInt,
    #[serde(with = "bigint_str")]
    pub x2: BigInt,
    #[serde(with = "bigint_str")]
    pub x3: BigInt,
    pub linear_form: Interval,
    /// `max(|x1|, |x2|, |x3|)`.
    #[serde(with = "biguint_str")]
    pub height: BigUint,
    /// `|x1| |x2| |form| prod_{p | b} |x1 x2 x3|_p`.
    pub product_value: Interval,
    /// `(1 + |alpha / beta|) |C^3 B^3 beta^2 alpha| / b^Q_n`, without the
    /// constant factor of the estimate.
    #[serde(with = "rational_str")]
    pub product_bound: BigRational,
    /// `log2` of the largest possible `|form|`; `None` if that is 0.
    pub log2_linear_form: Option<f64>,
    pub log2_height: f64,
    pub decay_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchmidtReport {
    pub b: u64,
    pub form: &'static str,
    pub triples: Vec<SchmidtTriple>,
}

impl SchmidtReport {
    /// Decay table: `n, log_linear_form, log_height, ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,log_linear_form,log_height,ratio\n");
        let opt = |v: Option<f64>| v.map_or_else(|| "-inf".to_string(), |x| format!("{x}"));
        for t in &self.triples {
            out.push_str(&format!(
                "{},{},{},{}\n",
                t.n,
                opt(t.log2_linear_form),
                t.log2_height,
                t.decay_ratio.map_or_else(String::new, |x| format!("{x}"))
            ));
        }
        out
    }
}

fn checked_pow(b: u64, exp: u64) -> Result<BigInt> {
    let e = BigUint::from(exp);
    if power_bits(b, &e) > BigUint::from(materialization_cap()) {
        return Err(Error::CapExceeded { bits: power_bits(b, &e).to_string(), cap: materialization_cap() });
    }
    Ok(BigInt::from(b).pow(exp as u32))
}

fn abs_range(i: &Interval) -> Interval {
    let lo = i.lo.abs();
    let hi = i.hi.abs();
    if i.contains(&BigRational::zero()) {
        Interval::new(BigRational::zero(), lo.max(hi))
    } else {
        Interval::hull(lo, hi)
    }
}

/// `prod_{p | b} |x|_p`, zero for `x = 0`.
fn padic_weight(x: &BigInt, primes: &[u64]) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let n = x.abs().to_biguint().expect("nonnegative");
    primes.iter().fold(BigRational::one(), |acc, &p| {
        let v = valuation(&n, &BigUint::from(p));
        acc / BigRational::from_integer(BigInt::from(p).pow(v as u32))
    })
}

pub fn schmidt_triple(spec: &ProductSpec, b: u64, n: usize) -> Result<SchmidtTriple> {
    if b < 2 {
        return Err(Error::InvalidArgument(format!("b = {b} must be at least 2")));
    }
    let w = find_repetition(spec, n, DEFAULT_WINDOW)?;
    let approx = build_approximant(spec, &w)?;
    let q = weight(&spec.radix, n).to_u64().ok_or_else(|| Error::InvalidArgument(format!("Q_{n} is too large")))?;
    let c = BigInt::from(approx.c.clone());
    let big_b = BigInt::from(level_denominators(spec, n)?.materialize()?);
    let beta = BigInt::from(w.beta.materialize()?);
    let cb = &c * &big_b;
    let b_st = checked_pow(b, (w.s + w.t) * q)?;
    let b_t = checked_pow(b, w.t * q)?;
    let b_q = checked_pow(b, q)?;

    let x1 = &cb * &b_st * &beta;
    let x2 = &cb * &w.alpha * &b_t;
    let z = BigRational::new(BigInt::one(), b_q.clone());
    let x3r = BigRational::from_integer(x1.clone()) * partial_product(spec, b, n)? * approx.eval_p(&z);
    if !x3r.is_integer() {
        return Err(Error::InvalidSpec(format!("x3 = {x3r} is not an integer at n = {n}")));
    }
    let x3 = x3r.to_integer();

    let diff = &x1 - &x2;
    let target = if diff.is_zero() {
        BigRational::new(BigInt::one(), BigInt::one() << 64)
    } else {
        BigRational::new(BigInt::one(), diff.abs() * &b_q * (BigInt::one() << 32))
    };
    let f0 = evaluate(spec, b, &target)?;
    let linear_form = f0.scale(&BigRational::from_integer(diff)).add_scalar(&BigRational::from_integer(-&x3));

    let height = [&x1, &x2, &x3].iter().map(|x| x.abs().to_biguint().expect("nonnegative")).max().expect("three");
    let primes = prime_factors_u64(b);
    let weight = padic_weight(&x1, &primes) * padic_weight(&x2, &primes) * padic_weight(&x3, &primes);
    let scale = BigRational::from_integer(x1.abs() * x2.abs()) * weight;
    let form_abs = abs_range(&linear_form);
    let product_value = form_abs.scale(&scale);

    let r_abs = w.ratio.abs_rational()?;
    let alpha_abs = BigRational::from_integer(w.alpha.abs());
    let beta_r = BigRational::from_integer(beta);
    let cb_r = BigRational::from_integer(cb);
    let product_bound = (BigRational::one() + r_abs) * &cb_r * &cb_r * &cb_r * &beta_r * &beta_r * alpha_abs
        / BigRational::from_integer(b_q);

    let log2_linear_form = approx_log2(&form_abs.hi);
    let log2_height = height.bits() as f64 - 1.0
        + approx_log2(&BigRational::new(height.clone().into(), BigInt::one() << (height.bits() - 1))).unwrap_or(0.0);
    let decay_ratio = log2_linear_form.filter(|_| log2_height > 0.0).map(|f| f / log2_height);
    Ok(SchmidtTriple {
        n,
        x1,
        x2,
        x3,
        linear_form,
        height,
        product_value,
        product_bound,
        log2_linear_form,
        log2_height,
        decay_ratio,
    })
}

pub fn schmidt_triples(spec: &ProductSpec, b: u64, range: RangeInclusive<usize>) -> Result<SchmidtReport> {
    schmidt_triples_with(Exec::default(), spec, b, range)
}

pub fn schmidt_triples_with(
    exec: Exec,
    spec: &ProductSpec,
    b: u64,
    range: RangeInclusive<usize>,
) -> Result<SchmidtReport> {
    let triples =
        exec.try_map_range(*range.start() as u64, *range.end() as u64 + 1, |n| schmidt_triple(spec, b, n as usize))?;
    Ok(SchmidtReport { b, form: LINEAR_FORM, triples })
}
