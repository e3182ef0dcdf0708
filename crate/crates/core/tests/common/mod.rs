//! Shared test support: an independent interval logarithm and seeded random
//! spec generators.

#![allow(dead_code)]

use cantor_core::numeration::RadixSequence;
use cantor_core::product::ProductSpec;
use cantor_core::rules::RowRule;
use cantor_core::tm::TMSpec;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Fractional bits of the oracle.
pub const ORACLE_BITS: u64 = 200;
const WORK_BITS: u64 = ORACLE_BITS + 32;
const TERMS: u32 = 130;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `sum_{i <= TERMS} u^(2i+1) / (2i+1)` in fixed point with `u = num / 2^WORK_BITS`,
/// rounded down or up term by term.
fn atanh_series(u: &BigUint, up: bool) -> BigUint {
    let one = BigUint::one() << WORK_BITS;
    let round = |x: BigUint, d: &BigUint| {
        let (q, r) = (&x / d, &x % d);
        if up && !r.is_zero() {
            q + 1u32
        } else {
            q
        }
    };
    let u2 = round(u * u, &one);
    let mut power = u.clone();
    let mut sum = BigUint::zero();
    for i in 0..=TERMS {
        sum += round(power.clone(), &BigUint::from(2 * i + 1));
        power = round(&power * &u2, &one);
    }
    if up {
        // tail below u^(2 TERMS + 3) <= 3^-263, far under one unit
        sum += 1u32;
    }
    sum
}

fn ln_mantissa(m: &BigUint, up: bool) -> BigUint {
    // ln m = 2 atanh((m - 1) / (m + 1)) for m in [1, 2), fixed point
    let one = BigUint::one() << WORK_BITS;
    let top = (m - &one) << WORK_BITS;
    let bottom = m + &one;
    let u = if up { (&top + &bottom - 1u32) / &bottom } else { &top / &bottom };
    atanh_series(&u, up) << 1
}

/// Interval `[lo, hi]` containing `log2 n`, width about `2^-ORACLE_BITS`.
pub fn oracle_log2(n: &BigUint) -> (BigRational, BigRational) {
    assert!(!n.is_zero());
    let k = n.bits() - 1;
    let kq = BigRational::from_integer(BigInt::from(k));
    let one = BigUint::one() << WORK_BITS;
    let (m_lo, m_hi) = if k <= WORK_BITS {
        let m = n << (WORK_BITS - k);
        (m.clone(), m)
    } else {
        let m = n >> (k - WORK_BITS);
        let exact = (&m << (k - WORK_BITS)) == *n;
        (m.clone(), if exact { m } else { m + 1u32 })
    };
    if m_lo == one && m_hi == one {
        return (kq.clone(), kq);
    }
    let ln2_u = one.clone() / 3u32;
    let ln2_lo = atanh_series(&ln2_u, false) << 1;
    let ln2_hi = atanh_series(&(&ln2_u + 1u32), true) << 1;
    let lm_lo = ln_mantissa(&m_lo, false);
    let lm_hi = ln_mantissa(&m_hi, true);
    let r = |a: &BigUint, b: &BigUint| BigRational::new(BigInt::from(a.clone()), BigInt::from(b.clone()));
    (&kq + r(&lm_lo, &ln2_hi), &kq + r(&lm_hi, &ln2_lo))
}

pub fn oracle_log2_u64(n: u64) -> (BigRational, BigRational) {
    oracle_log2(&BigUint::from(n))
}

/// Interval sum `sum k_i log2 n_i` for nonnegative rational weights.
pub fn oracle_weighted(terms: &[(BigRational, BigUint)]) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for (k, n) in terms {
        assert!(*k >= BigRational::zero());
        let (a, b) = oracle_log2(n);
        lo += k * a;
        hi += k * b;
    }
    (lo, hi)
}

fn random_radix(rng: &mut impl Rng, max_q: u64) -> RadixSequence {
    let mut q = || rng.gen_range(2..=max_q);
    match q() % 3 {
        0 => RadixSequence::Constant { q: q() },
        1 => RadixSequence::Periodic { qs: (0..1 + q() as usize % 3).map(|_| q()).collect() },
        _ => RadixSequence::Table { qs: (0..q() as usize).map(|_| q()).collect(), default: q() },
    }
}

fn random_rule<T>(rng: &mut impl Rng, mut value: impl FnMut(&mut dyn rand::RngCore) -> T) -> RowRule<T> {
    let kind = rng.gen_range(0..3);
    let mut row = |rng: &mut dyn rand::RngCore| {
        let len = rng.gen_range(1..=4);
        (0..len).map(|_| value(rng)).collect::<Vec<T>>()
    };
    match kind {
        0 => RowRule::Constant { values: row(rng) },
        1 => {
            let n = rng.gen_range(1..=3);
            RowRule::PeriodicY { rows: (0..n).map(|_| row(rng)).collect() }
        }
        _ => {
            let n = rng.gen_range(0..=4);
            let rows = (0..n).map(|_| row(rng)).collect();
            RowRule::Table { rows, default: row(rng) }
        }
    }
}

/// Rational spec with `q_j <= 5` and `|num|, den <= 9`; `positive` keeps
/// every coefficient in `[1/9, 9]`.
pub fn random_rational_spec(rng: &mut impl Rng, positive: bool) -> ProductSpec {
    let radix = random_radix(rng, 5);
    let rule = random_rule(rng, |r| {
        let num: i64 = if positive { r.gen_range(1..=9) } else { r.gen_range(-9..=9) };
        let den: i64 = r.gen_range(1..=9);
        BigRational::new(num.into(), den.into())
    });
    ProductSpec::rational(radix, rule).expect("valid random spec")
}

pub fn random_tm_spec(rng: &mut impl Rng, max_l: u64, max_q: u64) -> TMSpec {
    let l = rng.gen_range(1..=max_l);
    let radix = random_radix(rng, max_q);
    let mu = random_rule(rng, |r| r.gen_range(0..l));
    TMSpec::new(l, radix, mu).expect("valid random tm spec")
}
