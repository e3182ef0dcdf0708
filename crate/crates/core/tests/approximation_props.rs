mod common;

use cantor_core::approximation::{
    build_approximant, check_prop23, check_theorem21, corollary22_spec, find_repetition, schmidt_triples, IntSequence,
    IntText, Prop23Variant, Thm21Variant,
};
use cantor_core::product::{evaluate, expand, ProductSpec};
use cantor_core::Error;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use common::{oracle_log2, oracle_log2_u64, random_rational_spec, rng};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `Some(verdict)` for `lhs < rhs` when the brackets decide it.
fn decide(lhs: (BigRational, BigRational), rhs: (BigRational, BigRational), strict: bool) -> Option<bool> {
    let below = if strict { lhs.1 < rhs.0 } else { lhs.1 <= rhs.0 };
    let above = if strict { lhs.0 >= rhs.1 } else { lhs.0 > rhs.1 };
    if below {
        Some(true)
    } else if above {
        Some(false)
    } else {
        None
    }
}

fn is_factorial(n: usize) -> bool {
    [1usize, 2, 6, 24, 120].contains(&n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn witnesses_are_minimal_and_cancel(seed in any::<u64>(), n in 0usize..3) {
        let spec = random_rational_spec(&mut rng(seed), false);
        let w = match find_repetition(&spec, n, 16) {
            Ok(w) => w,
            Err(Error::NoWitness { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let (s, t) = (w.s as usize, w.t as usize);
        let f: Vec<BigRational> = expand(&spec, n, s + t + 8).unwrap().iter().map(|v| v.to_rational().unwrap()).collect();
        prop_assert!(f[..t].iter().all(Zero::is_zero));
        prop_assert!(!f[t].is_zero());
        prop_assert!(f[t + 1..t + s].iter().all(Zero::is_zero));
        prop_assert!(!f[t + s].is_zero());
        let r = &f[t + s] / &f[t];
        prop_assert_eq!(&w.ratio.to_rational().unwrap(), &r);

        let a = build_approximant(&spec, &w).unwrap();
        let remainder: Vec<BigRational> = (0..f.len())
            .map(|m| {
                let back = if m >= s { &r * &f[m - s] } else { BigRational::zero() };
                &f[m] - back - a.p.get(m).cloned().unwrap_or_else(BigRational::zero)
            })
            .collect();
        prop_assert!(remainder[..=s + t].iter().all(Zero::is_zero));
        if let Some(k) = a.remainder_order {
            let k = k as usize;
            prop_assert!(k > s + t);
            if k < remainder.len() {
                prop_assert!(remainder[..k].iter().all(Zero::is_zero));
                prop_assert!(!remainder[k].is_zero());
            }
        }
        let c = BigRational::from_integer(BigInt::from(a.c.clone()));
        prop_assert!(a.p.iter().all(|v| (v * &c).is_integer()));
    }

    /// Factorial-support spec: every quantity in the inequality is a power of
    /// two except `log2 b`, so the oracle only needs one series logarithm.
    #[test]
    fn factorial_support_verdicts_match_oracle(b in 2u64..10, k in 2i64..400, first in any::<bool>()) {
        let eps = BigRational::new(BigInt::one(), BigInt::from(k));
        let variant = if first { Thm21Variant::First } else { Thm21Variant::Second };
        let report = check_theorem21(&corollary22_spec(2).unwrap(), b, &eps, variant, 1..=6, None).unwrap();
        prop_assert_eq!(report.l, Some(1));
        let (lb_lo, lb_hi) = oracle_log2_u64(b);
        let one = BigRational::one();
        for row in &report.rows {
            let n = row.n;
            let beta_bits = if is_factorial(n) { 1i64 << n } else { 0 };
            let b_bits: i64 = (0..n).filter(|&y| is_factorial(y)).map(|y| 1i64 << y).sum();
            let (l1_lo, l1_hi) = oracle_log2(&((BigUint::one() << beta_bits as u64) + 1u32));
            let rest = if first {
                (int(2) + &eps) * int(beta_bits) + (int(3) + &eps) * int(b_bits)
            } else {
                (&one + &eps) * (int(beta_bits) + int(b_bits))
            };
            let shift = rest - int(beta_bits);
            let lhs = (l1_lo + &shift, l1_hi + &shift);
            let w = (&one - &eps) * int(1 << n);
            let rhs = (&w * &lb_lo, &w * &lb_hi);
            if let Some(v) = decide(lhs, rhs, true) {
                prop_assert_eq!(v, row.holds, "n = {}", n);
            }
        }
    }

    /// `f_y = v`, `F_y = 2^(c r^y)`: both sides are exact except `log2 b`.
    #[test]
    fn integer_sequence_verdicts_match_oracle(
        v in 1i64..64, coeff in 6u64..10, ratio in 2u64..4, b in 2u64..12, k in 1i64..50, main in any::<bool>()
    ) {
        let eps = BigRational::new(BigInt::one(), BigInt::from(k));
        let f = IntSequence::Constant { value: IntText(BigInt::from(v)) };
        let big_f = IntSequence::Power { base: 2, coeff, ratio, mult: IntText(BigInt::one()) };
        let variant = if main { Prop23Variant::Main } else { Prop23Variant::Remark };
        let report = check_prop23(&f, &big_f, b, 2, &eps, variant, 0..=4).unwrap();
        let (lb_lo, lb_hi) = oracle_log2_u64(b);
        let (lv_lo, lv_hi) = oracle_log2_u64(v as u64);
        let weight = int(if main { 2 } else { 1 }) + &eps;
        for row in &report.rows {
            let y = row.n as u32;
            let exp = |j: u32| int((coeff * ratio.pow(j)) as i64);
            let lhs = (&lv_lo - exp(y), &lv_hi - exp(y));
            let sum: BigRational = (0..y).map(exp).sum();
            let tail = &eps * int(1 << y);
            let rhs = (-(&weight * &sum) - &tail * &lb_hi, -(&weight * &sum) - &tail * &lb_lo);
            if let Some(holds) = decide(lhs, rhs, false) {
                prop_assert_eq!(holds, row.holds, "y = {}", y);
            }
            prop_assert_eq!(row.coprime, Some(v % 2 != 0));
        }
    }
}

#[test]
fn linear_forms_contain_the_recomputed_value() {
    let tol = BigRational::new(BigInt::one(), BigInt::one() << 400u32);
    for (spec, b, range) in [
        (corollary22_spec(2).unwrap(), 4u64, 1..=5usize),
        (ProductSpec::thue_morse(), 3, 1..=5),
        (ProductSpec::thue_morse(), 10, 0..=4),
    ] {
        let value = evaluate(&spec, b, &tol).unwrap();
        for t in schmidt_triples(&spec, b, range).unwrap().triples {
            let d = BigRational::from_integer(&t.x1 - &t.x2);
            let recomputed = value.scale(&d).add_scalar(&-BigRational::from_integer(t.x3.clone()));
            assert!(t.linear_form.intersects(&recomputed), "n = {}", t.n);
            let height = [&t.x1, &t.x2, &t.x3].iter().map(|x| x.abs()).max().unwrap();
            assert_eq!(BigInt::from(t.height.clone()), height);
        }
    }
}
