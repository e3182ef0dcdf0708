//! Trial-division factorization for the small integers that appear in rules.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const TRIAL_LIMIT: u64 = 1 << 20;

/// Distinct prime factors of `n`, ascending. A cofactor with no prime factor
/// below 2^20 is returned as is (it may be composite).
pub fn prime_factors(n: &BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut rest = n.clone();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && !rest.is_one() {
        let bp = BigUint::from(p);
        if (&bp * &bp) > rest {
            break;
        }
        if rest.is_multiple_of(&bp) {
            out.push(bp.clone());
            while rest.is_multiple_of(&bp) {
                rest /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        out.push(rest);
    }
    out
}

/// `v_p(n)`, the exponent of `p` in `n > 0`.
pub fn valuation(n: &BigUint, p: &BigUint) -> u64 {
    let mut k = 0;
    let mut rest = n.clone();
    while !rest.is_zero() && rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    k
}

pub fn prime_factors_u64(n: u64) -> Vec<u64> {
    prime_factors(&BigUint::from(n)).iter().map(|p| p.to_u64().expect("divides a u64")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors() {
        assert_eq!(prime_factors_u64(1), Vec::<u64>::new());
        assert_eq!(prime_factors_u64(2), vec![2]);
        assert_eq!(prime_factors_u64(360), vec![2, 3, 5]);
        assert_eq!(prime_factors_u64(999_983), vec![999_983]);
        assert_eq!(prime_factors_u64(2 * 999_983), vec![2, 999_983]);
        assert_eq!(valuation(&BigUint::from(48u32), &BigUint::from(2u32)), 4);
        assert_eq!(valuation(&BigUint::from(7u32), &BigUint::from(2u32)), 0);
    }
}
