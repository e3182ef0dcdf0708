//! Mixed-radix numeration.
//!
//! A radix sequence `q_0 = 1, q_1, q_2, ...` with every `q_j >= 2` gives each
//! natural number a unique expansion `n = sum s_y * Q_y` where
//! `Q_y = q_0 * q_1 * ... * q_y` and `0 <= s_y <= q_{y+1} - 1`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Finite description of an infinite radix sequence. `q_0 = 1` is implied.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RadixSequence {
    /// `q_j = q` for all `j >= 1`.
    Constant { q: u64 },
    /// `q_j = qs[(j - 1) mod len]`.
    Periodic { qs: Vec<u64> },
    /// `q_j = qs[j - 1]` while in range, `default` afterwards.
    Table { qs: Vec<u64>, default: u64 },
}

impl RadixSequence {
    pub fn binary() -> Self {
        RadixSequence::Constant { q: 2 }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |q: u64| {
            if q < 2 {
                Err(Error::InvalidSpec(format!("radix entry {q} is below 2")))
            } else {
                Ok(())
            }
        };
        match self {
            RadixSequence::Constant { q } => check(*q),
            RadixSequence::Periodic { qs } => {
                if qs.is_empty() {
                    return Err(Error::InvalidSpec("periodic radix needs at least one entry".into()));
                }
                qs.iter().copied().try_for_each(check)
            }
            RadixSequence::Table { qs, default } => {
                qs.iter().copied().try_for_each(check)?;
                check(*default)
            }
        }
    }

    /// `q_j`, with `q_0 = 1`.
    pub fn q(&self, j: usize) -> u64 {
        if j == 0 {
            return 1;
        }
        match self {
            RadixSequence::Constant { q } => *q,
            RadixSequence::Periodic { qs } => qs[(j - 1) % qs.len()],
            RadixSequence::Table { qs, default } => qs.get(j - 1).copied().unwrap_or(*default),
        }
    }

    /// Number of admissible nonzero digits at position `y`, i.e. `q_{y+1} - 1`.
    pub fn max_digit(&self, y: usize) -> u64 {
        self.q(y + 1) - 1
    }

    /// The radix of the tail starting at `n`: `q'_j = q_{n+j}` for `j >= 1`,
    /// so that `Q'_y = Q_{n+y} / Q_n`.
    pub fn shifted(&self, n: usize) -> RadixSequence {
        if n == 0 {
            return self.clone();
        }
        match self {
            RadixSequence::Constant { .. } => self.clone(),
            RadixSequence::Periodic { qs } => {
                let k = n % qs.len();
                let mut rotated = qs[k..].to_vec();
                rotated.extend_from_slice(&qs[..k]);
                RadixSequence::Periodic { qs: rotated }
            }
            RadixSequence::Table { qs, default } => {
                if n < qs.len() {
                    RadixSequence::Table { qs: qs[n..].to_vec(), default: *default }
                } else {
                    RadixSequence::Constant { q: *default }
                }
            }
        }
    }

    /// `(start, period)` such that `q_{j+1}` is periodic in `j` with the
    /// given period from `j = start` on.
    pub fn eventual_period(&self) -> (usize, usize) {
        match self {
            RadixSequence::Constant { .. } => (0, 1),
            RadixSequence::Periodic { qs } => (0, qs.len()),
            RadixSequence::Table { qs, .. } => (qs.len(), 1),
        }
    }

    /// Distinct entries `q_j`, `j >= 1`.
    pub fn distinct_entries(&self) -> Vec<u64> {
        let mut out: Vec<u64> = match self {
            RadixSequence::Constant { q } => vec![*q],
            RadixSequence::Periodic { qs } => qs.clone(),
            RadixSequence::Table { qs, default } => {
                let mut v = qs.clone();
                v.push(*default);
                v
            }
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Smallest `y` with `Q_y > n`; the number of digit positions needed for
    /// every value below `n`.
    pub fn positions_below(&self, n: &BigUint) -> usize {
        let mut weight = BigUint::one();
        let mut y = 0;
        while &weight <= n {
            y += 1;
            weight *= self.q(y);
        }
        y
    }
}

/// `[Q_0, Q_1, ..., Q_n]`.
pub fn cumulative_products(radix: &RadixSequence, n: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = BigUint::one();
    out.push(acc.clone());
    for j in 1..=n {
        acc *= radix.q(j);
        out.push(acc.clone());
    }
    out
}

/// `Q_n` on its own.
pub fn weight(radix: &RadixSequence, n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, j| acc * radix.q(j))
}

/// `Q_n` when it fits in a `u64`.
pub fn weight_u64(radix: &RadixSequence, n: usize) -> Option<u64> {
    (1..=n).try_fold(1u64, |acc, j| acc.checked_mul(radix.q(j)))
}

/// Sparse digit vector: `(position, digit)` pairs, positions strictly
/// increasing, zero digits omitted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DigitVector {
    entries: Vec<(usize, u64)>,
}

impl DigitVector {
    pub fn empty() -> Self {
        DigitVector::default()
    }

    /// Build from `(position, digit)` pairs as they come from user input.
    /// Zero digits are dropped; positions must be strictly increasing and
    /// digits nonnegative. Digit upper bounds are checked by [`from_digits`].
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, i128)>,
    {
        let mut entries = Vec::new();
        let mut last: Option<usize> = None;
        for (position, digit) in pairs {
            if last.is_some_and(|p| position <= p) {
                return Err(Error::InvalidArgument(format!(
                    "digit positions must be strictly increasing (got {position} after {})",
                    last.unwrap()
                )));
            }
            last = Some(position);
            if digit < 0 || digit > u64::MAX as i128 {
                return Err(Error::DigitOutOfRange { position, digit, max: 0 });
            }
            if digit != 0 {
                entries.push((position, digit as u64));
            }
        }
        Ok(DigitVector { entries })
    }

    pub fn entries(&self) -> &[(usize, u64)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Digit at `position` (zero when not stored).
    pub fn digit(&self, position: usize) -> u64 {
        self.entries.binary_search_by_key(&position, |&(p, _)| p).map(|i| self.entries[i].1).unwrap_or(0)
    }

    /// Lowest position carrying a nonzero digit.
    pub fn lowest_position(&self) -> Option<usize> {
        self.entries.first().map(|&(p, _)| p)
    }

    /// `[[y, s], ...]`, the wire form.
    pub fn to_pairs(&self) -> Vec<[u64; 2]> {
        self.entries.iter().map(|&(p, d)| [p as u64, d]).collect()
    }
}

/// Greedy expansion by successive division by `q_1, q_2, ...`.
pub fn to_digits(n: &BigUint, radix: &RadixSequence) -> DigitVector {
    if let Some(small) = n.to_u64() {
        return to_digits_u64(small, radix);
    }
    let mut entries = Vec::new();
    let mut rest = n.clone();
    let mut y = 0;
    while !rest.is_zero() {
        let (quot, digit) = rest.div_rem(&BigUint::from(radix.q(y + 1)));
        if !digit.is_zero() {
            entries.push((y, digit.to_u64().expect("digit below radix")));
        }
        rest = quot;
        y += 1;
    }
    DigitVector { entries }
}

pub fn to_digits_u64(mut n: u64, radix: &RadixSequence) -> DigitVector {
    let mut entries = Vec::new();
    let mut y = 0;
    while n != 0 {
        let q = radix.q(y + 1);
        let digit = n % q;
        if digit != 0 {
            entries.push((y, digit));
        }
        n /= q;
        y += 1;
    }
    DigitVector { entries }
}

/// `sum s_y * Q_y`, rejecting digits above `q_{y+1} - 1`.
pub fn from_digits(digits: &DigitVector, radix: &RadixSequence) -> Result<BigUint> {
    let mut total = BigUint::zero();
    let mut weight = BigUint::one();
    let mut y = 0;
    for &(position, digit) in &digits.entries {
        let max = radix.max_digit(position);
        if digit > max {
            return Err(Error::DigitOutOfRange { position, digit: digit as i128, max });
        }
        while y < position {
            y += 1;
            weight *= radix.q(y);
        }
        total += &weight * digit;
    }
    Ok(total)
}

/// True when the lowest nonzero digit of `n` is 1 and the next `t`
/// positions above it hold 0.
pub fn has_sparse_pattern(n: &BigUint, t: usize, radix: &RadixSequence) -> bool {
    let digits = to_digits(n, radix);
    let Some(&(low, first)) = digits.entries.first() else {
        return false;
    };
    first == 1 && digits.entries.get(1).is_none_or(|&(next, _)| next > low + t)
}

/// Smallest `x` in `1..=search_cap` such that `x * l` has the sparse digit
/// pattern of [`has_sparse_pattern`].
pub fn find_sparse_multiple(l: u64, t: usize, radix: &RadixSequence, search_cap: u64) -> Result<u64> {
    find_sparse_multiple_with(Exec::Sequential, l, t, radix, search_cap)
}

pub fn find_sparse_multiple_with(exec: Exec, l: u64, t: usize, radix: &RadixSequence, search_cap: u64) -> Result<u64> {
    if l == 0 {
        return Err(Error::InvalidArgument("l must be positive".into()));
    }
    radix.validate()?;
    let l_big = BigUint::from(l);
    let found = exec.find_first(1, search_cap.saturating_add(1), |x| has_sparse_pattern(&(&l_big * x), t, radix));
    let x = found.ok_or(Error::SearchExhausted { cap: search_cap })?;
    // re-verify through an independent expansion of the product
    let n = &l_big * x;
    let digits = to_digits(&n, radix);
    assert_eq!(from_digits(&digits, radix).ok(), Some(n.clone()), "digit roundtrip");
    assert!(has_sparse_pattern(&n, t, radix));
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(qs: &[u64], default: u64) -> RadixSequence {
        RadixSequence::Table { qs: qs.to_vec(), default }
    }

    fn ints(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn cumulative_products_examples() {
        assert_eq!(cumulative_products(&RadixSequence::binary(), 4), ints(&[1, 2, 4, 8, 16]));
        assert_eq!(cumulative_products(&table(&[2, 3, 4], 2), 3), ints(&[1, 2, 6, 24]));
        let periodic = RadixSequence::Periodic { qs: vec![3, 5] };
        assert_eq!(cumulative_products(&periodic, 3), ints(&[1, 3, 15, 45]));
        assert_eq!(weight(&periodic, 3), BigUint::from(45u32));
        assert_eq!(weight_u64(&periodic, 3), Some(45));
        assert_eq!(weight_u64(&RadixSequence::binary(), 64), None);
    }

    #[test]
    fn digit_examples() {
        assert!(to_digits(&BigUint::zero(), &RadixSequence::binary()).is_empty());
        let five = BigUint::from(5u32);
        assert_eq!(to_digits(&five, &RadixSequence::binary()).to_pairs(), vec![[0, 1], [2, 1]]);
        assert_eq!(to_digits(&five, &table(&[2, 3], 4)).to_pairs(), vec![[0, 1], [1, 2]]);
        let d = DigitVector::from_pairs([(0, 1), (1, 2)]).unwrap();
        assert_eq!(from_digits(&d, &table(&[2, 3], 4)).unwrap(), five);
        assert_eq!(from_digits(&DigitVector::empty(), &RadixSequence::binary()).unwrap(), BigUint::zero());
    }

    #[test]
    fn brute_force_representation_of_five() {
        // enumerate all bounded digit vectors on positions 0..3 for radix 2,3,4,...
        let radix = table(&[2, 3], 4);
        let mut hits = Vec::new();
        for s0 in 0..2u64 {
            for s1 in 0..3u64 {
                for s2 in 0..4u64 {
                    if s0 + 2 * s1 + 6 * s2 == 5 {
                        hits.push((s0, s1, s2));
                    }
                }
            }
        }
        assert_eq!(hits, vec![(1, 2, 0)]);
        assert_eq!(to_digits(&BigUint::from(5u32), &radix).to_pairs(), vec![[0, 1], [1, 2]]);
    }

    #[test]
    fn out_of_range_digits_rejected() {
        let d = DigitVector::from_pairs([(1, 2)]).unwrap();
        assert!(matches!(
            from_digits(&d, &RadixSequence::binary()),
            Err(Error::DigitOutOfRange { position: 1, digit: 2, max: 1 })
        ));
        assert!(matches!(DigitVector::from_pairs([(0, -1)]), Err(Error::DigitOutOfRange { .. })));
        assert!(DigitVector::from_pairs([(2, 1), (1, 1)]).is_err());
        // zeros are dropped
        assert_eq!(DigitVector::from_pairs([(0, 0), (3, 1)]).unwrap().to_pairs(), vec![[3, 1]]);
    }

    #[test]
    fn validation() {
        assert!(RadixSequence::Constant { q: 1 }.validate().is_err());
        assert!(RadixSequence::Periodic { qs: vec![] }.validate().is_err());
        assert!(table(&[2, 1], 3).validate().is_err());
        assert!(table(&[], 3).validate().is_ok());
    }

    #[test]
    fn shifted_radix_matches_offsets() {
        for radix in [RadixSequence::binary(), RadixSequence::Periodic { qs: vec![3, 5, 2] }, table(&[2, 3, 4, 5], 6)] {
            for n in 0..7 {
                let tail = radix.shifted(n);
                for j in 1..12 {
                    assert_eq!(tail.q(j), radix.q(n + j), "{radix:?} n={n} j={j}");
                }
            }
        }
    }

    #[test]
    fn json_schema() {
        let r: RadixSequence = serde_json::from_str(r#"{"kind":"table","qs":[2,3],"default":4}"#).unwrap();
        assert_eq!(r, table(&[2, 3], 4));
        let r: RadixSequence = serde_json::from_str(r#"{"kind":"constant","q":2}"#).unwrap();
        assert_eq!(r, RadixSequence::binary());
        assert!(serde_json::from_str::<RadixSequence>(r#"{"kind":"constant","q":2,"x":1}"#).is_err());
        assert_eq!(
            serde_json::to_string(&RadixSequence::Periodic { qs: vec![3, 5] }).unwrap(),
            r#"{"kind":"periodic","qs":[3,5]}"#
        );
    }

    #[test]
    fn sparse_multiple_examples() {
        let bin = RadixSequence::binary();
        assert_eq!(find_sparse_multiple(1, 3, &bin, 100).unwrap(), 1);
        assert_eq!(find_sparse_multiple(3, 2, &bin, 100).unwrap(), 3);
        // radix 2,3,3,...: x = 1 gives 2 = digit 1 at position 1, nothing above
        let r = table(&[2, 3], 3);
        let brute = (1u64..=10).find(|&x| {
            let d = to_digits_u64(2 * x, &r);
            let (low, first) = d.entries()[0];
            first == 1 && d.entries().iter().skip(1).all(|&(p, _)| p > low + 1)
        });
        assert_eq!(brute, Some(1));
        assert_eq!(find_sparse_multiple(2, 1, &r, 100).unwrap(), 1);
    }

    #[test]
    fn sparse_multiple_errors() {
        let bin = RadixSequence::binary();
        assert!(matches!(find_sparse_multiple(0, 1, &bin, 10), Err(Error::InvalidArgument(_))));
        // 7 * x for x <= 2 is 7 or 14; neither has a lone low bit followed by zeros
        assert!(matches!(find_sparse_multiple(7, 3, &bin, 2), Err(Error::SearchExhausted { cap: 2 })));
    }

    #[test]
    fn big_integer_digits() {
        let n = (BigUint::one() << 130u32) + 3u32;
        let d = to_digits(&n, &RadixSequence::binary());
        assert_eq!(d.to_pairs(), vec![[0, 1], [1, 1], [130, 1]]);
        assert_eq!(from_digits(&d, &RadixSequence::binary()).unwrap(), n);
        assert_eq!(RadixSequence::binary().positions_below(&BigUint::from(8u32)), 4);
    }
}
