//! Exact decision of ultimate periodicity.
//!
//! The word is ultimately periodic iff some offset `A` satisfies, for every
//! `y >= 0` and every digit `1 <= s <= q_{A+y+1} - 1`,
//!
//! ```text
//! mu_{A+y}(s) = mu_A(1) * s * q_{A+1} * ... * q_{A+y}   (mod L)
//! ```
//!
//! Radix and `mu` are periodic in the level from some point on, so for a
//! fixed `A` the pair (phase of `A + y`, running product mod `L`) takes
//! finitely many values and evolves deterministically. Checking until that
//! pair repeats settles every `y`. Offsets past the preperiod only matter
//! through their phase, so finitely many candidates settle every `A`.

use std::collections::HashSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::rules::joint_period;

use super::TMSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodicityVerdict {
    /// Smallest offset satisfying the criterion for every level.
    Found(usize),
    /// No offset below `depth` works; larger ones were not examined.
    NoneUpTo(usize),
    /// No offset works at all.
    DecidedNone,
}

impl fmt::Display for PeriodicityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeriodicityVerdict::Found(a) => write!(f, "FOUND({a})"),
            PeriodicityVerdict::NoneUpTo(d) => write!(f, "NONE_UP_TO({d})"),
            PeriodicityVerdict::DecidedNone => f.write_str("DECIDED_NONE"),
        }
    }
}

impl Serialize for PeriodicityVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

struct Phases {
    start: usize,
    period: usize,
}

impl Phases {
    fn of(&self, level: usize) -> usize {
        if level < self.start {
            level
        } else {
            self.start + (level - self.start) % self.period
        }
    }
}

/// Does offset `a` satisfy the congruence at every level?
fn offset_works(spec: &TMSpec, a: usize, phases: &Phases) -> bool {
    let l = spec.l;
    let lead = spec.mu(1, a) % l;
    let mut seen = HashSet::new();
    let mut product = 1 % l;
    let mut level = a;
    while seen.insert((phases.of(level), product)) {
        for s in 1..=spec.radix.max_digit(level) {
            let expected = (lead * (s % l) % l) * product % l;
            if spec.mu(s, level) % l != expected {
                return false;
            }
        }
        product = product * (spec.radix.q(level + 1) % l) % l;
        level += 1;
    }
    true
}

/// Decide the criterion for offsets `A < depth`. The verdict is exact: when
/// every distinct offset lies below `depth` a negative answer is
/// [`DecidedNone`](PeriodicityVerdict::DecidedNone).
pub fn periodicity_witness(spec: &TMSpec, depth: usize) -> PeriodicityVerdict {
    let (start, period) = joint_period(spec.radix.eventual_period(), spec.mu.eventual_period());
    let phases = Phases { start, period };
    let distinct = start + period;
    let limit = depth.min(distinct);
    match (0..limit).find(|&a| offset_works(spec, a, &phases)) {
        Some(a) => PeriodicityVerdict::Found(a),
        None if limit == distinct => PeriodicityVerdict::DecidedNone,
        None => PeriodicityVerdict::NoneUpTo(depth),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeration::RadixSequence;
    use crate::rules::RowRule;

    #[test]
    fn classical_sequence_is_never_periodic() {
        assert_eq!(periodicity_witness(&TMSpec::thue_morse(), 12), PeriodicityVerdict::DecidedNone);
    }

    #[test]
    fn trivial_alphabet_is_periodic() {
        let spec =
            TMSpec::new(1, RadixSequence::Periodic { qs: vec![3, 2] }, RowRule::Constant { values: vec![0] }).unwrap();
        assert_eq!(periodicity_witness(&spec, 1), PeriodicityVerdict::Found(0));
    }

    #[test]
    fn table_example_is_found_at_zero() {
        let spec =
            TMSpec::new(2, RadixSequence::binary(), RowRule::Table { rows: vec![vec![1]], default: vec![0] }).unwrap();
        assert_eq!(periodicity_witness(&spec, 4), PeriodicityVerdict::Found(0));
    }

    #[test]
    fn single_flip_word_alternates() {
        // only the lowest digit contributes, so the letter is m mod 2
        let spec =
            TMSpec::new(2, RadixSequence::binary(), RowRule::Table { rows: vec![vec![1]], default: vec![0] }).unwrap();
        let w = crate::tm::build_word(&spec, 3).unwrap();
        assert_eq!(w.letters, vec![0, 1, 0, 1, 0, 1, 0, 1]);
        assert_eq!(periodicity_witness(&spec, 4), PeriodicityVerdict::Found(0));
    }

    #[test]
    fn late_offsets() {
        // mu_0 = 1, then 0 from level 1 on, but L = 3 and q = 2: A = 0 needs
        // mu_1(1) = 2 mod 3. A = 1 has lead 0 and works.
        let spec =
            TMSpec::new(3, RadixSequence::binary(), RowRule::Table { rows: vec![vec![1]], default: vec![0] }).unwrap();
        assert_eq!(periodicity_witness(&spec, 5), PeriodicityVerdict::Found(1));
        assert_eq!(periodicity_witness(&spec, 1), PeriodicityVerdict::NoneUpTo(1));
    }

    #[test]
    fn multiplicative_pattern() {
        // L = 4, q = 2, mu_y(1) = 2^y mod 4 = 1, 2, 0, 0, ... satisfies it from A = 0
        let spec =
            TMSpec::new(4, RadixSequence::binary(), RowRule::Table { rows: vec![vec![1], vec![2]], default: vec![0] })
                .unwrap();
        assert_eq!(periodicity_witness(&spec, 8), PeriodicityVerdict::Found(0));
        assert_eq!(PeriodicityVerdict::Found(0).to_string(), "FOUND(0)");
    }
}
