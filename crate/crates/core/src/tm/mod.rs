//! Generalized Thue-Morse words over the cyclic alphabet `Z/L`.
//!
//! Letters are residues `j` standing for `exp(2 pi i j / L)`. The word is the
//! limit of `A_0 = 0` and
//!
//! ```text
//! A_{k+1} = A_k f^{mu_k(1)}(A_k) ... f^{mu_k(q_{k+1} - 1)}(A_k)
//! ```
//!
//! where `f` adds 1 to every letter. Equivalently the letter at `m` is the sum
//! of `mu_y(s_y)` over the digits of `m`.

mod periodicity;
mod subsequence;

pub use periodicity::{periodicity_witness, PeriodicityVerdict};
pub use subsequence::{
    subsequence_period_scan, subsequence_period_scan_with, subsequence_value, ScanVerdict, SubsequenceValue, ValueMap,
};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeration::{to_digits, to_digits_u64, weight_u64, DigitVector, RadixSequence};
use crate::product::spec::ProductSpec;
use crate::rules::RowRule;

/// Largest word `build_word` will allocate, in letters.
pub const DEFAULT_WORD_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TMSpec {
    #[serde(rename = "L")]
    pub l: u64,
    pub radix: RadixSequence,
    pub mu: RowRule<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTMSpec {
    #[serde(rename = "L")]
    l: u64,
    radix: RadixSequence,
    mu: RowRule<u64>,
}

impl<'de> Deserialize<'de> for TMSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawTMSpec::deserialize(d)?;
        TMSpec::new(raw.l, raw.radix, raw.mu).map_err(serde::de::Error::custom)
    }
}

impl TMSpec {
    pub fn new(l: u64, radix: RadixSequence, mu: RowRule<u64>) -> Result<Self> {
        let spec = TMSpec { l, radix, mu };
        spec.validate()?;
        Ok(spec)
    }

    /// The classical sequence: binary radix, `mu = 1` everywhere.
    pub fn thue_morse() -> Self {
        TMSpec::new(2, RadixSequence::binary(), RowRule::Constant { values: vec![1] }).expect("valid")
    }

    pub fn validate(&self) -> Result<()> {
        if self.l == 0 {
            return Err(Error::InvalidSpec("alphabet size L must be at least 1".into()));
        }
        self.radix.validate()?;
        self.mu.validate()?;
        if let Some(bad) = self.mu.all_values().into_iter().find(|&&r| r >= self.l) {
            return Err(Error::InvalidSpec(format!("residue {bad} is not below L = {}", self.l)));
        }
        Ok(())
    }

    /// `mu_y(s)`.
    pub fn mu(&self, s: u64, y: usize) -> u64 {
        *self.mu.value(s, y)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::SpecParse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    fn digit_sum(&self, digits: &DigitVector) -> u64 {
        digits.iter().fold(0u64, |acc, (y, s)| (acc + self.mu(s, y)) % self.l)
    }
}

/// Finite prefix `A_n` of the word, of length `Q_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Word {
    pub level: usize,
    pub letters: Vec<u32>,
}

impl Word {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Residues separated by spaces, `block` letters per line (all on one
    /// line when `None`).
    pub fn to_text(&self, block: Option<usize>) -> String {
        let chunk = block.unwrap_or(self.letters.len()).max(1);
        let mut out = String::new();
        for part in self.letters.chunks(chunk) {
            let line: Vec<String> = part.iter().map(u32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// `f^j`: add `j` to every letter modulo `L`.
pub fn morphism_apply(letters: &[u32], j: u64, l: u64) -> Vec<u32> {
    letters.iter().map(|&r| ((r as u64 + j) % l) as u32).collect()
}

pub fn build_word(spec: &TMSpec, n: usize) -> Result<Word> {
    build_word_with_budget(spec, n, DEFAULT_WORD_BUDGET)
}

pub fn build_word_with_budget(spec: &TMSpec, n: usize, budget: u64) -> Result<Word> {
    let too_large = || {
        let len = crate::numeration::weight(&spec.radix, n).to_string();
        Error::DepthTooLarge { level: n, len, budget }
    };
    let len = weight_u64(&spec.radix, n).ok_or_else(too_large)?;
    if len > budget {
        return Err(too_large());
    }
    let mut letters: Vec<u32> = Vec::with_capacity(len as usize);
    letters.push(0);
    for k in 0..n {
        let base = letters.len();
        for s in 1..=spec.radix.max_digit(k) {
            let shift = spec.mu(s, k);
            letters.extend_from_within(0..base);
            let start = letters.len() - base;
            for r in &mut letters[start..] {
                *r = ((*r as u64 + shift) % spec.l) as u32;
            }
        }
    }
    Ok(Word { level: n, letters })
}

/// Letter at position `m`, from the digits of `m`.
pub fn letter(spec: &TMSpec, m: &BigUint) -> u64 {
    spec.digit_sum(&to_digits(m, &spec.radix))
}

pub fn letter_u64(spec: &TMSpec, m: u64) -> u64 {
    spec.digit_sum(&to_digits_u64(m, &spec.radix))
}

/// The generating function as a product over roots of unity of order `L`.
pub fn to_product_spec(spec: &TMSpec) -> ProductSpec {
    ProductSpec::unit_root(spec.radix.clone(), spec.l, spec.mu.clone()).expect("validated residues")
}
