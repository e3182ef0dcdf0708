//! Exact arithmetic for mixed-radix infinite products, their rational
//! approximants and generalized Thue-Morse words.

pub mod approximation;
pub mod error;
pub mod exact;
pub mod exec;
pub mod log2;
pub mod numeration;
pub mod primes;
pub mod product;
pub mod rules;
pub mod tm;

pub use error::{Error, Result};
pub use exact::Interval;
pub use exec::Exec;
pub use numeration::{DigitVector, RadixSequence};
pub use product::{CoefficientValue, ProductSpec};
pub use rules::RowRule;
