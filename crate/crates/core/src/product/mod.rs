//! Infinite products `prod_y (1 + sum_s c(s, y) z^(s Q_y))` and their
//! Taylor coefficients.

pub mod evaluate;
pub mod spec;
pub mod stream;
pub mod structure;
pub mod value;

pub use evaluate::{enclosure_sequence, evaluate, evaluate_with_depth, factor_value, partial_product, tail_bound};
pub use spec::{Coefficients, ProductSpec, RationalRule};
pub use stream::{coefficient, coefficient_u64, coefficients_range, expand, CoefficientStream, StreamSet};
pub use structure::{boundedness_report, copy_structure, BoundednessReport};
pub use value::{materialization_cap, set_materialization_cap, CoefficientValue, Denominator, DEFAULT_CAP_BITS};
