//! Repetition witnesses, rational approximants and exact log-space checks of
//! the approximation inequalities.

pub mod logcmp;
pub mod prop23;
pub mod report;
pub mod schmidt;
pub mod theorem;
pub mod witness;

pub use prop23::{check_prop23, IntSequence, IntText, Prop23Variant};
pub use report::{FactoredInt, InequalityReport, InequalityRow, Summary, Variant};
pub use schmidt::{schmidt_triple, schmidt_triples, schmidt_triples_with, SchmidtReport, SchmidtTriple};
pub use theorem::{
    check_corollary22, check_theorem21, check_theorem21_with, corollary22_spec, level_denominators, Thm21Variant,
};
pub use witness::{build_approximant, find_repetition, RationalApproximant, RepetitionWitness, DEFAULT_WINDOW};
