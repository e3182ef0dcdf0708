use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// Each variant maps to a stable machine-readable code via [`Error::code`];
/// the CLI writes that code into its reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("spec does not parse: {0}")]
    SpecParse(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("digit {digit} at position {position} is outside 0..={max}")]
    DigitOutOfRange { position: usize, digit: i128, max: u64 },

    #[error("no qualifying multiplier up to search cap {cap}")]
    SearchExhausted { cap: u64 },

    #[error("value needs {bits} bits, materialization cap is {cap} bits")]
    CapExceeded { bits: String, cap: u64 },

    #[error("block {block} breaks the copy structure at offset {offset}")]
    StructureViolation { block: u64, offset: u64 },

    #[error("product does not converge: {0}")]
    DivergentSpec(String),

    #[error("factor {level} vanishes at the evaluation point")]
    ZeroFactor { level: usize },

    #[error("no repetition witness for tail {tail} within window {window}")]
    NoWitness { tail: usize, window: usize },

    #[error("witness fails the remainder check at degree {degree}")]
    WitnessInvalid { degree: usize },

    #[error("hypothesis violated at index {index}: {reason}")]
    HypothesisViolated { index: usize, reason: String },

    #[error("word level {level} has {len} letters, budget is {budget}")]
    DepthTooLarge { level: usize, len: String, budget: u64 },

    #[error("operation not supported for this coefficient domain: {0}")]
    UnsupportedDomain(String),

    #[error("comparison at index {index} undecided at {bits} bits of precision")]
    AmbiguousComparison { index: usize, bits: u32 },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::SpecParse(_) => "SPEC_PARSE",
            Error::InvalidSpec(_) => "INVALID_SPEC",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
            Error::DigitOutOfRange { .. } => "DIGIT_OUT_OF_RANGE",
            Error::SearchExhausted { .. } => "SEARCH_EXHAUSTED",
            Error::CapExceeded { .. } => "CAP_EXCEEDED",
            Error::StructureViolation { .. } => "STRUCTURE_VIOLATION",
            Error::DivergentSpec(_) => "DIVERGENT_SPEC",
            Error::ZeroFactor { .. } => "ZERO_FACTOR",
            Error::NoWitness { .. } => "NO_WITNESS",
            Error::WitnessInvalid { .. } => "WITNESS_INVALID",
            Error::HypothesisViolated { .. } => "HYPOTHESIS_VIOLATED",
            Error::DepthTooLarge { .. } => "DEPTH_TOO_LARGE",
            Error::UnsupportedDomain(_) => "UNSUPPORTED_DOMAIN",
            Error::AmbiguousComparison { .. } => "AMBIGUOUS_COMPARISON",
        }
    }

    /// True for errors that mean "the mathematical hypothesis does not hold
    /// for this input" rather than "the input is malformed".
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(
            self,
            Error::NoWitness { .. }
                | Error::HypothesisViolated { .. }
                | Error::StructureViolation { .. }
                | Error::ZeroFactor { .. }
                | Error::DivergentSpec(_)
                | Error::SearchExhausted { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
