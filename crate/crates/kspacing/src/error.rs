use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Domain errors raised by spacing, normalization and experiment routines.
///
/// Every variant names the violated precondition so that callers (and the
/// CLI) can surface it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample value {value} at index {index} lies outside [0, 1]")]
    ValueOutsideUnitInterval { index: usize, value: f64 },

    #[error("sample is not sorted: values[{index}] = {value} is below its predecessor {previous}")]
    UnsortedSample {
        index: usize,
        value: f64,
        previous: f64,
    },

    #[error("window order k must be at least 1")]
    WindowOrderZero,

    #[error("window order k = {k} exceeds n + 1 = {max} for a sample of {n} interior points")]
    WindowOrderTooLarge { k: usize, n: usize, max: usize },

    #[error("centering for k = {k} requires n >= {min} (log log n must be positive); got n = {n}")]
    CenteringDomain { n: u64, k: usize, min: u64 },

    #[error("probability must lie strictly inside (0, 1); got {p}")]
    ProbabilityOutOfRange { p: f64 },

    #[error("observed maximal spacing must lie in (0, 1]; got {m}")]
    ObservedSpacingOutOfRange { m: f64 },

    #[error("gamma tail point must be non-negative; got {y}")]
    NegativeTailPoint { y: f64 },

    #[error("gamma shape must be a positive integer; got 0")]
    ZeroGammaShape,

    #[error("innovation x[{index}] = {value} is not strictly positive")]
    NonPositiveInnovation { index: usize, value: f64 },

    #[error("innovation draw needs at least one variate")]
    EmptyInnovationDraw,

    #[error("empirical distribution needs at least one sample point")]
    EmptySample,

    #[error("sample contains a non-finite value {value}")]
    NonFiniteSample { value: f64 },

    #[error("{context} requires trials >= {min}; got {trials}")]
    TooFewTrials {
        context: &'static str,
        min: u64,
        trials: u64,
    },

    #[error("{context} requires n >= {min}; got {n}")]
    SampleSizeTooSmall {
        context: &'static str,
        min: u64,
        n: u64,
    },

    #[error("conditional exceedance estimation requires run_length >= {min}; got {run_length}")]
    RunTooShort { min: u64, run_length: u64 },
}
