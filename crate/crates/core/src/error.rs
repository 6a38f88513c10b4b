use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree set is empty")]
    EmptyDegreeSet,
    #[error("degree {0} is not a positive integer")]
    NonPositiveDegree(i64),
    #[error("could not parse degree list {0:?}")]
    InvalidDegreeList(String),

    #[error("division by the zero rational function")]
    DivisionByZeroRatFunc,
    #[error("elements belong to different families ({left:?} vs {right:?})")]
    FamilyMismatch { left: Vec<u32>, right: Vec<u32> },
    #[error("cannot invert the zero element")]
    ZeroInversion,
    #[error("defining polynomial shares a nontrivial factor with the element (family {degrees:?})")]
    ReducibleModulus { degrees: Vec<u32> },

    #[error("series has zero constant term and is not invertible")]
    NonUnitSeries,
    #[error("expression has a pole of order {0} at x = 0 after cancellation")]
    NotAPowerSeries(usize),

    #[error("Stirling index out of range: S2({i}, {r})")]
    IndexOutOfRange { i: usize, r: usize },
    #[error("empty sample space (N_0 = 0)")]
    EmptySampleSpace,
    #[error("degenerate distribution: variance is zero")]
    DegenerateDistribution,
    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("invalid samples: {0}")]
    InvalidSamples(String),

    #[error("n = {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("mismatch for family {degrees:?} ({pipeline}): n = {n}, r = {r}: oracle {expected}, pipeline {found}")]
    MismatchFound {
        degrees: Vec<u32>,
        pipeline: String,
        n: usize,
        r: usize,
        expected: String,
        found: String,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// The engine module that raises this error.
    pub fn module(&self) -> &'static str {
        use Error::*;
        match self {
            EmptyDegreeSet | NonPositiveDegree(_) | InvalidDegreeList(_) => "family",
            DivisionByZeroRatFunc | FamilyMismatch { .. } | ZeroInversion | ReducibleModulus { .. } => "algebra",
            NonUnitSeries | NotAPowerSeries(_) => "series",
            IndexOutOfRange { .. }
            | EmptySampleSpace
            | DegenerateDistribution
            | InsufficientSamples { .. }
            | InvalidSamples(_) => "stats",
            CapExceeded { .. } | MismatchFound { .. } => "oracle",
            InvalidConfig(_) => "config",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
