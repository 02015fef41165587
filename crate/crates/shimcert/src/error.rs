//! Error type shared across the crate.

use std::fmt;

use crate::series::MultiIndex;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Binary series operation with mismatched variable counts.
    VariableCountMismatch { left: usize, right: usize },
    /// Reciprocal of a series whose constant term vanishes.
    ZeroConstantTerm,
    /// A kernel that must be normalized (constant term 1, positive
    /// coefficients up to the truncation) is not.
    NotNormalized(String),
    /// Matrix entries do not form a Hermitian matrix.
    NotHermitian { row: usize, col: usize },
    /// Incompatible matrix dimensions.
    DimensionMismatch(String),
    /// A float matrix contains NaN or infinite entries.
    NonFinite,
    /// Parrott data violates a norm constraint beyond the allowed slack.
    ConstraintNorm {
        which: &'static str,
        norm: f64,
        slack: f64,
    },
    /// A set that must be co-invariant is not; the witness is a missing index.
    InvalidCoInvariant { witness: MultiIndex },
    /// Negative coefficient where nonnegative ones are required.
    NegativeCoefficient { index: MultiIndex },
    /// Identically zero input where a nonzero one is required.
    ZeroSeries,
    /// Chain of Schur-complement indices repeats an index.
    RepeatedChainIndex(u32),
    /// Regularity failure: a coefficient-matrix pivot vanished at this stage.
    RegularityFailure { stage: usize },
    /// A pointwise Schur-complement denominator vanished (or fell under the
    /// float threshold).
    VanishingDenominator { stage: usize, value: f64 },
    /// Kernel diagonal vanishes at a point where a Schur complement is taken.
    VanishingDiagonal,
    /// Two points that must be distinct coincide.
    CoincidentPoint,
    /// Kernel sections at the requested points are numerically dependent.
    /// Reported, never resolved silently.
    DependentKernelFunctions { min_eigenvalue: f64 },
    /// Gram matrix of a requested span is too ill-conditioned to invert.
    IllConditionedSpan { condition: f64 },
    /// Caratheodory data whose extension matrix is not a contraction; the
    /// string carries the exact witness description.
    InfeasibleExtension(String),
    /// Invalid parameter value (nonpositive weight, lambda out of range, ...).
    InvalidParameter(String),
    /// Malformed input file or JSON payload.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::VariableCountMismatch { left, right } => {
                write!(f, "variable count mismatch: {left} vs {right}")
            }
            Error::ZeroConstantTerm => write!(f, "series has zero constant term"),
            Error::NotNormalized(what) => write!(f, "kernel is not normalized: {what}"),
            Error::NotHermitian { row, col } => {
                write!(f, "matrix is not Hermitian at ({row}, {col})")
            }
            Error::DimensionMismatch(what) => write!(f, "dimension mismatch: {what}"),
            Error::NonFinite => write!(f, "matrix has non-finite entries"),
            Error::ConstraintNorm { which, norm, slack } => {
                write!(f, "constraint block {which} has norm {norm} > 1 + {slack}")
            }
            Error::InvalidCoInvariant { witness } => {
                write!(f, "index set is not co-invariant: missing {witness}")
            }
            Error::NegativeCoefficient { index } => {
                write!(f, "negative coefficient at index {index}")
            }
            Error::ZeroSeries => write!(f, "series is identically zero"),
            Error::RepeatedChainIndex(m) => write!(f, "chain index {m} repeats"),
            Error::RegularityFailure { stage } => {
                write!(f, "regularity failure: zero pivot at stage {stage}")
            }
            Error::VanishingDenominator { stage, value } => {
                write!(f, "vanishing denominator at stage {stage}: {value}")
            }
            Error::VanishingDiagonal => write!(f, "kernel diagonal vanishes at the base point"),
            Error::CoincidentPoint => write!(f, "points must be pairwise distinct"),
            Error::DependentKernelFunctions { min_eigenvalue } => {
                write!(
                    f,
                    "kernel sections are numerically dependent (min Gram eigenvalue {min_eigenvalue:e})"
                )
            }
            Error::IllConditionedSpan { condition } => {
                write!(
                    f,
                    "span Gram matrix is ill-conditioned (condition {condition:e})"
                )
            }
            Error::InfeasibleExtension(witness) => {
                write!(f, "extension matrix is not a contraction: {witness}")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::Parse(what) => write!(f, "parse error: {what}"),
        }
    }
}

impl std::error::Error for Error {}
