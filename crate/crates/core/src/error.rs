use std::fmt;

use thiserror::Error;

use crate::pperm::PartialPermutation;

pub type Result<T> = std::result::Result<T, Error>;

/// Why a completion procedure gave up.
#[derive(Debug, Clone, PartialEq)]
pub enum Obstruction {
    /// The forced corner block `ΣP_ij − (N−2)·1` misses being a projection by this much.
    CornerNotProjection { defect: f64 },
    /// A classical point has more undefined values than the `N − M` new rows can absorb.
    ClassicalPoint { point: PartialPermutation, undefined: usize, allowed: usize },
    /// The minor moduli `|det H^(j)|` are not all equal.
    ModulusProfile { moduli: Vec<f64> },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::CornerNotProjection { defect } => {
                write!(f, "corner block is not a projection (||P^2 - P|| = {defect:.3e})")
            }
            Obstruction::ClassicalPoint { point, undefined, allowed } => write!(
                f,
                "classical point [{point}] has {undefined} undefined values, at most {allowed} allowed"
            ),
            Obstruction::ModulusProfile { moduli } => {
                write!(f, "minor moduli are not constant: {moduli:?}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("entry ({row},{col}) has modulus {modulus}, expected 1")]
    NotUnitModulus { row: usize, col: usize, modulus: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("invalid partial permutation: {0}")]
    InvalidPermutation(String),
    #[error("enumeration size {requested} exceeds the limit {limit}")]
    LimitExceeded { requested: usize, limit: usize },
    #[error("{undefined} undefined values exceed N - M = {allowed}")]
    TooManyUndefined { undefined: usize, allowed: usize },
    #[error("duplicate entry in row {0}")]
    DuplicateInRow(usize),
    #[error("duplicate entry in column {0}")]
    DuplicateInColumn(usize),
    #[error("entry ({0},{1}) is outside the alphabet")]
    OutOfAlphabet(usize, usize),
    #[error("rows ({0},{1}) are not orthogonal: not a partial Hadamard matrix")]
    NotHadamard(usize, usize),
    #[error("grid is not submagic: {0}")]
    NotSubmagic(String),
    #[error("grid entries do not commute (worst commutator norm {0:.3e})")]
    NotCommuting(f64),
    #[error("block ({0},{1}) is not a rank one projection")]
    RankError(usize, usize),
    #[error("joint diagonalization did not converge: {0}")]
    DegenerateSplit(String),
    #[error("not completable: {0}")]
    NotCompletable(Obstruction),
    #[error("unsupported grid size {0} for random sampling")]
    Unsupported(usize),
    #[error("ill-conditioned determinant (relative residual {0:.3e})")]
    IllConditioned(f64),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
