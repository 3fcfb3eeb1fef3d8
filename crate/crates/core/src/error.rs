use core::fmt;

use crate::esets::EsetError;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    DimensionMismatch { expected: usize, found: usize },
    LengthMismatch { expected: usize, found: usize },
    DuplicatePoint(usize),
    EmptyGrid,
    /// A query point is not a member of the grid it was evaluated on.
    OffGrid,
    /// The origin is required in a Y-grid but missing.
    OriginMissing,
    /// A dual point with `alpha <= 0` where `alpha > 0` is required.
    NonPositiveAlpha(usize),
    NegativeEpsilon,
    EmptyLadder,
    NonPositiveEta,
    InvalidPieces(&'static str),
    /// The full dual grid does not contain the embedded `(0, y*), (0, v*)` points.
    MissingEmbedding,
    Eset(EsetError),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected} values, found {found}")
            }
            Error::DuplicatePoint(i) => write!(f, "grid point {i} duplicates an earlier point"),
            Error::EmptyGrid => f.write_str("grid is empty"),
            Error::OffGrid => f.write_str("point is not on the grid"),
            Error::OriginMissing => f.write_str("the origin must belong to the y-grid"),
            Error::NonPositiveAlpha(i) => write!(f, "dual point {i} has alpha <= 0"),
            Error::NegativeEpsilon => f.write_str("epsilon must be nonnegative"),
            Error::EmptyLadder => f.write_str("the eta ladder is empty"),
            Error::NonPositiveEta => f.write_str("every eta in the ladder must be positive"),
            Error::InvalidPieces(why) => write!(f, "invalid piecewise-affine function: {why}"),
            Error::MissingEmbedding => {
                f.write_str("the full dual grid must contain ((0, y*), (0, v*), alpha) for every dual point")
            }
            Error::Eset(e) => write!(f, "{e}"),
        }
    }
}

impl From<EsetError> for Error {
    fn from(e: EsetError) -> Self {
        Error::Eset(e)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

#[cfg(feature = "std")]
impl std::error::Error for EsetError {}
