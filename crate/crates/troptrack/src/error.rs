//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by triangulation, track and loop operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The number of arcs differs from `6g - 6 + 3h`.
    #[error("arc count {found} does not match 6g-6+3h = {expected}")]
    ArcCountMismatch { expected: usize, found: usize },
    /// The triangle gluing does not describe the declared surface.
    #[error("invalid gluing: {0}")]
    GluingInvalid(String),
    /// A triangle has two sides on the same arc.
    #[error("triangle {0} is self-folded")]
    SelfFolded(usize),
    /// The surface violates `2g - 2 + h > 0` or `g = 0 => h > 3`.
    #[error("surface of genus {genus} with {punctures} punctures is excluded")]
    SurfaceExcluded { genus: usize, punctures: usize },
    /// Flipping the arc would create a self-folded triangle.
    #[error("flip at arc index {0} is blocked")]
    FlipBlocked(usize),
    /// The local configuration required by an elementary move is absent.
    #[error("move not applicable: {0}")]
    MoveNotApplicable(String),
    /// No successor track carries the reference measure.
    #[error("measure not carried: {0}")]
    NotCarried(String),
    /// A stable sign is required but the report is not stable.
    #[error("loop is not sign-stable")]
    NotStable,
    /// The path does not return the exchange matrix to itself.
    #[error("invalid mutation loop: {0}")]
    LoopInvalid(String),
    /// Structurally valid input with inconsistent content.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Malformed JSON or rational literal.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable identifier of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ArcCountMismatch { .. } => "ArcCountMismatch",
            Error::GluingInvalid(_) => "GluingInvalid",
            Error::SelfFolded(_) => "SelfFolded",
            Error::SurfaceExcluded { .. } => "SurfaceExcluded",
            Error::FlipBlocked(_) => "FlipBlocked",
            Error::MoveNotApplicable(_) => "MoveNotApplicable",
            Error::NotCarried(_) => "NotCarried",
            Error::NotStable => "NotStable",
            Error::LoopInvalid(_) => "LoopInvalid",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
