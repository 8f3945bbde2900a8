use thiserror::Error;

/// Why a triangle was rejected as degenerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DegenerateReason {
    RepeatedVertex,
    Collinear,
}

impl std::fmt::Display for DegenerateReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DegenerateReason::RepeatedVertex => f.write_str("repeated vertex"),
            DegenerateReason::Collinear => f.write_str("collinear"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("non-finite coordinate")]
    InvalidCoordinate,
    #[error("degenerate construction: {0}")]
    DegenerateConstruction(&'static str),
    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(DegenerateReason),
    #[error("simplex id {0} is out of range")]
    OutOfRange(i32),
    #[error("malformed descriptor: {0}")]
    MalformedDescriptor(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
