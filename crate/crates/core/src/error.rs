use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("interpolation points must have pairwise distinct abscissae")]
    DuplicateAbscissa,

    #[error("entry {0} is repeated or outside 1..=n")]
    NotAPermutation(usize),

    #[error("descent positions must be strictly increasing and positive: {0:?}")]
    InvalidDescentSet(Vec<usize>),

    #[error("not a parking function: {0:?}")]
    NotAParkingFunction(Vec<usize>),

    #[error("position {position} outside 1..={len}")]
    PositionOutOfRange { position: usize, len: usize },

    #[error("prefix has length {got}, expected {expected} (the last descent)")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid counting state: {0}")]
    InvalidState(String),

    #[error("{0} is not a maximal spot of this state")]
    NotMaximalSpot(String),

    #[error("no admissible insertion spot for value {value}; prefix is not permissible")]
    ConstructionFailed { value: usize },

    #[error("{what} = {requested} exceeds the configured bound {bound}")]
    BoundExceeded {
        what: &'static str,
        requested: usize,
        bound: usize,
    },
}
