use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A plane point was fed to a sphere map (or vice versa), or two
    /// objects over different spaces were combined.
    #[error("space mismatch: operation mixes plane and sphere objects")]
    SpaceMismatch,

    /// A symbol outside 1..=N was used against an alphabet of size N.
    #[error("symbol {symbol} out of range for alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: u32, alphabet: u32 },

    /// A precondition on an argument failed; the message names the field.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Deterministic set iteration grew past the configured point budget.
    #[error("point budget exceeded: needed {required} points, budget is {budget}")]
    PointBudgetExceeded { budget: usize, required: usize },

    /// A planar orbit left the escape bound; carries the first bad index.
    #[error("orbit escaped at step {index} (point magnitude exceeded the escape bound)")]
    OrbitEscaped { index: usize },

    /// A map inverse was requested but |det| is below the invertibility floor.
    #[error("map {index} is not invertible (|det| = {det:e})")]
    NotInvertible { index: usize, det: f64 },

    /// An enumeration over N^m words would exceed the word budget.
    #[error("word budget exceeded: N^m = {requested} exceeds {budget}")]
    WordBudgetExceeded { requested: u128, budget: u64 },

    /// A word argument is shorter than the operation requires.
    #[error("prefix too short: need at least {required} symbols, got {actual}")]
    PrefixTooShort { required: usize, actual: usize },

    /// An operation defined for one kernel kind was called on another.
    #[error("kernel kind mismatch: expected a {expected} kernel")]
    KernelKindMismatch { expected: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
