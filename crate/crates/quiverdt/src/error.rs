//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Everything that can go wrong outside of plain logic bugs.
///
/// `Internal` is reserved for broken invariants (non-exact division,
/// non-integral DT extraction, asymmetric symmetrization input): if it ever
/// surfaces, the library itself is at fault, not the caller.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} vertices, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("slope of the zero dimension vector is undefined")]
    ZeroDimVector,

    #[error("series live over different quivers or truncation boxes")]
    SeriesMismatch,

    #[error("division by zero")]
    DivisionByZero,

    #[error("substitution exponent must be nonzero")]
    ZeroSubstitution,

    #[error("slope tags must be strictly decreasing: {0} precedes {1}")]
    SlopesNotDecreasing(String, String),

    #[error("constant term must vanish")]
    ConstantTermNotZero,

    #[error("constant term must be 1")]
    ConstantTermNotOne,

    #[error("free series generator at the zero dimension vector")]
    ZeroGenerator,

    #[error("quiver is not symmetric")]
    NotSymmetric,

    #[error("stability is not generic at slope {slope} within box {bounds}")]
    NotGeneric { slope: String, bounds: String },

    #[error("dimension vector {d} lies outside the box {bounds}")]
    OutOfBox { d: String, bounds: String },

    #[error("element is not homogeneous")]
    NotHomogeneous,

    #[error("cohomological degree {got} outside the computed range 0..={max}")]
    DegreeOutOfRange { got: usize, max: usize },

    #[error("jmax {got} too small: the answer stabilizes only from {need}")]
    JmaxTooSmall { need: usize, got: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("enumeration would visit {needed} points, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
