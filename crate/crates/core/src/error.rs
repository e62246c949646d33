use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("height bound must be at least 1, got {0}")]
    InvalidHeight(i64),

    #[error("height bound {bound} exceeds the overflow-safe limit {limit}")]
    HeightTooLarge { bound: i64, limit: i64 },

    #[error("plane point ({a}:{b}:{c}) is outside the chart x5 != 0")]
    OutsideChart { a: i64, b: i64, c: i64 },

    #[error("plane point ({a}:{b}:{c}) is not primitive")]
    NotPrimitive { a: i64, b: i64, c: i64 },

    #[error("plane point ({a}:{b}:{c}) maps to a point with a zero coordinate")]
    ZeroCoordinate { a: i64, b: i64, c: i64 },

    #[error("torsor relation violated: eta2*alpha1^2 + eta3*alpha2 + eta4*alpha3 = {0}")]
    TorsorRelation(i128),

    #[error("torsor point has a zero coordinate")]
    DegenerateTorsorPoint,

    #[error("canonicalization did not terminate within {0} moves")]
    NonTermination(usize),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("argument {arg} outside the domain: {reason}")]
    Domain { arg: f64, reason: &'static str },

    #[error("quadrature did not converge: estimated error {error:e} exceeds tolerance {tolerance:e} after {intervals} subintervals")]
    Quadrature {
        error: f64,
        tolerance: f64,
        intervals: usize,
    },

    #[error("prime cutoff must be at least {min}, got {got}")]
    InvalidCutoff { got: u64, min: u64 },

    #[error("eta entries must be positive, got {0:?}")]
    InvalidEta([u64; 4]),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
