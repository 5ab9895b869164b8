use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("series has zero constant term and cannot be inverted")]
    ZeroConstantTerm,
    #[error("exp requires a series with vanishing constant term")]
    NonzeroConstantTerm,
    #[error("square root requires constant term 1")]
    SqrtConstantTerm,
    #[error("q-number base exponent must be nonzero")]
    ZeroBaseExponent,
    #[error("gamma argument {0} is not an integer; only integer arguments are supported")]
    UnsupportedFractionalArgument(String),
    #[error("gamma argument {0} is not positive")]
    NonPositiveGammaArgument(String),
    #[error("PBW degree {degree} exceeds the configured cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },
    #[error("degree caps differ: {0} vs {1}")]
    CapMismatch(u32, u32),
    #[error("no solution at order {0}; the ansatz degree cap is probably too small")]
    NoSolutionAtOrder(usize),
    #[error("linear system at order {0} is underdetermined and the pivot rule is 'none'")]
    UnderdeterminedWithoutPivot(usize),
    #[error("invariant-factor oracle infeasible at level {level}, order {order}")]
    OracleInfeasible { level: usize, order: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("matrix dimensions do not match: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("guard band {band} exceeds cutoff {cutoff}")]
    BandTooLarge { band: usize, cutoff: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("malformed data: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
