use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field has {got} values, grid expects {expected}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("field contains a non-finite value at index {0}")]
    NonFinite(usize),

    #[error("operands live on different grids")]
    GridMismatch,

    #[error("inverse transform left imaginary residue {residue:e} (max real part {scale:e})")]
    ImaginaryResidue { residue: f64, scale: f64 },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("implicit operator is singular at mode {index}: 1 + dt*sigma = {value:e}")]
    SingularSymbol { index: usize, value: f64 },

    #[error("bound radicand is negative: {0:e}")]
    NegativeRadicand(f64),

    #[error("Newton iteration for {what} did not converge")]
    NoConvergence { what: &'static str },

    #[error("quadrature weights fail the exactness check by {0:e}")]
    IllConditioned(f64),

    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    #[error("wavevector {index} is not periodic on the box (off by {offset:e})")]
    NonPeriodicWavevector { index: usize, offset: f64 },

    #[error("lattice point {0:?} is listed more than once")]
    DuplicateLatticePoint([i64; 3]),

    #[error("lattice point {0:?} does not fit below the Nyquist index of the grid")]
    LatticeOutOfRange([i64; 3]),

    #[error("initial field violates the mass constraint: mean = {0:e}")]
    MassConstraint(f64),

    #[error("relaxation did not reach the stopping tolerance in {0} iterations")]
    NotConverged(usize),

    #[error("snapshot format error: {0}")]
    Format(String),

    #[error("snapshot payload truncated: expected {expected} values, found {found}")]
    TruncatedPayload { expected: usize, found: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
