use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("singular point: {0}")]
    SingularPoint(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integral does not converge: {0}")]
    NonConvergent(String),

    #[error("tail bound {bound:.3e} exceeds budget {budget:.3e}; increase the truncation radius (currently {r_trunc})")]
    TailTooLarge { bound: f64, budget: f64, r_trunc: f64 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("C0 constancy violated: spread {spread:.3e} > {limit:.3e}")]
    ConstancyViolated { spread: f64, limit: f64 },

    #[error("Monte Carlo estimate unreliable: {0}")]
    MonteCarlo(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
