use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "quadrature did not converge: estimated error {residual:e} after {intervals} subintervals"
    )]
    QuadratureConvergence { residual: f64, intervals: usize },

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    EigenConvergence { iterations: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("integration unstable at t = {time}: trace drift {drift:e}")]
    IntegrationUnstable { time: f64, drift: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
