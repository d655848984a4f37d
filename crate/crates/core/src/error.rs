use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("truncation error: n_max = {n_max} is below the {required} required for tolerance {tol:e}")]
    Truncation { n_max: usize, required: usize, tol: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("horizon error: {0}")]
    Horizon(String),

    #[error("quadrature did not converge on [{a}, {b}]: estimate {estimate}, error {error:e} after {intervals} intervals")]
    Quadrature {
        a: f64,
        b: f64,
        estimate: String,
        error: f64,
        intervals: usize,
    },

    #[error("degenerate channel: both amplitudes vanish")]
    DegenerateChannel,
}

pub type Result<T> = std::result::Result<T, Error>;
