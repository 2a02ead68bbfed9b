use thiserror::Error;

/// Errors raised while building, verifying, meshing or exporting a figure.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the set where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The figure or tessellation parameters are inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// Chained motions failed to close the figure.
    #[error("construction error: closure residual {residual:e} exceeds {limit:e}")]
    Construction { residual: f64, limit: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("slit policy error: {0}")]
    Policy(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
