use thiserror::Error;

/// Errors raised by the geometry, solver and tracing layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("topology error: {0}")]
    Topology(String),

    #[error("orientation error: edge ({0}, {1}) is traversed twice in the same direction")]
    Orientation(usize, usize),

    #[error("orientation error: signed volume {0:e} is not positive (inward-facing normals)")]
    InwardOrientation(f64),

    #[error("degenerate triangle {index}: area {area:e} below threshold {threshold:e}")]
    Degenerate {
        index: usize,
        area: f64,
        threshold: f64,
    },

    #[error("singular system: condition estimate {condition:e}")]
    Singular { condition: f64 },

    #[error("solve residual {residual:e} exceeds {tolerance:e}")]
    Residual { residual: f64, tolerance: f64 },

    #[error("outside expansion trust region: k*diam = {k_diam} > {limit}")]
    TrustRegion { k_diam: f64, limit: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("ray entering at ({x}, {y}) exceeded the bounce cap of {cap}")]
    NonTermination { x: f64, y: f64, cap: usize },

    #[error("invalid argument `{field}`: {message}")]
    InvalidArgument { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(field: &str, message: impl Into<String>) -> Self {
        Error::InvalidArgument {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument { .. } | Error::Io(_) | Error::Domain(_) => 2,
            Error::Parse { .. }
            | Error::Topology(_)
            | Error::Orientation(..)
            | Error::InwardOrientation(_)
            | Error::Degenerate { .. } => 3,
            Error::Singular { .. } | Error::Residual { .. } | Error::NonTermination { .. } => 4,
            Error::TrustRegion { .. } => 5,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
