use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("wall collision at t = {t}: box length {l} is below the floor {l_min}")]
    WallCollision { t: f64, l: f64, l_min: f64 },

    #[error("t = {t} is outside the tabulated window [{start}, {end}]")]
    OutOfWindow { t: f64, start: f64, end: f64 },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("banded solve failed at row {row}: pivot magnitude {pivot:e} (time step too large for the grid?)")]
    SolveFailure { row: usize, pivot: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("frame mismatch: expected {expected:?}, got {got:?}")]
    FrameMismatch {
        expected: crate::wavefield::Frame,
        got: crate::wavefield::Frame,
    },

    #[error("Zeno leakage {discarded} exceeds the bound {bound}; increase the number of slices")]
    LeakageTooLarge { discarded: f64, bound: f64 },

    #[error("potential has no time derivative (neither analytic nor finite difference)")]
    MissingTimeDerivative,

    #[error("mode index must be >= 1, got {0}")]
    BadMode(i64),

    #[error("{context}: {message}")]
    Parse { context: String, message: String },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("time mismatch: {0}")]
    TimeMismatch(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
