use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum HoloError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("blackening factor does not approach 1 at the boundary (f = {0})")]
    NonAsymptoticallyAds(f64),
    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("tabulated profile depths must be strictly increasing (sample {index})")]
    NonMonotoneProfile { index: usize },
    #[error("invalid tabulated profile: {0}")]
    InvalidProfile(String),
    #[error("numerical failure: {0}")]
    Numerics(String),
    #[error("bracket ({lo}, {hi}) does not enclose a phase change")]
    Bracket { lo: f64, hi: f64 },
    #[error("scan failed at every grid point: {0}")]
    Scan(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] IoError),
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("refusing to emit an empty series")]
    EmptySeries,
    #[error("{0}")]
    Os(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed series file: {0}")]
    Malformed(String),
}

impl From<std::io::Error> for HoloError {
    fn from(e: std::io::Error) -> Self {
        HoloError::Io(IoError::Os(e))
    }
}

impl HoloError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        HoloError::Domain(msg.into())
    }

    pub(crate) fn numerics(msg: impl Into<String>) -> Self {
        HoloError::Numerics(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            HoloError::Numerics(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = HoloError> = std::result::Result<T, E>;
