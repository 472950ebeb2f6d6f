use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("curve is not embedded")]
    NotEmbedded,
    #[error("invalid vertex pair ({0}, {1})")]
    InvalidPair(usize, usize),
    #[error("resampling to {0} vertices produced a self-intersecting polygon")]
    ResampleFailure(usize),
    #[error("self-intersection after step {step}")]
    SelfIntersection { step: usize },
    #[error("non-finite coordinates after step {step}")]
    NumericalBlowup { step: usize },
    #[error("{0} outside its domain")]
    DomainError(String),
    #[error("operation requires a {expected} trajectory")]
    WrongRunKind { expected: &'static str },
    #[error("invalid configuration: {0}")]
    ConfigError(String),
    #[error("curve generation failed: {0}")]
    GenerationFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateCurve(_) => "DegenerateCurve",
            Error::NotEmbedded => "NotEmbedded",
            Error::InvalidPair(..) => "InvalidPair",
            Error::ResampleFailure(_) => "ResampleFailure",
            Error::SelfIntersection { .. } => "SelfIntersection",
            Error::NumericalBlowup { .. } => "NumericalBlowup",
            Error::DomainError(_) => "DomainError",
            Error::WrongRunKind { .. } => "WrongRunKind",
            Error::ConfigError(_) => "ConfigError",
            Error::GenerationFailure(_) => "GenerationFailure",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
