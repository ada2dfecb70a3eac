use genacc_core::Error;

/// Exit status for usage and input errors.
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}:{line}:{col}: {msg}")]
    Parse {
        path: String,
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::CapExceeded { .. }) => 2,
            CliError::Core(
                Error::ReadableHalfRelator(_)
                | Error::NotSmallCancellation(_)
                | Error::NotCertified,
            ) => 1,
            _ => EXIT_USAGE,
        }
    }

    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse",
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Json(_) => "json",
            CliError::Core(e) => match e {
                Error::LetterOutOfRange { .. } => "letter-out-of-range",
                Error::BadRank(_) => "bad-rank",
                Error::BadChar(_) => "bad-char",
                Error::EmptyWord => "empty-word",
                Error::ZeroLength => "zero-length",
                Error::Overflow => "overflow",
                Error::Disconnected => "disconnected",
                Error::NotFolded => "not-folded",
                Error::BadVertex(_) => "bad-vertex",
                Error::BadRelator(_) => "bad-relator",
                Error::NotSmallCancellation(_) => "not-small-cancellation",
                Error::BadParameter(_) => "bad-parameter",
                Error::NotLambdaReduced(_) => "not-lambda-reduced",
                Error::BadArc(_) => "bad-arc",
                Error::CapExceeded { .. } => "cap-exceeded",
                Error::NotCertified => "not-certified",
                Error::MismatchedPresentations => "mismatched-presentations",
                Error::ZeroBudget => "zero-budget",
                Error::ReadableHalfRelator(_) => "readable-half-relator",
                Error::TooManyGenerators { .. } => "too-many-generators",
            },
        }
    }
}

pub fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

pub fn write_file(path: &str, data: &str) -> Result<(), CliError> {
    std::fs::write(path, data).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}
