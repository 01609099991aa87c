use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: expected {expected}, got {actual} ({what})")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("empty frame")]
    EmptyFrame,

    #[error("singular normal equations in equalizer design")]
    SingularSystem,

    #[error("non-finite sample at index {0}")]
    NonFiniteSample(usize),

    #[error("alist parse error at line {line}: {message}")]
    Alist { line: usize, message: String },

    #[error("malformed equalizer file: {0}")]
    EqualizerFormat(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown built-in code `{0}`")]
    UnknownCode(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
