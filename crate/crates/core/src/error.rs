use std::path::PathBuf;

/// Errors raised while loading data or validating requests.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Bad configuration: missing files, unknown or duplicate languages.
    #[error("configuration error: {0}")]
    Config(String),

    /// A data file line that violates the file format.
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// A request that is invalid for the loaded data.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
