use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("enumeration bound exceeded: {got} edges (limit {limit})")]
    EnumerationBound { got: usize, limit: usize },
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("event not applicable: {0}")]
    Event(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("statistical failure: {0}")]
    Stat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Error {
        Error::Io(std::io::Error::other(e))
    }
}

impl Error {
    /// Process exit code for the CLI: 2 config, 3 resource, 4 statistical, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::Geometry(_)
            | Error::Params(_)
            | Error::Schedule(_)
            | Error::Event(_) => 2,
            Error::EnumerationBound { .. } | Error::ResourceBound(_) => 3,
            Error::Stat(_) => 4,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
