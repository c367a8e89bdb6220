use thiserror::Error;

/// Errors raised by the solver, the limiter and the benchmark harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A non-physical state (negative density or pressure, non-finite value).
    #[error("inadmissible state in cell {cell}: {message}")]
    State { cell: usize, message: String },

    #[error("exact-solution oracle failed: {0}")]
    Oracle(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("time {time:.6e}, step {step}: {source}")]
    Step {
        time: f64,
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn state(cell: usize, msg: impl Into<String>) -> Self {
        Error::State {
            cell,
            message: msg.into(),
        }
    }

    /// Strip step context and return the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::Step { source, .. } => source.root(),
            e => e,
        }
    }

    /// True for errors caused by a non-physical state.
    pub fn is_state_error(&self) -> bool {
        matches!(self.root(), Error::State { .. })
    }
}
