use regret_elicit::engine::Probe;

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error("session {0} not found")]
    NotFound(String),
    #[error("{message}")]
    Conflict {
        message: &'static str,
        /// The problem still awaiting an answer, if any.
        outstanding: Option<Box<Probe>>,
    },
    #[error(transparent)]
    Invalid(#[from] regret_elicit::Error),
    #[error("corrupt event log: {0}")]
    Corrupt(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl ServiceError {
    pub fn conflict(message: &'static str) -> Self {
        ServiceError::Conflict {
            message,
            outstanding: None,
        }
    }
}

pub type Result<T, E = ServiceError> = std::result::Result<T, E>;
