use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid MDP: {0}")]
    InvalidMdp(String),

    #[error("state {0} is the terminal state")]
    TerminalState(usize),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    #[error("policy appears improper: {0}")]
    ImproperPolicy(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("iteration cap of {0} sweeps exceeded")]
    IterationCap(u64),

    #[error("MDP appears to admit an improper stationary policy")]
    NotAllProper,

    #[error("episode did not terminate within {0} steps")]
    EpisodeCap(usize),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid features: {0}")]
    Features(String),

    #[error("invalid schedule: {0}")]
    Schedule(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
