use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("the {0} cannot be moved")]
    NotPortable(String),
    #[error("the {0} is closed")]
    ContainerClosed(String),
    #[error("there is no {0} here")]
    NoSuchEntity(String),
    #[error("unrecognized command: {0:?}")]
    UnrecognizedCommand(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("the episode is over")]
    EpisodeDone,
    #[error("malformed world: {0}")]
    MalformedWorld(String),
    #[error("ran out of unique {game} problems for the {split} split after {attempts} attempts")]
    ExhaustedSpace {
        game: String,
        split: String,
        attempts: u64,
    },
    #[error("variation index {0} is out of range (0..{1})")]
    IndexOutOfRange(usize, usize),
    #[error("unknown game {0:?}")]
    UnknownGame(String),
    #[error("unknown split {0:?}")]
    UnknownSplit(String),
    #[error("unknown agent {0:?}")]
    UnknownAgent(String),
    #[error("I don't know where the {0} is.")]
    UnknownTarget(String),
    #[error("I don't know a path to the {0}.")]
    NoKnownPath(String),
    #[error("No objects with quantities have been observed.")]
    NothingObserved,
    #[error("agent failed: {0}")]
    AgentFailed(String),
    #[error("malformed record: {0}")]
    MalformedRecord(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
