use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("instance too large: {what} is {actual}, limit {limit}")]
    TooLarge {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("graph needs at least two vertices")]
    TooSmall,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("edge {0}-{1} is not in the tree")]
    EdgeNotInTree(usize, usize),
    #[error("vertex sequence is not a path: {0}")]
    NotAPath(String),
    #[error("invalid modular partition: {0}")]
    InvalidPartition(String),
    #[error("invalid poly-star plan: {0}")]
    InvalidPlan(String),
    #[error("repositioning hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("extension counts are infeasible: {0}")]
    InfeasibleCounts(String),
    #[error("invalid X3C instance: {0}")]
    InvalidX3C(String),
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParameters(String),
    #[error("no algorithm applies: {0}")]
    AlgorithmUnavailable(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
