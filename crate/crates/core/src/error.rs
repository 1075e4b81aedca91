use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("graph is disconnected: vertex {0} unreachable from vertex 0")]
    Disconnected(usize),
    #[error("graph is not a tree")]
    NotATree,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} exceeds cap: {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Infeasible(_) => 2,
            Error::CapExceeded { .. } => 3,
            Error::Invariant(_) => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
