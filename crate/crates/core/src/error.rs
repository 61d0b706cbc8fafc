use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// A syntax error with the byte offset at which it was detected.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(pos: usize, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("duplicate letter `{0}` in alphabet")]
    DuplicateLetter(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("letter `{0}` is not in the alphabet")]
    UnknownLetter(String),
    #[error("node index {index} out of range for a graph with {nodes} nodes")]
    NodeOutOfRange { index: usize, nodes: usize },
    #[error("tuple has length {found}, relation arity is {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("relation is over {found} nodes, the graph has {expected}")]
    NodeCountMismatch { expected: usize, found: usize },
    #[error("relation arity must be positive")]
    ZeroArity,
    #[error("operation needs a binary relation, got arity {0}")]
    NotBinary(usize),
    #[error("data path needs {expected} letters between its values, got {found}")]
    PathShape { expected: usize, found: usize },
    #[error("no `{letter}` edge from `{from}` to `{to}`")]
    NotAnEdge {
        from: String,
        letter: String,
        to: String,
    },
    #[error("register r{register} out of range for {registers} registers")]
    RegisterOutOfRange { register: usize, registers: usize },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("search budget of {budget} exhausted")]
    ResourceExhausted { budget: usize },
    #[error("relation is not definable in the requested language")]
    NotDefinable,
    #[error("synthesized query does not evaluate to the input relation")]
    SynthesisMismatch,
}
