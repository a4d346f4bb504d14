use thiserror::Error;

/// Errors raised by constructions, parsers and runners.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed protocol: {0}")]
    MalformedProtocol(String),

    #[error("rule {rule} is not enabled in the current configuration")]
    RuleNotEnabled { rule: usize },

    #[error("automaton is not deterministic: {0}")]
    NotDeterministic(String),

    #[error("automaton does not satisfy the normal-form requirements: {0}")]
    NotNormalized(String),

    #[error("trace does not end in an accepting configuration")]
    NotAccepting,

    #[error("protocol is not correct (first violation at block {0})")]
    IncorrectProtocol(usize),

    #[error("invalid typing: {0}")]
    InvalidTyping(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
