use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("an automaton needs at least one state")]
    NoStates,
    #[error("alphabet size {0} outside 1..=26")]
    BadAlphabet(usize),
    #[error("{0} states is more than this library can index")]
    TooManyStates(usize),
    #[error("transition table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("state {state} outside 1..={n}")]
    StateOutOfRange { state: usize, n: usize },
    #[error("letter index {letter} outside alphabet of size {k}")]
    InvalidLetter { letter: usize, k: usize },
    #[error("not a word over a..z: `{0}`")]
    BadWord(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyncError {
    #[error("automaton is not strongly connected")]
    NotStronglyConnected,
    #[error("automaton is not complete")]
    NotComplete,
    #[error(transparent)]
    InvalidWord(#[from] AutomatonError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("line {line}: malformed DIMACS header: {msg}")]
    MalformedHeader { line: usize, msg: String },
    #[error("line {line}: bad token `{token}`")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {literal} outside 1..={n_vars}")]
    LiteralOutOfRange { line: usize, literal: i64, n_vars: usize },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("last clause is not terminated by 0")]
    UnterminatedClause,
    #[error("header announces {expected} clauses, found {found}")]
    ClauseCount { expected: usize, found: usize },
    #[error("instance is not normalized (needs m = n + 1 and no tautological clause)")]
    NotNormalized,
    #[error("automaton has {0} letters, expected 4")]
    WrongAlphabet(usize),
    #[error("word is not a concatenation of blocks a^i b with i < 4")]
    MalformedEncoding,
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}
