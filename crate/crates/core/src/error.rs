use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex id {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("vertex set sized for {capacity} vertices used with a graph on {n} vertices")]
    SetCapacity { capacity: usize, n: usize },
    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid vertex label `{0}` (must be non-empty without whitespace)")]
    InvalidLabel(String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(String, String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Which legality condition a rejected move violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IllegalCause {
    /// The vertex's closed neighborhood is already fully dominated.
    NoNewDomination,
    /// The vertex is not adjacent to any played vertex.
    Disconnected,
}

impl IllegalCause {
    pub fn as_str(self) -> &'static str {
        match self {
            IllegalCause::NoNewDomination => "no-new-domination",
            IllegalCause::Disconnected => "disconnected",
        }
    }
}

impl std::fmt::Display for IllegalCause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("the game needs a connected graph with at least one vertex")]
    NotConnected,
    #[error("illegal move `{label}`: {cause}")]
    IllegalMove { label: String, cause: IllegalCause },
    #[error("illegal move `{label}` at index {index}: {cause}")]
    IllegalAt { index: usize, label: String, cause: IllegalCause },
    #[error("the game is already over")]
    GameOver,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("formula has no clauses")]
    NoClauses,
    #[error("formula has {k} variables; exact solving is capped at {cap}")]
    TooManyVariables { k: usize, cap: usize },
    #[error("all variables are already set")]
    NoUnsetVariable,
    #[error("variable X{0} is out of range")]
    VariableOutOfRange(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("graph has {n} vertices; the brute-force oracle is limited to {limit}")]
    OracleTooLarge { n: usize, limit: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("strategy `{strategy}` does not apply: {reason}")]
    NotApplicable { strategy: &'static str, reason: String },
    #[error("strategy `{strategy}` returned illegal move `{label}`: {cause}")]
    IllegalChoice { strategy: &'static str, label: String, cause: IllegalCause },
    #[error("strategy `{0}` has no move in a finished game")]
    NoMove(&'static str),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}
