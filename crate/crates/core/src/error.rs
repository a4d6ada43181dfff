use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },

    /// A relabeling clause that does not denote a function on names.
    #[error("malformed construct at {line}:{column}: {detail}")]
    UnboundConstruct {
        line: usize,
        column: usize,
        detail: String,
    },

    #[error("substituting for `{var}` would capture free variable `{captured}` under `rec {captured}`")]
    Capture { var: String, captured: String },

    #[error("process has free variables: {}", .0.join(", "))]
    OpenTerm(Vec<String>),

    #[error("recursion unfolds more than {limit} times without reaching a prefix in `{process}`")]
    UnguardedRecursion { process: String, limit: usize },

    #[error("state budget of {limit} exceeded after visiting {visited} states (frontier sample: {})", .frontier_sample.join("; "))]
    StateBudgetExceeded {
        limit: usize,
        visited: usize,
        frontier_sample: Vec<String>,
    },

    #[error("trace exploration exceeded the budget of {0} states")]
    BudgetExceeded(usize),

    #[error("action `{0}` is not a visible label")]
    NotVisible(String),

    #[error("hypothesis `{check}` of {theorem} does not hold")]
    HypothesisFailed { theorem: String, check: String },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("agent `{0}` is not defined")]
    UndefinedAgent(String),

    #[error("agent `{0}` is defined more than once")]
    DuplicateAgent(String),

    #[error("mutual recursion between agents: {}", .0.join(" -> "))]
    MutualRecursion(Vec<String>),
}
