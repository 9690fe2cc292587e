use thiserror::Error;

/// Everything that can go wrong while loading a carpet system or computing
/// one of its dimensions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CarpetError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("requires n > m >= 2 (got n={n}, m={m})")]
    BaseOrder { n: u32, m: u32 },
    #[error("system has no vertices")]
    EmptySystem,
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("digit out of range on edge {index}: ({x}, {y}) not in [0,{n}) x [0,{m})")]
    DigitOutOfRange { index: usize, x: u32, y: u32, n: u32, m: u32 },
    #[error("duplicate edge {from} -> {to} at ({x}, {y})")]
    DuplicateEdge { from: String, to: String, x: u32, y: u32 },
    #[error("dangling vertex {0}")]
    DanglingVertex(String),
    #[error("automaton state budget exceeded ({0} states)")]
    StateBudget(usize),
    #[error("transition monoid budget exceeded ({0} elements)")]
    MonoidBudget(usize),
    #[error("enumeration budget exceeded at depth {requested}; largest feasible depth is {feasible}")]
    EnumerationBudget { requested: usize, feasible: usize },
    #[error("class count overflow at depth {0}")]
    CountOverflow(usize),
    #[error("power iteration did not converge within {0} iterations")]
    NonConvergence(usize),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl CarpetError {
    /// True for errors raised while validating an input document.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            CarpetError::Malformed(_)
                | CarpetError::UnknownKey(_)
                | CarpetError::BaseOrder { .. }
                | CarpetError::EmptySystem
                | CarpetError::DuplicateVertex(_)
                | CarpetError::UnknownVertex(_)
                | CarpetError::DigitOutOfRange { .. }
                | CarpetError::DuplicateEdge { .. }
                | CarpetError::DanglingVertex(_)
        )
    }

    /// True for errors raised when a computation would exceed a size budget.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            CarpetError::StateBudget(_)
                | CarpetError::MonoidBudget(_)
                | CarpetError::EnumerationBudget { .. }
                | CarpetError::CountOverflow(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, CarpetError>;
