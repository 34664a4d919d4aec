use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("triplet components A and B must be nonempty")]
    EmptyComponent,
    #[error("triplet components must be pairwise disjoint")]
    NotDisjoint,
    #[error("invalid universe: {0}")]
    InvalidUniverse(String),
    #[error("variable set refers to variables outside the universe of {n} variables")]
    OutOfUniverse { n: usize },
    #[error("operands live over different universes")]
    UniverseMismatch,
    #[error("universe of {n} variables exceeds the cap of {cap} for this operation")]
    UniverseTooLarge { n: usize, cap: usize },
    #[error("resource budget of {budget} derived triplets exhausted")]
    ResourceBudgetExceeded { budget: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("marginal set must be nonempty")]
    EmptyMarginalSet,
    #[error("state space of {cells} cells exceeds the budget of {budget}")]
    StateSpaceTooLarge { cells: u128, budget: u128 },
    #[error("total weight {total} exceeds the exact-arithmetic cap")]
    WeightOverflow { total: u128 },
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("no verified witness measure after {retries} attempts")]
    WitnessNotFound { retries: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for failures caused by caps and budgets rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::UniverseTooLarge { .. }
                | Error::ResourceBudgetExceeded { .. }
                | Error::StateSpaceTooLarge { .. }
                | Error::WeightOverflow { .. }
                | Error::WitnessNotFound { .. }
        )
    }
}
