use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("subgroups or maps live in different ambient groups")]
    AmbientMismatch,

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("matrix does not define an endomorphism: {0}")]
    IncompatibleEndomorphism(String),

    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("group is not {0}-divisible")]
    NotDivisible(String),

    #[error("subgroup is not inert under the given endomorphism")]
    NotInert,

    #[error("expected a finite index, got an infinite one")]
    InfiniteIndex,

    #[error("endomorphism is not invertible")]
    NotInvertible,

    #[error("unsupported ambient: {0}")]
    UnsupportedAmbient(String),

    #[error("element cap of {cap} exceeded")]
    CapExceeded { cap: usize },

    #[error("no stabilization within {max_steps} steps")]
    StabilizationNotDetected { max_steps: usize },

    #[error("a root modulus could not be separated from 1 within the refinement budget")]
    IndeterminateNearUnitCircle,

    #[error("refinement budget of {0} iterations exhausted")]
    BudgetExceeded(usize),

    #[error("zero polynomial")]
    ZeroPolynomial,
}

impl Error {
    /// Budget and stabilization failures, as opposed to domain errors.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. }
                | Error::StabilizationNotDetected { .. }
                | Error::BudgetExceeded(_)
                | Error::IndeterminateNearUnitCircle
        )
    }
}
