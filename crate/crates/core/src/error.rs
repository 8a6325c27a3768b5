use alloc::string::String;

/// Errors raised by the rewriting core.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(String),
    #[error("invalid probability literal `{0}`")]
    InvalidProbability(String),
    #[error("total mass {0} exceeds 1")]
    MassOverflow(String),
    #[error("rule right-hand side has mass {0}, expected exactly 1")]
    RuleMassNotOne(String),
    #[error("choice {index} is out of range: element has {available} rule(s)")]
    ChoiceOutOfRange { index: usize, available: usize },
    #[error("term substituted for a variable is not a value")]
    NotAValue,
    #[error("no redex at the given position")]
    InvalidPosition,
    #[error("expected a start of total mass 1, got {0}")]
    NotUnitMass(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
