use thiserror::Error;

/// Failure modes shared by every verification module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain (bad index, non-dominant weight, n < 2, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Inputs coincide where the formula divides by their difference.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// A rational function whose denominator vanishes at the expansion point.
    #[error("not expandable as a power series: {0}")]
    NotExpandable(String),
    /// A computation that must be exact was not (non-exact division, failed internal assertion).
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("division by zero")]
    DivisionByZero,
    /// An enumeration would exceed the configured element budget.
    #[error("enumeration budget exceeded: {needed} elements requested, budget is {budget}")]
    Budget { needed: u128, budget: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
