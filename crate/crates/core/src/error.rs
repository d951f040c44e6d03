use thiserror::Error;

/// Failures raised by the exact continued-fraction machinery.
///
/// Domain errors describe bad input; the `Invariant*` and `BoundExceeded`
/// variants mean a mathematical invariant broke and should never be seen.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfError {
    #[error("discriminant {0} is not positive: the roots are not real and distinct")]
    NonPositiveDiscriminant(i64),
    #[error("discriminant {0} is a perfect square: the root is rational")]
    SquareDiscriminant(i64),
    #[error("leading coefficient must be positive, got {0}")]
    NonPositiveLeading(i64),
    #[error("denominator of a surd must be nonzero")]
    ZeroDenominator,
    #[error("discriminant {0} is not 0 or 1 mod 4")]
    InvalidDiscriminant(i64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("integer overflow while {0}")]
    Overflow(&'static str),
    #[error("step budget of {0} exhausted before the period closed")]
    StepBudget(usize),
    #[error("numeric budget of {0} nodes exhausted before reaching tolerance")]
    NodeBudget(usize),
    #[error("river walk ran {steps} steps without recurrence, bound is {bound}")]
    BoundExceeded { steps: usize, bound: u64 },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl CfError {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            CfError::NonPositiveDiscriminant(_) => "nonpositive_discriminant",
            CfError::SquareDiscriminant(_) => "square_discriminant",
            CfError::NonPositiveLeading(_) => "nonpositive_leading",
            CfError::ZeroDenominator => "zero_denominator",
            CfError::InvalidDiscriminant(_) => "invalid_discriminant",
            CfError::InvalidArgument(_) => "invalid_argument",
            CfError::Overflow(_) => "overflow",
            CfError::StepBudget(_) => "step_budget",
            CfError::NodeBudget(_) => "node_budget",
            CfError::BoundExceeded { .. } => "bound_exceeded",
            CfError::Invariant(_) => "invariant",
        }
    }

    /// True when the error reports a broken proven bound or invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, CfError::Invariant(_) | CfError::BoundExceeded { .. } | CfError::StepBudget(_))
    }
}

pub type Result<T> = std::result::Result<T, CfError>;
