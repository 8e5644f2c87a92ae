use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WdmError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An exact search was asked to run beyond its configured size cap.
    #[error("{what}: instance size {size} exceeds the cap of {cap}")]
    CapabilityExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    /// The reduced graph would be too large to build.
    #[error("reduction guard: N = {n} (limit {guard}), projected vertex count {projected}")]
    ReductionGuard {
        n: usize,
        guard: usize,
        projected: u128,
    },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The reduction's solution extraction only handles seeds in normal form.
    #[error("normal-form violation: {0}")]
    NormalForm(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("bound violated: {0}")]
    BoundViolated(String),

    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, WdmError>;

impl WdmError {
    /// True for the errors that mean "instance too large", as opposed to
    /// a bad input or a failed check.
    pub fn is_capability(&self) -> bool {
        matches!(
            self,
            WdmError::CapabilityExceeded { .. } | WdmError::ReductionGuard { .. }
        )
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        WdmError::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        WdmError::Parse {
            line,
            message: msg.into(),
        }
    }
}
