use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("operand length mismatch: {left} vs {right} qubits")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("cannot parse Pauli string: {0}")]
    Parse(String),
    #[error("lookup table needs 2^{needed} entries, cap is 2^{cap}")]
    BudgetExceeded { needed: usize, cap: usize },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("integrator failed: {0}")]
    Integrator(String),
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = core::result::Result<T, Error>;
