//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used by every fallible function in the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the library.
///
/// Variants carry enough context to produce a actionable message without
/// the caller having to re-derive anything; diagnostics (deviations,
/// indices, line numbers) are embedded directly.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix expected to be unitary failed the `‖A·A† − I‖_max` check.
    #[error("matrix is not unitary (max deviation {deviation:.3e}, tolerance {tol:.3e})")]
    NotUnitary { deviation: f64, tol: f64 },

    /// A matrix expected to be Hermitian failed the `‖A − A†‖_max` check.
    #[error("matrix is not Hermitian (max deviation {deviation:.3e}, tolerance {tol:.3e})")]
    NotHermitian { deviation: f64, tol: f64 },

    /// Two objects that must share a dimension or length do not.
    #[error("dimension mismatch: {left} vs {right} ({context})")]
    DimMismatch {
        left: usize,
        right: usize,
        context: &'static str,
    },

    /// A matrix or state dimension is not a power of two.
    #[error("dimension {dim} is not a power of two")]
    NotPowerOfTwo { dim: usize },

    /// A qubit index is outside the register.
    #[error("qubit index {index} out of range for {n_qubits} qubit(s)")]
    BadIndex { index: usize, n_qubits: usize },

    /// A logarithm-branch offset vector has the wrong length.
    #[error("branch offset vector has length {got}, expected {expected}")]
    BranchLengthMismatch { got: usize, expected: usize },

    /// Operators handed to a decomposition are not a commuting involutory family.
    #[error("operators are not a commuting involutory family (max violation {violation:.3e})")]
    NotCommutingInvolutory { violation: f64 },

    /// A request exceeds a hard size limit (exhaustive searches, dense circuits).
    #[error("problem too large: {0}")]
    TooLarge(String),

    /// The drive envelope integrates to zero, so no coefficient can be realized.
    #[error("drive integral vanishes over [0, tau]; the mode cannot realize a nonzero coefficient")]
    DegenerateDrive,

    /// An unrecognized gate name in a circuit or on the command line.
    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    /// A gate received the wrong number of parameters.
    #[error("gate `{gate}` expects {expected} parameter(s), got {got}")]
    BadParamCount {
        gate: String,
        expected: usize,
        got: usize,
    },

    /// A malformed line in a circuit file.
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    /// A circuit line references a qubit outside the declared register.
    #[error("line {line}: qubit index {index} out of range (circuit has {n_qubits} qubit(s))")]
    IndexOutOfRange {
        line: usize,
        index: usize,
        n_qubits: usize,
    },

    /// A gate line lists the same qubit twice.
    #[error("line {line}: duplicate qubit index {index}")]
    DuplicateQubit { line: usize, index: usize },

    /// Rényi order must be positive and ≠ 1.
    #[error("Renyi order must be positive and different from 1, got {0}")]
    BadAlpha(f64),

    /// A matrix fed to an entropy or Bloch routine is not a density operator.
    #[error("not a density operator: {0}")]
    NotDensityOperator(String),

    /// An operation that needs at least two qubits got fewer.
    #[error("operator acts on fewer than two qubits")]
    TooFewQubits,

    /// A parameter failed validation (non-positive frequency, empty mode list, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative numerical routine failed to reach its target accuracy.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Underlying I/O failure when reading circuit or matrix files.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON in a matrix or field-configuration file.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
