//! Default numerical tolerances, collected in one place.
//!
//! Every tolerance here is a default: functions that check a property
//! structurally (unitarity, Hermiticity, commutation) accept an explicit
//! tolerance, and these constants are what the rest of the crate passes
//! when the caller has no reason to override.

/// Structural checks on matrices built from other validated matrices:
/// unitarity, Hermiticity, reconstruction residuals. Dense `f64` algebra on
/// dimensions up to ~1024 keeps errors a few orders of magnitude below this.
pub const STRUCTURAL: f64 = 1e-10;

/// Equality of two quantities that are exact in theory and differ only by
/// rounding (ratios of multiset norms, conservation checks).
pub const EQUALITY: f64 = 1e-12;

/// Coefficients with magnitude at or below this are treated as exact zeros
/// when forming coefficient multisets and Pauli expansions.
pub const ZERO_COEFF: f64 = 1e-9;

/// Below this, a drive-envelope normalization integral counts as vanished.
pub const DEGENERATE_DRIVE: f64 = 1e-12;

/// Eigenvalue-cluster gap (in the Hermitian/skew-Hermitian parts of a
/// unitary) above which two clusters are considered distinct spectral
/// blocks. Gaps this small in exact arithmetic would make eigenvectors
/// ill-conditioned, but the split is applied recursively, so phases closer
/// than this are merged and re-examined rather than mis-assigned.
pub const CLUSTER_GAP: f64 = 1e-7;

/// Deviation from a scalar block below which a spectral block is accepted
/// as a single degenerate eigenspace.
pub const SCALAR_BLOCK: f64 = 1e-12;
