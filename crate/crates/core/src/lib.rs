//! Commuting involutory gate decompositions and coherent-field energy bounds.
//!
//! Any unitary gate `U` on `N` qubits can be written as `U = exp(i Σ λ_i V_i)`
//! where the `V_i` commute pairwise and square to the identity. The
//! coefficients `λ_i` are not unique — they depend on which branch of the
//! matrix logarithm is taken — but once a branch is fixed they follow from a
//! Walsh–Hadamard transform of the eigenphase vector. The magnitudes |λ_i|
//! control how much energy a coherent control field must carry to realize the
//! gate at a given error, which is what this crate computes.
//!
//! The crate is organized in layers:
//!
//! * [`matrix`], [`spectral`], [`state`] — dense complex linear algebra:
//!   Kronecker products, spectral decomposition of unitaries with a canonical
//!   eigenbasis, Hermitian exponentials, operator norms, partial traces.
//! * [`gates`], [`circuit`] — a small gate library (standard gates, controlled
//!   extensions, custom matrices) and a plain-text circuit format.
//! * [`decompose`] — logarithm branches, the Walsh–Hadamard coefficient
//!   extraction, Pauli-basis decompositions, and structural checks
//!   (commutation, involution, entangling power).
//! * [`energetics`] — field-energy lower bounds per coefficient multiset,
//!   coefficient statistics of a coherent drive, mode synthesis, and branch
//!   optimization.
//! * [`error_model`] — coefficient-noise gate errors: exact spectral error,
//!   closed form, sub-linearity and Loschmidt-echo bounds, and Monte-Carlo
//!   verification of all of them.
//! * [`evolution`] — continuous-time evolution under a coherent drive,
//!   Rényi entanglement entropies, Bloch vectors, and the two-qubit
//!   entangling-vs-local reference run.
//!
//! # Index conventions
//!
//! Qubit 0 is the most significant bit of a computational-basis index, so
//! basis state `|q0 q1 ... q(N-1)⟩` has index `q0·2^(N-1) + ... + q(N-1)`.
//! Kronecker products follow the same order: the first factor acts on the
//! most significant qubit.

pub mod circuit;
pub mod decompose;
pub mod energetics;
pub mod error;
pub mod error_model;
pub mod evolution;
pub mod gates;
pub mod matrix;
pub mod random;
pub mod spectral;
pub mod state;
pub mod tol;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use spectral::SpectralForm;
pub use state::{DensityMatrix, StateVector};

/// Re-exported scalar type used throughout the crate.
pub use num_complex::Complex64;
