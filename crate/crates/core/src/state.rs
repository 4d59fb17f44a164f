//! Pure states, density matrices, and partial traces.
//!
//! States follow the crate-wide index convention: qubit 0 is the most
//! significant bit of a computational-basis index.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// A pure state on `N` qubits, stored as `2^N` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes. The length must be a power of
    /// two; the amplitudes are taken as given (no normalization).
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() || !amplitudes.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo {
                dim: amplitudes.len(),
            });
        }
        Ok(Self { amplitudes })
    }

    /// The computational basis state `|index⟩` on `n_qubits` qubits.
    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize
            .checked_shl(n_qubits as u32)
            .ok_or_else(|| Error::TooLarge(format!("{n_qubits} qubits")))?;
        if index >= dim {
            return Err(Error::BadIndex {
                index,
                n_qubits,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Number of qubits.
    pub fn n_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    /// Amplitude slice in computational-basis order.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Returns the state scaled to unit norm.
    ///
    /// Errors when the norm is numerically zero.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm < 1e-300 {
            return Err(Error::InvalidInput("cannot normalize the zero vector".into()));
        }
        let inv = Complex64::new(1.0 / norm, 0.0);
        Ok(Self {
            amplitudes: self.amplitudes.iter().map(|a| a * inv).collect(),
        })
    }

    /// Inner product `⟨self|other⟩` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                left: self.dim(),
                right: other.dim(),
                context: "inner product",
            });
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (a, b) in self.amplitudes.iter().zip(&other.amplitudes) {
            sum += a.conj() * b;
        }
        Ok(sum)
    }

    /// Applies an operator: `U|ψ⟩`.
    pub fn apply(&self, operator: &ComplexMatrix) -> Result<Self> {
        let amplitudes = operator.mul_vec(&self.amplitudes)?;
        Ok(Self { amplitudes })
    }

    /// The pure-state density matrix `|ψ⟩⟨ψ|`.
    pub fn to_density(&self) -> DensityMatrix {
        let dim = self.dim();
        let mat = ComplexMatrix::from_fn(dim, |i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        });
        DensityMatrix { mat }
    }
}

/// A density operator: Hermitian, unit-trace, positive semidefinite.
///
/// Construction through [`StateVector::to_density`] or
/// [`DensityMatrix::from_matrix`] (which validates Hermiticity and trace;
/// positivity is checked where it matters, in the entropy routines).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix as a density operator, validating Hermiticity and
    /// unit trace against `tol`.
    pub fn from_matrix(mat: ComplexMatrix, tol: f64) -> Result<Self> {
        if !mat.is_hermitian(tol) {
            return Err(Error::NotDensityOperator(format!(
                "Hermiticity deviation {:.3e} exceeds {tol:.3e}",
                mat.hermiticity_deviation()
            )));
        }
        let trace = mat.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > tol.max(1e-8) {
            return Err(Error::NotDensityOperator(format!(
                "trace {trace} is not 1"
            )));
        }
        mat.n_qubits()?;
        Ok(Self { mat })
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Number of qubits.
    pub fn n_qubits(&self) -> usize {
        self.mat.dim().trailing_zeros() as usize
    }

    /// The backing matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Purity `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        let sq = &self.mat * &self.mat;
        sq.trace().re
    }
}

/// Traces out every qubit not listed in `keep`.
///
/// `keep` is interpreted as a set: indices must be distinct and in range,
/// and the kept qubits appear in the output in ascending order of their
/// original index (so `keep = [2, 0]` and `keep = [0, 2]` agree).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    if keep.is_empty() {
        return Err(Error::InvalidInput(
            "partial trace must keep at least one qubit".into(),
        ));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    for pair in keep_sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::BadIndex {
                index: pair[0],
                n_qubits: n,
            });
        }
    }
    if let Some(&max) = keep_sorted.last() {
        if max >= n {
            return Err(Error::BadIndex {
                index: max,
                n_qubits: n,
            });
        }
    }

    let traced: Vec<usize> = (0..n).filter(|q| !keep_sorted.contains(q)).collect();
    let out_qubits = keep_sorted.len();
    let out_dim = 1usize << out_qubits;
    let trace_dim = 1usize << traced.len();

    // Scatter the bits of a small index into the full index at the given
    // qubit positions (qubit q occupies bit n−1−q).
    let scatter = |value: usize, qubits: &[usize]| -> usize {
        let mut full = 0usize;
        for (t, &q) in qubits.iter().enumerate() {
            let bit = (value >> (qubits.len() - 1 - t)) & 1;
            full |= bit << (n - 1 - q);
        }
        full
    };

    let mut out = ComplexMatrix::zeros(out_dim);
    for a in 0..out_dim {
        for b in 0..out_dim {
            let row_base = scatter(a, &keep_sorted);
            let col_base = scatter(b, &keep_sorted);
            let mut sum = Complex64::new(0.0, 0.0);
            for t in 0..trace_dim {
                let common = scatter(t, &traced);
                sum += rho.mat.get(row_base | common, col_base | common);
            }
            out.set(a, b, sum);
        }
    }
    Ok(DensityMatrix { mat: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_states_and_inner_products() {
        let zero = StateVector::basis_state(2, 0).unwrap();
        let three = StateVector::basis_state(2, 3).unwrap();
        assert_eq!(zero.dim(), 4);
        assert_eq!(zero.n_qubits(), 2);
        assert_eq!(zero.inner(&three).unwrap(), c(0.0, 0.0));
        assert_eq!(zero.inner(&zero).unwrap(), c(1.0, 0.0));
        assert!(StateVector::basis_state(2, 4).is_err());
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let s = 1.0 / 2.0f64.sqrt();
        let bell = StateVector::from_amplitudes(vec![
            c(s, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(s, 0.0),
        ])
        .unwrap();
        let rho = bell.to_density();
        for keep in [[0usize], [1usize]] {
            let reduced = partial_trace(&rho, &keep).unwrap();
            assert_eq!(reduced.dim(), 2);
            assert!((reduced.matrix().get(0, 0) - c(0.5, 0.0)).norm() < 1e-15);
            assert!((reduced.matrix().get(1, 1) - c(0.5, 0.0)).norm() < 1e-15);
            assert!(reduced.matrix().get(0, 1).norm() < 1e-15);
        }
    }

    #[test]
    fn partial_trace_of_product_state_is_pure_marginal() {
        // |ψ⟩ = |1⟩ ⊗ (|0⟩+i|1⟩)/√2 on two qubits.
        let s = 1.0 / 2.0f64.sqrt();
        let psi = StateVector::from_amplitudes(vec![
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(s, 0.0),
            c(0.0, s),
        ])
        .unwrap();
        let rho = psi.to_density();
        let q0 = partial_trace(&rho, &[0]).unwrap();
        assert!((q0.matrix().get(1, 1) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((q0.purity() - 1.0).abs() < 1e-12);

        let q1 = partial_trace(&rho, &[1]).unwrap();
        assert!((q1.matrix().get(0, 1) - c(0.0, -0.5)).norm() < 1e-15);
        assert!((q1.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_keep_order_is_canonical_and_input_is_validated() {
        let psi = StateVector::basis_state(3, 5).unwrap(); // |101⟩
        let rho = psi.to_density();
        let a = partial_trace(&rho, &[0, 2]).unwrap();
        let b = partial_trace(&rho, &[2, 0]).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) == 0.0);
        // |101⟩ keeping qubits {0, 2} leaves |11⟩ = index 3.
        assert!((a.matrix().get(3, 3) - c(1.0, 0.0)).norm() < 1e-15);

        assert!(partial_trace(&rho, &[]).is_err());
        assert!(partial_trace(&rho, &[3]).is_err());
        assert!(partial_trace(&rho, &[1, 1]).is_err());
    }

    #[test]
    fn density_matrix_validation_rejects_junk() {
        let not_herm = ComplexMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.3, 0.0)],
            vec![c(0.0, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        assert!(DensityMatrix::from_matrix(not_herm, 1e-10).is_err());

        let bad_trace = ComplexMatrix::identity(2);
        assert!(DensityMatrix::from_matrix(bad_trace, 1e-10).is_err());
    }
}
