//! Dense square complex matrices and the handful of operations the rest of
//! the crate needs: Kronecker products, adjoints, unitarity checks, operator
//! norms, and a JSON interchange format.
//!
//! [`ComplexMatrix`] wraps a square `nalgebra` matrix of `Complex64`. The
//! wrapper exists to enforce squareness at construction time and to keep the
//! public API independent of the backing library.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// A square matrix of double-precision complex numbers.
///
/// All operators in this crate (gates, generators, density matrices) are
/// square, so squareness is an invariant rather than a runtime property.
/// Dimensions are at least 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<Complex64>,
}

impl ComplexMatrix {
    /// Wraps an `nalgebra` matrix, rejecting non-square or empty input.
    pub fn from_dmatrix(data: DMatrix<Complex64>) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::DimMismatch {
                left: data.nrows(),
                right: data.ncols(),
                context: "matrix must be square",
            });
        }
        if data.nrows() == 0 {
            return Err(Error::InvalidInput("matrix dimension must be at least 1".into()));
        }
        Ok(Self { data })
    }

    /// The zero matrix of dimension `dim`.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            data: DMatrix::zeros(dim, dim),
        }
    }

    /// The identity matrix of dimension `dim`.
    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            data: DMatrix::identity(dim, dim),
        }
    }

    /// Builds a matrix from a row-major nested slice. Rows must all have the
    /// same length as the number of rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidInput("matrix dimension must be at least 1".into()));
        }
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimMismatch {
                    left: row.len(),
                    right: dim,
                    context: "row length must equal matrix dimension",
                });
            }
        }
        Ok(Self {
            data: DMatrix::from_fn(dim, dim, |i, j| rows[i][j]),
        })
    }

    /// Builds a matrix entry by entry from a closure over `(row, col)`.
    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(dim: usize, f: F) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            data: DMatrix::from_fn(dim, dim, f),
        }
    }

    /// Matrix dimension (rows = columns).
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Number of qubits for a `2^N`-dimensional operator.
    ///
    /// Errors with [`Error::NotPowerOfTwo`] when the dimension is not a
    /// power of two.
    pub fn n_qubits(&self) -> Result<usize> {
        let dim = self.dim();
        if !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { dim });
        }
        Ok(dim.trailing_zeros() as usize)
    }

    /// Entry accessor.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row, col)]
    }

    /// Entry mutator.
    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[(row, col)] = value;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
        }
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> Complex64 {
        self.data.diagonal().sum()
    }

    /// Multiplies every entry by a complex scalar.
    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            data: &self.data * factor,
        }
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.data.adjoint();
        Self {
            data: (&self.data + adj) * Complex64::new(0.5, 0.0),
        }
    }

    /// Hermitian matrix `(A − A†)/(2i)`; for unitary `A = e^{iθ}` blocks this
    /// carries `sin θ` where [`hermitian_part`](Self::hermitian_part) carries
    /// `cos θ`.
    pub fn skew_part_hermitian(&self) -> Self {
        let adj = self.data.adjoint();
        Self {
            data: (&self.data - adj) * Complex64::new(0.0, -0.5),
        }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference `‖A − B‖_max`.
    ///
    /// Panics if dimensions differ; use [`Self::dim`] to compare first when
    /// the dimensions are not already known to agree.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff dimension mismatch");
        let mut max = 0.0f64;
        for (a, b) in self.data.iter().zip(other.data.iter()) {
            max = max.max((a - b).norm());
        }
        max
    }

    /// Checks `‖A·A† − I‖_max ≤ tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// The deviation `‖A·A† − I‖_max` itself, for error reporting.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = &self.data * self.data.adjoint();
        let mut max = 0.0f64;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let expected = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                max = max.max((prod[(i, j)] - expected).norm());
            }
        }
        max
    }

    /// Checks `‖A − A†‖_max ≤ tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// The deviation `‖A − A†‖_max` itself.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                max = max.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        max
    }

    /// Applies the matrix to a vector of amplitudes.
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::DimMismatch {
                left: self.dim(),
                right: v.len(),
                context: "matrix-vector product",
            });
        }
        let dim = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for j in 0..dim {
            let vj = v[j];
            if vj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..dim {
                out[i] += self.data[(i, j)] * vj;
            }
        }
        Ok(out)
    }

    /// Read-only view of the backing `nalgebra` matrix.
    pub(crate) fn inner(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    /// Serializes to the interchange format: a JSON array of rows, each
    /// entry a two-element `[re, im]` array.
    pub fn to_json_value(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.dim())
            .map(|i| {
                let row: Vec<serde_json::Value> = (0..self.dim())
                    .map(|j| {
                        let z = self.data[(i, j)];
                        serde_json::json!([z.re, z.im])
                    })
                    .collect();
                serde_json::Value::Array(row)
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    /// Parses the interchange format produced by [`Self::to_json_value`].
    ///
    /// Validates squareness and that the dimension is a power of two (the
    /// format is used for qubit operators only).
    pub fn from_json_value(value: &serde_json::Value) -> Result<Self> {
        let rows = value
            .as_array()
            .ok_or_else(|| Error::InvalidInput("matrix JSON must be an array of rows".into()))?;
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidInput("matrix JSON must have at least one row".into()));
        }
        let mut data = DMatrix::zeros(dim, dim);
        for (i, row_value) in rows.iter().enumerate() {
            let row = row_value
                .as_array()
                .ok_or_else(|| Error::InvalidInput(format!("matrix row {i} is not an array")))?;
            if row.len() != dim {
                return Err(Error::DimMismatch {
                    left: row.len(),
                    right: dim,
                    context: "matrix JSON row length",
                });
            }
            for (j, entry) in row.iter().enumerate() {
                let pair = entry.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                    Error::InvalidInput(format!("matrix entry ({i},{j}) is not a [re, im] pair"))
                })?;
                let re = pair[0].as_f64().ok_or_else(|| {
                    Error::InvalidInput(format!("matrix entry ({i},{j}) has a non-numeric real part"))
                })?;
                let im = pair[1].as_f64().ok_or_else(|| {
                    Error::InvalidInput(format!("matrix entry ({i},{j}) has a non-numeric imaginary part"))
                })?;
                data[(i, j)] = Complex64::new(re, im);
            }
        }
        let matrix = Self::from_dmatrix(data)?;
        matrix.n_qubits()?;
        Ok(matrix)
    }
}

impl std::ops::Add<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data + &rhs.data,
        }
    }
}

impl std::ops::Sub<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data - &rhs.data,
        }
    }
}

impl std::ops::Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data * &rhs.data,
        }
    }
}

/// Kronecker product; the first factor acts on the more significant qubits,
/// matching the crate-wide index convention.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix {
        data: a.inner().kronecker(b.inner()),
    }
}

/// Kronecker product of a sequence of factors, left to right.
pub fn kron_all(factors: &[&ComplexMatrix]) -> Result<ComplexMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidInput("kron_all requires at least one factor".into()))?;
    let mut acc = (*first).clone();
    for f in rest {
        acc = kron(&acc, f);
    }
    Ok(acc)
}

/// Spectral operator norm (largest singular value), computed as the square
/// root of the top eigenvalue of the Hermitian matrix `A†A`.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    let gram = a.inner().adjoint() * a.inner();
    let eigs = gram.symmetric_eigenvalues();
    let top = eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    top.max(0.0).sqrt()
}

/// Validates a matrix as unitary, returning a descriptive error on failure.
pub fn require_unitary(a: &ComplexMatrix, tol: f64) -> Result<()> {
    let deviation = a.unitarity_deviation();
    if deviation > tol {
        return Err(Error::NotUnitary { deviation, tol });
    }
    Ok(())
}

/// Validates a matrix as Hermitian, returning a descriptive error on failure.
pub fn require_hermitian(a: &ComplexMatrix, tol: f64) -> Result<()> {
    let deviation = a.hermiticity_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }
    Ok(())
}

/// Validates that two matrices share a dimension.
pub fn require_same_dim(a: &ComplexMatrix, b: &ComplexMatrix, context: &'static str) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
            context,
        });
    }
    Ok(())
}

/// Default structural unitarity check used across the crate.
pub fn require_unitary_default(a: &ComplexMatrix) -> Result<()> {
    require_unitary(a, tol::STRUCTURAL)
}
