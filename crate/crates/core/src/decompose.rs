//! Decomposition of gates into commuting involutory generators.
//!
//! Any `N`-qubit unitary can be written `U = exp(i Σ_s c_s V_s)` where the
//! `V_s` commute pairwise, square to the identity, and are Hermitian. Fixing
//! a logarithm branch (an integer multiple of 2π per eigenphase) pins the
//! coefficients: with eigenphases `φ_j`, the coefficient of `V_s = W Z_s W†`
//! is the Walsh–Hadamard transform `c_s = 2^{-N} Σ_j (−1)^{s·j} φ_j`, where
//! `Z_s` is the diagonal sign pattern `(−1)^{popcount(s & j)}` and `W` the
//! canonical eigenbasis from [`crate::spectral`].
//!
//! A [`CommutingDecomposition`] stores the family in joint-diagonal form —
//! one shared eigenbasis plus a ±1 sign vector per term — so perturbing,
//! reconstructing, and evolving all cost a diagonal operation instead of
//! materializing `2^N` dense operators.

use std::collections::BTreeMap;

use num_complex::Complex64;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::{require_hermitian, ComplexMatrix};
use crate::spectral::{eigh, spectral_decompose_unitary, unitary_from_phases};
use crate::tol;

/// Involution/commutation defects beyond this are treated as structural
/// failures when building joint eigenbases.
const FAMILY_TOL: f64 = 1e-8;

/// A choice of matrix-logarithm branch: integer offsets `k_j`, one per
/// eigenphase, shifting `θ_j` to `θ_j + 2π k_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchSpec {
    offsets: Vec<i64>,
}

impl BranchSpec {
    /// The principal branch: all offsets zero, phases in `(−π, π]`.
    pub fn principal(dim: usize) -> Self {
        Self {
            offsets: vec![0; dim],
        }
    }

    /// A branch with explicit offsets.
    pub fn new(offsets: Vec<i64>) -> Self {
        Self { offsets }
    }

    /// Offset slice, aligned with canonical eigenphase order.
    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    /// Number of offsets (must match the operator dimension at use).
    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    /// True when there are no offsets at all.
    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    /// True when every offset is zero.
    pub fn is_principal(&self) -> bool {
        self.offsets.iter().all(|k| *k == 0)
    }

    /// Applies the branch to a phase vector: `θ_j + 2π k_j`.
    pub fn apply(&self, phases: &[f64]) -> Result<Vec<f64>> {
        if self.offsets.len() != phases.len() {
            return Err(Error::BranchLengthMismatch {
                got: self.offsets.len(),
                expected: phases.len(),
            });
        }
        Ok(phases
            .iter()
            .zip(&self.offsets)
            .map(|(theta, k)| theta + 2.0 * std::f64::consts::PI * (*k as f64))
            .collect())
    }
}

/// In-place unnormalized Walsh–Hadamard transform (self-inverse up to a
/// factor of `len`). Length must be a power of two.
pub(crate) fn wht_inplace(data: &mut [f64]) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        let mut start = 0;
        while start < n {
            for i in start..start + h {
                let a = data[i];
                let b = data[i + h];
                data[i] = a + b;
                data[i + h] = a - b;
            }
            start += 2 * h;
        }
        h *= 2;
    }
}

/// Complex-valued counterpart of [`wht_inplace`], used by the Pauli
/// transform.
fn wht_inplace_complex(data: &mut [Complex64]) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        let mut start = 0;
        while start < n {
            for i in start..start + h {
                let a = data[i];
                let b = data[i + h];
                data[i] = a + b;
                data[i + h] = a - b;
            }
            start += 2 * h;
        }
        h *= 2;
    }
}

/// The matrix logarithm `K = W·diag(θ_j + 2π k_j)·W†` on the given branch;
/// Hermitian, with `exp(iK) = U`.
pub fn log_branch(u: &ComplexMatrix, branch: &BranchSpec) -> Result<ComplexMatrix> {
    let form = spectral_decompose_unitary(u)?;
    let phases = branch.apply(&form.eigenphases)?;
    Ok(hermitian_from_phases(&phases, form.eigenvectors.inner()))
}

/// Assembles the Hermitian matrix `W·diag(φ)·W†`.
fn hermitian_from_phases(phases: &[f64], w: &DMatrix<Complex64>) -> ComplexMatrix {
    let dim = w.nrows();
    let mut scaled = w.clone();
    for (j, phi) in phases.iter().enumerate() {
        for i in 0..dim {
            scaled[(i, j)] *= Complex64::new(*phi, 0.0);
        }
    }
    let k = ComplexMatrix::from_dmatrix(scaled * w.adjoint()).expect("square by construction");
    // Exact Hermiticity is worth one pass: downstream code treats K as
    // Hermitian without re-checking.
    k.hermitian_part()
}

/// One generator of a commuting involutory family.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTerm {
    /// Human-readable name: the `I`/`Z` pattern in the gate eigenbasis for
    /// Walsh–Hadamard terms, a Pauli string for local-sum generators, or
    /// `V{i}` for caller-supplied operators.
    pub label: String,
    /// Coefficient `λ` multiplying this generator.
    pub coefficient: f64,
    /// Diagonal of the generator in the family's common eigenbasis.
    signs: Vec<i8>,
}

impl DecompositionTerm {
    /// The ±1 diagonal of this generator in the common eigenbasis.
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// True when the generator is the identity (all signs +1).
    pub fn is_identity(&self) -> bool {
        self.signs.iter().all(|s| *s == 1)
    }
}

/// A family of commuting involutory generators with coefficients, stored in
/// joint-diagonal form: `U = exp(i Σ_i λ_i V_i)` with
/// `V_i = B·diag(signs_i)·B†` for one shared orthonormal basis `B`.
#[derive(Debug, Clone)]
pub struct CommutingDecomposition {
    basis: ComplexMatrix,
    terms: Vec<DecompositionTerm>,
}

impl CommutingDecomposition {
    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Number of generator terms.
    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Number of qubits, when the dimension is a power of two.
    pub fn n_qubits(&self) -> Result<usize> {
        self.basis.n_qubits()
    }

    /// The shared eigenbasis (columns).
    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// The terms, in canonical order.
    pub fn terms(&self) -> &[DecompositionTerm] {
        &self.terms
    }

    /// The coefficient vector, aligned with [`Self::terms`].
    pub fn coefficients(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.coefficient).collect()
    }

    /// Materializes generator `index` as a dense matrix.
    ///
    /// Each call builds a `dim × dim` matrix; avoid on large registers.
    pub fn operator(&self, index: usize) -> Result<ComplexMatrix> {
        let term = self.terms.get(index).ok_or(Error::BadIndex {
            index,
            n_qubits: self.terms.len(),
        })?;
        let b = self.basis.inner();
        let mut scaled = b.clone();
        for (j, s) in term.signs.iter().enumerate() {
            let factor = Complex64::new(*s as f64, 0.0);
            for i in 0..self.dim() {
                scaled[(i, j)] *= factor;
            }
        }
        let v = ComplexMatrix::from_dmatrix(scaled * b.adjoint()).expect("square");
        Ok(v.hermitian_part())
    }

    /// Materializes every generator. Memory scales as `n_terms · dim²`.
    pub fn operators(&self) -> Result<Vec<ComplexMatrix>> {
        (0..self.terms.len()).map(|i| self.operator(i)).collect()
    }

    /// The Hermitian generator `K = Σ_i λ_i V_i`.
    pub fn generator(&self) -> ComplexMatrix {
        let phases = self.joint_phases_own();
        hermitian_from_phases(&phases, self.basis.inner())
    }

    /// Joint eigenphases `φ_j = Σ_i c_i s_{ij}` for an arbitrary
    /// coefficient vector aligned with the terms.
    pub fn joint_phases(&self, coefficients: &[f64]) -> Result<Vec<f64>> {
        if coefficients.len() != self.terms.len() {
            return Err(Error::DimMismatch {
                left: coefficients.len(),
                right: self.terms.len(),
                context: "coefficient vector vs term count",
            });
        }
        let dim = self.dim();
        let mut phases = vec![0.0f64; dim];
        for (term, c) in self.terms.iter().zip(coefficients) {
            for (j, s) in term.signs.iter().enumerate() {
                phases[j] += c * (*s as f64);
            }
        }
        Ok(phases)
    }

    fn joint_phases_own(&self) -> Vec<f64> {
        self.joint_phases(&self.coefficients())
            .expect("own coefficients always align")
    }

    /// The unitary `exp(i Σ_i c_i V_i)` for an arbitrary coefficient vector.
    pub fn unitary_for_coefficients(&self, coefficients: &[f64]) -> Result<ComplexMatrix> {
        let phases = self.joint_phases(coefficients)?;
        Ok(unitary_from_phases(&phases, self.basis.inner()))
    }

    /// Rebuilds the decomposed unitary `exp(i Σ_i λ_i V_i)`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let phases = self.joint_phases_own();
        unitary_from_phases(&phases, self.basis.inner())
    }

    /// The coefficient multiset, identity term included, dropping
    /// magnitudes at or below `zero_tol`.
    pub fn coefficient_multiset(&self, zero_tol: f64) -> CoefficientMultiset {
        CoefficientMultiset::from_values(
            self.terms.iter().map(|t| t.coefficient),
            zero_tol,
        )
    }

    /// The coefficient multiset with the identity generator excluded.
    ///
    /// The identity's coefficient is a global phase — no field has to work
    /// against an error in it when only the physical gate matters — so some
    /// energy accountings leave it out.
    pub fn coefficient_multiset_excluding_identity(&self, zero_tol: f64) -> CoefficientMultiset {
        CoefficientMultiset::from_values(
            self.terms
                .iter()
                .filter(|t| !t.is_identity())
                .map(|t| t.coefficient),
            zero_tol,
        )
    }
}

/// A multiset of real coefficients, sorted by descending magnitude (ties:
/// positive value first). Zero-filtered at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMultiset {
    values: Vec<f64>,
}

impl CoefficientMultiset {
    /// Filters and sorts raw values.
    pub fn from_values<I: IntoIterator<Item = f64>>(values: I, zero_tol: f64) -> Self {
        let mut values: Vec<f64> = values
            .into_iter()
            .filter(|v| v.abs() > zero_tol)
            .collect();
        values.sort_by(|a, b| {
            b.abs()
                .partial_cmp(&a.abs())
                .expect("coefficients are finite")
                .then(b.partial_cmp(a).expect("coefficients are finite"))
        });
        Self { values }
    }

    /// Signed values, descending magnitude.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Magnitudes, descending.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.abs()).collect()
    }

    /// Number of retained coefficients.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when every coefficient vanished.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `Σ |λ_i|`.
    pub fn sum_abs(&self) -> f64 {
        // fold from +0.0: an empty `Iterator::sum` yields −0.0.
        self.values.iter().fold(0.0, |acc, v| acc + v.abs())
    }

    /// `Σ λ_i²`.
    pub fn sum_sq(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc + v * v)
    }

    /// `max λ_i²`.
    pub fn max_sq(&self) -> f64 {
        self.values.first().map(|v| v * v).unwrap_or(0.0)
    }

    /// `max |λ_i|`.
    pub fn max_abs(&self) -> f64 {
        self.values.first().map(|v| v.abs()).unwrap_or(0.0)
    }
}

/// Decomposes a unitary into commuting involutory generators on the given
/// logarithm branch, via the Walsh–Hadamard transform of its (shifted)
/// eigenphases.
///
/// Requires a power-of-two dimension. The resulting terms are labeled by
/// their `I`/`Z` pattern *in the gate eigenbasis* and ordered canonically
/// (identity pattern first).
pub fn wht_decompose(u: &ComplexMatrix, branch: &BranchSpec) -> Result<CommutingDecomposition> {
    let n_qubits = u.n_qubits()?;
    let form = spectral_decompose_unitary(u)?;
    let phases = branch.apply(&form.eigenphases)?;
    let dim = phases.len();

    let mut coefficients = phases;
    wht_inplace(&mut coefficients);
    let scale = 1.0 / dim as f64;
    for c in &mut coefficients {
        *c *= scale;
    }

    let terms = (0..dim)
        .map(|s| DecompositionTerm {
            label: z_pattern_label(s, n_qubits),
            coefficient: coefficients[s],
            signs: (0..dim)
                .map(|j| if (s & j).count_ones() % 2 == 0 { 1 } else { -1 })
                .collect(),
        })
        .collect();

    Ok(CommutingDecomposition {
        basis: form.eigenvectors,
        terms,
    })
}

/// `I`/`Z` pattern for sign mask `s`: qubit `q` reads bit `n−1−q`.
fn z_pattern_label(s: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| {
            if (s >> (n_qubits - 1 - q)) & 1 == 1 {
                'Z'
            } else {
                'I'
            }
        })
        .collect()
}

/// One term of a Pauli-basis expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    /// Pauli string, qubit 0 leftmost (e.g. `"ZX"` is `Z⊗X`).
    pub label: String,
    /// Real coefficient.
    pub coefficient: f64,
    x_mask: usize,
    z_mask: usize,
}

impl PauliTerm {
    /// Number of non-identity tensor factors.
    pub fn weight(&self) -> usize {
        (self.x_mask | self.z_mask).count_ones() as usize
    }
}

fn pauli_label(x_mask: usize, z_mask: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| {
            let bit = n_qubits - 1 - q;
            match ((x_mask >> bit) & 1, (z_mask >> bit) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            }
        })
        .collect()
}

/// Expands a Hermitian operator in the Pauli-string basis, dropping
/// coefficients with magnitude at or below `zero_tol`.
///
/// Terms come back sorted by (weight, label). The expansion uses the
/// Hermitian convention `P_{x,z} = i^{|x∧z|} X^x Z^z`, under which every
/// string is Hermitian and all coefficients of a Hermitian operator are
/// real.
pub fn pauli_decompose(k: &ComplexMatrix, zero_tol: f64) -> Result<Vec<PauliTerm>> {
    let n_qubits = k.n_qubits()?;
    require_hermitian(k, tol::STRUCTURAL)?;
    let dim = k.dim();
    let scale = 1.0 / dim as f64;

    let mut terms = Vec::new();
    // For fixed x, Tr(P_{x,z} K) over all z is a Walsh–Hadamard transform
    // of the x-shifted diagonal v_c = K[c, c⊕x].
    for x_mask in 0..dim {
        let mut shifted: Vec<Complex64> = (0..dim).map(|c| k.get(c, c ^ x_mask)).collect();
        wht_inplace_complex(&mut shifted);
        for (z_mask, raw) in shifted.iter().enumerate() {
            let phase = match (x_mask & z_mask).count_ones() % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
            let coefficient = (phase * raw * scale).re;
            if coefficient.abs() > zero_tol {
                terms.push(PauliTerm {
                    label: pauli_label(x_mask, z_mask, n_qubits),
                    coefficient,
                    x_mask,
                    z_mask,
                });
            }
        }
    }
    terms.sort_by(|a, b| a.weight().cmp(&b.weight()).then(a.label.cmp(&b.label)));
    Ok(terms)
}

/// Structural report on a candidate generator family.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutationReport {
    /// All pairs commute within tolerance.
    pub commuting: bool,
    /// All operators square to the identity within tolerance.
    pub involutory: bool,
    /// All operators are Hermitian within tolerance.
    pub hermitian: bool,
    /// Largest `‖[V_a, V_b]‖_max` over pairs.
    pub max_commutator: f64,
    /// Largest `‖V² − I‖_max` over operators.
    pub max_involution_defect: f64,
    /// Largest `‖V − V†‖_max` over operators.
    pub max_hermiticity_defect: f64,
}

impl CommutationReport {
    /// True when the family satisfies all three properties.
    pub fn pass(&self) -> bool {
        self.commuting && self.involutory && self.hermitian
    }
}

/// Checks that a set of operators is a commuting involutory (Hermitian)
/// family within `tolerance`.
pub fn check_commuting_involutory(
    operators: &[ComplexMatrix],
    tolerance: f64,
) -> Result<CommutationReport> {
    let first = operators
        .first()
        .ok_or_else(|| Error::InvalidInput("empty operator family".into()))?;
    let dim = first.dim();
    for op in operators {
        if op.dim() != dim {
            return Err(Error::DimMismatch {
                left: op.dim(),
                right: dim,
                context: "operator family dimensions",
            });
        }
    }

    let identity = ComplexMatrix::identity(dim);
    let mut max_commutator = 0.0f64;
    let mut max_involution = 0.0f64;
    let mut max_hermiticity = 0.0f64;

    for (a, op_a) in operators.iter().enumerate() {
        max_hermiticity = max_hermiticity.max(op_a.hermiticity_deviation());
        let square = op_a * op_a;
        max_involution = max_involution.max(square.max_abs_diff(&identity));
        for op_b in operators.iter().skip(a + 1) {
            let ab = op_a * op_b;
            let ba = op_b * op_a;
            max_commutator = max_commutator.max(ab.max_abs_diff(&ba));
        }
    }

    Ok(CommutationReport {
        commuting: max_commutator <= tolerance,
        involutory: max_involution <= tolerance,
        hermitian: max_hermiticity <= tolerance,
        max_commutator,
        max_involution_defect: max_involution,
        max_hermiticity_defect: max_hermiticity,
    })
}

/// Builds a [`CommutingDecomposition`] from explicit operators and
/// coefficients. The family is verified (commuting, involutory, Hermitian
/// within [`FAMILY_TOL`]); terms are labeled `V0`, `V1`, ....
pub fn from_operators(
    operators: &[ComplexMatrix],
    coefficients: &[f64],
) -> Result<CommutingDecomposition> {
    if operators.len() != coefficients.len() {
        return Err(Error::DimMismatch {
            left: operators.len(),
            right: coefficients.len(),
            context: "operators vs coefficients",
        });
    }
    let report = check_commuting_involutory(operators, FAMILY_TOL)?;
    if !report.pass() {
        return Err(Error::NotCommutingInvolutory {
            violation: report
                .max_commutator
                .max(report.max_involution_defect)
                .max(report.max_hermiticity_defect),
        });
    }

    let dim = operators[0].dim();
    let refs: Vec<&ComplexMatrix> = operators.iter().collect();
    let (basis, signs) = joint_eigenbasis(dim, &refs)?;

    let terms = operators
        .iter()
        .enumerate()
        .map(|(i, _)| DecompositionTerm {
            label: format!("V{i}"),
            coefficient: coefficients[i],
            signs: signs[i].clone(),
        })
        .collect();
    let decomposition = CommutingDecomposition { basis, terms };

    // Verify that the joint-diagonal form reproduces each operator; this is
    // the backstop against families that only nearly commute.
    for (i, op) in operators.iter().enumerate() {
        let rebuilt = decomposition.operator(i)?;
        let defect = rebuilt.max_abs_diff(op);
        if defect > FAMILY_TOL {
            return Err(Error::NotCommutingInvolutory { violation: defect });
        }
    }
    Ok(decomposition)
}

/// Builds a [`CommutingDecomposition`] from a Hermitian generator that is a
/// real combination of commuting Pauli strings (e.g. a sum of single-qubit
/// gate logarithms).
///
/// Coefficients with magnitude at or below `zero_tol` are dropped before
/// the family check, so exact zeros in the expansion cannot block an
/// otherwise commuting family.
pub fn from_pauli_generator(k: &ComplexMatrix, zero_tol: f64) -> Result<CommutingDecomposition> {
    k.n_qubits()?;
    let terms = pauli_decompose(k, zero_tol)?;
    if terms.is_empty() {
        return Err(Error::InvalidInput(
            "generator has no Pauli terms above the zero tolerance".into(),
        ));
    }

    // Pauli strings commute iff their symplectic form is even; check all
    // pairs cheaply on the bit masks before any dense work.
    for (a, term_a) in terms.iter().enumerate() {
        for term_b in terms.iter().skip(a + 1) {
            let cross = (term_a.x_mask & term_b.z_mask).count_ones()
                + (term_a.z_mask & term_b.x_mask).count_ones();
            if cross % 2 == 1 {
                // Anticommuting strings have ‖[P,Q]‖_max = 2.
                return Err(Error::NotCommutingInvolutory { violation: 2.0 });
            }
        }
    }

    let dim = k.dim();
    let dense: Vec<ComplexMatrix> = terms
        .iter()
        .map(|t| dense_pauli(t.x_mask, t.z_mask, dim))
        .collect();
    let non_identity: Vec<&ComplexMatrix> = terms
        .iter()
        .zip(&dense)
        .filter(|(t, _)| t.x_mask != 0 || t.z_mask != 0)
        .map(|(_, m)| m)
        .collect();
    let (basis, split_signs) = if non_identity.is_empty() {
        (ComplexMatrix::identity(dim), Vec::new())
    } else {
        joint_eigenbasis(dim, &non_identity)?
    };

    let mut split_signs = split_signs.into_iter();
    let decomposition_terms: Vec<DecompositionTerm> = terms
        .iter()
        .map(|t| {
            let signs = if t.x_mask == 0 && t.z_mask == 0 {
                vec![1i8; dim]
            } else {
                split_signs
                    .next()
                    .expect("one sign vector per non-identity term")
            };
            DecompositionTerm {
                label: t.label.clone(),
                coefficient: t.coefficient,
                signs,
            }
        })
        .collect();

    Ok(CommutingDecomposition {
        basis,
        terms: decomposition_terms,
    })
}

/// Dense matrix of the Hermitian Pauli string `i^{|x∧z|} X^x Z^z`.
fn dense_pauli(x_mask: usize, z_mask: usize, dim: usize) -> ComplexMatrix {
    let phase = match (x_mask & z_mask).count_ones() % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let mut m = ComplexMatrix::zeros(dim);
    for c in 0..dim {
        let sign = if (z_mask & c).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        m.set(c ^ x_mask, c, phase * Complex64::new(sign, 0.0));
    }
    m
}

/// Simultaneously diagonalizes a family of commuting Hermitian involutions:
/// returns a shared orthonormal basis (canonically oriented, see
/// [`crate::spectral`]) and, per operator, the ±1 diagonal in that basis.
fn joint_eigenbasis(
    dim: usize,
    operators: &[&ComplexMatrix],
) -> Result<(ComplexMatrix, Vec<Vec<i8>>)> {
    // Recursive sign-splitting: each operator splits every current block
    // into its +1 and −1 eigenspaces (which are invariant for all later
    // operators because the family commutes).
    struct Block {
        basis: DMatrix<Complex64>,
        signs: Vec<i8>, // one per processed operator
    }
    let mut blocks = vec![Block {
        basis: DMatrix::identity(dim, dim),
        signs: Vec::new(),
    }];

    for op in operators {
        if op.dim() != dim {
            return Err(Error::DimMismatch {
                left: op.dim(),
                right: dim,
                context: "joint eigenbasis operator dimensions",
            });
        }
        let mut next = Vec::with_capacity(blocks.len() * 2);
        for block in &blocks {
            let width = block.basis.ncols();
            let restriction = block.basis.adjoint() * op.inner() * &block.basis;
            let (values, vectors) = eigh(&restriction);
            // Eigenvalues must sit near ±1; split at zero.
            for v in &values {
                if (v.abs() - 1.0).abs() > FAMILY_TOL {
                    return Err(Error::NotCommutingInvolutory {
                        violation: (v.abs() - 1.0).abs(),
                    });
                }
            }
            let n_minus = values.iter().filter(|v| **v < 0.0).count();
            for (range, sign) in [(0..n_minus, -1i8), (n_minus..width, 1i8)] {
                if range.is_empty() {
                    continue;
                }
                let sub = vectors.columns(range.start, range.len()).into_owned();
                let mut signs = block.signs.clone();
                signs.push(sign);
                next.push(Block {
                    basis: &block.basis * sub,
                    signs,
                });
            }
        }
        blocks = next;
    }

    // Canonical orientation within each block, then a global ordering by
    // matched computational-basis index (ties keep block discovery order).
    let mut columns: Vec<(usize, usize, nalgebra::DVector<Complex64>)> = Vec::new();
    for (seq, block) in blocks.iter().enumerate() {
        let (cols, matched) = crate::spectral::canonical_columns(&block.basis)?;
        for (col, m) in cols.into_iter().zip(matched) {
            columns.push((m, seq, col));
        }
    }
    columns.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut basis = DMatrix::zeros(dim, dim);
    let mut column_block = Vec::with_capacity(dim);
    for (j, (_, seq, col)) in columns.iter().enumerate() {
        basis.set_column(j, col);
        column_block.push(*seq);
    }

    let signs_per_op = (0..operators.len())
        .map(|op_index| {
            column_block
                .iter()
                .map(|&seq| blocks[seq].signs[op_index])
                .collect()
        })
        .collect();

    Ok((ComplexMatrix::from_dmatrix(basis)?, signs_per_op))
}

/// Sums single-qubit Hermitian generators into a register-wide Hamiltonian
/// `Σ_j I ⊗ ... ⊗ K_j ⊗ ... ⊗ I`.
///
/// Each entry is `(qubit, K)` with `K` a 2×2 Hermitian matrix; listing a
/// qubit more than once sums the contributions.
pub fn local_sum_hamiltonian(
    n_qubits: usize,
    parts: &[(usize, ComplexMatrix)],
) -> Result<ComplexMatrix> {
    if n_qubits == 0 {
        return Err(Error::InvalidInput("register must have at least one qubit".into()));
    }
    if n_qubits > crate::circuit::MAX_DENSE_QUBITS {
        return Err(Error::TooLarge(format!(
            "dense local-sum Hamiltonian on {n_qubits} qubits"
        )));
    }
    let dim = 1usize << n_qubits;
    let mut total = ComplexMatrix::zeros(dim);
    for (qubit, k) in parts {
        if *qubit >= n_qubits {
            return Err(Error::BadIndex {
                index: *qubit,
                n_qubits,
            });
        }
        if k.dim() != 2 {
            return Err(Error::DimMismatch {
                left: k.dim(),
                right: 2,
                context: "local generator must be single-qubit",
            });
        }
        require_hermitian(k, tol::STRUCTURAL)?;
        let lifted = crate::gates::embed(k, &[*qubit], n_qubits)?;
        total = &total + &lifted;
    }
    Ok(total)
}

/// Entangling-power report for a Hermitian generator.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EntangleabilityReport {
    /// True when some Pauli term couples two or more qubits.
    pub entangling: bool,
    /// Largest Pauli weight among retained terms.
    pub max_weight: usize,
    /// Count of retained terms per weight.
    pub weight_profile: BTreeMap<usize, usize>,
}

/// Determines whether a Hermitian generator can create entanglement: it can
/// iff its Pauli expansion contains a term of weight ≥ 2.
///
/// Requires at least two qubits (entanglement is undefined below that).
pub fn entangleability(k: &ComplexMatrix, zero_tol: f64) -> Result<EntangleabilityReport> {
    let n_qubits = k.n_qubits()?;
    if n_qubits < 2 {
        return Err(Error::TooFewQubits);
    }
    let terms = pauli_decompose(k, zero_tol)?;
    let mut weight_profile = BTreeMap::new();
    let mut max_weight = 0usize;
    for term in &terms {
        let w = term.weight();
        *weight_profile.entry(w).or_insert(0usize) += 1;
        max_weight = max_weight.max(w);
    }
    Ok(EntangleabilityReport {
        entangling: max_weight >= 2,
        max_weight,
        weight_profile,
    })
}

/// Convenience free function mirroring
/// [`CommutingDecomposition::coefficient_multiset`].
pub fn coefficient_multiset(
    decomposition: &CommutingDecomposition,
    zero_tol: f64,
) -> CoefficientMultiset {
    decomposition.coefficient_multiset(zero_tol)
}
