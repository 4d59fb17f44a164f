//! Imperfect gates: operator-norm error, the involutory closed form,
//! sub-linearity, Loschmidt lower bounds, and a Monte Carlo harness.
//!
//! An imperfectly realized gate is `U' = exp(i Σ (λ_i + ε_i) V_i)`. Because
//! the terms commute and square to the identity, `U'U†` is diagonal in the
//! joint eigenbasis with phases `φ_j = Σ_i ε_i s_ij` (s_ij = ±1 the sign of
//! term i in joint eigenspace j), giving the exact closed form
//!
//! ```text
//! ε = ‖I − U'U†‖_∞ = max_j 2 |sin(φ_j / 2)|
//! ```
//!
//! Since `2|sin(x/2)| ≤ |x|` and `|φ_j| ≤ Σ_i |ε_i|`, the gate error is
//! sub-linear in the per-term errors with no leading-order caveat. The
//! Loschmidt echo `L = |⟨ψ|U'U†|ψ⟩|²` of any state lower-bounds it through
//! the chain `ε ≥ |1 − ⟨ψ|U'U†|ψ⟩| ≥ |1 − √L|`.

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::decompose::CommutingDecomposition;
use crate::energetics::{CouplingScenario, FieldConfig};
use crate::error::{Error, Result};
use crate::matrix::{operator_norm, require_same_dim, ComplexMatrix};
use crate::random::{haar_state, stream_rng};
use crate::state::StateVector;

/// Slack applied when counting inequality violations, absorbing the
/// ~1e−14 noise floor of the dense operator-norm evaluation.
pub const CHECK_SLACK: f64 = 1e-12;

/// Number of Haar probe states used for the Loschmidt checks inside
/// [`mc_verify`] (drawn from RNG stream 0 of the run's seed).
pub const MC_PROBE_STATES: usize = 100;

/// Where a perturbation vector came from.
#[derive(Debug, Clone, PartialEq)]
pub enum PerturbationSource {
    /// Hand-specified offsets.
    Manual,
    /// Drawn as Gaussian field fluctuations.
    GaussianField { seed: u64, variances: Vec<f64> },
}

/// A per-term coefficient perturbation `ε_i`, one entry per decomposition
/// term.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSample {
    pub eps_vec: Vec<f64>,
    pub source: PerturbationSource,
}

impl PerturbationSample {
    /// A manually specified perturbation.
    pub fn manual(eps_vec: Vec<f64>) -> Self {
        Self {
            eps_vec,
            source: PerturbationSource::Manual,
        }
    }
}

/// Builds the imperfect gate `exp(i Σ (λ_i + ε_i) V_i)`.
pub fn perturbed_gate(
    d: &CommutingDecomposition,
    sample: &PerturbationSample,
) -> Result<ComplexMatrix> {
    if sample.eps_vec.len() != d.n_terms() {
        return Err(Error::DimMismatch {
            left: sample.eps_vec.len(),
            right: d.n_terms(),
            context: "perturbation entries vs decomposition terms",
        });
    }
    let coefficients: Vec<f64> = d
        .coefficients()
        .iter()
        .zip(&sample.eps_vec)
        .map(|(lambda, eps)| lambda + eps)
        .collect();
    d.unitary_for_coefficients(&coefficients)
}

/// The gate error `ε = ‖I − U'U†‖_∞` (spectral norm).
///
/// Both inputs are assumed unitary; only the dimensions are checked.
pub fn gate_error(u: &ComplexMatrix, u_prime: &ComplexMatrix) -> Result<f64> {
    require_same_dim(u, u_prime, "gate_error operands")?;
    let product = u_prime * &u.adjoint();
    let difference = &ComplexMatrix::identity(u.dim()) - &product;
    Ok(operator_norm(&difference))
}

/// The exact closed form of the gate error for commuting involutory terms:
/// `max_j 2 |sin(φ_j / 2)|` with `φ_j = Σ_i ε_i s_ij`.
///
/// The commuting-involutory precondition is guaranteed by construction
/// here: a [`CommutingDecomposition`] stores its terms as ±1 sign patterns
/// over one shared eigenbasis, a representation that cannot express
/// non-commuting or non-involutory operators.
pub fn gate_error_closed_form(eps: &[f64], d: &CommutingDecomposition) -> Result<f64> {
    let phases = d.joint_phases(eps)?;
    Ok(phases
        .iter()
        .map(|phi| 2.0 * (0.5 * phi).sin().abs())
        .fold(0.0f64, f64::max))
}

/// Result of one sub-linearity check `ε ≤ Σ_i |ε_i|`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SublinearityCheck {
    /// The realized gate error (operator norm).
    pub lhs: f64,
    /// The error budget `Σ_i |ε_i|`.
    pub rhs: f64,
    /// Whether `lhs ≤ rhs + 1e−12`.
    pub holds: bool,
}

/// Checks the sub-linearity bound for one perturbation vector by building
/// the perturbed gate and evaluating the operator norm directly.
pub fn sublinearity_check(eps: &[f64], d: &CommutingDecomposition) -> Result<SublinearityCheck> {
    let sample = PerturbationSample::manual(eps.to_vec());
    let u = d.reconstruct();
    let u_prime = perturbed_gate(d, &sample)?;
    let lhs = gate_error(&u, &u_prime)?;
    let rhs: f64 = eps.iter().map(|e| e.abs()).sum();
    Ok(SublinearityCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + CHECK_SLACK,
    })
}

/// The Loschmidt echo `L = |⟨ψ|U'U†|ψ⟩|²` — the survival probability of
/// `ψ` under forward ideal and backward imperfect evolution. Lies in
/// `[0, 1]` up to floating-point noise.
pub fn loschmidt_echo(
    u: &ComplexMatrix,
    u_prime: &ComplexMatrix,
    psi: &StateVector,
) -> Result<f64> {
    Ok(loschmidt_overlap(u, u_prime, psi)?.norm_sqr())
}

/// The complex overlap `⟨ψ|U'U†|ψ⟩`.
fn loschmidt_overlap(
    u: &ComplexMatrix,
    u_prime: &ComplexMatrix,
    psi: &StateVector,
) -> Result<Complex64> {
    require_same_dim(u, u_prime, "loschmidt operands")?;
    if psi.dim() != u.dim() {
        return Err(Error::DimMismatch {
            left: psi.dim(),
            right: u.dim(),
            context: "state vs gate dimension",
        });
    }
    // U'U†ψ, then ⟨ψ|·⟩.
    let back = u.adjoint().mul_vec(psi.amplitudes())?;
    let forward = u_prime.mul_vec(&back)?;
    Ok(psi
        .amplitudes()
        .iter()
        .zip(&forward)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Aggregate error-verification report.
///
/// `closed_form` and `sublinear_bound` are present only when the producing
/// check had a perturbation vector in hand; [`loschmidt_bound_check`]
/// leaves them `None`.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorReport {
    /// Operator-norm gate error.
    pub epsilon: f64,
    /// The involutory closed form, when available.
    pub closed_form: Option<f64>,
    /// The budget `Σ_i |ε_i|`, when available.
    pub sublinear_bound: Option<f64>,
    /// Loschmidt echo per sampled state.
    pub loschmidt_values: Vec<f64>,
    /// Number of inequality violations beyond the 1e−12 slack.
    pub violations: usize,
}

/// Verifies the Loschmidt chain `ε ≥ |1 − ⟨ψ|U'U†|ψ⟩| ≥ |1 − √L|` for
/// every supplied state, counting violations beyond the 1e−12 slack.
pub fn loschmidt_bound_check(
    u: &ComplexMatrix,
    u_prime: &ComplexMatrix,
    states: &[StateVector],
) -> Result<ErrorReport> {
    let epsilon = gate_error(u, u_prime)?;
    let mut loschmidt_values = Vec::with_capacity(states.len());
    let mut violations = 0usize;
    for psi in states {
        let overlap = loschmidt_overlap(u, u_prime, psi)?;
        let echo = overlap.norm_sqr();
        let overlap_distance = (Complex64::new(1.0, 0.0) - overlap).norm();
        let echo_distance = (1.0 - echo.sqrt()).abs();
        if epsilon + CHECK_SLACK < overlap_distance || overlap_distance + CHECK_SLACK < echo_distance
        {
            violations += 1;
        }
        loschmidt_values.push(echo);
    }
    Ok(ErrorReport {
        epsilon,
        closed_form: None,
        sublinear_bound: None,
        loschmidt_values,
        violations,
    })
}

/// Monte Carlo verification report; the statistical aggregate of
/// [`mc_verify`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    /// Gate label, filled in by callers that know one.
    pub gate: Option<String>,
    pub n_terms: usize,
    pub n_samples: usize,
    pub seed: u64,
    /// Scenario name: "independent" or "shared".
    pub scenario: String,
    /// Predicted per-term fluctuation std `√(Σ_k g_k² |I_k|²)`.
    pub predicted_lambda_std: f64,
    /// Empirical std (n−1 normalization) of all drawn ε_i.
    pub lambda_error_std: f64,
    /// Mean operator-norm gate error over samples.
    pub mean_error: f64,
    /// Sample std (n−1) of the gate error over samples.
    pub std_error: f64,
    /// Largest observed gate error.
    pub max_error: f64,
    /// Largest |closed form − operator norm| over samples.
    pub closed_form_max_dev: f64,
    pub n_probe_states: usize,
    pub sublinear_violations: usize,
    pub loschmidt_violations: usize,
}

/// Compensated (Kahan) accumulator.
#[derive(Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

/// Mean and sample std (n−1) with compensated summation.
fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mut total = Kahan::default();
    for v in values {
        total.add(*v);
    }
    let mean = total.value() / values.len() as f64;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let mut squares = Kahan::default();
    for v in values {
        let d = v - mean;
        squares.add(d * d);
    }
    (mean, (squares.value() / (values.len() - 1) as f64).sqrt())
}

/// Monte Carlo verification of the error bounds under Gaussian field
/// fluctuations.
///
/// Per sample, coefficient errors are drawn with the field-fluctuation
/// variance `Σ_k g_k² |I(ω_k, τ)|²`: independently per term in the
/// `Independent` scenario, or as one draw per mode shared identically by
/// all terms in the `Shared` scenario. Each sample is checked for
/// sub-linearity, closed-form agreement, and the Loschmidt chain over
/// [`MC_PROBE_STATES`] Haar states.
///
/// Reproducibility: probe states come from RNG stream 0 of `seed`; sample
/// `m` draws from stream `m + 1` (term order, or mode order when shared),
/// so results are bit-identical for a given `(seed, n_samples)` and
/// independent of any future parallel scheduling of samples.
pub fn mc_verify(
    d: &CommutingDecomposition,
    field: &FieldConfig,
    n_samples: usize,
    seed: u64,
) -> Result<McReport> {
    if n_samples == 0 {
        return Err(Error::InvalidInput("n_samples must be at least 1".into()));
    }
    field.validate()?;
    let n_terms = d.n_terms();
    if n_terms == 0 {
        return Err(Error::InvalidInput(
            "decomposition has no terms to perturb".into(),
        ));
    }
    let dim = d.dim();
    let couplings = field.couplings();
    let variance = crate::energetics::lambda_variance(field, &couplings)?;
    let sigma = variance.sqrt();
    // Per-mode fluctuation stds for the shared scenario.
    let mode_sigmas: Vec<f64> = field
        .modes
        .iter()
        .map(|m| m.g * crate::energetics::drive_integral(m.omega, field.tau).norm())
        .collect();

    let u = d.reconstruct();
    let probes: Vec<Vec<Complex64>> = {
        let mut rng = stream_rng(seed, 0);
        let mut drawn = Vec::with_capacity(MC_PROBE_STATES);
        for _ in 0..MC_PROBE_STATES {
            drawn.push(haar_state(dim, &mut rng)?.amplitudes().to_vec());
        }
        drawn
    };
    // |⟨j|B†ψ⟩|² per probe state: the weights of the diagonal overlap
    // ⟨ψ|U'U†|ψ⟩ = Σ_j e^{iφ_j} w_j.
    let b_adjoint = d.basis().adjoint();
    let mut probe_weights: Vec<Vec<f64>> = Vec::with_capacity(probes.len());
    for amps in &probes {
        let rotated = b_adjoint.mul_vec(amps)?;
        probe_weights.push(rotated.iter().map(|c| c.norm_sqr()).collect());
    }

    let mut errors = Vec::with_capacity(n_samples);
    let mut draws: Vec<f64> = Vec::with_capacity(n_samples * n_terms);
    let mut closed_form_max_dev = 0.0f64;
    let mut sublinear_violations = 0usize;
    let mut loschmidt_violations = 0usize;

    let mut eps = vec![0.0f64; n_terms];
    for m in 0..n_samples {
        let mut rng = stream_rng(seed, m as u64 + 1);
        match field.scenario {
            CouplingScenario::Independent => {
                for e in eps.iter_mut() {
                    let xi: f64 = StandardNormal.sample(&mut rng);
                    *e = sigma * xi;
                }
            }
            CouplingScenario::Shared => {
                let mut shared = 0.0f64;
                for s in &mode_sigmas {
                    let xi: f64 = StandardNormal.sample(&mut rng);
                    shared += s * xi;
                }
                eps.fill(shared);
            }
        }
        draws.extend_from_slice(&eps);

        let sample = PerturbationSample::manual(eps.clone());
        let u_prime = perturbed_gate(d, &sample)?;
        let error = gate_error(&u, &u_prime)?;
        errors.push(error);

        let closed = gate_error_closed_form(&eps, d)?;
        closed_form_max_dev = closed_form_max_dev.max((closed - error).abs());

        let budget: f64 = eps.iter().map(|e| e.abs()).sum();
        if error > budget + CHECK_SLACK {
            sublinear_violations += 1;
        }

        let phases = d.joint_phases(&eps)?;
        let eigenvalues: Vec<Complex64> = phases
            .iter()
            .map(|phi| Complex64::from_polar(1.0, *phi))
            .collect();
        for weights in &probe_weights {
            let overlap: Complex64 = eigenvalues
                .iter()
                .zip(weights)
                .map(|(z, w)| z * *w)
                .sum();
            let overlap_distance = (Complex64::new(1.0, 0.0) - overlap).norm();
            let echo_distance = (1.0 - overlap.norm()).abs();
            if error + CHECK_SLACK < overlap_distance
                || overlap_distance + CHECK_SLACK < echo_distance
            {
                loschmidt_violations += 1;
            }
        }
    }

    let (mean_error, std_error) = mean_std(&errors);
    let (_, lambda_error_std) = mean_std(&draws);
    let max_error = errors.iter().copied().fold(0.0f64, f64::max);

    Ok(McReport {
        gate: None,
        n_terms,
        n_samples,
        seed,
        scenario: field.scenario.name().to_string(),
        predicted_lambda_std: sigma,
        lambda_error_std,
        mean_error,
        std_error,
        max_error,
        closed_form_max_dev,
        n_probe_states: MC_PROBE_STATES,
        sublinear_violations,
        loschmidt_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::wht_decompose;
    use crate::decompose::BranchSpec;
    use crate::energetics::FieldMode;
    use crate::gates::{standard_gate, GateKind, GateSpec};
    use crate::random::{haar_state, stream_rng};
    use std::f64::consts::PI;

    fn gate(kind: GateKind, qubits: Vec<usize>) -> ComplexMatrix {
        standard_gate(&GateSpec::simple(kind, qubits)).unwrap()
    }

    fn decomposition_of(u: &ComplexMatrix) -> CommutingDecomposition {
        wht_decompose(u, &BranchSpec::principal(u.dim())).unwrap()
    }

    fn field(omega: f64, tau: f64, scenario: CouplingScenario) -> FieldConfig {
        FieldConfig {
            modes: vec![FieldMode {
                omega,
                alpha: Complex64::new(0.0, 0.0),
                g: 1.0,
            }],
            tau,
            hbar: 1.0,
            scenario,
        }
    }

    #[test]
    fn zero_perturbation_reproduces_the_gate() {
        for u in [gate(GateKind::X, vec![0]), gate(GateKind::Cx, vec![0, 1])] {
            let d = decomposition_of(&u);
            let sample = PerturbationSample::manual(vec![0.0; d.n_terms()]);
            let u_prime = perturbed_gate(&d, &sample).unwrap();
            assert!(u.max_abs_diff(&u_prime) < 1e-10);
        }
    }

    #[test]
    fn perturbing_only_the_x_term_matches_the_direct_exponential() {
        // X = exp(i[(π/2)I + (−π/2)X]); adding ε to the X term gives
        // e^{iπ/2} (cos(−π/2+ε) I + i sin(−π/2+ε) X) because X² = I.
        let u = gate(GateKind::X, vec![0]);
        let d = decomposition_of(&u);
        assert_eq!(d.n_terms(), 2);
        let eps = 0.17;
        let sample = PerturbationSample::manual(vec![0.0, eps]);
        let u_prime = perturbed_gate(&d, &sample).unwrap();

        let angle = -PI / 2.0 + eps;
        let phase = Complex64::from_polar(1.0, PI / 2.0);
        let mut direct = ComplexMatrix::zeros(2);
        let x = gate(GateKind::X, vec![0]);
        for r in 0..2 {
            for c in 0..2 {
                let identity_part = if r == c {
                    Complex64::new(angle.cos(), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                let x_part = Complex64::new(0.0, angle.sin()) * x.get(r, c);
                direct.set(r, c, phase * (identity_part + x_part));
            }
        }
        assert!(u_prime.max_abs_diff(&direct) < 1e-12);
    }

    #[test]
    fn cx_perturbed_on_every_term_is_unitary_with_positive_error() {
        let u = gate(GateKind::Cx, vec![0, 1]);
        let d = decomposition_of(&u);
        let sample = PerturbationSample::manual(vec![0.01; d.n_terms()]);
        let u_prime = perturbed_gate(&d, &sample).unwrap();
        assert!(u_prime.unitarity_deviation() < 1e-10);
        assert!(gate_error(&u, &u_prime).unwrap() > 0.0);
    }

    #[test]
    fn gate_error_reference_values() {
        let x = gate(GateKind::X, vec![0]);
        assert!(gate_error(&x, &x).unwrap() < 1e-14);

        let id = ComplexMatrix::identity(2);
        let mut phased = id.clone();
        let z = Complex64::from_polar(1.0, 0.1);
        phased.set(0, 0, z);
        phased.set(1, 1, z);
        let expected = 2.0 * (0.05f64).sin();
        assert!((gate_error(&id, &phased).unwrap() - expected).abs() < 1e-12);

        assert!((gate_error(&id, &x).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_reference_values() {
        // Single effective term: perturb only the traceless part of X.
        let x = gate(GateKind::X, vec![0]);
        let d = decomposition_of(&x);
        let closed = gate_error_closed_form(&[0.0, 0.1], &d).unwrap();
        assert!((closed - 2.0 * (0.05f64).sin()).abs() < 1e-14);
        assert_eq!(gate_error_closed_form(&[0.0, 0.0], &d).unwrap(), 0.0);

        // Two commuting terms with aligned signs in some joint eigenspace:
        // value is exactly 2|sin(0.1)| ≤ 0.2.
        let z0 = gate(GateKind::Z, vec![0]);
        let z1 = gate(GateKind::Z, vec![1]);
        let zi = crate::matrix::kron(&z0, &ComplexMatrix::identity(2));
        let iz = crate::matrix::kron(&ComplexMatrix::identity(2), &z1);
        let d2 = crate::decompose::from_operators(&[zi, iz], &[0.3, 0.4]).unwrap();
        let closed2 = gate_error_closed_form(&[0.1, 0.1], &d2).unwrap();
        assert!((closed2 - 2.0 * (0.1f64).sin()).abs() < 1e-14);
        assert!(closed2 <= 0.2);
    }

    #[test]
    fn closed_form_agrees_with_the_operator_norm_oracle() {
        let u = gate(GateKind::Cx, vec![0, 1]);
        let d = decomposition_of(&u);
        let ideal = d.reconstruct();
        let mut rng = stream_rng(99, 0);
        for _ in 0..50 {
            let eps: Vec<f64> = (0..d.n_terms())
                .map(|_| rand::Rng::gen_range(&mut rng, -0.3..0.3))
                .collect();
            let sample = PerturbationSample::manual(eps.clone());
            let u_prime = perturbed_gate(&d, &sample).unwrap();
            let direct = gate_error(&ideal, &u_prime).unwrap();
            let closed = gate_error_closed_form(&eps, &d).unwrap();
            assert!(
                (direct - closed).abs() < 1e-10,
                "direct {direct} vs closed {closed}"
            );
        }
    }

    #[test]
    fn sublinearity_reference_cases() {
        let x = gate(GateKind::X, vec![0]);
        let d = decomposition_of(&x);
        let check = sublinearity_check(&[0.0, 0.1], &d).unwrap();
        assert!((check.lhs - 2.0 * (0.05f64).sin()).abs() < 1e-10);
        assert!((check.rhs - 0.1).abs() < 1e-15);
        assert!(check.holds);

        let zero = sublinearity_check(&[0.0, 0.0], &d).unwrap();
        assert!(zero.lhs < 1e-12 && zero.rhs == 0.0 && zero.holds);

        let cx = gate(GateKind::Cx, vec![0, 1]);
        let dcx = decomposition_of(&cx);
        let check4 = sublinearity_check(&[0.05; 4], &dcx).unwrap();
        assert!(check4.holds);
        assert!(check4.lhs <= 0.2 + 1e-12);
    }

    #[test]
    fn loschmidt_echo_reference_values() {
        let id = ComplexMatrix::identity(2);
        let x = gate(GateKind::X, vec![0]);
        let zero = StateVector::basis_state(1, 0).unwrap();
        let plus = StateVector::from_amplitudes(vec![
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();

        assert!((loschmidt_echo(&x, &x, &zero).unwrap() - 1.0).abs() < 1e-14);
        assert!(loschmidt_echo(&id, &x, &zero).unwrap() < 1e-14);
        assert!((loschmidt_echo(&id, &x, &plus).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn loschmidt_chain_is_tight_on_an_eigenstate() {
        // Perturb only the traceless term of X by ε; |+⟩ is an eigenvector
        // of that term, so |1 − ⟨ψ|U'U†|ψ⟩| = |1 − e^{iε}| = the gate error.
        let x = gate(GateKind::X, vec![0]);
        let d = decomposition_of(&x);
        let eps = 0.2;
        let u_prime = perturbed_gate(&d, &PerturbationSample::manual(vec![0.0, eps])).unwrap();
        let ideal = d.reconstruct();
        let plus = StateVector::from_amplitudes(vec![
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        let report = loschmidt_bound_check(&ideal, &u_prime, &[plus.clone()]).unwrap();
        assert_eq!(report.violations, 0);

        let overlap = loschmidt_overlap(&ideal, &u_prime, &plus).unwrap();
        let distance = (Complex64::new(1.0, 0.0) - overlap).norm();
        assert!((distance - report.epsilon).abs() < 1e-12);
    }

    #[test]
    fn loschmidt_chain_holds_on_random_states() {
        let cx = gate(GateKind::Cx, vec![0, 1]);
        let d = decomposition_of(&cx);
        let u_prime =
            perturbed_gate(&d, &PerturbationSample::manual(vec![0.11, -0.02, 0.07, 0.25]))
                .unwrap();
        let ideal = d.reconstruct();
        let mut rng = stream_rng(7, 0);
        let states: Vec<StateVector> = (0..100).map(|_| haar_state(4, &mut rng).unwrap()).collect();
        let report = loschmidt_bound_check(&ideal, &u_prime, &states).unwrap();
        assert_eq!(report.violations, 0);
        assert_eq!(report.loschmidt_values.len(), 100);
        assert!(report
            .loschmidt_values
            .iter()
            .all(|l| (0.0..=1.0 + 1e-12).contains(l)));
    }

    #[test]
    fn mc_with_zero_variance_reproduces_the_gate() {
        // ωτ = 2π makes the drive integral vanish: no fluctuations.
        let x = gate(GateKind::X, vec![0]);
        let d = decomposition_of(&x);
        let config = field(2.0 * PI, 1.0, CouplingScenario::Independent);
        let report = mc_verify(&d, &config, 50, 1).unwrap();
        // sin(π) leaves a ~1e−16 floating-point residue in the variance.
        assert!(report.predicted_lambda_std < 1e-15);
        assert!(report.max_error < 1e-12);
        assert_eq!(report.sublinear_violations, 0);
        assert_eq!(report.loschmidt_violations, 0);
    }

    #[test]
    fn mc_is_reproducible_and_matches_the_predicted_std() {
        let x = gate(GateKind::X, vec![0]);
        let d = decomposition_of(&x);
        let config = field(PI, 1.0, CouplingScenario::Independent);
        let report = mc_verify(&d, &config, 4000, 42).unwrap();
        let again = mc_verify(&d, &config, 4000, 42).unwrap();
        assert_eq!(report, again);

        let predicted = 2.0 / PI;
        assert!((report.predicted_lambda_std - predicted).abs() < 1e-14);
        let rel = (report.lambda_error_std - predicted).abs() / predicted;
        assert!(rel < 0.05, "relative std deviation {rel}");
        assert_eq!(report.sublinear_violations, 0);
        assert_eq!(report.loschmidt_violations, 0);
        assert!(report.closed_form_max_dev < 1e-10);
    }

    #[test]
    fn mc_shared_scenario_draws_identical_errors_across_terms() {
        let cx = gate(GateKind::Cx, vec![0, 1]);
        let d = decomposition_of(&cx);
        let config = field(PI, 1.0, CouplingScenario::Shared);
        let report = mc_verify(&d, &config, 200, 3).unwrap();
        assert_eq!(report.scenario, "shared");
        assert_eq!(report.sublinear_violations, 0);
        assert_eq!(report.loschmidt_violations, 0);
        // With each sample's ε identical across the 4 terms, the empirical
        // std still estimates the per-term fluctuation std.
        let rel = (report.lambda_error_std - 2.0 / PI).abs() / (2.0 / PI);
        assert!(rel < 0.25, "relative std deviation {rel}");
    }

    #[test]
    fn mc_rejects_empty_runs() {
        let x = gate(GateKind::X, vec![0]);
        let d = decomposition_of(&x);
        let config = field(PI, 1.0, CouplingScenario::Independent);
        assert!(matches!(
            mc_verify(&d, &config, 0, 1),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn perturbation_length_is_validated() {
        let x = gate(GateKind::X, vec![0]);
        let d = decomposition_of(&x);
        assert!(matches!(
            perturbed_gate(&d, &PerturbationSample::manual(vec![0.1])),
            Err(Error::DimMismatch { .. })
        ));
    }
}
