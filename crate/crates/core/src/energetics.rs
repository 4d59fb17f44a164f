//! Coherent-field energy accounting for gate synthesis.
//!
//! A gate `U = exp(i Σ λ_i V_i)` driven by coherent field modes acquires
//! each coefficient λ_i as minus the time integral of the mode amplitudes
//! against the couplings. The achievable precision of λ_i is set by the
//! quantum fluctuations of the drive: for modes with couplings `g_k`,
//! amplitude `α_k`, frequency `ω_k`, and gate time `τ`,
//!
//! ```text
//! ⟨λ⟩   = −Σ_k 2 g_k Re(α_k I_k),     I_k = ∫₀^τ e^{−iω_k t} dt
//! var λ = Σ_k g_k² |I_k|²
//! ```
//!
//! Requiring the fluctuation-induced gate error to stay below ε forces a
//! minimum field energy. Per term the cheapest compliant single mode of
//! frequency ω₀ costs `E ≥ ħ ω₀ λ² / (4 ε²)`; with an independent field
//! per term the costs add (`Σ λ_i²`), while a single field shared by all
//! terms only has to afford the largest coefficient (`max λ_i²`). Both
//! bounds consume coefficient *magnitudes*: the sign of λ only flips the
//! phase of the amplitude that realizes it, never the energy.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::decompose::{wht_decompose, wht_inplace, BranchSpec, CoefficientMultiset};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::spectral::spectral_decompose_unitary;
use crate::{decompose, tol};

/// Serialize `Complex64` as a `[re, im]` pair.
mod complex_pair {
    use num_complex::Complex64;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut tuple = s.serialize_tuple(2)?;
        tuple.serialize_element(&z.re)?;
        tuple.serialize_element(&z.im)?;
        tuple.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Complex64, D::Error> {
        let pair = <[f64; 2]>::deserialize(d)?;
        if !pair[0].is_finite() || !pair[1].is_finite() {
            return Err(D::Error::custom("complex components must be finite"));
        }
        Ok(Complex64::new(pair[0], pair[1]))
    }
}

/// One coherent field mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldMode {
    /// Angular frequency, must be positive.
    pub omega: f64,
    /// Coherent amplitude.
    #[serde(with = "complex_pair")]
    pub alpha: Complex64,
    /// Coupling strength, must be positive.
    pub g: f64,
}

/// How field modes are shared among the generator terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingScenario {
    /// Every generator term is driven by its own copy of the field.
    Independent,
    /// One field drives all terms with equal coupling.
    Shared,
}

impl CouplingScenario {
    /// The name used in reports and on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            Self::Independent => "independent",
            Self::Shared => "shared",
        }
    }
}

/// A complete drive configuration: modes, gate time, units, and sharing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub modes: Vec<FieldMode>,
    /// Gate duration, must be positive.
    pub tau: f64,
    /// Reduced Planck constant in the caller's unit system.
    pub hbar: f64,
    pub scenario: CouplingScenario,
}

impl FieldConfig {
    /// Validates positivity constraints and non-emptiness.
    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(Error::InvalidInput("field configuration has no modes".into()));
        }
        for (k, mode) in self.modes.iter().enumerate() {
            if !(mode.omega > 0.0) || !mode.omega.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "mode {k}: omega must be positive and finite, got {}",
                    mode.omega
                )));
            }
            if !(mode.g > 0.0) || !mode.g.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "mode {k}: coupling g must be positive and finite, got {}",
                    mode.g
                )));
            }
        }
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return Err(Error::InvalidInput(format!(
                "tau must be positive and finite, got {}",
                self.tau
            )));
        }
        if !(self.hbar > 0.0) || !self.hbar.is_finite() {
            return Err(Error::InvalidInput(format!(
                "hbar must be positive and finite, got {}",
                self.hbar
            )));
        }
        Ok(())
    }

    /// Per-mode couplings as stored on the modes.
    pub fn couplings(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.g).collect()
    }
}

/// The drive integral `I(ω, τ) = ∫₀^τ e^{−iωt} dt = (1 − e^{−iωτ})/(iω)`.
pub fn drive_integral(omega: f64, tau: f64) -> Complex64 {
    let phase = Complex64::from_polar(1.0, -omega * tau);
    (Complex64::new(1.0, 0.0) - phase) / Complex64::new(0.0, omega)
}

/// Minimum field energy to realize one coefficient `λ` at gate error `ε`
/// with a mode of frequency `ω₀`: `ħ ω₀ λ² / (4 ε²)`.
///
/// Conventions at the edges: a vanishing coefficient costs nothing (0 even
/// at ε = 0); a nonzero coefficient at ε = 0 costs `+∞`.
pub fn per_term_bound(lambda: f64, omega0: f64, epsilon: f64, hbar: f64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    if epsilon == 0.0 {
        return f64::INFINITY;
    }
    hbar * omega0 * lambda * lambda / (4.0 * epsilon * epsilon)
}

/// Energy lower bound when every term has its own field:
/// `(ħ ω₀ / 4ε²) Σ_i λ_i²`.
pub fn independent_bound(
    multiset: &CoefficientMultiset,
    omega0: f64,
    epsilon: f64,
    hbar: f64,
) -> f64 {
    if multiset.is_empty() {
        return 0.0;
    }
    if epsilon == 0.0 {
        return f64::INFINITY;
    }
    hbar * omega0 * multiset.sum_sq() / (4.0 * epsilon * epsilon)
}

/// Energy lower bound when one field drives all terms:
/// `(ħ ω₀ / 4ε²) max_i λ_i²`.
pub fn shared_bound(
    multiset: &CoefficientMultiset,
    omega0: f64,
    epsilon: f64,
    hbar: f64,
) -> f64 {
    if multiset.is_empty() {
        return 0.0;
    }
    if epsilon == 0.0 {
        return f64::INFINITY;
    }
    hbar * omega0 * multiset.max_sq() / (4.0 * epsilon * epsilon)
}

/// Mean of the realized coefficient under the drive:
/// `⟨λ⟩ = −Σ_k 2 g_k Re(α_k I(ω_k, τ))`.
///
/// `couplings` supplies the per-mode coupling of the term in question
/// (different terms couple differently to the same field); it must align
/// with `config.modes`.
pub fn lambda_mean(config: &FieldConfig, couplings: &[f64]) -> Result<f64> {
    config.validate()?;
    if couplings.len() != config.modes.len() {
        return Err(Error::DimMismatch {
            left: couplings.len(),
            right: config.modes.len(),
            context: "couplings vs field modes",
        });
    }
    let mut mean = 0.0f64;
    for (mode, g) in config.modes.iter().zip(couplings) {
        let integral = drive_integral(mode.omega, config.tau);
        mean -= 2.0 * g * (mode.alpha * integral).re;
    }
    Ok(mean)
}

/// Variance of the realized coefficient for constant couplings:
/// `var λ = Σ_k g_k² |I(ω_k, τ)|²` with
/// `|I(ω, τ)|² = 4 sin²(ωτ/2) / ω²`.
///
/// The variance is a property of the field state's quantum fluctuations —
/// it does not depend on the coherent amplitudes.
pub fn lambda_variance(config: &FieldConfig, couplings: &[f64]) -> Result<f64> {
    config.validate()?;
    if couplings.len() != config.modes.len() {
        return Err(Error::DimMismatch {
            left: couplings.len(),
            right: config.modes.len(),
            context: "couplings vs field modes",
        });
    }
    let mut variance = 0.0f64;
    for (mode, g) in config.modes.iter().zip(couplings) {
        let half = 0.5 * mode.omega * config.tau;
        let magnitude_sq = 4.0 * half.sin().powi(2) / (mode.omega * mode.omega);
        variance += g * g * magnitude_sq;
    }
    Ok(variance)
}

/// Numerically integrates `∫₀^τ g(t) e^{−iωt} dt` by adaptive Simpson
/// quadrature — the time-dependent-coupling generalization of
/// [`drive_integral`], and an independent oracle for the closed forms.
pub fn drive_mode_integral<F: Fn(f64) -> f64>(
    g: F,
    omega: f64,
    tau: f64,
    rel_tol: f64,
) -> Result<Complex64> {
    if !(omega > 0.0) || !(tau > 0.0) {
        return Err(Error::InvalidInput(
            "drive_mode_integral requires positive omega and tau".into(),
        ));
    }
    let f = |t: f64| Complex64::from_polar(1.0, -omega * t) * g(t);
    integrate_complex(&f, 0.0, tau, rel_tol)
}

/// Adaptive Simpson quadrature for complex integrands.
fn integrate_complex<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<Complex64> {
    let fa = f(a);
    let fb = f(b);
    let (m, fm, whole) = simpson_step(f, a, fa, b, fb);
    // Tolerance is scaled by the coarse estimate with a floor, so fully
    // cancelling integrals still converge on an absolute scale.
    let tol = rel_tol * whole.norm().max(1e-3 * (b - a));
    adaptive_step(f, a, fa, m, fm, b, fb, whole, tol, 60)
}

fn simpson_step<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    fa: Complex64,
    b: f64,
    fb: Complex64,
) -> (f64, Complex64, Complex64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    let estimate = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
    (m, fm, estimate)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    fa: Complex64,
    m: f64,
    fm: Complex64,
    b: f64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Result<Complex64> {
    let (ml, fml, left) = simpson_step(f, a, fa, m, fm);
    let (mr, fmr, right) = simpson_step(f, m, fm, b, fb);
    let delta = left + right - whole;
    if delta.norm() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Numerical(
            "adaptive quadrature failed to converge".into(),
        ));
    }
    let half_tol = 0.5 * tol;
    let l = adaptive_step(f, a, fa, ml, fml, m, fm, left, half_tol, depth - 1)?;
    let r = adaptive_step(f, m, fm, mr, fmr, b, fb, right, half_tol, depth - 1)?;
    Ok(l + r)
}

/// Total energy carried by the coherent amplitudes: `ħ Σ_k ω_k |α_k|²`.
pub fn field_energy(config: &FieldConfig) -> f64 {
    config
        .modes
        .iter()
        .map(|m| config.hbar * m.omega * m.alpha.norm_sqr())
        .sum()
}

/// Synthesizes the cheapest single mode (minimal |α|, hence minimal
/// energy) of frequency `omega` and coupling `g` that realizes the target
/// coefficient over gate time `tau`.
///
/// Errors with [`Error::DegenerateDrive`] when the drive integral vanishes
/// (e.g. `ωτ` a multiple of 2π) while the target is nonzero.
pub fn synthesize_single_mode(
    lambda_target: f64,
    omega: f64,
    g: f64,
    tau: f64,
) -> Result<FieldMode> {
    if !(omega > 0.0) || !(g > 0.0) || !(tau > 0.0) {
        return Err(Error::InvalidInput(
            "synthesize_single_mode requires positive omega, g, tau".into(),
        ));
    }
    let integral = drive_integral(omega, tau);
    let magnitude_sq = integral.norm_sqr();
    if lambda_target == 0.0 {
        return Ok(FieldMode {
            omega,
            alpha: Complex64::new(0.0, 0.0),
            g,
        });
    }
    if magnitude_sq.sqrt() <= tol::DEGENERATE_DRIVE {
        return Err(Error::DegenerateDrive);
    }
    // ⟨λ⟩ = −2g Re(α I); α ∝ conj(I) maximizes Re(α I) per unit |α|, so
    // this is the minimal-amplitude (minimal-energy) solution.
    let alpha = integral.conj() * Complex64::new(-lambda_target / (2.0 * g * magnitude_sq), 0.0);
    Ok(FieldMode { omega, alpha, g })
}

/// What a branch search is minimizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchObjective {
    /// `max_i λ_i²` — the shared-field cost.
    SharedMax,
    /// `Σ_i λ_i²` — the independent-fields cost.
    IndependentSum,
}

impl BranchObjective {
    fn evaluate(&self, coefficients: &[f64]) -> f64 {
        match self {
            Self::SharedMax => coefficients
                .iter()
                .map(|c| c * c)
                .fold(0.0f64, f64::max),
            Self::IndependentSum => coefficients.iter().map(|c| c * c).sum(),
        }
    }
}

/// How to explore the branch lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStrategy {
    /// Every offset vector in `[−bound, bound]^dim`. Limited to dimension
    /// ≤ 8 and bound ≤ 2 (5⁸ candidates); returns the lexicographically
    /// smallest minimizer.
    Exhaustive { offset_bound: i64 },
    /// Greedy coordinate descent from the principal branch: repeatedly
    /// takes the best single-offset ±1 step until none improves.
    LocalSearch { offset_bound: i64 },
}

/// Result of a branch optimization.
#[derive(Debug, Clone)]
pub struct BranchOptimization {
    /// The minimizing branch found.
    pub branch: BranchSpec,
    /// Objective at that branch.
    pub objective_value: f64,
    /// Objective at the principal branch, for comparison.
    pub principal_value: f64,
    /// Whether the search strictly improved on the principal branch.
    pub improved: bool,
    /// Coefficient multiset on the minimizing branch.
    pub multiset: CoefficientMultiset,
}

/// Searches logarithm branches of `u` for the one minimizing the given
/// energy objective (identity term included, matching the default bound
/// accounting).
pub fn optimize_branch(
    u: &ComplexMatrix,
    objective: BranchObjective,
    strategy: SearchStrategy,
) -> Result<BranchOptimization> {
    u.n_qubits()?;
    let form = spectral_decompose_unitary(u)?;
    let phases = form.eigenphases.clone();
    let dim = phases.len();

    let coefficients_for = |offsets: &[i64], buffer: &mut Vec<f64>| {
        buffer.clear();
        buffer.extend(
            phases
                .iter()
                .zip(offsets)
                .map(|(theta, k)| theta + 2.0 * std::f64::consts::PI * (*k as f64)),
        );
        wht_inplace(buffer);
        let scale = 1.0 / dim as f64;
        for c in buffer.iter_mut() {
            *c *= scale;
        }
    };

    let mut buffer = Vec::with_capacity(dim);
    let principal = vec![0i64; dim];
    coefficients_for(&principal, &mut buffer);
    let principal_value = objective.evaluate(&buffer);

    let (best_offsets, best_value) = match strategy {
        SearchStrategy::Exhaustive { offset_bound } => {
            if offset_bound < 0 {
                return Err(Error::InvalidInput("offset bound must be non-negative".into()));
            }
            if dim > 8 || offset_bound > 2 {
                return Err(Error::TooLarge(format!(
                    "exhaustive branch search on dimension {dim} with bound {offset_bound} \
                     (limits: dimension 8, bound 2)"
                )));
            }
            let mut best_offsets = vec![-offset_bound; dim];
            let mut current = best_offsets.clone();
            coefficients_for(&current, &mut buffer);
            let mut best_value = objective.evaluate(&buffer);
            // Odometer enumeration is ascending lexicographic, and only a
            // strict improvement replaces the incumbent, so ties resolve to
            // the lexicographically smallest offsets.
            'search: loop {
                let mut pos = dim;
                loop {
                    if pos == 0 {
                        break 'search;
                    }
                    pos -= 1;
                    if current[pos] < offset_bound {
                        current[pos] += 1;
                        for later in current.iter_mut().skip(pos + 1) {
                            *later = -offset_bound;
                        }
                        break;
                    }
                }
                coefficients_for(&current, &mut buffer);
                let value = objective.evaluate(&buffer);
                if value < best_value {
                    best_value = value;
                    best_offsets.copy_from_slice(&current);
                }
            }
            (best_offsets, best_value)
        }
        SearchStrategy::LocalSearch { offset_bound } => {
            if offset_bound < 0 {
                return Err(Error::InvalidInput("offset bound must be non-negative".into()));
            }
            let mut current = principal.clone();
            let mut current_value = principal_value;
            loop {
                let mut best_step: Option<(usize, i64, f64)> = None;
                for j in 0..dim {
                    for delta in [-1i64, 1i64] {
                        let candidate = current[j] + delta;
                        if candidate.abs() > offset_bound {
                            continue;
                        }
                        let mut offsets = current.clone();
                        offsets[j] = candidate;
                        coefficients_for(&offsets, &mut buffer);
                        let value = objective.evaluate(&buffer);
                        let beats_incumbent = match best_step {
                            Some((_, _, best)) => value < best,
                            None => value < current_value,
                        };
                        if beats_incumbent {
                            best_step = Some((j, candidate, value));
                        }
                    }
                }
                match best_step {
                    Some((j, offset, value)) => {
                        current[j] = offset;
                        current_value = value;
                    }
                    None => break,
                }
            }
            (current, current_value)
        }
    };

    let branch = BranchSpec::new(best_offsets);
    let decomposition = wht_decompose(u, &branch)?;
    Ok(BranchOptimization {
        improved: best_value < principal_value,
        multiset: decomposition.coefficient_multiset(tol::ZERO_COEFF),
        branch,
        objective_value: best_value,
        principal_value,
    })
}

/// Energy summary for one gate: coefficient statistics plus both bounds.
///
/// `independent_bound`/`shared_bound` are `None` exactly when the bound is
/// infinite (ε = 0 with nonzero coefficients), mirrored by `infinite`.
#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub label: String,
    pub branch: Vec<i64>,
    pub multiset: Vec<f64>,
    pub omega0: f64,
    pub epsilon: f64,
    pub hbar: f64,
    pub sum_sq: f64,
    pub max_sq: f64,
    pub sum_abs: f64,
    /// Per-coefficient bounds `ħω₀λ_i²/(4ε²)`, aligned with `multiset`;
    /// `None` when they diverge (ε = 0 with nonzero coefficients).
    pub per_term_bounds: Option<Vec<f64>>,
    pub independent_bound: Option<f64>,
    pub shared_bound: Option<f64>,
    pub infinite: bool,
}

/// Builds an [`EnergyReport`] from a coefficient multiset.
pub fn energy_report(
    label: impl Into<String>,
    multiset: &CoefficientMultiset,
    branch: &BranchSpec,
    omega0: f64,
    epsilon: f64,
    hbar: f64,
) -> EnergyReport {
    let independent = independent_bound(multiset, omega0, epsilon, hbar);
    let shared = shared_bound(multiset, omega0, epsilon, hbar);
    let infinite = independent.is_infinite() || shared.is_infinite();
    let per_term: Vec<f64> = multiset
        .values()
        .iter()
        .map(|v| per_term_bound(*v, omega0, epsilon, hbar))
        .collect();
    EnergyReport {
        label: label.into(),
        branch: branch.offsets().to_vec(),
        multiset: multiset.values().to_vec(),
        omega0,
        epsilon,
        hbar,
        sum_sq: multiset.sum_sq(),
        max_sq: multiset.max_sq(),
        sum_abs: multiset.sum_abs(),
        per_term_bounds: (!infinite).then_some(per_term),
        independent_bound: independent.is_finite().then_some(independent),
        shared_bound: shared.is_finite().then_some(shared),
        infinite,
    }
}

/// Convenience: decompose a gate on a branch and produce its energy report.
pub fn gate_energy_report(
    label: impl Into<String>,
    u: &ComplexMatrix,
    branch: &BranchSpec,
    omega0: f64,
    epsilon: f64,
    hbar: f64,
) -> Result<EnergyReport> {
    let decomposition = decompose::wht_decompose(u, branch)?;
    let multiset = decomposition.coefficient_multiset(tol::ZERO_COEFF);
    Ok(energy_report(label, &multiset, branch, omega0, epsilon, hbar))
}
