//! Driven evolution under a commuting decomposition, with entanglement
//! entropy and Bloch-vector tracking.
//!
//! A time-dependent drive `f(t) = Σ_k 2 g_k Re(α_k e^{−iω_k t})` scales
//! every generator term simultaneously, so the mid-gate propagator is the
//! closed form `exp(i s(t) Σ_i λ_i V_i)` with the accumulated fraction
//!
//! ```text
//! s(t) = ∫₀^t f / ∫₀^τ f,      s(0) = 0,  s(τ) = 1.
//! ```
//!
//! This folding of the drive into one scalar is exact *only* because all
//! `V_i` commute — time ordering collapses. The simulator therefore only
//! accepts `CommutingDecomposition` inputs, whose representation cannot
//! express non-commuting terms; it never Trotterizes.

use num_complex::Complex64;
use serde::Serialize;

use crate::decompose::CommutingDecomposition;
use crate::energetics::{drive_integral, FieldConfig, FieldMode};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::state::{partial_trace, DensityMatrix, StateVector};
use crate::tol;

/// A drive profile over a gate window `[0, τ]` with its accumulated
/// fraction `s(t)`.
#[derive(Debug, Clone)]
pub struct DriveEnvelope {
    modes: Vec<FieldMode>,
    tau: f64,
    /// `∫₀^τ f`, the normalization of the fraction.
    total: f64,
}

impl DriveEnvelope {
    /// Builds an envelope, validating mode parameters and rejecting drives
    /// whose total integral is too small to normalize
    /// ([`Error::DegenerateDrive`]).
    pub fn new(modes: Vec<FieldMode>, tau: f64) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidInput("drive envelope has no modes".into()));
        }
        for (k, mode) in modes.iter().enumerate() {
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
            if !mode.alpha.re.is_finite() || !mode.alpha.im.is_finite() {
                return Err(Error::InvalidInput(format!("mode {k}: amplitude not finite")));
            }
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidInput(format!(
                "tau must be positive and finite, got {tau}"
            )));
        }
        let total = accumulated(&modes, tau);
        if total.abs() <= tol::DEGENERATE_DRIVE {
            return Err(Error::DegenerateDrive);
        }
        Ok(Self { modes, tau, total })
    }

    /// Builds the envelope from a field configuration (the modes and τ;
    /// ħ and the coupling scenario play no role in the drive shape).
    pub fn from_config(config: &FieldConfig) -> Result<Self> {
        Self::new(config.modes.clone(), config.tau)
    }

    /// Gate duration.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// The accumulated fraction `s(t) = ∫₀^t f / ∫₀^τ f`. Exactly 0 at
    /// `t = 0` and exactly 1 at `t = τ`.
    pub fn fraction(&self, t: f64) -> f64 {
        accumulated(&self.modes, t) / self.total
    }

    /// Finds the earliest `t ∈ [0, τ]` with `s(t) = target` by scanning a
    /// fine grid for a sign change and bisecting it. Errors when the drive
    /// never reaches the target.
    pub fn time_for_fraction(&self, target: f64) -> Result<f64> {
        const SCAN: usize = 4096;
        let value = |t: f64| self.fraction(t) - target;
        let mut prev_t = 0.0f64;
        let mut prev_v = value(0.0);
        if prev_v == 0.0 {
            return Ok(0.0);
        }
        for i in 1..=SCAN {
            let t = self.tau * i as f64 / SCAN as f64;
            let v = value(t);
            if v == 0.0 {
                return Ok(t);
            }
            if prev_v.signum() != v.signum() {
                // Bisect [prev_t, t].
                let (mut lo, mut hi, mut lo_v) = (prev_t, t, prev_v);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let mid_v = value(mid);
                    if mid_v == 0.0 {
                        return Ok(mid);
                    }
                    if lo_v.signum() != mid_v.signum() {
                        hi = mid;
                    } else {
                        lo = mid;
                        lo_v = mid_v;
                    }
                }
                return Ok(0.5 * (lo + hi));
            }
            prev_t = t;
            prev_v = v;
        }
        Err(Error::Numerical(format!(
            "drive fraction never reaches {target} on [0, tau]"
        )))
    }
}

/// `∫₀^t f` with `f(t') = Σ_k 2 g_k Re(α_k e^{−iω_k t'})`, via the closed
/// antiderivative `Σ_k 2 g_k Re(α_k I(ω_k, t))`.
fn accumulated(modes: &[FieldMode], t: f64) -> f64 {
    modes
        .iter()
        .map(|m| 2.0 * m.g * (m.alpha * drive_integral(m.omega, t)).re)
        .sum()
}

/// What to record along a trace besides the states themselves.
#[derive(Debug, Clone)]
pub struct TraceOptions {
    /// Rényi order for the entropies.
    pub renyi_alpha: f64,
    /// Bipartitions: each entry is the set of qubits kept when reducing.
    pub entropy_keep: Vec<Vec<usize>>,
    /// Whether to record per-qubit Bloch vectors.
    pub bloch: bool,
}

impl Default for TraceOptions {
    /// Rényi-1/2 of qubit 0's reduced state, plus all Bloch vectors.
    fn default() -> Self {
        Self {
            renyi_alpha: 0.5,
            entropy_keep: vec![vec![0]],
            bloch: true,
        }
    }
}

/// A sampled evolution: states plus derived entanglement diagnostics.
#[derive(Debug, Clone)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    /// Accumulated drive fraction at each time.
    pub fractions: Vec<f64>,
    pub states: Vec<StateVector>,
    /// `entropies[t][b]`: Rényi entropy of bipartition `b` at time `t`.
    pub entropies: Vec<Vec<f64>>,
    /// `bloch[t][q]`: (x, y, z) of qubit `q` at time `t`; empty when Bloch
    /// tracking is off.
    pub bloch: Vec<Vec<[f64; 3]>>,
    pub renyi_alpha: f64,
    pub entropy_keep: Vec<Vec<usize>>,
}

/// Evolves `psi0` under the decomposition's generator scaled by the drive
/// fraction: `state(t) = exp(i s(t) Σ_i λ_i V_i) psi0`.
///
/// `times` must be sorted ascending within `[0, τ]` and `psi0` normalized.
/// Each emitted state is re-checked to norm 1e−10.
pub fn evolve(
    d: &CommutingDecomposition,
    env: &DriveEnvelope,
    times: &[f64],
    psi0: &StateVector,
    options: &TraceOptions,
) -> Result<EvolutionTrace> {
    if psi0.dim() != d.dim() {
        return Err(Error::DimMismatch {
            left: psi0.dim(),
            right: d.dim(),
            context: "initial state vs decomposition",
        });
    }
    if (psi0.norm() - 1.0).abs() > tol::STRUCTURAL {
        return Err(Error::InvalidInput(format!(
            "initial state norm {} is not 1",
            psi0.norm()
        )));
    }
    if !(options.renyi_alpha > 0.0) || options.renyi_alpha == 1.0 {
        return Err(Error::BadAlpha(options.renyi_alpha));
    }
    let slack = 1e-12 * env.tau();
    for pair in times.windows(2) {
        if pair[1] < pair[0] {
            return Err(Error::InvalidInput("times must be sorted ascending".into()));
        }
    }
    if let (Some(first), Some(last)) = (times.first(), times.last()) {
        if *first < -slack || *last > env.tau() + slack {
            return Err(Error::InvalidInput(format!(
                "times must lie within [0, {}]",
                env.tau()
            )));
        }
    }

    let n_qubits = psi0.n_qubits();
    let lambda_phases = d.joint_phases(&d.coefficients())?;
    let rotated = d.basis().adjoint().mul_vec(psi0.amplitudes())?;

    let mut trace = EvolutionTrace {
        times: times.to_vec(),
        fractions: Vec::with_capacity(times.len()),
        states: Vec::with_capacity(times.len()),
        entropies: Vec::with_capacity(times.len()),
        bloch: Vec::with_capacity(times.len()),
        renyi_alpha: options.renyi_alpha,
        entropy_keep: options.entropy_keep.clone(),
    };

    for &t in times {
        let s = env.fraction(t);
        let phased: Vec<Complex64> = rotated
            .iter()
            .zip(&lambda_phases)
            .map(|(y, phi)| y * Complex64::from_polar(1.0, s * phi))
            .collect();
        let amplitudes = d.basis().mul_vec(&phased)?;
        let state = StateVector::from_amplitudes(amplitudes)?;
        if (state.norm() - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::Numerical(format!(
                "evolved state norm drifted to {}",
                state.norm()
            )));
        }

        let density = state.to_density();
        let mut entropies = Vec::with_capacity(options.entropy_keep.len());
        for keep in &options.entropy_keep {
            let reduced = partial_trace(&density, keep)?;
            entropies.push(renyi_entropy(&reduced, options.renyi_alpha)?);
        }
        let mut bloch = Vec::new();
        if options.bloch {
            for q in 0..n_qubits {
                let reduced = partial_trace(&density, &[q])?;
                bloch.push(bloch_vector(&reduced)?);
            }
        }

        trace.fractions.push(s);
        trace.states.push(state);
        trace.entropies.push(entropies);
        trace.bloch.push(bloch);
    }
    Ok(trace)
}

/// Spectral floor for [`renyi_entropy`]: eigenvalues at or below this are
/// treated as exact zeros. Dense eigensolves carry an absolute noise floor
/// around 1e−15; for orders α < 1 the power sum amplifies a noise
/// eigenvalue p to p^α (e.g. √1e−15 ≈ 3e−8), so leaving the noise in
/// would swamp the entropy of near-pure states.
pub const RENYI_EIGENVALUE_FLOOR: f64 = 1e-13;

/// The Rényi-α entropy `H_α(ρ) = ln(Tr ρ^α) / (1 − α)`, computed from the
/// eigenvalues of `ρ`.
///
/// Numerical policy: eigenvalues below −1e−10 fail as
/// [`Error::NotDensityOperator`]; values at or below
/// [`RENYI_EIGENVALUE_FLOOR`] are clamped to 0 (they are indistinguishable
/// from eigensolver noise); the surviving spectrum is renormalized to unit
/// sum, which makes the result exactly 0 for numerically pure states and
/// keeps it non-negative for every order.
pub fn renyi_entropy(rho: &DensityMatrix, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || alpha == 1.0 || !alpha.is_finite() {
        return Err(Error::BadAlpha(alpha));
    }
    let (eigenvalues, _) = crate::spectral::eigh(rho.matrix().inner());
    let mut kept = Vec::with_capacity(eigenvalues.len());
    for p in eigenvalues {
        if p < -1e-10 {
            return Err(Error::NotDensityOperator(format!(
                "eigenvalue {p} below zero"
            )));
        }
        if p > RENYI_EIGENVALUE_FLOOR {
            kept.push(p);
        }
    }
    if kept.is_empty() {
        return Err(Error::NotDensityOperator(
            "all eigenvalues vanished".into(),
        ));
    }
    let norm: f64 = kept.iter().sum();
    let total: f64 = kept.iter().map(|p| (p / norm).powf(alpha)).sum();
    Ok(total.ln() / (1.0 - alpha))
}

/// The Bloch vector `(Tr ρX, Tr ρY, Tr ρZ)` of a single-qubit density
/// operator.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<[f64; 3]> {
    if rho.dim() != 2 {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: 2,
            context: "bloch_vector input",
        });
    }
    let m = rho.matrix();
    let off = m.get(0, 1);
    let x = 2.0 * off.re;
    let y = -2.0 * off.im;
    let z = m.get(0, 0).re - m.get(1, 1).re;
    Ok([x, y, z])
}

/// Which generator realizes `X⊗X` in the two-qubit showcase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Figure1Variant {
    /// The two-body generator `(π/2)(I⊗I − X⊗X)`: entangles the qubits at
    /// every interior time.
    Entangling,
    /// The local-sum generator `K⊗I + I⊗K`, `K = (π/2)(I − X)`: the state
    /// stays a product throughout.
    LocalSum,
}

impl Figure1Variant {
    /// The name used in reports and on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            Self::Entangling => "entangling",
            Self::LocalSum => "local-sum",
        }
    }
}

/// Configuration of the two-qubit showcase run.
#[derive(Debug, Clone)]
pub struct Figure1Config {
    pub variant: Figure1Variant,
    pub tau: f64,
    /// Number of uniform steps; the trace has `n_steps + 1` samples.
    pub n_steps: usize,
}

impl Default for Figure1Config {
    fn default() -> Self {
        Self {
            variant: Figure1Variant::Entangling,
            tau: 1.0,
            n_steps: 200,
        }
    }
}

/// The decomposition used by a showcase variant: both realize exactly the
/// same gate `X⊗X`, through different commuting families.
pub fn figure1_decomposition(variant: Figure1Variant) -> Result<CommutingDecomposition> {
    let x = ComplexMatrix::from_rows(&[
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    ])?;
    match variant {
        Figure1Variant::Entangling => {
            let xx = crate::matrix::kron(&x, &x);
            crate::decompose::wht_decompose(&xx, &crate::decompose::BranchSpec::principal(4))
        }
        Figure1Variant::LocalSum => {
            // K = (π/2)(I − X) on each qubit.
            let half_pi = std::f64::consts::FRAC_PI_2;
            let k = (&ComplexMatrix::identity(2) - &x).scale(Complex64::new(half_pi, 0.0));
            let h = crate::decompose::local_sum_hamiltonian(2, &[(0, k.clone()), (1, k)])?;
            crate::decompose::from_pauli_generator(&h, tol::ZERO_COEFF)
        }
    }
}

/// Runs the two-qubit showcase: `|00⟩` driven through `X⊗X` by a single
/// mode of angular frequency `1/τ` (real-positive amplitude — the drive
/// phase shifts where in `t` features land, never their value in `s`, so
/// all quantitative statements are made against the fraction axis).
///
/// Tracks the Rényi-1/2 entropy of qubit 0 and both Bloch vectors over
/// `n_steps + 1` uniform time samples.
pub fn figure1_run(config: &Figure1Config) -> Result<EvolutionTrace> {
    if config.n_steps == 0 {
        return Err(Error::InvalidInput("n_steps must be at least 1".into()));
    }
    let d = figure1_decomposition(config.variant)?;
    let env = DriveEnvelope::new(
        vec![FieldMode {
            omega: 1.0 / config.tau,
            alpha: Complex64::new(1.0, 0.0),
            g: 1.0,
        }],
        config.tau,
    )?;
    let times: Vec<f64> = (0..=config.n_steps)
        .map(|i| config.tau * i as f64 / config.n_steps as f64)
        .collect();
    let psi0 = StateVector::basis_state(2, 0)?;
    evolve(&d, &env, &times, &psi0, &TraceOptions::default())
}

/// Column headers for [`trace_to_csv`]/[`trace_to_json`].
fn trace_columns(trace: &EvolutionTrace) -> Vec<String> {
    let mut columns = vec!["t".to_string(), "s".to_string()];
    let dim = trace.states.first().map_or(0, |s| s.dim());
    for j in 0..dim {
        columns.push(format!("re_{j}"));
        columns.push(format!("im_{j}"));
    }
    let base = if trace.renyi_alpha == 0.5 {
        "renyi_half".to_string()
    } else {
        format!("renyi_{}", trace.renyi_alpha)
    };
    let single_default = trace.entropy_keep.len() == 1 && trace.entropy_keep[0] == [0];
    for keep in &trace.entropy_keep {
        if single_default {
            columns.push(base.clone());
        } else {
            let suffix: String = keep.iter().map(|q| format!("q{q}")).collect();
            columns.push(format!("{base}_{suffix}"));
        }
    }
    let n_bloch = trace.bloch.first().map_or(0, |b| b.len());
    for q in 0..n_bloch {
        for axis in ["x", "y", "z"] {
            columns.push(format!("bloch_q{q}_{axis}"));
        }
    }
    columns
}

fn trace_row(trace: &EvolutionTrace, i: usize) -> Vec<f64> {
    let mut row = vec![trace.times[i], trace.fractions[i]];
    for amp in trace.states[i].amplitudes() {
        row.push(amp.re);
        row.push(amp.im);
    }
    row.extend(&trace.entropies[i]);
    for b in &trace.bloch[i] {
        row.extend(b);
    }
    row
}

/// Renders a trace as CSV: one row per time sample, shortest-round-trip
/// float formatting, `\n` line endings.
pub fn trace_to_csv(trace: &EvolutionTrace) -> String {
    let mut out = trace_columns(trace).join(",");
    out.push('\n');
    for i in 0..trace.times.len() {
        let row: Vec<String> = trace_row(trace, i).iter().map(|v| format!("{v}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Column labels and numeric rows of a trace — the tabular form behind
/// [`trace_to_csv`] and [`trace_to_json`].
pub fn trace_table(trace: &EvolutionTrace) -> (Vec<String>, Vec<Vec<f64>>) {
    let columns = trace_columns(trace);
    let rows = (0..trace.times.len()).map(|i| trace_row(trace, i)).collect();
    (columns, rows)
}

/// Renders a trace as JSON mirroring the CSV schema:
/// `{"columns": [...], "rows": [[...], ...]}`.
pub fn trace_to_json(trace: &EvolutionTrace) -> serde_json::Value {
    let (columns, rows) = trace_table(trace);
    serde_json::json!({ "columns": columns, "rows": rows })
}
