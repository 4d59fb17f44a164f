//! `qjoule` — energy cost of quantum gates from the command line.
//!
//! Subcommands: `decompose | bound | optimize | simulate | verify | budget`.
//! Structured output is versioned JSON (`--json`), default output is plain
//! text; traces are CSV. Exit codes: 0 success, 2 usage/validation error,
//! 3 numerical failure.

mod input;
mod reports;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use qjoule::circuit::{circuit_unitary, Circuit};
use qjoule::decompose::{
    entangleability, from_pauli_generator, log_branch, wht_decompose, BranchSpec,
};
use qjoule::energetics::{
    gate_energy_report, optimize_branch, BranchObjective, CouplingScenario, EnergyReport,
    SearchStrategy,
};
use qjoule::error_model::mc_verify;
use qjoule::evolution::{
    figure1_run, trace_table, trace_to_csv, Figure1Config, Figure1Variant,
};
use qjoule::gates::standard_gate;
use qjoule::{tol, ComplexMatrix, Error, Result};

use input::ResolvedInput;
use reports::{
    BoundReport, BudgetReport, DecomposeReport, OptimizeReport, SimulateReport, TermReport,
    VerifyReport, SCHEMA_VERSION,
};

/// Reduced Planck constant in J·s, from the exact SI value of h.
const HBAR_SI: f64 = 6.626_070_15e-34 / std::f64::consts::TAU;

#[derive(Parser)]
#[command(
    name = "qjoule",
    version,
    about = "Commuting involutory gate decompositions and coherent-field energy bounds"
)]
struct Cli {
    /// Emit a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Basis {
    /// Involutions diagonal in the gate eigenbasis (Walsh–Hadamard route).
    Wht,
    /// Pauli strings; requires the generator's Pauli terms to commute.
    Pauli,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Scenario {
    /// One field per term: bound scales with Σ λ².
    Independent,
    /// A single field drives all terms: bound scales with max λ².
    Shared,
}

impl Scenario {
    fn to_core(self) -> CouplingScenario {
        match self {
            Self::Independent => CouplingScenario::Independent,
            Self::Shared => CouplingScenario::Shared,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::Independent => "independent",
            Self::Shared => "shared",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Objective {
    /// Minimize max λ² (shared-field cost).
    SharedMax,
    /// Minimize Σ λ² (independent-fields cost).
    IndependentSum,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Strategy {
    /// Every branch in [−bound, bound]^dim (dim ≤ 8, bound ≤ 2).
    Exhaustive,
    /// Greedy coordinate descent from the principal branch.
    Local,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Variant {
    /// Two-body generator (π/2)(I⊗I − X⊗X); entangles at interior times.
    Entangling,
    /// Local-sum generator K⊗I + I⊗K; never entangles.
    #[value(alias = "local-sum")]
    Localsum,
}

impl Variant {
    fn to_core(self) -> Figure1Variant {
        match self {
            Self::Entangling => Figure1Variant::Entangling,
            Self::Localsum => Figure1Variant::LocalSum,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a gate or circuit into commuting involutory generators.
    Decompose {
        /// Gate token (X, RZ(pi/3), CNX), unitary-matrix .json, or circuit file.
        input: String,
        /// Logarithm-branch offsets, comma separated (principal if omitted).
        #[arg(long)]
        branch: Option<String>,
        /// Term basis for the decomposition.
        #[arg(long, value_enum, default_value = "wht")]
        basis: Basis,
        /// Control count for CNX/CNH tokens; extra controls for CNTOFF.
        #[arg(long)]
        controls: Option<usize>,
    },
    /// Lower-bound the field energy for a gate, or budget a whole circuit.
    Bound {
        /// Gate token, unitary-matrix .json, or circuit file.
        input: String,
        /// Carrier frequency ω₀ of the control field.
        #[arg(long, default_value_t = 1.0)]
        omega0: f64,
        /// Target gate error (total error for a circuit, split equally).
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Value of ħ (natural units by default).
        #[arg(long, default_value_t = 1.0, conflicts_with = "si")]
        hbar: f64,
        /// Use the SI value of ħ (joule-second energies).
        #[arg(long)]
        si: bool,
        /// Which coupling scenario the reported energy refers to.
        #[arg(long, value_enum, default_value = "shared")]
        scenario: Scenario,
        /// Report the ε = 0 limit as infinite instead of failing.
        #[arg(long)]
        allow_infinite: bool,
        /// Logarithm-branch offsets for a single gate (principal if omitted).
        #[arg(long)]
        branch: Option<String>,
        /// Control count for CNX/CNH tokens; extra controls for CNTOFF.
        #[arg(long)]
        controls: Option<usize>,
    },
    /// Search logarithm branches for the minimum-energy decomposition.
    Optimize {
        /// Gate token, unitary-matrix .json, or circuit file.
        input: String,
        /// Energy objective to minimize.
        #[arg(long, value_enum, default_value = "shared-max")]
        objective: Objective,
        /// Largest |branch offset| explored per eigenphase.
        #[arg(long, default_value_t = 1)]
        offset_bound: i64,
        /// Search strategy.
        #[arg(long, value_enum, default_value = "exhaustive")]
        strategy: Strategy,
        /// Control count for CNX/CNH tokens; extra controls for CNTOFF.
        #[arg(long)]
        controls: Option<usize>,
    },
    /// Run the two-qubit entangling-vs-local showcase and emit the trace.
    Simulate {
        /// Which decomposition drives the run.
        #[arg(long, value_enum, default_value = "entangling")]
        variant: Variant,
        /// Total drive duration τ.
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        /// Uniform time steps (the trace has steps + 1 rows).
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Write the trace here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo check of the error bounds under coefficient noise.
    Verify {
        /// Gate token, unitary-matrix .json, or circuit file.
        input: String,
        /// Number of noise samples.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// RNG seed; equal seeds give byte-identical reports.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Field configuration JSON (default: one vacuum mode, ω = π,
        /// g = 1, τ = 1, ħ = 1).
        #[arg(long)]
        field: Option<PathBuf>,
        /// Override the coupling scenario of the field configuration.
        #[arg(long, value_enum)]
        scenario: Option<Scenario>,
        /// Control count for CNX/CNH tokens; extra controls for CNTOFF.
        #[arg(long)]
        controls: Option<usize>,
    },
    /// Energy budget of a circuit under an equal error split.
    Budget {
        /// Circuit file.
        input: String,
        /// Total error budget, split equally across gates.
        #[arg(long, default_value_t = 0.1)]
        epsilon_total: f64,
        /// Carrier frequency ω₀ of the control field.
        #[arg(long, default_value_t = 1.0)]
        omega0: f64,
        /// Value of ħ (natural units by default).
        #[arg(long, default_value_t = 1.0, conflicts_with = "si")]
        hbar: f64,
        /// Use the SI value of ħ (joule-second energies).
        #[arg(long)]
        si: bool,
        /// Which coupling scenario the reported total refers to.
        #[arg(long, value_enum, default_value = "shared")]
        scenario: Scenario,
        /// Report the ε = 0 limit as infinite instead of failing.
        #[arg(long)]
        allow_infinite: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code_for(&e));
    }
}

/// 3 for numerical failures (non-convergence), 2 for everything else
/// (usage and validation); clap exits 2 on its own for argument errors.
fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Numerical(_) => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Decompose {
            input,
            branch,
            basis,
            controls,
        } => cmd_decompose(&input, branch.as_deref(), basis, controls, cli.json),
        Command::Bound {
            input,
            omega0,
            epsilon,
            hbar,
            si,
            scenario,
            allow_infinite,
            branch,
            controls,
        } => cmd_bound(
            &input,
            omega0,
            epsilon,
            pick_hbar(hbar, si),
            scenario,
            allow_infinite,
            branch.as_deref(),
            controls,
            cli.json,
        ),
        Command::Optimize {
            input,
            objective,
            offset_bound,
            strategy,
            controls,
        } => cmd_optimize(&input, objective, offset_bound, strategy, controls, cli.json),
        Command::Simulate {
            variant,
            tau,
            steps,
            out,
        } => cmd_simulate(variant, tau, steps, out.as_deref(), cli.json),
        Command::Verify {
            input,
            samples,
            seed,
            field,
            scenario,
            controls,
        } => cmd_verify(
            &input,
            samples,
            seed,
            field.as_deref(),
            scenario,
            controls,
            cli.json,
        ),
        Command::Budget {
            input,
            epsilon_total,
            omega0,
            hbar,
            si,
            scenario,
            allow_infinite,
        } => {
            let resolved = input::resolve(&input, None)?;
            let ResolvedInput::Circuit { label, circuit } = resolved else {
                return Err(Error::InvalidInput(
                    "budget expects a circuit file; use `bound` for single gates".into(),
                ));
            };
            let report = budget_report(
                &label,
                &circuit,
                epsilon_total,
                omega0,
                pick_hbar(hbar, si),
                scenario,
                allow_infinite,
            )?;
            emit(cli.json, &reports::to_json(&report), &report.text());
            Ok(())
        }
    }
}

fn pick_hbar(hbar: f64, si: bool) -> f64 {
    if si {
        HBAR_SI
    } else {
        hbar
    }
}

fn emit(json: bool, json_text: &str, plain_text: &str) {
    if json {
        print!("{json_text}");
    } else {
        print!("{plain_text}");
    }
}

/// Branch offsets from `--branch`, or the principal branch.
fn branch_for(dim: usize, branch: Option<&str>) -> Result<BranchSpec> {
    match branch {
        Some(text) => {
            let offsets = input::parse_branch(text)?;
            if offsets.len() != dim {
                return Err(Error::BranchLengthMismatch {
                    got: offsets.len(),
                    expected: dim,
                });
            }
            Ok(BranchSpec::new(offsets))
        }
        None => Ok(BranchSpec::principal(dim)),
    }
}

/// The unitary a positional input denotes (a circuit contributes its
/// composite unitary).
fn input_unitary(resolved: ResolvedInput) -> Result<(String, ComplexMatrix)> {
    match resolved {
        ResolvedInput::Gate { label, matrix } => Ok((label, matrix)),
        ResolvedInput::Circuit { label, circuit } => {
            let u = circuit_unitary(&circuit)?;
            Ok((label, u))
        }
    }
}

fn validate_physics(omega0: f64, epsilon: f64, hbar: f64, allow_infinite: bool) -> Result<()> {
    if !omega0.is_finite() || omega0 <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "omega0 must be positive and finite, got {omega0}"
        )));
    }
    if !hbar.is_finite() || hbar <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "hbar must be positive and finite, got {hbar}"
        )));
    }
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::InvalidInput(format!(
            "epsilon must be nonnegative and finite, got {epsilon}"
        )));
    }
    if epsilon == 0.0 && !allow_infinite {
        return Err(Error::InvalidInput(
            "epsilon = 0 makes the bound infinite; pass --allow-infinite to report it".into(),
        ));
    }
    Ok(())
}

fn cmd_decompose(
    input: &str,
    branch: Option<&str>,
    basis: Basis,
    controls: Option<usize>,
    json: bool,
) -> Result<()> {
    let (label, u) = input_unitary(input::resolve(input, controls)?)?;
    let n_qubits = u.n_qubits()?;
    let branch_spec = branch_for(u.dim(), branch)?;

    let (basis_name, terms, multiset, generator) = match basis {
        Basis::Wht => {
            let d = wht_decompose(&u, &branch_spec)?;
            let terms: Vec<TermReport> = d
                .terms()
                .iter()
                .map(|t| TermReport {
                    label: t.label.clone(),
                    coefficient: t.coefficient,
                    weight: None,
                })
                .collect();
            let multiset = d.coefficient_multiset(tol::ZERO_COEFF);
            let generator = d.generator();
            ("wht", terms, multiset, generator)
        }
        Basis::Pauli => {
            let k = log_branch(&u, &branch_spec)?;
            let d = from_pauli_generator(&k, tol::ZERO_COEFF)?;
            let weights: Vec<usize> = qjoule::decompose::pauli_decompose(&k, tol::ZERO_COEFF)?
                .iter()
                .map(|t| t.weight())
                .collect();
            let terms: Vec<TermReport> = d
                .terms()
                .iter()
                .zip(weights)
                .map(|(t, w)| TermReport {
                    label: t.label.clone(),
                    coefficient: t.coefficient,
                    weight: Some(w),
                })
                .collect();
            let multiset = d.coefficient_multiset(tol::ZERO_COEFF);
            ("pauli", terms, multiset, k)
        }
    };

    let entangle = if n_qubits >= 2 {
        Some(entangleability(&generator, tol::ZERO_COEFF)?)
    } else {
        None
    };

    let report = DecomposeReport {
        schema: SCHEMA_VERSION,
        input: label,
        n_qubits,
        basis: basis_name.to_string(),
        branch: branch_spec.offsets().to_vec(),
        terms,
        multiset: multiset.values().to_vec(),
        magnitudes: multiset.magnitudes(),
        sum_abs: multiset.sum_abs(),
        entangleability: entangle,
    };
    emit(json, &reports::to_json(&report), &report.text());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_bound(
    input: &str,
    omega0: f64,
    epsilon: f64,
    hbar: f64,
    scenario: Scenario,
    allow_infinite: bool,
    branch: Option<&str>,
    controls: Option<usize>,
    json: bool,
) -> Result<()> {
    validate_physics(omega0, epsilon, hbar, allow_infinite)?;
    match input::resolve(input, controls)? {
        ResolvedInput::Gate { label, matrix } => {
            let branch_spec = branch_for(matrix.dim(), branch)?;
            let detail =
                gate_energy_report(label.clone(), &matrix, &branch_spec, omega0, epsilon, hbar)?;
            let energy = match scenario {
                Scenario::Independent => detail.independent_bound,
                Scenario::Shared => detail.shared_bound,
            };
            let report = BoundReport {
                schema: SCHEMA_VERSION,
                input: label,
                scenario: scenario.name().to_string(),
                energy,
                infinite: detail.infinite,
                detail,
            };
            emit(json, &reports::to_json(&report), &report.text());
            Ok(())
        }
        ResolvedInput::Circuit { label, circuit } => {
            if branch.is_some() {
                return Err(Error::InvalidInput(
                    "--branch applies to a single gate, not a circuit".into(),
                ));
            }
            let report = budget_report(
                &label,
                &circuit,
                epsilon,
                omega0,
                hbar,
                scenario,
                allow_infinite,
            )?;
            emit(json, &reports::to_json(&report), &report.text());
            Ok(())
        }
    }
}

/// `None` as soon as any component is infinite, otherwise the plain sum.
fn sum_bounds<I: Iterator<Item = Option<f64>>>(bounds: I) -> Option<f64> {
    let mut total = 0.0;
    for b in bounds {
        total += b?;
    }
    Some(total)
}

fn budget_report(
    label: &str,
    circuit: &Circuit,
    epsilon_total: f64,
    omega0: f64,
    hbar: f64,
    scenario: Scenario,
    allow_infinite: bool,
) -> Result<BudgetReport> {
    validate_physics(omega0, epsilon_total, hbar, allow_infinite)?;
    let n_gates = circuit.gates.len();
    let epsilon_per_gate = (n_gates > 0).then(|| epsilon_total / n_gates as f64);

    let mut per_gate: Vec<EnergyReport> = Vec::with_capacity(n_gates);
    for spec in &circuit.gates {
        let u = standard_gate(spec)?;
        let branch = BranchSpec::principal(u.dim());
        per_gate.push(gate_energy_report(
            input::gate_label(spec),
            &u,
            &branch,
            omega0,
            epsilon_per_gate.expect("a gate implies n_gates > 0"),
            hbar,
        )?);
    }

    let total_independent = sum_bounds(per_gate.iter().map(|g| g.independent_bound));
    let total_shared = sum_bounds(per_gate.iter().map(|g| g.shared_bound));
    let total = match scenario {
        Scenario::Independent => total_independent,
        Scenario::Shared => total_shared,
    };
    Ok(BudgetReport {
        schema: SCHEMA_VERSION,
        input: label.to_string(),
        n_gates,
        epsilon_total,
        split_rule: "equal".to_string(),
        epsilon_per_gate,
        omega0,
        hbar,
        scenario: scenario.name().to_string(),
        total,
        total_independent,
        total_shared,
        infinite: total_independent.is_none() || total_shared.is_none(),
        per_gate,
    })
}

fn cmd_optimize(
    input: &str,
    objective: Objective,
    offset_bound: i64,
    strategy: Strategy,
    controls: Option<usize>,
    json: bool,
) -> Result<()> {
    if offset_bound < 0 {
        return Err(Error::InvalidInput(format!(
            "offset bound must be nonnegative, got {offset_bound}"
        )));
    }
    let (label, u) = input_unitary(input::resolve(input, controls)?)?;
    let (objective_core, objective_name) = match objective {
        Objective::SharedMax => (BranchObjective::SharedMax, "shared-max"),
        Objective::IndependentSum => (BranchObjective::IndependentSum, "independent-sum"),
    };
    let (strategy_core, strategy_name) = match strategy {
        Strategy::Exhaustive => (SearchStrategy::Exhaustive { offset_bound }, "exhaustive"),
        Strategy::Local => (SearchStrategy::LocalSearch { offset_bound }, "local"),
    };
    let opt = optimize_branch(&u, objective_core, strategy_core)?;
    let report = OptimizeReport {
        schema: SCHEMA_VERSION,
        input: label,
        objective: objective_name.to_string(),
        strategy: strategy_name.to_string(),
        offset_bound,
        branch: opt.branch.offsets().to_vec(),
        principal_value: opt.principal_value,
        objective_value: opt.objective_value,
        improved: opt.improved,
        multiset: opt.multiset.values().to_vec(),
    };
    emit(json, &reports::to_json(&report), &report.text());
    Ok(())
}

fn cmd_simulate(
    variant: Variant,
    tau: f64,
    steps: usize,
    out: Option<&std::path::Path>,
    json: bool,
) -> Result<()> {
    let core_variant = variant.to_core();
    let trace = figure1_run(&Figure1Config {
        variant: core_variant,
        tau,
        n_steps: steps,
    })?;
    let payload = if json {
        let (columns, rows) = trace_table(&trace);
        reports::to_json(&SimulateReport {
            schema: SCHEMA_VERSION,
            variant: core_variant.name().to_string(),
            tau,
            n_steps: steps,
            columns,
            rows,
        })
    } else {
        trace_to_csv(&trace)
    };
    match out {
        Some(path) => std::fs::write(path, payload)?,
        None => print!("{payload}"),
    }
    Ok(())
}


fn cmd_verify(
    input: &str,
    samples: usize,
    seed: u64,
    field: Option<&std::path::Path>,
    scenario: Option<Scenario>,
    controls: Option<usize>,
    json: bool,
) -> Result<()> {
    let (label, u) = input_unitary(input::resolve(input, controls)?)?;
    let mut config = match field {
        Some(path) => input::load_field(path)?,
        None => input::default_field(CouplingScenario::Independent),
    };
    if let Some(s) = scenario {
        config.scenario = s.to_core();
    }
    let d = wht_decompose(&u, &BranchSpec::principal(u.dim()))?;
    let mc = mc_verify(&d, &config, samples, seed)?;
    let report = VerifyReport {
        schema: SCHEMA_VERSION,
        gate: label,
        n_terms: mc.n_terms,
        n_samples: mc.n_samples,
        seed: mc.seed,
        scenario: mc.scenario.clone(),
        field: config,
        predicted_lambda_std: mc.predicted_lambda_std,
        lambda_error_std: mc.lambda_error_std,
        mean_error: mc.mean_error,
        std_error: mc.std_error,
        max_error: mc.max_error,
        closed_form_max_dev: mc.closed_form_max_dev,
        n_probe_states: mc.n_probe_states,
        sublinear_violations: mc.sublinear_violations,
        loschmidt_violations: mc.loschmidt_violations,
    };
    emit(json, &reports::to_json(&report), &report.text());
    Ok(())
}
