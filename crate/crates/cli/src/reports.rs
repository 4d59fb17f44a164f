//! Typed, deterministic CLI reports.
//!
//! Every JSON report is a plain struct serialized with
//! `serde_json::to_string_pretty`, so field order is declaration order and
//! floats use shortest-round-trip formatting — identical inputs produce
//! byte-identical output. Each carries a `schema` version field.

use serde::Serialize;

use qjoule::decompose::EntangleabilityReport;
use qjoule::energetics::{EnergyReport, FieldConfig};

pub const SCHEMA_VERSION: u32 = 1;

/// Shortest-round-trip float, as used in all text output.
fn num(v: f64) -> String {
    format!("{v}")
}

fn branch_text(branch: &[i64]) -> String {
    let inner: Vec<String> = branch.iter().map(|k| k.to_string()).collect();
    format!("[{}]", inner.join(", "))
}

fn list_text(values: &[f64]) -> String {
    if values.is_empty() {
        return "(empty)".to_string();
    }
    values.iter().map(|v| num(*v)).collect::<Vec<_>>().join(" ")
}

fn bound_text(bound: Option<f64>) -> String {
    match bound {
        Some(v) => num(v),
        None => "infinite".to_string(),
    }
}

/// One decomposition term: a label (`I`/`Z` pattern or Pauli string) and
/// its coefficient; `weight` is present only in the Pauli basis.
#[derive(Serialize)]
pub struct TermReport {
    pub label: String,
    pub coefficient: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<usize>,
}

#[derive(Serialize)]
pub struct DecomposeReport {
    pub schema: u32,
    pub input: String,
    pub n_qubits: usize,
    pub basis: String,
    pub branch: Vec<i64>,
    pub terms: Vec<TermReport>,
    /// Nonzero coefficients, signed, descending magnitude.
    pub multiset: Vec<f64>,
    pub magnitudes: Vec<f64>,
    pub sum_abs: f64,
    /// `null` for single-qubit inputs, where entangling power is undefined.
    pub entangleability: Option<EntangleabilityReport>,
}

impl DecomposeReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("input:   {}\n", self.input));
        out.push_str(&format!("qubits:  {}\n", self.n_qubits));
        out.push_str(&format!("basis:   {}\n", self.basis));
        out.push_str(&format!("branch:  {}\n", branch_text(&self.branch)));
        let width = self
            .terms
            .iter()
            .map(|t| t.label.len())
            .max()
            .unwrap_or(1);
        out.push_str(&format!("terms ({}):\n", self.terms.len()));
        for t in &self.terms {
            match t.weight {
                Some(w) => out.push_str(&format!(
                    "  {:width$}  {:+}  (weight {w})\n",
                    t.label, t.coefficient
                )),
                None => out.push_str(&format!("  {:width$}  {:+}\n", t.label, t.coefficient)),
            }
        }
        out.push_str(&format!(
            "multiset |λ| (desc): {}\n",
            list_text(&self.magnitudes)
        ));
        out.push_str(&format!("sum |λ|: {}\n", num(self.sum_abs)));
        match &self.entangleability {
            Some(e) => out.push_str(&format!(
                "entangling: {} (max Pauli weight {})\n",
                e.entangling, e.max_weight
            )),
            None => out.push_str("entangling: n/a (single qubit)\n"),
        }
        out
    }
}

#[derive(Serialize)]
pub struct BoundReport {
    pub schema: u32,
    pub input: String,
    pub scenario: String,
    /// The bound for the selected scenario; `null` means infinite (ε = 0
    /// with a nonzero coefficient).
    pub energy: Option<f64>,
    pub infinite: bool,
    pub detail: EnergyReport,
}

impl BoundReport {
    pub fn text(&self) -> String {
        let d = &self.detail;
        let mut out = String::new();
        out.push_str(&format!("input:    {}\n", self.input));
        out.push_str(&format!("branch:   {}\n", branch_text(&d.branch)));
        out.push_str(&format!("multiset: {}\n", list_text(&d.multiset)));
        out.push_str(&format!(
            "omega0: {}  epsilon: {}  hbar: {}\n",
            num(d.omega0),
            num(d.epsilon),
            num(d.hbar)
        ));
        out.push_str(&format!(
            "independent bound: {}\n",
            bound_text(d.independent_bound)
        ));
        out.push_str(&format!("shared bound:      {}\n", bound_text(d.shared_bound)));
        out.push_str(&format!(
            "energy ({}): {}\n",
            self.scenario,
            bound_text(self.energy)
        ));
        out
    }
}

#[derive(Serialize)]
pub struct BudgetReport {
    pub schema: u32,
    pub input: String,
    pub n_gates: usize,
    pub epsilon_total: f64,
    /// Equal split: every gate gets `epsilon_total / n_gates`.
    pub split_rule: String,
    pub epsilon_per_gate: Option<f64>,
    pub omega0: f64,
    pub hbar: f64,
    pub scenario: String,
    /// Total for the selected scenario; `null` means infinite.
    pub total: Option<f64>,
    pub total_independent: Option<f64>,
    pub total_shared: Option<f64>,
    pub infinite: bool,
    pub per_gate: Vec<EnergyReport>,
}

impl BudgetReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("circuit:  {}\n", self.input));
        out.push_str(&format!("gates:    {}\n", self.n_gates));
        out.push_str(&format!(
            "epsilon total: {}  per gate ({} split): {}\n",
            num(self.epsilon_total),
            self.split_rule,
            self.epsilon_per_gate.map_or_else(|| "n/a".into(), num)
        ));
        out.push_str(&format!(
            "omega0: {}  hbar: {}\n",
            num(self.omega0),
            num(self.hbar)
        ));
        let width = self
            .per_gate
            .iter()
            .map(|g| g.label.len())
            .max()
            .unwrap_or(4)
            .max(4);
        out.push_str(&format!(
            "{:width$}  {:>24}  {:>24}\n",
            "gate", "independent", "shared"
        ));
        for g in &self.per_gate {
            out.push_str(&format!(
                "{:width$}  {:>24}  {:>24}\n",
                g.label,
                bound_text(g.independent_bound),
                bound_text(g.shared_bound)
            ));
        }
        out.push_str(&format!(
            "{:width$}  {:>24}  {:>24}\n",
            "total",
            bound_text(self.total_independent),
            bound_text(self.total_shared)
        ));
        out.push_str(&format!(
            "energy ({}): {}\n",
            self.scenario,
            bound_text(self.total)
        ));
        out
    }
}

#[derive(Serialize)]
pub struct OptimizeReport {
    pub schema: u32,
    pub input: String,
    pub objective: String,
    pub strategy: String,
    pub offset_bound: i64,
    pub branch: Vec<i64>,
    pub principal_value: f64,
    pub objective_value: f64,
    pub improved: bool,
    /// Nonzero coefficients on the optimized branch, signed,
    /// descending magnitude.
    pub multiset: Vec<f64>,
}

impl OptimizeReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("input:     {}\n", self.input));
        out.push_str(&format!(
            "objective: {}  strategy: {} (offset bound {})\n",
            self.objective, self.strategy, self.offset_bound
        ));
        out.push_str(&format!(
            "principal value: {}\n",
            num(self.principal_value)
        ));
        out.push_str(&format!(
            "optimized value: {}\n",
            num(self.objective_value)
        ));
        out.push_str(&format!("branch:    {}\n", branch_text(&self.branch)));
        out.push_str(&format!("multiset:  {}\n", list_text(&self.multiset)));
        if self.improved {
            out.push_str("strict improvement over the principal branch\n");
        } else {
            out.push_str("no improvement over the principal branch\n");
        }
        out
    }
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub gate: String,
    pub n_terms: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub scenario: String,
    pub field: FieldConfig,
    pub predicted_lambda_std: f64,
    pub lambda_error_std: f64,
    pub mean_error: f64,
    pub std_error: f64,
    pub max_error: f64,
    pub closed_form_max_dev: f64,
    pub n_probe_states: usize,
    pub sublinear_violations: usize,
    pub loschmidt_violations: usize,
}

impl VerifyReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("gate:     {}\n", self.gate));
        out.push_str(&format!(
            "samples:  {}  seed: {}  scenario: {}\n",
            self.n_samples, self.seed, self.scenario
        ));
        out.push_str(&format!(
            "terms: {}  probe states: {}\n",
            self.n_terms, self.n_probe_states
        ));
        out.push_str(&format!(
            "lambda std: predicted {}  empirical {}\n",
            num(self.predicted_lambda_std),
            num(self.lambda_error_std)
        ));
        out.push_str(&format!(
            "gate error: mean {}  std {}  max {}\n",
            num(self.mean_error),
            num(self.std_error),
            num(self.max_error)
        ));
        out.push_str(&format!(
            "closed form vs operator norm, max deviation: {}\n",
            num(self.closed_form_max_dev)
        ));
        out.push_str(&format!(
            "violations: sublinearity {}  loschmidt {}\n",
            self.sublinear_violations, self.loschmidt_violations
        ));
        if self.sublinear_violations == 0 && self.loschmidt_violations == 0 {
            out.push_str("all bounds hold\n");
        } else {
            out.push_str("BOUND VIOLATIONS OBSERVED\n");
        }
        out
    }
}

#[derive(Serialize)]
pub struct SimulateReport {
    pub schema: u32,
    pub variant: String,
    pub tau: f64,
    pub n_steps: usize,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Pretty JSON plus a trailing newline, ready to print or write.
pub fn to_json(report: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize infallibly");
    s.push('\n');
    s
}
