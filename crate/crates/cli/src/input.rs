//! Resolution of command-line gate/circuit arguments.

use std::path::Path;

use qjoule::circuit::{matrix_from_file, parse_angle, parse_circuit_file, Circuit};
use qjoule::energetics::{CouplingScenario, FieldConfig, FieldMode};
use qjoule::gates::{standard_gate, GateKind, GateSpec};
use qjoule::{Complex64, ComplexMatrix, Error, Result};

/// A positional input argument, resolved.
pub enum ResolvedInput {
    /// A single gate (named on the command line, or a unitary-matrix JSON
    /// file).
    Gate { label: String, matrix: ComplexMatrix },
    /// A circuit file.
    Circuit { label: String, circuit: Circuit },
}

/// Resolves a positional input: an existing `.json` file is a custom
/// unitary matrix, any other existing file is a circuit, and anything else
/// is parsed as a gate token like `X`, `RZ(pi/3)`, or `CNX` (with
/// `--controls`).
pub fn resolve(token: &str, controls: Option<usize>) -> Result<ResolvedInput> {
    let path = Path::new(token);
    if path.is_file() {
        if token.ends_with(".json") {
            let matrix = matrix_from_file(path)?;
            return Ok(ResolvedInput::Gate {
                label: token.to_string(),
                matrix,
            });
        }
        let circuit = parse_circuit_file(path)?;
        return Ok(ResolvedInput::Circuit {
            label: token.to_string(),
            circuit,
        });
    }
    let (label, matrix) = parse_gate_token(token, controls)?;
    Ok(ResolvedInput::Gate { label, matrix })
}

/// Parses a gate token (`NAME` or `NAME(angle)`), honoring `--controls`
/// for the controlled families.
fn parse_gate_token(token: &str, controls: Option<usize>) -> Result<(String, ComplexMatrix)> {
    let trimmed = token.trim();
    let (name_part, param) = match trimmed.split_once('(') {
        Some((head, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(|| {
                Error::InvalidInput(format!("unbalanced parenthesis in gate token {trimmed:?}"))
            })?;
            (head.trim(), Some(parse_angle(inner)?))
        }
        None => (trimmed, None),
    };
    let name = name_part.to_uppercase();
    let kind = GateKind::from_name(&name).ok_or_else(|| Error::UnknownGate(name.clone()))?;
    if kind == GateKind::Custom {
        return Err(Error::InvalidInput(
            "custom gates are supplied as existing .json matrix files".into(),
        ));
    }

    // `--controls n` is the n in the family name: CNX/CNH get n controls,
    // CNTOFF puts n extra controls on a Toffoli (so n = 0 is the Toffoli).
    let n_controls = controls.unwrap_or(1);
    let qubits: Vec<usize> = match kind {
        GateKind::Cx | GateKind::Cz | GateKind::Swap => vec![0, 1],
        GateKind::Cnx | GateKind::Cnh => (0..=n_controls).collect(),
        GateKind::Cntoff => (0..n_controls + 3).collect(),
        _ => vec![0],
    };
    if controls.is_some() && !matches!(kind, GateKind::Cnx | GateKind::Cnh | GateKind::Cntoff) {
        return Err(Error::InvalidInput(format!(
            "--controls applies only to CNX, CNH, and CNTOFF, not {name}"
        )));
    }

    let spec = match (kind.n_params(), param) {
        (0, None) => GateSpec::simple(kind, qubits),
        (1, Some(angle)) => GateSpec::with_param(kind, angle, qubits),
        (expected, got) => {
            return Err(Error::BadParamCount {
                gate: name,
                expected,
                got: got.map_or(0, |_| 1),
            })
        }
    };
    let matrix = standard_gate(&spec)?;

    let mut label = name;
    if let Some(angle) = param {
        label = format!("{label}({angle})");
    }
    if matches!(kind, GateKind::Cnx | GateKind::Cnh | GateKind::Cntoff) {
        label = format!("{label}[controls={n_controls}]");
    }
    Ok((label, matrix))
}

/// Parses a branch-offset list: comma-separated integers, with optional
/// surrounding brackets (`0,-1` or `[0,-1]`).
pub fn parse_branch(text: &str) -> Result<Vec<i64>> {
    let inner = text
        .trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .trim();
    if inner.is_empty() {
        return Err(Error::InvalidInput("branch offset list is empty".into()));
    }
    inner
        .split(',')
        .map(|piece| {
            piece.trim().parse::<i64>().map_err(|_| {
                Error::InvalidInput(format!("bad branch offset {:?}", piece.trim()))
            })
        })
        .collect()
}

/// Loads a field configuration from JSON and validates it.
pub fn load_field(path: &Path) -> Result<FieldConfig> {
    let text = std::fs::read_to_string(path)?;
    let config: FieldConfig = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("bad field config {}: {e}", path.display())))?;
    config.validate()?;
    Ok(config)
}

/// The default verification field: one vacuum mode at ω = π over τ = 1
/// with unit coupling and ħ = 1.
pub fn default_field(scenario: CouplingScenario) -> FieldConfig {
    FieldConfig {
        modes: vec![FieldMode {
            omega: std::f64::consts::PI,
            alpha: Complex64::new(0.0, 0.0),
            g: 1.0,
        }],
        tau: 1.0,
        hbar: 1.0,
        scenario,
    }
}

/// One-line label for a circuit gate, mirroring the circuit text format.
pub fn gate_label(spec: &GateSpec) -> String {
    if let Some(custom) = &spec.custom {
        let mut s = format!("CUSTOM {}", custom.source);
        for q in &spec.qubits {
            s.push_str(&format!(" {q}"));
        }
        return s;
    }
    let mut s = spec.kind.name().to_string();
    if let Some(p) = spec.params.first() {
        s.push_str(&format!("({p})"));
    }
    for q in &spec.qubits {
        s.push_str(&format!(" {q}"));
    }
    s
}
