//! Plain-text circuit files and dense circuit unitaries.
//!
//! The format is line-oriented:
//!
//! ```text
//! # comments run to end of line
//! qubits 3
//! H 0
//! CX 0 1
//! RZ(pi/4) 2
//! CNX 0 1 2
//! CUSTOM mygate.json 0 2
//! ```
//!
//! The first non-comment line declares the register size; every other line
//! is one gate: a name (with an optional parenthesized angle) followed by
//! the qubits it acts on, controls first. Angles accept plain floats and
//! the literal forms `pi`, `pi/4`, `3*pi/4`, `-pi/2`, `0.5*pi`. `CUSTOM`
//! lines name a JSON matrix file (see
//! [`ComplexMatrix::from_json_value`](crate::matrix::ComplexMatrix::from_json_value))
//! followed by the target qubits; relative paths resolve against the
//! circuit file's directory (or the working directory when parsing from a
//! string).

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::gates::{embed, standard_gate, GateKind, GateSpec};
use crate::matrix::{require_unitary, ComplexMatrix};
use crate::tol;

/// Largest register for which dense circuit unitaries are materialized.
pub const MAX_DENSE_QUBITS: usize = 10;

/// A parsed circuit: register size plus gates in application order.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub gates: Vec<GateSpec>,
}

/// Parses an angle: a plain float, or a `pi` literal of the form
/// `[-][a*]pi[/b]`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let trimmed = text.trim();
    if let Ok(value) = trimmed.parse::<f64>() {
        if !value.is_finite() {
            return Err(Error::InvalidInput(format!("angle `{trimmed}` is not finite")));
        }
        return Ok(value);
    }

    let (negative, body) = match trimmed.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, trimmed),
    };
    let lower = body.to_ascii_lowercase();
    let pi_at = lower
        .find("pi")
        .ok_or_else(|| Error::InvalidInput(format!("cannot parse angle `{trimmed}`")))?;
    let prefix = &lower[..pi_at];
    let suffix = &lower[pi_at + 2..];

    let numerator = if prefix.is_empty() {
        1.0
    } else {
        let factor = prefix.strip_suffix('*').ok_or_else(|| {
            Error::InvalidInput(format!("cannot parse angle `{trimmed}` (expected `a*pi`)"))
        })?;
        factor
            .parse::<f64>()
            .map_err(|_| Error::InvalidInput(format!("cannot parse angle `{trimmed}`")))?
    };
    let denominator = if suffix.is_empty() {
        1.0
    } else {
        let divisor = suffix.strip_prefix('/').ok_or_else(|| {
            Error::InvalidInput(format!("cannot parse angle `{trimmed}` (expected `pi/b`)"))
        })?;
        let value = divisor
            .parse::<f64>()
            .map_err(|_| Error::InvalidInput(format!("cannot parse angle `{trimmed}`")))?;
        if value == 0.0 {
            return Err(Error::InvalidInput(format!("angle `{trimmed}` divides by zero")));
        }
        value
    };

    let magnitude = numerator * PI / denominator;
    if !magnitude.is_finite() {
        return Err(Error::InvalidInput(format!("angle `{trimmed}` is not finite")));
    }
    Ok(if negative { -magnitude } else { magnitude })
}

/// Parses a circuit from text. Relative `CUSTOM` paths resolve against the
/// working directory.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    parse_circuit_with_base(text, None)
}

/// Reads and parses a circuit file. Relative `CUSTOM` paths resolve against
/// the file's directory.
pub fn parse_circuit_file(path: impl AsRef<Path>) -> Result<Circuit> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_circuit_with_base(&text, path.parent())
}

/// Loads a gate matrix from a JSON file and validates it as a unitary on a
/// power-of-two dimension.
pub fn matrix_from_file(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path.as_ref())?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let matrix = ComplexMatrix::from_json_value(&value)?;
    require_unitary(&matrix, tol::STRUCTURAL)?;
    Ok(matrix)
}

fn parse_circuit_with_base(text: &str, base: Option<&Path>) -> Result<Circuit> {
    let mut n_qubits: Option<usize> = None;
    let mut gates = Vec::new();

    for (index, raw_line) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = match raw_line.find('#') {
            Some(at) => &raw_line[..at],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }

        let Some(declared) = n_qubits else {
            let mut parts = line.split_whitespace();
            let keyword = parts.next().unwrap_or("");
            let count = parts.next();
            if keyword != "qubits" || count.is_none() || parts.next().is_some() {
                return Err(Error::Syntax {
                    line: line_no,
                    message: format!("expected `qubits N`, found `{line}`"),
                });
            }
            let count: usize = count.unwrap().parse().map_err(|_| Error::Syntax {
                line: line_no,
                message: format!("invalid qubit count `{}`", count.unwrap()),
            })?;
            if count == 0 {
                return Err(Error::Syntax {
                    line: line_no,
                    message: "circuit must have at least one qubit".into(),
                });
            }
            n_qubits = Some(count);
            continue;
        };

        let spec = parse_gate_line(line, line_no, declared, base)?;
        gates.push(spec);
    }

    let n_qubits = n_qubits.ok_or(Error::Syntax {
        line: text.lines().count().max(1),
        message: "missing `qubits N` declaration".into(),
    })?;
    Ok(Circuit { n_qubits, gates })
}

fn parse_gate_line(
    line: &str,
    line_no: usize,
    n_qubits: usize,
    base: Option<&Path>,
) -> Result<GateSpec> {
    let mut tokens = line.split_whitespace();
    let head = tokens.next().expect("line is non-empty");

    let (name, params) = match head.find('(') {
        Some(open) => {
            let inner = head[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Syntax {
                    line: line_no,
                    message: format!("unterminated parameter list in `{head}`"),
                })?;
            let angle = parse_angle(inner).map_err(|e| Error::Syntax {
                line: line_no,
                message: e.to_string(),
            })?;
            (&head[..open], vec![angle])
        }
        None => (head, Vec::new()),
    };

    let kind = GateKind::from_name(name).ok_or_else(|| Error::UnknownGate(name.to_string()))?;

    let custom = if kind == GateKind::Custom {
        let source = tokens.next().ok_or_else(|| Error::Syntax {
            line: line_no,
            message: "CUSTOM requires a matrix file".into(),
        })?;
        let path = resolve_path(source, base);
        let matrix = matrix_from_file(&path)?;
        Some((source.to_string(), matrix))
    } else {
        None
    };

    let mut qubits = Vec::new();
    for token in tokens {
        let q: usize = token.parse().map_err(|_| Error::Syntax {
            line: line_no,
            message: format!("invalid qubit index `{token}`"),
        })?;
        if q >= n_qubits {
            return Err(Error::IndexOutOfRange {
                line: line_no,
                index: q,
                n_qubits,
            });
        }
        if qubits.contains(&q) {
            return Err(Error::DuplicateQubit {
                line: line_no,
                index: q,
            });
        }
        qubits.push(q);
    }

    let spec = match custom {
        Some((source, matrix)) => GateSpec::custom(source, matrix, qubits),
        None => GateSpec {
            kind,
            params,
            qubits,
            custom: None,
        },
    };
    spec.validate().map_err(|e| match e {
        Error::BadParamCount { .. } => e,
        other => Error::Syntax {
            line: line_no,
            message: other.to_string(),
        },
    })?;
    Ok(spec)
}

fn resolve_path(source: &str, base: Option<&Path>) -> PathBuf {
    let candidate = Path::new(source);
    if candidate.is_absolute() {
        return candidate.to_path_buf();
    }
    match base {
        Some(dir) => dir.join(candidate),
        None => candidate.to_path_buf(),
    }
}

/// Serializes a circuit back to the text format. Parsing the output yields
/// the original circuit (custom gates keep their source path).
pub fn circuit_to_string(circuit: &Circuit) -> String {
    let mut out = format!("qubits {}\n", circuit.n_qubits);
    for gate in &circuit.gates {
        let mut line = String::new();
        line.push_str(gate.kind.name());
        if let Some(param) = gate.params.first() {
            line.push('(');
            line.push_str(&format!("{param}"));
            line.push(')');
        }
        if let Some(custom) = &gate.custom {
            line.push(' ');
            line.push_str(&custom.source);
        }
        for q in &gate.qubits {
            line.push(' ');
            line.push_str(&q.to_string());
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Multiplies the circuit out into a dense unitary on the full register
/// (first gate applied first, i.e. rightmost in the operator product).
///
/// Dense representation is capped at [`MAX_DENSE_QUBITS`] qubits.
pub fn circuit_unitary(circuit: &Circuit) -> Result<ComplexMatrix> {
    if circuit.n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::TooLarge(format!(
            "dense unitary for {} qubits (limit {MAX_DENSE_QUBITS})",
            circuit.n_qubits
        )));
    }
    let dim = 1usize << circuit.n_qubits;
    let mut unitary = ComplexMatrix::identity(dim);
    for gate in &circuit.gates {
        let matrix = standard_gate(gate)?;
        let lifted = embed(&matrix, &gate.qubits, circuit.n_qubits)?;
        unitary = &lifted * &unitary;
    }
    Ok(unitary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::kron;
    use num_complex::Complex64;

    #[test]
    fn parses_the_documented_example() {
        let text = "\n# a bell pair\nqubits 2\nH 0\nCX 0 1 # entangle\n";
        let circuit = parse_circuit(text).unwrap();
        assert_eq!(circuit.n_qubits, 2);
        assert_eq!(circuit.gates.len(), 2);
        assert_eq!(circuit.gates[0].kind, GateKind::H);
        assert_eq!(circuit.gates[1].kind, GateKind::Cx);
        assert_eq!(circuit.gates[1].qubits, vec![0, 1]);
    }

    #[test]
    fn angle_literals_parse() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi").unwrap(), -PI);
        assert_eq!(parse_angle("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_angle("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("0.5*pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_angle("1.25").unwrap(), 1.25);
        assert_eq!(parse_angle("-2").unwrap(), -2.0);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("twopi").is_err());
        assert!(parse_angle("").is_err());
    }

    #[test]
    fn bell_circuit_unitary_matches_hand_built_product() {
        let circuit = parse_circuit("qubits 2\nH 0\nCX 0 1\n").unwrap();
        let u = circuit_unitary(&circuit).unwrap();

        let h = standard_gate(&GateSpec::simple(GateKind::H, vec![0])).unwrap();
        let id = ComplexMatrix::identity(2);
        let h0 = kron(&h, &id);
        let cx = standard_gate(&GateSpec::simple(GateKind::Cx, vec![0, 1])).unwrap();
        let expected = &cx * &h0;
        assert!(u.max_abs_diff(&expected) < 1e-15);

        // |00⟩ goes to the Φ+ Bell state.
        let psi = crate::state::StateVector::basis_state(2, 0)
            .unwrap()
            .apply(&u)
            .unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        assert!((psi.amplitudes()[0] - Complex64::new(s, 0.0)).norm() < 1e-15);
        assert!((psi.amplitudes()[3] - Complex64::new(s, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn error_lines_are_reported() {
        let missing_header = "H 0\n";
        assert!(matches!(
            parse_circuit(missing_header),
            Err(Error::Syntax { line: 1, .. })
        ));

        let bad_index = "qubits 2\nH 5\n";
        assert!(matches!(
            parse_circuit(bad_index),
            Err(Error::IndexOutOfRange {
                line: 2,
                index: 5,
                n_qubits: 2
            })
        ));

        let duplicate = "qubits 2\nCX 1 1\n";
        assert!(matches!(
            parse_circuit(duplicate),
            Err(Error::DuplicateQubit { line: 2, index: 1 })
        ));

        let unknown = "qubits 1\nFOO 0\n";
        assert!(matches!(parse_circuit(unknown), Err(Error::UnknownGate(_))));

        let bad_params = "qubits 1\nRX 0\n";
        assert!(matches!(
            parse_circuit(bad_params),
            Err(Error::BadParamCount { .. })
        ));

        let empty = "# nothing\n";
        assert!(matches!(parse_circuit(empty), Err(Error::Syntax { .. })));
    }

    #[test]
    fn serializer_round_trips_without_custom_gates() {
        let text = "qubits 3\nH 0\nRZ(0.7853981633974483) 2\nCNX 0 1 2\nSWAP 1 2\n";
        let circuit = parse_circuit(text).unwrap();
        let serialized = circuit_to_string(&circuit);
        let reparsed = parse_circuit(&serialized).unwrap();
        assert_eq!(circuit, reparsed);
    }

    #[test]
    fn custom_gates_load_from_files_and_validate() {
        let dir = std::env::temp_dir().join(format!("qjoule-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("sqrt_x.json");
        // sqrt(X) = (1/2)[[1+i, 1−i], [1−i, 1+i]]
        std::fs::write(
            &path,
            r#"[[[0.5, 0.5], [0.5, -0.5]], [[0.5, -0.5], [0.5, 0.5]]]"#,
        )
        .unwrap();

        let text = format!("qubits 2\nCUSTOM {} 1\n", path.display());
        let circuit = parse_circuit(&text).unwrap();
        let u = circuit_unitary(&circuit).unwrap();
        // Applying it twice gives I ⊗ X.
        let twice = &u * &u;
        let x = standard_gate(&GateSpec::simple(GateKind::X, vec![0])).unwrap();
        let expected = kron(&ComplexMatrix::identity(2), &x);
        assert!(twice.max_abs_diff(&expected) < 1e-12);

        // Non-unitary custom matrices are rejected at parse time.
        let bad = dir.join("bad.json");
        std::fs::write(&bad, r#"[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]"#).unwrap();
        let text = format!("qubits 1\nCUSTOM {} 0\n", bad.display());
        assert!(matches!(parse_circuit(&text), Err(Error::NotUnitary { .. })));

        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn dense_unitary_is_capped() {
        let circuit = Circuit {
            n_qubits: 11,
            gates: vec![],
        };
        assert!(matches!(circuit_unitary(&circuit), Err(Error::TooLarge(_))));
    }
}
