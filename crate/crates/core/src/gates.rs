//! Standard gates, controlled extensions, and embeddings into registers.
//!
//! A [`GateSpec`] names a gate, its parameters, and the register qubits it
//! acts on; [`standard_gate`] produces its matrix on its own qubits (always
//! `2^arity`-dimensional, regardless of placement), and [`embed`] lifts that
//! matrix into a full register. Multi-controlled gates list their control
//! qubits first and the targets last, and the controls are the more
//! significant qubits of the gate's own index space.

use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::matrix::{require_unitary, ComplexMatrix};
use crate::tol;

/// The gate vocabulary. `Cnx`/`Cnh` take any number of controls (zero
/// included, where they reduce to `X`/`H`); `Cntoff` is a Toffoli with
/// additional controls; `Custom` wraps a user-supplied unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    I,
    X,
    Y,
    Z,
    H,
    S,
    T,
    Rx,
    Ry,
    Rz,
    Cx,
    Cz,
    Swap,
    Cnx,
    Cnh,
    Cntoff,
    Custom,
}

impl GateKind {
    /// Parses the circuit-file spelling of a gate name.
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "I" => Self::I,
            "X" => Self::X,
            "Y" => Self::Y,
            "Z" => Self::Z,
            "H" => Self::H,
            "S" => Self::S,
            "T" => Self::T,
            "RX" => Self::Rx,
            "RY" => Self::Ry,
            "RZ" => Self::Rz,
            "CX" => Self::Cx,
            "CZ" => Self::Cz,
            "SWAP" => Self::Swap,
            "CNX" => Self::Cnx,
            "CNH" => Self::Cnh,
            "CNTOFF" => Self::Cntoff,
            "CUSTOM" => Self::Custom,
            _ => return None,
        })
    }

    /// The circuit-file spelling.
    pub fn name(&self) -> &'static str {
        match self {
            Self::I => "I",
            Self::X => "X",
            Self::Y => "Y",
            Self::Z => "Z",
            Self::H => "H",
            Self::S => "S",
            Self::T => "T",
            Self::Rx => "RX",
            Self::Ry => "RY",
            Self::Rz => "RZ",
            Self::Cx => "CX",
            Self::Cz => "CZ",
            Self::Swap => "SWAP",
            Self::Cnx => "CNX",
            Self::Cnh => "CNH",
            Self::Cntoff => "CNTOFF",
            Self::Custom => "CUSTOM",
        }
    }

    /// Number of angle parameters the gate takes.
    pub fn n_params(&self) -> usize {
        match self {
            Self::Rx | Self::Ry | Self::Rz => 1,
            _ => 0,
        }
    }
}

/// A user-supplied gate: where it came from plus its (validated) matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomGate {
    /// Path or label the matrix was loaded from; used when serializing.
    pub source: String,
    /// The unitary itself, `2^k`-dimensional.
    pub matrix: ComplexMatrix,
}

/// One gate application: kind, parameters, and register qubits
/// (controls first for the controlled families).
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    pub kind: GateKind,
    pub params: Vec<f64>,
    pub qubits: Vec<usize>,
    pub custom: Option<CustomGate>,
}

impl GateSpec {
    /// A parameter-free standard gate on the given qubits.
    pub fn simple(kind: GateKind, qubits: Vec<usize>) -> Self {
        Self {
            kind,
            params: Vec::new(),
            qubits,
            custom: None,
        }
    }

    /// A one-parameter rotation gate.
    pub fn with_param(kind: GateKind, param: f64, qubits: Vec<usize>) -> Self {
        Self {
            kind,
            params: vec![param],
            qubits,
            custom: None,
        }
    }

    /// A custom-matrix gate.
    pub fn custom(source: impl Into<String>, matrix: ComplexMatrix, qubits: Vec<usize>) -> Self {
        Self {
            kind: GateKind::Custom,
            params: Vec::new(),
            qubits,
            custom: Some(CustomGate {
                source: source.into(),
                matrix,
            }),
        }
    }

    /// Number of qubits the gate acts on.
    pub fn arity(&self) -> usize {
        self.qubits.len()
    }

    /// Checks parameter count and qubit-count constraints for the kind.
    pub fn validate(&self) -> Result<()> {
        let expected_params = self.kind.n_params();
        if self.params.len() != expected_params {
            return Err(Error::BadParamCount {
                gate: self.kind.name().to_string(),
                expected: expected_params,
                got: self.params.len(),
            });
        }
        let arity_ok = match self.kind {
            GateKind::I
            | GateKind::X
            | GateKind::Y
            | GateKind::Z
            | GateKind::H
            | GateKind::S
            | GateKind::T
            | GateKind::Rx
            | GateKind::Ry
            | GateKind::Rz => self.qubits.len() == 1,
            GateKind::Cx | GateKind::Cz | GateKind::Swap => self.qubits.len() == 2,
            GateKind::Cnx | GateKind::Cnh => !self.qubits.is_empty(),
            GateKind::Cntoff => self.qubits.len() >= 3,
            GateKind::Custom => {
                let gate = self.custom.as_ref().ok_or_else(|| {
                    Error::InvalidInput("custom gate is missing its matrix".into())
                })?;
                let expected = gate.matrix.n_qubits()?;
                if self.qubits.len() != expected {
                    return Err(Error::DimMismatch {
                        left: self.qubits.len(),
                        right: expected,
                        context: "custom gate qubit count vs matrix dimension",
                    });
                }
                true
            }
        };
        if !arity_ok {
            return Err(Error::InvalidInput(format!(
                "gate {} cannot act on {} qubit(s)",
                self.kind.name(),
                self.qubits.len()
            )));
        }
        Ok(())
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single_qubit(rows: [[Complex64; 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |i, j| rows[i][j])
}

/// The matrix of a gate on its own qubits (`2^arity` dimensional).
///
/// Controls of the `Cnx`/`Cnh`/`Cntoff` families occupy the most
/// significant bits, so the non-identity block sits in the lower-right
/// corner. Custom gates are validated as unitary here.
pub fn standard_gate(spec: &GateSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let matrix = match spec.kind {
        GateKind::I => ComplexMatrix::identity(2),
        GateKind::X => single_qubit([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]),
        GateKind::Y => single_qubit([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]),
        GateKind::Z => single_qubit([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]),
        GateKind::H => single_qubit([
            [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
            [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)],
        ]),
        GateKind::S => single_qubit([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]]),
        GateKind::T => single_qubit([
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), Complex64::from_polar(1.0, PI / 4.0)],
        ]),
        GateKind::Rx => {
            let half = spec.params[0] / 2.0;
            single_qubit([
                [c(half.cos(), 0.0), c(0.0, -half.sin())],
                [c(0.0, -half.sin()), c(half.cos(), 0.0)],
            ])
        }
        GateKind::Ry => {
            let half = spec.params[0] / 2.0;
            single_qubit([
                [c(half.cos(), 0.0), c(-half.sin(), 0.0)],
                [c(half.sin(), 0.0), c(half.cos(), 0.0)],
            ])
        }
        GateKind::Rz => {
            let half = spec.params[0] / 2.0;
            single_qubit([
                [Complex64::from_polar(1.0, -half), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex64::from_polar(1.0, half)],
            ])
        }
        GateKind::Cx => controlled(&standard_gate(&GateSpec::simple(GateKind::X, vec![0]))?, 1)?,
        GateKind::Cz => controlled(&standard_gate(&GateSpec::simple(GateKind::Z, vec![0]))?, 1)?,
        GateKind::Swap => {
            let mut m = ComplexMatrix::zeros(4);
            m.set(0, 0, c(1.0, 0.0));
            m.set(1, 2, c(1.0, 0.0));
            m.set(2, 1, c(1.0, 0.0));
            m.set(3, 3, c(1.0, 0.0));
            m
        }
        GateKind::Cnx | GateKind::Cntoff => {
            let x = standard_gate(&GateSpec::simple(GateKind::X, vec![0]))?;
            controlled(&x, spec.qubits.len() - 1)?
        }
        GateKind::Cnh => {
            let h = standard_gate(&GateSpec::simple(GateKind::H, vec![0]))?;
            controlled(&h, spec.qubits.len() - 1)?
        }
        GateKind::Custom => {
            let gate = spec
                .custom
                .as_ref()
                .expect("validate() guarantees the matrix is present");
            require_unitary(&gate.matrix, tol::STRUCTURAL)?;
            gate.matrix.clone()
        }
    };
    Ok(matrix)
}

/// Adds `n_controls` control qubits (as the most significant qubits) to a
/// unitary: the result applies `u` exactly when every control is `|1⟩`.
pub fn controlled(u: &ComplexMatrix, n_controls: usize) -> Result<ComplexMatrix> {
    require_unitary(u, tol::STRUCTURAL)?;
    u.n_qubits()?;
    let d = u.dim();
    let factor = 1usize
        .checked_shl(n_controls as u32)
        .and_then(|f| f.checked_mul(d))
        .ok_or_else(|| Error::TooLarge(format!("{n_controls} controls on dimension {d}")))?;
    let mut out = ComplexMatrix::identity(factor);
    let base = factor - d;
    for i in 0..d {
        for j in 0..d {
            out.set(base + i, base + j, u.get(i, j));
        }
    }
    Ok(out)
}

/// Lifts a `2^k`-dimensional gate onto qubits `qubits` of an `n_qubits`
/// register: gate qubit `t` (bit `k−1−t` of the gate index) lands on
/// register qubit `qubits[t]`.
pub fn embed(gate: &ComplexMatrix, qubits: &[usize], n_qubits: usize) -> Result<ComplexMatrix> {
    let k = qubits.len();
    let gate_dim = gate.dim();
    if gate_dim != 1usize << k {
        return Err(Error::DimMismatch {
            left: gate_dim,
            right: 1usize << k,
            context: "gate dimension vs qubit count",
        });
    }
    for (i, &q) in qubits.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::BadIndex {
                index: q,
                n_qubits,
            });
        }
        if qubits[..i].contains(&q) {
            return Err(Error::InvalidInput(format!(
                "qubit {q} appears twice in gate placement"
            )));
        }
    }
    if n_qubits > 20 {
        return Err(Error::TooLarge(format!(
            "dense embedding on {n_qubits} qubits"
        )));
    }

    let full_dim = 1usize << n_qubits;
    let rest: Vec<usize> = (0..n_qubits).filter(|q| !qubits.contains(q)).collect();

    let scatter = |value: usize, positions: &[usize]| -> usize {
        let mut full = 0usize;
        for (t, &q) in positions.iter().enumerate() {
            let bit = (value >> (positions.len() - 1 - t)) & 1;
            full |= bit << (n_qubits - 1 - q);
        }
        full
    };

    let mut out = ComplexMatrix::zeros(full_dim);
    for r in 0..(1usize << rest.len()) {
        let common = scatter(r, &rest);
        for a in 0..gate_dim {
            let row = scatter(a, qubits) | common;
            for b in 0..gate_dim {
                let col = scatter(b, qubits) | common;
                out.set(row, col, gate.get(a, b));
            }
        }
    }
    Ok(out)
}
