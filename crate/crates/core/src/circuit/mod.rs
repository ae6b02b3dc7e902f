//! Circuit IR: controlled single-qubit gates on `w` wires.
//!
//! Gates are stored in application order (index 0 acts first). Wire 0 is
//! the most significant bit of the matrix index.

mod census;
mod eval;
mod lower;
mod synth;
mod text;

pub use census::{census, gate_counts, gate_counts_for, GateCensus, GateCounts};
pub use eval::{apply_gate, evaluate_circuit};
pub use lower::{lower_circuit, lower_u2_to_negator_phasor};
pub use synth::{
    emit_negator_fan, synthesize, synthesize_with_report, Lowering, Synthesis, SynthesisOptions,
};
pub use text::{format_circuit, parse_circuit, to_qasm};

use num_complex::Complex64;

use crate::decompose::{negator2, phasor2};
use crate::error::{Error, Result};
use crate::linalg::{hadamard2, Mat2, ONE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Fires on |1>.
    Positive,
    /// Fires on |0>.
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Control {
    pub wire: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn positive(wire: usize) -> Self {
        Self {
            wire,
            polarity: Polarity::Positive,
        }
    }

    pub fn negative(wire: usize) -> Self {
        Self {
            wire,
            polarity: Polarity::Negative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    Hadamard,
    /// Generic 2x2 unitary payload.
    U2(Mat2),
    /// `½[[1+c, 1−c], [1−c, 1+c]]`.
    Negator(Complex64),
    /// `diag(1, d)`.
    Phasor(Complex64),
    Not,
    Identity,
}

impl GateKind {
    pub fn matrix(&self) -> Mat2 {
        match *self {
            GateKind::Hadamard => hadamard2(),
            GateKind::U2(m) => m,
            GateKind::Negator(c) => negator2(c),
            GateKind::Phasor(d) => phasor2(d),
            GateKind::Not => negator2(-ONE),
            GateKind::Identity => Mat2::identity(),
        }
    }

    /// True if the payload is the identity within `tol` (max entry error).
    pub fn is_identity(&self, tol: f64) -> bool {
        match *self {
            GateKind::Identity => true,
            GateKind::Hadamard | GateKind::Not => false,
            GateKind::Negator(z) | GateKind::Phasor(z) => (z - ONE).norm() <= tol,
            GateKind::U2(m) => (m - Mat2::identity()).iter().all(|e| e.norm() <= tol),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<Control>,
}

impl Gate {
    pub fn new(kind: GateKind, target: usize) -> Self {
        Self {
            kind,
            target,
            controls: Vec::new(),
        }
    }

    pub fn controlled(kind: GateKind, target: usize, controls: Vec<Control>) -> Self {
        Self {
            kind,
            target,
            controls,
        }
    }

    fn check(&self, wires: usize) -> Result<()> {
        if self.target >= wires {
            return Err(Error::InvalidOptions(format!(
                "target wire {} out of range for {wires} wires",
                self.target
            )));
        }
        let mut seen = vec![false; wires];
        seen[self.target] = true;
        for c in &self.controls {
            if c.wire >= wires {
                return Err(Error::InvalidOptions(format!(
                    "control wire {} out of range for {wires} wires",
                    c.wire
                )));
            }
            if std::mem::replace(&mut seen[c.wire], true) {
                return Err(Error::InvalidOptions(format!(
                    "wire {} used twice in one gate",
                    c.wire
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    wires: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(wires: usize) -> Self {
        Self {
            wires,
            gates: Vec::new(),
        }
    }

    /// Validates wire indices and appends.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.check(self.wires)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn from_gates(wires: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(wires);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub(crate) fn push_unchecked(&mut self, gate: Gate) {
        debug_assert!(gate.check(self.wires).is_ok());
        self.gates.push(gate);
    }
}
