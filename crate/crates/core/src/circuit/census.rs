use super::{Circuit, GateKind};
use crate::decompose::Form;
use crate::linalg::{I, ONE};

/// Observed gate counts by kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GateCensus {
    pub hadamard: usize,
    /// U2 payloads.
    pub generic: usize,
    /// Negators other than NOT and identity.
    pub negator: usize,
    pub not: usize,
    pub phasor: usize,
    /// Identity gates still present in the circuit.
    pub identity: usize,
    /// Negators with `c = ±i`.
    pub sqrt_not: usize,
    /// Identity gates dropped during synthesis or lowering.
    pub elided: usize,
}

impl GateCensus {
    /// All negator gates, NOTs included.
    pub fn negators_total(&self) -> usize {
        self.negator + self.not
    }

    /// Real parameters carried by the circuit: four per U2 payload and one
    /// phase per negator or phasor.
    pub fn parameters(&self) -> usize {
        4 * self.generic + self.negator + self.phasor
    }

    pub fn total(&self) -> usize {
        self.hadamard + self.generic + self.negator + self.not + self.phasor + self.identity
    }
}

pub fn census(c: &Circuit) -> GateCensus {
    let mut out = GateCensus::default();
    for g in c.gates() {
        match g.kind {
            GateKind::Hadamard => out.hadamard += 1,
            GateKind::U2(_) => out.generic += 1,
            GateKind::Negator(z) => {
                out.negator += 1;
                if (z - I).norm() < 1e-12 || (z + I).norm() < 1e-12 {
                    out.sqrt_not += 1;
                }
                if (z - ONE).norm() < 1e-12 {
                    out.identity += 1;
                    out.negator -= 1;
                }
            }
            GateKind::Phasor(_) => out.phasor += 1,
            GateKind::Not => out.not += 1,
            GateKind::Identity => out.identity += 1,
        }
    }
    out
}

/// Predicted counts for a full recursive synthesis on `w` wires.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateCounts {
    /// Hadamard gates.
    pub h: u64,
    /// Non-Hadamard (U2) gates.
    pub g: u64,
    /// Negators after lowering, NOTs included.
    pub negators: u64,
    pub nots: u64,
    pub sqrt_nots: u64,
    pub phasors: u64,
}

/// `h = 2(4^{w−1} − 1)/3`, `g = 4^{w−1}` for the block-ZXZ recursion.
pub fn gate_counts(w: u32) -> GateCounts {
    gate_counts_for(Form::Bzxz, w)
}

/// The dual form uses four Hadamards per level instead of two, so its
/// Hadamard count is twice the block-ZXZ one.
pub fn gate_counts_for(form: Form, w: u32) -> GateCounts {
    assert!(w >= 1, "at least one wire");
    let g = 4u64.pow(w - 1);
    let mut h = 2 * (g - 1) / 3;
    if form == Form::Bxzx {
        h *= 2;
    }
    GateCounts {
        h,
        g,
        negators: 3 * h + 3 * g,
        nots: 2 * h + 2 * g,
        sqrt_nots: h,
        phasors: 3 * h + 3 * g,
    }
}
