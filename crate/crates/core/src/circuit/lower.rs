use super::{Circuit, Gate, GateKind};
use crate::decompose::{scalar_zxz, u2_parameters, Variant};
use crate::error::Result;
use crate::linalg::{Mat2, ONE};

/// Payloads within this distance of the identity are dropped by lowering.
pub(crate) const ELIDE_TOL: f64 = 1e-12;

/// Six single-qubit gates in application order,
/// `[Phasor(d), Negator(c), Phasor(b), Not, Phasor(a), Not]`, whose product
/// `X·P(a)·X·P(b)·N(c)·P(d)` equals `m`.
pub fn lower_u2_to_negator_phasor(m: &Mat2, variant: Variant) -> Result<[GateKind; 6]> {
    let f = scalar_zxz(&u2_parameters(m)?, variant);
    Ok([
        GateKind::Phasor(f.d),
        negator_kind(f.c),
        GateKind::Phasor(f.b),
        GateKind::Not,
        GateKind::Phasor(f.a),
        GateKind::Not,
    ])
}

/// `Negator(−1)` is reported as `Not` and `Negator(1)` as `Identity`.
pub(crate) fn negator_kind(c: num_complex::Complex64) -> GateKind {
    if (c + ONE).norm() <= ELIDE_TOL {
        GateKind::Not
    } else if (c - ONE).norm() <= ELIDE_TOL {
        GateKind::Identity
    } else {
        GateKind::Negator(c)
    }
}

/// Replaces every U2 and Hadamard gate by its six-gate cascade, keeping the
/// controls. Cascade members that are identities are dropped; the second
/// value is how many were dropped.
pub fn lower_circuit(c: &Circuit, variant: Variant) -> Result<(Circuit, usize)> {
    let mut out = Circuit::new(c.wires());
    let mut elided = 0;
    for g in c.gates() {
        let payload = match g.kind {
            GateKind::U2(m) => m,
            GateKind::Hadamard => crate::linalg::hadamard2(),
            _ => {
                out.push_unchecked(g.clone());
                continue;
            }
        };
        for kind in lower_u2_to_negator_phasor(&payload, variant)? {
            if kind.is_identity(ELIDE_TOL) {
                elided += 1;
                continue;
            }
            out.push_unchecked(Gate::controlled(kind, g.target, g.controls.clone()));
        }
    }
    Ok((out, elided))
}
