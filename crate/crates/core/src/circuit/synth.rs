use num_complex::Complex64;

use super::census::{census, GateCensus};
use super::lower::{lower_circuit, negator_kind, ELIDE_TOL};
use super::{Circuit, Control, Gate, GateKind};
use crate::classical::{classical_synthesis, is_permutation};
use crate::decompose::{
    block_zxz_matrix, dual_block_xzx_matrix, DecomposeOptions, Fallback, Form, Variant,
};
use crate::error::{Error, Result};
use crate::linalg::{off_diagonal_max, CMatrix, Mat2, UnitaryMatrix};

/// How U2 payloads end up in the emitted circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Lowering {
    /// Keep generic 2x2 payloads.
    #[default]
    U2,
    /// Expand every U2 and Hadamard gate into PHASOR/NEGATOR/NOT cascades.
    NegatorPhasor,
    /// Permutation matrices go through the exact classical path; anything
    /// else is synthesized as with [`Lowering::U2`].
    ClassicalAuto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisOptions {
    pub form: Form,
    pub variant: Variant,
    pub lowering: Lowering,
    pub decompose: DecomposeOptions,
    /// Emit a controlled-negator fan for diagonal middle factors instead of
    /// Hadamard-sandwiched recursion.
    pub diagonal_fan: bool,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self {
            form: Form::Bzxz,
            variant: Variant::V1,
            lowering: Lowering::U2,
            decompose: DecomposeOptions::default(),
            diagonal_fan: true,
        }
    }
}

/// A synthesized circuit plus what happened on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Synthesis {
    pub circuit: Circuit,
    /// Seeds of every preconditioning fallback that fired, in emission order.
    pub preconditioned: Vec<u64>,
    /// Number of factorizations that needed the all-spectral retry.
    pub spectral_fallbacks: usize,
    /// Diagonal middle factors emitted as negator fans.
    pub fans: usize,
    /// Identity gates dropped.
    pub elided: usize,
    /// Produced by the exact permutation path.
    pub classical: bool,
}

impl Synthesis {
    pub(crate) fn empty(wires: usize) -> Self {
        Self {
            circuit: Circuit::new(wires),
            preconditioned: Vec::new(),
            spectral_fallbacks: 0,
            fans: 0,
            elided: 0,
            classical: false,
        }
    }

    /// Census of the circuit with the elided count filled in.
    pub fn census(&self) -> GateCensus {
        let mut c = census(&self.circuit);
        c.elided = self.elided;
        c
    }

    pub fn preconditioning_fired(&self) -> bool {
        !self.preconditioned.is_empty()
    }
}

pub fn synthesize(u: &UnitaryMatrix, opts: &SynthesisOptions) -> Result<Circuit> {
    synthesize_with_report(u, opts).map(|s| s.circuit)
}

/// Recursive synthesis of a `2^w`-dimensional unitary on `w` wires.
pub fn synthesize_with_report(u: &UnitaryMatrix, opts: &SynthesisOptions) -> Result<Synthesis> {
    opts.decompose.validate()?;
    let n = u.dim();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let wires = n.trailing_zeros() as usize;
    if opts.lowering == Lowering::ClassicalAuto && is_permutation(u.entries(), 1e-12).is_permutation {
        return classical_synthesis(u);
    }
    let mut s = Synthesis::empty(wires);
    emit(&mut s, u.entries(), 0, &[], opts)?;
    if opts.lowering == Lowering::NegatorPhasor {
        let (lowered, elided) = lower_circuit(&s.circuit, opts.variant)?;
        s.circuit = lowered;
        s.elided += elided;
    }
    Ok(s)
}

fn mat2(m: &CMatrix) -> Mat2 {
    Mat2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
}

fn with(ctrls: &[Control], c: Control) -> Vec<Control> {
    let mut v = ctrls.to_vec();
    v.push(c);
    v
}

fn push(s: &mut Synthesis, kind: GateKind, target: usize, ctrls: &[Control]) {
    if kind.is_identity(ELIDE_TOL) {
        s.elided += 1;
    } else {
        s.circuit
            .push_unchecked(Gate::controlled(kind, target, ctrls.to_vec()));
    }
}

fn emit(
    s: &mut Synthesis,
    u: &CMatrix,
    top: usize,
    ctrls: &[Control],
    opts: &SynthesisOptions,
) -> Result<()> {
    if u.nrows() == 2 {
        push(s, GateKind::U2(mat2(u)), top, ctrls);
        return Ok(());
    }
    let f = match opts.form {
        Form::Bzxz => block_zxz_matrix(u, opts.variant, &opts.decompose)?,
        Form::Bxzx => dual_block_xzx_matrix(u, opts.variant, &opts.decompose)?,
    };
    match f.fallback {
        Fallback::None => {}
        Fallback::Spectral => s.spectral_fallbacks += 1,
        Fallback::Preconditioned => {}
    }
    if let Some(pc) = &f.preconditioning {
        s.preconditioned.push(pc.seed);
        push(s, GateKind::U2(pc.right), top, ctrls);
    }
    let pos = with(ctrls, Control::positive(top));
    let neg = with(ctrls, Control::negative(top));
    let below = top + 1;
    let (a, b, c, d) = (f.a.entries(), f.b.entries(), f.c.entries(), f.d.entries());
    match opts.form {
        Form::Bzxz => {
            emit(s, d, below, &pos, opts)?;
            negator_block(s, c, top, ctrls, opts)?;
            emit(s, b, below, &pos, opts)?;
            emit(s, a, below, &neg, opts)?;
        }
        Form::Bxzx => {
            negator_block(s, d, top, ctrls, opts)?;
            emit(s, c, below, &pos, opts)?;
            emit(s, b, below, &neg, opts)?;
            negator_block(s, a, top, ctrls, opts)?;
        }
    }
    if let Some(pc) = &f.preconditioning {
        push(s, GateKind::U2(pc.left), top, ctrls);
    }
    Ok(())
}

/// Emits `N(x)` acting on wires `top..`: a negator fan when `x` is diagonal,
/// otherwise `H · controlled-x · H` on the top wire.
fn negator_block(
    s: &mut Synthesis,
    x: &CMatrix,
    top: usize,
    ctrls: &[Control],
    opts: &SynthesisOptions,
) -> Result<()> {
    if opts.diagonal_fan && off_diagonal_max(x) <= ELIDE_TOL {
        let entries: Vec<Complex64> = x.diagonal().iter().copied().collect();
        let lower: Vec<usize> = (top + 1..top + 1 + x.nrows().trailing_zeros() as usize).collect();
        let (gates, elided) = emit_negator_fan(&entries, top, &lower, ctrls);
        for g in gates {
            s.circuit.push_unchecked(g);
        }
        s.elided += elided;
        s.fans += 1;
        return Ok(());
    }
    s.circuit
        .push_unchecked(Gate::controlled(GateKind::Hadamard, top, ctrls.to_vec()));
    emit(s, x, top + 1, &with(ctrls, Control::positive(top)), opts)?;
    s.circuit
        .push_unchecked(Gate::controlled(GateKind::Hadamard, top, ctrls.to_vec()));
    Ok(())
}

/// Negators on `target`, one per diagonal entry, selected by the bit
/// pattern of `control_wires` (first wire most significant). Runs of equal
/// entries sharing a control prefix merge into one gate; identity gates are
/// dropped and counted in the second value.
///
/// Panics if `entries.len() != 2^control_wires.len()`.
pub fn emit_negator_fan(
    entries: &[Complex64],
    target: usize,
    control_wires: &[usize],
    controls: &[Control],
) -> (Vec<Gate>, usize) {
    assert_eq!(entries.len(), 1usize << control_wires.len(), "fan size");
    let mut out = Vec::new();
    let mut elided = 0;
    fan(entries, target, control_wires, controls.to_vec(), &mut out, &mut elided);
    (out, elided)
}

fn fan(
    entries: &[Complex64],
    target: usize,
    wires: &[usize],
    ctrls: Vec<Control>,
    out: &mut Vec<Gate>,
    elided: &mut usize,
) {
    let first = entries[0];
    if entries.iter().all(|z| (z - first).norm() <= ELIDE_TOL) {
        match negator_kind(first) {
            GateKind::Identity => *elided += 1,
            kind => out.push(Gate::controlled(kind, target, ctrls)),
        }
        return;
    }
    let (lo, hi) = entries.split_at(entries.len() / 2);
    fan(lo, target, &wires[1..], with(&ctrls, Control::negative(wires[0])), out, elided);
    fan(hi, target, &wires[1..], with(&ctrls, Control::positive(wires[0])), out, elided);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{evaluate_circuit, gate_counts};
    use crate::linalg::{frobenius_distance, negator_block as nblock, random_unitary, I, ONE};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_wire_hadamard() {
        let c = synthesize(&UnitaryMatrix::hadamard(), &SynthesisOptions::default()).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c.gates()[0].controls.is_empty());
        assert!(matches!(c.gates()[0].kind, GateKind::U2(_)));
    }

    #[test]
    fn two_wire_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let u = random_unitary(4, &mut rng);
        let s = synthesize_with_report(&u, &SynthesisOptions::default()).unwrap();
        let k = s.census();
        assert_eq!((k.hadamard, k.generic), (2, 4));
        let kinds: Vec<_> = s.circuit.gates().iter().map(|g| (g.kind == GateKind::Hadamard, g.controls.clone())).collect();
        assert_eq!(kinds[0].1, vec![Control::positive(0)]);
        assert!(kinds[1].0 && kinds[1].1.is_empty());
        assert!(kinds[3].0 && kinds[3].1.is_empty());
        assert_eq!(kinds[5].1, vec![Control::negative(0)]);
        assert!(frobenius_distance(&evaluate_circuit(&s.circuit), u.entries()).unwrap() < 4e-8);
    }

    #[test]
    fn three_wire_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let u = random_unitary(8, &mut rng);
        let s = synthesize_with_report(&u, &SynthesisOptions::default()).unwrap();
        let k = s.census();
        let want = gate_counts(3);
        assert_eq!((k.hadamard as u64, k.generic as u64), (want.h, want.g));
        assert!(frobenius_distance(&evaluate_circuit(&s.circuit), u.entries()).unwrap() < 8e-8);
    }

    #[test]
    fn rejects_non_power_of_two() {
        let u = UnitaryMatrix::identity(6);
        assert!(matches!(
            synthesize(&u, &SynthesisOptions::default()),
            Err(Error::NotPowerOfTwo(6))
        ));
    }

    #[test]
    fn uniform_fan_merges_to_one_gate() {
        let (g, e) = emit_negator_fan(&[-ONE; 4], 0, &[1, 2], &[]);
        assert_eq!(g, vec![Gate::new(GateKind::Not, 0)]);
        assert_eq!(e, 0);
        let (g, e) = emit_negator_fan(&[ONE; 8], 0, &[1, 2, 3], &[]);
        assert!(g.is_empty());
        assert_eq!(e, 1);
    }

    #[test]
    fn fan_matches_negator_block() {
        let entries = [I, -ONE, ONE, -I];
        let (gates, elided) = emit_negator_fan(&entries, 0, &[1, 2], &[]);
        assert_eq!(elided, 1);
        let c = Circuit::from_gates(3, gates).unwrap();
        let want = nblock(&CMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&entries)));
        assert!(frobenius_distance(&evaluate_circuit(&c), &want).unwrap() < 1e-15);
    }

    #[test]
    fn flipping_a_branch_polarity_is_detectable() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let u = random_unitary(4, &mut rng);
        let c = synthesize(&u, &SynthesisOptions::default()).unwrap();
        let mut gates = c.gates().to_vec();
        let last = gates.last_mut().unwrap();
        last.controls[0] = Control::positive(0);
        let flipped = Circuit::from_gates(2, gates).unwrap();
        assert!(frobenius_distance(&evaluate_circuit(&flipped), u.entries()).unwrap() > 0.1);
    }
}
