use super::{Circuit, Gate, Polarity};
use crate::linalg::CMatrix;

/// Left-multiplies `m` (rows indexed by basis states) by the full
/// `2^w`-dimensional matrix of `gate`.
pub fn apply_gate(m: &mut CMatrix, gate: &Gate, wires: usize) {
    let g = gate.kind.matrix();
    let bit = |wire: usize| 1usize << (wires - 1 - wire);
    let target = bit(gate.target);
    let (mut must_set, mut must_clear) = (0usize, 0usize);
    for c in &gate.controls {
        match c.polarity {
            Polarity::Positive => must_set |= bit(c.wire),
            Polarity::Negative => must_clear |= bit(c.wire),
        }
    }
    let n = 1usize << wires;
    for r0 in 0..n {
        if r0 & target != 0 || r0 & must_set != must_set || r0 & must_clear != 0 {
            continue;
        }
        let r1 = r0 | target;
        for col in 0..m.ncols() {
            let (x0, x1) = (m[(r0, col)], m[(r1, col)]);
            m[(r0, col)] = g[(0, 0)] * x0 + g[(0, 1)] * x1;
            m[(r1, col)] = g[(1, 0)] * x0 + g[(1, 1)] * x1;
        }
    }
}

/// The unitary implemented by the circuit: the product of gate matrices
/// with the last gate as leftmost factor.
pub fn evaluate_circuit(c: &Circuit) -> CMatrix {
    let n = 1usize << c.wires();
    let mut m = CMatrix::identity(n, n);
    for g in c.gates() {
        apply_gate(&mut m, g, c.wires());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Control, GateKind};
    use crate::linalg::{block_diag, frobenius_distance, hadamard2, random_unitary, Mat2};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn to_dyn(m: &Mat2) -> CMatrix {
        CMatrix::from_fn(2, 2, |r, c| m[(r, c)])
    }

    #[test]
    fn single_hadamard() {
        let c = Circuit::from_gates(1, vec![Gate::new(GateKind::Hadamard, 0)]).unwrap();
        assert_eq!(evaluate_circuit(&c), to_dyn(&hadamard2()));
    }

    #[test]
    fn positive_control_is_block_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let d = random_unitary(2, &mut rng).as_mat2().unwrap();
        let c = Circuit::from_gates(
            2,
            vec![Gate::controlled(GateKind::U2(d), 1, vec![Control::positive(0)])],
        )
        .unwrap();
        let want = block_diag(&CMatrix::identity(2, 2), &to_dyn(&d));
        assert!(frobenius_distance(&evaluate_circuit(&c), &want).unwrap() < 1e-15);
    }

    #[test]
    fn negative_control_selects_zero_branch() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let a = random_unitary(2, &mut rng).as_mat2().unwrap();
        let c = Circuit::from_gates(
            2,
            vec![Gate::controlled(GateKind::U2(a), 1, vec![Control::negative(0)])],
        )
        .unwrap();
        let want = block_diag(&to_dyn(&a), &CMatrix::identity(2, 2));
        assert!(frobenius_distance(&evaluate_circuit(&c), &want).unwrap() < 1e-15);
    }

    #[test]
    fn target_below_control_uses_kronecker_layout() {
        // NOT on wire 1 of two wires is I ⊗ X
        let c = Circuit::from_gates(2, vec![Gate::new(GateKind::Not, 1)]).unwrap();
        let m = evaluate_circuit(&c);
        for (r, col) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            assert_eq!(m[(r, col)].re, 1.0);
        }
    }

    #[test]
    fn gate_order_is_application_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let g1 = random_unitary(2, &mut rng).as_mat2().unwrap();
        let g2 = random_unitary(2, &mut rng).as_mat2().unwrap();
        let c = Circuit::from_gates(1, vec![Gate::new(GateKind::U2(g1), 0), Gate::new(GateKind::U2(g2), 0)]).unwrap();
        assert!(frobenius_distance(&evaluate_circuit(&c), &to_dyn(&(g2 * g1))).unwrap() < 1e-15);
    }
}
