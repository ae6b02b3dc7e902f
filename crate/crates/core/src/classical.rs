//! Permutation matrices: detection, the exact block split into four
//! half-size permutations, and NOT-only circuits.
//!
//! The split runs on monomial matrices whose entries are powers of `i`, so
//! the arithmetic is exact. Polar factors of a block of a permutation
//! matrix are a 0/1 diagonal `P` and a completed monomial `V`; empty rows
//! are paired with empty columns in ascending order and filled with `−i`
//! (top-left block) or `+i` (top-right block).

use crate::circuit::{emit_negator_fan, Circuit, Control, Gate, GateKind, Synthesis};
use crate::decompose::{BlockFactors, Fallback, Form, Variant};
use crate::error::{Error, Result};
use crate::linalg::{frobenius_distance, CMatrix, UnitaryMatrix, ONE};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationProfile {
    pub is_permutation: bool,
    /// `mapping[col]` is the row holding the 1 of that column; empty when
    /// the matrix is not a permutation.
    pub mapping: Vec<usize>,
}

/// Every entry within `tol` of 0 or 1 and exactly one 1 per row and column.
pub fn is_permutation(u: &CMatrix, tol: f64) -> PermutationProfile {
    let no = PermutationProfile {
        is_permutation: false,
        mapping: Vec::new(),
    };
    if !u.is_square() {
        return no;
    }
    let n = u.nrows();
    let mut mapping = vec![usize::MAX; n];
    let mut row_used = vec![false; n];
    for c in 0..n {
        for r in 0..n {
            let z = u[(r, c)];
            if (z - ONE).norm() <= tol {
                if mapping[c] != usize::MAX || row_used[r] {
                    return no;
                }
                mapping[c] = r;
                row_used[r] = true;
            } else if z.norm() > tol {
                return no;
            }
        }
        if mapping[c] == usize::MAX {
            return no;
        }
    }
    PermutationProfile {
        is_permutation: true,
        mapping,
    }
}

/// A bijection of `0..n` read as a matrix with a 1 at `(mapping[c], c)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn from_mapping(mapping: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; mapping.len()];
        for &r in &mapping {
            if r >= mapping.len() || std::mem::replace(&mut seen[r], true) {
                return Err(Error::NotPermutation);
            }
        }
        Ok(Self { mapping })
    }

    pub fn from_matrix(u: &CMatrix) -> Result<Self> {
        let p = is_permutation(u, 1e-12);
        if !p.is_permutation {
            return Err(Error::NotPermutation);
        }
        Ok(Self { mapping: p.mapping })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mapping: (0..n).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.mapping.len()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(c, &r)| c == r)
    }

    pub fn matrix(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for (c, &r) in self.mapping.iter().enumerate() {
            m[(r, c)] = ONE;
        }
        m
    }

    /// `self · other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            mapping: other.mapping.iter().map(|&r| self.mapping[r]).collect(),
        }
    }
}

/// Column-indexed sparse matrix with at most one entry `i^phase` per
/// column. Phases live in Z4.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Monomial(Vec<Option<(usize, u8)>>);

impl Monomial {
    fn diagonal(phases: &[u8]) -> Self {
        Monomial(phases.iter().enumerate().map(|(k, &p)| Some((k, p % 4))).collect())
    }

    fn mul(&self, rhs: &Monomial) -> Monomial {
        Monomial(
            rhs.0
                .iter()
                .map(|e| {
                    let (r, p) = (*e)?;
                    let (r2, p2) = self.0[r]?;
                    Some((r2, (p + p2) % 4))
                })
                .collect(),
        )
    }

    fn adjoint(&self) -> Monomial {
        let mut out = vec![None; self.0.len()];
        for (c, e) in self.0.iter().enumerate() {
            if let Some((r, p)) = *e {
                out[r] = Some((c, (4 - p) % 4));
            }
        }
        Monomial(out)
    }

    fn scale(&self, phase: u8) -> Monomial {
        Monomial(self.0.iter().map(|e| e.map(|(r, p)| (r, (p + phase) % 4))).collect())
    }

    fn weight(&self) -> usize {
        self.0.iter().filter(|e| e.is_some()).count()
    }

    fn row_occupied(&self) -> Vec<bool> {
        let mut occ = vec![false; self.0.len()];
        for (r, _) in self.0.iter().flatten() {
            occ[*r] = true;
        }
        occ
    }

    /// Fills empty rows with `i^phase`, pairing them with empty columns in
    /// ascending order.
    fn complete(&self, phase: u8) -> Monomial {
        let occ = self.row_occupied();
        let mut free_rows = (0..occ.len()).filter(|&r| !occ[r]);
        Monomial(
            self.0
                .iter()
                .map(|e| e.or_else(|| free_rows.next().map(|r| (r, phase))))
                .collect(),
        )
    }

    /// A real permutation, if every column is filled with phase 0.
    fn to_permutation(&self) -> Option<Permutation> {
        let mapping = self
            .0
            .iter()
            .map(|e| match e {
                Some((r, 0)) => Some(*r),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Permutation::from_mapping(mapping).ok()
    }
}

/// `A, B, D` permutations and `C = diag(±1)` (true means −1).
#[derive(Debug, Clone, PartialEq, Eq)]
struct ExactSplit {
    a: Permutation,
    b: Permutation,
    c: Vec<bool>,
    d: Permutation,
}

const MINUS_I: u8 = 3;
const PLUS_I: u8 = 1;

fn split_exact(p: &Permutation) -> Result<ExactSplit> {
    let n = p.dim();
    if !n.is_multiple_of(2) {
        return Err(Error::OddDimension(n));
    }
    let h = n / 2;
    let block = |rows_hi: bool, cols_hi: bool| {
        let off = if cols_hi { h } else { 0 };
        Monomial(
            (0..h)
                .map(|c| {
                    let r = p.mapping[c + off];
                    match (rows_hi, r >= h) {
                        (false, false) => Some((r, 0)),
                        (true, true) => Some((r - h, 0)),
                        _ => None,
                    }
                })
                .collect(),
        )
    };
    let (u11, u12, u21, u22) = (
        block(false, false),
        block(false, true),
        block(true, false),
        block(true, true),
    );
    let fail = |what: &str| Error::DecompositionFailed {
        stage: format!("exact permutation split of size {n}: {what}"),
        residual: f64::INFINITY,
        tolerance: 0.0,
    };
    if u11.weight() + u12.weight() != h {
        return Err(fail("top block weights do not add up"));
    }
    let occ11 = u11.row_occupied();
    let occ12 = u12.row_occupied();
    if occ11.iter().zip(&occ12).any(|(a, b)| a == b) {
        return Err(fail("top polar factors are not complementary"));
    }
    let v11 = u11.complete(MINUS_I);
    let v12 = u12.complete(PLUS_I);
    // P11 + i·P12 and (P11 − i·P12)²
    let left: Vec<u8> = occ11.iter().map(|&o| if o { 0 } else { 1 }).collect();
    let mid: Vec<u8> = occ11.iter().map(|&o| if o { 0 } else { 2 }).collect();
    let a = Monomial::diagonal(&left).mul(&v11);
    let c = v11.adjoint().mul(&Monomial::diagonal(&mid)).mul(&v11);
    let d = v11.adjoint().mul(&v12).scale(MINUS_I);
    // B = U21 + U22·D†
    let u22d = u22.mul(&d.adjoint());
    let b = Monomial(
        u21.0
            .iter()
            .zip(&u22d.0)
            .map(|(x, y)| match (x, y) {
                (Some(e), None) | (None, Some(e)) => Ok(Some(*e)),
                _ => Err(fail("bottom-left factor is not monomial")),
            })
            .collect::<Result<_>>()?,
    );
    let c_signs = c
        .0
        .iter()
        .enumerate()
        .map(|(k, e)| match e {
            Some((r, 0)) if *r == k => Ok(false),
            Some((r, 2)) if *r == k => Ok(true),
            _ => Err(fail("middle factor is not a ±1 diagonal")),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExactSplit {
        a: a.to_permutation().ok_or_else(|| fail("A is not a permutation"))?,
        b: b.to_permutation().ok_or_else(|| fail("B is not a permutation"))?,
        c: c_signs,
        d: d.to_permutation().ok_or_else(|| fail("D is not a permutation"))?,
    })
}

/// Block-ZXZ factors of a permutation matrix, computed exactly: `A, B, D`
/// are permutation matrices and `C` is diagonal with entries ±1.
pub fn birkhoff_block_zxz(u: &UnitaryMatrix) -> Result<BlockFactors> {
    let p = Permutation::from_matrix(u.entries())?;
    let s = split_exact(&p)?;
    let c = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        s.c.len(),
        s.c.iter().map(|&neg| if neg { -ONE } else { ONE }),
    ));
    let wrap = |m: CMatrix| UnitaryMatrix::new(m);
    let mut f = BlockFactors {
        a: wrap(s.a.matrix())?,
        b: wrap(s.b.matrix())?,
        c: wrap(c)?,
        d: wrap(s.d.matrix())?,
        form: Form::Bzxz,
        variant: Variant::V1,
        residual: 0.0,
        fallback: Fallback::None,
        preconditioning: None,
    };
    f.residual = frobenius_distance(&f.product(), u.entries())?;
    Ok(f)
}

/// Circuit of NOT gates with positive and negative controls implementing a
/// `2^w`-dimensional permutation matrix.
pub fn classical_circuit(u: &UnitaryMatrix) -> Result<Circuit> {
    classical_synthesis(u).map(|s| s.circuit)
}

/// [`classical_circuit`] with elision and fan bookkeeping.
pub fn classical_synthesis(u: &UnitaryMatrix) -> Result<Synthesis> {
    let p = Permutation::from_matrix(u.entries())?;
    permutation_synthesis(&p)
}

pub fn permutation_synthesis(p: &Permutation) -> Result<Synthesis> {
    let n = p.dim();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut s = Synthesis::empty(n.trailing_zeros() as usize);
    s.classical = true;
    emit(&mut s, p, 0, &[])?;
    Ok(s)
}

fn emit(s: &mut Synthesis, p: &Permutation, top: usize, ctrls: &[Control]) -> Result<()> {
    if p.is_identity() {
        s.elided += 1;
        return Ok(());
    }
    if p.dim() == 2 {
        s.circuit
            .push_unchecked(Gate::controlled(GateKind::Not, top, ctrls.to_vec()));
        return Ok(());
    }
    let split = split_exact(p)?;
    let mut pos = ctrls.to_vec();
    pos.push(Control::positive(top));
    let mut neg = ctrls.to_vec();
    neg.push(Control::negative(top));
    emit(s, &split.d, top + 1, &pos)?;
    let entries: Vec<_> = split.c.iter().map(|&m| if m { -ONE } else { ONE }).collect();
    let lower: Vec<usize> = (top + 1..top + 1 + (p.dim() / 2).trailing_zeros() as usize).collect();
    let (gates, elided) = emit_negator_fan(&entries, top, &lower, ctrls);
    for g in gates {
        s.circuit.push_unchecked(g);
    }
    s.elided += elided;
    s.fans += 1;
    emit(s, &split.b, top + 1, &pos)?;
    emit(s, &split.a, top + 1, &neg)?;
    Ok(())
}

/// Reads lines `<input bits> <output bits>` (both `w` bits, most
/// significant first) into the permutation sending input `x` to output `y`.
pub fn parse_truth_table(text: &str) -> Result<Permutation> {
    let mut width = None;
    let mut map: Vec<Option<usize>> = Vec::new();
    let mut last_line = 0;
    for (k, line) in text.lines().enumerate() {
        let line_no = k + 1;
        last_line = line_no;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [input, output] = toks[..] else {
            return Err(Error::parse(line_no, "expected `<input bits> <output bits>`"));
        };
        let w = *width.get_or_insert(input.len());
        if input.len() != w || output.len() != w {
            return Err(Error::parse(line_no, format!("expected {w}-bit strings")));
        }
        if w == 0 || w > 24 {
            return Err(Error::parse(line_no, "bit width must be between 1 and 24"));
        }
        if map.is_empty() {
            map = vec![None; 1 << w];
        }
        let bits = |s: &str| {
            usize::from_str_radix(s, 2)
                .ok()
                .filter(|_| s.bytes().all(|b| b == b'0' || b == b'1'))
                .ok_or_else(|| Error::parse(line_no, format!("bad bit string `{s}`")))
        };
        let (x, y) = (bits(input)?, bits(output)?);
        if map[x].replace(y).is_some() {
            return Err(Error::parse(line_no, format!("input {input} listed twice")));
        }
    }
    if map.is_empty() {
        return Err(Error::parse(last_line, "empty truth table"));
    }
    let mapping = map
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::parse(last_line, "truth table does not list every input"))?;
    Permutation::from_mapping(mapping)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{census, evaluate_circuit};
    use crate::decompose::{block_zxz, DecomposeOptions};
    use crate::linalg::{block_diag, block_split, negator_block, phasor_block};
    use crate::polar::{light_weight, polar_light, CompletionRule, PolarOptions};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn example() -> Permutation {
        Permutation::from_mapping(vec![2, 0, 3, 1]).unwrap()
    }

    fn swap2() -> CMatrix {
        Permutation::from_mapping(vec![1, 0]).unwrap().matrix()
    }

    #[test]
    fn profiles() {
        let p = is_permutation(&example().matrix(), 1e-12);
        assert!(p.is_permutation);
        assert_eq!(p.mapping, vec![2, 0, 3, 1]);
        assert_eq!(is_permutation(&CMatrix::identity(4, 4), 1e-12).mapping, vec![0, 1, 2, 3]);
        assert!(!is_permutation(UnitaryMatrix::hadamard().entries(), 1e-12).is_permutation);
        let mut m = example().matrix();
        m[(2, 0)] = -ONE;
        assert!(!is_permutation(&m, 1e-12).is_permutation);
    }

    #[test]
    fn example_split() {
        let f = birkhoff_block_zxz(&UnitaryMatrix::new(example().matrix()).unwrap()).unwrap();
        assert_eq!(f.a.entries(), &swap2());
        assert_eq!(f.b.entries(), &CMatrix::identity(2, 2));
        assert_eq!(
            f.c.entries(),
            &CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-ONE, ONE]))
        );
        assert_eq!(f.d.entries(), &swap2());
        assert_eq!(f.residual, 0.0);
    }

    #[test]
    fn three_factor_product_is_exact() {
        let f = birkhoff_block_zxz(&UnitaryMatrix::new(example().matrix()).unwrap()).unwrap();
        let left = block_diag(f.a.entries(), f.b.entries());
        let mid = negator_block(f.c.entries());
        let right = phasor_block(f.d.entries());
        assert!(is_permutation(&mid, 0.0).is_permutation);
        assert_eq!(is_permutation(&mid, 0.0).mapping, vec![2, 1, 0, 3]);
        assert_eq!(left * mid * right, example().matrix());
    }

    #[test]
    fn matches_floating_point_path_with_canonical_completion() {
        let u = UnitaryMatrix::new(example().matrix()).unwrap();
        let mut opts = DecomposeOptions::default();
        opts.polar.completion = CompletionRule::CanonicalClassical;
        let g = block_zxz(&u, Variant::V1, &opts).unwrap();
        let e = birkhoff_block_zxz(&u).unwrap();
        for (x, y) in [(&g.a, &e.a), (&g.b, &e.b), (&g.c, &e.c), (&g.d, &e.d)] {
            assert!(frobenius_distance(x.entries(), y.entries()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn identity_split() {
        let s = split_exact(&Permutation::identity(8)).unwrap();
        assert!(s.a.is_identity() && s.b.is_identity() && s.d.is_identity());
        assert!(s.c.iter().all(|&m| !m));
    }

    #[test]
    fn random_permutations_close_under_split() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for n in [4usize, 6, 8, 16, 32, 64] {
            for _ in 0..10 {
                let mut m: Vec<usize> = (0..n).collect();
                m.shuffle(&mut rng);
                let p = Permutation::from_mapping(m).unwrap();
                let f = birkhoff_block_zxz(&UnitaryMatrix::new(p.matrix()).unwrap()).unwrap();
                for x in [&f.a, &f.b, &f.d] {
                    assert!(is_permutation(x.entries(), 0.0).is_permutation);
                }
                assert_eq!(f.product(), p.matrix());
            }
        }
    }

    #[test]
    fn top_polar_factors_are_complementary() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let mut m: Vec<usize> = (0..16).collect();
        m.shuffle(&mut rng);
        let u = Permutation::from_mapping(m).unwrap().matrix();
        let b = block_split(&u).unwrap();
        let opts = PolarOptions::default();
        let light = |m: &CMatrix| polar_light(m, &light_weight(m, 1e-12), &opts).unwrap().p;
        let (p11, p12) = (light(&b.u11), light(&b.u12));
        for k in 0..8 {
            assert_eq!((p11[(k, k)] + p12[(k, k)]), ONE);
        }
    }

    #[test]
    fn not_on_top_wire_is_one_gate() {
        let p = Permutation::from_mapping(vec![2, 3, 0, 1]).unwrap();
        let s = permutation_synthesis(&p).unwrap();
        assert_eq!(s.circuit.gates(), &[Gate::new(GateKind::Not, 0)]);
    }

    #[test]
    fn example_circuit_uses_only_nots() {
        let c = classical_circuit(&UnitaryMatrix::new(example().matrix()).unwrap()).unwrap();
        assert!(c.gates().iter().all(|g| g.kind == GateKind::Not));
        assert_eq!(evaluate_circuit(&c), example().matrix());
        assert_eq!(census(&c).not, c.len());
    }

    #[test]
    fn random_circuits_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        for w in 1..=5 {
            let mut m: Vec<usize> = (0..1 << w).collect();
            m.shuffle(&mut rng);
            let p = Permutation::from_mapping(m).unwrap();
            let s = permutation_synthesis(&p).unwrap();
            assert!(s.circuit.gates().iter().all(|g| g.kind == GateKind::Not));
            assert!(frobenius_distance(&evaluate_circuit(&s.circuit), &p.matrix()).unwrap() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            birkhoff_block_zxz(&UnitaryMatrix::hadamard()),
            Err(Error::NotPermutation)
        ));
        let p6 = UnitaryMatrix::identity(6);
        assert!(matches!(classical_circuit(&p6), Err(Error::NotPowerOfTwo(6))));
        assert!(Permutation::from_mapping(vec![0, 0]).is_err());
    }

    #[test]
    fn truth_tables() {
        let p = parse_truth_table("# example\n00 10\n01 00\n10 11\n11 01\n").unwrap();
        assert_eq!(p, example());
        assert!(matches!(parse_truth_table("0 1\n0 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_truth_table("0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_truth_table("0 1\n1 1\n"), Err(Error::NotPermutation)));
        assert!(matches!(parse_truth_table("02 10\n"), Err(Error::Parse { line: 1, .. })));
    }
}
