//! Dense complex matrix substrate.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Row and column index bit
//! `w - 1 - k` corresponds to wire `k`, so block row 0 is the top wire in
//! state |0>.

mod text;

pub use text::{format_matrix, parse_matrix, write_matrix};

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Dense complex matrix used throughout the crate.
pub type CMatrix = DMatrix<Complex64>;

/// 2x2 complex matrix (single-qubit payload).
pub type Mat2 = Matrix2<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// A validated square unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    entries: CMatrix,
    residual: f64,
}

impl UnitaryMatrix {
    pub const DEFAULT_TOLERANCE: f64 = 1e-10;

    /// Validates `entries` against [`Self::DEFAULT_TOLERANCE`].
    pub fn new(entries: CMatrix) -> Result<Self> {
        Self::with_tolerance(entries, Self::DEFAULT_TOLERANCE)
    }

    /// Validates that `entries` is square and that both `U†U - I` and
    /// `UU† - I` have Frobenius norm at most `tolerance`.
    pub fn with_tolerance(entries: CMatrix, tolerance: f64) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::ShapeMismatch(format!(
                "expected a non-empty square matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let residual = unitarity_residual(&entries);
        if residual.is_nan() || residual > tolerance {
            return Err(Error::NotUnitary {
                residual,
                tolerance,
            });
        }
        Ok(Self { entries, residual })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: CMatrix::identity(n, n),
            residual: 0.0,
        }
    }

    /// The 2x2 Hadamard matrix.
    pub fn hadamard() -> Self {
        let mut m = CMatrix::from_element(2, 2, Complex64::from(std::f64::consts::FRAC_1_SQRT_2));
        m[(1, 1)] = -m[(1, 1)];
        Self::new(m).expect("Hadamard is unitary")
    }

    /// `F = H ⊗ I_{n/2}`.
    pub fn fourier_hadamard(n: usize) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::OddDimension(n));
        }
        Self::new(kron_identity(&hadamard2(), n / 2))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_inner(self) -> CMatrix {
        self.entries
    }

    /// Cached `max(‖U†U − I‖_F, ‖UU† − I‖_F)`.
    pub fn unitarity_residual(&self) -> f64 {
        self.residual
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
            residual: self.residual,
        }
    }

    /// The matrix as a 2x2 payload; `None` unless `dim() == 2`.
    pub fn as_mat2(&self) -> Option<Mat2> {
        (self.dim() == 2).then(|| Mat2::from_fn(|r, c| self.entries[(r, c)]))
    }
}

impl AsRef<CMatrix> for UnitaryMatrix {
    fn as_ref(&self) -> &CMatrix {
        &self.entries
    }
}

/// The four quadrants of an even-dimensional matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockView {
    pub u11: CMatrix,
    pub u12: CMatrix,
    pub u21: CMatrix,
    pub u22: CMatrix,
}

/// Splits a matrix into its four contiguous half-size quadrants.
pub fn block_split(u: &CMatrix) -> Result<BlockView> {
    let n = u.nrows();
    if !u.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "cannot split a {}x{} matrix",
            u.nrows(),
            u.ncols()
        )));
    }
    if !n.is_multiple_of(2) {
        return Err(Error::OddDimension(n));
    }
    let h = n / 2;
    Ok(BlockView {
        u11: u.view((0, 0), (h, h)).into_owned(),
        u12: u.view((0, h), (h, h)).into_owned(),
        u21: u.view((h, 0), (h, h)).into_owned(),
        u22: u.view((h, h), (h, h)).into_owned(),
    })
}

/// Inverse of [`block_split`].
pub fn block_assemble(b: &BlockView) -> Result<CMatrix> {
    let h = b.u11.nrows();
    for (name, m) in [("u11", &b.u11), ("u12", &b.u12), ("u21", &b.u21), ("u22", &b.u22)] {
        if m.nrows() != h || m.ncols() != h {
            return Err(Error::ShapeMismatch(format!(
                "block {name} is {}x{}, expected {h}x{h}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    let mut out = CMatrix::zeros(2 * h, 2 * h);
    out.view_mut((0, 0), (h, h)).copy_from(&b.u11);
    out.view_mut((0, h), (h, h)).copy_from(&b.u12);
    out.view_mut((h, 0), (h, h)).copy_from(&b.u21);
    out.view_mut((h, h), (h, h)).copy_from(&b.u22);
    Ok(out)
}

/// `F·U·F` with `F = H ⊗ I`, computed blockwise.
pub fn hadamard_conjugate(u: &CMatrix) -> Result<CMatrix> {
    let BlockView { u11, u12, u21, u22 } = block_split(u)?;
    let half = Complex64::from(0.5);
    let s1 = &u11 + &u21;
    let s2 = &u12 + &u22;
    let d1 = &u11 - &u21;
    let d2 = &u12 - &u22;
    block_assemble(&BlockView {
        u11: (&s1 + &s2) * half,
        u12: (&s1 - &s2) * half,
        u21: (&d1 + &d2) * half,
        u22: (&d1 - &d2) * half,
    })
}

/// ‖X − Y‖_F.
pub fn frobenius_distance(x: &CMatrix, y: &CMatrix) -> Result<f64> {
    if x.shape() != y.shape() {
        return Err(Error::ShapeMismatch(format!(
            "{:?} vs {:?}",
            x.shape(),
            y.shape()
        )));
    }
    Ok(x.iter()
        .zip(y.iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// `max(‖M†M − I‖_F, ‖MM† − I‖_F)`.
pub fn unitarity_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let id = CMatrix::identity(n, n);
    let a = (m.adjoint() * m - &id).norm();
    let b = (m * m.adjoint() - &id).norm();
    a.max(b)
}

/// `N(V) = ½[[I+V, I−V], [I−V, I+V]]`, the block NEGATOR.
pub fn negator_block(v: &CMatrix) -> CMatrix {
    let h = v.nrows();
    let id = CMatrix::identity(h, h);
    let half = Complex64::from(0.5);
    let plus = (&id + v) * half;
    let minus = (&id - v) * half;
    block_assemble(&BlockView {
        u11: plus.clone(),
        u12: minus.clone(),
        u21: minus,
        u22: plus,
    })
    .expect("blocks share a shape")
}

/// `diag(A, B)`.
pub fn block_diag(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (p, q) = (a.nrows(), b.nrows());
    let mut out = CMatrix::zeros(p + q, p + q);
    out.view_mut((0, 0), (p, p)).copy_from(a);
    out.view_mut((p, p), (q, q)).copy_from(b);
    out
}

/// `diag(I, V)`, the block PHASOR.
pub fn phasor_block(v: &CMatrix) -> CMatrix {
    block_diag(&CMatrix::identity(v.nrows(), v.nrows()), v)
}

/// `[[0, I], [I, 0]]` of dimension `n`.
pub fn block_not(n: usize) -> CMatrix {
    let h = n / 2;
    let mut out = CMatrix::zeros(n, n);
    for k in 0..h {
        out[(k, k + h)] = ONE;
        out[(k + h, k)] = ONE;
    }
    out
}

/// `G ⊗ I_m`.
pub fn kron_identity(g: &Mat2, m: usize) -> CMatrix {
    let mut out = CMatrix::zeros(2 * m, 2 * m);
    for r in 0..2 {
        for c in 0..2 {
            for k in 0..m {
                out[(r * m + k, c * m + k)] = g[(r, c)];
            }
        }
    }
    out
}

pub fn hadamard2() -> Mat2 {
    let s = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
    Mat2::new(s, s, s, -s)
}

/// Largest modulus among the off-diagonal entries.
pub fn off_diagonal_max(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            if r != c {
                worst = worst.max(m[(r, c)].norm());
            }
        }
    }
    worst
}

/// Haar-distributed random unitary (QR of a complex Gaussian matrix with
/// the phases of R's diagonal folded back into Q).
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitaryMatrix {
    let z = CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..n {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for row in 0..n {
            q[(row, c)] *= phase;
        }
    }
    UnitaryMatrix::new(q).expect("QR factor is unitary")
}
