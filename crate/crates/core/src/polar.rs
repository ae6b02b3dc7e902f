//! Polar decomposition `M = P·V` with `P` Hermitian positive-semidefinite
//! and `V` unitary.
//!
//! Three routes are available:
//!
//! * **light**: `M` has at most one nonzero per row and column. `P` is the
//!   diagonal of row moduli and `V` a complex permutation matrix; rows of
//!   `M` that are zero leave one unit-modulus entry of `V` free.
//! * **Heron**: the Newton iteration `X ← (X + X^{-†})/2` starting from
//!   `X = M`, which converges quadratically to `V` when `M` is regular.
//! * **spectral**: from the SVD `M = WΣZ†`, `V = WZ†` and `P = WΣW†`. For
//!   singular `M` the kernel columns of `W` are scaled by completion phases.
//!
//! [`polar_decompose`] picks the route: light if light, spectral if the
//! smallest singular value is below `singularity_tol·dim`, Heron otherwise.

use nalgebra::SVD;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{frobenius_distance, CMatrix, I, ONE};

/// How the non-unique entries of `V` are chosen for singular inputs.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum CompletionRule {
    /// Every free entry is 1.
    #[default]
    IdentityLike,
    /// Free entries `-i`; block decompositions use `+i` for the
    /// off-diagonal blocks. With this choice permutation matrices factor
    /// into permutation matrices.
    CanonicalClassical,
    /// Every free entry equals the given phase.
    Uniform(Complex64),
    /// Free entries in slot order.
    Explicit(Vec<Complex64>),
}

impl CompletionRule {
    fn value(&self, slot: usize) -> Result<Complex64> {
        let z = match self {
            CompletionRule::IdentityLike => ONE,
            CompletionRule::CanonicalClassical => -I,
            CompletionRule::Uniform(z) => *z,
            CompletionRule::Explicit(list) => *list.get(slot).ok_or_else(|| {
                Error::InvalidOptions(format!(
                    "explicit completion has {} values, slot {slot} requested",
                    list.len()
                ))
            })?,
        };
        if (z.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidOptions(format!(
                "completion value {z} is not unit modulus"
            )));
        }
        Ok(z)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarOptions {
    pub max_iter: usize,
    /// Heron stops once `‖X_{k+1} − X_k‖_F` drops to this value.
    pub conv_tol: f64,
    /// Relative threshold: singular if `σ_min < singularity_tol·dim`.
    pub singularity_tol: f64,
    /// Entries with modulus at most this are zero for light detection.
    pub zero_tol: f64,
    pub completion: CompletionRule,
}

impl Default for PolarOptions {
    fn default() -> Self {
        Self {
            max_iter: 100,
            conv_tol: 1e-10,
            singularity_tol: 1e-12,
            zero_tol: 1e-12,
            completion: CompletionRule::IdentityLike,
        }
    }
}

impl PolarOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::InvalidOptions("max_iter must be at least 1".into()));
        }
        for (name, v) in [
            ("conv_tol", self.conv_tol),
            ("singularity_tol", self.singularity_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidOptions(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.zero_tol >= 0.0 && self.zero_tol.is_finite()) {
            return Err(Error::InvalidOptions(format!(
                "zero_tol must be nonnegative, got {}",
                self.zero_tol
            )));
        }
        Ok(())
    }

    pub fn with_completion(&self, completion: CompletionRule) -> Self {
        Self {
            completion,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolarMethod {
    Heron,
    Spectral,
    Light,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlotPosition {
    /// Entry of `V` (light route).
    Entry { row: usize, col: usize },
    /// Index of a left singular vector spanning the kernel (spectral route).
    Kernel(usize),
}

/// A non-unique choice made while completing `V`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeSlot {
    pub position: SlotPosition,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarFactors {
    pub p: CMatrix,
    pub v: CMatrix,
    pub free_slots: Vec<FreeSlot>,
    pub method: PolarMethod,
    pub iterations_used: usize,
    /// `‖P·V − M‖_F`.
    pub residual: f64,
}

/// Sparsity profile of a matrix with respect to the light-matrix test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LightProfile {
    pub is_light: bool,
    /// Number of entries with modulus above the zero tolerance.
    pub weight: usize,
    pub nonzero_positions: Vec<(usize, usize)>,
}

pub fn light_weight(m: &CMatrix, zero_tol: f64) -> LightProfile {
    let mut row_count = vec![0usize; m.nrows()];
    let mut col_count = vec![0usize; m.ncols()];
    let mut nonzero_positions = Vec::new();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            if m[(r, c)].norm() > zero_tol {
                row_count[r] += 1;
                col_count[c] += 1;
                nonzero_positions.push((r, c));
            }
        }
    }
    let is_light = row_count.iter().chain(&col_count).all(|&k| k <= 1);
    LightProfile {
        is_light,
        weight: nonzero_positions.len(),
        nonzero_positions,
    }
}

pub fn smallest_singular_value(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().min()
}

/// True when `σ_min(M) < singularity_tol·dim`.
pub fn is_singular(m: &CMatrix, opts: &PolarOptions) -> bool {
    smallest_singular_value(m) < opts.singularity_tol * m.nrows() as f64
}

pub fn polar_decompose(m: &CMatrix, opts: &PolarOptions) -> Result<PolarFactors> {
    check_square(m)?;
    opts.validate()?;
    let profile = light_weight(m, opts.zero_tol);
    if profile.is_light {
        return polar_light(m, &profile, opts);
    }
    if is_singular(m, opts) {
        return polar_spectral(m, opts);
    }
    polar_heron(m, opts)
}

/// Heron/Newton iteration. Fails with [`Error::NonConvergence`] when the
/// step size has not dropped to `conv_tol` within `max_iter` iterations or
/// an iterate becomes numerically singular.
pub fn polar_heron(m: &CMatrix, opts: &PolarOptions) -> Result<PolarFactors> {
    check_square(m)?;
    opts.validate()?;
    let mut x = m.clone();
    let mut last_step = f64::INFINITY;
    for k in 1..=opts.max_iter {
        let inv_adj = x.adjoint().lu().try_inverse().ok_or(Error::NonConvergence {
            iterations: k,
            last_step: f64::INFINITY,
        })?;
        let next = (&x + inv_adj) * Complex64::from(0.5);
        last_step = (&next - &x).norm();
        x = next;
        if !last_step.is_finite() {
            break;
        }
        if last_step <= opts.conv_tol {
            return Ok(finish(m, x, Vec::new(), PolarMethod::Heron, k));
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        last_step,
    })
}

/// SVD-based polar decomposition. Kernel directions are completed with
/// `opts.completion`, one slot per kernel dimension.
pub fn polar_spectral(m: &CMatrix, opts: &PolarOptions) -> Result<PolarFactors> {
    check_square(m)?;
    opts.validate()?;
    let n = m.nrows();
    let svd = SVD::new(m.clone(), true, true);
    let mut w = svd.u.expect("left vectors requested");
    let z_adj = svd.v_t.expect("right vectors requested");
    let sigma = svd.singular_values;
    let threshold = opts.singularity_tol * n as f64;

    let mut free_slots = Vec::new();
    let mut p = CMatrix::zeros(n, n);
    for k in 0..n {
        if sigma[k] < threshold {
            let value = opts.completion.value(free_slots.len())?;
            free_slots.push(FreeSlot {
                position: SlotPosition::Kernel(k),
                value,
            });
            let mut col = w.column_mut(k);
            col *= value;
        } else {
            let col = w.column(k);
            p += col * col.adjoint() * Complex64::from(sigma[k]);
        }
    }
    let v = &w * z_adj;
    let p = hermitize(&p);
    let residual = (&p * &v - m).norm();
    Ok(PolarFactors {
        p,
        v,
        free_slots,
        method: PolarMethod::Spectral,
        iterations_used: 0,
        residual,
    })
}

/// Closed form for light matrices. Empty rows are paired with empty
/// columns in increasing order; each pair is a free slot.
pub fn polar_light(
    m: &CMatrix,
    profile: &LightProfile,
    opts: &PolarOptions,
) -> Result<PolarFactors> {
    check_square(m)?;
    if !profile.is_light {
        return Err(Error::InvalidOptions("matrix is not light".into()));
    }
    let n = m.nrows();
    let mut p = CMatrix::zeros(n, n);
    let mut v = CMatrix::zeros(n, n);
    let mut row_used = vec![false; n];
    let mut col_used = vec![false; n];
    for &(r, c) in &profile.nonzero_positions {
        let z = m[(r, c)];
        p[(r, r)] = Complex64::from(z.norm());
        v[(r, c)] = z / z.norm();
        row_used[r] = true;
        col_used[c] = true;
    }
    let empty_rows = (0..n).filter(|&r| !row_used[r]);
    let empty_cols = (0..n).filter(|&c| !col_used[c]);
    let mut free_slots = Vec::new();
    for (row, col) in empty_rows.zip(empty_cols) {
        let value = opts.completion.value(free_slots.len())?;
        v[(row, col)] = value;
        free_slots.push(FreeSlot {
            position: SlotPosition::Entry { row, col },
            value,
        });
    }
    let residual = (&p * &v - m).norm();
    Ok(PolarFactors {
        p,
        v,
        free_slots,
        method: PolarMethod::Light,
        iterations_used: 0,
        residual,
    })
}

fn finish(
    m: &CMatrix,
    v: CMatrix,
    free_slots: Vec<FreeSlot>,
    method: PolarMethod,
    iterations_used: usize,
) -> PolarFactors {
    let p = hermitize(&(m * v.adjoint()));
    let residual = frobenius_distance(&(&p * &v), m).expect("same shape");
    PolarFactors {
        p,
        v,
        free_slots,
        method,
        iterations_used,
        residual,
    }
}

fn hermitize(p: &CMatrix) -> CMatrix {
    (p + p.adjoint()) * Complex64::from(0.5)
}

fn check_square(m: &CMatrix) -> Result<()> {
    if !m.is_square() || m.is_empty() {
        return Err(Error::ShapeMismatch(format!(
            "polar decomposition needs a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// True if `m` has at most one nonzero per row and column and every
/// nonzero is unit modulus.
pub fn is_complex_permutation(m: &CMatrix, tol: f64) -> bool {
    let profile = light_weight(m, tol);
    profile.is_light
        && profile.weight == m.nrows()
        && profile
            .nonzero_positions
            .iter()
            .all(|&(r, c)| (m[(r, c)].norm() - 1.0).abs() <= tol)
}
