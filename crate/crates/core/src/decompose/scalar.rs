//! The `n = 2` case: `U = diag(a, b)·N(c)·diag(1, d)` with unit-modulus
//! scalars, computed from the four-angle form of U(2).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::Variant;
use crate::error::{Error, Result};
use crate::linalg::{Mat2, I, ONE, ZERO};

/// Angles `(α, φ, ψ, χ)` of
/// `[[cos φ e^{i(α+ψ)}, sin φ e^{i(α+χ)}], [−sin φ e^{i(α−χ)}, cos φ e^{i(α−ψ)}]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct U2Params {
    pub alpha: f64,
    pub phi: f64,
    pub psi: f64,
    pub chi: f64,
}

impl U2Params {
    pub fn matrix(&self) -> Mat2 {
        let (s, c) = self.phi.sin_cos();
        let e = |t: f64| Complex64::from_polar(1.0, t);
        Mat2::new(
            e(self.alpha + self.psi) * c,
            e(self.alpha + self.chi) * s,
            -e(self.alpha - self.chi) * s,
            e(self.alpha - self.psi) * c,
        )
    }
}

/// Unit-modulus scalars of the 2x2 decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarFactors {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub variant: Variant,
}

impl ScalarFactors {
    /// `diag(a, b)·N(c)·diag(1, d)`.
    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.a, ZERO, ZERO, self.b) * negator2(self.c) * phasor2(self.d)
    }
}

/// `½[[1+c, 1−c], [1−c, 1+c]]`.
pub fn negator2(c: Complex64) -> Mat2 {
    let p = (ONE + c) * 0.5;
    let m = (ONE - c) * 0.5;
    Mat2::new(p, m, m, p)
}

/// `diag(1, d)`.
pub fn phasor2(d: Complex64) -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, d)
}

/// Wraps an angle into `(−π, π]`.
pub(crate) fn wrap_angle(t: f64) -> f64 {
    let mut r = t.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// Moduli below this count as zero when deciding the degenerate rules.
const DEGENERATE_TOL: f64 = 1e-14;

/// Extracts `(α, φ, ψ, χ)` with `φ ∈ [0, π/2]` and the other angles in
/// `(−π, π]`. `χ = 0` when the matrix is diagonal and `ψ = 0` when it is
/// anti-diagonal.
pub fn u2_parameters(m: &Mat2) -> Result<U2Params> {
    let residual = (m.adjoint() * m - Mat2::identity()).norm();
    if residual.is_nan() || residual > 1e-10 {
        return Err(Error::NotUnitary {
            residual,
            tolerance: 1e-10,
        });
    }
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let alpha = wrap_angle(det.arg()) / 2.0;
    let phi = m[(0, 1)].norm().atan2(m[(0, 0)].norm());
    let psi = if m[(0, 0)].norm() < DEGENERATE_TOL {
        0.0
    } else {
        wrap_angle(m[(0, 0)].arg() - alpha)
    };
    let chi = if m[(0, 1)].norm() < DEGENERATE_TOL {
        0.0
    } else {
        wrap_angle(m[(0, 1)].arg() - alpha)
    };
    Ok(U2Params {
        alpha,
        phi,
        psi,
        chi,
    })
}

pub fn scalar_zxz(p: &U2Params, variant: Variant) -> ScalarFactors {
    let e = |t: f64| Complex64::from_polar(1.0, t);
    let U2Params {
        alpha,
        phi,
        psi,
        chi,
    } = *p;
    match variant {
        Variant::V1 => ScalarFactors {
            a: e(alpha + phi + psi),
            b: I * e(alpha + phi - chi),
            c: e(-2.0 * phi),
            d: -I * e(-psi + chi),
            variant,
        },
        Variant::V2 => ScalarFactors {
            a: e(alpha - phi + psi),
            b: -I * e(alpha - phi - chi),
            c: e(2.0 * phi),
            d: I * e(-psi + chi),
            variant,
        },
    }
}
