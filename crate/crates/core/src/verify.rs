//! Diagnostic checks over the polar factors of a unitary's four blocks and
//! over the negator-block group. Nothing here fails on a large residual;
//! callers decide what counts as passing.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::decompose::Variant;
use crate::error::{Error, Result};
use crate::linalg::{block_split, negator_block, CMatrix, UnitaryMatrix, I};
use crate::polar::{is_singular, polar_decompose, PolarOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    /// Frobenius norm of `lhs − rhs` for each checked identity.
    pub residuals: BTreeMap<String, f64>,
    /// Identities skipped because some block is singular.
    pub not_applicable: Vec<String>,
    pub regular_blocks: bool,
    pub passed: bool,
    pub tolerance: f64,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }
}

/// Checks the identities implied by unitarity on the polar factors
/// `U_jk = P_jk·V_jk`, using default polar options.
pub fn check_block_identities(u: &UnitaryMatrix, tol: f64) -> Result<IdentityReport> {
    check_block_identities_with(u, tol, &PolarOptions::default())
}

/// Names of the identities that need all four blocks regular.
const REGULAR_ONLY: [&str; 6] = [
    "v_rows",
    "v_cols",
    "c_two_forms_v1",
    "d_two_forms_v1",
    "c_two_forms_v2",
    "d_two_forms_v2",
];

pub fn check_block_identities_with(
    u: &UnitaryMatrix,
    tol: f64,
    polar: &PolarOptions,
) -> Result<IdentityReport> {
    let m = u.entries();
    if !m.nrows().is_multiple_of(2) {
        return Err(Error::OddDimension(m.nrows()));
    }
    polar.validate()?;
    let b = block_split(m)?;
    let h = m.nrows() / 2;
    let id = CMatrix::identity(h, h);
    let f11 = polar_decompose(&b.u11, polar)?;
    let f12 = polar_decompose(&b.u12, polar)?;
    let f21 = polar_decompose(&b.u21, polar)?;
    let f22 = polar_decompose(&b.u22, polar)?;
    let (p11, v11) = (&f11.p, &f11.v);
    let (p12, v12) = (&f12.p, &f12.v);
    let (p21, v21) = (&f21.p, &f21.v);
    let (p22, v22) = (&f22.p, &f22.v);
    let sq = |x: &CMatrix| x * x;

    let mut r = BTreeMap::new();
    let mut put = |name: &str, x: CMatrix| {
        r.insert(name.to_string(), x.norm());
    };
    put("p_top_row", sq(p11) + sq(p12) - &id);
    put("p_bottom_row", sq(p21) + sq(p22) - &id);
    put(
        "left_column",
        v11.adjoint() * sq(p11) * v11 + v21.adjoint() * sq(p21) * v21 - &id,
    );
    put(
        "right_column",
        v12.adjoint() * sq(p12) * v12 + v22.adjoint() * sq(p22) * v22 - &id,
    );
    put(
        "rows_orthogonal",
        p11 * v11 * v21.adjoint() * p21 + p12 * v12 * v22.adjoint() * p22,
    );
    put(
        "columns_orthogonal",
        v11.adjoint() * p11 * p12 * v12 + v21.adjoint() * p21 * p22 * v22,
    );

    let regular = [&b.u11, &b.u12, &b.u21, &b.u22]
        .iter()
        .all(|x| !is_singular(x, polar));
    let mut not_applicable = Vec::new();
    if regular {
        put("v_rows", v11 * v21.adjoint() + v12 * v22.adjoint());
        put("v_cols", v11.adjoint() * v12 + v21.adjoint() * v22);
        for (variant, tag) in [(Variant::V1, "v1"), (Variant::V2, "v2")] {
            let si = I * variant.sign();
            let top_c = v11.adjoint() * sq(&(p11 - p12 * si)) * v11;
            let bottom_c = v21.adjoint() * sq(&(p22 - p21 * si)) * v21;
            let top_d = v11.adjoint() * v12 * (-si);
            let bottom_d = v21.adjoint() * v22 * si;
            put(&format!("c_two_forms_{tag}"), top_c - bottom_c);
            put(&format!("d_two_forms_{tag}"), top_d - bottom_d);
        }
    } else {
        not_applicable.extend(REGULAR_ONLY.iter().map(|s| s.to_string()));
    }
    let passed = r.values().all(|&x| x <= tol);
    Ok(IdentityReport {
        residuals: r,
        not_applicable,
        regular_blocks: regular,
        passed,
        tolerance: tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegatorMapReport {
    /// `‖N(V1)·N(V2) − N(V1·V2)‖_F`.
    pub homomorphism: f64,
    /// Largest deviation of a row or column sum of `N(V1)` or `N(V2)` from 1.
    pub line_sums: f64,
}

pub fn negator_map_check(v1: &UnitaryMatrix, v2: &UnitaryMatrix) -> Result<NegatorMapReport> {
    if v1.dim() != v2.dim() {
        return Err(Error::ShapeMismatch(format!(
            "{0}x{0} and {1}x{1}",
            v1.dim(),
            v2.dim()
        )));
    }
    let (a, b) = (v1.entries(), v2.entries());
    let na = negator_block(a);
    let nb = negator_block(b);
    let homomorphism = (&na * &nb - negator_block(&(a * b))).norm();
    let line_sums = [&na, &nb]
        .iter()
        .flat_map(|m| {
            let rows = m.row_iter().map(|r| r.sum()).collect::<Vec<Complex64>>();
            let cols = m.column_iter().map(|c| c.sum()).collect::<Vec<Complex64>>();
            rows.into_iter().chain(cols)
        })
        .map(|s| (s - Complex64::from(1.0)).norm())
        .fold(0.0, f64::max);
    Ok(NegatorMapReport {
        homomorphism,
        line_sums,
    })
}
