//! Block-ZXZ factorization and its dual.
//!
//! Every even-dimensional unitary factors as
//!
//! ```text
//! U = diag(A, B) · N(C) · diag(I, D),      N(X) = ½[[I+X, I−X], [I−X, I+X]]
//! ```
//!
//! with half-size unitaries `A, B, C, D` built from the polar factors of
//! the top two blocks `U11 = P11·V11`, `U12 = P12·V12`. With `s = +1` for
//! [`Variant::V1`] and `s = −1` for [`Variant::V2`]:
//!
//! ```text
//! A = (P11 + s·i·P12)·V11
//! C = V11†·(P11 − s·i·P12)²·V11
//! D = −s·i·V11†·V12
//! B = U21 + U22·D†
//! ```
//!
//! The dual form `U = N(A′)·diag(B′, C′)·N(D′)` is obtained by factoring
//! `F·U·F` (with `F = H ⊗ I`) into `(a, b, c, d)` and setting
//! `A′ = b·a†, B′ = a, C′ = a·c, D′ = d`.

pub mod scalar;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use scalar::{negator2, phasor2, scalar_zxz, u2_parameters, ScalarFactors, U2Params};

use crate::error::{Error, Result};
use crate::linalg::{
    block_diag, block_not, block_split, frobenius_distance, hadamard2, hadamard_conjugate,
    kron_identity, negator_block, phasor_block, random_unitary, CMatrix, Mat2, UnitaryMatrix, I,
};
use crate::polar::{
    polar_decompose, polar_spectral, CompletionRule, PolarFactors, PolarOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Form {
    /// `diag(A, B) · N(C) · diag(I, D)`.
    #[default]
    Bzxz,
    /// `N(A′) · diag(B′, C′) · N(D′)`.
    Bxzx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    #[default]
    V1,
    V2,
}

impl Variant {
    /// `+1` for V1, `−1` for V2.
    pub fn sign(self) -> f64 {
        match self {
            Variant::V1 => 1.0,
            Variant::V2 => -1.0,
        }
    }
}

/// Which rung of the fallback ladder produced the factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fallback {
    /// Light or Heron polar factors (spectral only for singular blocks).
    None,
    /// Heron failed to converge or the residual gate failed; all polar
    /// factors recomputed spectrally with identity-like completion.
    Spectral,
    /// The factors belong to `(G⊗I)·U·(G′⊗I)` for random single-qubit `G, G′`.
    Preconditioned,
}

/// Top-wire single-qubit gates absorbed around the factored matrix:
/// `U = (left ⊗ I) · product(factors) · (right ⊗ I)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preconditioning {
    pub left: Mat2,
    pub right: Mat2,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockFactors {
    pub a: UnitaryMatrix,
    pub b: UnitaryMatrix,
    pub c: UnitaryMatrix,
    pub d: UnitaryMatrix,
    pub form: Form,
    pub variant: Variant,
    /// Frobenius distance between [`BlockFactors::product`] and the input.
    pub residual: f64,
    pub fallback: Fallback,
    pub preconditioning: Option<Preconditioning>,
}

impl BlockFactors {
    /// Product of the four factors, without any preconditioning gates.
    pub fn core_product(&self) -> CMatrix {
        let (a, b, c, d) = (
            self.a.entries(),
            self.b.entries(),
            self.c.entries(),
            self.d.entries(),
        );
        match self.form {
            Form::Bzxz => block_diag(a, b) * negator_block(c) * phasor_block(d),
            Form::Bxzx => negator_block(a) * block_diag(b, c) * negator_block(d),
        }
    }

    /// Full reconstruction including preconditioning gates.
    pub fn product(&self) -> CMatrix {
        let core = self.core_product();
        match &self.preconditioning {
            None => core,
            Some(pc) => {
                let h = core.nrows() / 2;
                kron_identity(&pc.left, h) * core * kron_identity(&pc.right, h)
            }
        }
    }

    pub fn half_dim(&self) -> usize {
        self.a.dim()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecomposeOptions {
    pub polar: PolarOptions,
    /// Success requires a reconstruction residual of at most `residual_tol·n`.
    pub residual_tol: f64,
    /// Tolerance used to validate each factor as unitary.
    pub unitarity_tol: f64,
    /// Seed for the preconditioning gates.
    pub seed: u64,
    pub precondition_attempts: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self {
            polar: PolarOptions::default(),
            residual_tol: 1e-9,
            unitarity_tol: 1e-10,
            seed: 0,
            precondition_attempts: 8,
        }
    }
}

impl DecomposeOptions {
    pub fn validate(&self) -> Result<()> {
        self.polar.validate()?;
        for (name, v) in [
            ("residual_tol", self.residual_tol),
            ("unitarity_tol", self.unitarity_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidOptions(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PolarRoute {
    Auto,
    Spectral,
}

/// Polar factors of the top block pair, kept for diagnostics.
struct TopPolar {
    p11: PolarFactors,
    p12: PolarFactors,
    used_spectral: bool,
}

fn completion_for(rule: &CompletionRule, off_diagonal: bool) -> CompletionRule {
    match rule {
        CompletionRule::CanonicalClassical if off_diagonal => CompletionRule::Uniform(I),
        CompletionRule::CanonicalClassical => CompletionRule::Uniform(-I),
        other => other.clone(),
    }
}

fn polar_with_route(
    m: &CMatrix,
    opts: &PolarOptions,
    route: PolarRoute,
) -> Result<(PolarFactors, bool)> {
    match route {
        PolarRoute::Spectral => Ok((polar_spectral(m, opts)?, true)),
        PolarRoute::Auto => match polar_decompose(m, opts) {
            Ok(f) => Ok((f, false)),
            Err(Error::NonConvergence { .. }) => Ok((polar_spectral(m, opts)?, true)),
            Err(e) => Err(e),
        },
    }
}

fn top_polar(u: &CMatrix, opts: &PolarOptions, route: PolarRoute) -> Result<TopPolar> {
    let blocks = block_split(u)?;
    let (o11, o12) = match route {
        PolarRoute::Auto => (
            opts.with_completion(completion_for(&opts.completion, false)),
            opts.with_completion(completion_for(&opts.completion, true)),
        ),
        PolarRoute::Spectral => (
            opts.with_completion(CompletionRule::IdentityLike),
            opts.with_completion(CompletionRule::IdentityLike),
        ),
    };
    let (p11, s11) = polar_with_route(&blocks.u11, &o11, route)?;
    let (p12, s12) = polar_with_route(&blocks.u12, &o12, route)?;
    Ok(TopPolar {
        p11,
        p12,
        used_spectral: s11 || s12,
    })
}

/// Raw `(A, B, C, D)` from the top polar pair; no validation.
fn factors_from_polar(u: &CMatrix, top: &TopPolar, variant: Variant) -> [CMatrix; 4] {
    let blocks = block_split(u).expect("caller checked the shape");
    let si = I * variant.sign();
    let (p11, v11) = (&top.p11.p, &top.p11.v);
    let (p12, v12) = (&top.p12.p, &top.p12.v);
    let v11h = v11.adjoint();
    let a = (p11 + p12 * si) * v11;
    let m = p11 - p12 * si;
    let c = &v11h * &m * &m * v11;
    let d = &v11h * v12 * (-si);
    let b = &blocks.u21 + &blocks.u22 * d.adjoint();
    [a, b, c, d]
}

fn try_factor(
    u: &CMatrix,
    variant: Variant,
    opts: &DecomposeOptions,
    route: PolarRoute,
) -> std::result::Result<BlockFactors, (String, f64)> {
    let n = u.nrows();
    let top = top_polar(u, &opts.polar, route).map_err(|e| (e.to_string(), f64::INFINITY))?;
    let [a, b, c, d] = factors_from_polar(u, &top, variant);
    let validate = |name: &str, m: CMatrix| {
        UnitaryMatrix::with_tolerance(m, opts.unitarity_tol).map_err(|e| match e {
            Error::NotUnitary { residual, .. } => (format!("factor {name} not unitary"), residual),
            other => (other.to_string(), f64::INFINITY),
        })
    };
    let fallback = if route == PolarRoute::Spectral || top.used_spectral {
        Fallback::Spectral
    } else {
        Fallback::None
    };
    let mut factors = BlockFactors {
        a: validate("A", a)?,
        b: validate("B", b)?,
        c: validate("C", c)?,
        d: validate("D", d)?,
        form: Form::Bzxz,
        variant,
        residual: 0.0,
        fallback,
        preconditioning: None,
    };
    factors.residual = frobenius_distance(&factors.product(), u).expect("same shape");
    let gate = opts.residual_tol * n as f64;
    if factors.residual > gate {
        return Err(("reconstruction".into(), factors.residual));
    }
    Ok(factors)
}

/// Factors `U = diag(A, B)·N(C)·diag(I, D)`.
///
/// Runs the fallback ladder: automatic polar routes first, then all-spectral
/// polar factors, then random top-wire preconditioning seeded by
/// `opts.seed`. Fails with [`Error::DecompositionFailed`] only if every
/// rung misses the residual gate.
pub fn block_zxz(u: &UnitaryMatrix, variant: Variant, opts: &DecomposeOptions) -> Result<BlockFactors> {
    block_zxz_matrix(u.entries(), variant, opts)
}

pub(crate) fn block_zxz_matrix(
    u: &CMatrix,
    variant: Variant,
    opts: &DecomposeOptions,
) -> Result<BlockFactors> {
    opts.validate()?;
    check_even(u)?;
    if let Ok(f) = try_factor(u, variant, opts, PolarRoute::Auto) {
        return Ok(f);
    }
    let last = match try_factor(u, variant, opts, PolarRoute::Spectral) {
        Ok(f) => return Ok(f),
        Err(e) => e,
    };
    match precondition(u, variant, opts) {
        Ok(f) => Ok(f),
        Err(Error::DecompositionFailed { residual, .. }) => Err(Error::DecompositionFailed {
            stage: format!(
                "block-ZXZ of {}x{} matrix ({}; preconditioning also failed)",
                u.nrows(),
                u.ncols(),
                last.0
            ),
            residual: residual.min(last.1),
            tolerance: opts.residual_tol * u.nrows() as f64,
        }),
        Err(e) => Err(e),
    }
}

/// The last rung of the ladder on its own: factors `(G⊗I)·U·(G′⊗I)` for
/// random single-qubit `G, G′` drawn from `opts.seed`.
pub fn block_zxz_preconditioned(
    u: &UnitaryMatrix,
    variant: Variant,
    opts: &DecomposeOptions,
) -> Result<BlockFactors> {
    opts.validate()?;
    check_even(u.entries())?;
    precondition(u.entries(), variant, opts)
}

fn precondition(u: &CMatrix, variant: Variant, opts: &DecomposeOptions) -> Result<BlockFactors> {
    let n = u.nrows();
    let h = n / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = f64::INFINITY;
    for _ in 0..opts.precondition_attempts.max(1) {
        let g = random_unitary(2, &mut rng).as_mat2().expect("2x2");
        let g2 = random_unitary(2, &mut rng).as_mat2().expect("2x2");
        let w = kron_identity(&g, h) * u * kron_identity(&g2, h);
        match try_factor(&w, variant, opts, PolarRoute::Auto) {
            Ok(mut factors) => {
                factors.fallback = Fallback::Preconditioned;
                factors.preconditioning = Some(Preconditioning {
                    left: g.adjoint(),
                    right: g2.adjoint(),
                    seed: opts.seed,
                });
                factors.residual = frobenius_distance(&factors.product(), u).expect("same shape");
                if factors.residual <= opts.residual_tol * n as f64 {
                    return Ok(factors);
                }
                best = best.min(factors.residual);
            }
            Err((_, r)) => best = best.min(r),
        }
    }
    Err(Error::DecompositionFailed {
        stage: format!("preconditioned block-ZXZ of {n}x{n} matrix"),
        residual: best,
        tolerance: opts.residual_tol * n as f64,
    })
}

/// Factors `U = N(A′)·diag(B′, C′)·N(D′)` through the block-ZXZ factors of
/// `F·U·F`.
pub fn dual_block_xzx(
    u: &UnitaryMatrix,
    variant: Variant,
    opts: &DecomposeOptions,
) -> Result<BlockFactors> {
    dual_block_xzx_matrix(u.entries(), variant, opts)
}

pub(crate) fn dual_block_xzx_matrix(
    u: &CMatrix,
    variant: Variant,
    opts: &DecomposeOptions,
) -> Result<BlockFactors> {
    check_even(u)?;
    let conj = hadamard_conjugate(u)?;
    let inner = block_zxz_matrix(&conj, variant, opts)?;
    dual_from_conjugate_factors(u, inner, opts)
}

fn dual_from_conjugate_factors(
    u: &CMatrix,
    inner: BlockFactors,
    opts: &DecomposeOptions,
) -> Result<BlockFactors> {
    let (a, b, c) = (inner.a.entries(), inner.b.entries(), inner.c.entries());
    let tol = opts.unitarity_tol;
    let h2 = hadamard2();
    let mut f = BlockFactors {
        a: UnitaryMatrix::with_tolerance(b * a.adjoint(), tol)?,
        b: inner.a.clone(),
        c: UnitaryMatrix::with_tolerance(a * c, tol)?,
        d: inner.d.clone(),
        form: Form::Bxzx,
        variant: inner.variant,
        residual: 0.0,
        fallback: inner.fallback,
        preconditioning: inner.preconditioning.map(|pc| Preconditioning {
            left: h2 * pc.left * h2,
            right: h2 * pc.right * h2,
            seed: pc.seed,
        }),
    };
    f.residual = frobenius_distance(&f.product(), u)?;
    let gate = opts.residual_tol * u.nrows() as f64;
    if f.residual > gate {
        return Err(Error::DecompositionFailed {
            stage: format!("dual block-XZX of {}x{} matrix", u.nrows(), u.ncols()),
            residual: f.residual,
            tolerance: gate,
        });
    }
    Ok(f)
}

/// Dispatches on `form`.
pub fn decompose(
    u: &UnitaryMatrix,
    form: Form,
    variant: Variant,
    opts: &DecomposeOptions,
) -> Result<BlockFactors> {
    match form {
        Form::Bzxz => block_zxz(u, variant, opts),
        Form::Bxzx => dual_block_xzx(u, variant, opts),
    }
}

/// Residuals of a factorization against its source matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorReport {
    /// `‖A(I+C) − 2U11‖, ‖B(I−C) − 2U21‖, ‖A(I−C)D − 2U12‖, ‖B(I+C)D − 2U22‖`
    /// for the block-ZXZ form (measured against the preconditioned matrix
    /// when preconditioning was applied); `None` for the dual form.
    pub blocks: Option<[f64; 4]>,
    /// `‖product − U‖_F`.
    pub total: f64,
}

pub fn verify_factors(u: &CMatrix, f: &BlockFactors) -> Result<FactorReport> {
    let n = u.nrows();
    let h = f.half_dim();
    if !u.is_square() || n != 2 * h || [&f.b, &f.c, &f.d].iter().any(|m| m.dim() != h) {
        return Err(Error::ShapeMismatch(format!(
            "factors of size {h} do not fit a {}x{} matrix",
            u.nrows(),
            u.ncols()
        )));
    }
    let total = frobenius_distance(&f.product(), u)?;
    let blocks = match f.form {
        Form::Bxzx => None,
        Form::Bzxz => {
            let target = match &f.preconditioning {
                None => u.clone(),
                Some(pc) => {
                    kron_identity(&pc.left.adjoint(), h) * u * kron_identity(&pc.right.adjoint(), h)
                }
            };
            let bl = block_split(&target)?;
            let id = CMatrix::identity(h, h);
            let (a, b, c, d) = (f.a.entries(), f.b.entries(), f.c.entries(), f.d.entries());
            let two = Complex64::from(2.0);
            let plus = &id + c;
            let minus = &id - c;
            Some([
                (a * &plus - &bl.u11 * two).norm(),
                (b * &minus - &bl.u21 * two).norm(),
                (a * &minus * d - &bl.u12 * two).norm(),
                (b * &plus * d - &bl.u22 * two).norm(),
            ])
        }
    };
    Ok(FactorReport { blocks, total })
}

/// Rewrites a block-ZXZ factorization as a product of block-NOT, block phasor
/// (`diag(I, V)`) and block negator (`N(V)`) matrices, leftmost factor first:
/// `[X, diag(I,A), X, diag(I,B), N(C), diag(I,D)]` where `X` is the block
/// NOT. Preconditioning gates `G ⊗ I` are expanded through their scalar
/// factorization into six further factors each.
pub fn expand_to_negator_phasor_blocks(f: &BlockFactors) -> Result<Vec<CMatrix>> {
    if f.form != Form::Bzxz {
        return Err(Error::InvalidOptions(
            "negator/phasor block expansion needs block-ZXZ factors".into(),
        ));
    }
    let h = f.half_dim();
    let n = 2 * h;
    let not = block_not(n);
    let core = vec![
        not.clone(),
        phasor_block(f.a.entries()),
        not.clone(),
        phasor_block(f.b.entries()),
        negator_block(f.c.entries()),
        phasor_block(f.d.entries()),
    ];
    let Some(pc) = &f.preconditioning else {
        return Ok(core);
    };
    let expand_gate = |g: &Mat2| -> Result<Vec<CMatrix>> {
        let s = scalar_zxz(&u2_parameters(g)?, f.variant);
        let scaled = |z: Complex64| CMatrix::identity(h, h) * z;
        Ok(vec![
            not.clone(),
            phasor_block(&scaled(s.a)),
            not.clone(),
            phasor_block(&scaled(s.b)),
            negator_block(&scaled(s.c)),
            phasor_block(&scaled(s.d)),
        ])
    };
    let mut out = expand_gate(&pc.left)?;
    out.extend(core);
    out.extend(expand_gate(&pc.right)?);
    Ok(out)
}

fn check_even(u: &CMatrix) -> Result<()> {
    if !u.is_square() {
        return Err(Error::ShapeMismatch(format!("{}x{} matrix", u.nrows(), u.ncols())));
    }
    if !u.nrows().is_multiple_of(2) {
        return Err(Error::OddDimension(u.nrows()));
    }
    Ok(())
}
