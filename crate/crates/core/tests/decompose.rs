use blockzxz::decompose::{
    block_zxz, block_zxz_preconditioned, decompose, expand_to_negator_phasor_blocks, scalar_zxz, u2_parameters,
    verify_factors, Fallback,
};
use blockzxz::linalg::{
    frobenius_distance, hadamard_conjugate, negator_block, parse_matrix, random_unitary, I, ONE,
    ZERO,
};
use blockzxz::{
    CMatrix, CompletionRule, DecomposeOptions, Error, Form, PolarOptions, UnitaryMatrix, Variant,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXAMPLE: &str = "4\nscale 1/12\n\
    8 0 4+8i 0\n\
    2+i 3-9i -2i -3-6i\n\
    1-7i 6 -6+2i -3+3i\n\
    3+4i 3-3i 2-4i 9i\n";

fn example() -> UnitaryMatrix {
    UnitaryMatrix::new(parse_matrix(EXAMPLE).unwrap()).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn m2(e: [Complex64; 4]) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &e)
}

fn heron10() -> DecomposeOptions {
    DecomposeOptions {
        polar: PolarOptions {
            max_iter: 10,
            ..PolarOptions::default()
        },
        ..DecomposeOptions::default()
    }
}

fn max_entry_diff(x: &CMatrix, y: &CMatrix) -> f64 {
    (x - y).iter().map(|z| z.re.abs().max(z.im.abs())).fold(0.0, f64::max)
}

#[test]
fn numeric_example_first_variant() {
    let f = block_zxz(&example(), Variant::V1, &heron10()).unwrap();
    let want = [
        m2([c(0.67, 0.72), c(-0.19, 0.03), c(0.18, 0.06), c(0.80, -0.57)]),
        m2([c(-0.33, -0.64), c(0.50, -0.47), c(0.69, 0.00), c(-0.20, -0.70)]),
        m2([c(-0.04, -0.95), c(-0.01, -0.30), c(-0.07, 0.29), c(0.25, -0.92)]),
        m2([c(0.87, -0.43), c(-0.15, 0.20), c(-0.08, -0.24), c(-0.68, -0.68)]),
    ];
    for (got, want) in [&f.a, &f.b, &f.c, &f.d].iter().zip(want.iter()) {
        assert!(max_entry_diff(got.entries(), want) <= 0.005, "{}", got.entries());
    }
    assert_eq!(f.fallback, Fallback::None);
    assert!(f.residual < 1e-12);
}

#[test]
fn numeric_example_second_variant() {
    let f = block_zxz(&example(), Variant::V2, &heron10()).unwrap();
    let want = [
        m2([c(0.67, -0.72), c(0.19, -0.03), c(0.16, 0.10), c(-0.30, -0.93)]),
        m2([c(0.50, -0.52), c(0.50, 0.47), c(-0.19, 0.66), c(0.70, 0.20)]),
        m2([c(-0.04, 0.95), c(-0.07, -0.29), c(-0.01, 0.30), c(0.25, 0.92)]),
        m2([c(-0.87, 0.43), c(0.15, -0.20), c(0.08, 0.24), c(0.68, 0.68)]),
    ];
    for (got, want) in [&f.a, &f.b, &f.c, &f.d].iter().zip(want.iter()) {
        assert!(max_entry_diff(got.entries(), want) <= 0.005, "{}", got.entries());
    }
    assert!(f.residual < 1e-12);
}

#[test]
fn numeric_example_block_equations() {
    for v in [Variant::V1, Variant::V2] {
        let u = example();
        let f = block_zxz(&u, v, &heron10()).unwrap();
        let r = verify_factors(u.entries(), &f).unwrap();
        assert!(r.blocks.unwrap().iter().all(|&x| x < 1e-12));
        assert!(r.total < 1e-12);
    }
}

fn spin(t: f64) -> UnitaryMatrix {
    let (s, co) = t.sin_cos();
    let mut m = CMatrix::identity(4, 4);
    m[(1, 1)] = co.into();
    m[(1, 2)] = s.into();
    m[(2, 1)] = (-s).into();
    m[(2, 2)] = co.into();
    UnitaryMatrix::new(m).unwrap()
}

/// Analytic factors of the spin-interaction matrix with free phase `z`.
fn spin_factors(t: f64, z: Complex64, v: Variant) -> [CMatrix; 4] {
    let e = Complex64::from_polar(1.0, t);
    match v {
        Variant::V1 => [
            m2([ONE, ZERO, ZERO, e]),
            m2([ZERO, I * e, -I * z, ZERO]),
            m2([ONE, ZERO, ZERO, ONE / (e * e)]),
            m2([ZERO, I / z, -I, ZERO]),
        ],
        Variant::V2 => [
            m2([ONE, ZERO, ZERO, ONE / e]),
            m2([ZERO, -I / e, I * z, ZERO]),
            m2([ONE, ZERO, ZERO, e * e]),
            m2([ZERO, -I / z, I, ZERO]),
        ],
    }
}

#[test]
fn spin_example_matches_analytic_factors() {
    let completions = [
        CompletionRule::CanonicalClassical,
        CompletionRule::IdentityLike,
        CompletionRule::Uniform(Complex64::from_polar(1.0, 0.4)),
    ];
    for t in [std::f64::consts::FRAC_PI_6, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_3] {
        let u = spin(t);
        for rule in &completions {
            for v in [Variant::V1, Variant::V2] {
                let mut opts = DecomposeOptions::default();
                opts.polar.completion = rule.clone();
                let f = block_zxz(&u, v, &opts).unwrap();
                // the free phase shows up in the corner of D
                let d01 = f.d.entries()[(0, 1)];
                let z = I * v.sign() / d01;
                assert!((z.norm() - 1.0).abs() < 1e-12);
                if *rule == CompletionRule::CanonicalClassical {
                    assert!((z - I).norm() < 1e-12);
                }
                let want = spin_factors(t, z, v);
                for (got, want) in [&f.a, &f.b, &f.c, &f.d].iter().zip(want.iter()) {
                    assert!(frobenius_distance(got.entries(), want).unwrap() < 1e-10);
                }
                assert!(f.residual < 1e-10);
                let analytic = blockzxz::BlockFactors {
                    a: UnitaryMatrix::new(want[0].clone()).unwrap(),
                    b: UnitaryMatrix::new(want[1].clone()).unwrap(),
                    c: UnitaryMatrix::new(want[2].clone()).unwrap(),
                    d: UnitaryMatrix::new(want[3].clone()).unwrap(),
                    ..f.clone()
                };
                assert!(frobenius_distance(&analytic.product(), u.entries()).unwrap() < 1e-10);
            }
        }
    }
}

#[test]
fn identity_factors() {
    let u = UnitaryMatrix::identity(4);
    let f = block_zxz(&u, Variant::V1, &DecomposeOptions::default()).unwrap();
    assert!(frobenius_distance(f.a.entries(), &CMatrix::identity(2, 2)).unwrap() < 1e-14);
    assert!(frobenius_distance(f.c.entries(), &CMatrix::identity(2, 2)).unwrap() < 1e-14);
    assert!(f.residual < 1e-14);
}

#[test]
fn permutation_example_with_canonical_completion() {
    let mut m = CMatrix::zeros(4, 4);
    for (col, row) in [2usize, 0, 3, 1].into_iter().enumerate() {
        m[(row, col)] = ONE;
    }
    let mut opts = DecomposeOptions::default();
    opts.polar.completion = CompletionRule::CanonicalClassical;
    let f = block_zxz(&UnitaryMatrix::new(m).unwrap(), Variant::V1, &opts).unwrap();
    let swap = m2([ZERO, ONE, ONE, ZERO]);
    assert!(frobenius_distance(f.a.entries(), &swap).unwrap() < 1e-14);
    assert!(frobenius_distance(f.b.entries(), &CMatrix::identity(2, 2)).unwrap() < 1e-14);
    assert!(frobenius_distance(f.c.entries(), &m2([-ONE, ZERO, ZERO, ONE])).unwrap() < 1e-14);
    assert!(frobenius_distance(f.d.entries(), &swap).unwrap() < 1e-14);
}

#[test]
fn round_trips_all_sizes_forms_and_variants() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for n in [2usize, 4, 6, 8, 16, 32] {
        for _ in 0..5 {
            let u = random_unitary(n, &mut rng);
            for form in [Form::Bzxz, Form::Bxzx] {
                for v in [Variant::V1, Variant::V2] {
                    let f = decompose(&u, form, v, &DecomposeOptions::default()).unwrap();
                    assert_eq!(f.form, form);
                    let d = frobenius_distance(&f.product(), u.entries()).unwrap();
                    assert!(d <= 1e-9 * n as f64, "n={n} {form:?} {v:?} residual {d}");
                    for x in [&f.a, &f.b, &f.c, &f.d] {
                        assert!(x.unitarity_residual() < 1e-10);
                    }
                }
            }
        }
    }
}

#[test]
fn dual_form_matches_conjugated_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let u = random_unitary(8, &mut rng);
    let opts = DecomposeOptions::default();
    let dual = decompose(&u, Form::Bxzx, Variant::V1, &opts).unwrap();
    let conj = UnitaryMatrix::new(hadamard_conjugate(u.entries()).unwrap()).unwrap();
    let inner = block_zxz(&conj, Variant::V1, &opts).unwrap();
    assert_eq!(dual.b, inner.a);
    assert_eq!(dual.d, inner.d);
    assert!(frobenius_distance(dual.a.entries(), &(inner.b.entries() * inner.a.entries().adjoint())).unwrap() < 1e-14);
    assert!(frobenius_distance(dual.c.entries(), &(inner.a.entries() * inner.c.entries())).unwrap() < 1e-14);
}

#[test]
fn single_qubit_case_agrees_with_scalar_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..50 {
        let u = random_unitary(2, &mut rng);
        let p = u2_parameters(&u.as_mat2().unwrap()).unwrap();
        for v in [Variant::V1, Variant::V2] {
            let f = block_zxz(&u, v, &DecomposeOptions::default()).unwrap();
            let s = scalar_zxz(&p, v);
            for (x, z) in [(&f.a, s.a), (&f.b, s.b), (&f.c, s.c), (&f.d, s.d)] {
                assert!((x.entries()[(0, 0)] - z).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn swapping_middle_and_right_factor_breaks_reconstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let u = random_unitary(4, &mut rng);
    let mut f = block_zxz(&u, Variant::V1, &DecomposeOptions::default()).unwrap();
    std::mem::swap(&mut f.c, &mut f.d);
    assert!(frobenius_distance(&f.product(), u.entries()).unwrap() > 0.1);
}

#[test]
fn preconditioned_rung_reconstructs_and_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let u = random_unitary(8, &mut rng);
    let opts = DecomposeOptions {
        seed: 17,
        ..DecomposeOptions::default()
    };
    let f = block_zxz_preconditioned(&u, Variant::V2, &opts).unwrap();
    assert_eq!(f.fallback, Fallback::Preconditioned);
    let pc = f.preconditioning.unwrap();
    assert_eq!(pc.seed, 17);
    assert!(f.residual < 1e-12);
    let again = block_zxz_preconditioned(&u, Variant::V2, &opts).unwrap();
    assert_eq!(f, again);
    let r = verify_factors(u.entries(), &f).unwrap();
    assert!(r.blocks.unwrap().iter().all(|&x| x < 1e-12));
    let other = block_zxz_preconditioned(&u, Variant::V2, &DecomposeOptions { seed: 18, ..opts }).unwrap();
    assert_ne!(f.a, other.a);
}

#[test]
fn expansion_into_negator_and_phasor_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let u = random_unitary(8, &mut rng);
    let opts = DecomposeOptions::default();
    for f in [
        block_zxz(&u, Variant::V1, &opts).unwrap(),
        block_zxz_preconditioned(&u, Variant::V1, &opts).unwrap(),
    ] {
        let parts = expand_to_negator_phasor_blocks(&f).unwrap();
        let expected_len = if f.preconditioning.is_some() { 18 } else { 6 };
        assert_eq!(parts.len(), expected_len);
        let prod = parts.iter().fold(CMatrix::identity(8, 8), |acc, p| acc * p);
        assert!(frobenius_distance(&prod, u.entries()).unwrap() < 1e-10);
    }
    let dual = decompose(&u, Form::Bxzx, Variant::V1, &opts).unwrap();
    assert!(expand_to_negator_phasor_blocks(&dual).is_err());
}

#[test]
fn error_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let u = random_unitary(3, &mut rng);
    assert!(matches!(
        block_zxz(&u, Variant::V1, &DecomposeOptions::default()),
        Err(Error::OddDimension(3))
    ));
    let bad = DecomposeOptions {
        residual_tol: 0.0,
        ..DecomposeOptions::default()
    };
    assert!(matches!(
        block_zxz(&UnitaryMatrix::identity(2), Variant::V1, &bad),
        Err(Error::InvalidOptions(_))
    ));
    assert!(matches!(
        UnitaryMatrix::new(CMatrix::from_element(2, 2, ONE)),
        Err(Error::NotUnitary { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn factors_are_unitary_and_reconstruct(seed in any::<u64>(), half in 1usize..6, second in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 * half;
        let u = random_unitary(n, &mut rng);
        let v = if second { Variant::V2 } else { Variant::V1 };
        let f = block_zxz(&u, v, &DecomposeOptions::default()).unwrap();
        prop_assert!(f.residual <= 1e-9 * n as f64);
        for x in [&f.a, &f.b, &f.c, &f.d] {
            prop_assert!(x.unitarity_residual() <= 1e-10);
        }
        let r = verify_factors(u.entries(), &f).unwrap();
        prop_assert!(r.blocks.unwrap().iter().all(|&x| x < 1e-9));
    }

    #[test]
    fn negator_blocks_compose(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_unitary(n, &mut rng);
        let b = random_unitary(n, &mut rng);
        let lhs = negator_block(a.entries()) * negator_block(b.entries());
        let rhs = negator_block(&(a.entries() * b.entries()));
        prop_assert!(frobenius_distance(&lhs, &rhs).unwrap() < 1e-12);
    }
}
