use blockzxz::circuit::{evaluate_circuit, synthesize, Lowering, SynthesisOptions};
use blockzxz::classical::classical_circuit;
use blockzxz_bench::{permutation, unitary};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn synthesis(c: &mut Criterion) {
    let u = unitary(16, 31);
    c.bench_function("synthesize_w4_u2", |b| {
        b.iter(|| synthesize(black_box(&u), &SynthesisOptions::default()).unwrap())
    });
    let lowered = SynthesisOptions {
        lowering: Lowering::NegatorPhasor,
        ..SynthesisOptions::default()
    };
    c.bench_function("synthesize_w4_negator_phasor", |b| {
        b.iter(|| synthesize(black_box(&u), &lowered).unwrap())
    });
    let circuit = synthesize(&u, &SynthesisOptions::default()).unwrap();
    c.bench_function("evaluate_w4", |b| b.iter(|| evaluate_circuit(black_box(&circuit))));

    let p = permutation(64, 32);
    c.bench_function("classical_circuit_w6", |b| {
        b.iter(|| classical_circuit(black_box(&p)).unwrap())
    });
}

criterion_group!(benches, synthesis);
criterion_main!(benches);
