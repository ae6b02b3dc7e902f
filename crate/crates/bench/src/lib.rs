//! Seeded fixtures shared by the benchmarks.

use blockzxz::classical::Permutation;
use blockzxz::linalg::random_unitary;
use blockzxz::{CMatrix, UnitaryMatrix};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn unitary(n: usize, seed: u64) -> UnitaryMatrix {
    random_unitary(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Top-left half block of a random unitary, generically invertible.
pub fn half_block(n: usize, seed: u64) -> CMatrix {
    let u = unitary(2 * n, seed);
    u.entries().view((0, 0), (n, n)).into_owned()
}

pub fn permutation(n: usize, seed: u64) -> UnitaryMatrix {
    let mut m: Vec<usize> = (0..n).collect();
    m.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    UnitaryMatrix::new(Permutation::from_mapping(m).unwrap().matrix()).unwrap()
}
