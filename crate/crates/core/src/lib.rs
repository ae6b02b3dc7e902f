//! Compile unitary matrices into circuits of controlled single-qubit gates
//! through the block-ZXZ factorization
//! `U = diag(A, B) · ½[[I+C, I−C], [I−C, I+C]] · diag(I, D)` and its dual.
//!
//! Applied recursively to a `2^w × 2^w` unitary, each level costs two
//! Hadamard gates on the top wire and four half-size unitaries controlled
//! by it. Permutation matrices stay inside the permutation group at every
//! level, which yields classical reversible circuits of controlled NOTs.

pub mod error;
pub mod linalg;
pub mod polar;
pub mod decompose;
pub mod circuit;
pub mod classical;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{CMatrix, Mat2, UnitaryMatrix};
pub use decompose::{BlockFactors, DecomposeOptions, Form, Variant};
pub use polar::{CompletionRule, PolarFactors, PolarOptions};
