//! Deterministic fixtures shared by the workbench benchmarks.

use num_bigint::BigInt;
use num_rational::BigRational;

use ramsey_core::algebra::{Element, Matrix, SortedPrefix};

/// A dense matrix with small mixed-sign entries, deterministic in the
/// seed. Entries cycle through a fixed residue pattern so determinants
/// stay nonzero for the seeds the benchmarks use.
pub fn dense_matrix(order: usize, seed: u64) -> Matrix {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    Matrix::from_fn(order, |_, _| {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let v = ((state >> 33) % 19) as i64 - 9;
        BigRational::from_integer(BigInt::from(v))
    })
}

/// A scalar prefix of small naturals.
pub fn natural_prefix(len: usize) -> SortedPrefix {
    SortedPrefix::scalars((1..=len as i64).map(Element::integer).collect())
}
