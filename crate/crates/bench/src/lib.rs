//! Shared input generators for the benchmarks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spectraflow::{Matrix, RealSymMatrix};

/// Seeded dense symmetric matrix with entries in `[-1, 1)`.
pub fn random_symmetric(d: usize, seed: u64) -> RealSymMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..=i {
            let x: f64 = rng.random_range(-1.0..1.0);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    RealSymMatrix::new(m).expect("constructed symmetric")
}
