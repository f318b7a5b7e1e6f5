//! Benchmark fixtures shared by the criterion benches.

use incrrelay_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic cloud of `n` points in the unit square.
pub fn random_cloud(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Complex64::new(rng.random::<f64>(), rng.random::<f64>()))
        .collect()
}
