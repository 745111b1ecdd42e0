//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ruelle::corpus::random_function;
use ruelle::{LocallyConstantFn, TransitionMatrix};

/// Random potential on the full `q`-shift with values in `[-2, 2)`.
pub fn full_shift_potential(q: usize, memory: usize, seed: u64) -> LocallyConstantFn {
    let a = Arc::new(TransitionMatrix::full_shift(q).expect("q >= 2"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_function(&mut rng, &a, 0.5, memory, -2.0, 2.0).expect("valid table")
}

/// Observable in the same space as `f` with values in `[-1, 1)`.
pub fn observable(f: &LocallyConstantFn, memory: usize, seed: u64) -> LocallyConstantFn {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_function(&mut rng, f.matrix(), f.theta(), memory, -1.0, 1.0).expect("valid table")
}

/// `max(1, memory - 1)`, the smallest lift level that represents `f`.
pub fn canonical_level(f: &LocallyConstantFn) -> usize {
    f.memory().saturating_sub(1).max(1)
}
