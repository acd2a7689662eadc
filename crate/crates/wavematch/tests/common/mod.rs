#![allow(dead_code)]

pub mod oracles;

use rand::{Rng as _, SeedableRng as _};
use rand_chacha::ChaCha8Rng;
use wavematch::Signal;

/// Uniform random test signal in [-1, 1).
pub fn random_signal(n: usize, seed: u64) -> Signal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Signal::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(), 0.1).unwrap()
}
