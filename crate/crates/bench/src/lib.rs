//! Shared fixtures for the codec benchmarks.

use qaloco::{BitMessage, Code, CodeParams};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// `(q, m, x)` instances benchmarked, taken from the tabulated rate grids.
pub const CONFIGS: [(u32, usize, usize); 6] = [
    (4, 26, 1),
    (4, 38, 2),
    (8, 44, 1),
    (16, 66, 1),
    (32, 70, 1),
    (32, 108, 2),
];

pub fn code(q: u32, m: usize, x: usize) -> Code {
    Code::new(CodeParams::new(q, m, x).expect("valid params")).expect("valid code")
}

/// `count` seeded random messages of `bits` bits each.
pub fn messages(bits: u64, count: usize, seed: u64) -> Vec<BitMessage> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| BitMessage::new((0..bits).map(|_| rng.random::<bool>()).collect()))
        .collect()
}
