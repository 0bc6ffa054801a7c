//! Deterministic pseudo-random generation for verification sweeps. SplitMix64
//! keeps seeded runs byte-identical across platforms and thread counts.

use crate::grid::GridFunction;

/// SplitMix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn uniform_values(&mut self, n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|_| self.uniform(lo, hi)).collect()
    }
}

/// Random function on `[0, 1]` with values in `[-1, 1]`.
pub fn random_grid_1d(rng: &mut SplitMix64, n: usize) -> GridFunction {
    GridFunction::new_1d(0.0, 1.0, rng.uniform_values(n, -1.0, 1.0)).expect("valid random grid")
}

/// Random torus function with values in `[-1, 1]`.
pub fn random_grid_torus(rng: &mut SplitMix64, n: usize) -> GridFunction {
    GridFunction::new_torus(rng.uniform_values(n, -1.0, 1.0)).expect("valid random torus grid")
}
