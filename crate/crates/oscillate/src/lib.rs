//! Numerical toolkit for oscillation norms on sampled functions: maximal
//! operators, BMO and weak-BMO norms, special-atom decompositions with exact
//! ℓ1-optimal costs, Zygmund seminorms, and Poisson extensions to the disk,
//! plus verification sweeps for the inequalities tying them together.
//!
//! Everything operates on [`grid::GridFunction`] — cell-midpoint samples on
//! an interval, the torus, or a rectangle — and every supremum ranges over a
//! finite family of index-range cubes. All operations are pure; the cube and
//! point sweeps are data-parallel when the `parallel` feature (default) is
//! on, and plain loops otherwise. Max-reductions break ties by lowest index
//! and integral sums run in fixed order, so both builds produce identical
//! output.

pub mod atoms;
pub mod error;
pub mod grid;
pub mod maximal;
pub mod num;
pub mod optimize;
mod par;
pub mod poisson;
pub mod rng;
pub mod zygmund;

pub use error::{Error, Result};

/// Caps the data-parallel thread count. No-op without the `parallel`
/// feature, or once a sweep has already initialized the global pool.
pub fn configure_threads(n: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
}
