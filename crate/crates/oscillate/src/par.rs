//! Sweep helpers: data-parallel with rayon under the `parallel` feature,
//! plain loops otherwise. Both paths produce identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Larger value wins; ties resolve to the smaller index so the parallel
/// reduction agrees with the sequential one bit for bit.
#[inline]
fn better(a: (usize, f64), b: (usize, f64)) -> (usize, f64) {
    if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

/// Index and value of the maximum of `eval` over `0..n`.
#[cfg(feature = "parallel")]
pub(crate) fn argmax<F>(n: usize, eval: F) -> Option<(usize, f64)>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    (0..n)
        .into_par_iter()
        .map(|i| (i, eval(i)))
        .reduce_with(better)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn argmax<F>(n: usize, eval: F) -> Option<(usize, f64)>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    (0..n).map(|i| (i, eval(i))).reduce(better)
}

/// Evaluates `eval` over `0..n` into a vector (index-stable, so callers can
/// reduce in a fixed order afterwards).
#[cfg(feature = "parallel")]
pub(crate) fn map_collect<F>(n: usize, eval: F) -> Vec<f64>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    (0..n).into_par_iter().map(eval).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<F>(n: usize, eval: F) -> Vec<f64>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    (0..n).map(eval).collect()
}
