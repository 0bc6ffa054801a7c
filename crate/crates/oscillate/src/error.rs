//! Error type shared across the toolkit.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cube is empty on axis {axis}")]
    EmptyCube { axis: usize },
    #[error("cube [{lo}, {hi}) out of range on axis {axis} (grid has {n} cells)")]
    CubeOutOfRange {
        axis: usize,
        lo: usize,
        hi: usize,
        n: usize,
    },
    #[error("cell index {index} out of range (axis {axis} has {n} cells)")]
    CellOutOfRange { axis: usize, index: usize, n: usize },
    #[error("grids have different shapes")]
    GridMismatch,
    #[error("operation requires a torus function")]
    NotTorus,
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("atom cube needs an even cell count on axis {axis}, got {len}")]
    OddAtomCube { axis: usize, len: usize },
    #[error("atom weight vanishes")]
    ZeroWeight,
    #[error("unknown atom id {0}")]
    UnknownAtom(usize),
    #[error("dictionary does not span the sampled function (phase-1 residual {residual:.3e})")]
    Infeasible { residual: f64 },
    #[error("{what} {got} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
