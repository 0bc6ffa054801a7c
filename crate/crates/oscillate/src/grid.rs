//! Sampled-function representation, cube enumeration, prefix-table averaging,
//! and test-function generators.
//!
//! Functions live at cell midpoints on a uniform grid over an interval, the
//! torus `[0, 2π)`, or a rectangle; integrals are midpoint sums times cell
//! volume. Cubes are unions of whole cells (index ranges), so every supremum
//! over cubes is a maximum over a finite family.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{kahan_sum, Kahan};

/// One uniform axis: `n` cells on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl AxisSpec {
    pub fn mesh(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    pub fn midpoint(&self, i: usize) -> f64 {
        self.a + (i as f64 + 0.5) * self.mesh()
    }

    fn validate(&self) -> Result<()> {
        if self.b <= self.a || !self.a.is_finite() || !self.b.is_finite() {
            return Err(Error::InvalidParam(format!(
                "axis [{}, {}] is not a proper interval",
                self.a, self.b
            )));
        }
        if self.n == 0 {
            return Err(Error::InvalidParam("axis needs at least one cell".into()));
        }
        Ok(())
    }
}

/// Uniformly sampled real-valued function in one or two dimensions.
///
/// Values are stored row-major: index `(i0, i1)` flattens to `i0 * n1 + i1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    axes: Vec<AxisSpec>,
    torus: bool,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new_1d(a: f64, b: f64, values: Vec<f64>) -> Result<Self> {
        let axis = AxisSpec {
            a,
            b,
            n: values.len(),
        };
        axis.validate()?;
        Ok(Self {
            axes: vec![axis],
            torus: false,
            values,
        })
    }

    /// Torus functions always live on `[0, 2π)`.
    pub fn new_torus(values: Vec<f64>) -> Result<Self> {
        let axis = AxisSpec {
            a: 0.0,
            b: TAU,
            n: values.len(),
        };
        axis.validate()?;
        Ok(Self {
            axes: vec![axis],
            torus: true,
            values,
        })
    }

    pub fn new_2d(axis0: AxisSpec, axis1: AxisSpec, values: Vec<f64>) -> Result<Self> {
        axis0.validate()?;
        axis1.validate()?;
        if values.len() != axis0.n * axis1.n {
            return Err(Error::InvalidParam(format!(
                "expected {} values, got {}",
                axis0.n * axis1.n,
                values.len()
            )));
        }
        Ok(Self {
            axes: vec![axis0, axis1],
            torus: false,
            values,
        })
    }

    pub fn from_fn_1d(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let axis = AxisSpec { a, b, n };
        axis.validate()?;
        let values = (0..n).map(|i| f(axis.midpoint(i))).collect();
        Self::new_1d(a, b, values)
    }

    pub fn from_fn_torus(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let axis = AxisSpec { a: 0.0, b: TAU, n };
        axis.validate()?;
        let values = (0..n).map(|i| f(axis.midpoint(i))).collect();
        Self::new_torus(values)
    }

    pub fn from_fn_2d(
        axis0: AxisSpec,
        axis1: AxisSpec,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        axis0.validate()?;
        axis1.validate()?;
        let mut values = Vec::with_capacity(axis0.n * axis1.n);
        for i in 0..axis0.n {
            for j in 0..axis1.n {
                values.push(f(axis0.midpoint(i), axis1.midpoint(j)));
            }
        }
        Self::new_2d(axis0, axis1, values)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axis(&self, k: usize) -> &AxisSpec {
        &self.axes[k]
    }

    pub fn n(&self, k: usize) -> usize {
        self.axes[k].n
    }

    pub fn total_cells(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_torus(&self) -> bool {
        self.torus
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, flat: usize) -> f64 {
        self.values[flat]
    }

    pub fn value_2d(&self, i0: usize, i1: usize) -> f64 {
        self.values[i0 * self.axes[1].n + i1]
    }

    pub fn mesh(&self, k: usize) -> f64 {
        self.axes[k].mesh()
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.mesh()).product()
    }

    pub fn domain_measure(&self) -> f64 {
        self.axes.iter().map(|a| a.b - a.a).product()
    }

    pub fn whole_cube(&self) -> Cube {
        match self.dim() {
            1 => Cube::interval(0, self.axes[0].n),
            _ => Cube::rect((0, self.axes[0].n), (0, self.axes[1].n)),
        }
    }

    pub fn same_shape(&self, other: &GridFunction) -> bool {
        self.torus == other.torus
            && self.axes.len() == other.axes.len()
            && self
                .axes
                .iter()
                .zip(&other.axes)
                .all(|(x, y)| x.n == y.n && (x.a - y.a).abs() < 1e-12 && (x.b - y.b).abs() < 1e-12)
    }

    pub fn map(&self, g: impl Fn(f64) -> f64) -> Self {
        Self {
            axes: self.axes.clone(),
            torus: self.torus,
            values: self.values.iter().map(|&v| g(v)).collect(),
        }
    }

    /// `a·f + b·g` on a shared grid.
    pub fn linear_combine(a: f64, f: &GridFunction, b: f64, g: &GridFunction) -> Result<Self> {
        if !f.same_shape(g) {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            axes: f.axes.clone(),
            torus: f.torus,
            values: f
                .values
                .iter()
                .zip(&g.values)
                .map(|(&x, &y)| a * x + b * y)
                .collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Mean over the whole domain.
    pub fn mean(&self) -> f64 {
        kahan_sum(self.values.iter().copied()) / self.total_cells() as f64
    }

    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self {
            axes: self.axes.clone(),
            torus: self.torus,
            values,
        }
    }

    fn check_cell(&self, cell: &[usize]) -> Result<()> {
        if cell.len() != self.dim() {
            return Err(Error::InvalidParam(format!(
                "cell index has {} coordinates, grid is {}-dimensional",
                cell.len(),
                self.dim()
            )));
        }
        for (axis, (&c, spec)) in cell.iter().zip(&self.axes).enumerate() {
            if c >= spec.n {
                return Err(Error::CellOutOfRange {
                    axis,
                    index: c,
                    n: spec.n,
                });
            }
        }
        Ok(())
    }

    pub(crate) fn validate_cell(&self, cell: &[usize]) -> Result<()> {
        self.check_cell(cell)
    }
}

/// Axis-aligned index-range cube: `[lo, hi)` per axis. In one dimension the
/// second axis is pinned to `[0, 1)` so cell counts multiply uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    dim: u8,
    lo: [u32; 2],
    hi: [u32; 2],
}

impl Cube {
    pub fn interval(lo: usize, hi: usize) -> Self {
        Self {
            dim: 1,
            lo: [lo as u32, 0],
            hi: [hi as u32, 1],
        }
    }

    pub fn rect(r0: (usize, usize), r1: (usize, usize)) -> Self {
        Self {
            dim: 2,
            lo: [r0.0 as u32, r1.0 as u32],
            hi: [r0.1 as u32, r1.1 as u32],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn lo(&self, axis: usize) -> usize {
        self.lo[axis] as usize
    }

    pub fn hi(&self, axis: usize) -> usize {
        self.hi[axis] as usize
    }

    pub fn len(&self, axis: usize) -> usize {
        (self.hi[axis] - self.lo[axis]) as usize
    }

    pub fn is_empty(&self) -> bool {
        (0..2).any(|k| self.hi[k] <= self.lo[k])
    }

    pub fn cell_count(&self) -> usize {
        (0..2).map(|k| self.len(k)).product()
    }

    pub fn contains(&self, cell: &[usize]) -> bool {
        cell.iter()
            .enumerate()
            .all(|(k, &c)| self.lo(k) <= c && c < self.hi(k))
    }

    pub fn measure(&self, f: &GridFunction) -> f64 {
        self.cell_count() as f64 * f.cell_volume()
    }

    /// Sort key used everywhere cube order matters: size ascending, then
    /// position.
    pub fn order_key(&self) -> (usize, usize, usize, usize, usize) {
        (
            self.cell_count(),
            self.lo(0),
            self.lo[1] as usize,
            self.hi(0),
            self.hi[1] as usize,
        )
    }
}

impl Serialize for Cube {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.dim == 1 {
            [self.lo(0), self.hi(0)].serialize(s)
        } else {
            [
                [self.lo(0), self.hi(0)],
                [self.lo[1] as usize, self.hi[1] as usize],
            ]
            .serialize(s)
        }
    }
}

/// Cumulative-sum table giving O(1) cube sums of values and of absolute
/// values.
#[derive(Debug, Clone)]
pub struct PrefixTable {
    n0: usize,
    n1: usize,
    cell_volume: f64,
    sum: Vec<f64>,
    abs_sum: Vec<f64>,
}

impl PrefixTable {
    /// Builds both tables with compensated row sums in fixed low-to-high
    /// index order.
    pub fn build(f: &GridFunction) -> Self {
        let (n0, n1) = match f.dim() {
            1 => (f.n(0), 1),
            _ => (f.n(0), f.n(1)),
        };
        let w = n1 + 1;
        let mut sum = vec![0.0; (n0 + 1) * w];
        let mut abs_sum = vec![0.0; (n0 + 1) * w];
        let mut col = vec![Kahan::new(); n1 + 1];
        let mut col_abs = vec![Kahan::new(); n1 + 1];
        for i in 0..n0 {
            let mut row = Kahan::new();
            let mut row_abs = Kahan::new();
            for j in 0..n1 {
                let v = f.values()[i * n1 + j];
                row.add(v);
                row_abs.add(v.abs());
                col[j + 1].add(row.value());
                col_abs[j + 1].add(row_abs.value());
                sum[(i + 1) * w + (j + 1)] = col[j + 1].value();
                abs_sum[(i + 1) * w + (j + 1)] = col_abs[j + 1].value();
            }
        }
        Self {
            n0,
            n1,
            cell_volume: f.cell_volume(),
            sum,
            abs_sum,
        }
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_volume
    }

    fn check(&self, q: &Cube) -> Result<()> {
        for (axis, &n) in [self.n0, self.n1].iter().enumerate() {
            if q.hi(axis) <= q.lo(axis) {
                return Err(Error::EmptyCube { axis });
            }
            if q.hi(axis) > n {
                return Err(Error::CubeOutOfRange {
                    axis,
                    lo: q.lo(axis),
                    hi: q.hi(axis),
                    n,
                });
            }
        }
        Ok(())
    }

    fn lookup(table: &[f64], w: usize, q: &Cube) -> f64 {
        let (l0, h0, l1, h1) = (q.lo(0), q.hi(0), q.lo(1), q.hi(1));
        table[h0 * w + h1] - table[l0 * w + h1] - table[h0 * w + l1] + table[l0 * w + l1]
    }

    /// Raw sum of values over the cube (no volume factor).
    pub fn cube_sum(&self, q: &Cube) -> Result<f64> {
        self.check(q)?;
        Ok(Self::lookup(&self.sum, self.n1 + 1, q))
    }

    /// Raw sum of |values| over the cube.
    pub fn cube_abs_sum(&self, q: &Cube) -> Result<f64> {
        self.check(q)?;
        Ok(Self::lookup(&self.abs_sum, self.n1 + 1, q))
    }

    /// `∫_Q f dλ` — sum times cell volume.
    pub fn cube_integral(&self, q: &Cube) -> Result<f64> {
        Ok(self.cube_sum(q)? * self.cell_volume)
    }

    pub fn cube_abs_integral(&self, q: &Cube) -> Result<f64> {
        Ok(self.cube_abs_sum(q)? * self.cell_volume)
    }

    /// Discrete `f^#_Q`: the arithmetic mean of the cell values in `Q`.
    pub fn cube_average(&self, q: &Cube) -> Result<f64> {
        Ok(self.cube_sum(q)? / q.cell_count() as f64)
    }

    /// Discrete `f_Q = |f^#_Q|`.
    pub fn cube_abs_average(&self, q: &Cube) -> Result<f64> {
        Ok(self.cube_average(q)?.abs())
    }
}

/// Shorthand for [`PrefixTable::build`].
pub fn build_prefix(f: &GridFunction) -> PrefixTable {
    PrefixTable::build(f)
}

/// Cube families the suprema range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CubeFamily {
    /// Every axis-aligned index-range cube.
    All,
    /// The dyadic halving tree.
    Dyadic,
}

impl CubeFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            CubeFamily::All => "all",
            CubeFamily::Dyadic => "dyadic",
        }
    }
}

impl std::str::FromStr for CubeFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(CubeFamily::All),
            "dyadic" => Ok(CubeFamily::Dyadic),
            other => Err(Error::Parse(format!("unknown cube family `{other}`"))),
        }
    }
}

fn dyadic_ranges(lo: usize, hi: usize, min_cells: usize, out: &mut Vec<(usize, usize)>) {
    if hi - lo >= min_cells {
        out.push((lo, hi));
    }
    if hi - lo >= 2 {
        let mid = lo + (hi - lo) / 2;
        dyadic_ranges(lo, mid, min_cells, out);
        dyadic_ranges(mid, hi, min_cells, out);
    }
}

fn dyadic_boxes(r0: (usize, usize), r1: (usize, usize), min_cells: usize, out: &mut Vec<Cube>) {
    let count = (r0.1 - r0.0) * (r1.1 - r1.0);
    if count >= min_cells {
        out.push(Cube::rect(r0, r1));
    }
    let split0 = r0.1 - r0.0 >= 2;
    let split1 = r1.1 - r1.0 >= 2;
    if !split0 && !split1 {
        return;
    }
    let halves = |r: (usize, usize), split: bool| -> Vec<(usize, usize)> {
        if split {
            let mid = r.0 + (r.1 - r.0) / 2;
            vec![(r.0, mid), (mid, r.1)]
        } else {
            vec![r]
        }
    };
    for h0 in halves(r0, split0) {
        for h1 in halves(r1, split1) {
            dyadic_boxes(h0, h1, min_cells, out);
        }
    }
}

/// All cubes of the family with at least `min_cells` cells, ordered by size
/// ascending then position.
pub fn enumerate_cubes(f: &GridFunction, family: CubeFamily, min_cells: usize) -> Vec<Cube> {
    let min_cells = min_cells.max(1);
    let mut cubes = match (f.dim(), family) {
        (1, CubeFamily::All) => {
            let n = f.n(0);
            let mut out = Vec::new();
            for len in min_cells..=n {
                for lo in 0..=(n - len) {
                    out.push(Cube::interval(lo, lo + len));
                }
            }
            out
        }
        (1, CubeFamily::Dyadic) => {
            let mut ranges = Vec::new();
            dyadic_ranges(0, f.n(0), min_cells, &mut ranges);
            ranges
                .into_iter()
                .map(|(lo, hi)| Cube::interval(lo, hi))
                .collect()
        }
        (_, CubeFamily::All) => {
            let (n0, n1) = (f.n(0), f.n(1));
            let mut out = Vec::new();
            for l0 in 1..=n0 {
                for l1 in 1..=n1 {
                    if l0 * l1 < min_cells {
                        continue;
                    }
                    for i0 in 0..=(n0 - l0) {
                        for i1 in 0..=(n1 - l1) {
                            out.push(Cube::rect((i0, i0 + l0), (i1, i1 + l1)));
                        }
                    }
                }
            }
            out
        }
        (_, CubeFamily::Dyadic) => {
            let mut out = Vec::new();
            dyadic_boxes((0, f.n(0)), (0, f.n(1)), min_cells, &mut out);
            out
        }
    };
    cubes.sort_by_key(Cube::order_key);
    cubes.dedup();
    cubes
}

/// Family cubes containing the given cell.
pub fn cubes_containing(
    f: &GridFunction,
    family: CubeFamily,
    cell: &[usize],
    min_cells: usize,
) -> Result<Vec<Cube>> {
    f.validate_cell(cell)?;
    // 1D cubes carry a pinned [0, 1) second axis, so padding with 0 works
    // uniformly.
    let mut padded = [0usize; 2];
    padded[..cell.len()].copy_from_slice(cell);
    Ok(enumerate_cubes(f, family, min_cells)
        .into_iter()
        .filter(|q| q.contains(&padded))
        .collect())
}

/// One `(frequency, amplitude)` term of a trigonometric polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigMode {
    pub k: u32,
    pub amp: f64,
    /// `sin(kθ)` instead of `cos(kθ)`.
    #[serde(default)]
    pub sin: bool,
}

/// Test-function generators.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Constant {
        c: f64,
    },
    /// 0 below `at`, 1 at and above.
    Step {
        at: f64,
    },
    /// `2·frac(k·t) − 1` with `t` the normalized coordinate.
    Sawtooth {
        k: u32,
    },
    Trig {
        modes: Vec<TrigMode>,
    },
    /// `log|x − x0|`, clipped at half a cell when sampled.
    LogSingularity {
        x0: f64,
    },
    /// `Σ aⁿ cos(bⁿ π x)` for `n < terms`.
    Weierstrass {
        a: f64,
        b: f64,
        terms: u32,
    },
}

/// Sampling domain for generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain1d {
    Interval { a: f64, b: f64 },
    Torus,
}

impl Generator {
    pub fn validate(&self) -> Result<()> {
        match self {
            Generator::Weierstrass { a, b, terms } => {
                if *a <= 0.0 {
                    return Err(Error::InvalidParam(format!(
                        "weierstrass needs a > 0, got {a}"
                    )));
                }
                if *b < 1.0 {
                    return Err(Error::InvalidParam(format!(
                        "weierstrass needs b >= 1, got {b}"
                    )));
                }
                if *terms == 0 {
                    return Err(Error::InvalidParam("weierstrass needs terms >= 1".into()));
                }
                Ok(())
            }
            Generator::Sawtooth { k } if *k == 0 => {
                Err(Error::InvalidParam("sawtooth needs k >= 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// The natural sampling domain: the torus for periodic kinds, `[0, 1]`
    /// otherwise.
    pub fn default_domain(&self) -> Domain1d {
        match self {
            Generator::Trig { .. } | Generator::Sawtooth { .. } => Domain1d::Torus,
            _ => Domain1d::Interval { a: 0.0, b: 1.0 },
        }
    }

    /// Pointwise evaluation. `LogSingularity` is unclipped here; sampling
    /// applies the half-cell clip.
    pub fn eval(&self, x: f64, domain: Domain1d) -> f64 {
        let (a, b) = match domain {
            Domain1d::Interval { a, b } => (a, b),
            Domain1d::Torus => (0.0, TAU),
        };
        match self {
            Generator::Constant { c } => *c,
            Generator::Step { at } => {
                if x >= *at {
                    1.0
                } else {
                    0.0
                }
            }
            Generator::Sawtooth { k } => {
                let t = (x - a) / (b - a) * *k as f64;
                2.0 * (t - t.floor()) - 1.0
            }
            Generator::Trig { modes } => kahan_sum(modes.iter().map(|m| {
                let arg = m.k as f64 * x;
                m.amp * if m.sin { arg.sin() } else { arg.cos() }
            })),
            Generator::LogSingularity { x0 } => (x - x0).abs().ln(),
            Generator::Weierstrass { a, b, terms } => {
                kahan_sum((0..*terms).map(|n| {
                    a.powi(n as i32) * (b.powi(n as i32) * std::f64::consts::PI * x).cos()
                }))
            }
        }
    }

    /// Samples the generator at the `n` cell midpoints of the domain.
    pub fn sample(&self, n: usize, domain: Domain1d) -> Result<GridFunction> {
        self.validate()?;
        if n < 2 {
            return Err(Error::InvalidParam(format!(
                "generators need N >= 2, got {n}"
            )));
        }
        let (axis, torus) = match domain {
            Domain1d::Interval { a, b } => {
                let axis = AxisSpec { a, b, n };
                axis.validate()?;
                (axis, false)
            }
            Domain1d::Torus => (AxisSpec { a: 0.0, b: TAU, n }, true),
        };
        let mesh = axis.mesh();
        let values: Vec<f64> = (0..n)
            .map(|i| {
                let x = axis.midpoint(i);
                match self {
                    Generator::LogSingularity { x0 } => (x - x0).abs().max(mesh / 2.0).ln(),
                    _ => self.eval(x, domain),
                }
            })
            .collect();
        if torus {
            GridFunction::new_torus(values)
        } else {
            GridFunction::new_1d(axis.a, axis.b, values)
        }
    }

    /// Samples on the generator's default domain.
    pub fn generate(&self, n: usize) -> Result<GridFunction> {
        self.sample(n, self.default_domain())
    }
}

pub mod io {
    //! CSV and JSON readers/writers for sampled functions.
    //!
    //! CSV: one value per line in 1D; a `rows,cols` header then row-major
    //! values in 2D. JSON: `{"domain":[a,b],"torus":bool,"values":[...]}`.

    use super::*;

    #[derive(Serialize, Deserialize)]
    struct GridJson {
        #[serde(skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
        #[serde(default)]
        torus: bool,
        values: Vec<f64>,
    }

    pub fn parse_json(text: &str) -> Result<GridFunction> {
        let parsed: GridJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad grid JSON: {e}")))?;
        if parsed.torus {
            if let Some([a, b]) = parsed.domain {
                if a.abs() > 1e-9 || (b - TAU).abs() > 1e-9 {
                    return Err(Error::Parse(
                        "torus functions live on [0, 2π); drop or fix `domain`".into(),
                    ));
                }
            }
            GridFunction::new_torus(parsed.values)
        } else {
            let [a, b] = parsed.domain.unwrap_or([0.0, 1.0]);
            GridFunction::new_1d(a, b, parsed.values)
        }
    }

    pub fn to_json(f: &GridFunction) -> String {
        let json = GridJson {
            domain: Some([f.axis(0).a, f.axis(0).b]),
            torus: f.is_torus(),
            values: f.values().to_vec(),
        };
        serde_json::to_string(&json).expect("grid serializes")
    }

    /// Parses CSV text; 2D needs the `rows,cols` header. The domain defaults
    /// to `[0, 1]` per axis.
    pub fn parse_csv(text: &str) -> Result<GridFunction> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let first = lines
            .next()
            .ok_or_else(|| Error::Parse("empty CSV".into()))?;
        let header: Option<(usize, usize)> = {
            let parts: Vec<&str> = first.split(',').map(str::trim).collect();
            if parts.len() == 2 {
                match (parts[0].parse::<usize>(), parts[1].parse::<usize>()) {
                    (Ok(r), Ok(c)) => Some((r, c)),
                    _ => None,
                }
            } else {
                None
            }
        };
        let mut values = Vec::new();
        let mut push_tokens = |line: &str| -> Result<()> {
            for tok in line.split([',', ';', ' ', '\t']) {
                let tok = tok.trim();
                if tok.is_empty() {
                    continue;
                }
                values.push(
                    tok.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad CSV value `{tok}`")))?,
                );
            }
            Ok(())
        };
        if header.is_none() {
            push_tokens(first)?;
        }
        for line in lines {
            push_tokens(line)?;
        }
        match header {
            Some((rows, cols)) => {
                if values.len() != rows * cols {
                    return Err(Error::Parse(format!(
                        "expected {rows}x{cols} = {} values, got {}",
                        rows * cols,
                        values.len()
                    )));
                }
                GridFunction::new_2d(
                    AxisSpec {
                        a: 0.0,
                        b: 1.0,
                        n: rows,
                    },
                    AxisSpec {
                        a: 0.0,
                        b: 1.0,
                        n: cols,
                    },
                    values,
                )
            }
            None => GridFunction::new_1d(0.0, 1.0, values),
        }
    }

    pub fn to_csv(f: &GridFunction) -> String {
        let mut out = String::new();
        match f.dim() {
            1 => {
                for v in f.values() {
                    out.push_str(&format!("{v}\n"));
                }
            }
            _ => {
                out.push_str(&format!("{},{}\n", f.n(0), f.n(1)));
                for i in 0..f.n(0) {
                    let row: Vec<String> = (0..f.n(1))
                        .map(|j| format!("{}", f.value_2d(i, j)))
                        .collect();
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
            }
        }
        out
    }
}
