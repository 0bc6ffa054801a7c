//! Second differences, Zygmund seminorms, the distributional-derivative norm,
//! and the exact bridge between atom pairings and second differences.
//!
//! The discrete derivative is the forward difference on a staggered grid and
//! the cumulative integral is its exact inverse (up to the starting value),
//! which makes the telescoping identity
//!
//! `pair(f', b_{x,h}) = Δ²f(x, h) / (2h)`
//!
//! hold to rounding for every symmetric centered atom — the computational
//! trace of the duality between atomic decompositions and the order-2
//! Zygmund class.

use crate::error::{Error, Result};
use crate::grid::{Cube, CubeFamily, GridFunction, PrefixTable};
use crate::maximal::{weak_bmo_norm, Centering, NormReport, Part, Witness};
use crate::num::Kahan;
use crate::par;

/// Display normalization for second-difference quotients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SdNormalization {
    /// Divide by `2h` (the order-1 seminorm display).
    HalfStep,
    /// Divide by `|h|` (the general order-k display).
    Step,
}

/// `Δ²f(x, h) = f(x+h) + f(x−h) − 2f(x)` with `x` a cell index and `h` in
/// whole cells; wraps on the torus.
pub fn second_difference(f: &GridFunction, x: usize, h: usize) -> Result<f64> {
    if f.dim() != 1 {
        return Err(Error::InvalidParam(
            "second differences are defined for 1D grids".into(),
        ));
    }
    if h == 0 {
        return Err(Error::InvalidParam("second difference needs h >= 1".into()));
    }
    let n = f.n(0);
    f.validate_cell(&[x])?;
    if f.is_torus() {
        let up = (x + h) % n;
        let down = (x + n - (h % n)) % n;
        Ok(f.value(up) + f.value(down) - 2.0 * f.value(x))
    } else {
        if x + h >= n || x < h {
            return Err(Error::CellOutOfRange {
                axis: 0,
                index: x + h,
                n,
            });
        }
        Ok(f.value(x + h) + f.value(x - h) - 2.0 * f.value(x))
    }
}

/// One evaluated second difference.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SecondDiff {
    pub x: usize,
    pub h: usize,
    pub value: f64,
}

/// All grid-admissible second differences with the chosen normalization
/// recorded for display.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SecondDifferenceField {
    pub entries: Vec<SecondDiff>,
    pub normalization: SdNormalization,
}

/// Admissible `(x, h)` pairs: `h ≥ 1` cell and `x ± h` in range (torus wraps,
/// with `h` capped at half the circle to avoid duplicate pairs).
fn admissible_pairs(f: &GridFunction) -> Vec<(usize, usize)> {
    let n = f.n(0);
    let mut pairs = Vec::new();
    if f.is_torus() {
        for h in 1..=(n / 2) {
            for x in 0..n {
                pairs.push((x, h));
            }
        }
    } else {
        for h in 1..=n.saturating_sub(1) / 2 {
            for x in h..(n - h) {
                pairs.push((x, h));
            }
        }
    }
    pairs
}

pub fn second_difference_field(
    f: &GridFunction,
    normalization: SdNormalization,
) -> Result<SecondDifferenceField> {
    if f.dim() != 1 {
        return Err(Error::InvalidParam(
            "second differences are defined for 1D grids".into(),
        ));
    }
    let entries = admissible_pairs(f)
        .into_iter()
        .map(|(x, h)| {
            Ok(SecondDiff {
                x,
                h,
                value: second_difference(f, x, h)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SecondDifferenceField {
        entries,
        normalization,
    })
}

/// Forward difference `(f(x+Δ) − f(x))/Δ` on the staggered grid: length
/// `N−1` on an interval, `N` (wrapping) on the torus.
pub fn discrete_derivative(f: &GridFunction) -> Result<GridFunction> {
    if f.dim() != 1 {
        return Err(Error::InvalidParam(
            "discrete derivatives are defined for 1D grids".into(),
        ));
    }
    let n = f.n(0);
    if n < 2 {
        return Err(Error::InvalidParam("derivative needs N >= 2".into()));
    }
    let mesh = f.mesh(0);
    if f.is_torus() {
        let values = (0..n)
            .map(|i| (f.value((i + 1) % n) - f.value(i)) / mesh)
            .collect();
        GridFunction::new_torus(values)
    } else {
        let values = (0..n - 1)
            .map(|i| (f.value(i + 1) - f.value(i)) / mesh)
            .collect();
        GridFunction::new_1d(f.axis(0).a + mesh / 2.0, f.axis(0).b - mesh / 2.0, values)
    }
}

/// Exact inverse of [`discrete_derivative`] up to the starting value:
/// exclusive prefix sums times the mesh, staggered half a cell the other
/// way. Torus input stays on the torus (periodic only when `g` has zero
/// mean, which is exactly when a periodic antiderivative exists).
pub fn cumulative_integral(g: &GridFunction) -> Result<GridFunction> {
    if g.dim() != 1 {
        return Err(Error::InvalidParam(
            "cumulative integrals are defined for 1D grids".into(),
        ));
    }
    let n = g.n(0);
    let mesh = g.mesh(0);
    if g.is_torus() {
        let mut values = Vec::with_capacity(n);
        let mut acc = Kahan::new();
        for i in 0..n {
            values.push(acc.value());
            acc.add(g.value(i) * mesh);
        }
        GridFunction::new_torus(values)
    } else {
        let mut values = Vec::with_capacity(n + 1);
        let mut acc = Kahan::new();
        values.push(0.0);
        for i in 0..n {
            acc.add(g.value(i) * mesh);
            values.push(acc.value());
        }
        GridFunction::new_1d(g.axis(0).a - mesh / 2.0, g.axis(0).b + mesh / 2.0, values)
    }
}

/// `‖f‖_{Λ*^k}`: the largest normalized second difference of the (k−1)-th
/// discrete derivative. Order 1 divides by `2h`; higher orders divide by
/// `h`, following each display's convention.
pub fn zygmund_seminorm(f: &GridFunction, k: u32) -> Result<NormReport> {
    if k == 0 {
        return Err(Error::InvalidParam("zygmund order must be k >= 1".into()));
    }
    let mut g = f.clone();
    for _ in 1..k {
        g = discrete_derivative(&g)?;
    }
    if g.n(0) < 3 {
        return Err(Error::InvalidParam(format!(
            "grid too small for order-{k} second differences"
        )));
    }
    let normalization = if k == 1 {
        SdNormalization::HalfStep
    } else {
        SdNormalization::Step
    };
    let pairs = admissible_pairs(&g);
    let mesh = g.mesh(0);
    let quotient = |&(x, h): &(usize, usize)| {
        let d2 = second_difference(&g, x, h).expect("admissible pair");
        let denom = match normalization {
            SdNormalization::HalfStep => 2.0 * h as f64 * mesh,
            SdNormalization::Step => h as f64 * mesh,
        };
        d2.abs() / denom
    };
    let (idx, value) = par::argmax(pairs.len(), |i| quotient(&pairs[i]))
        .ok_or_else(|| Error::InvalidParam("no admissible (x, h) pairs".into()))?;
    let (x, h) = pairs[idx];
    Ok(NormReport {
        name: format!("zygmund_k{k}"),
        value,
        parts: vec![Part {
            name: "second_difference".into(),
            value,
            witness: Some(Witness::Xh { x, h }),
        }],
        convention: match normalization {
            SdNormalization::HalfStep => "2h",
            SdNormalization::Step => "h",
        },
        family: CubeFamily::All,
    })
}

/// The distributional-derivative norm with its weak-BMO companion.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LambdaPrimeReport {
    /// Zygmund seminorm of the antiderivative, with its `(x, h)` witness.
    pub report: NormReport,
    pub weak_bmo: f64,
    /// `lambda_prime / weak_bmo`; the equivalence constants are open, so
    /// this is informational.
    pub ratio: f64,
}

/// `‖g‖_{Λ'_*} = ‖∫g‖_{Λ*}`, reported alongside `‖g‖_BMO^w`.
pub fn lambda_prime_norm(g: &GridFunction) -> Result<LambdaPrimeReport> {
    let antiderivative = cumulative_integral(g)?;
    let report = zygmund_seminorm(&antiderivative, 1)?;
    let weak = weak_bmo_norm(g, CubeFamily::All, Centering::LiteralAbs).value;
    let ratio = if weak > 0.0 { report.value / weak } else { 0.0 };
    Ok(LambdaPrimeReport {
        report,
        weak_bmo: weak,
        ratio,
    })
}

/// Verifies `pair(f', b_{x,h}) = Δ²f(x,h)/(2h)` over every symmetric
/// centered atom; telescoping makes the identity exact, so the returned
/// max-abs discrepancy sits at rounding level.
pub fn bridge_check(f: &GridFunction) -> Result<f64> {
    if f.dim() != 1 || f.is_torus() {
        return Err(Error::InvalidParam(
            "the bridge identity runs on 1D interval grids".into(),
        ));
    }
    let n = f.n(0);
    if n < 3 {
        return Err(Error::InvalidParam("bridge check needs N >= 3".into()));
    }
    let derivative = discrete_derivative(f)?;
    let table = PrefixTable::build(&derivative);
    let mesh = f.mesh(0);
    let mut worst = 0.0f64;
    // The atom b_{x,h} on the derivative grid covers staggered cells
    // [x−h, x+h) and splits at x; its halves telescope to f-differences.
    for h in 1..=(n - 1) / 2 {
        for x in h..(n - h) {
            let left = Cube::interval(x - h, x);
            let right = Cube::interval(x, x + h);
            let sum_r = table.cube_sum(&right)?;
            let sum_l = table.cube_sum(&left)?;
            let paired = (sum_r - sum_l) * table.cell_volume() / (2.0 * h as f64 * mesh);
            let d2 = second_difference(f, x, h)? / (2.0 * h as f64 * mesh);
            worst = worst.max((paired - d2).abs());
        }
    }
    Ok(worst)
}
