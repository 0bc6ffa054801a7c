//! Exact ℓ1 minimization over an atom dictionary: minimize `Σ|α|` subject to
//! `Σ α_i b_i(cell) = f(cell)` for every cell.
//!
//! Coefficients split into nonnegative pairs `α = α⁺ − α⁻` and the resulting
//! linear program runs through a dense two-phase tableau simplex with Bland's
//! rule. Degenerate pivots break ties by lowest variable index, so runs are
//! deterministic across platforms and thread counts.

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_PIVOTS: usize = 1_000_000;

/// Dense dictionary evaluation table: `value(cell, atom)`.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    n_cells: usize,
    n_atoms: usize,
    /// Cell-major: `values[cell * n_atoms + atom]`.
    values: Vec<f64>,
}

impl DesignMatrix {
    pub fn new(n_cells: usize, n_atoms: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n_cells * n_atoms {
            return Err(Error::InvalidParam(format!(
                "design matrix needs {} entries, got {}",
                n_cells * n_atoms,
                values.len()
            )));
        }
        Ok(Self {
            n_cells,
            n_atoms,
            values,
        })
    }

    pub fn from_columns(n_cells: usize, columns: &[Vec<f64>]) -> Result<Self> {
        let n_atoms = columns.len();
        let mut values = vec![0.0; n_cells * n_atoms];
        for (a, col) in columns.iter().enumerate() {
            if col.len() != n_cells {
                return Err(Error::InvalidParam(format!(
                    "column {a} has {} entries, expected {n_cells}",
                    col.len()
                )));
            }
            for (c, &v) in col.iter().enumerate() {
                values[c * n_atoms + a] = v;
            }
        }
        Ok(Self {
            n_cells,
            n_atoms,
            values,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    #[inline]
    pub fn value(&self, cell: usize, atom: usize) -> f64 {
        self.values[cell * self.n_atoms + atom]
    }
}

/// One ℓ1 problem instance.
#[derive(Debug, Clone)]
pub struct L1Problem {
    pub design: DesignMatrix,
    pub target: Vec<f64>,
    pub tolerance: f64,
    pub max_pivots: usize,
}

impl L1Problem {
    pub fn new(design: DesignMatrix, target: Vec<f64>) -> Result<Self> {
        if target.len() != design.n_cells() {
            return Err(Error::InvalidParam(format!(
                "target has {} cells, design has {}",
                target.len(),
                design.n_cells()
            )));
        }
        Ok(Self {
            design,
            target,
            tolerance: DEFAULT_TOLERANCE,
            max_pivots: DEFAULT_MAX_PIVOTS,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    CapExceeded,
}

/// Solver output. `coefficients` are per atom (already recombined from the
/// split variables).
#[derive(Debug, Clone)]
pub struct L1Solution {
    pub coefficients: Vec<f64>,
    pub objective: f64,
    pub status: SolveStatus,
    pub iterations: usize,
    pub max_violation: f64,
    pub duality_gap: Option<f64>,
}

/// Max-abs constraint violation of a coefficient vector.
pub fn check_feasibility(p: &L1Problem, coefficients: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for cell in 0..p.design.n_cells() {
        let mut acc = crate::num::Kahan::new();
        for (a, &c) in coefficients.iter().enumerate() {
            if c != 0.0 {
                acc.add(c * p.design.value(cell, a));
            }
        }
        worst = worst.max((acc.value() - p.target[cell]).abs());
    }
    worst
}

struct Tableau {
    m: usize,
    /// Structural columns (2 per atom); artificials live at `n_struct..n_struct+m`.
    n_struct: usize,
    width: usize,
    rows: Vec<Vec<f64>>,
    /// Reduced-cost rows for phase 1 and phase 2, with the (negated)
    /// objective value in the last slot.
    cost1: Vec<f64>,
    cost2: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col];
        let inv = 1.0 / piv;
        for v in self.rows[row].iter_mut() {
            *v *= inv;
        }
        let pivot_row = self.rows[row].clone();
        for r in 0..self.m {
            if r == row {
                continue;
            }
            let factor = self.rows[r][col];
            if factor != 0.0 {
                for (v, &p) in self.rows[r].iter_mut().zip(&pivot_row) {
                    *v -= factor * p;
                }
            }
        }
        for cost in [&mut self.cost1, &mut self.cost2] {
            let factor = cost[col];
            if factor != 0.0 {
                for (v, &p) in cost.iter_mut().zip(&pivot_row) {
                    *v -= factor * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: entering column is the lowest index with reduced cost
    /// below `-tol`; the leaving row breaks ratio ties by lowest basic
    /// variable index.
    fn bland_step(&mut self, phase1: bool, tol: f64) -> Result<bool> {
        let cost = if phase1 { &self.cost1 } else { &self.cost2 };
        let allowed = if phase1 {
            self.width - 1
        } else {
            self.n_struct
        };
        let Some(col) = cost[..allowed].iter().position(|&c| c < -tol) else {
            return Ok(false);
        };
        let rhs = self.width - 1;
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..self.m {
            let a = self.rows[r][col];
            if a > tol {
                let ratio = self.rows[r][rhs] / a;
                let replace = match leave {
                    None => true,
                    Some((best_r, best_ratio)) => {
                        ratio < best_ratio - tol * (1.0 + best_ratio.abs())
                            || ((ratio - best_ratio).abs() <= tol * (1.0 + best_ratio.abs())
                                && self.basis[r] < self.basis[best_r])
                    }
                };
                if replace {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            return Err(Error::Unbounded);
        };
        self.pivot(row, col);
        Ok(true)
    }
}

/// Solves the split-variable linear program to optimality (or reports
/// infeasibility / the pivot cap).
pub fn solve_l1(p: &L1Problem) -> Result<L1Solution> {
    if p.tolerance.is_nan() || p.tolerance <= 0.0 {
        return Err(Error::InvalidParam("tolerance must be positive".into()));
    }
    if p.target.len() != p.design.n_cells() {
        return Err(Error::InvalidParam(
            "target length does not match design".into(),
        ));
    }
    let m = p.design.n_cells();
    let n_atoms = p.design.n_atoms();
    let n_struct = 2 * n_atoms;
    let width = n_struct + m + 1;
    let tol = p.tolerance;

    // Rows flipped so every right-hand side is nonnegative.
    let mut rows = Vec::with_capacity(m);
    let mut rhs_flipped = Vec::with_capacity(m);
    for cell in 0..m {
        let sign = if p.target[cell] < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; width];
        for a in 0..n_atoms {
            let v = sign * p.design.value(cell, a);
            row[a] = v;
            row[n_atoms + a] = -v;
        }
        row[n_struct + cell] = 1.0;
        row[width - 1] = sign * p.target[cell];
        rhs_flipped.push(row[width - 1]);
        rows.push(row);
    }

    // Phase-1 reduced costs with the artificial basis: c1 = 0 on structurals
    // minus the column sums; phase-2 costs are 1 on structurals.
    let mut cost1 = vec![0.0; width];
    for (j, c) in cost1.iter_mut().enumerate().take(n_struct) {
        *c = -rows.iter().map(|r| r[j]).sum::<f64>();
    }
    cost1[width - 1] = -rows.iter().map(|r| r[width - 1]).sum::<f64>();
    let mut cost2 = vec![0.0; width];
    for c in cost2.iter_mut().take(n_struct) {
        *c = 1.0;
    }

    let mut t = Tableau {
        m,
        n_struct,
        width,
        rows,
        cost1,
        cost2,
        basis: (n_struct..n_struct + m).collect(),
    };

    let mut pivots = 0usize;
    let mut capped = false;

    // Phase 1: drive the artificial objective to zero.
    loop {
        if pivots >= p.max_pivots {
            capped = true;
            break;
        }
        if !t.bland_step(true, tol)? {
            break;
        }
        pivots += 1;
    }
    let phase1_obj = -t.cost1[width - 1];
    if !capped && phase1_obj > tol {
        return Ok(L1Solution {
            coefficients: vec![0.0; n_atoms],
            objective: 0.0,
            status: SolveStatus::Infeasible,
            iterations: pivots,
            max_violation: phase1_obj,
            duality_gap: None,
        });
    }

    // Pivot lingering artificials out of the basis where possible; a row
    // with no structural pivot is a redundant constraint and its artificial
    // stays basic at zero.
    if !capped {
        for r in 0..m {
            if t.basis[r] >= n_struct {
                if let Some(col) = (0..n_struct).find(|&j| t.rows[r][j].abs() > tol) {
                    t.pivot(r, col);
                    pivots += 1;
                }
            }
        }
        // Phase 2.
        loop {
            if pivots >= p.max_pivots {
                capped = true;
                break;
            }
            if !t.bland_step(false, tol)? {
                break;
            }
            pivots += 1;
        }
    }

    let mut split = vec![0.0; n_struct];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < n_struct {
            split[b] = t.rows[r][width - 1];
        }
    }
    let coefficients: Vec<f64> = (0..n_atoms)
        .map(|a| split[a] - split[n_atoms + a])
        .collect();
    let objective: f64 = coefficients.iter().map(|c| c.abs()).sum();
    let max_violation = check_feasibility(p, &coefficients);

    // Dual prices sit in the phase-2 reduced costs of the artificial
    // columns (negated); the gap certifies optimality.
    let duality_gap = if capped {
        None
    } else {
        let lp_obj: f64 = split.iter().sum();
        let dual_obj: f64 = (0..m)
            .map(|i| -t.cost2[n_struct + i] * rhs_flipped[i])
            .sum();
        Some(lp_obj - dual_obj)
    };

    Ok(L1Solution {
        coefficients,
        objective,
        status: if capped {
            SolveStatus::CapExceeded
        } else {
            SolveStatus::Optimal
        },
        iterations: pivots,
        max_violation,
        duality_gap,
    })
}
