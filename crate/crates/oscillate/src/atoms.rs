//! Special atoms, atom dictionaries, the pairing functional, the atomic dual
//! norm, and ℓ1 atomic decompositions.
//!
//! A difference atom on a cube `I` takes the value `+1/φ(I)` on one half `R`
//! and `−1/φ(I)` on the other half `L`, with `λ(R) = λ(L)`; the default
//! weight is Lebesgue, `φ(I) = λ(I)`. In one dimension the halves split `I`
//! at its center; in two dimensions `R` is any 2 of the 4 center-split
//! subcubes. The single constant atom is `≡ 1` on the whole domain.
//!
//! Decompositions write `f = Σ αₙ bₙ` and score `Σ|αₙ|`: the greedy cascade
//! gives an exact representation over the dyadic dictionary, and the linear
//! program in [`crate::optimize`] gives the dictionary-restricted infimum.

use std::collections::HashMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::grid::{enumerate_cubes, Cube, CubeFamily, GridFunction, PrefixTable};
use crate::maximal::{weak_bmo_norm, Centering, NormReport, Part, Witness};
use crate::num::Kahan;
use crate::optimize::{solve_l1, DesignMatrix, L1Problem, SolveStatus};
use crate::par;

/// Reconstruction error bound the greedy cascade is held to.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;

/// Sign layout of a difference atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum AtomPattern {
    /// 1D center split; `swapped` puts `+` on the left half instead.
    Half { swapped: bool },
    /// 2D center split; the two listed quadrants form `R`. Quadrants are
    /// numbered `2·(axis0 half) + (axis1 half)`.
    Quadrants { r: (u8, u8) },
}

impl AtomPattern {
    pub fn plain() -> Self {
        AtomPattern::Half { swapped: false }
    }

    /// All six ways of picking 2 of the 4 subcubes as `R`.
    pub fn all_quadrant_choices() -> Vec<AtomPattern> {
        let mut out = Vec::new();
        for a in 0..4u8 {
            for b in (a + 1)..4u8 {
                out.push(AtomPattern::Quadrants { r: (a, b) });
            }
        }
        out
    }
}

/// A type-1 difference atom: `(1/φ(I)) [χ_R − χ_L]` supported on `cube`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpecialAtom {
    pub cube: Cube,
    pub pattern: AtomPattern,
    /// `φ(I)`; Lebesgue measure of the cube by default.
    pub weight: f64,
}

impl SpecialAtom {
    /// The two halves `(R, L)` as sub-cubes. For quadrant patterns each half
    /// is a pair of quadrant cubes.
    fn halves(&self) -> (Vec<Cube>, Vec<Cube>) {
        match self.pattern {
            AtomPattern::Half { swapped } => {
                let lo = self.cube.lo(0);
                let hi = self.cube.hi(0);
                let mid = lo + (hi - lo) / 2;
                let left = Cube::interval(lo, mid);
                let right = Cube::interval(mid, hi);
                if swapped {
                    (vec![left], vec![right])
                } else {
                    (vec![right], vec![left])
                }
            }
            AtomPattern::Quadrants { r } => {
                let quads = quadrants(&self.cube);
                let mut rs = Vec::new();
                let mut ls = Vec::new();
                for (idx, q) in quads.into_iter().enumerate() {
                    if idx as u8 == r.0 || idx as u8 == r.1 {
                        rs.push(q);
                    } else {
                        ls.push(q);
                    }
                }
                (rs, ls)
            }
        }
    }

    /// Atom value at a cell, `0` outside the supporting cube.
    pub fn value_at(&self, cell: &[usize]) -> f64 {
        let mut padded = [0usize; 2];
        padded[..cell.len()].copy_from_slice(cell);
        if !self.cube.contains(&padded) {
            return 0.0;
        }
        let (rs, ls) = self.halves();
        if rs.iter().any(|q| q.contains(&padded)) {
            1.0 / self.weight
        } else if ls.iter().any(|q| q.contains(&padded)) {
            -1.0 / self.weight
        } else {
            0.0
        }
    }
}

fn quadrants(cube: &Cube) -> [Cube; 4] {
    let (l0, h0) = (cube.lo(0), cube.hi(0));
    let (l1, h1) = (cube.lo(1), cube.hi(1));
    let m0 = l0 + (h0 - l0) / 2;
    let m1 = l1 + (h1 - l1) / 2;
    [
        Cube::rect((l0, m0), (l1, m1)),
        Cube::rect((l0, m0), (m1, h1)),
        Cube::rect((m0, h0), (l1, m1)),
        Cube::rect((m0, h0), (m1, h1)),
    ]
}

/// Builds a difference atom on `I`, weighted by `φ(I)` when `phi` is given
/// and by `λ(I)` otherwise.
pub fn make_atom(
    grid: &GridFunction,
    cube: Cube,
    pattern: AtomPattern,
    phi: Option<&GridFunction>,
) -> Result<SpecialAtom> {
    match pattern {
        AtomPattern::Half { .. } => {
            if grid.dim() != 1 {
                return Err(Error::InvalidParam(
                    "half-split atoms need a 1D grid".into(),
                ));
            }
            if !cube.len(0).is_multiple_of(2) || cube.len(0) < 2 {
                return Err(Error::OddAtomCube {
                    axis: 0,
                    len: cube.len(0),
                });
            }
        }
        AtomPattern::Quadrants { r } => {
            if grid.dim() != 2 {
                return Err(Error::InvalidParam("quadrant atoms need a 2D grid".into()));
            }
            if r.0 >= 4 || r.1 >= 4 || r.0 == r.1 {
                return Err(Error::InvalidParam(format!(
                    "quadrant choice {:?} is not a pair from 0..4",
                    r
                )));
            }
            for axis in 0..2 {
                if !cube.len(axis).is_multiple_of(2) || cube.len(axis) < 2 {
                    return Err(Error::OddAtomCube {
                        axis,
                        len: cube.len(axis),
                    });
                }
            }
        }
    }
    let weight = match phi {
        None => cube.measure(grid),
        Some(phi_fn) => {
            if !phi_fn.same_shape(grid) {
                return Err(Error::GridMismatch);
            }
            PrefixTable::build(phi_fn).cube_integral(&cube)?
        }
    };
    if weight.abs() < 1e-300 {
        return Err(Error::ZeroWeight);
    }
    Ok(SpecialAtom {
        cube,
        pattern,
        weight,
    })
}

/// Dictionary entry: the constant atom or a difference atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Atom {
    /// `≡ 1` on the whole domain.
    Constant,
    Special(SpecialAtom),
}

impl Atom {
    pub fn value_at(&self, cell: &[usize]) -> f64 {
        match self {
            Atom::Constant => 1.0,
            Atom::Special(a) => a.value_at(cell),
        }
    }
}

/// Which difference atoms populate a dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DictionaryFamily {
    /// Dyadic cubes of at least 2 cells per split axis plus the constant
    /// atom: O(N) atoms, spans the grid space for power-of-two N.
    Dyadic,
    /// Every even-length interval at every position (1D only): O(N²) atoms.
    SymmetricAll,
}

impl std::str::FromStr for DictionaryFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dyadic" => Ok(DictionaryFamily::Dyadic),
            "symmetric-all" => Ok(DictionaryFamily::SymmetricAll),
            other => Err(Error::Parse(format!("unknown dictionary family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct AtomKey {
    cube: Cube,
    pattern: AtomPattern,
}

/// Constant atom plus a family of difference atoms, with stable ids. The
/// dictionary remembers the grid shape it was built for and refuses to pair
/// against a different one.
#[derive(Debug, Clone)]
pub struct AtomDictionary {
    atoms: Vec<Atom>,
    index: HashMap<AtomKey, usize>,
    family: DictionaryFamily,
    shape: GridFunction,
}

impl AtomDictionary {
    /// Builds the dictionary for the grid shape of `f`. Id 0 is always the
    /// constant atom; difference atoms follow in (size, position) order.
    pub fn build(f: &GridFunction, family: DictionaryFamily) -> Result<Self> {
        let mut atoms = vec![Atom::Constant];
        match (f.dim(), family) {
            (1, DictionaryFamily::Dyadic) => {
                for cube in enumerate_cubes(f, CubeFamily::Dyadic, 2) {
                    if cube.len(0).is_multiple_of(2) {
                        atoms.push(Atom::Special(make_atom(
                            f,
                            cube,
                            AtomPattern::plain(),
                            None,
                        )?));
                    }
                }
            }
            (1, DictionaryFamily::SymmetricAll) => {
                let n = f.n(0);
                for len in (2..=n).step_by(2) {
                    for lo in 0..=(n - len) {
                        atoms.push(Atom::Special(make_atom(
                            f,
                            Cube::interval(lo, lo + len),
                            AtomPattern::plain(),
                            None,
                        )?));
                    }
                }
            }
            (2, DictionaryFamily::Dyadic) => {
                for cube in enumerate_cubes(f, CubeFamily::Dyadic, 4) {
                    if cube.len(0).is_multiple_of(2) && cube.len(1).is_multiple_of(2) {
                        for pattern in AtomPattern::all_quadrant_choices() {
                            atoms.push(Atom::Special(make_atom(f, cube, pattern, None)?));
                        }
                    }
                }
            }
            (2, DictionaryFamily::SymmetricAll) => {
                return Err(Error::InvalidParam(
                    "symmetric-all dictionaries are defined for 1D grids".into(),
                ));
            }
            _ => unreachable!("grids are 1D or 2D"),
        }
        let mut index = HashMap::new();
        for (id, atom) in atoms.iter().enumerate() {
            if let Atom::Special(a) = atom {
                index.insert(
                    AtomKey {
                        cube: a.cube,
                        pattern: a.pattern,
                    },
                    id,
                );
            }
        }
        Ok(Self {
            atoms,
            index,
            family,
            shape: f.with_values(vec![0.0; f.total_cells()]),
        })
    }

    fn check_shape(&self, g: &GridFunction) -> Result<()> {
        if !self.shape.same_shape(g) {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn family(&self) -> DictionaryFamily {
        self.family
    }

    pub fn atom(&self, id: usize) -> Result<&Atom> {
        self.atoms.get(id).ok_or(Error::UnknownAtom(id))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn find(&self, cube: Cube, pattern: AtomPattern) -> Option<usize> {
        self.index.get(&AtomKey { cube, pattern }).copied()
    }

    /// Dense evaluation table for the LP.
    pub fn design_matrix(&self, f: &GridFunction) -> DesignMatrix {
        let n_cells = f.total_cells();
        let n_atoms = self.atoms.len();
        let mut values = vec![0.0; n_cells * n_atoms];
        let n1 = if f.dim() == 2 { f.n(1) } else { 1 };
        for cell in 0..n_cells {
            let coords = if f.dim() == 1 {
                vec![cell]
            } else {
                vec![cell / n1, cell % n1]
            };
            for (a, atom) in self.atoms.iter().enumerate() {
                values[cell * n_atoms + a] = atom.value_at(&coords);
            }
        }
        DesignMatrix::new(n_cells, n_atoms, values).expect("sizes agree by construction")
    }
}

/// Pairing sweeps share one prefix table of `g`.
pub struct Pairing<'a> {
    g: &'a GridFunction,
    table: PrefixTable,
}

impl<'a> Pairing<'a> {
    pub fn new(g: &'a GridFunction) -> Self {
        Self {
            g,
            table: PrefixTable::build(g),
        }
    }

    /// `T_g(b) = ∫ b g dλ`: `(∫_R g − ∫_L g)/φ(I)` for difference atoms,
    /// `∫_J g` for the constant atom.
    pub fn pair(&self, atom: &Atom) -> Result<f64> {
        match atom {
            Atom::Constant => self.table.cube_integral(&self.g.whole_cube()),
            Atom::Special(a) => {
                let (rs, ls) = a.halves();
                let mut acc = Kahan::new();
                for q in &rs {
                    acc.add(self.table.cube_sum(q)?);
                }
                for q in &ls {
                    acc.add(-self.table.cube_sum(q)?);
                }
                Ok(acc.value() * self.table.cell_volume() / a.weight)
            }
        }
    }
}

/// `T_g(b)` for a single atom.
pub fn pair(g: &GridFunction, atom: &Atom) -> Result<f64> {
    Pairing::new(g).pair(atom)
}

/// A weighted list of atoms with its ℓ1 cost and reconstruction error.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// `(coefficient, atom id)` pairs.
    pub terms: Vec<(f64, usize)>,
    pub l1_cost: f64,
    pub residual_norm: f64,
}

impl Decomposition {
    fn from_terms(
        terms: Vec<(f64, usize)>,
        f: &GridFunction,
        dict: &AtomDictionary,
    ) -> Result<Self> {
        let l1_cost = terms.iter().map(|(c, _)| c.abs()).sum();
        let recon = reconstruct_terms(&terms, f, dict)?;
        let residual_norm = f
            .values()
            .iter()
            .zip(recon.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        Ok(Self {
            terms,
            l1_cost,
            residual_norm,
        })
    }

    /// Decomposition JSON per the wire format:
    /// `{"terms":[{"coef":…,"atom":{…}}],"l1_cost":…,"residual":…}`.
    pub fn to_json(&self, dict: &AtomDictionary) -> Result<Value> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for &(coef, id) in &self.terms {
            let atom = dict.atom(id)?;
            let atom_json = match atom {
                Atom::Constant => json!({"pattern": "constant"}),
                Atom::Special(a) => json!({
                    "cube": a.cube,
                    "pattern": match a.pattern {
                        AtomPattern::Half { swapped: false } => json!("plain"),
                        AtomPattern::Half { swapped: true } => json!("swapped"),
                        AtomPattern::Quadrants { r } => json!([r.0, r.1]),
                    },
                    "weight": a.weight,
                }),
            };
            terms.push(json!({"coef": coef, "atom": atom_json, "id": id}));
        }
        Ok(json!({
            "terms": terms,
            "l1_cost": self.l1_cost,
            "residual": self.residual_norm,
        }))
    }
}

fn reconstruct_terms(
    terms: &[(f64, usize)],
    shape: &GridFunction,
    dict: &AtomDictionary,
) -> Result<GridFunction> {
    let n1 = if shape.dim() == 2 { shape.n(1) } else { 1 };
    let mut values = vec![0.0; shape.total_cells()];
    for &(coef, id) in terms {
        let atom = dict.atom(id)?;
        for (cell, v) in values.iter_mut().enumerate() {
            let coords = if shape.dim() == 1 {
                vec![cell]
            } else {
                vec![cell / n1, cell % n1]
            };
            *v += coef * atom.value_at(&coords);
        }
    }
    Ok(shape.with_values(values))
}

/// Sum of `coefficient × b` over the decomposition's atoms.
pub fn reconstruct(
    d: &Decomposition,
    shape: &GridFunction,
    dict: &AtomDictionary,
) -> Result<GridFunction> {
    reconstruct_terms(&d.terms, shape, dict)
}

/// `T_g` applied term by term: `Σ c · pair(g, b)`.
pub fn pair_decomposition(
    g: &GridFunction,
    d: &Decomposition,
    dict: &AtomDictionary,
) -> Result<f64> {
    dict.check_shape(g)?;
    let pairing = Pairing::new(g);
    let mut acc = Kahan::new();
    for &(coef, id) in &d.terms {
        acc.add(coef * pairing.pair(dict.atom(id)?)?);
    }
    Ok(acc.value())
}

/// `max over atoms of |T_g(b)|`: a computable lower surrogate for the dual
/// norm `‖T_g‖_{(B¹)*}`, since every dictionary atom has unit atomic cost.
pub fn atomic_dual_norm(g: &GridFunction, dict: &AtomDictionary) -> Result<NormReport> {
    if dict.is_empty() {
        return Err(Error::InvalidParam("dictionary is empty".into()));
    }
    dict.check_shape(g)?;
    let pairing = Pairing::new(g);
    let pairings: Result<Vec<f64>> = dict.atoms().iter().map(|a| pairing.pair(a)).collect();
    let pairings = pairings?;
    let (id, value) =
        par::argmax(pairings.len(), |i| pairings[i].abs()).expect("dictionary is nonempty");
    let cube = match dict.atom(id)? {
        Atom::Constant => None,
        Atom::Special(a) => Some(a.cube),
    };
    Ok(NormReport {
        name: "atomic_dual".into(),
        value,
        parts: vec![Part {
            name: "pairing".into(),
            value,
            witness: Some(Witness::Atom { atom_id: id, cube }),
        }],
        convention: "literal-abs",
        family: CubeFamily::All,
    })
}

/// Exact representation over the dyadic dictionary by the two-point
/// average/difference cascade. The constant atom carries the mean; the
/// detail on a dyadic cube `I` with half-averages `a_L`, `a_R` is the atom
/// coefficient `λ(I)·(a_R − a_L)/2`.
pub fn greedy_decompose(f: &GridFunction, dict: &AtomDictionary) -> Result<Decomposition> {
    dict.check_shape(f)?;
    if f.dim() != 1 {
        return Err(Error::InvalidParam(
            "greedy decomposition is defined for 1D grids".into(),
        ));
    }
    let n = f.n(0);
    if !n.is_power_of_two() {
        return Err(Error::InvalidParam(format!(
            "greedy decomposition needs a power-of-two cell count, got {n}"
        )));
    }
    let cell_volume = f.cell_volume();
    let mut terms = Vec::new();

    fn cascade(
        f: &GridFunction,
        dict: &AtomDictionary,
        cell_volume: f64,
        lo: usize,
        hi: usize,
        terms: &mut Vec<(f64, usize)>,
    ) -> Result<f64> {
        if hi - lo == 1 {
            return Ok(f.value(lo));
        }
        let mid = lo + (hi - lo) / 2;
        let left = cascade(f, dict, cell_volume, lo, mid, terms)?;
        let right = cascade(f, dict, cell_volume, mid, hi, terms)?;
        let detail = (right - left) / 2.0;
        if detail != 0.0 {
            let cube = Cube::interval(lo, hi);
            let id = dict.find(cube, AtomPattern::plain()).ok_or_else(|| {
                Error::InvalidParam(format!(
                    "dictionary is missing the dyadic atom on [{lo}, {hi})"
                ))
            })?;
            let measure = (hi - lo) as f64 * cell_volume;
            terms.push((detail * measure, id));
        }
        Ok((left + right) / 2.0)
    }

    let mean = cascade(f, dict, cell_volume, 0, n, &mut terms)?;
    if mean != 0.0 {
        terms.push((mean, 0));
    }
    terms.reverse(); // constant first, then coarse-to-fine
    Decomposition::from_terms(terms, f, dict)
}

/// Caps guarding the LP size.
#[derive(Debug, Clone, Copy)]
pub struct LpCaps {
    pub max_cells: usize,
    pub max_atoms: usize,
    pub max_pivots: usize,
}

impl Default for LpCaps {
    fn default() -> Self {
        Self {
            max_cells: 64,
            max_atoms: 4096,
            max_pivots: crate::optimize::DEFAULT_MAX_PIVOTS,
        }
    }
}

/// ℓ1-minimal exact representation over the dictionary: the
/// dictionary-restricted B¹ norm.
pub fn b1_norm_exact(
    f: &GridFunction,
    dict: &AtomDictionary,
    caps: LpCaps,
) -> Result<Decomposition> {
    dict.check_shape(f)?;
    let n_cells = f.total_cells();
    if n_cells > caps.max_cells {
        return Err(Error::CapExceeded {
            what: "LP cell count",
            got: n_cells,
            cap: caps.max_cells,
        });
    }
    if dict.len() > caps.max_atoms {
        return Err(Error::CapExceeded {
            what: "LP dictionary size",
            got: dict.len(),
            cap: caps.max_atoms,
        });
    }
    let design = dict.design_matrix(f);
    let mut problem = L1Problem::new(design, f.values().to_vec())?;
    problem.max_pivots = caps.max_pivots;
    let solution = solve_l1(&problem)?;
    match solution.status {
        SolveStatus::Optimal => {}
        SolveStatus::Infeasible => {
            return Err(Error::Infeasible {
                residual: solution.max_violation,
            })
        }
        SolveStatus::CapExceeded => {
            return Err(Error::CapExceeded {
                what: "LP pivots",
                got: solution.iterations,
                cap: caps.max_pivots,
            })
        }
    }
    let terms: Vec<(f64, usize)> = solution
        .coefficients
        .iter()
        .enumerate()
        .filter(|(_, c)| c.abs() > 1e-11)
        .map(|(id, &c)| (c, id))
        .collect();
    Decomposition::from_terms(terms, f, dict)
}

/// Both sides of the Hölder-type bound `|T_g(f)| ≤ ‖f‖_B¹ · ‖g‖_BMO^w`,
/// evaluated conservatively with the decomposition's ℓ1 cost standing in
/// for the infimum norm.
#[derive(Debug, Clone, Serialize)]
pub struct HolderCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub l1_cost: f64,
    pub weak_bmo: f64,
    pub holds: bool,
}

pub fn holder_check(
    d: &Decomposition,
    dict: &AtomDictionary,
    g: &GridFunction,
) -> Result<HolderCheck> {
    let lhs = pair_decomposition(g, d, dict)?.abs();
    let weak = weak_bmo_norm(g, CubeFamily::All, Centering::LiteralAbs).value;
    let rhs = d.l1_cost * weak;
    Ok(HolderCheck {
        lhs,
        rhs,
        l1_cost: d.l1_cost,
        weak_bmo: weak,
        holds: lhs <= rhs + 1e-9,
    })
}
