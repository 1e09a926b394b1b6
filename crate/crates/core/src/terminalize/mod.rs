//! Crepant triangulations of Gorenstein cones and the terminalizations they
//! define.
//!
//! Triangulations store their rays once (`used_points`) and cells as sorted
//! index lists, so equal subdivisions compare equal. Volumes are measured on
//! the cross-section at height 1 of the parent's Q-Gorenstein functional; for
//! crepant triangulations they are the integer normalized volumes of the
//! height-1 polytope.

mod flop;
mod report;

pub use flop::{build_flop_example, flop_generators, reid_circuit_flip, FlopPairDesc};
pub use report::{terminalization_report, CellReport, TerminalizationReport};

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;
use crate::lattice::{
    are_independent, kernel_basis, lattice_volume, rank_of_rows, rational_coefficients, solve_rational, LatticeMatrix,
    LatticeVector,
};
use crate::polyhedra::{ConeDesc, PolytopeDesc};
use crate::toric::{box_points_of_rays, classify_simplicial_cone, gorenstein_functional, SingularityFlags};

/// Maximum number of stellar subdivisions performed by the search.
pub const SEARCH_STEP_LIMIT: usize = 10_000;

/// A subdivision of `parent` into simplicial cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TriangulationJson", into = "TriangulationJson")]
pub struct TriangulationDesc {
    parent: ConeDesc,
    used_points: Vec<LatticeVector>,
    cells: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TriangulationJson {
    parent: ConeDesc,
    cells: Vec<Vec<usize>>,
    used_points: Vec<LatticeVector>,
}

impl TryFrom<TriangulationJson> for TriangulationDesc {
    type Error = Error;

    fn try_from(j: TriangulationJson) -> Result<Self> {
        let mut cells = Vec::with_capacity(j.cells.len());
        for cell in &j.cells {
            let mut rays = Vec::with_capacity(cell.len());
            for &i in cell {
                rays.push(
                    j.used_points
                        .get(i)
                        .ok_or_else(|| Error::InvalidInput(format!("cell index {i} out of range")))?
                        .clone(),
                );
            }
            cells.push(rays);
        }
        TriangulationDesc::new(j.parent, cells)
    }
}

impl From<TriangulationDesc> for TriangulationJson {
    fn from(t: TriangulationDesc) -> Self {
        TriangulationJson { parent: t.parent, cells: t.cells, used_points: t.used_points }
    }
}

impl TriangulationDesc {
    /// Builds the canonical form: used points sorted, every cell a sorted
    /// index list, cells sorted.
    pub fn new(parent: ConeDesc, cells: Vec<Vec<LatticeVector>>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidInput("a triangulation needs at least one cell".into()));
        }
        let n = parent.ambient_dim();
        let mut points = BTreeSet::new();
        for cell in &cells {
            if cell.is_empty() {
                return Err(Error::InvalidInput("empty cell".into()));
            }
            for r in cell {
                if r.dim() != n {
                    return Err(Error::DimensionMismatch(format!("cell ray {r} in ambient dimension {n}")));
                }
                points.insert(r.primitive().ok_or_else(|| Error::InvalidInput("zero ray".into()))?);
            }
        }
        let used_points: Vec<LatticeVector> = points.into_iter().collect();
        let mut idx: Vec<Vec<usize>> = cells
            .iter()
            .map(|cell| {
                let mut ix: Vec<usize> = cell
                    .iter()
                    .map(|r| used_points.binary_search(&r.primitive().unwrap()).unwrap())
                    .collect();
                ix.sort_unstable();
                ix.dedup();
                ix
            })
            .collect();
        idx.sort();
        Ok(TriangulationDesc { parent, used_points, cells: idx })
    }

    pub fn parent(&self) -> &ConeDesc {
        &self.parent
    }

    pub fn used_points(&self) -> &[LatticeVector] {
        &self.used_points
    }

    /// Cells as index lists into [`Self::used_points`].
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_rays(&self, i: usize) -> Vec<LatticeVector> {
        self.cells[i].iter().map(|&j| self.used_points[j].clone()).collect()
    }

    pub fn cell_cones(&self) -> Result<Vec<ConeDesc>> {
        (0..self.cells.len()).map(|i| ConeDesc::new(self.parent.ambient_dim(), self.cell_rays(i))).collect()
    }
}

/// Outcome of [`verify_triangulation`]. Failures are recorded, never raised.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationReport {
    pub covers: bool,
    pub proper: bool,
    pub crepant: bool,
    pub all_cells_empty: bool,
    pub cell_flags: Vec<Option<SingularityFlags>>,
    #[serde(with = "json::rational_vec")]
    pub cell_volumes: Vec<BigRational>,
    #[serde(with = "json::rational")]
    pub parent_volume: BigRational,
    pub failures: Vec<String>,
}

impl TriangulationReport {
    pub fn is_valid(&self) -> bool {
        self.covers && self.proper
    }
}

/// Rational functional equal to 1 on every ray of a Q-Gorenstein cone, or the
/// sum of the facet normals otherwise. Positive on the cone minus the origin.
pub(crate) fn height_functional(c: &ConeDesc) -> Vec<BigRational> {
    let rows: Vec<Vec<BigRational>> = c.rays().iter().map(|r| r.to_rational()).collect();
    let ones = vec![BigRational::one(); rows.len()];
    solve_rational(&rows, &ones, c.ambient_dim()).unwrap_or_else(|| {
        let sum = c.facets().iter().fold(LatticeVector::zero(c.ambient_dim()), |acc, f| &acc + f);
        sum.to_rational()
    })
}

/// Normalized volume of `conv(k_i / h(k_i))`, measured in the span lattice of
/// the rays. Zero for dependent rays.
pub(crate) fn cell_volume(rays: &[LatticeVector], h: &[BigRational], ambient_dim: usize) -> BigRational {
    let det = lattice_volume(rays, ambient_dim).expect("rays have the ambient length");
    let heights: BigRational = rays.iter().map(|r| r.dot_rational(h)).product();
    if heights.is_zero() {
        return BigRational::zero();
    }
    BigRational::from_integer(det) / heights
}

/// Normalized height-1 volume of a pointed cone, via a pulling triangulation
/// of its rays (pulled in decreasing lexicographic order).
pub fn cone_volume(c: &ConeDesc) -> Result<BigRational> {
    let h = height_functional(c);
    let cells = pulling_triangulation(c.ambient_dim(), c.rays(), PullOrder::Largest)?;
    Ok(cells.iter().map(|cell| cell_volume(cell, &h, c.ambient_dim())).sum())
}

#[derive(Clone, Copy)]
pub(crate) enum PullOrder {
    Smallest,
    Largest,
}

/// Pulling triangulation of the vector configuration `points` (all nonzero,
/// spanning a pointed cone). Only points that get pulled appear as rays.
pub(crate) fn pulling_triangulation(
    ambient_dim: usize,
    points: &[LatticeVector],
    order: PullOrder,
) -> Result<Vec<Vec<LatticeVector>>> {
    let cone = ConeDesc::new(ambient_dim, points.to_vec())?;
    if !cone.is_pointed() {
        return Err(Error::InvalidInput("cone is not pointed".into()));
    }
    let d = cone.dim();
    let pts = cone.rays();
    if pts.len() == d {
        return Ok(vec![pts.to_vec()]);
    }
    let apex = match order {
        PullOrder::Smallest => pts.first(),
        PullOrder::Largest => pts.last(),
    }
    .unwrap()
    .clone();
    let mut out = Vec::new();
    for f in cone.facets() {
        if f.dot(&apex).is_zero() {
            continue;
        }
        let face: Vec<LatticeVector> = pts.iter().filter(|p| f.dot(p).is_zero()).cloned().collect();
        for mut cell in pulling_triangulation(ambient_dim, &face, order)? {
            cell.push(apex.clone());
            out.push(cell);
        }
    }
    Ok(out)
}

/// Whether two cells, given as index sets into `points`, meet in a common
/// face: no circuit has its positive part in one and its negative part in the
/// other.
pub(crate) fn meet_properly(a: &[usize], b: &[usize], points: &[LatticeVector]) -> bool {
    if a == b {
        return true;
    }
    let union: Vec<usize> = a.iter().chain(b).copied().collect::<BTreeSet<_>>().into_iter().collect();
    let only_a: Vec<bool> = union.iter().map(|i| !b.contains(i)).collect();
    let only_b: Vec<bool> = union.iter().map(|i| !a.contains(i)).collect();
    let u = union.len();
    let dim = points[0].dim();
    for mask in 1u32..(1u32 << u) {
        let members: Vec<usize> = (0..u).filter(|k| mask & (1 << k) != 0).collect();
        if !members.iter().any(|&k| only_a[k]) || !members.iter().any(|&k| only_b[k]) {
            continue;
        }
        if members.len() > dim + 1 {
            continue;
        }
        let vecs: Vec<LatticeVector> = members.iter().map(|&k| points[union[k]].clone()).collect();
        if rank_of_rows(&vecs, dim) + 1 != vecs.len() {
            continue;
        }
        let kernel = kernel_basis(&LatticeMatrix::from_columns(dim, &vecs).expect("same length"));
        let z = &kernel[0];
        if z.coords().iter().any(|c| c.is_zero()) {
            continue;
        }
        for z in [z.clone(), -z] {
            let separated = members.iter().zip(z.coords()).all(|(&k, c)| {
                let i = union[k];
                if c.is_positive() {
                    a.contains(&i)
                } else {
                    b.contains(&i)
                }
            });
            if separated {
                return false;
            }
        }
    }
    true
}

/// Checks covering (exact volume identity), properness, crepancy and
/// emptiness of every cell.
pub fn verify_triangulation(t: &TriangulationDesc) -> TriangulationReport {
    let parent = t.parent();
    let n = parent.ambient_dim();
    let d = parent.dim();
    let h = height_functional(parent);
    let mut failures = Vec::new();

    let mut cells_ok = true;
    let mut cell_flags = Vec::with_capacity(t.cells().len());
    let mut cell_volumes = Vec::with_capacity(t.cells().len());
    for (i, cell) in t.cells().iter().enumerate() {
        let rays = t.cell_rays(i);
        if let Some(r) = rays.iter().find(|r| !parent.contains(r)) {
            failures.push(format!("cell {i}: ray {r} lies outside the parent cone"));
            cells_ok = false;
        }
        if cell.len() != d || !are_independent(&rays, n) {
            failures.push(format!("cell {i} is not a {d}-dimensional simplicial cone"));
            cells_ok = false;
            cell_flags.push(None);
            cell_volumes.push(BigRational::zero());
            continue;
        }
        cell_volumes.push(cell_volume(&rays, &h, n));
        cell_flags.push(ConeDesc::new(n, rays).ok().and_then(|c| classify_simplicial_cone(&c).ok()));
    }

    let parent_volume = match cone_volume(parent) {
        Ok(v) => v,
        Err(e) => {
            failures.push(format!("parent volume: {e}"));
            BigRational::zero()
        }
    };
    let total: BigRational = cell_volumes.iter().sum();
    if total < parent_volume {
        failures.push(format!("gap: cells cover volume {total} of {parent_volume}"));
    } else if total > parent_volume {
        failures.push(format!("overlap: cells cover volume {total} of {parent_volume}"));
    }
    let covers = cells_ok && total == parent_volume;

    let mut proper = true;
    for i in 0..t.cells().len() {
        for j in i + 1..t.cells().len() {
            let (a, b) = (&t.cells()[i], &t.cells()[j]);
            if a == b || !meet_properly(a, b, t.used_points()) {
                failures.push(format!("overlap: cells {i} and {j} do not meet in a common face"));
                proper = false;
            }
        }
    }

    let crepant = match gorenstein_functional(parent) {
        Some(m) => t.used_points().iter().all(|p| m.dot(p).is_one()),
        None => false,
    };
    let all_cells_empty = cell_flags.iter().all(|f| f.as_ref().is_some_and(|f| f.is_terminal));
    TriangulationReport { covers, proper, crepant, all_cells_empty, cell_flags, cell_volumes, parent_volume, failures }
}

/// Lattice points of the height-1 polytope of a Gorenstein cone.
pub fn height_one_points(c: &ConeDesc) -> Result<Vec<LatticeVector>> {
    if gorenstein_functional(c).is_none() {
        return Err(Error::NotGorenstein("no integral functional is 1 on every ray".into()));
    }
    PolytopeDesc::new(c.ambient_dim(), c.rays().to_vec())?.lattice_points()
}

/// Crepant triangulation with every cell an empty lattice simplex at height 1.
///
/// Starts from the pulling triangulation of the height-1 lattice points and
/// stellarly subdivides the first non-empty cell at its lexicographically
/// smallest height-1 box point until every cell is empty.
pub fn search_crepant_triangulation(c: &ConeDesc) -> Result<TriangulationDesc> {
    let points = height_one_points(c)?;
    let n = c.ambient_dim();
    let mut cells = canonical_cells(pulling_triangulation(n, &points, PullOrder::Smallest)?);
    for _ in 0..SEARCH_STEP_LIMIT {
        let mut witness = None;
        for cell in &cells {
            let mut inner: Vec<LatticeVector> = box_points_of_rays(cell, n)?
                .into_iter()
                .filter(|p| p.height.is_one())
                .map(|p| p.point)
                .collect();
            inner.sort();
            if let Some(q) = inner.into_iter().next() {
                witness = Some(q);
                break;
            }
        }
        let Some(q) = witness else {
            return TriangulationDesc::new(c.clone(), cells);
        };
        cells = canonical_cells(stellar_subdivision(cells, &q));
    }
    Err(Error::SearchExhausted(format!("no empty triangulation after {SEARCH_STEP_LIMIT} subdivisions")))
}

fn canonical_cells(cells: Vec<Vec<LatticeVector>>) -> Vec<Vec<LatticeVector>> {
    let mut cells: Vec<Vec<LatticeVector>> = cells
        .into_iter()
        .map(|mut c| {
            c.sort();
            c
        })
        .collect();
    cells.sort();
    cells.dedup();
    cells
}

/// Replaces every cell containing `q` by the cones joining `q` to the facets
/// of the cell that do not contain it.
pub(crate) fn stellar_subdivision(cells: Vec<Vec<LatticeVector>>, q: &LatticeVector) -> Vec<Vec<LatticeVector>> {
    let mut out = Vec::new();
    for cell in cells {
        match rational_coefficients(&cell, q) {
            Some(alpha) if alpha.iter().all(|a| !a.is_negative()) => {
                for (i, a) in alpha.iter().enumerate() {
                    if a.is_positive() {
                        let mut next = cell.clone();
                        next[i] = q.clone();
                        out.push(next);
                    }
                }
            }
            _ => out.push(cell),
        }
    }
    out
}
