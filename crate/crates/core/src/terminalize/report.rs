//! End-to-end report for a deformation together with a crepant triangulation.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{verify_triangulation, TriangulationDesc};
use crate::deformation::{central_fibre, fibre_presentation, slice_cone, DeformationDesc, FibrePresentationDesc};
use crate::error::{Error, Result};
use crate::json;
use crate::lattice::LatticeVector;
use crate::polyhedra::ConeDesc;
use crate::toric::{classify_cone, star_quotient_weights, SingularityFlags};

pub const REPORT_LABEL: &str = "crepant Q-factorial terminalization";
pub const FLATNESS_NOTE: &str =
    "flatness is not certified algebraically; flatness_proxy records that every chart splits into nonempty marker blocks";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellReport {
    pub rays: Vec<LatticeVector>,
    pub flags: Option<SingularityFlags>,
    pub fibre_presentation: Option<FibrePresentationDesc>,
    pub fibre_error: Option<String>,
    /// `cell ∩ L^⊥` in the fibre basis.
    pub central_fibre: Option<ConeDesc>,
    pub central_fibre_flags: Option<SingularityFlags>,
    pub central_fibre_error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalizationReport {
    pub label: String,
    pub n: usize,
    pub m: usize,
    pub covers: bool,
    pub proper: bool,
    pub crepant: bool,
    pub all_cells_empty: bool,
    pub all_cells_unimodular: bool,
    pub flatness_proxy: bool,
    pub flatness_note: String,
    /// Fibre dimension 2 with every chart smooth.
    pub simultaneous_resolution: bool,
    /// Asserted when `n ≥ 3` and every chart is smooth.
    pub terminal_central_fibres: bool,
    /// Whether every computed chart central fibre classified as terminal.
    pub computed_central_fibres_terminal: bool,
    pub fibre_basis: Vec<LatticeVector>,
    pub central_fibre: Option<ConeDesc>,
    pub cells: Vec<CellReport>,
    #[serde(with = "json::int_vec")]
    pub exceptional_weights: Vec<BigInt>,
    pub failures: Vec<String>,
}

/// Per-chart presentations, chart and central-fibre classifications and the
/// global flags. Cell-level failures are recorded in the cell entries.
pub fn terminalization_report(d: &DeformationDesc, t: &TriangulationDesc) -> Result<TerminalizationReport> {
    if t.parent().ambient_dim() != d.ambient_dim() {
        return Err(Error::DimensionMismatch("triangulation and deformation live in different lattices".into()));
    }
    let check = verify_triangulation(t);
    let mut failures = check.failures.clone();
    if t.parent() != d.cone() && ConeDesc::hull(d.ambient_dim(), t.parent().rays().to_vec())? != *d.cone() {
        failures.push("triangulation parent differs from the deformation cone".into());
    }

    let mut cells = Vec::with_capacity(t.cells().len());
    for (i, flags) in check.cell_flags.iter().enumerate() {
        let rays = t.cell_rays(i);
        let chart = ConeDesc::new(d.ambient_dim(), rays.clone())?;
        let (fibre_presentation, fibre_error) = match fibre_presentation(d, &chart) {
            Ok(fp) => (Some(fp), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let (central_fibre, central_fibre_flags, central_fibre_error) =
            match slice_cone(d, &chart).and_then(|c| classify_cone(&c).map(|f| (c, f))) {
                Ok((c, f)) => (Some(c), Some(f), None),
                Err(e) => (None, None, Some(e.to_string())),
            };
        cells.push(CellReport {
            rays,
            flags: flags.clone(),
            fibre_presentation,
            fibre_error,
            central_fibre,
            central_fibre_flags,
            central_fibre_error,
        });
    }

    let all_cells_unimodular = cells.iter().all(|c| c.flags.as_ref().is_some_and(|f| f.index.is_one()));
    let flatness_proxy = cells.iter().all(|c| c.fibre_presentation.is_some());
    let computed_central_fibres_terminal =
        cells.iter().all(|c| c.central_fibre_flags.as_ref().is_some_and(|f| f.is_terminal));
    let valid = check.covers && check.proper;

    Ok(TerminalizationReport {
        label: REPORT_LABEL.into(),
        n: d.n(),
        m: d.m(),
        covers: check.covers,
        proper: check.proper,
        crepant: check.crepant,
        all_cells_empty: check.all_cells_empty,
        all_cells_unimodular,
        flatness_proxy,
        flatness_note: FLATNESS_NOTE.into(),
        simultaneous_resolution: valid && d.n() == 2 && all_cells_unimodular,
        terminal_central_fibres: valid && d.n() >= 3 && all_cells_unimodular,
        computed_central_fibres_terminal,
        fibre_basis: d.fibre_basis(),
        central_fibre: central_fibre(d).ok(),
        exceptional_weights: exceptional_weights(t),
        cells,
        failures,
    })
}

/// Weights of the star of the face shared by every cell, when there is one.
fn exceptional_weights(t: &TriangulationDesc) -> Vec<BigInt> {
    if t.cells().len() < 2 {
        return Vec::new();
    }
    let shared: Vec<usize> = t.cells()[0].iter().copied().filter(|i| t.cells().iter().all(|c| c.contains(i))).collect();
    if shared.is_empty() {
        return Vec::new();
    }
    let pts = t.used_points();
    let opposite: Vec<LatticeVector> = (0..pts.len()).filter(|i| !shared.contains(i)).map(|i| pts[i].clone()).collect();
    let Ok(face) = ConeDesc::new(t.parent().ambient_dim(), shared.iter().map(|&i| pts[i].clone()).collect()) else {
        return Vec::new();
    };
    star_quotient_weights(&face, &opposite).map(|w| w.weights).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::{an_summands, build_deformation};
    use crate::terminalize::{build_flop_example, search_crepant_triangulation};
    use crate::terminalize::tests::v;

    #[test]
    fn a2_staircase_is_a_simultaneous_resolution() {
        let d = build_deformation(&an_summands(2), 2).unwrap();
        let t = search_crepant_triangulation(d.cone()).unwrap();
        let r = terminalization_report(&d, &t).unwrap();
        assert!(r.crepant && r.all_cells_empty && r.flatness_proxy && r.simultaneous_resolution);
        assert!(!r.terminal_central_fibres);
        for c in &r.cells {
            assert!(c.flags.as_ref().unwrap().is_smooth);
            let mut sizes = c.fibre_presentation.as_ref().unwrap().block_sizes();
            sizes.sort();
            assert_eq!(sizes, vec![1, 1, 2]);
            assert!(c.central_fibre_flags.as_ref().unwrap().is_smooth);
        }
        assert_eq!(r.central_fibre.unwrap().rays(), &[v(&[0, 1]), v(&[3, 1])]);
    }

    #[test]
    fn mukai_flop_charts_slice_to_conifolds() {
        let pair = build_flop_example(1, 1).unwrap();
        let r = terminalization_report(&pair.base, &pair.left).unwrap();
        assert!(r.crepant && r.all_cells_empty && r.flatness_proxy && r.terminal_central_fibres);
        assert_eq!(r.exceptional_weights, vec![BigInt::from(1); 3]);
        for c in &r.cells {
            assert!(c.flags.as_ref().unwrap().is_smooth);
            let f = c.central_fibre_flags.as_ref().unwrap();
            assert!(f.is_terminal && !f.is_smooth && f.index.is_one() && !f.is_simplicial);
            let fibre = c.central_fibre.as_ref().unwrap();
            assert_eq!(fibre.rays().len(), 4);
            // oracle: four height-1 rays whose polygon has no other lattice points
            assert!(fibre.rays().iter().all(|r| r[2].is_one()));
            let square = crate::polyhedra::PolytopeDesc::new(3, fibre.rays().to_vec()).unwrap();
            assert_eq!(square.lattice_points().unwrap().len(), 4);
        }
    }

    #[test]
    fn degenerate_base() {
        let tri = crate::polyhedra::PolytopeDesc::from_i64_points(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        let d = build_deformation(&[tri], 3).unwrap();
        let t = search_crepant_triangulation(d.cone()).unwrap();
        let r = terminalization_report(&d, &t).unwrap();
        assert_eq!(r.cells.len(), 1);
        assert_eq!(r.cells[0].central_fibre.as_ref().unwrap(), d.cone());
        assert_eq!(r.cells[0].flags, r.cells[0].central_fibre_flags);
    }
}
