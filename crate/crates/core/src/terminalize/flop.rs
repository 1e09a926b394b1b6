//! Circuit flips and the four-dimensional flop family with exceptional sets
//! `P(1,a,b)`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{verify_triangulation, TriangulationDesc};
use crate::deformation::{build_deformation, DeformationDesc};
use crate::error::{Error, Result};
use crate::json;
use crate::lattice::{kernel_basis, LatticeMatrix, LatticeVector};
use crate::polyhedra::{ConeDesc, PolytopeDesc};
use crate::toric::{classify_simplicial_cone, star_quotient_weights};

/// The two triangulations of a circuit. The left one omits, cell by cell, an
/// element of the positive part; the right one an element of the negative
/// part. Rays outside the support of the relation lie in every cell.
pub fn reid_circuit_flip(
    rays: &[LatticeVector],
    relation: &[BigInt],
) -> Result<(TriangulationDesc, TriangulationDesc)> {
    if rays.is_empty() {
        return Err(Error::EmptyCone);
    }
    if rays.len() != relation.len() {
        return Err(Error::DimensionMismatch(format!("{} rays but {} coefficients", rays.len(), relation.len())));
    }
    let n = rays[0].dim();
    if rays.iter().any(|r| r.dim() != n) {
        return Err(Error::DimensionMismatch("rays of different lengths".into()));
    }
    let combination = rays
        .iter()
        .zip(relation)
        .fold(LatticeVector::zero(n), |acc, (r, c)| &acc + &r.scaled(c));
    if !combination.is_zero() {
        return Err(Error::NotACircuit(format!("the relation evaluates to {combination}")));
    }
    let positive: Vec<usize> = (0..rays.len()).filter(|&i| relation[i].is_positive()).collect();
    let negative: Vec<usize> = (0..rays.len()).filter(|&i| relation[i].is_negative()).collect();
    if positive.is_empty() || negative.is_empty() {
        return Err(Error::NotACircuit("the relation needs both positive and negative coefficients".into()));
    }
    let relations = kernel_basis(&LatticeMatrix::from_columns(n, rays)?);
    if relations.len() != 1 {
        return Err(Error::NotACircuit(format!("the rays satisfy {} independent relations", relations.len())));
    }
    let parent = ConeDesc::hull(n, rays.to_vec())?;
    if !parent.is_pointed() {
        return Err(Error::NotACircuit("the rays do not span a pointed cone".into()));
    }
    let side = |part: &[usize]| -> Result<TriangulationDesc> {
        let cells = part
            .iter()
            .map(|&i| rays.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect())
            .collect();
        let t = TriangulationDesc::new(parent.clone(), cells)?;
        let report = verify_triangulation(&t);
        if !report.is_valid() {
            return Err(Error::NotACircuit(format!("flip side fails to triangulate: {}", report.failures.join("; "))));
        }
        Ok(t)
    };
    Ok((side(&positive)?, side(&negative)?))
}

/// `e_1..e_6` of the flop family in `Z^5`.
pub fn flop_generators(a: &BigInt, b: &BigInt) -> Vec<LatticeVector> {
    let v = |c: &[i64]| LatticeVector::from_i64s(c);
    vec![
        v(&[1, 0, 1, 0, 0]),
        v(&[0, 0, 1, 0, 0]),
        v(&[0, 1, 0, 1, 0]),
        v(&[0, 0, 0, 1, 0]),
        LatticeVector::new(vec![-a.clone(), -b.clone(), BigInt::zero(), BigInt::zero(), BigInt::from(1)]),
        v(&[0, 0, 0, 0, 1]),
    ]
}

/// A flop between two crepant terminalizations of the same Gorenstein cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlopPairDesc {
    #[serde(with = "json::int")]
    pub a: BigInt,
    #[serde(with = "json::int")]
    pub b: BigInt,
    pub base: DeformationDesc,
    /// `e_1..e_6`.
    pub generators: Vec<LatticeVector>,
    pub circuit_relation: LatticeVector,
    pub left: TriangulationDesc,
    pub right: TriangulationDesc,
    #[serde(with = "json::int_vec")]
    pub exceptional_weights_left: Vec<BigInt>,
    #[serde(with = "json::int_vec")]
    pub exceptional_weights_right: Vec<BigInt>,
    /// Chart indices of the left cells omitting `e_5`, `e_1`, `e_3`.
    #[serde(with = "json::int_vec")]
    pub left_chart_indices: Vec<BigInt>,
    /// Chart indices of the right cells omitting `e_6`, `e_2`, `e_4`.
    #[serde(with = "json::int_vec")]
    pub right_chart_indices: Vec<BigInt>,
}

impl FlopPairDesc {
    /// Rays of the cell omitting generator `e_i` (1-based).
    pub fn cell_omitting(&self, i: usize) -> Vec<LatticeVector> {
        self.generators
            .iter()
            .enumerate()
            .filter(|&(j, _)| j + 1 != i)
            .map(|(_, r)| r.clone())
            .collect()
    }
}

/// Builds the flop family from the summands `⟨(1,0),(0,0)⟩`, `⟨(0,1),(0,0)⟩`,
/// `⟨(-a,-b),(0,0)⟩` and checks everything the construction promises.
pub fn build_flop_example(a: u64, b: u64) -> Result<FlopPairDesc> {
    if a == 0 || b == 0 {
        return Err(Error::InvalidInput("a and b must be positive".into()));
    }
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    let seg = |x: LatticeVector| PolytopeDesc::new(2, vec![x, LatticeVector::zero(2)]);
    let summands = vec![
        seg(LatticeVector::from_i64s(&[1, 0]))?,
        seg(LatticeVector::from_i64s(&[0, 1]))?,
        seg(LatticeVector::new(vec![-a.clone(), -b.clone()]))?,
    ];
    let base = build_deformation(&summands, 3)?;
    let e = flop_generators(&a, &b);
    let mut sorted = e.clone();
    sorted.sort();
    if base.cone().rays() != sorted.as_slice() {
        return Err(Error::InvalidInput("the Cayley cone does not have the expected generators".into()));
    }
    let one = BigInt::from(1);
    let relation = vec![a.clone(), -a.clone(), b.clone(), -b.clone(), one.clone(), -one];
    let (left, right) = reid_circuit_flip(&e, &relation)?;

    let pick = |idx: &[usize]| -> Vec<LatticeVector> { idx.iter().map(|&i| e[i - 1].clone()).collect() };
    let star = |shared: &[usize], opposite: &[usize]| -> Result<Vec<BigInt>> {
        let face = ConeDesc::new(5, pick(shared))?;
        Ok(star_quotient_weights(&face, &pick(opposite))?.weights)
    };
    let exceptional_weights_left = star(&[2, 4, 6], &[1, 3, 5])?;
    let exceptional_weights_right = star(&[1, 3, 5], &[2, 4, 6])?;
    let mut expected = vec![BigInt::from(1), a.clone(), b.clone()];
    expected.sort();
    if exceptional_weights_left != expected || exceptional_weights_right != expected {
        return Err(Error::InvalidInput(format!(
            "exceptional weights {exceptional_weights_left:?} / {exceptional_weights_right:?} differ from {expected:?}"
        )));
    }

    let mut pair = FlopPairDesc {
        a,
        b,
        base,
        generators: e,
        circuit_relation: LatticeVector::new(relation),
        left,
        right,
        exceptional_weights_left,
        exceptional_weights_right,
        left_chart_indices: Vec::new(),
        right_chart_indices: Vec::new(),
    };
    let index = |omit: usize| -> Result<BigInt> {
        Ok(classify_simplicial_cone(&ConeDesc::new(5, pair.cell_omitting(omit))?)?.index)
    };
    let left_idx = [5, 1, 3].iter().map(|&i| index(i)).collect::<Result<Vec<_>>>()?;
    let right_idx = [6, 2, 4].iter().map(|&i| index(i)).collect::<Result<Vec<_>>>()?;
    pair.left_chart_indices = left_idx;
    pair.right_chart_indices = right_idx;
    Ok(pair)
}
