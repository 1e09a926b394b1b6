//! Rational polyhedral cones and lattice polytopes.

mod dd;
mod minkowski;

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{kernel_basis, rank_of_rows, LatticeMatrix, LatticeVector, SpanLattice};

pub use minkowski::{minkowski_decompose, minkowski_sum};

/// Largest bounding box scanned by lattice point enumeration.
pub const LATTICE_SCAN_LIMIT: u64 = 10_000_000;

#[derive(Clone, Debug)]
struct Halfspaces {
    facets: Vec<LatticeVector>,
    equations: Vec<LatticeVector>,
    span_dim: usize,
}

/// A rational polyhedral cone given by primitive ray generators.
///
/// Rays are stored primitive, deduplicated and sorted. The facet description
/// is computed on first use and cached.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ConeJson", into = "ConeJson")]
pub struct ConeDesc {
    ambient_dim: usize,
    rays: Vec<LatticeVector>,
    halfspaces: OnceLock<Halfspaces>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ConeJson {
    dim: usize,
    rays: Vec<LatticeVector>,
}

impl TryFrom<ConeJson> for ConeDesc {
    type Error = Error;

    fn try_from(j: ConeJson) -> Result<Self> {
        ConeDesc::new(j.dim, j.rays)
    }
}

impl From<ConeDesc> for ConeJson {
    fn from(c: ConeDesc) -> Self {
        ConeJson { dim: c.ambient_dim, rays: c.rays }
    }
}

impl PartialEq for ConeDesc {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.rays == other.rays
    }
}

impl Eq for ConeDesc {}

impl PartialOrd for ConeDesc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ConeDesc {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient_dim, &self.rays).cmp(&(other.ambient_dim, &other.rays))
    }
}

impl ConeDesc {
    /// Cone generated by `rays`. Each ray is replaced by its primitive
    /// multiple (orientation kept); duplicates are removed.
    pub fn new(ambient_dim: usize, rays: Vec<LatticeVector>) -> Result<Self> {
        if rays.is_empty() {
            return Err(Error::EmptyCone);
        }
        let mut prims = Vec::with_capacity(rays.len());
        for r in rays {
            if r.dim() != ambient_dim {
                return Err(Error::DimensionMismatch(format!(
                    "ray {r} in a cone of ambient dimension {ambient_dim}"
                )));
            }
            prims.push(r.primitive().ok_or_else(|| Error::InvalidInput("zero ray".into()))?);
        }
        prims.sort();
        prims.dedup();
        Ok(ConeDesc { ambient_dim, rays: prims, halfspaces: OnceLock::new() })
    }

    pub fn from_i64_rays(rays: &[&[i64]]) -> Result<Self> {
        let dim = rays.first().map_or(0, |r| r.len());
        Self::new(dim, rays.iter().map(|r| LatticeVector::from_i64s(r)).collect())
    }

    /// Cone generated by `generators`, keeping only extreme rays when the
    /// cone is pointed.
    pub fn hull(ambient_dim: usize, generators: Vec<LatticeVector>) -> Result<Self> {
        let all = Self::new(ambient_dim, generators)?;
        if !all.is_pointed() {
            return Ok(all);
        }
        let d = all.dim();
        let extreme: Vec<LatticeVector> = all
            .rays
            .iter()
            .filter(|r| {
                let tight: Vec<LatticeVector> =
                    all.facets().iter().filter(|f| f.dot(r).is_zero()).cloned().collect();
                rank_of_rows(&tight, ambient_dim) + 1 == d
            })
            .cloned()
            .collect();
        Self::new(ambient_dim, extreme)
    }

    /// The pointed cone `{y : ⟨a, y⟩ ≥ 0 for every a}`. Fails when the
    /// inequalities do not have full rank (the cone would contain a line) or
    /// cut out only the origin.
    pub fn from_inequalities(ambient_dim: usize, inequalities: &[LatticeVector]) -> Result<Self> {
        if inequalities.iter().any(|a| a.dim() != ambient_dim) {
            return Err(Error::DimensionMismatch("inequality of the wrong length".into()));
        }
        if rank_of_rows(inequalities, ambient_dim) < ambient_dim {
            return Err(Error::InvalidInput("inequalities do not cut out a pointed cone".into()));
        }
        let gens = dd::extreme_rays(inequalities, ambient_dim);
        Self::new(ambient_dim, gens)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    fn halfspaces(&self) -> &Halfspaces {
        self.halfspaces.get_or_init(|| compute_halfspaces(self.ambient_dim, &self.rays))
    }

    /// Primitive inner facet normals, sorted. Together with
    /// [`equations`](Self::equations) they cut out the cone.
    pub fn facets(&self) -> &[LatticeVector] {
        &self.halfspaces().facets
    }

    /// Basis of the functionals vanishing on the linear span.
    pub fn equations(&self) -> &[LatticeVector] {
        &self.halfspaces().equations
    }

    /// Dimension of the linear span.
    pub fn dim(&self) -> usize {
        self.halfspaces().span_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn is_pointed(&self) -> bool {
        rank_of_rows(self.facets(), self.ambient_dim) == self.dim()
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim()
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        v.dim() == self.ambient_dim
            && self.equations().iter().all(|e| e.dot(v).is_zero())
            && self.facets().iter().all(|f| !f.dot(v).is_negative())
    }

    pub fn span_lattice(&self) -> SpanLattice {
        SpanLattice::of(&self.rays, self.ambient_dim).expect("rays have the ambient length")
    }

    /// Rays lying on the face cut out by `functional` (which must be
    /// nonnegative on the cone).
    pub fn face_rays(&self, functional: &LatticeVector) -> Vec<LatticeVector> {
        self.rays.iter().filter(|r| functional.dot(r).is_zero()).cloned().collect()
    }
}

fn compute_halfspaces(ambient_dim: usize, rays: &[LatticeVector]) -> Halfspaces {
    let m = LatticeMatrix::from_rows(ambient_dim, rays).expect("rays have the ambient length");
    let equations = kernel_basis(&m);
    let span_dim = ambient_dim - equations.len();

    // Project onto `span_dim` coordinates on which the span maps isomorphically.
    let mut chosen: Vec<usize> = Vec::with_capacity(span_dim);
    for j in 0..ambient_dim {
        if chosen.len() == span_dim {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(j);
        if rank_of_rows(&project(rays, &trial), trial.len()) == trial.len() {
            chosen = trial;
        }
    }
    let projected = project(rays, &chosen);
    let dual_gens = dd::extreme_rays(&projected, span_dim);
    let mut facets: Vec<LatticeVector> = dual_gens
        .into_iter()
        .map(|y| {
            let mut f = vec![BigInt::zero(); ambient_dim];
            for (c, &j) in y.into_coords().into_iter().zip(&chosen) {
                f[j] = c;
            }
            LatticeVector::new(f)
        })
        .collect();
    facets.sort();
    Halfspaces { facets, equations, span_dim }
}

fn project(vectors: &[LatticeVector], coords: &[usize]) -> Vec<LatticeVector> {
    vectors
        .iter()
        .map(|v| LatticeVector::new(coords.iter().map(|&j| v[j].clone()).collect()))
        .collect()
}

/// Primitive inner facet normals of `c`.
pub fn facets_of_cone(c: &ConeDesc) -> Vec<LatticeVector> {
    c.facets().to_vec()
}

/// A lattice polytope given by its vertices (sorted, no redundant points).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolytopeJson", into = "PolytopeJson")]
pub struct PolytopeDesc {
    ambient_dim: usize,
    vertices: Vec<LatticeVector>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PolytopeJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    vertices: Vec<LatticeVector>,
}

impl TryFrom<PolytopeJson> for PolytopeDesc {
    type Error = Error;

    fn try_from(j: PolytopeJson) -> Result<Self> {
        let dim = match (j.dim, j.vertices.first()) {
            (Some(d), _) => d,
            (None, Some(v)) => v.dim(),
            (None, None) => return Err(Error::InvalidInput("polytope without vertices".into())),
        };
        PolytopeDesc::new(dim, j.vertices)
    }
}

impl From<PolytopeDesc> for PolytopeJson {
    fn from(p: PolytopeDesc) -> Self {
        PolytopeJson { dim: Some(p.ambient_dim), vertices: p.vertices }
    }
}

impl PolytopeDesc {
    /// Convex hull of `points`; only its vertices are kept.
    pub fn new(ambient_dim: usize, points: Vec<LatticeVector>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("empty polytope".into()));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != ambient_dim) {
            return Err(Error::DimensionMismatch(format!(
                "point {p} in a polytope of ambient dimension {ambient_dim}"
            )));
        }
        let lifted: Vec<LatticeVector> = points.iter().map(lift).collect();
        let cone = ConeDesc::hull(ambient_dim + 1, lifted)?;
        let mut vertices: Vec<LatticeVector> = cone.rays().iter().map(drop_last).collect();
        vertices.sort();
        Ok(PolytopeDesc { ambient_dim, vertices })
    }

    pub fn from_i64_points(points: &[&[i64]]) -> Result<Self> {
        let dim = points.first().map_or(0, |p| p.len());
        Self::new(dim, points.iter().map(|p| LatticeVector::from_i64s(p)).collect())
    }

    pub fn point(p: LatticeVector) -> Self {
        PolytopeDesc { ambient_dim: p.dim(), vertices: vec![p] }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    /// Cone over the polytope placed at height 1 in an extra last coordinate.
    pub fn homogenized_cone(&self) -> ConeDesc {
        ConeDesc::new(self.ambient_dim + 1, self.vertices.iter().map(lift).collect())
            .expect("vertices are nonempty and of the right length")
    }

    pub fn affine_dim(&self) -> usize {
        self.homogenized_cone().dim() - 1
    }

    pub fn contains(&self, p: &LatticeVector) -> bool {
        p.dim() == self.ambient_dim && self.homogenized_cone().contains(&lift(p))
    }

    pub fn translate(&self, by: &LatticeVector) -> PolytopeDesc {
        let mut vertices: Vec<LatticeVector> = self.vertices.iter().map(|v| v + by).collect();
        vertices.sort();
        PolytopeDesc { ambient_dim: self.ambient_dim, vertices }
    }

    /// Translate whose lexicographically smallest vertex is the origin.
    pub fn normalized(&self) -> PolytopeDesc {
        self.translate(&-&self.vertices[0])
    }

    pub fn lattice_points(&self) -> Result<Vec<LatticeVector>> {
        lattice_points(self)
    }
}

fn lift(p: &LatticeVector) -> LatticeVector {
    p.concat(&LatticeVector::from_i64s(&[1]))
}

fn drop_last(p: &LatticeVector) -> LatticeVector {
    LatticeVector::new(p.coords()[..p.dim() - 1].to_vec())
}

/// All integer points of the polytope, sorted lexicographically.
///
/// Bounding-box scan with exact half-space membership.
pub fn lattice_points(p: &PolytopeDesc) -> Result<Vec<LatticeVector>> {
    let d = p.ambient_dim;
    let lo: Vec<BigInt> = (0..d).map(|j| p.vertices.iter().map(|v| v[j].clone()).min().unwrap()).collect();
    let hi: Vec<BigInt> = (0..d).map(|j| p.vertices.iter().map(|v| v[j].clone()).max().unwrap()).collect();
    let mut volume: u64 = 1;
    for j in 0..d {
        let side = (&hi[j] - &lo[j] + BigInt::one()).to_u64().unwrap_or(u64::MAX);
        volume = volume.saturating_mul(side);
    }
    if volume > LATTICE_SCAN_LIMIT {
        return Err(Error::ResourceGuard(format!("bounding box of {volume} points")));
    }
    let cone = p.homogenized_cone();
    let mut out = Vec::new();
    box_scan(&lo, &hi, |x| {
        if cone.contains(&lift(x)) {
            out.push(x.clone());
        }
    });
    Ok(out)
}

/// Visits every integer point of `[lo, hi]` in lexicographic order.
pub(crate) fn box_scan(lo: &[BigInt], hi: &[BigInt], mut visit: impl FnMut(&LatticeVector)) {
    let d = lo.len();
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return;
    }
    let mut cur: Vec<BigInt> = lo.to_vec();
    loop {
        visit(&LatticeVector::new(cur.clone()));
        let mut j = d;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if cur[j] < hi[j] {
                cur[j] += 1;
                for (c, l) in cur[j + 1..].iter_mut().zip(&lo[j + 1..]) {
                    *c = l.clone();
                }
                break;
            }
        }
    }
}

/// Cayley cone `R_{≥0} · Conv(∪ R_i × e_i)` of summands `R_0..R_m` living in
/// dimension `n - 1`. Marker coordinates occupy the last `m + 1` positions.
pub fn cayley_cone(summands: &[PolytopeDesc], n: usize) -> Result<ConeDesc> {
    if summands.is_empty() {
        return Err(Error::InvalidInput("at least one summand is required".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("fibre dimension must be positive".into()));
    }
    if let Some(s) = summands.iter().find(|s| s.ambient_dim() != n - 1) {
        return Err(Error::DimensionMismatch(format!(
            "summand of ambient dimension {} for fibre dimension {n}",
            s.ambient_dim()
        )));
    }
    let markers = summands.len();
    let mut rays = Vec::new();
    for (i, s) in summands.iter().enumerate() {
        let marker = LatticeVector::unit(markers, i);
        rays.extend(s.vertices().iter().map(|v| v.concat(&marker)));
    }
    ConeDesc::new(n - 1 + markers, rays)
}

/// Sign of a functional on a vector, as an ordering against zero.
pub(crate) fn sign(x: &BigInt) -> Ordering {
    if x.is_positive() {
        Ordering::Greater
    } else if x.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(c)
    }

    /// Oracle: every primitive functional in a small box that vanishes on at
    /// least `dim - 1` independent rays and is nonnegative on all rays.
    fn brute_force_facets(c: &ConeDesc, bound: i64) -> Vec<LatticeVector> {
        let d = c.ambient_dim();
        let lo = vec![BigInt::from(-bound); d];
        let hi = vec![BigInt::from(bound); d];
        let mut out = Vec::new();
        box_scan(&lo, &hi, |f| {
            if !f.is_primitive() {
                return;
            }
            if c.rays().iter().any(|r| f.dot(r).is_negative()) {
                return;
            }
            let tight: Vec<_> = c.rays().iter().filter(|r| f.dot(r).is_zero()).cloned().collect();
            if rank_of_rows(&tight, d) == d - 1 {
                out.push(f.clone());
            }
        });
        out
    }

    #[test]
    fn orthant_facets() {
        let c = ConeDesc::from_i64_rays(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(facets_of_cone(&c), vec![v(&[0, 0, 1]), v(&[0, 1, 0]), v(&[1, 0, 0])]);
        assert!(c.is_simplicial() && c.is_pointed() && c.is_full_dimensional());
    }

    #[test]
    fn two_dimensional_facets() {
        let c = ConeDesc::from_i64_rays(&[&[1, 0], &[1, 2]]).unwrap();
        let f = facets_of_cone(&c);
        assert_eq!(f, vec![v(&[0, 1]), v(&[2, -1])]);
        assert_eq!(f, brute_force_facets(&c, 3));
    }

    #[test]
    fn hexagon_cone_has_six_facets() {
        let c = ConeDesc::from_i64_rays(&[
            &[1, 0, 1],
            &[0, 1, 1],
            &[-1, -1, 1],
            &[1, 1, 1],
            &[-1, 0, 1],
            &[0, -1, 1],
        ])
        .unwrap();
        let f = facets_of_cone(&c);
        assert_eq!(f.len(), 6);
        assert_eq!(f, brute_force_facets(&c, 2));
    }

    #[test]
    fn empty_ray_list_is_an_error() {
        assert_eq!(ConeDesc::new(2, vec![]), Err(Error::EmptyCone));
    }

    #[test]
    fn non_pointed_cone_is_fine() {
        let c = ConeDesc::from_i64_rays(&[&[1, 0], &[-1, 0], &[0, 1]]).unwrap();
        assert_eq!(facets_of_cone(&c), vec![v(&[0, 1])]);
        assert!(!c.is_pointed());
        assert!(c.contains(&v(&[-5, 2])));
        assert!(!c.contains(&v(&[0, -1])));
    }

    #[test]
    fn lower_dimensional_cone() {
        let c = ConeDesc::from_i64_rays(&[&[1, 0, 1], &[0, 1, 1]]).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.equations().len(), 1);
        assert!(c.contains(&v(&[1, 1, 2])));
        assert!(!c.contains(&v(&[1, 1, 1])));
        assert!(!c.contains(&v(&[2, -1, 1])));
    }

    #[test]
    fn hull_drops_interior_generators() {
        let c = ConeDesc::hull(2, vec![v(&[1, 0]), v(&[1, 1]), v(&[0, 1]), v(&[2, 2])]).unwrap();
        assert_eq!(c.rays(), &[v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn polytope_keeps_only_vertices() {
        let p = PolytopeDesc::from_i64_points(&[&[0, 0], &[2, 0], &[1, 0], &[0, 2], &[1, 1], &[0, 1]]).unwrap();
        assert_eq!(p.vertices(), &[v(&[0, 0]), v(&[0, 2]), v(&[2, 0])]);
        assert_eq!(p.affine_dim(), 2);
    }

    #[test]
    fn lattice_points_unit_segment() {
        let p = PolytopeDesc::from_i64_points(&[&[0], &[1]]).unwrap();
        assert_eq!(lattice_points(&p).unwrap(), vec![v(&[0]), v(&[1])]);
    }

    #[test]
    fn lattice_points_triangle() {
        let p = PolytopeDesc::from_i64_points(&[&[1, 0], &[0, 1], &[-1, -1]]).unwrap();
        assert_eq!(lattice_points(&p).unwrap(), vec![v(&[-1, -1]), v(&[0, 0]), v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn lattice_points_unimodular_simplex() {
        let p = PolytopeDesc::from_i64_points(&[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0], &[1, 1, 1]]).unwrap();
        assert_eq!(lattice_points(&p).unwrap().len(), 4);
    }

    #[test]
    fn lattice_points_in_a_slanted_segment() {
        let p = PolytopeDesc::from_i64_points(&[&[0, 0, 1], &[3, 3, 1]]).unwrap();
        assert_eq!(lattice_points(&p).unwrap().len(), 4);
    }

    #[test]
    fn cayley_cone_of_flop_summands() {
        let (a, b) = (2, 3);
        let r0 = PolytopeDesc::from_i64_points(&[&[1, 0], &[0, 0]]).unwrap();
        let r1 = PolytopeDesc::from_i64_points(&[&[0, 1], &[0, 0]]).unwrap();
        let r2 = PolytopeDesc::from_i64_points(&[&[-a, -b], &[0, 0]]).unwrap();
        let c = cayley_cone(&[r0, r1, r2], 3).unwrap();
        let mut expected = vec![
            v(&[1, 0, 1, 0, 0]),
            v(&[0, 0, 1, 0, 0]),
            v(&[0, 1, 0, 1, 0]),
            v(&[0, 0, 0, 1, 0]),
            v(&[-a, -b, 0, 0, 1]),
            v(&[0, 0, 0, 0, 1]),
        ];
        expected.sort();
        assert_eq!(c.rays(), expected.as_slice());
    }

    #[test]
    fn cayley_cone_single_summand_is_height_one_cone() {
        let r = PolytopeDesc::from_i64_points(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        let c = cayley_cone(&[r], 3).unwrap();
        assert_eq!(c.rays(), &[v(&[0, 0, 1]), v(&[0, 1, 1]), v(&[1, 0, 1])]);
    }

    #[test]
    fn cayley_cone_prism() {
        let seg = PolytopeDesc::from_i64_points(&[&[0], &[1]]).unwrap();
        let c = cayley_cone(&[seg.clone(), seg.clone(), seg], 2).unwrap();
        assert_eq!(c.rays().len(), 6);
        assert_eq!(c.ambient_dim(), 4);
        for r in c.rays() {
            assert_eq!(r[1].clone() + &r[2] + &r[3], BigInt::one());
        }
        assert!(c.is_full_dimensional());
    }

    #[test]
    fn cayley_cone_dimension_mismatch() {
        let a = PolytopeDesc::from_i64_points(&[&[0], &[1]]).unwrap();
        let b = PolytopeDesc::from_i64_points(&[&[0, 0], &[1, 0]]).unwrap();
        assert!(matches!(cayley_cone(&[a, b], 2), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn cone_json_round_trip() {
        let c = ConeDesc::from_i64_rays(&[&[1, 0], &[1, 2]]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"dim":2,"rays":[[1,0],[1,2]]}"#);
        let back: ConeDesc = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<ConeDesc>(r#"{"dim":3,"rays":[[1,0]]}"#).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn points(d: usize, n: std::ops::Range<usize>, bound: i64) -> impl Strategy<Value = Vec<LatticeVector>> {
            proptest::collection::vec(proptest::collection::vec(-bound..=bound, d), n)
                .prop_map(|ps| ps.iter().map(|p| LatticeVector::from_i64s(p)).collect())
        }

        /// Oracle: `x` is in the hull iff it is a convex combination of some
        /// maximal affinely independent subset of the points (Carathéodory).
        fn in_hull_by_caratheodory(pts: &[LatticeVector], x: &LatticeVector) -> bool {
            use crate::lattice::solve_rational;
            use num_rational::BigRational;
            let n = pts.len();
            let lifted: Vec<LatticeVector> = pts.iter().map(lift).collect();
            let k = rank_of_rows(&lifted, x.dim() + 1);
            let target = lift(x);
            (1u32..1 << n).filter(|m| m.count_ones() as usize == k).any(|mask| {
                let subset: Vec<&LatticeVector> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| &lifted[i]).collect();
                let owned: Vec<LatticeVector> = subset.iter().map(|s| (*s).clone()).collect();
                if rank_of_rows(&owned, x.dim() + 1) != k {
                    return false;
                }
                let rows: Vec<Vec<BigRational>> = (0..target.dim())
                    .map(|j| subset.iter().map(|s| BigRational::from_integer(s[j].clone())).collect())
                    .collect();
                match solve_rational(&rows, &target.to_rational(), k) {
                    Some(alpha) => alpha.iter().all(|a| !a.is_negative()),
                    None => false,
                }
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn rays_facets_rays_round_trip(d in 2usize..=5, seed in any::<u64>()) {
                use rand::{Rng, SeedableRng};
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                // pointed: put every generator at positive height in the last coordinate
                let n = rng.gen_range(d..=d + 3);
                let gens: Vec<LatticeVector> = (0..n)
                    .map(|_| {
                        let mut c: Vec<i64> = (0..d - 1).map(|_| rng.gen_range(-3..=3)).collect();
                        c.push(rng.gen_range(1..=3));
                        LatticeVector::from_i64s(&c)
                    })
                    .collect();
                let cone = ConeDesc::hull(d, gens.clone()).unwrap();
                for g in &gens {
                    prop_assert!(cone.contains(g));
                }
                if cone.is_full_dimensional() {
                    let back = ConeDesc::from_inequalities(d, cone.facets()).unwrap();
                    prop_assert_eq!(back.rays(), cone.rays());
                }
            }

            #[test]
            fn lattice_points_match_brute_force(d in 1usize..=4, pts in points(4, 1..6, 3)) {
                let pts: Vec<LatticeVector> = pts.iter().map(|p| LatticeVector::new(p.coords()[..d].to_vec())).collect();
                let poly = PolytopeDesc::new(d, pts.clone()).unwrap();
                let found = lattice_points(&poly).unwrap();
                let lo: Vec<BigInt> = (0..d).map(|j| pts.iter().map(|p| p[j].clone()).min().unwrap()).collect();
                let hi: Vec<BigInt> = (0..d).map(|j| pts.iter().map(|p| p[j].clone()).max().unwrap()).collect();
                let mut expected = Vec::new();
                box_scan(&lo, &hi, |x| if in_hull_by_caratheodory(&pts, x) { expected.push(x.clone()) });
                prop_assert_eq!(found, expected);
                for p in &pts {
                    prop_assert!(poly.contains(p));
                }
            }
        }
    }
}
