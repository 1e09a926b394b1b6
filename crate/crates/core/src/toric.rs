//! Singularity classification of affine toric charts.
//!
//! Simplicial charts are classified through their box points: the lattice
//! points `Σ α_i k_i` with `0 ≤ α_i < 1`, enumerated as Smith-normal-form coset
//! representatives of `N / ⊕ Z k_i`. Their heights under the functional that is
//! 1 on every ray decide canonical and terminal. Cyclic and abelian quotients
//! `C^d / G` are classified by Reid–Tai ages. Non-full-dimensional cones are
//! always measured in their saturated span lattice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;
use crate::lattice::{
    are_independent, kernel_basis, smith_normal_form, solve_integral, solve_rational, LatticeMatrix, LatticeVector,
    SpanLattice,
};
use crate::polyhedra::{box_scan, ConeDesc, LATTICE_SCAN_LIMIT};

/// Largest group order enumerated element by element.
pub const GROUP_ORDER_LIMIT: u64 = 1_000_000;

/// Classification of one affine toric chart or quotient singularity.
///
/// `index` is the order of the chart's quotient group for simplicial charts
/// and quotients, and the Gorenstein index for non-simplicial cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityFlags {
    pub is_smooth: bool,
    pub is_simplicial: bool,
    pub is_gorenstein: bool,
    pub is_canonical: bool,
    pub is_terminal: bool,
    #[serde(with = "json::int")]
    pub index: BigInt,
    pub gorenstein_functional: Option<LatticeVector>,
}

/// Diagonal action of `⊕ Z/l_j` on `C^d`. Generator `j` multiplies the `i`-th
/// coordinate by `ζ_{l_j}^{a_{j,i}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientActionDesc {
    #[serde(with = "json::int")]
    pub order: BigInt,
    #[serde(with = "json::int_vec")]
    pub cyclic_factors: Vec<BigInt>,
    pub generators: Vec<LatticeVector>,
}

impl QuotientActionDesc {
    pub fn new(cyclic_factors: Vec<BigInt>, generators: Vec<LatticeVector>) -> Result<Self> {
        if cyclic_factors.len() != generators.len() {
            return Err(Error::InvalidInput(format!(
                "{} cyclic factors but {} generators",
                cyclic_factors.len(),
                generators.len()
            )));
        }
        let order: BigInt = cyclic_factors.iter().product();
        let q = QuotientActionDesc { order, cyclic_factors, generators };
        q.validate()?;
        Ok(q)
    }

    /// `Z/l` acting with the given weights.
    pub fn cyclic(l: u64, weights: &[i64]) -> Result<Self> {
        Self::new(vec![BigInt::from(l)], vec![LatticeVector::from_i64s(weights)])
    }

    pub fn validate(&self) -> Result<()> {
        if self.cyclic_factors.iter().any(|l| !l.is_positive()) || !self.order.is_positive() {
            return Err(Error::InvalidInput("group order must be positive".into()));
        }
        if self.cyclic_factors.iter().product::<BigInt>() != self.order {
            return Err(Error::InvalidInput("order differs from the product of the cyclic factors".into()));
        }
        let d = self.dim();
        for (l, g) in self.cyclic_factors.iter().zip(&self.generators) {
            if g.dim() != d {
                return Err(Error::DimensionMismatch("generators act on different dimensions".into()));
            }
            if g.coords().iter().any(|a| a.is_negative() || a >= l) {
                return Err(Error::InvalidInput(format!("weights {g} not reduced modulo {l}")));
            }
        }
        Ok(())
    }

    /// Number of coordinates acted on.
    pub fn dim(&self) -> usize {
        self.generators.first().map_or(0, |g| g.dim())
    }

    /// Whether the monomial with the given exponent vector is invariant.
    pub fn is_invariant(&self, exponents: &LatticeVector) -> bool {
        self.cyclic_factors
            .iter()
            .zip(&self.generators)
            .all(|(l, g)| g.dot(exponents).is_multiple_of(l))
    }

    /// The same action with coordinates permuted: new coordinate `i` is old
    /// coordinate `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> QuotientActionDesc {
        let generators = self
            .generators
            .iter()
            .map(|g| LatticeVector::new(perm.iter().map(|&i| g[i].clone()).collect()))
            .collect();
        QuotientActionDesc { order: self.order.clone(), cyclic_factors: self.cyclic_factors.clone(), generators }
    }
}

/// Integral functional equal to 1 on every ray, if one exists.
pub fn gorenstein_functional(c: &ConeDesc) -> Option<LatticeVector> {
    let m = LatticeMatrix::from_rows(c.ambient_dim(), c.rays()).expect("rays have the ambient length");
    let ones = LatticeVector::new(vec![BigInt::one(); c.rays().len()]);
    solve_integral(&m, &ones).expect("shapes agree")
}

/// A lattice point of the half-open parallelepiped spanned by a simplicial
/// cone's rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxPoint {
    pub point: LatticeVector,
    pub coefficients: Vec<BigRational>,
    pub height: BigRational,
}

struct ChartLattice {
    span: SpanLattice,
    coords: Vec<LatticeVector>,
    inverse: Vec<Vec<BigRational>>,
}

impl ChartLattice {
    fn new(rays: &[LatticeVector], ambient_dim: usize) -> Result<Self> {
        if rays.is_empty() {
            return Err(Error::EmptyCone);
        }
        if !are_independent(rays, ambient_dim) {
            return Err(Error::NotSimplicial(format!("{} dependent rays", rays.len())));
        }
        let span = SpanLattice::of(rays, ambient_dim)?;
        let coords: Vec<LatticeVector> =
            rays.iter().map(|r| span.coordinates(r).expect("ray lies in its span lattice")).collect();
        let inverse = rational_inverse(&coords);
        Ok(ChartLattice { span, coords, inverse })
    }

    /// `α` with `Σ α_i k_i = x` for `x` in span coordinates.
    fn coefficients(&self, x: &LatticeVector) -> Vec<BigRational> {
        let d = self.coords.len();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|k| &self.inverse[k][i] * BigRational::from_integer(x[k].clone()))
                    .sum()
            })
            .collect()
    }

    fn matrix(&self) -> LatticeMatrix {
        LatticeMatrix::from_rows(self.coords.len(), &self.coords).expect("square")
    }
}

/// Inverse of a nonsingular square integer matrix given by rows.
fn rational_inverse(rows: &[LatticeVector]) -> Vec<Vec<BigRational>> {
    let d = rows.len();
    let system: Vec<Vec<BigRational>> = rows.iter().map(|r| r.to_rational()).collect();
    let cols: Vec<Vec<BigRational>> = (0..d)
        .map(|j| {
            let mut e = vec![BigRational::zero(); d];
            e[j] = BigRational::one();
            solve_rational(&system, &e, d).expect("nonsingular")
        })
        .collect();
    (0..d).map(|k| (0..d).map(|j| cols[j][k].clone()).collect()).collect()
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

fn check_order(order: &BigInt) -> Result<()> {
    if order.to_u64().is_none_or(|o| o > GROUP_ORDER_LIMIT) {
        return Err(Error::ResourceGuard(format!("group order {order} exceeds {GROUP_ORDER_LIMIT}")));
    }
    Ok(())
}

/// All box points of a simplicial cone (origin included), one per element of
/// `N / ⊕ Z k_i`, in the order of the Smith-normal-form coset enumeration.
pub fn box_points(c: &ConeDesc) -> Result<Vec<BoxPoint>> {
    box_points_of_rays(c.rays(), c.ambient_dim())
}

pub(crate) fn box_points_of_rays(rays: &[LatticeVector], ambient_dim: usize) -> Result<Vec<BoxPoint>> {
    let chart = ChartLattice::new(rays, ambient_dim)?;
    let snf = smith_normal_form(&chart.matrix());
    let factors = snf.diagonal();
    let order: BigInt = factors.iter().product();
    check_order(&order)?;
    let v_inverse = integer_inverse(&snf.v);
    let d = factors.len();

    let mut out = Vec::new();
    let zero = vec![BigInt::zero(); d];
    let hi: Vec<BigInt> = factors.iter().map(|f| f - 1).collect();
    box_scan(&zero, &hi, |g| {
        let x = v_inverse.iter().enumerate().fold(LatticeVector::zero(d), |acc, (j, row)| {
            &acc + &row.scaled(&g[j])
        });
        let coefficients: Vec<BigRational> = chart.coefficients(&x).iter().map(frac).collect();
        let mut y = vec![BigRational::zero(); d];
        for (a, c) in coefficients.iter().zip(&chart.coords) {
            for (yk, ck) in y.iter_mut().zip(c.coords()) {
                *yk += a * BigRational::from_integer(ck.clone());
            }
        }
        let y = LatticeVector::new(y.into_iter().map(|v| v.to_integer()).collect());
        let height = coefficients.iter().sum();
        out.push(BoxPoint { point: chart.span.embed(&y), coefficients, height });
    });
    Ok(out)
}

/// Rows of the inverse of a unimodular matrix.
fn integer_inverse(m: &LatticeMatrix) -> Vec<LatticeVector> {
    rational_inverse(&m.row_vectors())
        .into_iter()
        .map(|row| LatticeVector::new(row.into_iter().map(|x| x.to_integer()).collect()))
        .collect()
}

/// Classifies a simplicial cone from its box points.
pub fn classify_simplicial_cone(c: &ConeDesc) -> Result<SingularityFlags> {
    let points = box_points(c)?;
    let index = BigInt::from(points.len());
    let one = BigRational::one();
    let nonzero = || points.iter().filter(|p| !p.point.is_zero());
    let is_canonical = nonzero().all(|p| p.height >= one);
    let is_terminal = nonzero().all(|p| p.height > one);
    let functional = gorenstein_functional(c);
    Ok(SingularityFlags {
        is_smooth: index.is_one(),
        is_simplicial: true,
        is_gorenstein: functional.is_some(),
        is_canonical,
        is_terminal,
        index,
        gorenstein_functional: functional,
    })
}

/// Classifies any pointed Q-Gorenstein cone. Simplicial cones go through
/// [`classify_simplicial_cone`]; the others are decided by scanning the
/// lattice points of `conv(0, rays)`.
pub fn classify_cone(c: &ConeDesc) -> Result<SingularityFlags> {
    if c.is_simplicial() {
        return classify_simplicial_cone(c);
    }
    if !c.is_pointed() {
        return Err(Error::InvalidInput("cone is not pointed".into()));
    }
    let span = c.span_lattice();
    let d = span.rank();
    let coords: Vec<LatticeVector> =
        c.rays().iter().map(|r| span.coordinates(r).expect("ray lies in its span lattice")).collect();
    let rows: Vec<Vec<BigRational>> = coords.iter().map(|r| r.to_rational()).collect();
    let ones = vec![BigRational::one(); coords.len()];
    let h = solve_rational(&rows, &ones, d)
        .ok_or_else(|| Error::NotQGorenstein("no functional is 1 on every ray".into()))?;
    let gorenstein_index = h.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));

    let lo: Vec<BigInt> = (0..d).map(|j| coords.iter().map(|r| r[j].clone()).chain([BigInt::zero()]).min().unwrap()).collect();
    let hi: Vec<BigInt> = (0..d).map(|j| coords.iter().map(|r| r[j].clone()).chain([BigInt::zero()]).max().unwrap()).collect();
    let size = lo.iter().zip(&hi).fold(1u64, |acc, (l, h)| {
        acc.saturating_mul((h - l + 1u32).to_u64().unwrap_or(u64::MAX))
    });
    if size > LATTICE_SCAN_LIMIT {
        return Err(Error::ResourceGuard(format!("bounding box of {size} points")));
    }
    let local = ConeDesc::new(d, coords.clone())?;
    let one = BigRational::one();
    let (mut canonical, mut terminal) = (true, true);
    box_scan(&lo, &hi, |y| {
        if y.is_zero() || !local.contains(y) {
            return;
        }
        let height = y.dot_rational(&h);
        if height < one {
            canonical = false;
            terminal = false;
        } else if height == one && !coords.contains(y) {
            terminal = false;
        }
    });
    let functional = gorenstein_functional(c);
    Ok(SingularityFlags {
        is_smooth: false,
        is_simplicial: false,
        is_gorenstein: functional.is_some(),
        is_canonical: canonical,
        is_terminal: terminal,
        index: gorenstein_index,
        gorenstein_functional: functional,
    })
}

/// Reid–Tai classification of `C^d / G` for a diagonal abelian `G`.
///
/// Every group element is enumerated. Elements acting trivially are skipped;
/// the group must be small (no element acts as a pseudo-reflection).
pub fn cyclic_quotient_classify(q: &QuotientActionDesc) -> Result<SingularityFlags> {
    q.validate()?;
    check_order(&q.order)?;
    let d = q.dim();
    let common = q.cyclic_factors.iter().fold(BigInt::one(), |l, f| l.lcm(f));
    let scale: Vec<BigInt> = q.cyclic_factors.iter().map(|f| &common / f).collect();

    let zero = vec![BigInt::zero(); q.cyclic_factors.len()];
    let hi: Vec<BigInt> = q.cyclic_factors.iter().map(|f| f - 1).collect();
    let mut kernel = BigInt::zero();
    let (mut canonical, mut terminal) = (true, true);
    let mut reflection = None;
    box_scan(&zero, &hi, |k| {
        let numerators: Vec<BigInt> = (0..d)
            .map(|i| {
                let s: BigInt = (0..k.dim()).map(|j| &k[j] * &q.generators[j][i] * &scale[j]).sum();
                s.mod_floor(&common)
            })
            .collect();
        let moved = numerators.iter().filter(|n| !n.is_zero()).count();
        if moved == 0 {
            kernel += 1;
            return;
        }
        if moved == 1 && reflection.is_none() {
            reflection = Some(k.clone());
        }
        let age: BigInt = numerators.iter().sum();
        if age < common {
            canonical = false;
        }
        if age <= common {
            terminal = false;
        }
    });
    if let Some(k) = reflection {
        return Err(Error::InvalidInput(format!(
            "group element {k} acts as a pseudo-reflection; the age criterion needs a small group"
        )));
    }
    let effective = &q.order / &kernel;
    let is_gorenstein = q
        .cyclic_factors
        .iter()
        .zip(&q.generators)
        .all(|(l, g)| g.coords().iter().sum::<BigInt>().is_multiple_of(l));
    Ok(SingularityFlags {
        is_smooth: effective.is_one(),
        is_simplicial: true,
        is_gorenstein,
        is_canonical: canonical,
        is_terminal: terminal,
        index: effective,
        gorenstein_functional: is_gorenstein.then(|| LatticeVector::new(vec![BigInt::one(); d])),
    })
}

/// The diagonal action of `G = N / ⊕ Z k_i` on the chart coordinates
/// `x_i = x^{k_i^∨}`, rays taken in the cone's canonical order.
pub fn quotient_action_of_chart(c: &ConeDesc) -> Result<QuotientActionDesc> {
    quotient_action_of_rays(c.rays(), c.ambient_dim())
}

/// As [`quotient_action_of_chart`] with the coordinate order given by `rays`.
pub fn quotient_action_of_rays(rays: &[LatticeVector], ambient_dim: usize) -> Result<QuotientActionDesc> {
    let chart = ChartLattice::new(rays, ambient_dim)?;
    let snf = smith_normal_form(&chart.matrix());
    let factors = snf.diagonal();
    let v_inverse = integer_inverse(&snf.v);
    let generators = factors
        .iter()
        .zip(&v_inverse)
        .map(|(l, g)| {
            let alpha = chart.coefficients(g);
            let weights = alpha
                .iter()
                .map(|a| {
                    let w = a * BigRational::from_integer(l.clone());
                    debug_assert!(w.is_integer());
                    w.to_integer().mod_floor(l)
                })
                .collect();
            LatticeVector::new(weights)
        })
        .collect();
    QuotientActionDesc::new(factors, generators)
}

/// Weights of the weighted projective space attached to the star of a face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarWeights {
    /// Sorted weight multiset.
    #[serde(with = "json::int_vec")]
    pub weights: Vec<BigInt>,
    /// Relation coefficients aligned with the opposite rays as given.
    #[serde(with = "json::int_vec")]
    pub relation: Vec<BigInt>,
    /// Images of the opposite rays in `N / (span(shared) ∩ N)`.
    pub images: Vec<LatticeVector>,
    pub primitive_images: bool,
    pub spans_quotient: bool,
}

/// Maps `opposite` rays into the quotient of `N` by the saturated span of
/// `shared` and returns the positive primitive relation among their images.
pub fn star_quotient_weights(shared: &ConeDesc, opposite: &[LatticeVector]) -> Result<StarWeights> {
    let n = shared.ambient_dim();
    if opposite.iter().any(|v| v.dim() != n) {
        return Err(Error::DimensionMismatch("opposite ray of the wrong length".into()));
    }
    if opposite.len() < 2 {
        return Err(Error::NoPositiveRelation(format!("{} opposite rays", opposite.len())));
    }
    let annihilator = kernel_basis(&LatticeMatrix::from_rows(n, shared.rays())?);
    let images: Vec<LatticeVector> = opposite
        .iter()
        .map(|v| LatticeVector::new(annihilator.iter().map(|w| w.dot(v)).collect()))
        .collect();
    let q = annihilator.len();
    let relations = kernel_basis(&LatticeMatrix::from_columns(q, &images)?);
    let [relation] = relations.as_slice() else {
        return Err(Error::NoPositiveRelation(format!("{} independent relations among the images", relations.len())));
    };
    let relation = if relation.coords().iter().all(|c| c.is_negative()) { -relation } else { relation.clone() };
    if !relation.coords().iter().all(|c| c.is_positive()) {
        return Err(Error::NoPositiveRelation(format!("relation {relation} has mixed signs")));
    }
    let mut weights = relation.coords().to_vec();
    weights.sort();
    let spans_quotient = crate::lattice::rank_of_rows(&images, q) == q;
    Ok(StarWeights {
        weights,
        relation: relation.into_coords(),
        primitive_images: images.iter().all(|v| v.is_primitive()),
        images,
        spans_quotient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(c)
    }

    fn cone(rays: &[&[i64]]) -> ConeDesc {
        ConeDesc::from_i64_rays(rays).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn flop_ray(i: usize, a: i64, b: i64) -> LatticeVector {
        match i {
            1 => v(&[1, 0, 1, 0, 0]),
            2 => v(&[0, 0, 1, 0, 0]),
            3 => v(&[0, 1, 0, 1, 0]),
            4 => v(&[0, 0, 0, 1, 0]),
            5 => v(&[-a, -b, 0, 0, 1]),
            6 => v(&[0, 0, 0, 0, 1]),
            _ => unreachable!(),
        }
    }

    fn flop_cone(idx: &[usize], a: i64, b: i64) -> ConeDesc {
        ConeDesc::new(5, idx.iter().map(|&i| flop_ray(i, a, b)).collect()).unwrap()
    }

    #[test]
    fn orthant_functional() {
        for d in 1..=4 {
            let c = ConeDesc::new(d, (0..d).map(|i| LatticeVector::unit(d, i)).collect()).unwrap();
            assert_eq!(gorenstein_functional(&c), Some(LatticeVector::new(vec![BigInt::one(); d])));
            let f = classify_simplicial_cone(&c).unwrap();
            assert!(f.is_smooth && f.is_terminal && f.is_canonical && f.is_gorenstein);
            assert_eq!(f.index, BigInt::one());
        }
    }

    #[test]
    fn cayley_cone_functional_is_marker_sum() {
        let c = flop_cone(&[1, 2, 3, 4, 5, 6], 2, 3);
        let m = gorenstein_functional(&c).unwrap();
        assert_eq!(m, v(&[0, 0, 1, 1, 1]));
        for r in c.rays() {
            assert_eq!(m.dot(r), BigInt::one());
        }
    }

    #[test]
    fn non_gorenstein_cone() {
        let c = cone(&[&[1, 0], &[2, 3]]);
        assert_eq!(gorenstein_functional(&c), None);
        // oracle: the rational functional is forced to (1, -1/3)
        let rows = vec![v(&[1, 0]).to_rational(), v(&[2, 3]).to_rational()];
        let h = solve_rational(&rows, &[BigRational::one(), BigRational::one()], 2).unwrap();
        assert!(!h[1].is_integer());
        assert!(!classify_simplicial_cone(&c).unwrap().is_gorenstein);
    }

    #[test]
    fn triangle_cone_is_canonical_not_terminal() {
        let c = cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, -1, 1]]);
        let f = classify_simplicial_cone(&c).unwrap();
        assert_eq!(f.index, BigInt::from(3));
        assert!(f.is_gorenstein && f.is_canonical && !f.is_terminal && !f.is_smooth);
        let mut heights: Vec<BigRational> = box_points(&c).unwrap().into_iter().map(|p| p.height).collect();
        heights.sort();
        assert_eq!(heights, vec![BigRational::zero(), BigRational::one(), BigRational::from_integer(2.into())]);
        let pts: Vec<LatticeVector> = box_points(&c).unwrap().into_iter().map(|p| p.point).collect();
        assert!(pts.contains(&v(&[0, 0, 1])));
    }

    #[test]
    fn flop_chart_index_is_a() {
        for (a, b) in [(1, 2), (2, 3), (3, 1)] {
            let chart = flop_cone(&[2, 4, 6, 3, 5], a, b);
            let f = classify_simplicial_cone(&chart).unwrap();
            assert_eq!(f.index, BigInt::from(a));
            assert_eq!(f.is_smooth, a == 1);
            let det = LatticeMatrix::from_rows(5, chart.rays()).unwrap().determinant().unwrap().abs();
            assert_eq!(det, BigInt::from(a));
        }
    }

    #[test]
    fn not_simplicial() {
        let c = cone(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 1], &[0, 0, 1]]);
        assert!(matches!(classify_simplicial_cone(&c), Err(Error::NotSimplicial(_))));
        assert!(matches!(quotient_action_of_chart(&c), Err(Error::NotSimplicial(_))));
    }

    #[test]
    fn conifold_is_terminal_but_not_simplicial() {
        let c = cone(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        let f = classify_cone(&c).unwrap();
        assert!(!f.is_smooth && !f.is_simplicial && f.is_gorenstein && f.is_canonical && f.is_terminal);
        assert_eq!(f.index, BigInt::one());
        // the hexagon cone has an interior point at height one
        let hex = cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, -1, 1], &[1, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        let f = classify_cone(&hex).unwrap();
        assert!(f.is_canonical && !f.is_terminal);
    }

    #[test]
    fn non_gorenstein_non_simplicial() {
        // cone over a quadrilateral with one vertex at height 2
        let c = cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        let f = classify_cone(&c).unwrap();
        assert!(f.is_gorenstein && !f.is_terminal);
    }

    #[test]
    fn reid_tai_examples() {
        let trivial = QuotientActionDesc::cyclic(1, &[0, 0, 0]).unwrap();
        let f = cyclic_quotient_classify(&trivial).unwrap();
        assert!(f.is_smooth && f.is_terminal);

        let f = cyclic_quotient_classify(&QuotientActionDesc::cyclic(2, &[1, 1, 1, 1]).unwrap()).unwrap();
        assert!(f.is_gorenstein && f.is_terminal && f.is_canonical && !f.is_smooth);
        assert_eq!(f.index, BigInt::from(2));

        let f = cyclic_quotient_classify(&QuotientActionDesc::cyclic(2, &[1, 1]).unwrap()).unwrap();
        assert!(f.is_gorenstein && f.is_canonical && !f.is_terminal);

        let f = cyclic_quotient_classify(&QuotientActionDesc::cyclic(5, &[1, 2, 3]).unwrap()).unwrap();
        // ages: k=1: 6/5, k=2: (2+4+1)/5, k=3: (3+1+4)/5, k=4: (4+3+2)/5
        assert!(!f.is_gorenstein && f.is_terminal);
    }

    #[test]
    fn reid_tai_errors() {
        assert!(QuotientActionDesc::cyclic(0, &[0]).is_err());
        assert!(QuotientActionDesc::cyclic(2, &[2, 0]).is_err());
        let refl = QuotientActionDesc::cyclic(2, &[1, 0]).unwrap();
        assert!(cyclic_quotient_classify(&refl).is_err());
        let huge = QuotientActionDesc::new(vec![BigInt::from(2_000_000u64)], vec![v(&[1, 1_999_999])]).unwrap();
        assert!(matches!(cyclic_quotient_classify(&huge), Err(Error::ResourceGuard(_))));
    }

    #[test]
    fn unimodular_chart_has_trivial_action() {
        let q = quotient_action_of_chart(&cone(&[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1]])).unwrap();
        assert!(q.order.is_one());
        assert!(q.cyclic_factors.iter().all(|f| f.is_one()));
    }

    #[test]
    fn a1_chart_action() {
        let c = cone(&[&[1, 0], &[1, 2]]);
        let q = quotient_action_of_chart(&c).unwrap();
        assert_eq!(q.order, BigInt::from(2));
        let nontrivial: Vec<_> =
            q.cyclic_factors.iter().zip(&q.generators).filter(|(l, _)| !l.is_one()).collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(nontrivial[0].1, &v(&[1, 1]));
        // oracle: x^u invariant iff u_1 k_1^∨ + u_2 k_2^∨ is integral, with
        // k_1^∨ = (1, -1/2) and k_2^∨ = (0, 1/2)
        for u1 in 0..4i64 {
            for u2 in 0..4i64 {
                let second = BigRational::new((u2 - u1).into(), 2.into());
                assert_eq!(q.is_invariant(&v(&[u1, u2])), second.is_integer());
            }
        }
    }

    #[test]
    fn flop_chart_action_has_order_two() {
        let chart = flop_cone(&[2, 4, 6, 3, 5], 2, 3);
        let snf = smith_normal_form(&LatticeMatrix::from_rows(5, chart.rays()).unwrap());
        assert_eq!(snf.diagonal(), ints(&[1, 1, 1, 1, 2]));
        let q = quotient_action_of_chart(&chart).unwrap();
        assert_eq!(q.order, BigInt::from(2));
        let f = cyclic_quotient_classify(&q).unwrap();
        assert_eq!(f.index, BigInt::from(2));
    }

    #[test]
    fn star_weights_of_the_flop() {
        for (a, b) in [(1, 1), (1, 2), (2, 3)] {
            let shared = flop_cone(&[2, 4, 6], a, b);
            let opp: Vec<_> = [1, 3, 5].iter().map(|&i| flop_ray(i, a, b)).collect();
            let w = star_quotient_weights(&shared, &opp).unwrap();
            let mut expected = ints(&[a, b, 1]);
            expected.sort();
            assert_eq!(w.weights, expected);
            assert_eq!(w.relation, ints(&[a, b, 1]));
            assert!(w.spans_quotient);
        }
    }

    #[test]
    fn conifold_star_is_a_line() {
        let shared = cone(&[&[0, 0, 1], &[1, 1, 1]]);
        let w = star_quotient_weights(&shared, &[v(&[1, 0, 1]), v(&[0, 1, 1])]).unwrap();
        assert_eq!(w.weights, ints(&[1, 1]));
        // oracle: the kernel of the image matrix
        let k = kernel_basis(&LatticeMatrix::from_columns(1, &w.images).unwrap());
        assert_eq!(k.len(), 1);
    }

    #[test]
    fn degenerate_star() {
        let shared = cone(&[&[0, 0, 1]]);
        assert!(matches!(star_quotient_weights(&shared, &[v(&[1, 0, 1])]), Err(Error::NoPositiveRelation(_))));
        // two images with no positive relation
        assert!(matches!(
            star_quotient_weights(&shared, &[v(&[1, 0, 1]), v(&[0, 1, 1])]),
            Err(Error::NoPositiveRelation(_))
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn simplicial(d: usize) -> impl Strategy<Value = ConeDesc> {
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, d), d).prop_filter_map(
                "independent, small index",
                move |rows| {
                    let rays: Vec<LatticeVector> = rows.iter().map(|r| LatticeVector::from_i64s(r)).collect();
                    if rays.iter().any(|r| r.is_zero()) {
                        return None;
                    }
                    let c = ConeDesc::new(d, rays).ok()?;
                    if !c.is_simplicial() || c.rays().len() != d {
                        return None;
                    }
                    let det = LatticeMatrix::from_rows(d, c.rays()).ok()?.determinant().ok()?.abs();
                    (det <= BigInt::from(8)).then_some(c)
                },
            )
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn box_heights_match_ages(c in prop_oneof![simplicial(2), simplicial(3)]) {
                let flags = classify_simplicial_cone(&c).unwrap();
                let q = quotient_action_of_chart(&c).unwrap();
                prop_assert_eq!(&q.order, &flags.index);
                let det = LatticeMatrix::from_rows(c.ambient_dim(), c.rays()).unwrap().determinant().unwrap().abs();
                prop_assert_eq!(&det, &flags.index);
                let nontrivial = q.cyclic_factors.iter().filter(|f| !f.is_one()).count();
                if nontrivial <= 1 {
                    if let Ok(qf) = cyclic_quotient_classify(&q) {
                        prop_assert_eq!(qf.is_canonical, flags.is_canonical);
                        prop_assert_eq!(qf.is_terminal, flags.is_terminal);
                        prop_assert_eq!(qf.is_gorenstein, flags.is_gorenstein);
                        prop_assert_eq!(qf.index, flags.index.clone());
                    }
                }
                // every box point is in the cone and the count is the index
                let pts = box_points(&c).unwrap();
                prop_assert_eq!(BigInt::from(pts.len()), flags.index.clone());
                for p in &pts {
                    prop_assert!(c.contains(&p.point));
                }
                if flags.is_gorenstein {
                    prop_assert!(flags.is_canonical);
                    for p in &pts {
                        prop_assert!(p.height.is_integer());
                    }
                }
                prop_assert_eq!(flags.is_gorenstein, flags.gorenstein_functional.is_some());
                if flags.is_smooth {
                    prop_assert!(flags.is_terminal);
                }
                if flags.is_terminal {
                    prop_assert!(flags.is_canonical);
                }
            }

            #[test]
            fn star_weights_ignore_order(perm in Just(vec![0usize, 1, 2]).prop_shuffle(), a in 1i64..5, b in 1i64..5) {
                let shared = flop_cone(&[2, 4, 6], a, b);
                let opp: Vec<_> = [1, 3, 5].iter().map(|&i| flop_ray(i, a, b)).collect();
                let shuffled: Vec<_> = perm.iter().map(|&i| opp[i].clone()).collect();
                let w1 = star_quotient_weights(&shared, &opp).unwrap();
                let w2 = star_quotient_weights(&shared, &shuffled).unwrap();
                prop_assert_eq!(w1.weights, w2.weights);
            }
        }
    }
}
