//! Homogeneous toric deformations built by the Cayley construction.
//!
//! A deformation lives in `N = Z^{n+m}`. The last `m + 1` coordinates are the
//! marker functionals `r_0..r_m`; the family is cut out by `x^{r_i} - x^{r_0}`
//! and its central fibre is the toric variety of `σ ∩ L^⊥` where
//! `L = ⊕ Z (r_i - r_0)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{kernel_basis, LatticeMatrix, LatticeVector};
use crate::polyhedra::{cayley_cone, ConeDesc, PolytopeDesc};
use crate::toric::{gorenstein_functional, quotient_action_of_rays, QuotientActionDesc};

/// A Gorenstein homogeneous deformation over `C^m` with `n`-dimensional fibres.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DeformationJson", into = "DeformationJson")]
pub struct DeformationDesc {
    n: usize,
    m: usize,
    cone: ConeDesc,
    summands: Option<Vec<PolytopeDesc>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct DeformationJson {
    n: usize,
    m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    summands: Option<Vec<PolytopeDesc>>,
    cone: ConeDesc,
}

impl TryFrom<DeformationJson> for DeformationDesc {
    type Error = Error;

    fn try_from(j: DeformationJson) -> Result<Self> {
        if let Some(s) = &j.summands {
            let built = build_deformation(s, j.n)?;
            if built.cone != j.cone || built.m != j.m {
                return Err(Error::InvalidInput("cone is not the Cayley cone of the summands".into()));
            }
            return Ok(built);
        }
        DeformationDesc::new(j.cone, j.n, j.m)
    }
}

impl From<DeformationDesc> for DeformationJson {
    fn from(d: DeformationDesc) -> Self {
        DeformationJson { n: d.n, m: d.m, summands: d.summands, cone: d.cone }
    }
}

impl DeformationDesc {
    /// Wraps a cone in `Z^{n+m}` after checking that every ray takes
    /// nonnegative marker values summing to one.
    pub fn new(cone: ConeDesc, n: usize, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("fibre dimension must be positive".into()));
        }
        if cone.ambient_dim() != n + m {
            return Err(Error::DimensionMismatch(format!(
                "cone in dimension {} for n = {n}, m = {m}",
                cone.ambient_dim()
            )));
        }
        let d = DeformationDesc { n, m, cone, summands: None };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        let markers = self.markers();
        for ray in self.cone.rays() {
            let values: Vec<BigInt> = markers.iter().map(|r| r.dot(ray)).collect();
            if values.iter().any(|v| v < &BigInt::zero()) || !values.iter().sum::<BigInt>().is_one() {
                return Err(Error::NotGorensteinHomogeneous(format!(
                    "ray {ray} has marker values {values:?}; they must be nonnegative and sum to 1"
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cone(&self) -> &ConeDesc {
        &self.cone
    }

    pub fn summands(&self) -> Option<&[PolytopeDesc]> {
        self.summands.as_deref()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n + self.m
    }

    /// `r_0..r_m`: the coordinate functionals at positions `n - 1 .. n + m - 1`.
    pub fn markers(&self) -> Vec<LatticeVector> {
        (0..=self.m).map(|i| LatticeVector::unit(self.ambient_dim(), self.n - 1 + i)).collect()
    }

    /// Index of the marker equal to 1 on `ray`, if exactly one is and the
    /// others vanish.
    pub fn marker_of(&self, ray: &LatticeVector) -> Option<usize> {
        let values: Vec<BigInt> = self.markers().iter().map(|r| r.dot(ray)).collect();
        let ones: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_one()).collect();
        (ones.len() == 1 && values.iter().all(|v| v.is_zero() || v.is_one())).then(|| ones[0])
    }

    /// `r_i - r_0` for `i = 1..m`.
    pub fn l_basis(&self) -> Vec<LatticeVector> {
        let r = self.markers();
        r[1..].iter().map(|ri| ri - &r[0]).collect()
    }

    /// Basis of the saturated sublattice `N̄ = L^⊥ ∩ N` defining the
    /// coordinates of every central-fibre cone.
    pub fn fibre_basis(&self) -> Vec<LatticeVector> {
        let l = LatticeMatrix::from_rows(self.ambient_dim(), &self.l_basis()).expect("marker rows have the ambient length");
        kernel_basis(&l)
    }

    /// The restriction of `r_0` to `N̄`. All markers agree there, and the
    /// central fibre sits at height 1 under it.
    pub fn inherited_functional(&self) -> LatticeVector {
        let r0 = &self.markers()[0];
        LatticeVector::new(self.fibre_basis().iter().map(|b| b.dot(r0)).collect())
    }

    /// Expresses a point of `N̄` in ambient coordinates.
    pub fn embed_fibre_point(&self, y: &LatticeVector) -> LatticeVector {
        self.fibre_basis()
            .iter()
            .zip(y.coords())
            .fold(LatticeVector::zero(self.ambient_dim()), |acc, (b, c)| &acc + &b.scaled(c))
    }
}

/// Deformation whose cone is the Cayley cone of `summands`.
pub fn build_deformation(summands: &[PolytopeDesc], n: usize) -> Result<DeformationDesc> {
    let cone = cayley_cone(summands, n)?;
    let mut d = DeformationDesc::new(cone, n, summands.len() - 1)?;
    d.summands = Some(summands.to_vec());
    Ok(d)
}

/// `σ̄ = σ ∩ L^⊥` in the coordinates of [`DeformationDesc::fibre_basis`].
pub fn central_fibre(d: &DeformationDesc) -> Result<ConeDesc> {
    slice_cone(d, d.cone())
}

/// `c ∩ L^⊥` in `N̄` coordinates for any subcone `c` of the deformation cone.
pub fn slice_cone(d: &DeformationDesc, c: &ConeDesc) -> Result<ConeDesc> {
    if c.ambient_dim() != d.ambient_dim() {
        return Err(Error::DimensionMismatch("cone and deformation live in different lattices".into()));
    }
    let basis = d.fibre_basis();
    let pull = |f: &LatticeVector| LatticeVector::new(basis.iter().map(|b| b.dot(f)).collect());
    let mut inequalities: Vec<LatticeVector> = c.facets().iter().map(pull).collect();
    for e in c.equations() {
        let e = pull(e);
        inequalities.push(-&e);
        inequalities.push(e);
    }
    ConeDesc::from_inequalities(d.n(), &inequalities)
}

/// Whether the central fibre is Gorenstein with the functional inherited from
/// the markers.
pub fn central_fibre_has_inherited_functional(d: &DeformationDesc) -> Result<bool> {
    let fibre = central_fibre(d)?;
    let h = d.inherited_functional();
    Ok(fibre.rays().iter().all(|r| h.dot(r).is_one()) && gorenstein_functional(&fibre).is_some())
}

/// A chart `σ_λ` written as `C^{n+m}/G` with the fibre equations `F_i - F_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrePresentationDesc {
    pub chart: ConeDesc,
    /// Position `j` of the reordered coordinates is chart ray `reorder[j]`.
    pub reorder: Vec<usize>,
    pub partition: Vec<usize>,
    /// Chart ray indices per marker block.
    pub blocks: Vec<Vec<usize>>,
    /// Exponent vectors of `F_0..F_m` in the reordered coordinates.
    pub monomials: Vec<LatticeVector>,
    pub action: QuotientActionDesc,
}

impl FibrePresentationDesc {
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    /// Reordered chart rays.
    pub fn ordered_rays(&self) -> Vec<LatticeVector> {
        self.reorder.iter().map(|&i| self.chart.rays()[i].clone()).collect()
    }
}

/// Splits a chart's rays into marker blocks and computes the chart action.
pub fn fibre_presentation(d: &DeformationDesc, chart: &ConeDesc) -> Result<FibrePresentationDesc> {
    if chart.ambient_dim() != d.ambient_dim() {
        return Err(Error::DimensionMismatch("chart and deformation live in different lattices".into()));
    }
    if !chart.is_simplicial() || !chart.is_full_dimensional() {
        return Err(Error::NotSimplicial("chart must be a full-dimensional simplicial cone".into()));
    }
    if let Some(r) = chart.rays().iter().find(|r| !d.cone().contains(r)) {
        return Err(Error::InvalidInput(format!("chart ray {r} is outside the deformation cone")));
    }
    let mut blocks = vec![Vec::new(); d.m() + 1];
    for (j, ray) in chart.rays().iter().enumerate() {
        let i = d
            .marker_of(ray)
            .ok_or_else(|| Error::NotFibreCompatible(format!("ray {ray} does not sit over a single marker")))?;
        blocks[i].push(j);
    }
    if let Some(i) = blocks.iter().position(|b| b.is_empty()) {
        return Err(Error::NotFibreCompatible(format!("block {i} is empty")));
    }
    let reorder: Vec<usize> = blocks.iter().flatten().copied().collect();
    let mut partition = vec![0];
    for b in &blocks {
        partition.push(partition.last().unwrap() + b.len());
    }
    let dim = d.ambient_dim();
    let monomials: Vec<LatticeVector> = partition
        .windows(2)
        .map(|w| {
            LatticeVector::new((0..dim).map(|j| if (w[0]..w[1]).contains(&j) { BigInt::one() } else { BigInt::zero() }).collect())
        })
        .collect();
    let ordered: Vec<LatticeVector> = reorder.iter().map(|&i| chart.rays()[i].clone()).collect();
    let action = quotient_action_of_rays(&ordered, dim)?;
    if let Some(f) = monomials.iter().find(|f| !action.is_invariant(f)) {
        return Err(Error::NotFibreCompatible(format!("monomial {f} is not invariant")));
    }
    Ok(FibrePresentationDesc { chart: chart.clone(), reorder, partition, blocks, monomials, action })
}

/// `Σ a_i ≤ l + max(Σ_{i≤p} a_i, Σ_{i>p} a_i)` for the hypersurface
/// `x_1⋯x_p - x_{p+1}⋯x_{n+1}` in `C^{n+1}/(Z/l)`.
pub fn hypersurface_canonicity_check(l: &BigInt, weights: &[BigInt], p: usize) -> Result<bool> {
    if l <= &BigInt::zero() {
        return Err(Error::InvalidInput("order must be positive".into()));
    }
    if p == 0 || p > weights.len() {
        return Err(Error::InvalidInput(format!("split index {p} outside 1..={}", weights.len())));
    }
    if weights.iter().any(|a| a < &BigInt::zero() || a >= l) {
        return Err(Error::InvalidInput(format!("weights must lie in [0, {l})")));
    }
    let head: BigInt = weights[..p].iter().sum();
    let tail: BigInt = weights[p..].iter().sum();
    let total = &head + &tail;
    Ok(total <= l + head.max(tail))
}

/// The summands `R_0..R_k` of the `A_k` family: `k + 1` unit segments.
pub fn an_summands(k: usize) -> Vec<PolytopeDesc> {
    let seg = PolytopeDesc::from_i64_points(&[&[0], &[1]]).expect("unit segment");
    vec![seg; k + 1]
}
