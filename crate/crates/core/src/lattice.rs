//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Everything that touches a lattice goes through this module: Smith normal
//! form (for quotient groups and kernels), Hermite normal form (for canonical
//! sublattice bases), integral and rational solving, and saturated span
//! lattices of vector families.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An integer vector of fixed length. Ordering is lexicographic on coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Standard pairing. Both vectors must have the same length.
    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Pairing with a rational functional.
    pub fn dot_rational(&self, other: &[BigRational]) -> BigRational {
        debug_assert_eq!(self.dim(), other.len());
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| b * BigRational::from_integer(a.clone()))
            .sum()
    }

    /// Non-negative gcd of the coordinates (0 for the zero vector).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Divides by the content, keeping orientation. `None` for the zero vector.
    pub fn primitive(&self) -> Option<LatticeVector> {
        let g = self.content();
        if g.is_zero() {
            return None;
        }
        Some(LatticeVector(self.0.iter().map(|c| c / &g).collect()))
    }

    /// Primitive representative whose first nonzero coordinate is positive.
    pub fn canonical(&self) -> Option<LatticeVector> {
        let p = self.primitive()?;
        match p.0.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => Some(-&p),
            _ => Some(p),
        }
    }

    pub fn scaled(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| c * k).collect())
    }

    pub fn concat(&self, other: &LatticeVector) -> LatticeVector {
        let mut coords = self.0.clone();
        coords.extend(other.0.iter().cloned());
        LatticeVector(coords)
    }

    /// Rational vector with the same coordinates.
    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0.iter().cloned().map(BigRational::from_integer).collect()
    }
}

impl Index<usize> for LatticeVector {
    type Output = BigInt;

    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;

    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;

    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;

    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }
}

impl From<Vec<BigInt>> for LatticeVector {
    fn from(coords: Vec<BigInt>) -> Self {
        LatticeVector(coords)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl LatticeMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(LatticeMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        LatticeMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix whose rows are the given vectors. `cols` fixes the
    /// width so that an empty family still has a shape.
    pub fn from_rows(cols: usize, rows: &[LatticeVector]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.dim() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.dim()
                )));
            }
            entries.extend(r.coords().iter().cloned());
        }
        Ok(LatticeMatrix { rows: rows.len(), cols, entries })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[LatticeVector]) -> Result<Self> {
        Ok(Self::from_rows(rows, cols)?.transpose())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let vs: Vec<_> = rows.iter().map(|r| LatticeVector::from_i64s(r)).collect();
        Self::from_rows(cols, &vs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> LatticeVector {
        LatticeVector(self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> LatticeVector {
        LatticeVector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<LatticeVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> LatticeMatrix {
        let mut t = LatticeMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at(j, i) = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &LatticeMatrix) -> Result<LatticeMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = LatticeMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * other.get(k, j);
                    *out.at(i, j) += prod;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `A·v`.
    pub fn mul_vec(&self, v: &LatticeVector) -> Result<LatticeVector> {
        if v.dim() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.dim(),
                self.cols
            )));
        }
        Ok(LatticeVector((0..self.rows).map(|i| self.row(i).dot(v)).collect()))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = self.row_vectors().into_iter().map(|r| r.0).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * a[n - 1][n - 1].clone())
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(&self.row_vectors(), self.cols)
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += k * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(source, j) * k;
            *self.at(target, j) += v;
        }
    }

    /// col[target] += k * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, source) * k;
            *self.at(i, target) += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            *self.at(i, j) = v;
        }
    }
}

impl fmt::Display for LatticeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// `U·A·V = D` with `U`, `V` unimodular and `D` diagonal with `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: LatticeMatrix,
    pub d: LatticeMatrix,
    pub v: LatticeMatrix,
}

impl SmithDecomposition {
    /// The `min(rows, cols)` diagonal entries of `D`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// Nonzero diagonal entries (the invariant factors).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }
}

/// Smith normal form with a deterministic pivot rule: the nonzero entry of
/// smallest absolute value in the active submatrix, ties broken by lowest
/// (row, column).
pub fn smith_normal_form(a: &LatticeMatrix) -> SmithDecomposition {
    let (r, c) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = LatticeMatrix::identity(r);
    let mut v = LatticeMatrix::identity(c);

    for t in 0..r.min(c) {
        let mut found = false;
        loop {
            let Some((pi, pj)) = smallest_pivot(&d, t) else {
                break;
            };
            found = true;
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -(d.get(i, t) / d.get(t, t));
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..c {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -(d.get(t, j) / d.get(t, t));
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // Pivot must divide the rest of the active block.
            let p = d.get(t, t).clone();
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if !found {
            break;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, d, v }
}

fn smallest_pivot(m: &LatticeMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let e = m.get(i, j);
            if e.is_zero() {
                continue;
            }
            let a = e.abs();
            if best.as_ref().is_none_or(|(_, _, b)| &a < b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Row-style Hermite normal form of the lattice spanned by `rows`: echelon
/// form with positive pivots and entries above each pivot reduced into
/// `[0, pivot)`. Zero rows are dropped, so the result is a basis.
pub fn hermite_normal_form(rows: &[LatticeVector], cols: usize) -> Vec<LatticeVector> {
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let n = a.len();
    let mut r = 0;
    for j in 0..cols {
        if r == n {
            break;
        }
        let mut has_pivot = false;
        loop {
            let pick = (r..n)
                .filter(|&i| !a[i][j].is_zero())
                .min_by(|&x, &y| a[x][j].abs().cmp(&a[y][j].abs()).then(x.cmp(&y)));
            let Some(p) = pick else { break };
            has_pivot = true;
            a.swap(r, p);
            let mut clean = true;
            for i in r + 1..n {
                if a[i][j].is_zero() {
                    continue;
                }
                let q = &a[i][j] / &a[r][j];
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                clean &= a[i][j].is_zero();
            }
            if clean {
                break;
            }
        }
        if !has_pivot {
            continue;
        }
        if a[r][j].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = a[i][j].div_floor(&a[r][j]);
            if q.is_zero() {
                continue;
            }
            let pivot_row = a[r].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                *x -= &q * y;
            }
        }
        r += 1;
    }
    a.truncate(r);
    a.into_iter().map(LatticeVector).collect()
}

/// An integral solution of `A·x = b`, or `None` when none exists.
pub fn solve_integral(a: &LatticeMatrix, b: &LatticeVector) -> Result<Option<LatticeVector>> {
    if b.dim() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} equations",
            b.dim(),
            a.rows()
        )));
    }
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b)?;
    let mut y = vec![BigInt::zero(); a.cols()];
    for i in 0..a.rows() {
        let di = if i < a.cols() { snf.d.get(i, i).clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !c[i].is_zero() {
                return Ok(None);
            }
        } else {
            let (q, rem) = c[i].div_rem(&di);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
    }
    Ok(Some(snf.v.mul_vec(&LatticeVector(y))?))
}

/// Saturated integer basis of `{x : A·x = 0}`, in Hermite normal form.
pub fn kernel_basis(a: &LatticeMatrix) -> Vec<LatticeVector> {
    let n = a.cols();
    if a.rows() == 0 {
        return (0..n).map(|i| LatticeVector::unit(n, i)).collect();
    }
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let raw: Vec<LatticeVector> = (rank..n).map(|j| snf.v.column(j)).collect();
    hermite_normal_form(&raw, n)
}

/// Rank of a family of integer vectors of length `cols`.
pub fn rank_of_rows(rows: &[LatticeVector], cols: usize) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let mut r = 0;
    for j in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][j].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][j].is_zero() {
                continue;
            }
            let (pr, ai) = (a[r][j].clone(), a[i][j].clone());
            let pivot_row = a[r].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                *x = &*x * &pr - &ai * y;
            }
            let g = a[i].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if g > BigInt::one() {
                for x in a[i].iter_mut() {
                    *x = &*x / &g;
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

pub fn are_independent(vectors: &[LatticeVector], cols: usize) -> bool {
    rank_of_rows(vectors, cols) == vectors.len()
}

/// Solves `M·x = b` over the rationals, where `M` has the given rows.
/// Free variables are set to zero. Returns `None` if inconsistent.
pub fn solve_rational(rows: &[Vec<BigRational>], b: &[BigRational], cols: usize) -> Option<Vec<BigRational>> {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for j in 0..cols {
        let Some(p) = (r..n).find(|&i| !a[i][j].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][j].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i == r || a[i][j].is_zero() {
                continue;
            }
            let f = a[i][j].clone();
            let pivot_row = a[r].clone();
            for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        pivots.push(j);
        r += 1;
        if r == n {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &j) in pivots.iter().enumerate() {
        x[j] = a[i][cols].clone();
    }
    Some(x)
}

/// Coefficients `α` with `α·M = target` for a square nonsingular integer
/// matrix `M` given by its rows.
pub fn rational_coefficients(rows: &[LatticeVector], target: &LatticeVector) -> Option<Vec<BigRational>> {
    let d = rows.len();
    let transposed: Vec<Vec<BigRational>> = (0..target.dim())
        .map(|j| (0..d).map(|i| BigRational::from_integer(rows[i][j].clone())).collect())
        .collect();
    solve_rational(&transposed, &target.to_rational(), d)
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn clear_denominators(v: &[BigRational]) -> LatticeVector {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints = LatticeVector(v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect());
    ints.primitive().unwrap_or(ints)
}

/// The saturated lattice `span(vectors) ∩ Z^d`, with a Hermite-normal-form
/// basis. Coordinates relative to that basis are what "computed in the span
/// lattice" means throughout the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanLattice {
    ambient_dim: usize,
    basis: Vec<LatticeVector>,
}

impl SpanLattice {
    pub fn of(vectors: &[LatticeVector], ambient_dim: usize) -> Result<Self> {
        let m = LatticeMatrix::from_rows(ambient_dim, vectors)?;
        let annihilator = kernel_basis(&m);
        let basis = if annihilator.is_empty() {
            (0..ambient_dim).map(|i| LatticeVector::unit(ambient_dim, i)).collect()
        } else {
            kernel_basis(&LatticeMatrix::from_rows(ambient_dim, &annihilator)?)
        };
        Ok(SpanLattice { ambient_dim, basis })
    }

    /// Wraps a basis that is already in Hermite normal form.
    pub fn from_hnf_basis(ambient_dim: usize, basis: Vec<LatticeVector>) -> Self {
        SpanLattice { ambient_dim, basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[LatticeVector] {
        &self.basis
    }

    /// Integer coordinates of `v` in the basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &LatticeVector) -> Option<LatticeVector> {
        let mut residual = v.clone();
        let mut y = Vec::with_capacity(self.basis.len());
        for b in &self.basis {
            let p = b.coords().iter().position(|c| !c.is_zero())?;
            let (q, rem) = residual[p].div_rem(&b[p]);
            if !rem.is_zero() {
                return None;
            }
            residual = &residual - &b.scaled(&q);
            y.push(q);
        }
        residual.is_zero().then_some(LatticeVector(y))
    }

    pub fn embed(&self, y: &LatticeVector) -> LatticeVector {
        let mut out = LatticeVector::zero(self.ambient_dim);
        for (c, b) in y.coords().iter().zip(&self.basis) {
            out = &out + &b.scaled(c);
        }
        out
    }

    /// Pulls an ambient functional back to span coordinates.
    pub fn restrict_functional(&self, f: &LatticeVector) -> LatticeVector {
        LatticeVector(self.basis.iter().map(|b| b.dot(f)).collect())
    }
}

/// `|det|` of the vectors measured in their own saturated span lattice.
/// Zero when the vectors are dependent.
pub fn lattice_volume(vectors: &[LatticeVector], ambient_dim: usize) -> Result<BigInt> {
    if !are_independent(vectors, ambient_dim) {
        return Ok(BigInt::zero());
    }
    let span = SpanLattice::of(vectors, ambient_dim)?;
    let coords: Vec<LatticeVector> = vectors
        .iter()
        .map(|v| span.coordinates(v).expect("vector lies in its own span lattice"))
        .collect();
    Ok(LatticeMatrix::from_rows(span.rank(), &coords)?.determinant()?.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> LatticeMatrix {
        LatticeMatrix::from_i64_rows(rows).unwrap()
    }

    fn check_snf(a: &LatticeMatrix) -> SmithDecomposition {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.u.is_unimodular());
        assert!(s.v.is_unimodular());
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn snf_identity() {
        let s = check_snf(&LatticeMatrix::identity(2));
        assert_eq!(s.d, LatticeMatrix::identity(2));
        assert_eq!(s.u, LatticeMatrix::identity(2));
        assert_eq!(s.v, LatticeMatrix::identity(2));
    }

    #[test]
    fn snf_two_by_two() {
        let a = m(&[&[2, 4], &[2, 6]]);
        let s = check_snf(&a);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(2)]);
        assert_eq!(a.determinant().unwrap().abs(), BigInt::from(4));
    }

    #[test]
    fn snf_rectangular_and_zero() {
        check_snf(&m(&[&[0, 0, 0], &[0, 0, 0]]));
        let s = check_snf(&m(&[&[6, 10, 15]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1)]);
        let s = check_snf(&m(&[&[2], &[4], &[6]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2)]);
    }

    #[test]
    fn determinant_bareiss() {
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant().unwrap(), BigInt::from(-1));
        assert_eq!(m(&[&[2, 1, 1], &[1, 1, 1], &[1, 1, 2]]).determinant().unwrap(), BigInt::from(1));
        assert_eq!(m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]).determinant().unwrap(), BigInt::zero());
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant().unwrap(), BigInt::zero());
    }

    #[test]
    fn solve_identity() {
        let x = solve_integral(&LatticeMatrix::identity(2), &LatticeVector::from_i64s(&[3, 5])).unwrap();
        assert_eq!(x, Some(LatticeVector::from_i64s(&[3, 5])));
    }

    #[test]
    fn solve_without_integral_solution() {
        let a = m(&[&[1, 0], &[2, 3]]);
        let b = LatticeVector::from_i64s(&[1, 1]);
        assert_eq!(solve_integral(&a, &b).unwrap(), None);
        // oracle: exhaustive search over a small box
        for x in -20..=20i64 {
            for y in -20..=20i64 {
                assert!(!(x == 1 && 2 * x + 3 * y == 1));
            }
        }
    }

    #[test]
    fn solve_dimension_mismatch() {
        let a = m(&[&[1, 0], &[0, 1]]);
        assert!(solve_integral(&a, &LatticeVector::from_i64s(&[1])).is_err());
    }

    #[test]
    fn kernel_of_all_ones_row() {
        let k = kernel_basis(&m(&[&[1, 1, 1]]));
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(v.coords().iter().sum::<BigInt>().is_zero());
            assert!(v.is_primitive());
        }
        assert_eq!(k[0], LatticeVector::from_i64s(&[1, 0, -1]));
        assert_eq!(k[1], LatticeVector::from_i64s(&[0, 1, -1]));
    }

    #[test]
    fn kernel_of_marker_differences_is_natural_basis() {
        // functionals x3 - x2 and x4 - x2 on Z^4
        let k = kernel_basis(&m(&[&[0, -1, 1, 0], &[0, -1, 0, 1]]));
        assert_eq!(
            k,
            vec![LatticeVector::from_i64s(&[1, 0, 0, 0]), LatticeVector::from_i64s(&[0, 1, 1, 1])]
        );
    }

    #[test]
    fn hnf_is_canonical() {
        let a = vec![LatticeVector::from_i64s(&[2, 4]), LatticeVector::from_i64s(&[2, 6])];
        let b = vec![LatticeVector::from_i64s(&[4, 10]), LatticeVector::from_i64s(&[-2, -4])];
        assert_eq!(hermite_normal_form(&a, 2), hermite_normal_form(&b, 2));
        assert_eq!(
            hermite_normal_form(&a, 2),
            vec![LatticeVector::from_i64s(&[2, 0]), LatticeVector::from_i64s(&[0, 2])]
        );
    }

    #[test]
    fn span_lattice_saturates() {
        let v = vec![LatticeVector::from_i64s(&[2, 2, 0])];
        let s = SpanLattice::of(&v, 3).unwrap();
        assert_eq!(s.basis(), &[LatticeVector::from_i64s(&[1, 1, 0])]);
        assert_eq!(s.coordinates(&v[0]), Some(LatticeVector::from_i64s(&[2])));
        assert_eq!(s.coordinates(&LatticeVector::from_i64s(&[1, 0, 0])), None);
        assert_eq!(lattice_volume(&v, 3).unwrap(), BigInt::from(2));
    }

    #[test]
    fn primitive_and_canonical() {
        let v = LatticeVector::from_i64s(&[0, -4, 6]);
        assert_eq!(v.primitive(), Some(LatticeVector::from_i64s(&[0, -2, 3])));
        assert_eq!(v.canonical(), Some(LatticeVector::from_i64s(&[0, 2, -3])));
        assert_eq!(LatticeVector::zero(3).primitive(), None);
        assert!(!LatticeVector::zero(2).is_primitive());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix(max: usize) -> impl Strategy<Value = LatticeMatrix> {
            (1..=max, 1..=max).prop_flat_map(|(r, c)| {
                proptest::collection::vec(-9i64..=9, r * c).prop_map(move |e| {
                    LatticeMatrix::new(r, c, e.into_iter().map(BigInt::from).collect()).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn snf_invariants(a in matrix(5)) {
                let s = check_snf(&a);
                if a.is_square() {
                    let det = a.determinant().unwrap().abs();
                    if !det.is_zero() {
                        prop_assert_eq!(s.diagonal().iter().product::<BigInt>(), det);
                    }
                }
                prop_assert_eq!(s.rank(), a.rank());
            }

            #[test]
            fn solutions_are_exact(a in matrix(4), seed in proptest::collection::vec(-5i64..=5, 4)) {
                let b = LatticeVector::from_i64s(&seed[..a.rows()]);
                match solve_integral(&a, &b).unwrap() {
                    Some(x) => prop_assert_eq!(a.mul_vec(&x).unwrap(), b),
                    None => {
                        let rows: Vec<Vec<BigRational>> = a.row_vectors().iter().map(|r| r.to_rational()).collect();
                        if let Some(x) = solve_rational(&rows, &b.to_rational(), a.cols()) {
                            // a rational solution exists, so the affine solution space has no lattice point;
                            // in particular the returned particular solution cannot be integral
                            let rank = a.rank();
                            if rank == a.cols() {
                                prop_assert!(x.iter().any(|c| !c.is_integer()));
                            }
                        }
                    }
                }
            }

            #[test]
            fn kernel_spans_box(a in matrix(3)) {
                let k = kernel_basis(&a);
                prop_assert_eq!(k.len(), a.cols() - a.rank());
                prop_assert!(are_independent(&k, a.cols()));
                for v in &k {
                    prop_assert!(a.mul_vec(v).unwrap().is_zero());
                }
                let span = SpanLattice::from_hnf_basis(a.cols(), k.clone());
                let n = a.cols() as u32;
                for code in 0..5i64.pow(n) {
                    let mut c = code;
                    let x: Vec<i64> = (0..n).map(|_| { let d = c % 5 - 2; c /= 5; d }).collect();
                    let x = LatticeVector::from_i64s(&x);
                    if a.mul_vec(&x).unwrap().is_zero() {
                        prop_assert!(span.coordinates(&x).is_some());
                    }
                }
            }
        }
    }
}
