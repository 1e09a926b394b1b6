use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{sign, PolytopeDesc};
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;

/// Cap on the number of edge assignments examined by [`minkowski_decompose`].
pub const DECOMPOSITION_LIMIT: u64 = 2_000_000;

pub fn minkowski_sum(a: &PolytopeDesc, b: &PolytopeDesc) -> Result<PolytopeDesc> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "Minkowski sum of polytopes in dimensions {} and {}",
            a.ambient_dim(),
            b.ambient_dim()
        )));
    }
    let sums = a
        .vertices()
        .iter()
        .flat_map(|x| b.vertices().iter().map(move |y| x + y))
        .collect();
    PolytopeDesc::new(a.ambient_dim(), sums)
}

/// All ways of writing the lattice polygon `q` as a Minkowski sum of `parts`
/// lattice polytopes (points allowed).
///
/// The primitive edge vectors of `q`, taken with multiplicity, are split into
/// `parts` sub-multisets each summing to zero; every such split is one
/// decomposition. Summands are translated so their lexicographically smallest
/// vertex is the origin, so the sum equals `q` up to translation. Segments
/// (and polytopes in ambient dimension 1) are accepted as degenerate polygons.
pub fn minkowski_decompose(q: &PolytopeDesc, parts: usize) -> Result<Vec<Vec<PolytopeDesc>>> {
    if parts < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 parts, got {parts}")));
    }
    let one_dim = match q.ambient_dim() {
        1 => true,
        2 => false,
        d => return Err(Error::NotPolygon(format!("ambient dimension {d}"))),
    };
    let verts: Vec<[BigInt; 2]> = q
        .vertices()
        .iter()
        .map(|v| if one_dim { [v[0].clone(), BigInt::zero()] } else { [v[0].clone(), v[1].clone()] })
        .collect();
    let edges = match q.affine_dim() {
        0 => return Err(Error::NotPolygon("a single point".into())),
        1 => {
            let d = sub(&verts[1], &verts[0]);
            vec![d.clone(), [-&d[0], -&d[1]]]
        }
        _ => {
            let ordered = counterclockwise(verts);
            (0..ordered.len()).map(|i| sub(&ordered[(i + 1) % ordered.len()], &ordered[i])).collect()
        }
    };
    // Primitive directions in cyclic order with their lattice lengths.
    let dirs: Vec<([BigInt; 2], usize)> = edges
        .iter()
        .map(|e| {
            let g = e[0].gcd(&e[1]);
            let len = usize::try_from(g.clone()).expect("edge length fits in usize");
            ([&e[0] / &g, &e[1] / &g], len)
        })
        .collect();

    let mut total: u64 = 1;
    for (_, len) in &dirs {
        total = total.saturating_mul(binomial((len + parts - 1) as u64, (parts - 1) as u64));
    }
    if total > DECOMPOSITION_LIMIT {
        return Err(Error::ResourceGuard(format!("{total} edge assignments")));
    }

    let per_dir: Vec<Vec<Vec<usize>>> = dirs.iter().map(|(_, len)| compositions(*len, parts)).collect();
    let mut out: Vec<Vec<PolytopeDesc>> = Vec::new();
    let mut choice = vec![0usize; dirs.len()];
    'outer: loop {
        if balanced(&dirs, &per_dir, &choice, parts) {
            let mut summands: Vec<PolytopeDesc> =
                (0..parts).map(|k| build_summand(&dirs, &per_dir, &choice, k, one_dim)).collect();
            summands.sort();
            out.push(summands);
        }
        for i in (0..choice.len()).rev() {
            choice[i] += 1;
            if choice[i] < per_dir[i].len() {
                continue 'outer;
            }
            choice[i] = 0;
        }
        break;
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn sub(a: &[BigInt; 2], b: &[BigInt; 2]) -> [BigInt; 2] {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

fn cross(a: &[BigInt; 2], b: &[BigInt; 2]) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Vertices of a convex polygon in counterclockwise order starting from the
/// lexicographically smallest one.
fn counterclockwise(mut verts: Vec<[BigInt; 2]>) -> Vec<[BigInt; 2]> {
    verts.sort();
    let origin = verts[0].clone();
    let mut rest = verts.split_off(1);
    rest.sort_by(|a, b| {
        let c = cross(&sub(a, &origin), &sub(b, &origin));
        match sign(&c) {
            Ordering::Greater => Ordering::Less,
            Ordering::Less => Ordering::Greater,
            Ordering::Equal => Ordering::Equal,
        }
    });
    verts.extend(rest);
    verts
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn balanced(dirs: &[([BigInt; 2], usize)], per_dir: &[Vec<Vec<usize>>], choice: &[usize], parts: usize) -> bool {
    (0..parts).all(|k| {
        let mut s = [BigInt::zero(), BigInt::zero()];
        for (i, (u, _)) in dirs.iter().enumerate() {
            let c = BigInt::from(per_dir[i][choice[i]][k]);
            s[0] += &u[0] * &c;
            s[1] += &u[1] * &c;
        }
        s[0].is_zero() && s[1].is_zero()
    })
}

fn build_summand(
    dirs: &[([BigInt; 2], usize)],
    per_dir: &[Vec<Vec<usize>>],
    choice: &[usize],
    k: usize,
    one_dim: bool,
) -> PolytopeDesc {
    let mut cur = [BigInt::zero(), BigInt::zero()];
    let mut points = vec![cur.clone()];
    for (i, (u, _)) in dirs.iter().enumerate() {
        let c = BigInt::from(per_dir[i][choice[i]][k]);
        if c.is_positive() {
            cur = [&cur[0] + &u[0] * &c, &cur[1] + &u[1] * &c];
            points.push(cur.clone());
        }
    }
    let pts: Vec<LatticeVector> = points
        .into_iter()
        .map(|[x, y]| if one_dim { LatticeVector::new(vec![x]) } else { LatticeVector::new(vec![x, y]) })
        .collect();
    let dim = if one_dim { 1 } else { 2 };
    PolytopeDesc::new(dim, pts).expect("summand points are nonempty").normalized()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(points: &[&[i64]]) -> PolytopeDesc {
        PolytopeDesc::from_i64_points(points).unwrap()
    }

    fn hexagon(a: i64, b: i64) -> PolytopeDesc {
        poly(&[&[1, 0], &[0, 1], &[-a, -b], &[1, 1], &[-a, 1 - b], &[1 - a, -b]])
    }

    fn sum_all(ps: &[PolytopeDesc]) -> PolytopeDesc {
        ps[1..].iter().fold(ps[0].clone(), |acc, p| minkowski_sum(&acc, p).unwrap())
    }

    #[test]
    fn two_segments_make_a_square() {
        let s = minkowski_sum(&poly(&[&[1, 0], &[0, 0]]), &poly(&[&[0, 1], &[0, 0]])).unwrap();
        assert_eq!(s, poly(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]));
    }

    #[test]
    fn flop_summands_sum_to_the_hexagon() {
        for (a, b) in [(1, 1), (1, 2), (2, 3)] {
            let r = [poly(&[&[1, 0], &[0, 0]]), poly(&[&[0, 1], &[0, 0]]), poly(&[&[-a, -b], &[0, 0]])];
            assert_eq!(sum_all(&r), hexagon(a, b));
        }
        assert_eq!(hexagon(1, 1).vertices().len(), 6);
    }

    #[test]
    fn adding_a_point_translates() {
        let p = poly(&[&[0, 0], &[2, 1], &[1, 3]]);
        let t = LatticeVector::from_i64s(&[5, -1]);
        assert_eq!(minkowski_sum(&p, &PolytopeDesc::point(t.clone())).unwrap(), p.translate(&t));
    }

    #[test]
    fn sum_dimension_mismatch() {
        assert!(minkowski_sum(&poly(&[&[0]]), &poly(&[&[0, 0]])).is_err());
    }

    #[test]
    fn hexagon_decomposes_into_the_three_segments() {
        let decs = minkowski_decompose(&hexagon(1, 1), 3).unwrap();
        let mut expected =
            vec![poly(&[&[1, 0], &[0, 0]]), poly(&[&[0, 1], &[0, 0]]), poly(&[&[-1, -1], &[0, 0]]).normalized()];
        expected.sort();
        assert!(decs.contains(&expected));
        for d in &decs {
            assert_eq!(sum_all(d).normalized(), hexagon(1, 1).normalized());
            for s in d {
                assert!(s.vertices().iter().any(|v| v.is_zero()));
            }
        }
    }

    #[test]
    fn segment_splits_in_half() {
        let decs = minkowski_decompose(&poly(&[&[0], &[2]]), 2).unwrap();
        let half = poly(&[&[0], &[1]]);
        assert!(decs.contains(&vec![half.clone(), half]));
        assert_eq!(decs.len(), 2);
    }

    #[test]
    fn unit_triangle_is_indecomposable() {
        let decs = minkowski_decompose(&poly(&[&[0, 0], &[1, 0], &[0, 1]]), 2).unwrap();
        assert_eq!(decs.len(), 1);
        assert!(decs[0].iter().any(|s| s.vertices().len() == 1));
    }

    #[test]
    fn decomposition_errors() {
        assert!(matches!(minkowski_decompose(&poly(&[&[0, 0, 0], &[1, 0, 0]]), 2), Err(Error::NotPolygon(_))));
        assert!(matches!(minkowski_decompose(&poly(&[&[0, 0]]), 2), Err(Error::NotPolygon(_))));
        assert!(minkowski_decompose(&hexagon(1, 1), 1).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn edge_directions(p: &PolytopeDesc) -> Vec<[BigInt; 2]> {
            let verts: Vec<[BigInt; 2]> = p.vertices().iter().map(|v| [v[0].clone(), v[1].clone()]).collect();
            let mut dirs: Vec<[BigInt; 2]> = if p.affine_dim() == 1 {
                let d = sub(&verts[1], &verts[0]);
                vec![d.clone(), [-&d[0], -&d[1]]]
            } else if p.affine_dim() == 0 {
                vec![]
            } else {
                let o = counterclockwise(verts);
                (0..o.len()).map(|i| sub(&o[(i + 1) % o.len()], &o[i])).collect()
            };
            for d in dirs.iter_mut() {
                let g = d[0].gcd(&d[1]);
                *d = [&d[0] / &g, &d[1] / &g];
            }
            dirs.sort();
            dirs.dedup();
            dirs
        }

        proptest! {
            #[test]
            fn sum_edge_directions_are_union(
                a in proptest::collection::vec((-3i64..=3, -3i64..=3), 1..5),
                b in proptest::collection::vec((-3i64..=3, -3i64..=3), 1..5),
            ) {
                let pa = PolytopeDesc::new(2, a.iter().map(|&(x, y)| LatticeVector::from_i64s(&[x, y])).collect()).unwrap();
                let pb = PolytopeDesc::new(2, b.iter().map(|&(x, y)| LatticeVector::from_i64s(&[x, y])).collect()).unwrap();
                let s = minkowski_sum(&pa, &pb).unwrap();
                let mut union = edge_directions(&pa);
                union.extend(edge_directions(&pb));
                union.sort();
                union.dedup();
                prop_assert_eq!(edge_directions(&s), union);
                prop_assert_eq!(minkowski_sum(&pb, &pa).unwrap(), s);
            }
        }
    }
}
