//! Double description method over the integers.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::{clear_denominators, rank_of_rows, solve_rational, LatticeVector};

/// Extreme rays of `{y ∈ Q^d : ⟨a, y⟩ ≥ 0 for every row a}`.
///
/// The rows must have rank `d`, which makes the cone pointed. Rows are
/// processed in the given order after an initial simplicial cone built from
/// the first `d` independent rows; adjacency is decided algebraically (the
/// common tight rows of two rays have rank `d - 2`). The result is sorted and
/// every generator is primitive.
pub(crate) fn extreme_rays(rows: &[LatticeVector], d: usize) -> Vec<LatticeVector> {
    if d == 0 {
        return Vec::new();
    }
    let rows: Vec<&LatticeVector> = rows.iter().filter(|r| !r.is_zero()).collect();

    let mut initial: Vec<LatticeVector> = Vec::with_capacity(d);
    let mut initial_idx = Vec::with_capacity(d);
    for (i, r) in rows.iter().enumerate() {
        let mut trial = initial.clone();
        trial.push((*r).clone());
        if rank_of_rows(&trial, d) == trial.len() {
            initial = trial;
            initial_idx.push(i);
            if initial.len() == d {
                break;
            }
        }
    }
    assert_eq!(initial.len(), d, "inequality system must have full column rank");

    let system: Vec<Vec<BigRational>> = initial.iter().map(|r| r.to_rational()).collect();
    let mut gens: Vec<LatticeVector> = (0..d)
        .map(|i| {
            let mut e = vec![BigRational::zero(); d];
            e[i] = BigRational::one();
            let g = solve_rational(&system, &e, d).expect("initial rows are independent");
            clear_denominators(&g)
        })
        .collect();

    let mut processed: Vec<LatticeVector> = initial;
    for (i, a) in rows.iter().enumerate() {
        if initial_idx.contains(&i) {
            continue;
        }
        let values: Vec<_> = gens.iter().map(|g| a.dot(g)).collect();
        let mut next = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for (g, v) in gens.iter().zip(&values) {
            if v.is_positive() {
                pos.push((g, v));
                next.push(g.clone());
            } else if v.is_negative() {
                neg.push((g, v));
            } else {
                next.push(g.clone());
            }
        }
        for &(p, vp) in &pos {
            for &(q, vq) in &neg {
                if !adjacent(p, q, &processed, d) {
                    continue;
                }
                let combo = &q.scaled(vp) - &p.scaled(vq);
                if let Some(c) = combo.primitive() {
                    next.push(c);
                }
            }
        }
        processed.push((*a).clone());
        next.sort();
        next.dedup();
        gens = next;
    }
    gens.sort();
    gens.dedup();
    gens
}

fn adjacent(p: &LatticeVector, q: &LatticeVector, processed: &[LatticeVector], d: usize) -> bool {
    if d < 2 {
        return false;
    }
    let tight: Vec<LatticeVector> = processed
        .iter()
        .filter(|r| r.dot(p).is_zero() && r.dot(q).is_zero())
        .cloned()
        .collect();
    tight.len() >= d - 2 && rank_of_rows(&tight, d) == d - 2
}
