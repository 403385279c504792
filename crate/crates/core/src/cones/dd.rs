//! Double description: extreme rays of `{a : a . g >= 0 for all g}`.

use num_traits::{Signed, Zero};

use crate::exactalg::{dot, primitive_vector, QMatrix, Rat};

/// Extreme rays of the dual of the cone generated by `gens`, which must
/// span `Q^r`. Rays come back primitive integral and sorted; an empty result
/// means the dual is `{0}`.
///
/// Starts from the simplicial cone of `r` independent generators, whose dual
/// rays are the columns of the inverse, and adds the remaining constraints
/// one at a time, combining positive and negative rays that are adjacent.
pub(crate) fn dual_extreme_rays(gens: &[Vec<Rat>], r: usize) -> Vec<Vec<Rat>> {
    let basis = independent_subset(gens, r);
    let m = QMatrix::from_rows(basis.iter().map(|&i| gens[i].clone()).collect()).expect("rectangular");
    let inv = m.inverse().expect("basis rows are independent");
    let mut rays: Vec<Vec<Rat>> = (0..r).map(|j| primitive_vector(&inv.column(j))).collect();
    let mut processed: Vec<usize> = basis.clone();

    for (j, g) in gens.iter().enumerate() {
        if basis.contains(&j) {
            continue;
        }
        let values: Vec<Rat> = rays.iter().map(|a| dot(g, a)).collect();
        let mut next = Vec::new();
        for (a, v) in rays.iter().zip(&values) {
            if !v.is_negative() {
                next.push(a.clone());
            }
        }
        for (p, vp) in rays.iter().zip(&values) {
            if !vp.is_positive() {
                continue;
            }
            for (q, vq) in rays.iter().zip(&values) {
                if !vq.is_negative() || !adjacent(gens, &processed, p, q, r) {
                    continue;
                }
                let combo: Vec<Rat> = p.iter().zip(q).map(|(x, y)| y * vp - x * vq).collect();
                if combo.iter().any(|x| !x.is_zero()) {
                    next.push(primitive_vector(&combo));
                }
            }
        }
        next.sort();
        next.dedup();
        rays = next;
        processed.push(j);
    }
    rays.sort();
    rays
}

/// Greedy choice of `r` linearly independent members.
fn independent_subset(gens: &[Vec<Rat>], r: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..gens.len() {
        if chosen.len() == r {
            break;
        }
        let mut rows: Vec<Vec<Rat>> = chosen.iter().map(|&k| gens[k].clone()).collect();
        rows.push(gens[i].clone());
        if QMatrix::from_rows(rows).expect("rectangular").rank() == chosen.len() + 1 {
            chosen.push(i);
        }
    }
    assert_eq!(chosen.len(), r, "generators must span");
    chosen
}

/// Two rays are adjacent when the constraints tight at both have rank `r - 2`.
fn adjacent(gens: &[Vec<Rat>], processed: &[usize], p: &[Rat], q: &[Rat], r: usize) -> bool {
    if r < 2 {
        return false;
    }
    let tight: Vec<Vec<Rat>> =
        processed.iter().map(|&i| &gens[i]).filter(|g| dot(g, p).is_zero() && dot(g, q).is_zero()).cloned().collect();
    let rank = if tight.is_empty() { 0 } else { QMatrix::from_rows(tight).expect("rectangular").rank() };
    rank + 2 == r
}
