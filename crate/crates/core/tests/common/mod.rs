//! Brute-force oracles shared by the integration tests. None of these call
//! into the algorithms they check.
#![allow(dead_code)]

use num_traits::{Signed, Zero};
use polarize_core::exactalg::{int, primitive_vector, QMatrix, QPoly};
use polarize_core::Rat;

pub fn v(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| int(x)).collect()
}

pub fn ints(rows: &[Vec<i64>]) -> QMatrix {
    QMatrix::from_ints(rows)
}

/// `det(tI - m)` by cofactor expansion along the first row, with polynomial
/// entries.
pub fn cofactor_char_poly(m: &QMatrix) -> QPoly {
    let n = m.rows();
    let entries: Vec<Vec<QPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = QPoly::constant(-m.get(i, j).clone());
                    if i == j {
                        &c + &QPoly::x()
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    cofactor_det(&entries)
}

fn cofactor_det(a: &[Vec<QPoly>]) -> QPoly {
    let n = a.len();
    if n == 1 {
        return a[0][0].clone();
    }
    let mut acc = QPoly::zero();
    for j in 0..n {
        let minor: Vec<Vec<QPoly>> = a[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &a[0][j] * &cofactor_det(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |s, (x, y)| s + x * y)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Facet normals of a full-dimensional cone by trying every hyperplane
/// through `d - 1` generators.
pub fn brute_force_facets(gens: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let d = gens[0].len();
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for s in subsets(gens.len(), d - 1) {
        let rows: Vec<Vec<Rat>> = s.iter().map(|&i| gens[i].clone()).collect();
        let kernel =
            if rows.is_empty() { QMatrix::identity(d).to_rows() } else { QMatrix::from_rows(rows).unwrap().kernel() };
        if kernel.len() != 1 {
            continue;
        }
        let a = &kernel[0];
        let vals: Vec<Rat> = gens.iter().map(|g| dot(a, g)).collect();
        let normal = if vals.iter().all(|x| !x.is_negative()) {
            a.clone()
        } else if vals.iter().all(|x| !x.is_positive()) {
            a.iter().map(|x| -x).collect()
        } else {
            continue;
        };
        let p = primitive_vector(&normal);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Generator-index sets of all faces, as closures of generator subsets:
/// the face generated by `S` consists of the generators tight on every
/// facet tight on all of `S`.
pub fn brute_force_faces(gens: &[Vec<Rat>], normals: &[Vec<Rat>]) -> Vec<Vec<usize>> {
    let n = gens.len();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for mask in 0u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let closure = closure_of(gens, normals, &s);
        if !out.contains(&closure) {
            out.push(closure);
        }
    }
    out.sort();
    out
}

pub fn closure_of(gens: &[Vec<Rat>], normals: &[Vec<Rat>], s: &[usize]) -> Vec<usize> {
    let active: Vec<&Vec<Rat>> = normals.iter().filter(|a| s.iter().all(|&i| dot(a, &gens[i]).is_zero())).collect();
    (0..gens.len()).filter(|&i| active.iter().all(|a| dot(a, &gens[i]).is_zero())).collect()
}

/// Smallest brute-force face containing all `points`.
pub fn brute_force_minimal_face(gens: &[Vec<Rat>], normals: &[Vec<Rat>], points: &[Vec<Rat>]) -> Vec<usize> {
    let faces = brute_force_faces(gens, normals);
    faces
        .into_iter()
        .filter(|f| {
            let active: Vec<&Vec<Rat>> =
                normals.iter().filter(|a| f.iter().all(|&i| dot(a, &gens[i]).is_zero())).collect();
            points.iter().all(|p| active.iter().all(|a| dot(a, p).is_zero()))
        })
        .min_by_key(|f| f.len())
        .unwrap()
}

/// A map preserving the simplicial cone spanned by the columns of a
/// unimodular `s`: `m = s n s^-1` with `n` a positive monomial matrix.
pub struct CyclicInstance {
    pub s: QMatrix,
    pub m: QMatrix,
    /// Geometric mean of the weights along each cycle of the permutation.
    pub cycle_means: Vec<i64>,
    pub polarized_at: Option<i64>,
}

fn unimodular(rng: &mut impl rand::Rng, d: usize) -> QMatrix {
    let mut s = QMatrix::identity(d);
    for _ in 0..rng.gen_range(0..=2 * d) {
        let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..d));
        if i == j {
            continue;
        }
        let c = int(rng.gen_range(-1..=1));
        let mut e = QMatrix::identity(d);
        e.set(i, j, c);
        s = &s * &e;
    }
    s
}

/// With probability 1/2 every cycle has the same integer mean `q`;
/// otherwise the means are distinct and differ by a factor of at least 4.
pub fn cyclic_instance(rng: &mut impl rand::Rng, d: usize) -> CyclicInstance {
    let mut perm: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut seen = vec![false; d];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..d {
        if seen[start] {
            continue;
        }
        let mut c = vec![];
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            c.push(i);
            i = perm[i];
        }
        cycles.push(c);
    }
    let polarized = cycles.len() == 1 || rng.gen_bool(0.5);
    let q = rng.gen_range(1..=4i64);
    let means: Vec<i64> =
        if polarized { vec![q; cycles.len()] } else { (0..cycles.len()).map(|k| q << (2 * k)).collect() };
    // n e_i = w_i e_{perm i}; along a cycle of length L the weights multiply
    // to mean^L. Put the spare factor on one edge.
    let mut n = QMatrix::zeros(d, d);
    for (c, &mean) in cycles.iter().zip(&means) {
        let len = c.len() as u32;
        let spread = if len > 1 && mean > 1 { rng.gen_range(0..=1) } else { 0 };
        for (k, &i) in c.iter().enumerate() {
            let w = match (k, len) {
                (_, 1) => mean,
                (0, _) => mean.pow(1 + spread),
                (1, _) => mean.pow(1 - spread),
                _ => mean,
            };
            n.set(perm[i], i, int(w));
        }
    }
    let s = unimodular(rng, d);
    let m = &(&s * &n) * &s.inverse().unwrap();
    CyclicInstance { s, m, cycle_means: means, polarized_at: polarized.then_some(q) }
}

/// Empirical test: is there a growth rate `q` with
/// `|m^i| / q^i` within a factor 10^6 of 1 for every `i` in `[-40, 40]`?
/// Works with logarithms of the max-abs entry and intersects the slope
/// intervals allowed by each power.
pub fn growth_oracle(m: &QMatrix) -> bool {
    let slack = 6.0 * std::f64::consts::LN_10;
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let inv = m.inverse().unwrap();
    let (mut up, mut down) = (QMatrix::identity(m.rows()), QMatrix::identity(m.rows()));
    for i in 1..=40i32 {
        up = &up * m;
        down = &down * &inv;
        for (sign, p) in [(1.0, &up), (-1.0, &down)] {
            let g = log_abs(&p.max_abs_entry());
            let x = sign * f64::from(i);
            let (a, b) = ((g - slack) / x, (g + slack) / x);
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
        }
    }
    lo <= hi
}

fn log_abs(r: &Rat) -> f64 {
    let ln = |b: &num_bigint::BigInt| {
        let bits = b.bits();
        let shift = bits.saturating_sub(60);
        let top: f64 = num_traits::ToPrimitive::to_f64(&(b >> shift)).unwrap();
        top.ln() + shift as f64 * std::f64::consts::LN_2
    };
    ln(&r.numer().abs()) - ln(&r.denom().abs())
}
