use std::collections::BTreeSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ConeError, ConeOracle, Membership, PolyhedralCone};
use crate::exactalg::{dot, Rat};

/// A subcone of a polyhedral cone, usually a face.
///
/// Faces produced by this module are exact: the subcone equals the parent
/// intersected with the kernels of `active_facets`. [`Face::proposed`] wraps
/// an arbitrary subcone so that [`is_extremal_face`] can reject it.
#[derive(Debug, Clone)]
pub struct Face<'c> {
    parent: &'c PolyhedralCone,
    generator_indices: Vec<usize>,
    active_facets: Vec<usize>,
    rays: Vec<Vec<Rat>>,
    hull: Option<PolyhedralCone>,
}

impl<'c> Face<'c> {
    /// The face cut out by a set of facets.
    pub fn from_active_facets(parent: &'c PolyhedralCone, active: &[usize]) -> Self {
        let normals = parent.facet_normals();
        let generator_indices: Vec<usize> = (0..parent.generators().len())
            .filter(|&i| active.iter().all(|&k| dot(&normals[k], &parent.generators()[i]).is_zero()))
            .collect();
        // Close the facet set: every facet vanishing on all face generators.
        let active_facets: Vec<usize> = (0..normals.len())
            .filter(|&k| generator_indices.iter().all(|&i| dot(&normals[k], &parent.generators()[i]).is_zero()))
            .collect();
        let rays: Vec<Vec<Rat>> = generator_indices.iter().map(|&i| parent.generators()[i].clone()).collect();
        Face { parent, hull: hull_of(&rays), generator_indices, active_facets, rays }
    }

    /// An arbitrary subcone of `parent` presented as a candidate face.
    pub fn proposed(parent: &'c PolyhedralCone, rays: Vec<Vec<Rat>>) -> Self {
        let generator_indices = (0..parent.generators().len())
            .filter(|&i| rays.iter().any(|r| same_ray(r, &parent.generators()[i])))
            .collect();
        let mut sum = vec![Rat::zero(); parent.ambient_dim()];
        for r in &rays {
            for (s, x) in sum.iter_mut().zip(r) {
                *s += x;
            }
        }
        let active_facets = parent.active_facets(&sum);
        Face { parent, hull: hull_of(&rays), generator_indices, active_facets, rays }
    }

    pub fn parent(&self) -> &'c PolyhedralCone {
        self.parent
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    pub fn active_facets(&self) -> &[usize] {
        &self.active_facets
    }

    pub fn rays(&self) -> &[Vec<Rat>] {
        &self.rays
    }

    pub fn dim(&self) -> usize {
        self.hull.as_ref().map_or(0, PolyhedralCone::dim)
    }

    pub fn is_whole_cone(&self) -> bool {
        self.dim() == self.parent.dim()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        match &self.hull {
            Some(h) => h.contains(x),
            None => x.iter().all(Zero::is_zero),
        }
    }

    /// Deterministic ordering key: dimension, then generator indices.
    pub fn sort_key(&self) -> (usize, Vec<usize>) {
        (self.dim(), self.generator_indices.clone())
    }
}

fn hull_of(rays: &[Vec<Rat>]) -> Option<PolyhedralCone> {
    let nonzero: Vec<Vec<Rat>> = rays.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    if nonzero.is_empty() {
        return None;
    }
    Some(PolyhedralCone::new(nonzero).expect("subcone of a pointed cone is pointed"))
}

fn same_ray(a: &[Rat], b: &[Rat]) -> bool {
    let (pa, pb) = (crate::exactalg::primitive_vector(a), crate::exactalg::primitive_vector(b));
    pa == pb && pa.iter().any(|x| !x.is_zero())
}

/// The smallest face of `c` containing every sub-generator.
///
/// The sum of the sub-generators lies in the relative interior of the
/// subcone they generate, so the facets vanishing on it are exactly the
/// facets vanishing on the whole subcone.
pub fn minimal_extremal_face<'c>(c: &'c PolyhedralCone, sub_generators: &[Vec<Rat>]) -> Result<Face<'c>, ConeError> {
    let mut sum = vec![Rat::zero(); c.ambient_dim()];
    for (i, g) in sub_generators.iter().enumerate() {
        if c.membership(g)? == Membership::Outside {
            return Err(ConeError::NotInCone(i));
        }
        for (s, x) in sum.iter_mut().zip(g) {
            *s += x;
        }
    }
    Ok(Face::from_active_facets(c, &c.active_facets(&sum)))
}

/// Decides extremality of a candidate face exactly.
///
/// The facets vanishing on the candidate define the smallest face `F`
/// containing it; the candidate is a face iff it contains every generator of
/// `F`.
pub fn is_extremal_face(c: &PolyhedralCone, f: &Face<'_>) -> Result<bool, ConeError> {
    if !std::ptr::eq(c, f.parent) && c != f.parent {
        return Err(ConeError::ForeignFace);
    }
    if f.rays.iter().any(|r| !c.contains(r)) {
        return Err(ConeError::ForeignFace);
    }
    let normals = c.facet_normals();
    Ok(c.generators()
        .iter()
        .filter(|g| f.active_facets.iter().all(|&k| dot(&normals[k], g).is_zero()))
        .all(|g| f.contains(g)))
}

/// Redundant check of the defining property `u + v in F => u, v in F`: all
/// generator pairs plus `trials` random pairs of nonnegative integer
/// combinations. Returns `false` on a counterexample.
pub fn pair_test_extremality(c: &PolyhedralCone, f: &Face<'_>, trials: usize, seed: u64) -> bool {
    let gens = c.generators();
    let add = |u: &[Rat], v: &[Rat]| -> Vec<Rat> { u.iter().zip(v).map(|(a, b)| a + b).collect() };
    let holds = |u: &[Rat], v: &[Rat]| !f.contains(&add(u, v)) || (f.contains(u) && f.contains(v));
    for u in gens {
        for v in gens {
            if !holds(u, v) {
                return false;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = |rng: &mut ChaCha8Rng| -> Vec<Rat> {
        let mut x = vec![Rat::zero(); c.ambient_dim()];
        for g in gens {
            let w = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(1..=3) };
            for (a, b) in x.iter_mut().zip(g) {
                *a += Rat::from_integer(w.into()) * b;
            }
        }
        x
    };
    (0..trials).all(|_| {
        let (u, v) = (sample(&mut rng), sample(&mut rng));
        holds(&u, &v)
    })
}

impl PolyhedralCone {
    /// All faces, from `{0}` (or the smallest face) to the cone itself,
    /// ordered by dimension and then generator indices.
    pub fn faces(&self) -> Vec<Face<'_>> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        let mut queue = vec![Face::from_active_facets(self, &[])];
        while let Some(f) = queue.pop() {
            if !seen.insert(f.active_facets.clone()) {
                continue;
            }
            for k in 0..self.facet_normals().len() {
                if !f.active_facets.contains(&k) {
                    let mut act = f.active_facets.clone();
                    act.push(k);
                    queue.push(Face::from_active_facets(self, &act));
                }
            }
            out.push(f);
        }
        out.sort_by_key(Face::sort_key);
        out
    }
}
