//! Finitely generated convex cones and an oracle interface for cones that
//! are not polyhedral.

mod dd;
mod distance;
mod face;
mod psd;

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactalg::{dot, primitive_vector, sign, QMatrix, Rat};

pub use distance::distance_point_to_cone;
pub use face::{is_extremal_face, minimal_extremal_face, pair_test_extremality, Face};
pub use psd::{psd_cone_oracle, PsdCone};

/// Largest ambient dimension accepted by [`build_cone`].
pub const MAX_AMBIENT_DIM: usize = 8;
/// Largest generator count accepted by [`build_cone`].
pub const MAX_GENERATORS: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConeError {
    #[error("no nonzero generator given")]
    EmptyInput,
    #[error("the generated cone contains a line")]
    ContainsLine,
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cone too large: ambient dimension {dim}, {generators} generators")]
    CapExceeded { dim: usize, generators: usize },
    #[error("sub-generator {0} is not in the cone")]
    NotInCone(usize),
    #[error("face does not belong to this cone")]
    ForeignFace,
    #[error("alternating projections did not converge; best distance bound {best}")]
    NonConvergence { best: f64 },
    #[error("tolerance must be positive")]
    InvalidTolerance,
    #[error("facet description does not reproduce the generators")]
    RoundTripFailed,
}

/// Position of a point relative to a cone. `Interior` means the relative
/// interior when the cone is not full-dimensional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// Membership queries shared by polyhedral and non-polyhedral cones.
pub trait ConeOracle: fmt::Debug + Send + Sync {
    fn ambient_dim(&self) -> usize;
    fn contains(&self, x: &[Rat]) -> bool;
    fn strictly_contains(&self, x: &[Rat]) -> bool;
    fn interior_sample(&self) -> Vec<Rat>;
    /// Deterministic pseudo-random points of the cone.
    fn battery(&self, count: usize, seed: u64) -> Vec<Vec<Rat>>;
    fn describe(&self) -> String;
}

/// A pointed cone generated by finitely many rational vectors, with its
/// facet normals.
///
/// Cones that are not full-dimensional live in the rational span of their
/// generators. Points of the span are given coordinates by reading off the
/// pivot entries of the reduced row echelon basis, and facet normals are
/// stored in ambient form with their entries placed at the pivot positions.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralCone {
    ambient_dim: usize,
    generators: Vec<Vec<Rat>>,
    span_basis: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
    facet_normals: Vec<Vec<Rat>>,
}

/// Builds a cone from generators, computing its facets by double description.
pub fn build_cone(generators: &[Vec<Rat>]) -> Result<PolyhedralCone, ConeError> {
    PolyhedralCone::new(generators.to_vec())
}

impl PolyhedralCone {
    pub fn new(generators: Vec<Vec<Rat>>) -> Result<Self, ConeError> {
        let Some(first) = generators.first() else {
            return Err(ConeError::EmptyInput);
        };
        let n = first.len();
        if let Some(bad) = generators.iter().find(|g| g.len() != n) {
            return Err(ConeError::DimensionMismatch { expected: n, got: bad.len() });
        }
        if n > MAX_AMBIENT_DIM || generators.len() > MAX_GENERATORS {
            return Err(ConeError::CapExceeded { dim: n, generators: generators.len() });
        }
        if generators.iter().all(|g| g.iter().all(Zero::is_zero)) {
            return Err(ConeError::EmptyInput);
        }
        let (rref, pivots) = QMatrix::from_rows(generators.clone()).expect("rectangular").rref();
        let span_basis: Vec<Vec<Rat>> = (0..pivots.len()).map(|i| rref.row(i)).collect();
        let coords: Vec<Vec<Rat>> = generators.iter().map(|g| pivots.iter().map(|&p| g[p].clone()).collect()).collect();
        let r = pivots.len();

        let coord_facets = dd::dual_extreme_rays(&coords, r);
        if coord_facets.is_empty() || QMatrix::from_rows(coord_facets.clone()).expect("rectangular").rank() < r {
            return Err(ConeError::ContainsLine);
        }
        let back = dd::dual_extreme_rays(&coord_facets, r);
        let prim_gens: Vec<Vec<Rat>> = coords.iter().map(|c| primitive_vector(c)).collect();
        if !back.iter().all(|ray| prim_gens.contains(ray)) {
            return Err(ConeError::RoundTripFailed);
        }

        let facet_normals = coord_facets
            .iter()
            .map(|a| {
                let mut v = vec![Rat::zero(); n];
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = a[k].clone();
                }
                v
            })
            .collect();
        Ok(PolyhedralCone { ambient_dim: n, generators, span_basis, pivots, facet_normals })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the linear span of the cone.
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn generators(&self) -> &[Vec<Rat>] {
        &self.generators
    }

    /// Facet normals `a` with `a . x >= 0` on the cone, primitive integral,
    /// sorted lexicographically.
    pub fn facet_normals(&self) -> &[Vec<Rat>] {
        &self.facet_normals
    }

    /// Reduced row echelon basis of the span.
    pub fn span_basis(&self) -> &[Vec<Rat>] {
        &self.span_basis
    }

    /// Linear equations cutting out the span inside the ambient space.
    pub fn span_equations(&self) -> Vec<Vec<Rat>> {
        QMatrix::from_rows(self.span_basis.clone()).expect("rectangular").kernel()
    }

    /// Coordinates in the span basis, or `None` if `x` lies off the span.
    pub fn span_coordinates(&self, x: &[Rat]) -> Option<Vec<Rat>> {
        let c: Vec<Rat> = self.pivots.iter().map(|&p| x[p].clone()).collect();
        let mut rest = x.to_vec();
        for (ci, b) in c.iter().zip(&self.span_basis) {
            for (r, bj) in rest.iter_mut().zip(b) {
                *r -= ci * bj;
            }
        }
        rest.iter().all(Zero::is_zero).then_some(c)
    }

    pub fn in_span(&self, x: &[Rat]) -> bool {
        self.span_coordinates(x).is_some()
    }

    fn check_dim(&self, x: &[Rat]) -> Result<(), ConeError> {
        if x.len() != self.ambient_dim {
            return Err(ConeError::DimensionMismatch { expected: self.ambient_dim, got: x.len() });
        }
        Ok(())
    }

    /// Signs of the facet inner products.
    pub fn facet_signs(&self, x: &[Rat]) -> Vec<i32> {
        self.facet_normals.iter().map(|a| sign(&dot(a, x))).collect()
    }

    pub fn membership(&self, x: &[Rat]) -> Result<Membership, ConeError> {
        self.check_dim(x)?;
        if !self.in_span(x) {
            return Ok(Membership::Outside);
        }
        let signs = self.facet_signs(x);
        Ok(if signs.iter().any(|&s| s < 0) {
            Membership::Outside
        } else if signs.iter().all(|&s| s > 0) {
            Membership::Interior
        } else {
            Membership::Boundary
        })
    }

    /// Indices of facets vanishing at `x`.
    pub fn active_facets(&self, x: &[Rat]) -> Vec<usize> {
        self.facet_normals.iter().enumerate().filter(|(_, a)| dot(a, x).is_zero()).map(|(i, _)| i).collect()
    }

    /// Indices of generators spanning extreme rays.
    pub fn extreme_generator_indices(&self) -> Vec<usize> {
        let r = self.dim();
        let mut seen: Vec<Vec<Rat>> = Vec::new();
        let mut out = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            if g.iter().all(Zero::is_zero) {
                continue;
            }
            let tight: Vec<Vec<Rat>> =
                self.active_facets(g).into_iter().map(|k| self.facet_normals[k].clone()).collect();
            let rank = if tight.is_empty() { 0 } else { QMatrix::from_rows(tight).expect("rectangular").rank() };
            let prim = primitive_vector(g);
            if rank + 1 == r && !seen.contains(&prim) {
                seen.push(prim);
                out.push(i);
            }
        }
        out
    }

    /// Sum of the generators, a point of the relative interior.
    pub fn relative_interior_point(&self) -> Vec<Rat> {
        let mut s = vec![Rat::zero(); self.ambient_dim];
        for g in &self.generators {
            for (a, b) in s.iter_mut().zip(g) {
                *a += b;
            }
        }
        s
    }
}

impl ConeOracle for PolyhedralCone {
    fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    fn contains(&self, x: &[Rat]) -> bool {
        matches!(self.membership(x), Ok(Membership::Interior | Membership::Boundary))
    }

    fn strictly_contains(&self, x: &[Rat]) -> bool {
        matches!(self.membership(x), Ok(Membership::Interior))
    }

    fn interior_sample(&self) -> Vec<Rat> {
        self.relative_interior_point()
    }

    fn battery(&self, count: usize, seed: u64) -> Vec<Vec<Rat>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let mut x = vec![Rat::zero(); self.ambient_dim];
                for g in &self.generators {
                    let w = Rat::from_integer(rng.gen_range(0..=4).into());
                    for (a, b) in x.iter_mut().zip(g) {
                        *a += &w * b;
                    }
                }
                x
            })
            .collect()
    }

    fn describe(&self) -> String {
        format!(
            "polyhedral cone of dimension {} in Q^{} with {} generators and {} facets",
            self.dim(),
            self.ambient_dim,
            self.generators.len(),
            self.facet_normals.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn first_quadrant() {
        let c = build_cone(&[v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert_eq!(c.facet_normals(), &[v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(c.membership(&v(&[1, 1])), Ok(Membership::Interior));
        assert_eq!(c.membership(&v(&[1, 0])), Ok(Membership::Boundary));
        assert_eq!(c.membership(&v(&[-1, 2])), Ok(Membership::Outside));
        assert_eq!(c.membership(&v(&[1])), Err(ConeError::DimensionMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn square_cone_over_diamond() {
        let c = build_cone(&[v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[-1, 0, 1]), v(&[0, -1, 1])]).unwrap();
        let mut normals = c.facet_normals().to_vec();
        normals.sort();
        let mut expected = vec![v(&[1, 1, 1]), v(&[1, -1, 1]), v(&[-1, 1, 1]), v(&[-1, -1, 1])];
        expected.sort();
        assert_eq!(normals, expected);
        assert_eq!(c.extreme_generator_indices(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn rejects_lines_and_empty_input() {
        assert_eq!(build_cone(&[v(&[1, 0]), v(&[-1, 0])]), Err(ConeError::ContainsLine));
        assert_eq!(build_cone(&[]), Err(ConeError::EmptyInput));
        assert_eq!(build_cone(&[v(&[0, 0])]), Err(ConeError::EmptyInput));
        let big = vec![v(&[1; 9])];
        assert_eq!(build_cone(&big), Err(ConeError::CapExceeded { dim: 9, generators: 1 }));
    }

    #[test]
    fn lower_dimensional_cone_uses_relative_interior() {
        let c = build_cone(&[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.membership(&v(&[1, 1, 0])), Ok(Membership::Interior));
        assert_eq!(c.membership(&v(&[1, 1, 1])), Ok(Membership::Outside));
        assert_eq!(c.span_equations(), vec![v(&[0, 0, 1])]);
    }

    #[test]
    fn redundant_generators_are_not_extreme() {
        let c = build_cone(&[v(&[1, 0]), v(&[1, 1]), v(&[0, 1]), v(&[2, 0])]).unwrap();
        assert_eq!(c.facet_normals().len(), 2);
        assert_eq!(c.extreme_generator_indices(), vec![0, 2]);
    }
}
