//! Cone-preserving linear maps: power-boundedness, interior eigenvectors
//! and polarization certificates, plus the degree arithmetic of polarized
//! endomorphisms.

mod degree;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cones::{ConeError, ConeOracle, PolyhedralCone};
use crate::exactalg::{
    abs_squared, char_poly, min_poly, modulus_equals, primitive_vector, roots_with_multiplicity, spectral_projector,
    ExactError, QMatrix, QPoly, Rat,
};

pub use degree::{
    abelian_invariant_check, deg_from_integer_matrix, product_formula_check, q_from_degree, restricted_degree,
    verify_intertwining, AbelianVerdict, DegreeLedger,
};

/// Number of perturbed retries in the witness search.
pub const WITNESS_RETRIES: u32 = 16;
/// Size of the pseudo-random battery used to spot-check oracle invariance.
pub const ORACLE_BATTERY: usize = 32;
/// Seed of that battery.
pub const ORACLE_BATTERY_SEED: u64 = 0x0c0e_5eed;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("expected dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cone invariance has not been verified")]
    InvarianceNotVerified,
    #[error("map is not power-bounded at q = {0}")]
    NotPowerBounded(String),
    #[error("only irrational positive candidates pass power-boundedness: root of {minpoly} ~ {approx}")]
    IrrationalCandidateOnly { minpoly: String, approx: f64 },
    #[error("{deg} has no integer {n}-th root")]
    NoIntegerRoot { deg: String, n: u32 },
    #[error("matrix does not have full column rank")]
    RankDeficient,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal assertion failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

/// The cone a map acts on.
#[derive(Debug, Clone)]
pub enum ConeRef {
    Polyhedral(PolyhedralCone),
    Oracle(Arc<dyn ConeOracle>),
}

impl ConeRef {
    pub fn as_oracle(&self) -> &dyn ConeOracle {
        match self {
            ConeRef::Polyhedral(c) => c,
            ConeRef::Oracle(o) => o.as_ref(),
        }
    }
}

/// How `f^{+-1}(C) = C` was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariance {
    Unchecked,
    /// Checked on every generator of a polyhedral cone.
    Exact,
    /// Checked on the interior sample and a deterministic battery of oracle
    /// points only.
    SpotChecked {
        battery: usize,
    },
}

impl fmt::Display for Invariance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariance::Unchecked => write!(f, "unchecked"),
            Invariance::Exact => write!(f, "exact (all generators)"),
            Invariance::SpotChecked { battery } => {
                write!(f, "spot-checked (interior sample + {battery} battery points)")
            }
        }
    }
}

/// An invertible linear map together with a cone it should preserve.
#[derive(Debug, Clone)]
pub struct ConeMap {
    map: QMatrix,
    inverse: QMatrix,
    cone: ConeRef,
    invariance: Invariance,
}

impl ConeMap {
    pub fn new(map: QMatrix, cone: ConeRef) -> Result<Self, DynamicsError> {
        let n = cone.as_oracle().ambient_dim();
        if !map.is_square() {
            return Err(ExactError::NonSquare { rows: map.rows(), cols: map.cols() }.into());
        }
        if map.rows() != n {
            return Err(DynamicsError::DimensionMismatch { expected: n, got: map.rows() });
        }
        let inverse = map.inverse().map_err(|_| DynamicsError::SingularMatrix)?;
        Ok(ConeMap { map, inverse, cone, invariance: Invariance::Unchecked })
    }

    pub fn polyhedral(map: QMatrix, cone: PolyhedralCone) -> Result<Self, DynamicsError> {
        Self::new(map, ConeRef::Polyhedral(cone))
    }

    pub fn oracle(map: QMatrix, cone: Arc<dyn ConeOracle>) -> Result<Self, DynamicsError> {
        Self::new(map, ConeRef::Oracle(cone))
    }

    pub fn map(&self) -> &QMatrix {
        &self.map
    }

    pub fn inverse(&self) -> &QMatrix {
        &self.inverse
    }

    pub fn cone(&self) -> &ConeRef {
        &self.cone
    }

    pub fn invariance(&self) -> Invariance {
        self.invariance
    }

    /// Checks `f(C) ⊆ C` and `f^{-1}(C) ⊆ C` and records how. Returns
    /// whether the check passed.
    pub fn verify(&mut self) -> bool {
        let ok = match &self.cone {
            ConeRef::Polyhedral(c) => {
                maps_into(&self.map, c.generators(), c) && maps_into(&self.inverse, c.generators(), c)
            }
            ConeRef::Oracle(o) => {
                let mut pts = o.battery(ORACLE_BATTERY, ORACLE_BATTERY_SEED);
                pts.push(o.interior_sample());
                maps_into(&self.map, &pts, o.as_ref()) && maps_into(&self.inverse, &pts, o.as_ref())
            }
        };
        self.invariance = match (ok, &self.cone) {
            (false, _) => Invariance::Unchecked,
            (true, ConeRef::Polyhedral(_)) => Invariance::Exact,
            (true, ConeRef::Oracle(_)) => Invariance::SpotChecked { battery: ORACLE_BATTERY },
        };
        ok
    }

    /// Builder form of [`ConeMap::verify`].
    #[allow(clippy::result_large_err)]
    pub fn verified(mut self) -> Result<Self, Self> {
        if self.verify() {
            Ok(self)
        } else {
            Err(self)
        }
    }
}

fn maps_into(m: &QMatrix, pts: &[Vec<Rat>], cone: &dyn ConeOracle) -> bool {
    pts.iter().all(|x| cone.contains(&m.mul_vec(x)))
}

/// Exact check that every generator maps into the cone under `m` and `m^{-1}`.
pub fn verify_invariance(m: &QMatrix, c: &PolyhedralCone) -> Result<bool, DynamicsError> {
    let mut cm = ConeMap::polyhedral(m.clone(), c.clone())?;
    Ok(cm.verify())
}

/// Decides `sup_i ||m^i|| / q^i < inf` over all integers `i`: the minimal
/// polynomial is square-free and every eigenvalue has modulus exactly `q`.
pub fn is_power_bounded(m: &QMatrix, q: &Rat) -> Result<bool, DynamicsError> {
    if m.det()?.is_zero() {
        return Err(DynamicsError::SingularMatrix);
    }
    if !q.is_positive() {
        return Ok(false);
    }
    let mu = min_poly(m)?;
    if !is_square_free(&mu) {
        return Ok(false);
    }
    Ok(roots_with_multiplicity(&mu)?.iter().all(|(a, _)| modulus_equals(a, q)))
}

fn is_square_free(p: &QPoly) -> bool {
    p.gcd(&p.derivative()).degree() == Some(0)
}

/// Outcome of the interior eigenvector search.
#[derive(Debug, Clone, PartialEq)]
pub enum WitnessSearch {
    Found(Vec<Rat>),
    /// `conclusive` is set when failure proves that the eigenspace misses
    /// the interior, which holds for polyhedral cones with exact invariance.
    NotFound {
        conclusive: bool,
        attempts: u32,
    },
}

/// Span restriction used for cones that are not full-dimensional.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanRestriction {
    /// Basis of the span, as rows.
    pub basis: Vec<Vec<Rat>>,
    /// The map in span coordinates.
    pub restricted_map: QMatrix,
    /// Characteristic polynomial of the induced map on the quotient by the
    /// span, reported without interpretation.
    pub transverse_char_poly: QPoly,
}

fn restrict(cm: &ConeMap) -> Result<Option<(ConeMap, SpanRestriction)>, DynamicsError> {
    let ConeRef::Polyhedral(c) = &cm.cone else {
        return Ok(None);
    };
    if c.is_full_dimensional() {
        return Ok(None);
    }
    let basis = c.span_basis().to_vec();
    let r = basis.len();
    let mut restricted = QMatrix::zeros(r, r);
    for (j, b) in basis.iter().enumerate() {
        let image = cm.map.mul_vec(b);
        let coords = c
            .span_coordinates(&image)
            .ok_or_else(|| DynamicsError::Internal("map does not preserve the span of the cone".into()))?;
        for (i, x) in coords.into_iter().enumerate() {
            restricted.set(i, j, x);
        }
    }
    let gens: Vec<Vec<Rat>> =
        c.generators().iter().map(|g| c.span_coordinates(g).expect("generator in span")).collect();
    let sub_cone = PolyhedralCone::new(gens)?;
    let mut sub = ConeMap::polyhedral(restricted.clone(), sub_cone)?;
    sub.invariance = cm.invariance;
    let transverse = char_poly(&cm.map)?.exact_div(&char_poly(&restricted)?);
    Ok(Some((sub, SpanRestriction { basis, restricted_map: restricted, transverse_char_poly: transverse })))
}

fn lift(basis: &[Vec<Rat>], coords: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); basis[0].len()];
    for (c, b) in coords.iter().zip(basis) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

/// Searches for `x` in the interior of the cone with `m x = q x` by applying
/// the spectral projector onto the `q`-eigenspace to the interior sample and
/// to [`WITNESS_RETRIES`] perturbations of it.
pub fn interior_eigenvector(cm: &ConeMap, q: &Rat) -> Result<WitnessSearch, DynamicsError> {
    if cm.invariance == Invariance::Unchecked {
        return Err(DynamicsError::InvarianceNotVerified);
    }
    if let Some((sub, restriction)) = restrict(cm)? {
        return Ok(match interior_eigenvector(&sub, q)? {
            WitnessSearch::Found(w) => WitnessSearch::Found(primitive_vector(&lift(&restriction.basis, &w))),
            other => other,
        });
    }
    if !is_power_bounded(&cm.map, q)? {
        return Err(DynamicsError::NotPowerBounded(crate::exactalg::format_rat(q)));
    }
    let projector = spectral_projector(&cm.map, q)?;
    let oracle = cm.cone.as_oracle();
    let sample = oracle.interior_sample();
    let directions: Vec<Vec<Rat>> = match &cm.cone {
        ConeRef::Polyhedral(c) => c.generators().to_vec(),
        ConeRef::Oracle(o) => o.battery(WITNESS_RETRIES as usize, ORACLE_BATTERY_SEED ^ 0xff),
    };
    let mut attempts = 0;
    for k in 0..=WITNESS_RETRIES {
        let start = if k == 0 {
            sample.clone()
        } else {
            let weight = Rat::new(One::one(), num_bigint::BigInt::one() << k);
            let d = &directions[(k as usize - 1) % directions.len()];
            sample.iter().zip(d).map(|(s, x)| s + &weight * x).collect()
        };
        attempts += 1;
        let w = projector.mul_vec(&start);
        if oracle.strictly_contains(&w) {
            return Ok(WitnessSearch::Found(primitive_vector(&w)));
        }
    }
    let conclusive = matches!((&cm.cone, cm.invariance), (ConeRef::Polyhedral(_), Invariance::Exact));
    Ok(WitnessSearch::NotFound { conclusive, attempts })
}

/// Evidence that a cone-preserving map is polarized.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationCertificate {
    pub q: Rat,
    pub q_is_integer: bool,
    /// Interior eigenvector, primitive integral, in ambient coordinates.
    pub witness: Vec<Rat>,
    /// Spectral projector onto the `q`-eigenspace of the map it was computed
    /// for (the restricted map when `restriction` is set).
    pub projector: QMatrix,
    pub eigenvalue_moduli_all_q: bool,
    pub semisimple: bool,
    pub invariance: Invariance,
    pub restriction: Option<SpanRestriction>,
}

impl PolarizationCertificate {
    /// Re-checks the certificate identities exactly.
    pub fn reverify(&self, cm: &ConeMap) -> Result<(), String> {
        let scaled: Vec<Rat> = self.witness.iter().map(|x| x * &self.q).collect();
        if cm.map.mul_vec(&self.witness) != scaled {
            return Err("m H != q H".into());
        }
        if !cm.cone.as_oracle().strictly_contains(&self.witness) {
            return Err("witness is not interior".into());
        }
        let m = self.restriction.as_ref().map_or(&cm.map, |r| &r.restricted_map);
        let p = &self.projector;
        if &(p * p) != p {
            return Err("projector is not idempotent".into());
        }
        if m * p != p.scale(&self.q) || p * m != p.scale(&self.q) {
            return Err("m P != q P".into());
        }
        if self.q_is_integer != self.q.is_integer() {
            return Err("q_is_integer flag disagrees with q".into());
        }
        Ok(())
    }
}

/// Result of [`decide_polarization`].
#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    Polarized(PolarizationCertificate),
    NotPolarized { reason: String },
    Inconclusive { q: Rat, reason: String },
}

/// Decides whether the map has an interior eigenvector whose eigenvalue `q`
/// makes it power-bounded.
///
/// Candidates are the positive rational eigenvalues in ascending order. A map
/// power-bounded at `q` has all eigenvalues of modulus `q`, so at most one
/// candidate can pass. If none passes but an irrational positive eigenvalue
/// does, the case is surfaced as [`DynamicsError::IrrationalCandidateOnly`].
pub fn decide_polarization(cm: &ConeMap) -> Result<Decision, DynamicsError> {
    if cm.invariance == Invariance::Unchecked {
        return Err(DynamicsError::InvarianceNotVerified);
    }
    let (work, restriction) = match restrict(cm)? {
        Some((sub, r)) => (sub, Some(r)),
        None => (cm.clone(), None),
    };
    let m = &work.map;
    let roots = roots_with_multiplicity(&char_poly(m)?)?;
    let mut candidates: Vec<Rat> =
        roots.iter().filter_map(|(a, _)| a.as_rational().filter(|r| r.is_positive()).cloned()).collect();
    candidates.sort();

    for q in &candidates {
        if !is_power_bounded(m, q)? {
            continue;
        }
        return match interior_eigenvector(&work, q)? {
            WitnessSearch::Found(w) => {
                let witness = match &restriction {
                    Some(r) => primitive_vector(&lift(&r.basis, &w)),
                    None => w,
                };
                if cm.map.is_integral() && !q.is_integer() {
                    return Err(DynamicsError::Internal(format!(
                        "integral map with non-integral scaling factor {}",
                        crate::exactalg::format_rat(q)
                    )));
                }
                Ok(Decision::Polarized(PolarizationCertificate {
                    q: q.clone(),
                    q_is_integer: q.is_integer(),
                    witness,
                    projector: spectral_projector(m, q)?,
                    eigenvalue_moduli_all_q: true,
                    semisimple: true,
                    invariance: cm.invariance,
                    restriction,
                }))
            }
            WitnessSearch::NotFound { conclusive: true, .. } => Ok(Decision::NotPolarized {
                reason: format!(
                    "power-bounded at q = {} but the q-eigenspace misses the interior",
                    crate::exactalg::format_rat(q)
                ),
            }),
            WitnessSearch::NotFound { conclusive: false, attempts } => Ok(Decision::Inconclusive {
                q: q.clone(),
                reason: format!("no interior eigenvector found in {attempts} attempts"),
            }),
        };
    }

    let mu = min_poly(m)?;
    if is_square_free(&mu) {
        for (a, _) in &roots {
            if !a.is_real() || a.as_rational().is_some() || a.re_interval().hi.is_negative() {
                continue;
            }
            let target = abs_squared(a);
            let all = roots.iter().all(|(b, _)| abs_squared(b).exact_eq(&target));
            if all {
                return Err(DynamicsError::IrrationalCandidateOnly {
                    minpoly: a.minpoly().to_string(),
                    approx: a.approx().0,
                });
            }
        }
    }
    let reason = if candidates.is_empty() {
        "no positive rational eigenvalue".to_string()
    } else {
        "no positive rational eigenvalue q makes the map power-bounded".to_string()
    };
    Ok(Decision::NotPolarized { reason })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::{build_cone, psd_cone_oracle};
    use crate::exactalg::{int, rat};

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn quadrant() -> PolyhedralCone {
        build_cone(&[v(&[1, 0]), v(&[0, 1])]).unwrap()
    }

    fn decide(m: QMatrix, c: PolyhedralCone) -> Result<Decision, DynamicsError> {
        let cm = ConeMap::polyhedral(m, c).unwrap().verified().expect("invariant");
        decide_polarization(&cm)
    }

    #[test]
    fn invariance_examples() {
        let q = quadrant();
        assert!(verify_invariance(&QMatrix::identity(2), &q).unwrap());
        assert!(verify_invariance(&QMatrix::from_ints(&[&[0, 2], &[2, 0]]), &q).unwrap());
        assert!(!verify_invariance(&QMatrix::from_ints(&[&[1, -1], &[0, 1]]), &q).unwrap());
        assert_eq!(verify_invariance(&QMatrix::from_ints(&[&[1, 1], &[1, 1]]), &q), Err(DynamicsError::SingularMatrix));
    }

    #[test]
    fn power_bounded_examples() {
        assert!(is_power_bounded(&QMatrix::identity(2), &int(1)).unwrap());
        assert!(!is_power_bounded(&QMatrix::from_ints(&[&[1, 1], &[0, 1]]), &int(1)).unwrap());
        assert!(!is_power_bounded(&QMatrix::from_ints(&[&[2, 0], &[0, 1]]), &int(2)).unwrap());
        let ns = QMatrix::from_ints(&[&[1, 2, 1], &[-5, -4, 1], &[25, -10, 1]]);
        assert!(is_power_bounded(&ns, &int(6)).unwrap());
        assert!(!is_power_bounded(&ns, &int(5)).unwrap());
    }

    #[test]
    fn swap_is_polarized_at_two() {
        let m = QMatrix::from_ints(&[&[0, 2], &[2, 0]]);
        let Decision::Polarized(cert) = decide(m.clone(), quadrant()).unwrap() else { panic!() };
        assert_eq!(cert.q, int(2));
        assert!(cert.q_is_integer);
        assert_eq!(cert.witness, v(&[1, 1]));
        let cm = ConeMap::polyhedral(m, quadrant()).unwrap().verified().unwrap();
        cert.reverify(&cm).unwrap();
    }

    #[test]
    fn scalar_map_witness_is_sample() {
        let cm = ConeMap::polyhedral(QMatrix::identity(2).scale(&int(2)), quadrant()).unwrap().verified().unwrap();
        assert_eq!(interior_eigenvector(&cm, &int(2)).unwrap(), WitnessSearch::Found(v(&[1, 1])));
    }

    #[test]
    fn diagonal_two_three_is_not_polarized() {
        let d = decide(QMatrix::from_ints(&[&[2, 0], &[0, 3]]), quadrant()).unwrap();
        assert!(matches!(d, Decision::NotPolarized { .. }));
    }

    #[test]
    fn rational_scaling_is_allowed_off_the_lattice() {
        let m = QMatrix::identity(2).scale(&rat(3, 2));
        let Decision::Polarized(cert) = decide(m, quadrant()).unwrap() else { panic!() };
        assert_eq!(cert.q, rat(3, 2));
        assert!(!cert.q_is_integer);
    }

    #[test]
    fn irrational_candidate_is_reported() {
        let r = decide(QMatrix::from_ints(&[&[0, 2], &[1, 0]]), quadrant());
        assert!(matches!(r, Err(DynamicsError::IrrationalCandidateOnly { .. })), "{r:?}");
    }

    #[test]
    fn unverified_map_is_refused() {
        let cm = ConeMap::polyhedral(QMatrix::identity(2), quadrant()).unwrap();
        assert_eq!(decide_polarization(&cm), Err(DynamicsError::InvarianceNotVerified));
    }

    #[test]
    fn psd_oracle_example() {
        let ns = QMatrix::from_ints(&[&[1, 2, 1], &[-5, -4, 1], &[25, -10, 1]]);
        let cm = ConeMap::oracle(ns, Arc::new(psd_cone_oracle(2))).unwrap().verified().unwrap();
        assert_eq!(cm.invariance(), Invariance::SpotChecked { battery: ORACLE_BATTERY });
        let Decision::Polarized(cert) = decide_polarization(&cm).unwrap() else { panic!() };
        assert_eq!(cert.q, int(6));
        assert_eq!(cert.witness, v(&[1, 0, 5]));
        cert.reverify(&cm).unwrap();
    }

    #[test]
    fn lower_dimensional_cone_restricts_to_span() {
        let c = build_cone(&[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let m = QMatrix::from_ints(&[&[0, 3, 0], &[3, 0, 0], &[0, 0, 7]]);
        let Decision::Polarized(cert) = decide(m, c).unwrap() else { panic!() };
        assert_eq!(cert.q, int(3));
        assert_eq!(cert.witness, v(&[1, 1, 0]));
        let r = cert.restriction.unwrap();
        assert_eq!(r.transverse_char_poly, QPoly::from_ints(&[-7, 1]));
    }
}
