//! Néron–Severi arithmetic on `E x E` for an elliptic curve `E` without
//! complex multiplication.
//!
//! A class is a symmetric integer matrix `[[a, b], [b, c]]`, written in the
//! basis `E11 = [[1,0],[0,0]]`, `E12 = [[0,1],[1,0]]`, `E22 = [[0,0],[0,1]]`
//! with coordinates `(a, b, c)`. An endomorphism given by an integer matrix
//! `A` pulls a class `H` back to `A^T H A`. The intersection form is
//! normalized by `E11^2 = 0` and `E11 . E22 = 1`, which gives `H^2 = 2 det H`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cones::psd_cone_oracle;
use crate::dynamics::{
    decide_polarization, deg_from_integer_matrix, q_from_degree, ConeMap, Decision, DynamicsError, Invariance,
};
use crate::exactalg::{
    abs_squared, char_poly, roots_with_multiplicity, AlgebraicNumber, ExactError, QMatrix, QPoly, Rat, RealAlgebraic,
};

/// Picard number of `E x E` without complex multiplication.
pub const PICARD_NUMBER: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NsError {
    #[error("endomorphism matrix is singular")]
    SingularEndomorphism,
    #[error("expected a 2x2 integer matrix")]
    NotIntegral2x2,
    #[error("class matrix is not symmetric")]
    NotSymmetric,
    #[error("class vectors live in different ambient spaces: {0}")]
    AmbientMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("assertion failed: {0}")]
    AssertionFailed(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Symmetric integer matrix `[[a, b], [b, c]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymClass {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl SymClass {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        SymClass { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn basis() -> [SymClass; 3] {
        [SymClass::new(1, 0, 0), SymClass::new(0, 1, 0), SymClass::new(0, 0, 1)]
    }

    pub fn from_matrix(m: &QMatrix) -> Result<Self, NsError> {
        if m.rows() != 2 || m.cols() != 2 || !m.is_integral() {
            return Err(NsError::NotIntegral2x2);
        }
        if m.get(0, 1) != m.get(1, 0) {
            return Err(NsError::NotSymmetric);
        }
        Ok(SymClass { a: m.get(0, 0).to_integer(), b: m.get(0, 1).to_integer(), c: m.get(1, 1).to_integer() })
    }

    /// Class from integral coordinates `(a, b, c)`.
    pub fn from_coords(x: &[Rat]) -> Result<Self, NsError> {
        if x.len() != 3 || x.iter().any(|v| !v.is_integer()) {
            return Err(NsError::InvalidInput("class coordinates must be three integers".into()));
        }
        Ok(SymClass { a: x[0].to_integer(), b: x[1].to_integer(), c: x[2].to_integer() })
    }

    pub fn to_matrix(&self) -> QMatrix {
        let r = |x: &BigInt| Rat::from_integer(x.clone());
        QMatrix::from_rows(vec![vec![r(&self.a), r(&self.b)], vec![r(&self.b), r(&self.c)]]).expect("2x2")
    }

    pub fn coords(&self) -> Vec<Rat> {
        vec![Rat::from_integer(self.a.clone()), Rat::from_integer(self.b.clone()), Rat::from_integer(self.c.clone())]
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.c - &self.b * &self.b
    }

    /// `A^T H A`.
    pub fn pullback(&self, a: &QMatrix) -> SymClass {
        SymClass::from_matrix(&(&(&a.transpose() * &self.to_matrix()) * a)).expect("congruence keeps symmetry")
    }
}

impl fmt::Display for SymClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.b, self.c)
    }
}

/// Intersection number `a1 c2 + a2 c1 - 2 b1 b2`.
pub fn intersect(h1: &SymClass, h2: &SymClass) -> BigInt {
    &h1.a * &h2.c + &h2.a * &h1.c - BigInt::from(2) * &h1.b * &h2.b
}

/// Nef classes are the positive semidefinite ones.
pub fn is_nef(h: &SymClass) -> bool {
    !h.a.is_negative() && !h.c.is_negative() && !h.det().is_negative()
}

/// Ample classes are the positive definite ones.
pub fn is_ample(h: &SymClass) -> bool {
    h.a.is_positive() && h.det().is_positive()
}

/// Action of an endomorphism of `E x E` on classes.
#[derive(Debug, Clone, PartialEq)]
pub struct EndoAction {
    pub a: QMatrix,
    /// Column `k` holds the coordinates of `A^T (basis k) A`.
    pub ns_matrix: QMatrix,
}

pub fn pullback_action(a: &QMatrix) -> Result<EndoAction, NsError> {
    if a.rows() != 2 || a.cols() != 2 || !a.is_integral() {
        return Err(NsError::NotIntegral2x2);
    }
    if a.det()?.is_zero() {
        return Err(NsError::SingularEndomorphism);
    }
    let cols: Vec<Vec<Rat>> = SymClass::basis().iter().map(|e| e.pullback(a).coords()).collect();
    Ok(EndoAction { a: a.clone(), ns_matrix: QMatrix::from_columns(&cols)? })
}

/// Polarization verdict on `N^1(E x E)`.
#[derive(Debug, Clone, PartialEq)]
pub enum NsVerdict {
    Polarized {
        q: Rat,
        witness: SymClass,
        witness_ample: bool,
    },
    /// Polarized only at `q <= 1`, which does not count.
    NotPolarizedForQGreaterThanOne {
        q: Rat,
    },
    NotPolarized {
        reason: String,
    },
    Inconclusive {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NsReport {
    pub a: QMatrix,
    pub ns_matrix: QMatrix,
    pub rho: usize,
    pub char_poly: QPoly,
    pub eigenvalues: Vec<(AlgebraicNumber, usize)>,
    /// Real eigenvalues counted with multiplicity.
    pub real_eigenvalues: usize,
    /// Square of the spectral radius, exact.
    pub spectral_radius_squared: RealAlgebraic,
    /// The spectral radius when it is rational.
    pub spectral_radius: Option<Rat>,
    pub verdict: NsVerdict,
    pub invariance: Invariance,
    /// `det(A)^2`.
    pub deg_f: BigInt,
    /// Integer `q` with `q^2 = deg f`, when it exists.
    pub q_from_degree: Option<BigInt>,
}

/// Spectral and polarization data of the endomorphism given by `a`.
pub fn ns_example_report(a: &QMatrix) -> Result<NsReport, NsError> {
    let action = pullback_action(a)?;
    let m = action.ns_matrix.clone();
    let cp = char_poly(&m)?;
    let eigenvalues = roots_with_multiplicity(&cp)?;
    let real_eigenvalues = eigenvalues.iter().filter(|(e, _)| e.is_real()).map(|(_, k)| k).sum();
    let spectral_radius_squared =
        eigenvalues.iter().map(|(e, _)| abs_squared(e)).max_by(|x, y| x.exact_cmp(y)).expect("nonempty spectrum");
    let spectral_radius = spectral_radius_squared.rational_sqrt();

    let cm = ConeMap::oracle(m.clone(), Arc::new(psd_cone_oracle(2)))?;
    let cm = cm.verified().map_err(|_| NsError::AssertionFailed("pullback does not preserve the nef cone".into()))?;
    let verdict = match decide_polarization(&cm) {
        Ok(Decision::Polarized(cert)) if cert.q > Rat::one() => {
            let witness = SymClass::from_coords(&cert.witness)?;
            NsVerdict::Polarized { q: cert.q, witness_ample: is_ample(&witness), witness }
        }
        Ok(Decision::Polarized(cert)) => NsVerdict::NotPolarizedForQGreaterThanOne { q: cert.q },
        Ok(Decision::NotPolarized { reason }) => NsVerdict::NotPolarized { reason },
        Ok(Decision::Inconclusive { reason, .. }) => NsVerdict::Inconclusive { reason },
        Err(DynamicsError::IrrationalCandidateOnly { minpoly, .. }) => {
            NsVerdict::Inconclusive { reason: format!("only irrational candidate, root of {minpoly}") }
        }
        Err(e) => return Err(e.into()),
    };
    let deg_f = deg_from_integer_matrix(a)?;
    let q_from_deg = q_from_degree(&deg_f, 2).ok();
    Ok(NsReport {
        a: a.clone(),
        ns_matrix: m,
        rho: PICARD_NUMBER,
        char_poly: cp,
        eigenvalues,
        real_eigenvalues,
        spectral_radius_squared,
        spectral_radius,
        verdict,
        invariance: cm.invariance(),
        deg_f,
        q_from_degree: q_from_deg,
    })
}

/// The endomorphism `[[1, -5], [1, 1]]` of `E x E`.
pub fn example_ex1_matrix() -> QMatrix {
    QMatrix::from_ints(&[&[1, -5], &[1, 1]])
}

/// Report for `[[1, -5], [1, 1]]` with every expected property asserted.
pub fn example_ex1_report() -> Result<NsReport, NsError> {
    let r = ns_example_report(&example_ex1_matrix())?;
    let six = Rat::from_integer(6.into());
    let check = |ok: bool, clause: &str| if ok { Ok(()) } else { Err(NsError::AssertionFailed(clause.to_string())) };
    check(r.rho == 3, "rho = 3")?;
    check(r.char_poly == QPoly::from_ints(&[-216, -12, 2, 1]), "char poly t^3 + 2t^2 - 12t - 216")?;
    check(r.real_eigenvalues == 1, "exactly one real eigenvalue")?;
    check(r.spectral_radius.as_ref() == Some(&six), "spectral radius 6")?;
    match &r.verdict {
        NsVerdict::Polarized { q, witness, witness_ample } => {
            check(*q == six, "q = 6")?;
            check(*witness_ample, "witness class is ample")?;
            check(*witness == SymClass::new(1, 0, 5), "witness class [[1,0],[0,5]]")?;
            check(
                witness.pullback(&r.a).coords() == witness.coords().iter().map(|x| x * &six).collect::<Vec<_>>(),
                "A^T H A = 6 H",
            )?;
        }
        other => return Err(NsError::AssertionFailed(format!("polarized at q = 6, got {other:?}"))),
    }
    check(r.deg_f == BigInt::from(36), "deg f = det(A)^2 = 36")?;
    check(r.q_from_degree == Some(BigInt::from(6)), "deg f = 6^2")?;
    Ok(r)
}

/// Sign of the self-intersection of the image of a fibre under a finite
/// quotient, from `a^2 E0^2 = c * image^2` with `a, c > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientImage {
    /// `image_sq` is exact when it is zero and `None` when only its sign is
    /// known. Ampleness needs a positive self-intersection.
    Derived { image_sq_sign: Ordering, image_sq: Option<BigInt>, ample_possible: bool },
    /// The positivity hypothesis was not asserted.
    Unknown,
}

pub fn quotient_image_selfintersection(e0_sq: &BigInt, pull_coeff_positive: bool) -> QuotientImage {
    if !pull_coeff_positive {
        return QuotientImage::Unknown;
    }
    let sign = e0_sq.cmp(&BigInt::zero());
    QuotientImage::Derived {
        image_sq_sign: sign,
        image_sq: e0_sq.is_zero().then(BigInt::zero),
        ample_possible: sign == Ordering::Greater,
    }
}

/// A divisor class as a coordinate vector in `N^1` of dimension `rho`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClassVector(pub Vec<Rat>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetVerdict {
    /// `K + D = 0`, so `Delta = 0`.
    CalabiYauCandidate,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundVerdict {
    Ok,
    Violated,
}

/// Class calculus of the ramification divisor `R = (q - 1) D + Delta` with
/// `Delta = -(q - 1)(K + D)`, and the count bound `s <= dim X + rho`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamificationBudget {
    pub q: BigInt,
    pub k_class: DivisorClassVector,
    pub d_class: DivisorClassVector,
    pub delta_class: DivisorClassVector,
    pub ramification_class: DivisorClassVector,
    pub s: u64,
    pub dim_x: u64,
    pub rho: u64,
    pub verdict: BudgetVerdict,
    pub bound_ok: bool,
    pub bound: BoundVerdict,
}

pub fn ramification_budget(
    q: &BigInt,
    k: &DivisorClassVector,
    d: &DivisorClassVector,
    s: u64,
    dim_x: u64,
    rho: u64,
) -> Result<RamificationBudget, NsError> {
    if q < &BigInt::from(2) {
        return Err(NsError::InvalidInput(format!("q must be at least 2, got {q}")));
    }
    if dim_x == 0 || rho == 0 {
        return Err(NsError::InvalidInput("dim_x and rho must be positive".into()));
    }
    if k.0.len() != d.0.len() || k.0.len() as u64 != rho {
        return Err(NsError::AmbientMismatch(format!("|K| = {}, |D| = {}, rho = {rho}", k.0.len(), d.0.len())));
    }
    let qm1 = Rat::from_integer(q - BigInt::one());
    let delta: Vec<Rat> = k.0.iter().zip(&d.0).map(|(x, y)| -(&qm1 * (x + y))).collect();
    let ram: Vec<Rat> = d.0.iter().zip(&delta).map(|(x, y)| &qm1 * x + y).collect();
    let verdict =
        if delta.iter().all(Zero::is_zero) { BudgetVerdict::CalabiYauCandidate } else { BudgetVerdict::General };
    let bound_ok = s <= dim_x + rho;
    Ok(RamificationBudget {
        q: q.clone(),
        k_class: k.clone(),
        d_class: d.clone(),
        delta_class: DivisorClassVector(delta),
        ramification_class: DivisorClassVector(ram),
        s,
        dim_x,
        rho,
        verdict,
        bound_ok,
        bound: if bound_ok { BoundVerdict::Ok } else { BoundVerdict::Violated },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    fn dv(xs: &[i64]) -> DivisorClassVector {
        DivisorClassVector(xs.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn pullback_matrices() {
        assert_eq!(pullback_action(&QMatrix::identity(2)).unwrap().ns_matrix, QMatrix::identity(3));
        assert_eq!(
            pullback_action(&example_ex1_matrix()).unwrap().ns_matrix,
            QMatrix::from_ints(&[&[1, 2, 1], &[-5, -4, 1], &[25, -10, 1]])
        );
        let three = QMatrix::identity(2).scale(&int(3));
        assert_eq!(pullback_action(&three).unwrap().ns_matrix, QMatrix::identity(3).scale(&int(9)));
        assert_eq!(pullback_action(&QMatrix::from_ints(&[&[1, 2], &[2, 4]])), Err(NsError::SingularEndomorphism));
    }

    #[test]
    fn intersection_numbers() {
        let [e11, _, e22] = SymClass::basis();
        assert_eq!(intersect(&e11, &e11), BigInt::from(0));
        assert_eq!(intersect(&SymClass::new(1, 0, 1), &SymClass::new(1, 0, 1)), BigInt::from(2));
        assert_eq!(intersect(&e11, &e22), BigInt::from(1));
    }

    #[test]
    fn positivity() {
        assert!(is_nef(&SymClass::new(1, 0, 5)) && is_ample(&SymClass::new(1, 0, 5)));
        assert!(is_nef(&SymClass::new(1, 0, 0)) && !is_ample(&SymClass::new(1, 0, 0)));
        assert!(!is_nef(&SymClass::new(0, 1, 0)) && !is_ample(&SymClass::new(0, 1, 0)));
    }

    #[test]
    fn ex1_report_passes_its_assertions() {
        let r = example_ex1_report().unwrap();
        assert_eq!(r.eigenvalues.len(), 3);
    }

    #[test]
    fn identity_and_doubling() {
        let r = ns_example_report(&QMatrix::identity(2)).unwrap();
        assert_eq!(r.verdict, NsVerdict::NotPolarizedForQGreaterThanOne { q: int(1) });
        let r = ns_example_report(&QMatrix::identity(2).scale(&int(2))).unwrap();
        assert_eq!(r.verdict, NsVerdict::Polarized { q: int(4), witness: SymClass::new(1, 0, 1), witness_ample: true });
    }

    #[test]
    fn quotient_image() {
        assert_eq!(
            quotient_image_selfintersection(&BigInt::from(0), true),
            QuotientImage::Derived {
                image_sq_sign: Ordering::Equal,
                image_sq: Some(BigInt::from(0)),
                ample_possible: false
            }
        );
        assert!(matches!(
            quotient_image_selfintersection(&BigInt::from(2), true),
            QuotientImage::Derived { image_sq_sign: Ordering::Greater, ample_possible: true, .. }
        ));
        assert_eq!(quotient_image_selfintersection(&BigInt::from(0), false), QuotientImage::Unknown);
    }

    #[test]
    fn ramification() {
        let b = ramification_budget(&BigInt::from(2), &dv(&[1, -2]), &dv(&[-1, 2]), 1, 2, 2).unwrap();
        assert_eq!(b.verdict, BudgetVerdict::CalabiYauCandidate);
        let b = ramification_budget(&BigInt::from(3), &dv(&[-1, 0]), &dv(&[0, 0]), 0, 1, 2).unwrap();
        assert_eq!(b.delta_class, dv(&[2, 0]));
        let b = ramification_budget(&BigInt::from(2), &dv(&[0, 0, 0]), &dv(&[0, 0, 0]), 6, 2, 3).unwrap();
        assert!(!b.bound_ok);
        assert_eq!(b.bound, BoundVerdict::Violated);
        assert!(matches!(
            ramification_budget(&BigInt::from(2), &dv(&[0]), &dv(&[0, 0]), 0, 1, 1),
            Err(NsError::AmbientMismatch(_))
        ));
        assert!(ramification_budget(&BigInt::from(1), &dv(&[0]), &dv(&[0]), 0, 1, 1).is_err());
    }
}
