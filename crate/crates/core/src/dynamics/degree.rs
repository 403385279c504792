use num_bigint::BigInt;
use num_traits::{One, Pow, Signed};

use super::DynamicsError;
use crate::exactalg::QMatrix;

/// The integer `q` with `q^n = deg`.
pub fn q_from_degree(deg: &BigInt, n: u32) -> Result<BigInt, DynamicsError> {
    if !deg.is_positive() || n == 0 {
        return Err(DynamicsError::InvalidInput(format!("need deg >= 1 and n >= 1, got deg = {deg}, n = {n}")));
    }
    let q = deg.nth_root(n);
    if Pow::pow(&q, n) == *deg {
        Ok(q)
    } else {
        Err(DynamicsError::NoIntegerRoot { deg: deg.to_string(), n })
    }
}

/// Degree of the restriction to an invariant subvariety of dimension `dim_z`.
pub fn restricted_degree(q: &BigInt, dim_z: u32) -> BigInt {
    Pow::pow(q, dim_z)
}

/// `deg_f^dim_y == deg_g^dim_x`. A point base (`dim_y = 0`) passes with
/// `deg_g = 1`.
pub fn product_formula_check(dim_x: u32, deg_f: &BigInt, dim_y: u32, deg_g: &BigInt) -> bool {
    Pow::pow(deg_f, dim_y) == Pow::pow(deg_g, dim_x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbelianVerdict {
    Consistent,
    Contradiction,
}

/// Compares the two degree formulas for an invariant proper subvariety `Z`
/// of a variety on which restriction preserves the degree: `q^dim_z` against
/// `q^dim_x`. They disagree exactly when `q > 1`.
pub fn abelian_invariant_check(q: &BigInt, dim_x: u32, dim_z: u32) -> Result<AbelianVerdict, DynamicsError> {
    if !q.is_positive() || dim_x == 0 || dim_z >= dim_x {
        return Err(DynamicsError::InvalidInput(format!("need q >= 1 and dim_z < dim_x, got {q}, {dim_x}, {dim_z}")));
    }
    Ok(if restricted_degree(q, dim_z) == restricted_degree(q, dim_x) {
        AbelianVerdict::Consistent
    } else {
        AbelianVerdict::Contradiction
    })
}

/// `m_x p == p m_y` for an injective `p`.
pub fn verify_intertwining(m_x: &QMatrix, p: &QMatrix, m_y: &QMatrix) -> Result<bool, DynamicsError> {
    let (n, k) = (p.rows(), p.cols());
    if !m_x.is_square() || !m_y.is_square() || m_x.rows() != n || m_y.rows() != k {
        return Err(DynamicsError::ShapeMismatch(format!(
            "m_x {}x{}, p {n}x{k}, m_y {}x{}",
            m_x.rows(),
            m_x.cols(),
            m_y.rows(),
            m_y.cols()
        )));
    }
    if p.rank() != k {
        return Err(DynamicsError::RankDeficient);
    }
    Ok(m_x * p == p * m_y)
}

/// Degree of the endomorphism of `E^n` given by an integer matrix: `det(a)^2`.
pub fn deg_from_integer_matrix(a: &QMatrix) -> Result<BigInt, DynamicsError> {
    if !a.is_integral() {
        return Err(DynamicsError::InvalidInput("matrix must have integer entries".into()));
    }
    let d = a.det()?.to_integer();
    Ok(&d * &d)
}

/// `deg_f = q^dim_x`, kept consistent by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeLedger {
    pub dim_x: u32,
    pub deg_f: BigInt,
    pub q: BigInt,
}

impl DegreeLedger {
    pub fn from_q(q: BigInt, dim_x: u32) -> Self {
        DegreeLedger { deg_f: restricted_degree(&q, dim_x), dim_x, q }
    }

    pub fn from_degree(deg_f: BigInt, dim_x: u32) -> Result<Self, DynamicsError> {
        if dim_x == 0 {
            return if deg_f.is_one() {
                Ok(DegreeLedger { dim_x, deg_f, q: BigInt::one() })
            } else {
                Err(DynamicsError::InvalidInput("a point has degree 1".into()))
            };
        }
        let q = q_from_degree(&deg_f, dim_x)?;
        Ok(DegreeLedger { dim_x, deg_f, q })
    }

    pub fn is_consistent(&self) -> bool {
        restricted_degree(&self.q, self.dim_x) == self.deg_f
    }
}
