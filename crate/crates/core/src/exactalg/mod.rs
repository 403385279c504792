//! Exact rational linear algebra and algebraic-number kernel.
//!
//! Every verdict produced by this crate is computed here without floating
//! point: polynomials and matrices carry [`Rat`] entries, eigenvalues are
//! [`AlgebraicNumber`]s (minimal polynomial plus an isolating box), and
//! modulus comparisons go through exact resultant-based zero tests.

mod algebraic;
mod interval;
mod matrix;
mod poly;
mod resultant;
mod spectral;
mod sturm;

pub use algebraic::{abs_squared, modulus_equals, roots_with_multiplicity, AlgebraicNumber, RealAlgebraic};
pub use interval::{RatInterval, Rect};
pub use matrix::{char_poly, min_poly, QMatrix};
pub use poly::QPoly;
pub use resultant::resultant;
pub use spectral::spectral_projector;
pub use sturm::SturmChain;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("the zero polynomial has no finite root set")]
    ZeroPolynomial,
    #[error("{0} is not an eigenvalue")]
    NotAnEigenvalue(Rat),
    #[error("eigenvalue {0} has a nontrivial Jordan block")]
    NonSemisimpleAtQ(Rat),
    #[error("matrix is singular")]
    Singular,
}

/// `n` as a rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n / d` as a rational. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"n"` or `"p/q"` (optionally signed, surrounding whitespace allowed).
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rat::new(num, den))
}

/// Canonical text form: `"n"` for integers, `"p/q"` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy conversion for display and diagnostics only.
pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge operands: shift both down to a common scale first.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Scales a nonzero rational vector by a positive rational so that its entries
/// are coprime integers. The zero vector is returned unchanged.
pub fn primitive_vector(v: &[Rat]) -> Vec<Rat> {
    use num_integer::Integer;
    if v.iter().all(Zero::is_zero) {
        return v.to_vec();
    }
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(lcm.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    ints.into_iter().map(|x| Rat::from_integer(x / &g)).collect()
}

/// Standard inner product.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Sign as -1, 0 or 1.
pub fn sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}
