use num_traits::Zero;

use super::{min_poly, ExactError, QMatrix, QPoly, Rat};

/// Spectral projector onto `ker(m - q)` along the other generalized
/// eigenspaces, for a rational eigenvalue `q` that is a simple root of the
/// minimal polynomial.
///
/// With `mu = (t - q) g`, the projector is `g(m) / g(q)`.
pub fn spectral_projector(m: &QMatrix, q: &Rat) -> Result<QMatrix, ExactError> {
    let mu = min_poly(m)?;
    if !mu.eval(q).is_zero() {
        return Err(ExactError::NotAnEigenvalue(q.clone()));
    }
    let g = mu.exact_div(&QPoly::linear_root(q));
    let gq = g.eval(q);
    if gq.is_zero() {
        return Err(ExactError::NonSemisimpleAtQ(q.clone()));
    }
    Ok(g.eval_matrix(m).scale(&(Rat::from_integer(1.into()) / gq)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    #[test]
    fn projector_is_idempotent_and_commutes() {
        let m = QMatrix::from_ints(&[&[2, 1], &[0, 3]]);
        let p = spectral_projector(&m, &int(3)).unwrap();
        assert_eq!(&p * &p, p);
        assert_eq!(&p * &m, &m * &p);
        assert_eq!(p.rank(), 1);
    }

    #[test]
    fn non_eigenvalue_and_jordan_block() {
        let m = QMatrix::from_ints(&[&[2, 1], &[0, 2]]);
        assert_eq!(spectral_projector(&m, &int(5)), Err(ExactError::NotAnEigenvalue(int(5))));
        assert_eq!(spectral_projector(&m, &int(2)), Err(ExactError::NonSemisimpleAtQ(int(2))));
    }
}
