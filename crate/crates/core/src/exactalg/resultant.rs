use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{QMatrix, QPoly, Rat};

/// Resultant of two nonzero polynomials as the determinant of their
/// Sylvester matrix.
pub fn resultant(p: &QPoly, q: &QPoly) -> Rat {
    let (Some(m), Some(n)) = (p.degree(), q.degree()) else {
        return Rat::zero();
    };
    if m == 0 && n == 0 {
        return Rat::one();
    }
    let size = m + n;
    let mut s = QMatrix::zeros(size, size);
    for i in 0..n {
        for (k, c) in p.coeffs().iter().rev().enumerate() {
            s.set(i, i + k, c.clone());
        }
    }
    for i in 0..m {
        for (k, c) in q.coeffs().iter().rev().enumerate() {
            s.set(n + i, i + k, c.clone());
        }
    }
    s.det().expect("Sylvester matrix is square")
}

/// Polynomial of degree `deg(p)^2` whose roots are all products
/// `a_i * a_j` of roots of `p` (with `p(0) != 0`).
///
/// Computed as `Res_x(p(x), x^d p(y/x))`, sampled at `d^2 + 1` integer
/// points of `y` and interpolated.
pub(crate) fn root_product_poly(p: &QPoly) -> QPoly {
    let d = p.degree().expect("nonzero polynomial");
    assert!(!p.coeff(0).is_zero(), "root_product_poly requires p(0) != 0");
    let samples: Vec<(Rat, Rat)> = (0..=d * d)
        .map(|k| {
            let y = Rat::from_integer(BigInt::from(k));
            // g_y(x) = sum_k c_k y^k x^(d-k)
            let mut ypow = Rat::one();
            let mut g = vec![Rat::zero(); d + 1];
            for (j, c) in p.coeffs().iter().enumerate() {
                g[d - j] = c * &ypow;
                ypow *= &y;
            }
            (y.clone(), resultant(p, &QPoly::new(g)))
        })
        .collect();
    interpolate(&samples)
}

/// Lagrange interpolation through distinct abscissae.
pub(crate) fn interpolate(points: &[(Rat, Rat)]) -> QPoly {
    let mut acc = QPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = QPoly::one();
        let mut denom = Rat::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                basis = &basis * &QPoly::linear_root(xj);
                denom *= xi - xj;
            }
        }
        acc = &acc + &basis.scale(&(yi / denom));
    }
    acc
}
