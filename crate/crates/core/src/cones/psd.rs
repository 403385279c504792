use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ConeOracle;
use crate::exactalg::{char_poly, QMatrix, Rat};

/// Cone of positive semidefinite symmetric `n x n` rational matrices.
///
/// Points are flattened upper triangles in row-major order, so off-diagonal
/// coordinates are the entries themselves: for `n = 2`, `(a, b, c)` stands
/// for `[[a, b], [b, c]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PsdCone {
    n: usize,
}

pub fn psd_cone_oracle(n: usize) -> PsdCone {
    assert!(n >= 1, "PSD cone needs n >= 1");
    PsdCone { n }
}

impl PsdCone {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn flatten(&self, m: &QMatrix) -> Vec<Rat> {
        let mut out = Vec::with_capacity(self.n * (self.n + 1) / 2);
        for i in 0..self.n {
            for j in i..self.n {
                out.push(m.get(i, j).clone());
            }
        }
        out
    }

    pub fn unflatten(&self, x: &[Rat]) -> QMatrix {
        assert_eq!(x.len(), self.n * (self.n + 1) / 2, "flattened length");
        let mut m = QMatrix::zeros(self.n, self.n);
        let mut k = 0;
        for i in 0..self.n {
            for j in i..self.n {
                m.set(i, j, x[k].clone());
                m.set(j, i, x[k].clone());
                k += 1;
            }
        }
        m
    }

    /// A symmetric matrix is PSD iff the coefficients of `det(tI - M)`
    /// alternate in sign weakly: all eigenvalues are real, and Descartes'
    /// rule then rules out negative ones.
    fn semidefinite(&self, m: &QMatrix) -> (bool, bool) {
        let p = char_poly(m).expect("square");
        let n = self.n;
        let psd = (0..=n).all(|k| {
            let c = p.coeff(k);
            if (n - k).is_multiple_of(2) {
                !c.is_negative()
            } else {
                !c.is_positive()
            }
        });
        (psd, psd && !p.coeff(0).is_zero())
    }
}

impl ConeOracle for PsdCone {
    fn ambient_dim(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    fn contains(&self, x: &[Rat]) -> bool {
        x.len() == self.ambient_dim() && self.semidefinite(&self.unflatten(x)).0
    }

    fn strictly_contains(&self, x: &[Rat]) -> bool {
        x.len() == self.ambient_dim() && self.semidefinite(&self.unflatten(x)).1
    }

    fn interior_sample(&self) -> Vec<Rat> {
        self.flatten(&QMatrix::identity(self.n))
    }

    /// Gram matrices `B^T B` with integer entries of `B` in `[-3, 3]`.
    fn battery(&self, count: usize, seed: u64) -> Vec<Vec<Rat>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let mut b = QMatrix::zeros(self.n, self.n);
                for i in 0..self.n {
                    for j in 0..self.n {
                        b.set(i, j, Rat::from_integer(rng.gen_range(-3..=3).into()));
                    }
                }
                self.flatten(&(&b.transpose() * &b))
            })
            .collect()
    }

    fn describe(&self) -> String {
        format!("positive semidefinite {}x{} symmetric matrices", self.n, self.n)
    }
}
