use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{format_rat, ExactError, QPoly, Rat};

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Result<Self, ExactError> {
        if data.len() != rows * cols {
            return Err(ExactError::ShapeMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(QMatrix { rows, cols, data })
    }

    /// Builds from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, ExactError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ExactError::ShapeMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor for small integer literals. Panics on ragged input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Self::from_rows(
            rows.iter().map(|r| r.as_ref().iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect()).collect(),
        )
        .expect("ragged integer matrix literal")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rat>]) -> Result<Self, ExactError> {
        let n = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != n) {
            return Err(ExactError::ShapeMismatch("columns of unequal length".into()));
        }
        let mut m = Self::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![Rat::one(); n])
    }

    pub fn diagonal(d: &[Rat]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rat] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Rat> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, c: &Rat) -> Self {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(Rat::is_integer)
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).fold(Rat::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols, "mul_vec: dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols].iter().zip(v).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn checked_mul(&self, rhs: &QMatrix) -> Result<QMatrix, ExactError> {
        if self.cols != rhs.rows {
            return Err(ExactError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self * rhs)
    }

    fn require_square(&self) -> Result<usize, ExactError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(ExactError::NonSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = Rat::one() / m.get(r, c);
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in c..m.cols {
                        let v = m.get(i, j) - &f * m.get(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> Result<Rat, ExactError> {
        let n = self.require_square()?;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Rat::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) / &piv;
                for j in c..n {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<QMatrix, ExactError> {
        let n = self.require_square()?;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rat::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(ExactError::Singular);
        }
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, e: i64) -> Result<QMatrix, ExactError> {
        let n = self.require_square()?;
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = QMatrix::identity(n);
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Largest absolute entry.
    pub fn max_abs_entry(&self) -> Rat {
        use num_traits::Signed;
        self.data.iter().map(Signed::abs).fold(Rat::zero(), |a, b| if b > a { b } else { a })
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", format_rat(self.get(i, j)))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product: shape mismatch");
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "matrix sum: shape mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "matrix difference: shape mismatch");
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// `det(tI - m)`, computed with the Faddeev-LeVerrier recurrence.
pub fn char_poly(m: &QMatrix) -> Result<QPoly, ExactError> {
    let n = m.require_square()?;
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let id = QMatrix::identity(n);
    let mut aux = QMatrix::zeros(n, n);
    for k in 1..=n {
        aux = &(m * &aux) + &id.scale(&coeffs[n - k + 1]);
        let am = m * &aux;
        coeffs[n - k] = -am.trace() / Rat::from_integer(BigInt::from(k));
    }
    Ok(QPoly::new(coeffs))
}

/// Monic annihilating polynomial of least degree, found as the first linear
/// dependency among `I, m, m^2, ...`.
pub fn min_poly(m: &QMatrix) -> Result<QPoly, ExactError> {
    let n = m.require_square()?;
    if n == 0 {
        return Ok(QPoly::one());
    }
    let mut powers = vec![QMatrix::identity(n)];
    loop {
        let k = powers.len();
        let next = m * powers.last().unwrap();
        // Solve sum_{i<k} c_i m^i = -m^k over the flattened entries.
        let cols: Vec<Vec<Rat>> = powers.iter().map(|p| p.entries().to_vec()).collect();
        let mut aug = QMatrix::zeros(n * n, k + 1);
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                aug.set(i, j, x.clone());
            }
        }
        for (i, x) in next.entries().iter().enumerate() {
            aug.set(i, k, -x.clone());
        }
        let (r, pivots) = aug.rref();
        if !pivots.contains(&k) {
            let mut coeffs = vec![Rat::zero(); k + 1];
            for (row, &p) in pivots.iter().enumerate() {
                coeffs[p] = r.get(row, k).clone();
            }
            coeffs[k] = Rat::one();
            return Ok(QPoly::new(coeffs));
        }
        powers.push(next);
    }
}
