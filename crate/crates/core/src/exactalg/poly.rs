use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{format_rat, Rat};
use crate::exactalg::QMatrix;

/// Univariate polynomial over the rationals, coefficients lowest degree first.
///
/// The representation is canonical: trailing zero coefficients are trimmed,
/// so the zero polynomial has no coefficients and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rat>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate `t`.
    pub fn x() -> Self {
        Self::new(vec![Rat::zero(), Rat::one()])
    }

    /// `t - r`.
    pub fn linear_root(r: &Rat) -> Self {
        Self::new(vec![-r.clone(), Rat::one()])
    }

    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(Rat::from_integer).collect())
    }

    /// Product of `(t - r)` over the given roots.
    pub fn from_roots(roots: &[Rat]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| &acc * &Self::linear_root(r))
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &QMatrix) -> QMatrix {
        let n = m.rows();
        let mut acc = QMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * m) + &QMatrix::identity(n).scale(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * Rat::from_integer(BigInt::from(k))).collect())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Leading coefficient scaled to one. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&(Rat::one() / lc)),
            None => Self::zero(),
        }
    }

    /// Positive rational multiple with coprime integer coefficients and
    /// positive leading coefficient.
    pub fn primitive(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => {
                let p = self.primitive_preserving_sign();
                if lc.is_negative() {
                    -&p
                } else {
                    p
                }
            }
        }
    }

    /// Like [`QPoly::primitive`] but only ever multiplies by a positive
    /// rational, so signs of values are preserved.
    pub fn primitive_preserving_sign(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rat::from_integer(lcm.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        Self::new(ints.into_iter().map(|c| Rat::from_integer(c / &g)).collect())
    }

    /// Integer coefficients of [`QPoly::primitive`].
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        self.primitive().coeffs.iter().map(|c| c.to_integer()).collect()
    }

    /// Euclidean division. Panics on division by the zero polynomial.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.div_rem(d).1
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn exact_div(&self, d: &QPoly) -> QPoly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "exact_div: nonzero remainder");
        q
    }

    pub fn divides(&self, other: &QPoly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).primitive_preserving_sign();
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, e: u32) -> QPoly {
        let mut acc = QPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `t -> -t`.
    pub fn reflect(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() }).collect())
    }

    /// Polynomial whose roots are the squares of the roots of `self`.
    pub fn graeffe(&self) -> QPoly {
        // p(t) = E(t^2) + t O(t^2)  =>  E(y)^2 - y O(y)^2 vanishes at y = root^2.
        let even = QPoly::new(self.coeffs.iter().step_by(2).cloned().collect());
        let odd = QPoly::new(self.coeffs.iter().skip(1).step_by(2).cloned().collect());
        &(&even * &even) - &(&QPoly::x() * &(&odd * &odd))
    }

    pub fn square_free_part(&self) -> QPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).primitive()
    }

    /// Yun's square-free decomposition: primitive square-free factors `s_i`
    /// with multiplicities `i`, pairwise coprime, such that
    /// `self = c * prod s_i^i` for a rational constant `c`. Constant
    /// factors are omitted.
    pub fn square_free_decomposition(&self) -> Vec<(QPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0);
        let mut c = df.exact_div(&a0);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.primitive(), i));
            }
            b = b.exact_div(&a);
            c = d.exact_div(&a);
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Sign of the polynomial as `t -> +infinity` (0 for the zero polynomial).
    pub fn sign_at_pos_infinity(&self) -> i32 {
        self.leading().map_or(0, super::sign)
    }

    pub fn sign_at_neg_infinity(&self) -> i32 {
        match self.degree() {
            None => 0,
            Some(d) => {
                let s = super::sign(self.leading().unwrap());
                if d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }

    /// Cauchy bound: every complex root has modulus strictly below the result.
    pub fn root_bound(&self) -> Rat {
        let lc = self.leading().expect("root bound of zero polynomial").abs();
        let m = self.coeffs[..self.coeffs.len() - 1].iter().map(|c| c.abs() / &lc).fold(Rat::zero(), |a, b| {
            if b > a {
                b
            } else {
                a
            }
        });
        m + Rat::one()
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = mag.is_one();
            match k {
                0 => write!(f, "{}", format_rat(&mag))?,
                _ => {
                    if !unit {
                        write!(f, "{}", format_rat(&mag))?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}
