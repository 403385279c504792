use super::{sign, QPoly, Rat};

/// Generalized Sturm chain `f0, f1, -rem(f0, f1), ...`.
///
/// Remainders are rescaled by positive rationals to primitive integer form,
/// which keeps coefficient growth in check without changing any sign.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<QPoly>,
}

impl SturmChain {
    /// Classical chain `p, p', ...` for real-root counting.
    pub fn new(p: &QPoly) -> Self {
        Self::from_pair(p, &p.derivative())
    }

    pub fn from_pair(f0: &QPoly, f1: &QPoly) -> Self {
        let mut chain = vec![f0.clone()];
        if f1.is_zero() {
            return SturmChain { chain };
        }
        chain.push(f1.clone());
        loop {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push((-&r).primitive_preserving_sign());
        }
        SturmChain { chain }
    }

    pub fn head(&self) -> &QPoly {
        &self.chain[0]
    }

    fn count_variations(signs: impl Iterator<Item = i32>) -> usize {
        let mut last = 0;
        let mut v = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, x: &Rat) -> usize {
        Self::count_variations(self.chain.iter().map(|p| sign(&p.eval(x))))
    }

    pub fn variations_at_pos_infinity(&self) -> usize {
        Self::count_variations(self.chain.iter().map(QPoly::sign_at_pos_infinity))
    }

    pub fn variations_at_neg_infinity(&self) -> usize {
        Self::count_variations(self.chain.iter().map(QPoly::sign_at_neg_infinity))
    }

    /// Number of distinct real roots of the head polynomial in `(a, b]`.
    pub fn count_half_open(&self, a: &Rat, b: &Rat) -> usize {
        if a >= b {
            return 0;
        }
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Number of distinct real roots of the head polynomial in `[a, b]`.
    pub fn count_closed(&self, a: &Rat, b: &Rat) -> usize {
        if a > b {
            return 0;
        }
        let at_a = usize::from(self.chain[0].eval(a) == Rat::from_integer(0.into()));
        if a == b {
            return at_a;
        }
        self.count_half_open(a, b) + at_a
    }

    pub fn count_all(&self) -> usize {
        self.variations_at_neg_infinity().saturating_sub(self.variations_at_pos_infinity())
    }

    /// Cauchy index of `f1 / f0` over `(a, b)` for a chain built with
    /// [`SturmChain::from_pair`]; requires `f0(a) != 0` and `f0(b) != 0`.
    pub fn cauchy_index(&self, a: &Rat, b: &Rat) -> i64 {
        self.variations_at(a) as i64 - self.variations_at(b) as i64
    }
}
