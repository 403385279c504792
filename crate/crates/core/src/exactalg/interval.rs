use std::ops::{Add, Mul, Sub};

use num_traits::{Signed, Zero};

use super::{rat_to_f64, Rat};

/// Closed rational interval `[lo, hi]`, possibly degenerate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        RatInterval { lo, hi }
    }

    pub fn point(x: Rat) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(2.into())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rat::zero())
    }

    pub fn intersect(&self, other: &RatInterval) -> Option<RatInterval> {
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        (lo <= hi).then(|| RatInterval::new(lo.clone(), hi.clone()))
    }

    /// Interval of `x^2` for `x` in `self`.
    pub fn square(&self) -> RatInterval {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        if self.contains_zero() {
            RatInterval::new(Rat::zero(), if a > b { a } else { b })
        } else if a < b {
            RatInterval::new(a, b)
        } else {
            RatInterval::new(b, a)
        }
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval::new(-&self.hi, -&self.lo)
    }

    pub fn abs_max(&self) -> Rat {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn approx(&self) -> f64 {
        rat_to_f64(&self.mid())
    }
}

impl Add for &RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }
}

impl Sub for &RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }
}

impl Mul for &RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: &RatInterval) -> RatInterval {
        let c = [&self.lo * &rhs.lo, &self.lo * &rhs.hi, &self.hi * &rhs.lo, &self.hi * &rhs.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RatInterval::new(lo, hi)
    }
}

/// Axis-parallel rectangle `[x0, x1] x [y0, y1]` in the complex plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rect {
    pub re: RatInterval,
    pub im: RatInterval,
}

impl Rect {
    pub fn new(x0: Rat, x1: Rat, y0: Rat, y1: Rat) -> Self {
        Rect { re: RatInterval::new(x0, x1), im: RatInterval::new(y0, y1) }
    }

    pub fn conjugate(&self) -> Rect {
        Rect { re: self.re.clone(), im: self.im.neg() }
    }

    /// Counter-clockwise corners starting at the lower-left one.
    pub fn corners(&self) -> [(Rat, Rat); 4] {
        [
            (self.re.lo.clone(), self.im.lo.clone()),
            (self.re.hi.clone(), self.im.lo.clone()),
            (self.re.hi.clone(), self.im.hi.clone()),
            (self.re.lo.clone(), self.im.hi.clone()),
        ]
    }

    pub fn max_width(&self) -> Rat {
        let a = self.re.width();
        let b = self.im.width();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Interval enclosing `|z|^2` over the rectangle.
    pub fn abs_squared(&self) -> RatInterval {
        &self.re.square() + &self.im.square()
    }
}
