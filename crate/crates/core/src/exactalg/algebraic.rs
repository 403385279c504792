//! Algebraic numbers as (minimal polynomial, isolating box) pairs.
//!
//! Real roots are isolated with Sturm chains. Non-real roots are isolated in
//! the upper half-plane by rectangle subdivision, counting roots inside a
//! rectangle exactly through the Cauchy index of `Im p / Re p` along its
//! boundary. Conjugates are obtained by reflection.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::interval::{RatInterval, Rect};
use super::resultant::root_product_poly;
use super::sturm::SturmChain;
use super::{format_rat, sign, ExactError, QPoly, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Locator {
    Rational(Rat),
    /// Open interval with nonzero polynomial values at both ends.
    Real(RatInterval),
    /// Non-real root of an irreducible quadratic: exact real part and a signed
    /// interval for the imaginary part.
    QuadPair {
        re: Rat,
        im: RatInterval,
    },
    /// Rectangle strictly above or strictly below the real axis.
    Rect(Rect),
}

/// A complex algebraic number: irreducible primitive minimal polynomial
/// together with a box containing exactly one of its roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraicNumber {
    minpoly: QPoly,
    loc: Locator,
}

impl AlgebraicNumber {
    pub fn from_rational(r: Rat) -> Self {
        AlgebraicNumber { minpoly: QPoly::linear_root(&r).primitive(), loc: Locator::Rational(r) }
    }

    pub fn minpoly(&self) -> &QPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(0)
    }

    pub fn is_real(&self) -> bool {
        matches!(self.loc, Locator::Rational(_) | Locator::Real(_))
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        match &self.loc {
            Locator::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn re_interval(&self) -> RatInterval {
        match &self.loc {
            Locator::Rational(r) => RatInterval::point(r.clone()),
            Locator::Real(iv) => iv.clone(),
            Locator::QuadPair { re, .. } => RatInterval::point(re.clone()),
            Locator::Rect(r) => r.re.clone(),
        }
    }

    pub fn im_interval(&self) -> RatInterval {
        match &self.loc {
            Locator::Rational(_) | Locator::Real(_) => RatInterval::point(Rat::zero()),
            Locator::QuadPair { im, .. } => im.clone(),
            Locator::Rect(r) => r.im.clone(),
        }
    }

    /// Sign of the imaginary part (the box never straddles the real axis).
    pub fn im_sign(&self) -> i32 {
        let im = self.im_interval();
        if im.lo.is_positive() {
            1
        } else if im.hi.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn conjugate(&self) -> Self {
        let loc = match &self.loc {
            Locator::QuadPair { re, im } => Locator::QuadPair { re: re.clone(), im: im.neg() },
            Locator::Rect(r) => Locator::Rect(r.conjugate()),
            other => other.clone(),
        };
        AlgebraicNumber { minpoly: self.minpoly.clone(), loc }
    }

    /// Returns a copy whose box is at most half as wide.
    pub fn refine(&self) -> Self {
        AlgebraicNumber { minpoly: self.minpoly.clone(), loc: refine_locator(&self.minpoly, &self.loc) }
    }

    /// Refines until both box sides are at most `width`.
    pub fn refine_to(&self, width: &Rat) -> Self {
        let mut a = self.clone();
        while &a.box_width() > width {
            a = a.refine();
        }
        a
    }

    fn box_width(&self) -> Rat {
        let w1 = self.re_interval().width();
        let w2 = self.im_interval().width();
        if w1 > w2 {
            w1
        } else {
            w2
        }
    }

    /// Floating-point approximation of the real and imaginary parts, for
    /// display only.
    pub fn approx(&self) -> (f64, f64) {
        let a = self.refine_to(&Rat::new(BigInt::one(), BigInt::one() << 40u32));
        (a.re_interval().approx(), a.im_interval().approx())
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", format_rat(r));
        }
        let (re, im) = self.approx();
        if self.is_real() {
            write!(f, "root of {} ~ {re:.9}", self.minpoly)
        } else {
            write!(f, "root of {} ~ {re:.9} {} {:.9}i", self.minpoly, if im < 0.0 { "-" } else { "+" }, im.abs())
        }
    }
}

/// Complete complex root set of `p` with multiplicities.
///
/// Multiplicities sum to the degree; non-real roots come in adjacent
/// conjugate pairs (lower half-plane first). Ordering is by real part, then
/// by absolute imaginary part.
pub fn roots_with_multiplicity(p: &QPoly) -> Result<Vec<(AlgebraicNumber, usize)>, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (s, mult) in p.square_free_decomposition() {
        let mut residual = s.clone();
        for loc in isolate_real(&s) {
            if let Some(r) = rational_root_in(&s, &loc) {
                residual = residual.exact_div(&QPoly::linear_root(&r));
                out.push((AlgebraicNumber::from_rational(r), mult));
            }
        }
        let residual = residual.primitive();
        for (factor, units) in irreducible_factors(&residual) {
            for unit in units {
                match unit {
                    Unit::Real(iv) => {
                        out.push((AlgebraicNumber { minpoly: factor.clone(), loc: Locator::Real(iv) }, mult))
                    }
                    Unit::Pair(loc) => {
                        let upper = AlgebraicNumber { minpoly: factor.clone(), loc };
                        out.push((upper.conjugate(), mult));
                        out.push((upper, mult));
                    }
                }
            }
        }
    }
    out.sort_by(|(a, _), (b, _)| root_order(a, b));
    Ok(out)
}

fn root_order(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Ordering {
    let key = |x: &AlgebraicNumber| {
        let re = x.re_interval().approx();
        let im = x.im_interval().approx();
        (re, im.abs(), im)
    };
    let (ka, kb) = (key(a), key(b));
    ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1)).then(ka.2.total_cmp(&kb.2))
}

/// Decides `|a| = q` exactly. Negative `q` never equals a modulus.
pub fn modulus_equals(a: &AlgebraicNumber, q: &Rat) -> bool {
    if q.is_negative() {
        return false;
    }
    abs_squared(a).equals_rational(&(q * q))
}

/// `|a|^2` as a real algebraic number.
///
/// For non-real roots of higher degree this uses the polynomial whose roots
/// are all pairwise products of roots of the minimal polynomial, obtained by
/// a resultant; `a * conj(a)` is one of them and is isolated by refining the
/// box of `a`.
pub fn abs_squared(a: &AlgebraicNumber) -> RealAlgebraic {
    match &a.loc {
        Locator::Rational(r) => RealAlgebraic::rational(r * r),
        Locator::QuadPair { .. } => {
            // Conjugate roots of an irreducible quadratic: product = c0 / c2.
            RealAlgebraic::rational(a.minpoly.coeff(0) / a.minpoly.coeff(2))
        }
        Locator::Rect(_) if a.degree() == 2 => RealAlgebraic::rational(a.minpoly.coeff(0) / a.minpoly.coeff(2)),
        Locator::Real(_) => {
            let q = a.minpoly.graeffe().square_free_part();
            isolate_value(a, q, |x| x.re_interval().square())
        }
        Locator::Rect(_) => {
            let q = root_product_poly(&a.minpoly).square_free_part();
            isolate_value(a, q, |x| match &x.loc {
                Locator::Rect(r) => r.abs_squared(),
                _ => unreachable!(),
            })
        }
    }
}

fn isolate_value(a: &AlgebraicNumber, poly: QPoly, enclose: impl Fn(&AlgebraicNumber) -> RatInterval) -> RealAlgebraic {
    let chain = SturmChain::new(&poly);
    let mut cur = a.clone();
    loop {
        let iv = enclose(&cur);
        if chain.count_closed(&iv.lo, &iv.hi) == 1 {
            return RealAlgebraic::from_isolating(poly, iv);
        }
        cur = cur.refine();
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum RealLoc {
    Exact(Rat),
    Interval(RatInterval),
}

/// Real algebraic number given by a square-free polynomial and a closed
/// interval containing exactly one of its roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RealAlgebraic {
    poly: QPoly,
    loc: RealLoc,
}

impl RealAlgebraic {
    pub fn rational(r: Rat) -> Self {
        RealAlgebraic { poly: QPoly::linear_root(&r).primitive(), loc: RealLoc::Exact(r) }
    }

    pub(crate) fn from_isolating(poly: QPoly, iv: RatInterval) -> Self {
        if iv.is_point() {
            return Self::rational(iv.lo);
        }
        if poly.eval(&iv.lo).is_zero() && SturmChain::new(&poly).count_closed(&iv.lo, &iv.hi) == 1 {
            return RealAlgebraic { poly, loc: RealLoc::Exact(iv.lo) };
        }
        if poly.eval(&iv.hi).is_zero() {
            return RealAlgebraic { poly, loc: RealLoc::Exact(iv.hi) };
        }
        RealAlgebraic { poly, loc: RealLoc::Interval(iv) }
    }

    pub fn defining_poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        match &self.loc {
            RealLoc::Exact(r) => Some(r),
            RealLoc::Interval(_) => None,
        }
    }

    pub fn interval(&self) -> RatInterval {
        match &self.loc {
            RealLoc::Exact(r) => RatInterval::point(r.clone()),
            RealLoc::Interval(iv) => iv.clone(),
        }
    }

    pub fn refine(&self) -> Self {
        let RealLoc::Interval(iv) = &self.loc else {
            return self.clone();
        };
        let m = iv.mid();
        if self.poly.eval(&m).is_zero() {
            return RealAlgebraic { poly: self.poly.clone(), loc: RealLoc::Exact(m) };
        }
        let chain = SturmChain::new(&self.poly);
        let next = if chain.count_closed(&iv.lo, &m) == 1 {
            RatInterval::new(iv.lo.clone(), m)
        } else {
            RatInterval::new(m, iv.hi.clone())
        };
        RealAlgebraic { poly: self.poly.clone(), loc: RealLoc::Interval(next) }
    }

    pub fn equals_rational(&self, r: &Rat) -> bool {
        match &self.loc {
            RealLoc::Exact(x) => x == r,
            RealLoc::Interval(iv) => iv.contains(r) && self.poly.eval(r).is_zero(),
        }
    }

    /// Exact equality: a common root of both defining polynomials inside the
    /// intersection of the isolating intervals.
    pub fn exact_eq(&self, other: &RealAlgebraic) -> bool {
        match (&self.loc, &other.loc) {
            (RealLoc::Exact(a), _) => other.equals_rational(a),
            (_, RealLoc::Exact(b)) => self.equals_rational(b),
            (RealLoc::Interval(a), RealLoc::Interval(b)) => {
                let Some(common) = a.intersect(b) else {
                    return false;
                };
                let g = self.poly.gcd(&other.poly);
                g.degree().unwrap_or(0) > 0 && SturmChain::new(&g).count_closed(&common.lo, &common.hi) > 0
            }
        }
    }

    pub fn exact_cmp(&self, other: &RealAlgebraic) -> Ordering {
        if self.exact_eq(other) {
            return Ordering::Equal;
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        loop {
            let (ia, ib) = (a.interval(), b.interval());
            if ia.hi < ib.lo {
                return Ordering::Less;
            }
            if ib.hi < ia.lo {
                return Ordering::Greater;
            }
            a = a.refine();
            b = b.refine();
        }
    }

    /// Exact rational square root when one exists.
    pub fn rational_sqrt(&self) -> Option<Rat> {
        let r = self.as_rational()?;
        if r.is_negative() {
            return None;
        }
        let n = r.numer().sqrt();
        let d = r.denom().sqrt();
        (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rat::new(n, d))
    }

    pub fn approx(&self) -> f64 {
        let mut a = self.clone();
        let eps = Rat::new(BigInt::one(), BigInt::one() << 40u32);
        while a.interval().width() > eps {
            a = a.refine();
        }
        a.interval().approx()
    }
}

impl fmt::Display for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.loc {
            RealLoc::Exact(r) => write!(f, "{}", format_rat(r)),
            RealLoc::Interval(_) => write!(f, "root of {} ~ {:.9}", self.poly, self.approx()),
        }
    }
}

// ---------------------------------------------------------------------------
// Isolation

fn power_of_two_above(x: &Rat) -> Rat {
    let mut b = Rat::one();
    while &b <= x {
        b *= Rat::from_integer(2.into());
    }
    b
}

/// Isolates all real roots of a square-free polynomial, ascending.
fn isolate_real(p: &QPoly) -> Vec<Locator> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let chain = SturmChain::new(p);
    if chain.count_all() == 0 {
        return Vec::new();
    }
    let b = power_of_two_above(&p.root_bound());
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match chain.count_half_open(&lo, &hi) {
            0 => {}
            1 => out.push(finalize_real(p, &chain, lo, hi)),
            _ => {
                let m = (&lo + &hi) / Rat::from_integer(2.into());
                stack.push((m.clone(), hi));
                stack.push((lo, m));
            }
        }
    }
    out.sort_by(|a, b| locator_lo(a).cmp(locator_lo(b)));
    out
}

fn locator_lo(l: &Locator) -> &Rat {
    match l {
        Locator::Rational(r) => r,
        Locator::Real(iv) => &iv.lo,
        _ => unreachable!("real locator expected"),
    }
}

/// Turns `(lo, hi]` holding one root into a locator with non-root endpoints.
fn finalize_real(p: &QPoly, chain: &SturmChain, mut lo: Rat, mut hi: Rat) -> Locator {
    if p.eval(&hi).is_zero() {
        return Locator::Rational(hi);
    }
    while p.eval(&lo).is_zero() {
        let m = (&lo + &hi) / Rat::from_integer(2.into());
        if p.eval(&m).is_zero() {
            return Locator::Rational(m);
        }
        if chain.count_half_open(&lo, &m) == 1 {
            hi = m;
        } else {
            lo = m;
        }
    }
    Locator::Real(RatInterval::new(lo, hi))
}

/// Rational root inside a real locator of a square-free polynomial, if any.
///
/// A rational root of a primitive integer polynomial with leading
/// coefficient `L` has the form `k / L`, so an interval narrower than `1/L`
/// contains at most one candidate.
fn rational_root_in(p: &QPoly, loc: &Locator) -> Option<Rat> {
    match loc {
        Locator::Rational(r) => Some(r.clone()),
        Locator::Real(iv) => {
            let prim = p.primitive();
            let lc = prim.leading().unwrap().clone();
            let step = Rat::one() / &lc;
            let mut cur = Locator::Real(iv.clone());
            loop {
                match &cur {
                    Locator::Rational(r) => return Some(r.clone()),
                    Locator::Real(iv) if iv.width() < step => {
                        let k = (&iv.lo * &lc).ceil();
                        let cand = k / &lc;
                        return (iv.contains(&cand) && prim.eval(&cand).is_zero()).then_some(cand);
                    }
                    _ => cur = refine_locator(&prim, &cur),
                }
            }
        }
        _ => None,
    }
}

/// Halves the box of a locator with respect to the polynomial `p`, which must
/// have exactly one root in it.
fn refine_locator(p: &QPoly, loc: &Locator) -> Locator {
    let two = Rat::from_integer(2.into());
    match loc {
        Locator::Rational(_) => loc.clone(),
        Locator::Real(iv) => {
            let m = iv.mid();
            let v = p.eval(&m);
            if v.is_zero() {
                return Locator::Rational(m);
            }
            if sign(&v) == sign(&p.eval(&iv.lo)) {
                Locator::Real(RatInterval::new(m, iv.hi.clone()))
            } else {
                Locator::Real(RatInterval::new(iv.lo.clone(), m))
            }
        }
        Locator::QuadPair { re, im } => {
            if im.is_point() {
                return loc.clone();
            }
            // Imaginary part y satisfies y^2 = (4ac - b^2) / (4a^2).
            let (a, b, c) = (p.coeff(2), p.coeff(1), p.coeff(0));
            let target = (Rat::from_integer(4.into()) * &a * &c - &b * &b) / (Rat::from_integer(4.into()) * &a * &a);
            let negative = im.hi.is_negative();
            let mag = if negative { im.neg() } else { im.clone() };
            let m = (&mag.lo + &mag.hi) / &two;
            let sq = &m * &m;
            let next = match sq.cmp(&target) {
                Ordering::Equal => RatInterval::point(m),
                Ordering::Less => RatInterval::new(m, mag.hi.clone()),
                Ordering::Greater => RatInterval::new(mag.lo.clone(), m),
            };
            Locator::QuadPair { re: re.clone(), im: if negative { next.neg() } else { next } }
        }
        Locator::Rect(r) => Locator::Rect(bisect_rect(p, r)),
    }
}

/// Isolates the non-real roots of an irreducible quadratic by closed form.
fn quadratic_pair(p: &QPoly) -> Locator {
    let (a, b, c) = (p.coeff(2), p.coeff(1), p.coeff(0));
    let four = Rat::from_integer(4.into());
    let re = -&b / (Rat::from_integer(2.into()) * &a);
    let target = (&four * &a * &c - &b * &b) / (&four * &a * &a);
    debug_assert!(target.is_positive());
    let mut loc = Locator::QuadPair { re, im: RatInterval::new(Rat::zero(), &target + Rat::one()) };
    loop {
        let Locator::QuadPair { im, .. } = &loc else { unreachable!() };
        if im.lo.is_positive() {
            return loc;
        }
        loc = refine_locator(p, &loc);
    }
}

/// Isolates the roots of a square-free polynomial in the open upper
/// half-plane.
fn isolate_upper(p: &QPoly, upper: usize) -> Vec<Rect> {
    if upper == 0 {
        return Vec::new();
    }
    let b = power_of_two_above(&p.root_bound());
    let mut h = &b / Rat::from_integer(2.into());
    let start = loop {
        let rect = Rect::new(-b.clone(), b.clone(), h.clone(), b.clone());
        match count_in_rect(p, &rect) {
            Some(c) if c == upper => break rect,
            Some(_) => h /= Rat::from_integer(4.into()),
            None => h *= Rat::new(3.into(), 5.into()),
        }
    };
    let mut out = Vec::new();
    let mut stack = vec![(start, upper)];
    while let Some((rect, count)) = stack.pop() {
        if count == 1 {
            out.push(rect);
            continue;
        }
        let children = split_rect(p, &rect);
        debug_assert_eq!(children.iter().map(|c| c.1).sum::<usize>(), count);
        stack.extend(children.into_iter().filter(|c| c.1 > 0));
    }
    out.sort_by(|a, b| a.re.lo.cmp(&b.re.lo).then(a.im.lo.cmp(&b.im.lo)));
    out
}

const SPLIT_FRACTIONS: [(i64, i64); 9] =
    [(1, 2), (7, 16), (9, 16), (3, 8), (5, 8), (13, 32), (19, 32), (11, 32), (21, 32)];

/// Splits a rectangle into four children with exact root counts, moving the
/// split lines off-center when a root would land on a child boundary.
fn split_rect(p: &QPoly, r: &Rect) -> Vec<(Rect, usize)> {
    let mut attempt = 0usize;
    loop {
        let (fx, fy) = if attempt < SPLIT_FRACTIONS.len() * SPLIT_FRACTIONS.len() {
            let (a, b) = SPLIT_FRACTIONS[attempt % SPLIT_FRACTIONS.len()];
            let (c, d) = SPLIT_FRACTIONS[(attempt / SPLIT_FRACTIONS.len() + attempt) % SPLIT_FRACTIONS.len()];
            (Rat::new(a.into(), b.into()), Rat::new(c.into(), d.into()))
        } else {
            let k = attempt as i64;
            (Rat::new((k + 1).into(), (2 * k + 3).into()), Rat::new((k + 2).into(), (2 * k + 5).into()))
        };
        attempt += 1;
        let xm = &r.re.lo + r.re.width() * &fx;
        let ym = &r.im.lo + r.im.width() * &fy;
        let children = [
            Rect::new(r.re.lo.clone(), xm.clone(), r.im.lo.clone(), ym.clone()),
            Rect::new(xm.clone(), r.re.hi.clone(), r.im.lo.clone(), ym.clone()),
            Rect::new(r.re.lo.clone(), xm.clone(), ym.clone(), r.im.hi.clone()),
            Rect::new(xm, r.re.hi.clone(), ym, r.im.hi.clone()),
        ];
        let counts: Option<Vec<usize>> = children.iter().map(|c| count_in_rect(p, c)).collect();
        if let Some(counts) = counts {
            return children.into_iter().zip(counts).collect();
        }
    }
}

/// Halves the longer side of a rectangle holding exactly one root and keeps
/// the half that holds it. Only one child needs counting.
fn bisect_rect(p: &QPoly, r: &Rect) -> Rect {
    let along_re = r.re.width() >= r.im.width();
    for (a, b) in SPLIT_FRACTIONS {
        let f = Rat::new(a.into(), b.into());
        let (first, second) = if along_re {
            let xm = &r.re.lo + r.re.width() * &f;
            (
                Rect::new(r.re.lo.clone(), xm.clone(), r.im.lo.clone(), r.im.hi.clone()),
                Rect::new(xm, r.re.hi.clone(), r.im.lo.clone(), r.im.hi.clone()),
            )
        } else {
            let ym = &r.im.lo + r.im.width() * &f;
            (
                Rect::new(r.re.lo.clone(), r.re.hi.clone(), r.im.lo.clone(), ym.clone()),
                Rect::new(r.re.lo.clone(), r.re.hi.clone(), ym, r.im.hi.clone()),
            )
        };
        match count_in_rect(p, &first) {
            Some(1) => return first,
            Some(_) => return second,
            None => continue,
        }
    }
    unreachable!("a single root cannot lie on nine distinct split lines")
}

/// Real and imaginary parts of `p(a + t (b - a))` as polynomials in `t`.
fn edge_polys(p: &QPoly, a: &(Rat, Rat), b: &(Rat, Rat)) -> (QPoly, QPoly) {
    let zr = QPoly::new(vec![a.0.clone(), &b.0 - &a.0]);
    let zi = QPoly::new(vec![a.1.clone(), &b.1 - &a.1]);
    let (mut re, mut im) = (QPoly::zero(), QPoly::zero());
    for c in p.coeffs().iter().rev() {
        let nr = &(&re * &zr) - &(&im * &zi);
        let ni = &(&re * &zi) + &(&im * &zr);
        re = &nr + &QPoly::constant(c.clone());
        im = ni;
    }
    (re, im)
}

fn eval_complex(p: &QPoly, z: &(Rat, Rat)) -> (Rat, Rat) {
    let (mut re, mut im) = (Rat::zero(), Rat::zero());
    for c in p.coeffs().iter().rev() {
        let nr = &re * &z.0 - &im * &z.1 + c;
        let ni = &re * &z.1 + &im * &z.0;
        re = nr;
        im = ni;
    }
    (re, im)
}

/// Exact number of roots of `p` strictly inside the rectangle, or `None` if
/// a root lies on its boundary.
///
/// Along a closed counter-clockwise path avoiding the zeros of `p`, the
/// winding number equals `-1/2` times the Cauchy index of `Im p / Re p`,
/// provided `Re p` does not vanish at the corners; a constant rotation of
/// `p` arranges the latter.
fn count_in_rect(p: &QPoly, rect: &Rect) -> Option<usize> {
    let corners = rect.corners();
    let values: Vec<(Rat, Rat)> = corners.iter().map(|z| eval_complex(p, z)).collect();
    if values.iter().any(|(x, y)| x.is_zero() && y.is_zero()) {
        return None;
    }
    let edges: Vec<(QPoly, QPoly)> = (0..4).map(|k| edge_polys(p, &corners[k], &corners[(k + 1) % 4])).collect();
    let zero = Rat::zero();
    let one = Rat::one();
    for (re, im) in &edges {
        let g = re.gcd(im);
        if g.degree().unwrap_or(0) > 0 && SturmChain::new(&g).count_closed(&zero, &one) > 0 {
            return None;
        }
    }
    const ROTATIONS: [(i64, i64); 6] = [(1, 0), (1, 1), (1, 2), (2, 1), (1, -1), (0, 1)];
    let (cr, ci) = ROTATIONS
        .iter()
        .map(|&(a, b)| (Rat::from_integer(a.into()), Rat::from_integer(b.into())))
        .find(|(cr, ci)| values.iter().all(|(x, y)| !(cr * x - ci * y).is_zero()))
        .expect("one of six rotation directions avoids four corner values");
    let mut index = 0i64;
    for (re, im) in &edges {
        let rot_re = &re.scale(&cr) - &im.scale(&ci);
        let rot_im = &im.scale(&cr) + &re.scale(&ci);
        index += SturmChain::from_pair(&rot_re, &rot_im).cauchy_index(&zero, &one);
    }
    debug_assert!(index % 2 == 0 && index <= 0, "winding index {index}");
    Some((-index / 2) as usize)
}

// ---------------------------------------------------------------------------
// Irreducible factors

#[derive(Debug, Clone)]
enum Unit {
    Real(RatInterval),
    /// Upper-half-plane representative of a conjugate pair.
    Pair(Locator),
}

impl Unit {
    fn degree(&self) -> usize {
        match self {
            Unit::Real(_) => 1,
            Unit::Pair(_) => 2,
        }
    }

    fn refine(&mut self, p: &QPoly) {
        match self {
            Unit::Real(iv) => match refine_locator(p, &Locator::Real(iv.clone())) {
                Locator::Real(next) => *iv = next,
                _ => unreachable!("no rational roots remain"),
            },
            Unit::Pair(loc) => *loc = refine_locator(p, loc),
        }
    }

    /// Interval coefficients of `(t - b)` or `(t - b)(t - conj b)`.
    fn factor_intervals(&self) -> Vec<RatInterval> {
        let one = RatInterval::point(Rat::one());
        match self {
            Unit::Real(iv) => vec![iv.neg(), one],
            Unit::Pair(Locator::Rect(r)) => {
                let two = RatInterval::point(Rat::from_integer(2.into()));
                vec![r.abs_squared(), (&two * &r.re).neg(), one]
            }
            Unit::Pair(_) => unreachable!("pairs are rectangles during factor search"),
        }
    }
}

/// Splits a primitive square-free polynomial without rational roots into
/// irreducible factors, each paired with the isolated roots it owns.
fn irreducible_factors(r: &QPoly) -> Vec<(QPoly, Vec<Unit>)> {
    let Some(deg) = r.degree() else { return Vec::new() };
    if deg == 0 {
        return Vec::new();
    }
    if deg == 2 && SturmChain::new(r).count_all() == 0 {
        return vec![(r.clone(), vec![Unit::Pair(quadratic_pair(r))])];
    }
    let real: Vec<Unit> = isolate_real(r)
        .into_iter()
        .map(|l| match l {
            Locator::Real(iv) => Unit::Real(iv),
            _ => unreachable!("rational roots were stripped"),
        })
        .collect();
    let upper = (deg - real.len()) / 2;
    let mut units = real;
    units.extend(isolate_upper(r, upper).into_iter().map(|rc| Unit::Pair(Locator::Rect(rc))));
    if deg <= 3 {
        return vec![(r.clone(), units)];
    }

    let mut remaining = r.clone();
    let mut factors = Vec::new();
    loop {
        let total: usize = units.iter().map(Unit::degree).sum();
        if total <= 3 {
            factors.push((remaining.primitive(), units));
            break;
        }
        match smallest_factor(&remaining, &mut units, r) {
            Some((g, chosen)) => {
                let mut picked = Vec::new();
                let mut rest = Vec::new();
                for (i, u) in units.into_iter().enumerate() {
                    if chosen.contains(&i) {
                        picked.push(u);
                    } else {
                        rest.push(u);
                    }
                }
                remaining = remaining.exact_div(&g).primitive();
                factors.push((g, picked));
                units = rest;
            }
            None => {
                factors.push((remaining.primitive(), units));
                break;
            }
        }
    }
    factors
}

/// Searches subsets of root units by increasing degree for an integer
/// factor of `remaining`; the first hit has minimal degree and is therefore
/// irreducible.
fn smallest_factor(remaining: &QPoly, units: &mut [Unit], refine_poly: &QPoly) -> Option<(QPoly, Vec<usize>)> {
    let total: usize = units.iter().map(Unit::degree).sum();
    let n = units.len();
    let lc = remaining.primitive().leading().unwrap().clone();
    let mut subsets: Vec<u32> = (1u32..(1 << n) - 1).collect();
    let degree_of = |mask: u32, units: &[Unit]| -> usize {
        (0..n).filter(|i| mask & (1 << i) != 0).map(|i| units[i].degree()).sum()
    };
    subsets.retain(|&m| degree_of(m, units) <= total / 2);
    subsets.sort_by_key(|&m| (degree_of(m, units), m));
    for mask in subsets {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if let Some(g) = integer_factor_from_units(remaining, &lc, units, &idx, refine_poly) {
            return Some((g, idx));
        }
    }
    None
}

fn integer_factor_from_units(
    remaining: &QPoly,
    lc: &Rat,
    units: &mut [Unit],
    idx: &[usize],
    refine_poly: &QPoly,
) -> Option<QPoly> {
    let lc_iv = RatInterval::point(lc.clone());
    loop {
        let mut coeffs = vec![lc_iv.clone()];
        for &i in idx {
            coeffs = interval_poly_mul(&coeffs, &units[i].factor_intervals());
        }
        let mut ints = Vec::with_capacity(coeffs.len());
        let mut all_narrow = true;
        for c in &coeffs {
            let k = c.lo.ceil();
            if k > c.hi {
                return None;
            }
            if c.width() >= Rat::one() {
                all_narrow = false;
            }
            ints.push(k.to_integer());
        }
        if all_narrow {
            let g = QPoly::from_bigints(&ints).primitive();
            return g.divides(remaining).then_some(g);
        }
        for &i in idx {
            units[i].refine(refine_poly);
        }
    }
}

fn interval_poly_mul(a: &[RatInterval], b: &[RatInterval]) -> Vec<RatInterval> {
    let mut out = vec![RatInterval::point(Rat::zero()); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}
