//! Euclidean distance to a polyhedral cone by Dykstra's alternating
//! projections. Floating point, diagnostic only.

use super::{ConeError, Membership, PolyhedralCone};
use crate::exactalg::{rat_to_f64, Rat};

const MAX_CYCLES: usize = 200_000;

enum Piece {
    HalfSpace(Vec<f64>),
    Span(Vec<Vec<f64>>),
}

impl Piece {
    fn project(&self, y: &[f64]) -> Vec<f64> {
        match self {
            Piece::HalfSpace(a) => {
                let t = dot(a, y);
                if t >= 0.0 {
                    y.to_vec()
                } else {
                    y.iter().zip(a).map(|(yi, ai)| yi - t * ai).collect()
                }
            }
            Piece::Span(basis) => {
                let mut out = vec![0.0; y.len()];
                for b in basis {
                    let t = dot(b, y);
                    for (o, bi) in out.iter_mut().zip(b) {
                        *o += t * bi;
                    }
                }
                out
            }
        }
    }

    fn violation(&self, x: &[f64]) -> f64 {
        match self {
            Piece::HalfSpace(a) => (-dot(a, x)).max(0.0),
            Piece::Span(_) => norm(&sub(x, &self.project(x))),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn to_f64(v: &[Rat]) -> Vec<f64> {
    v.iter().map(rat_to_f64).collect()
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = norm(&v);
    v.into_iter().map(|x| x / n).collect()
}

/// Distance from `x` to the cone, within absolute tolerance `tol`.
///
/// Points of the cone get an exact `0.0` from the membership test. Otherwise
/// the projection is approximated by cycling through the facet half-spaces
/// (and the span, for lower-dimensional cones) with Dykstra's corrections.
pub fn distance_point_to_cone(c: &PolyhedralCone, x: &[Rat], tol: f64) -> Result<f64, ConeError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(ConeError::InvalidTolerance);
    }
    if c.membership(x)? != Membership::Outside {
        return Ok(0.0);
    }
    let mut pieces: Vec<Piece> = c.facet_normals().iter().map(|a| Piece::HalfSpace(unit(to_f64(a)))).collect();
    if !c.is_full_dimensional() {
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for b in c.span_basis() {
            let mut v = to_f64(b);
            for u in &basis {
                let t = dot(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= t * ui;
                }
            }
            basis.push(unit(v));
        }
        pieces.push(Piece::Span(basis));
    }

    let point = to_f64(x);
    let mut cur = point.clone();
    let mut increments = vec![vec![0.0; point.len()]; pieces.len()];
    let mut best = norm(&point);
    for _ in 0..MAX_CYCLES {
        let before = cur.clone();
        for (piece, inc) in pieces.iter().zip(increments.iter_mut()) {
            let y: Vec<f64> = cur.iter().zip(inc.iter()).map(|(a, b)| a + b).collect();
            let p = piece.project(&y);
            *inc = sub(&y, &p);
            cur = p;
        }
        let worst = pieces.iter().map(|p| p.violation(&cur)).fold(0.0, f64::max);
        let d = norm(&sub(&point, &cur));
        if worst <= tol * 1e-3 {
            best = best.min(d);
        }
        if norm(&sub(&cur, &before)) <= tol * 1e-3 && worst <= tol * 1e-3 {
            return Ok(d);
        }
    }
    Err(ConeError::NonConvergence { best })
}
