use super::{Frame, HyperbolicPoint, MobiusTransform};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// Rays longer than this are treated as escaping the region.
const MAX_RAY_LENGTH: f64 = 60.0;
/// Incidence angles below this are flagged as tangential.
const TANGENTIAL_ANGLE: f64 = 1e-6;

/// Euclidean circular arc (or segment) through start, mid and end.
#[derive(Debug, Clone, Copy)]
pub struct EuclidArc {
    pub start: Complex64,
    pub mid: Complex64,
    pub end: Complex64,
}

impl EuclidArc {
    pub fn new(start: HyperbolicPoint, mid: HyperbolicPoint, end: HyperbolicPoint) -> Self {
        Self {
            start: start.to_complex(),
            mid: mid.to_complex(),
            end: end.to_complex(),
        }
    }

    fn transformed(&self, m: &MobiusTransform) -> Self {
        Self {
            start: m.apply_c(self.start),
            mid: m.apply_c(self.mid),
            end: m.apply_c(self.end),
        }
    }

    /// Crossings with the ray {i·y : y > 1}, as (y, incidence angle).
    fn vertical_hits(&self) -> Vec<(f64, f64)> {
        let (a, m, b) = (self.start, self.mid, self.end);
        let cross = (m - a).re * (b - a).im - (m - a).im * (b - a).re;
        let scale = (m - a).norm() * (b - a).norm();
        let mut hits = Vec::new();
        if cross.abs() <= 1e-12 * scale {
            let dx = b.re - a.re;
            if dx.abs() < 1e-300 {
                return hits;
            }
            let s = -a.re / dx;
            if (-1e-12..=1.0 + 1e-12).contains(&s) {
                let y = a.im + s * (b.im - a.im);
                let angle = ((b - a).im.abs() / (b - a).norm()).min(1.0).acos();
                hits.push((y, angle));
            }
            return hits;
        }
        let c = circumcenter(a, m, b);
        let r = (a - c).norm();
        // crossing heights from the implicit form A|w|² + B·Re w + C·Im w = 0, w = z − a;
        // the circumcenter form loses ~r² ulps on nearly straight arcs
        let (w1, w2) = (m - a, b - a);
        let (q1, q2) = (w1.norm_sqr(), w2.norm_sqr());
        let ca = w1.re * w2.im - w1.im * w2.re;
        let cb = w1.im * q2 - q1 * w2.im;
        let cc = q1 * w2.re - w1.re * q2;
        let ce = ca * a.re * a.re - cb * a.re;
        let disc = cc * cc - 4.0 * ca * ce;
        if disc < 0.0 {
            return hits;
        }
        let q = -0.5 * (cc + cc.signum() * disc.sqrt());
        if q == 0.0 {
            return hits;
        }
        let ys = [a.im + q / ca, a.im + ce / q];
        let ta = (a - c).arg();
        let sweep_ab = ((b - c).arg() - ta).rem_euclid(TAU);
        let sweep_am = ((m - c).arg() - ta).rem_euclid(TAU);
        let ccw = sweep_am < sweep_ab;
        let sweep = if ccw { sweep_ab } else { TAU - sweep_ab };
        let tol = 1e-12 * sweep.max(1e-300) + 1e-14;
        let angle = (c.re.abs() / r).min(1.0).acos();
        for y in ys {
            let th = (Complex64::new(0.0, y) - c).arg();
            let mut s = if ccw { (th - ta).rem_euclid(TAU) } else { (ta - th).rem_euclid(TAU) };
            if s > TAU - tol {
                s -= TAU;
            }
            if s >= -tol && s <= sweep + tol {
                hits.push((y, angle));
            }
        }
        hits
    }
}

fn circumcenter(a: Complex64, b: Complex64, c: Complex64) -> Complex64 {
    let (bx, by) = (b.re - a.re, b.im - a.im);
    let (cx, cy) = (c.re - a.re, c.im - a.im);
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    a + Complex64::new((cy * b2 - by * c2) / d, (bx * c2 - cx * b2) / d)
}

/// First crossing of a geodesic ray with a piecewise boundary.
#[derive(Debug, Clone, Copy)]
pub struct RayHit {
    pub point: HyperbolicPoint,
    pub arclength: f64,
    /// Acute angle between the ray and the boundary piece, in (0, π/2].
    pub incidence: f64,
    pub piece: usize,
    pub tangential: bool,
}

/// Cast the geodesic ray from `origin` with heading `heading` against `boundary`.
pub fn ray_boundary_intersection(origin: HyperbolicPoint, heading: f64, boundary: &[EuclidArc]) -> Result<RayHit> {
    let frame = Frame::at(origin, heading);
    let inv = frame.mobius().inverse();
    let mut best: Option<(f64, f64, usize)> = None;
    for (k, arc) in boundary.iter().enumerate() {
        for (y, angle) in arc.transformed(&inv).vertical_hits() {
            if y > 1.0 && best.is_none_or(|(by, _, _)| y < by) {
                best = Some((y, angle, k));
            }
        }
    }
    let Some((y, incidence, piece)) = best else {
        return Err(Error::NotStarShaped(format!(
            "ray from ({}, {}) with heading {heading} meets no boundary piece",
            origin.x(),
            origin.y()
        )));
    };
    let arclength = y.ln();
    if arclength > MAX_RAY_LENGTH {
        return Err(Error::NotStarShaped(format!("first crossing at distance {arclength} exceeds the cap")));
    }
    Ok(RayHit {
        point: frame.mobius().map(HyperbolicPoint::from_c(Complex64::new(0.0, y))),
        arclength,
        incidence,
        piece,
        tangential: incidence < TANGENTIAL_ANGLE,
    })
}

/// The metric circle of radius `radius` about `center`, as two half arcs.
pub fn hyperbolic_circle(center: HyperbolicPoint, radius: f64) -> [EuclidArc; 2] {
    let cy = center.y() * radius.cosh();
    let r = center.y() * radius.sinh();
    let at = |t: f64| Complex64::new(center.x() + r * t.cos(), cy + r * t.sin());
    [
        EuclidArc { start: at(0.0), mid: at(PI / 2.0), end: at(PI) },
        EuclidArc { start: at(PI), mid: at(1.5 * PI), end: at(TAU) },
    ]
}
