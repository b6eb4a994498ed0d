//! Upper half-plane primitives: points, ideal points, isometries, frames,
//! equidistant curves and ray casting against piecewise boundaries.

mod curves;
mod mobius;
mod ray;

pub use curves::{BoundaryArc, EquidistantCurve, GeodesicLine, GeodesicSegment, SegmentEnd};
pub use mobius::{Frame, MobiusTransform};
pub use ray::{hyperbolic_circle, ray_boundary_intersection, EuclidArc, RayHit};
pub(crate) use curves::{fermi_coords, fermi_point};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// Default absolute tolerance for geometric invariant checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicPoint {
    x: f64,
    y: f64,
}

impl HyperbolicPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::domain(format!("non-finite point ({x}, {y})")));
        }
        if y <= 0.0 {
            return Err(Error::domain(format!("point ({x}, {y}) is not in the upper half-plane")));
        }
        Ok(Self { x, y })
    }

    /// The base point i.
    pub fn i() -> Self {
        Self { x: 0.0, y: 1.0 }
    }

    pub(crate) fn from_c(z: Complex64) -> Self {
        debug_assert!(z.im > 0.0, "point off the half-plane: {z}");
        Self { x: z.re, y: z.im }
    }

    pub(crate) fn checked_from_c(z: Complex64) -> Result<Self> {
        if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::degenerate(format!("image {z} left the upper half-plane")));
        }
        Ok(Self { x: z.re, y: z.im })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn distance(&self, other: &HyperbolicPoint) -> f64 {
        distance(*self, *other)
    }
}

/// Hyperbolic distance; the half-angle form avoids the cancellation of arccosh near 1.
pub fn distance(p: HyperbolicPoint, q: HyperbolicPoint) -> f64 {
    let d = (p.to_complex() - q.to_complex()).norm();
    2.0 * (d / (2.0 * (p.y * q.y).sqrt())).asinh()
}

/// A point of the boundary circle R ∪ {∞}, stored homogeneously as u/v.
#[derive(Debug, Clone, Copy)]
pub struct IdealPoint {
    u: f64,
    v: f64,
}

impl IdealPoint {
    pub fn real(x: f64) -> Self {
        Self::homogeneous(x, 1.0)
    }

    pub fn infinity() -> Self {
        Self { u: 1.0, v: 0.0 }
    }

    pub(crate) fn homogeneous(u: f64, v: f64) -> Self {
        let n = u.hypot(v);
        debug_assert!(n > 0.0);
        let (mut u, mut v) = (u / n, v / n);
        if v < 0.0 || (v == 0.0 && u < 0.0) {
            u = -u;
            v = -v;
        }
        Self { u, v }
    }

    pub(crate) fn parts(&self) -> (f64, f64) {
        (self.u, self.v)
    }

    pub fn is_infinity(&self) -> bool {
        self.v == 0.0
    }

    /// Real coordinate, or `None` at infinity.
    pub fn value(&self) -> Option<f64> {
        if self.is_infinity() {
            None
        } else {
            Some(self.u / self.v)
        }
    }

    /// Chordal distance on the boundary circle, for tolerance comparisons.
    pub fn chordal_distance(&self, other: &IdealPoint) -> f64 {
        (self.u * other.v - self.v * other.u).abs()
    }
}

impl PartialEq for IdealPoint {
    fn eq(&self, other: &Self) -> bool {
        self.u == other.u && self.v == other.v
    }
}

/// Direction angle at `p` of the geodesic heading to `q` (Euclidean angle from the x-axis).
pub fn direction_to(p: HyperbolicPoint, q: HyperbolicPoint) -> f64 {
    let w = Frame::at(p, FRAC_PI_2).to_local(q);
    let c = (w - Complex64::i()) / (w + Complex64::i());
    c.arg() + FRAC_PI_2
}

/// Direction angle at `p` of the geodesic ray heading to the ideal point `e`.
pub fn direction_to_ideal(p: HyperbolicPoint, e: IdealPoint) -> f64 {
    let local = Frame::at(p, FRAC_PI_2).mobius().inverse().apply_ideal(e);
    let (u, v) = local.parts();
    let c = Complex64::new(u, -v) / Complex64::new(u, v);
    c.arg() + FRAC_PI_2
}

/// Point reached by following the geodesic from `p` with heading `theta` for length `s`.
pub fn exp_map(p: HyperbolicPoint, theta: f64, s: f64) -> HyperbolicPoint {
    Frame::at(p, theta).advance(s).point()
}

/// Point at fraction `f` of the geodesic segment from `p` to `q`.
pub fn geodesic_point(p: HyperbolicPoint, q: HyperbolicPoint, f: f64) -> HyperbolicPoint {
    if f == 0.0 {
        return p;
    }
    exp_map(p, direction_to(p, q), f * distance(p, q))
}

/// Cayley transform z ↦ i(1−z)/(1+z) from the unit disc to the half-plane.
pub fn cayley_to_halfplane(z: Complex64) -> Result<HyperbolicPoint> {
    if (z + 1.0).norm() < 1e-300 {
        return Err(Error::domain("Cayley transform has a pole at -1"));
    }
    if !(z.norm() < 1.0) {
        return Err(Error::domain(format!("{z} is not inside the unit disc")));
    }
    HyperbolicPoint::checked_from_c(Complex64::i() * (1.0 - z) / (1.0 + z))
}

/// Inverse Cayley transform w ↦ (i−w)/(i+w).
pub fn halfplane_to_disc(p: HyperbolicPoint) -> Complex64 {
    let w = p.to_complex();
    (Complex64::i() - w) / (Complex64::i() + w)
}

/// Poincaré disc distance.
pub fn disc_distance(a: Complex64, b: Complex64) -> f64 {
    let num = (a - b).norm();
    let den = (1.0 - a * b.conj()).norm();
    2.0 * (num / den).atanh()
}

/// Karcher mean of a finite point set by Riemannian gradient descent.
pub fn karcher_mean(points: &[HyperbolicPoint], tol: f64) -> Result<HyperbolicPoint> {
    if points.is_empty() {
        return Err(Error::domain("Karcher mean of an empty set"));
    }
    let n = points.len() as f64;
    let mut b = HyperbolicPoint::from_c(
        points.iter().map(|p| p.to_complex()).sum::<Complex64>() / n,
    );
    for _ in 0..100_000 {
        let mut v = Complex64::new(0.0, 0.0);
        // transverse curvature d coth d bounds the Hessian; the unit step overshoots for spread-out sets
        let mut curv: f64 = 1.0;
        for p in points {
            let d = distance(b, *p);
            if d > 0.0 {
                v += Complex64::from_polar(d, direction_to(b, *p));
                curv = curv.max(d / d.tanh());
            }
        }
        v /= n;
        if v.norm() < tol {
            return Ok(b);
        }
        b = exp_map(b, v.arg(), v.norm() / curv);
    }
    Err(Error::degenerate("Karcher mean iteration did not converge"))
}

#[cfg(test)]
/// Wrap an angle into (−π, π].
pub(crate) fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::PI;
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn point() -> impl Strategy<Value = HyperbolicPoint> {
        (-4.0..4.0f64, 0.1..4.0f64).prop_map(|(x, y)| HyperbolicPoint::new(x, y).unwrap())
    }

    fn mobius() -> impl Strategy<Value = MobiusTransform> {
        (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64)
            .prop_filter("det well away from 0", |(a, b, c, d)| a * d - b * c > 0.25)
            .prop_map(|(a, b, c, d)| MobiusTransform::new(a, b, c, d).unwrap())
    }

    fn disc_point() -> impl Strategy<Value = Complex64> {
        (0.0..0.95f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    proptest! {
        #[test]
        fn mobius_preserves_distance(m in mobius(), p in point(), q in point()) {
            let d = distance(m.apply(p).unwrap(), m.apply(q).unwrap());
            prop_assert!((d - distance(p, q)).abs() < 1e-10, "{} vs {}", d, distance(p, q));
        }

        #[test]
        fn composition_is_the_matrix_product(m in mobius(), n in mobius(), k in mobius(), p in point()) {
            let lhs = (m * n) * k;
            let rhs = m * (n * k);
            for (x, y) in lhs.entries().iter().zip(rhs.entries()) {
                prop_assert!((x - y).abs() < 1e-12 * (1.0 + x.abs()));
            }
            let direct = m.apply(n.apply(p).unwrap()).unwrap();
            let composed = (m * n).apply(p).unwrap();
            prop_assert!(distance(direct, composed) < 1e-9);
        }

        #[test]
        fn triangle_inequality(p in point(), q in point(), r in point()) {
            prop_assert!(distance(p, r) <= distance(p, q) + distance(q, r) + 1e-12);
        }

        #[test]
        fn cayley_is_an_isometry(a in disc_point(), b in disc_point()) {
            let (p, q) = (cayley_to_halfplane(a).unwrap(), cayley_to_halfplane(b).unwrap());
            let (dd, dh) = (disc_distance(a, b), distance(p, q));
            prop_assert!((dd - dh).abs() < 1e-10, "{} vs {}", dd, dh);
            prop_assert!((halfplane_to_disc(p) - a).norm() < 1e-12);
        }
    }
}
