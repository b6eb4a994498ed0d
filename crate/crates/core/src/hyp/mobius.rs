use super::{HyperbolicPoint, IdealPoint};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;
use std::ops::Mul;

/// Orientation-preserving isometry z ↦ (az+b)/(cz+d), normalized to ad − bc = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusTransform {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl MobiusTransform {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::domain(format!(
                "matrix [[{a}, {b}], [{c}, {d}]] has determinant {det}; need a positive determinant"
            )));
        }
        let s = det.sqrt();
        Ok(Self {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub(crate) fn raw(a: f64, b: f64, c: f64, d: f64) -> Self {
        let det = a * d - b * c;
        debug_assert!(det > 0.0, "non-positive determinant {det}");
        let s = det.sqrt();
        Self {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        }
    }

    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// z ↦ z + b.
    pub fn translation(b: f64) -> Self {
        Self { a: 1.0, b, c: 0.0, d: 1.0 }
    }

    /// z ↦ e^s z, the hyperbolic translation of length s along the imaginary axis.
    pub fn axial(s: f64) -> Self {
        let h = (s / 2.0).exp();
        Self { a: h, b: 0.0, c: 0.0, d: 1.0 / h }
    }

    /// Counterclockwise rotation about i by `angle`.
    pub fn rotation_about_i(angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        Self { a: c, b: s, c: -s, d: c }
    }

    /// The isometry sending the ideal triple (p, q, r) to (∞, 0, 1).
    pub fn from_ideal_triple(p: IdealPoint, q: IdealPoint, r: IdealPoint) -> Result<Self> {
        let det = |x: (f64, f64), y: (f64, f64)| x.0 * y.1 - x.1 * y.0;
        let (pp, qq, rr) = (p.parts(), q.parts(), r.parts());
        let k1 = det(rr, pp);
        let k2 = det(rr, qq);
        let m = [qq.1 * k1, -qq.0 * k1, pp.1 * k2, -pp.0 * k2];
        let dm = m[0] * m[3] - m[1] * m[2];
        if !(dm > 1e-300) {
            return Err(Error::degenerate(
                "ideal triple is not positively ordered or has coincident points",
            ));
        }
        Ok(Self::raw(m[0], m[1], m[2], m[3]))
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub(crate) fn apply_c(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    pub fn apply(&self, p: HyperbolicPoint) -> Result<HyperbolicPoint> {
        let z = p.to_complex();
        let den = self.c * z + self.d;
        if den.norm() < 1e-300 {
            return Err(Error::degenerate("Möbius denominator vanishes"));
        }
        HyperbolicPoint::checked_from_c((self.a * z + self.b) / den)
    }

    /// Action on a point known to be valid; the image is in the half-plane up to rounding.
    pub(crate) fn map(&self, p: HyperbolicPoint) -> HyperbolicPoint {
        let w = self.apply_c(p.to_complex());
        HyperbolicPoint::from_c(Complex64::new(w.re, w.im.max(f64::MIN_POSITIVE)))
    }

    pub fn apply_ideal(&self, e: IdealPoint) -> IdealPoint {
        let (u, v) = e.parts();
        IdealPoint::homogeneous(self.a * u + self.b * v, self.c * u + self.d * v)
    }

    /// Complex derivative at z.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        1.0 / (den * den)
    }

    /// Translation length; zero for parabolic and elliptic elements.
    pub fn translation_length(&self) -> f64 {
        let t = self.trace().abs() / 2.0;
        if t > 1.0 {
            2.0 * t.acosh()
        } else {
            0.0
        }
    }

    /// Entrywise distance to `other` modulo the sign ambiguity of PSL(2,R).
    pub fn distance_to(&self, other: &Self) -> f64 {
        let e = self.entries();
        let f = other.entries();
        let plus = (0..4).map(|k| (e[k] - f[k]).abs()).fold(0.0, f64::max);
        let minus = (0..4).map(|k| (e[k] + f[k]).abs()).fold(0.0, f64::max);
        plus.min(minus)
    }
}

impl Mul for MobiusTransform {
    type Output = MobiusTransform;
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

/// A unit tangent vector, stored as the isometry taking (i, heading up) to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    m: MobiusTransform,
}

impl Frame {
    pub fn identity() -> Self {
        Self { m: MobiusTransform::identity() }
    }

    /// Frame at `p` with Euclidean heading angle `heading`.
    pub fn at(p: HyperbolicPoint, heading: f64) -> Self {
        let s = p.y().sqrt();
        let a = MobiusTransform { a: s, b: p.x() / s, c: 0.0, d: 1.0 / s };
        Self { m: a * MobiusTransform::rotation_about_i(heading - FRAC_PI_2) }
    }

    pub fn from_mobius(m: MobiusTransform) -> Self {
        Self { m }
    }

    pub fn mobius(&self) -> MobiusTransform {
        self.m
    }

    pub fn point(&self) -> HyperbolicPoint {
        self.m.map(HyperbolicPoint::i())
    }

    pub fn heading(&self) -> f64 {
        FRAC_PI_2 + self.m.derivative(Complex64::i()).arg()
    }

    /// Move forward along the geodesic by `s`.
    pub fn advance(&self, s: f64) -> Self {
        Self { m: self.m * MobiusTransform::axial(s) }
    }

    /// Rotate the heading counterclockwise by `angle`.
    pub fn turn(&self, angle: f64) -> Self {
        Self { m: self.m * MobiusTransform::rotation_about_i(angle) }
    }

    /// Ideal endpoint reached going forward.
    pub fn forward_endpoint(&self) -> IdealPoint {
        self.m.apply_ideal(IdealPoint::infinity())
    }

    /// Ideal endpoint reached going backward.
    pub fn backward_endpoint(&self) -> IdealPoint {
        self.m.apply_ideal(IdealPoint::real(0.0))
    }

    /// Coordinates of `p` in the frame's canonical picture.
    pub fn to_local(&self, p: HyperbolicPoint) -> Complex64 {
        self.m.inverse().apply_c(p.to_complex())
    }

    /// Frame image of a canonical tangent vector given by point and heading.
    pub fn from_local(&self, z: Complex64, heading: f64) -> Self {
        let local = Frame::at(HyperbolicPoint::from_c(z), heading);
        Self { m: self.m * local.m }
    }
}
