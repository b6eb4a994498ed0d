use super::{direction_to, direction_to_ideal, distance, EuclidArc, Frame, HyperbolicPoint, IdealPoint, MobiusTransform};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Complete oriented geodesic between two ideal points.
#[derive(Debug, Clone, Copy)]
pub struct GeodesicLine {
    pub from: IdealPoint,
    pub to: IdealPoint,
}

impl GeodesicLine {
    pub fn new(from: IdealPoint, to: IdealPoint) -> Result<Self> {
        if from.chordal_distance(&to) < 1e-15 {
            return Err(Error::domain("geodesic endpoints coincide"));
        }
        Ok(Self { from, to })
    }

    pub fn through_frame(f: &Frame) -> Self {
        Self {
            from: f.backward_endpoint(),
            to: f.forward_endpoint(),
        }
    }

    /// Isometry sending `from` to 0 and `to` to ∞.
    pub fn normalizer(&self) -> MobiusTransform {
        let (a1, a2) = self.from.parts();
        let (b1, b2) = self.to.parts();
        let s = if a1 * b2 - a2 * b1 >= 0.0 { 1.0 } else { -1.0 };
        MobiusTransform::raw(a2, -a1, s * b2, -s * b1)
    }

    /// Signed distance from the line, positive on the left.
    pub fn signed_distance(&self, p: HyperbolicPoint) -> f64 {
        let w = self.normalizer().apply_c(p.to_complex());
        (-w.re / w.im).asinh()
    }

    pub fn reflect(&self, p: HyperbolicPoint) -> HyperbolicPoint {
        let n = self.normalizer();
        let w = n.apply_c(p.to_complex());
        n.inverse().map(HyperbolicPoint::from_c(Complex64::new(-w.re, w.im)))
    }

    /// Intersection point of two lines, if they cross.
    pub fn intersect(&self, other: &GeodesicLine) -> Option<HyperbolicPoint> {
        let n = self.normalizer();
        let p = n.apply_ideal(other.from).value()?;
        let q = n.apply_ideal(other.to).value()?;
        if p * q >= 0.0 {
            return None;
        }
        let y = (-p * q).sqrt();
        Some(n.inverse().map(HyperbolicPoint::from_c(Complex64::new(0.0, y))))
    }
}

/// Endpoint of a geodesic segment: an ordinary point or an ideal point.
#[derive(Debug, Clone, Copy)]
pub enum SegmentEnd {
    Finite(HyperbolicPoint),
    Ideal(IdealPoint),
}

/// Geodesic segment, ray or complete geodesic, parametrized by arclength from a finite start.
#[derive(Debug, Clone, Copy)]
pub struct GeodesicSegment {
    pub start: SegmentEnd,
    pub end: SegmentEnd,
}

impl GeodesicSegment {
    pub fn new(start: SegmentEnd, end: SegmentEnd) -> Result<Self> {
        let distinct = match (start, end) {
            (SegmentEnd::Finite(p), SegmentEnd::Finite(q)) => distance(p, q) > 0.0,
            (SegmentEnd::Ideal(a), SegmentEnd::Ideal(b)) => a.chordal_distance(&b) > 1e-15,
            _ => true,
        };
        if !distinct {
            return Err(Error::domain("segment endpoints coincide"));
        }
        Ok(Self { start, end })
    }

    pub fn length(&self) -> f64 {
        match (self.start, self.end) {
            (SegmentEnd::Finite(p), SegmentEnd::Finite(q)) => distance(p, q),
            _ => f64::INFINITY,
        }
    }

    /// Frame at the finite start heading to the end.
    pub fn start_frame(&self) -> Result<Frame> {
        let SegmentEnd::Finite(p) = self.start else {
            return Err(Error::domain("segment starts at an ideal point"));
        };
        let heading = match self.end {
            SegmentEnd::Finite(q) => direction_to(p, q),
            SegmentEnd::Ideal(e) => direction_to_ideal(p, e),
        };
        Ok(Frame::at(p, heading))
    }

    pub fn point_at(&self, s: f64) -> Result<HyperbolicPoint> {
        if s < 0.0 || s > self.length() {
            return Err(Error::domain(format!("arclength {s} outside the segment")));
        }
        Ok(self.start_frame()?.advance(s).point())
    }

    pub fn line(&self) -> Result<GeodesicLine> {
        match (self.start, self.end) {
            (SegmentEnd::Ideal(a), SegmentEnd::Ideal(b)) => GeodesicLine::new(a, b),
            _ => Ok(GeodesicLine::through_frame(&self.start_frame()?)),
        }
    }
}

/// Fermi chart point at signed distance `rho` (left positive) and foot position `x`.
pub(crate) fn fermi_point(frame: &Frame, rho: f64, x: f64) -> HyperbolicPoint {
    let local = Complex64::new(-rho.tanh(), 1.0 / rho.cosh()) * x.exp();
    frame.mobius().map(HyperbolicPoint::from_c(local))
}

/// Fermi coordinates (rho, x) of a point relative to a frame's geodesic.
pub(crate) fn fermi_coords(frame: &Frame, p: HyperbolicPoint) -> (f64, f64) {
    let w = frame.to_local(p);
    ((-w.re / w.im).asinh(), w.norm().ln())
}

/// Curves at constant distance from a geodesic, or horocycles.
#[derive(Debug, Clone, Copy)]
pub enum EquidistantCurve {
    /// The geodesic through the frame, parametrized by arclength.
    Geodesic { frame: Frame },
    /// Points at signed distance `distance` (left positive), parametrized by foot arclength.
    Hypercycle { frame: Frame, distance: f64 },
    /// Image of the line Im z = `height` under `chart`; base ideal point chart(∞).
    Horocycle { chart: MobiusTransform, height: f64 },
}

impl EquidistantCurve {
    pub fn hypercycle(frame: Frame, distance: f64) -> Result<Self> {
        if distance == 0.0 || !distance.is_finite() {
            return Err(Error::domain("hypercycle distance must be finite and nonzero"));
        }
        Ok(Self::Hypercycle { frame, distance })
    }

    pub fn horocycle(chart: MobiusTransform, height: f64) -> Result<Self> {
        if !(height > 0.0) || !height.is_finite() {
            return Err(Error::domain("horocycle height must be positive"));
        }
        Ok(Self::Horocycle { chart, height })
    }

    pub fn base_ideal_point(&self) -> Option<IdealPoint> {
        match self {
            Self::Horocycle { chart, .. } => Some(chart.apply_ideal(IdealPoint::infinity())),
            _ => None,
        }
    }

    pub fn point_at(&self, t: f64) -> HyperbolicPoint {
        match self {
            Self::Geodesic { frame } => fermi_point(frame, 0.0, t),
            Self::Hypercycle { frame, distance } => fermi_point(frame, *distance, t),
            Self::Horocycle { chart, height } => chart.map(HyperbolicPoint::from_c(Complex64::new(t, *height))),
        }
    }

    /// Parameter of the point of the curve nearest to `p` along the foliation.
    pub fn param_of(&self, p: HyperbolicPoint) -> f64 {
        match self {
            Self::Geodesic { frame } | Self::Hypercycle { frame, .. } => fermi_coords(frame, p).1,
            Self::Horocycle { chart, .. } => chart.inverse().apply_c(p.to_complex()).re,
        }
    }

    /// Hyperbolic length element per unit parameter.
    pub fn speed(&self) -> f64 {
        match self {
            Self::Geodesic { .. } => 1.0,
            Self::Hypercycle { distance, .. } => distance.cosh(),
            Self::Horocycle { height, .. } => 1.0 / height,
        }
    }
}

/// A compact arc of an equidistant curve, parametrized proportionally to arclength.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryArc {
    pub curve: EquidistantCurve,
    pub t0: f64,
    pub t1: f64,
}

impl BoundaryArc {
    pub fn geodesic(p: HyperbolicPoint, q: HyperbolicPoint) -> Self {
        Self {
            curve: EquidistantCurve::Geodesic { frame: Frame::at(p, direction_to(p, q)) },
            t0: 0.0,
            t1: distance(p, q),
        }
    }

    pub fn length(&self) -> f64 {
        (self.t1 - self.t0).abs() * self.curve.speed()
    }

    pub fn point_at_fraction(&self, f: f64) -> HyperbolicPoint {
        self.curve.point_at(self.t0 + f * (self.t1 - self.t0))
    }

    pub fn fraction_of(&self, p: HyperbolicPoint) -> f64 {
        (self.curve.param_of(p) - self.t0) / (self.t1 - self.t0)
    }

    pub fn start(&self) -> HyperbolicPoint {
        self.point_at_fraction(0.0)
    }

    pub fn end(&self) -> HyperbolicPoint {
        self.point_at_fraction(1.0)
    }

    pub fn euclid(&self) -> EuclidArc {
        EuclidArc::new(self.start(), self.point_at_fraction(0.5), self.end())
    }
}
