use crate::error::{Error, Result};
use crate::hyp::{
    distance, Frame, GeodesicLine, HyperbolicPoint, IdealPoint, MobiusTransform, SegmentEnd,
};
use std::f64::consts::{FRAC_PI_2, PI};

/// One α-side of the hexagon.
#[derive(Debug, Clone, Copy)]
pub enum AlphaSide {
    /// Compact side; `frame` sits at its start and heads along it.
    Finite { frame: Frame, length: f64 },
    /// Ideal vertex; `chart` maps the strip 0 < Re z < 1 (cusp at ∞) onto the
    /// hexagon near the vertex, with the outgoing seam on Re z = 0.
    Ideal { point: IdealPoint, chart: MobiusTransform },
}

/// Right-angled hexagon with alternate sides α₁, α₂, α₃ of lengths h₁, h₂, h₃,
/// traversed counterclockwise as α₁, β₃, α₂, β₁, α₃, β₂.
#[derive(Debug, Clone)]
pub struct HexagonGeometry {
    h: [f64; 3],
    seams: [f64; 3],
    alpha: [AlphaSide; 3],
}

/// Seam opposite α_k from the right-angled hexagon relation.
fn seam_length(h: [f64; 3], k: usize) -> f64 {
    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
    if h[i] == 0.0 || h[j] == 0.0 {
        return f64::INFINITY;
    }
    let c = (h[k].cosh() + h[i].cosh() * h[j].cosh()) / (h[i].sinh() * h[j].sinh());
    c.acosh()
}

/// Index of the seam following α_i.
pub(crate) fn beta_after(i: usize) -> usize {
    (i + 2) % 3
}

/// From the start of α_i along α_i and the following seam to the start of α_{i+1}.
fn forward_to_next(f: Frame, h_i: f64, seam: f64) -> Frame {
    f.advance(h_i).turn(FRAC_PI_2).advance(seam).turn(FRAC_PI_2)
}

/// Inverse step: the start of α_{i-1}, given the start of α_i.
fn backward_to_prev(f: Frame, h_prev: f64, seam: f64) -> Frame {
    f.turn(-FRAC_PI_2).advance(-seam).turn(-FRAC_PI_2).advance(-h_prev)
}

pub fn hexagon_from_sides(h1: f64, h2: f64, h3: f64) -> Result<HexagonGeometry> {
    let h = [h1, h2, h3];
    if h.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return Err(Error::domain(format!("hexagon sides {h:?} must be finite and nonnegative")));
    }
    let seams = [seam_length(h, 0), seam_length(h, 1), seam_length(h, 2)];
    let finite = h.map(|v| v > 0.0);

    let mut frames: [Option<Frame>; 3] = [None; 3];
    let mut ideal: [Option<IdealPoint>; 3] = [None; 3];

    // frames far from the base lose ~e^d ulps, so the walk starts on the longest side
    // and reaches its two neighbours in opposite directions
    let longest = seams.iter().copied().filter(|s| s.is_finite()).fold(0.0, f64::max);
    let tol = 1e-8 + 1e-13 * longest.exp();
    if finite.iter().all(|&f| f) {
        let m = (0..3).fold(0, |b, i| if h[i] > h[b] { i } else { b });
        let (n, p) = ((m + 1) % 3, (m + 2) % 3);
        frames[m] = Some(Frame::identity());
        frames[n] = Some(forward_to_next(Frame::identity(), h[m], seams[beta_after(m)]));
        frames[p] = Some(backward_to_prev(Frame::identity(), h[p], seams[beta_after(p)]));
        let f = forward_to_next(frames[n].unwrap(), h[n], seams[beta_after(n)]);
        if (frames[p].unwrap().mobius().inverse() * f.mobius()).distance_to(&MobiusTransform::identity()) > tol {
            return Err(Error::Internal("hexagon walk does not close".into()));
        }
    } else if finite.iter().all(|&f| !f) {
        for (i, phi) in [FRAC_PI_2, 7.0 * PI / 6.0, 11.0 * PI / 6.0].into_iter().enumerate() {
            // the Cayley image of e^{iφ}
            ideal[i] = Some(IdealPoint::real((phi / 2.0).tan()));
        }
    } else {
        // chain of finite sides i0 (, i0 + 1) between ideal vertices
        let i0 = (0..3).find(|&i| finite[i] && !finite[(i + 2) % 3]).expect("mixed case has a chain start");
        let i1 = (i0 + 1) % 3;
        let last = if finite[i1] {
            if h[i1] > h[i0] {
                frames[i1] = Some(Frame::identity());
                frames[i0] = Some(backward_to_prev(Frame::identity(), h[i0], seams[beta_after(i0)]));
            } else {
                frames[i0] = Some(Frame::identity());
                frames[i1] = Some(forward_to_next(Frame::identity(), h[i0], seams[beta_after(i0)]));
            }
            i1
        } else {
            frames[i0] = Some(Frame::identity());
            i0
        };
        let after = (last + 1) % 3;
        ideal[after] = Some(frames[last].unwrap().advance(h[last]).turn(FRAC_PI_2).forward_endpoint());
        let prev = (i0 + 2) % 3;
        let from_back = frames[i0].unwrap().turn(FRAC_PI_2).forward_endpoint();
        match ideal[prev] {
            Some(p) if p.chordal_distance(&from_back) > tol => {
                return Err(Error::Internal("hexagon walk does not close at the ideal vertex".into()));
            }
            Some(_) => {}
            None => ideal[prev] = Some(from_back),
        }
    }

    // charts at ideal vertices
    let mut alpha = [AlphaSide::Finite { frame: Frame::identity(), length: 0.0 }; 3];
    for i in 0..3 {
        if let Some(frame) = frames[i] {
            alpha[i] = AlphaSide::Finite { frame, length: h[i] };
        }
    }
    for i in 0..3 {
        let Some(p) = ideal[i] else { continue };
        let (next, prev) = ((i + 1) % 3, (i + 2) % 3);
        let q_next = match frames[next] {
            Some(f) => f.turn(-FRAC_PI_2).forward_endpoint(),
            None => ideal[next].expect("ideal neighbour"),
        };
        let q_prev = match frames[prev] {
            Some(f) => f.advance(h[prev]).turn(FRAC_PI_2).backward_endpoint(),
            None => ideal[prev].expect("ideal neighbour"),
        };
        let m = MobiusTransform::from_ideal_triple(p, q_next, q_prev)?;
        alpha[i] = AlphaSide::Ideal { point: p, chart: m.inverse() };
    }
    Ok(HexagonGeometry { h, seams, alpha })
}

impl HexagonGeometry {
    pub fn sides(&self) -> [f64; 3] {
        self.h
    }

    /// Seam lengths b₁, b₂, b₃ (∞ when an adjacent α-side is ideal).
    pub fn seams(&self) -> [f64; 3] {
        self.seams
    }

    pub fn alpha(&self, i: usize) -> &AlphaSide {
        &self.alpha[i]
    }

    pub fn is_ideal(&self, i: usize) -> bool {
        matches!(self.alpha[i], AlphaSide::Ideal { .. })
    }

    pub(crate) fn frame(&self, i: usize) -> Option<Frame> {
        match self.alpha[i] {
            AlphaSide::Finite { frame, .. } => Some(frame),
            AlphaSide::Ideal { .. } => None,
        }
    }

    pub(crate) fn cusp_chart(&self, i: usize) -> Option<MobiusTransform> {
        match self.alpha[i] {
            AlphaSide::Ideal { chart, .. } => Some(chart),
            AlphaSide::Finite { .. } => None,
        }
    }

    /// Endpoints (start, end) of α_i.
    pub fn alpha_ends(&self, i: usize) -> (SegmentEnd, SegmentEnd) {
        match self.alpha[i] {
            AlphaSide::Finite { frame, length } => (
                SegmentEnd::Finite(frame.point()),
                SegmentEnd::Finite(frame.advance(length).point()),
            ),
            AlphaSide::Ideal { point, .. } => (SegmentEnd::Ideal(point), SegmentEnd::Ideal(point)),
        }
    }

    /// The six vertices in boundary order (start and end of each α-side).
    pub fn vertices(&self) -> [SegmentEnd; 6] {
        let (a0, b0) = self.alpha_ends(0);
        let (a1, b1) = self.alpha_ends(1);
        let (a2, b2) = self.alpha_ends(2);
        [a0, b0, a1, b1, a2, b2]
    }

    /// Line of α_i oriented along the boundary (interior on the left); `None` if ideal.
    pub fn alpha_line(&self, i: usize) -> Option<GeodesicLine> {
        self.frame(i).map(|f| GeodesicLine::through_frame(&f))
    }

    /// Line of the seam following α_i, oriented along the boundary.
    pub fn seam_line_after(&self, i: usize) -> GeodesicLine {
        match self.alpha[i] {
            AlphaSide::Finite { frame, length } => GeodesicLine::through_frame(&frame.advance(length).turn(FRAC_PI_2)),
            AlphaSide::Ideal { chart, .. } => GeodesicLine {
                from: chart.apply_ideal(IdealPoint::infinity()),
                to: chart.apply_ideal(IdealPoint::real(0.0)),
            },
        }
    }

    /// Normalizer of `seam_line_after(i)` taken straight from the frame or chart;
    /// going through the ideal endpoints loses everything once the seam is long.
    pub fn seam_normalizer_after(&self, i: usize) -> MobiusTransform {
        match self.alpha[i] {
            AlphaSide::Finite { frame, length } => frame.advance(length).turn(FRAC_PI_2).mobius().inverse(),
            AlphaSide::Ideal { chart, .. } => MobiusTransform::rotation_about_i(PI) * chart.inverse(),
        }
    }

    /// Signed distance to the hexagon: min over side lines, positive inside.
    pub fn inside_distance(&self, p: HyperbolicPoint) -> f64 {
        let mut d = f64::INFINITY;
        for i in 0..3 {
            if let Some(l) = self.alpha_line(i) {
                d = d.min(l.signed_distance(p));
            }
            d = d.min(self.seam_line_after(i).signed_distance(p));
        }
        d
    }

    pub fn contains(&self, p: HyperbolicPoint, tol: f64) -> bool {
        self.inside_distance(p) >= -tol
    }

    /// Side lengths measured from the constructed vertices.
    pub fn measured_sides(&self) -> [f64; 3] {
        std::array::from_fn(|i| match self.alpha_ends(i) {
            (SegmentEnd::Finite(p), SegmentEnd::Finite(q)) => distance(p, q),
            _ => 0.0,
        })
    }

    /// Seam lengths measured from the constructed vertices, indexed like `seams`.
    pub fn measured_seams(&self) -> [f64; 3] {
        let mut out = [f64::INFINITY; 3];
        for i in 0..3 {
            let (_, end) = self.alpha_ends(i);
            let (start, _) = self.alpha_ends((i + 1) % 3);
            if let (SegmentEnd::Finite(p), SegmentEnd::Finite(q)) = (end, start) {
                out[beta_after(i)] = distance(p, q);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn equilateral_seams() {
        let hex = hexagon_from_sides(1.0, 1.0, 1.0).unwrap();
        let b = hex.seams();
        let c1 = 1f64.cosh();
        let expect = ((c1 + c1 * c1) / (1f64.sinh().powi(2))).acosh();
        assert_abs_diff_eq!(expect.cosh(), 2.8414, epsilon = 1e-4);
        assert_abs_diff_eq!(expect, 1.704913, epsilon = 1e-6);
        for k in 0..3 {
            assert_abs_diff_eq!(b[k], expect, epsilon = 1e-12);
        }
        let m = hex.measured_seams();
        for k in 0..3 {
            assert_abs_diff_eq!(m[k], expect, epsilon = 1e-9);
        }
        let s = hex.measured_sides();
        for k in 0..3 {
            assert_abs_diff_eq!(s[k], 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn right_angles() {
        let hex = hexagon_from_sides(0.7, 1.3, 2.1).unwrap();
        for i in 0..3 {
            let a = hex.frame(i).unwrap();
            let end = a.advance(hex.sides()[i]);
            let line_b = hex.seam_line_after(i);
            // the seam line starts perpendicular at the end of α_i
            let along = end.turn(FRAC_PI_2).advance(0.3).point();
            assert!(line_b.signed_distance(along).abs() < 1e-12);
        }
    }

    #[test]
    fn mixed_cases_build() {
        for h in [[0.0, 1.0, 1.0], [1.0, 0.0, 2.0], [0.5, 0.5, 0.0], [0.0, 0.0, 1.0], [0.0, 2.0, 0.0], [0.0, 0.0, 0.0]] {
            let hex = hexagon_from_sides(h[0], h[1], h[2]).unwrap();
            let s = hex.measured_sides();
            for k in 0..3 {
                assert_abs_diff_eq!(s[k], h[k], epsilon = 1e-9);
            }
            let m = hex.measured_seams();
            for k in 0..3 {
                if hex.seams()[k].is_finite() {
                    assert_abs_diff_eq!(m[k], hex.seams()[k], epsilon = 1e-8);
                }
            }
        }
    }

    #[test]
    fn cusp_chart_strip_is_inside() {
        let hex = hexagon_from_sides(0.0, 1.0, 1.5).unwrap();
        let chart = hex.cusp_chart(0).unwrap();
        for x in [0.1, 0.5, 0.9] {
            let p = chart.apply(HyperbolicPoint::new(x, 5.0).unwrap()).unwrap();
            assert!(hex.contains(p, 0.0), "x = {x}");
        }
        let outside = chart.apply(HyperbolicPoint::new(1.2, 5.0).unwrap()).unwrap();
        assert!(!hex.contains(outside, 0.0));
    }

    #[test]
    fn negative_side_rejected() {
        assert!(hexagon_from_sides(-1.0, 1.0, 1.0).is_err());
    }
}
