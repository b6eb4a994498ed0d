use super::hexagon::HexagonGeometry;
use super::{t_profile, xi_profile};
use crate::error::{Error, Result};
use crate::hyp::{
    direction_to, distance, karcher_mean, ray_boundary_intersection, BoundaryArc, EquidistantCurve, EuclidArc, Frame,
    fermi_coords, GeodesicLine, HyperbolicPoint, MobiusTransform,
};
use num_complex::Complex64;
use std::f64::consts::PI;

const MAX_SHRINK: u32 = 12;
const STAR_SAMPLES: usize = 64;

/// The collar A_t(α_i) restricted to the hexagon.
#[derive(Debug, Clone, Copy)]
pub enum CollarRegion {
    /// Fermi strip ρ ≤ `width` over the side of length `length`.
    Fermi {
        frame: Frame,
        length: f64,
        width: f64,
        half_width: f64,
    },
    /// Horoball Im ≥ `height` in the strip chart of the ideal vertex.
    Cusp {
        chart: MobiusTransform,
        height: f64,
        half_height: f64,
    },
}

impl CollarRegion {
    pub fn contains(&self, p: HyperbolicPoint, tol: f64) -> bool {
        match self {
            Self::Fermi { frame, width, .. } => fermi_coords(frame, p).0 <= width + tol,
            Self::Cusp { chart, height, .. } => chart.inverse().apply_c(p.to_complex()).im >= height - tol,
        }
    }

    /// Bounding hypercycle or horocycle arc, from the start of the side to its end.
    pub fn outer_arc(&self) -> BoundaryArc {
        match *self {
            Self::Fermi { frame, length, width, .. } => BoundaryArc {
                curve: EquidistantCurve::Hypercycle { frame, distance: width },
                t0: 0.0,
                t1: length,
            },
            Self::Cusp { chart, height, .. } => BoundaryArc {
                curve: EquidistantCurve::Horocycle { chart, height },
                t0: 1.0,
                t1: 0.0,
            },
        }
    }
}

/// Subregions of a hexagon: collars, caps Â, the core H° and its convex part H^conv.
#[derive(Debug, Clone)]
pub struct HexRegions {
    hexagon: HexagonGeometry,
    t: [f64; 3],
    xi: [f64; 3],
    shrink_steps: [u32; 3],
    collars: [CollarRegion; 3],
    caps: [[GeodesicLine; 2]; 3],
    conv_vertices: Vec<HyperbolicPoint>,
    core_boundary: [BoundaryArc; 6],
    baricenter: HyperbolicPoint,
    min_incidence: f64,
}

struct SideRegions {
    collar: CollarRegion,
    t: f64,
    xi: f64,
    caps: [GeodesicLine; 2],
    /// exit of the right cap on the incoming seam, apex, exit of the left cap on the outgoing seam
    conv: [HyperbolicPoint; 3],
}

fn reversed(l: GeodesicLine) -> GeodesicLine {
    GeodesicLine { from: l.to, to: l.from }
}

fn side_regions(hex: &HexagonGeometry, i: usize, t: f64, xi: f64) -> Result<SideRegions> {
    let h = hex.sides()[i];
    let seam_out = hex.seam_line_after(i);
    let seam_in = hex.seam_line_after((i + 2) % 3);
    let fail = |what: &str| Err(Error::Containment(format!("side {}: {what}", i + 1)));

    let (collar, left, right) = match (hex.frame(i), hex.cusp_chart(i)) {
        (Some(frame), _) => {
            let width = (t / (2.0 * h.sinh())).asinh();
            let half_width = (0.5 / (2.0 * h.sinh())).asinh();
            let c = Complex64::new(-width.tanh(), 1.0 / width.cosh());
            let tangent = c.arg();
            let left = frame.from_local(c, tangent + xi);
            let right = frame.from_local(c * h.exp(), tangent + PI - xi);
            (CollarRegion::Fermi { frame, length: h, width, half_width }, left, right)
        }
        (None, Some(chart)) => {
            let height = 2.0 / t;
            let frame = Frame::from_mobius(chart);
            let left = frame.from_local(Complex64::new(1.0, height), PI + xi);
            let right = frame.from_local(Complex64::new(0.0, height), -xi);
            (CollarRegion::Cusp { chart, height, half_height: 4.0 }, left, right)
        }
        _ => unreachable!("every side is finite or ideal"),
    };
    let gl = GeodesicLine::through_frame(&left);
    let gr = GeodesicLine::through_frame(&right);
    let Some(exit_l) = gl.intersect(&seam_out) else {
        return fail("left cap does not reach the outgoing seam");
    };
    let Some(exit_r) = gr.intersect(&seam_in) else {
        return fail("right cap does not reach the incoming seam");
    };
    let Some(apex) = gl.intersect(&gr) else {
        return fail("caps do not cross");
    };
    let within_half = |p: HyperbolicPoint| match collar {
        CollarRegion::Fermi { frame, width, half_width, .. } => {
            let rho = fermi_coords(&frame, p).0;
            rho > width && rho <= half_width
        }
        CollarRegion::Cusp { chart, height, half_height } => {
            let y = chart.inverse().apply_c(p.to_complex()).im;
            y < height && y >= half_height
        }
    };
    if !within_half(exit_l) || !within_half(exit_r) {
        return fail("cap leaves the half-area collar");
    }
    Ok(SideRegions {
        collar,
        t,
        xi,
        caps: [gl, reversed(gr)],
        conv: [exit_r, apex, exit_l],
    })
}

/// Regions for the default profiles t(h) = 1/(4(1+h)), ξ(h) = π/(4(1+h)).
pub fn hexagon_regions(hex: &HexagonGeometry) -> Result<HexRegions> {
    hexagon_regions_with(hex, &t_profile, &xi_profile)
}

/// Regions for custom profiles t(h), ξ(h). A side whose cap leaves the
/// half-area collar is retried with t and ξ halved, up to 12 times.
pub fn hexagon_regions_with(
    hex: &HexagonGeometry,
    t_fn: &dyn Fn(f64) -> f64,
    xi_fn: &dyn Fn(f64) -> f64,
) -> Result<HexRegions> {
    let mut sides = Vec::with_capacity(3);
    let mut steps = [0u32; 3];
    for i in 0..3 {
        let h = hex.sides()[i];
        let (t, xi) = (t_fn(h), xi_fn(h));
        if !(t > 0.0 && t < 1.0) || !(xi > 0.0 && xi < PI / 2.0) {
            return Err(Error::domain(format!("profile values t = {t}, ξ = {xi} out of range at h = {h}")));
        }
        let mut attempt = side_regions(hex, i, t, xi);
        let mut k = 0;
        while attempt.is_err() && k < MAX_SHRINK {
            k += 1;
            let scale = 0.5f64.powi(k as i32);
            attempt = side_regions(hex, i, t * scale, xi * scale);
        }
        steps[i] = k;
        sides.push(attempt?);
    }
    let t = std::array::from_fn(|i| sides[i].t);
    let xi = std::array::from_fn(|i| sides[i].xi);

    let collars = [sides[0].collar, sides[1].collar, sides[2].collar];
    let caps = [sides[0].caps, sides[1].caps, sides[2].caps];
    let conv_vertices: Vec<HyperbolicPoint> = sides.iter().flat_map(|s| s.conv).collect();
    let arcs = collars.map(|c| c.outer_arc());
    let core_boundary = [
        arcs[0],
        BoundaryArc::geodesic(arcs[0].end(), arcs[1].start()),
        arcs[1],
        BoundaryArc::geodesic(arcs[1].end(), arcs[2].start()),
        arcs[2],
        BoundaryArc::geodesic(arcs[2].end(), arcs[0].start()),
    ];
    let baricenter = karcher_mean(&conv_vertices, 1e-12)?;

    let mut regions = HexRegions {
        hexagon: hex.clone(),
        t,
        xi,
        shrink_steps: steps,
        collars,
        caps,
        conv_vertices,
        core_boundary,
        baricenter,
        min_incidence: 0.0,
    };
    regions.verify()?;
    Ok(regions)
}

impl HexRegions {
    fn verify(&mut self) -> Result<()> {
        let tol = 1e-9;
        for v in &self.conv_vertices {
            if !self.hexagon.contains(*v, tol) || !self.in_core(*v, tol) {
                return Err(Error::Containment("convex core vertex outside the core".into()));
            }
        }
        if !self.in_convex_core(self.baricenter, 0.0) {
            return Err(Error::Containment("baricenter outside the convex core".into()));
        }
        let arcs = self.core_euclid_arcs();
        let mut min_angle = f64::INFINITY;
        for k in 0..STAR_SAMPLES {
            let s = (k as f64 + 0.5) / STAR_SAMPLES as f64 * 6.0;
            let piece = s.floor() as usize;
            let q = self.core_boundary[piece].point_at_fraction(s - piece as f64);
            let hit = ray_boundary_intersection(self.baricenter, direction_to(self.baricenter, q), &arcs)?;
            if distance(hit.point, q) > 1e-7 {
                return Err(Error::NotStarShaped(format!("ray to boundary sample {k} is blocked")));
            }
            min_angle = min_angle.min(hit.incidence);
        }
        self.min_incidence = min_angle;
        Ok(())
    }

    pub fn hexagon(&self) -> &HexagonGeometry {
        &self.hexagon
    }

    pub fn t(&self) -> [f64; 3] {
        self.t
    }

    pub fn xi(&self) -> [f64; 3] {
        self.xi
    }

    /// Number of halvings applied to the profile values on each side.
    pub fn shrink_steps(&self) -> [u32; 3] {
        self.shrink_steps
    }

    pub fn collar(&self, i: usize) -> &CollarRegion {
        &self.collars[i]
    }

    pub fn baricenter(&self) -> HyperbolicPoint {
        self.baricenter
    }

    pub fn conv_vertices(&self) -> &[HyperbolicPoint] {
        &self.conv_vertices
    }

    /// Vertices x₁, y₁, x₂, y₂, x₃, y₃ of the core.
    pub fn core_vertices(&self) -> [HyperbolicPoint; 6] {
        std::array::from_fn(|k| {
            let arc = &self.core_boundary[2 * (k / 2)];
            if k % 2 == 0 {
                arc.start()
            } else {
                arc.end()
            }
        })
    }

    /// Boundary of the core: arc₁, seam, arc₂, seam, arc₃, seam.
    pub fn core_boundary(&self) -> &[BoundaryArc; 6] {
        &self.core_boundary
    }

    pub(crate) fn core_euclid_arcs(&self) -> Vec<EuclidArc> {
        self.core_boundary.iter().map(|a| a.euclid()).collect()
    }

    /// Smallest incidence angle of rays from the baricenter over the boundary samples.
    pub fn min_incidence(&self) -> f64 {
        self.min_incidence
    }

    /// ξ(max h_i)/2, the lower bound the sampled incidence angles are held to.
    pub fn incidence_bound(&self) -> f64 {
        self.xi.iter().cloned().fold(f64::INFINITY, f64::min) / 2.0
    }

    /// Index of the collar containing `p`, if any.
    pub fn collar_index(&self, p: HyperbolicPoint, tol: f64) -> Option<usize> {
        (0..3).find(|&i| self.collars[i].contains(p, tol))
    }

    pub fn in_core(&self, p: HyperbolicPoint, tol: f64) -> bool {
        self.hexagon.contains(p, tol) && (0..3).all(|i| !self.collars[i].contains(p, -tol))
    }

    pub fn in_convex_core(&self, p: HyperbolicPoint, tol: f64) -> bool {
        self.hexagon.contains(p, tol)
            && self.caps.iter().all(|c| c.iter().all(|l| l.signed_distance(p) >= -tol))
    }

    /// Whether the cap Â_i lies inside the half-area collar.
    pub fn cap_contained(&self, i: usize) -> bool {
        let conv = &self.conv_vertices[3 * i..3 * i + 3];
        let [exit_r, _, exit_l] = [conv[0], conv[1], conv[2]];
        match self.collars[i] {
            CollarRegion::Fermi { frame, half_width, .. } => [exit_r, exit_l]
                .iter()
                .all(|p| fermi_coords(&frame, *p).0 <= half_width + 1e-12),
            CollarRegion::Cusp { chart, half_height, .. } => [exit_r, exit_l]
                .iter()
                .all(|p| chart.inverse().apply_c(p.to_complex()).im >= half_height - 1e-12),
        }
    }
}
