use crate::collar::HexRegions;
use crate::error::{Error, Result};
use crate::hyp::{direction_to, distance, geodesic_point, ray_boundary_intersection, EuclidArc, GeodesicLine, HyperbolicPoint};

/// σ°: H° → H̃°, sending B to B̃, each boundary arc to its partner by arclength
/// proportion, and each segment from B homothetically.
#[derive(Debug, Clone)]
pub struct CoreMap {
    source: HexRegions,
    target: HexRegions,
    arcs: Vec<EuclidArc>,
    cones: Vec<GeodesicLine>,
}

impl CoreMap {
    pub fn new(source: HexRegions, target: HexRegions) -> Result<Self> {
        let arcs = source.core_euclid_arcs();
        let b = source.baricenter();
        let cones = source
            .core_vertices()
            .iter()
            .map(|&v| {
                let heading = direction_to(b, v);
                GeodesicLine::through_frame(&crate::hyp::Frame::at(b, heading))
            })
            .collect();
        Ok(Self { source, target, arcs, cones })
    }

    pub fn source(&self) -> &HexRegions {
        &self.source
    }

    pub fn target(&self) -> &HexRegions {
        &self.target
    }

    pub fn eval(&self, p: HyperbolicPoint) -> Result<HyperbolicPoint> {
        let b = self.source.baricenter();
        let r = distance(b, p);
        if r < 1e-15 {
            return Ok(self.target.baricenter());
        }
        let hit = ray_boundary_intersection(b, direction_to(b, p), &self.arcs)?;
        let frac = r / hit.arclength;
        if frac > 1.0 + 1e-9 {
            return Err(Error::domain("point lies outside the core"));
        }
        let arc = &self.source.core_boundary()[hit.piece];
        let f = arc.fraction_of(hit.point).clamp(0.0, 1.0);
        let q = self.target.core_boundary()[hit.piece].point_at_fraction(f);
        Ok(geodesic_point(self.target.baricenter(), q, frac))
    }

    /// Whether `p` lies within `tube` of one of the six segments from B to the core vertices,
    /// where σ° is only piecewise smooth.
    pub fn near_singular(&self, p: HyperbolicPoint, tube: f64) -> bool {
        let b = self.source.baricenter();
        self.source.core_vertices().iter().zip(&self.cones).any(|(&v, line)| {
            let along = distance(b, p) <= distance(b, v) + tube;
            let ahead = (direction_to(b, p) - direction_to(b, v)).cos() > 0.0;
            along && ahead && line.signed_distance(p).abs() < tube
        })
    }
}
