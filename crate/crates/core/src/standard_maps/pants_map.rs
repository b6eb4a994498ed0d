use super::annulus::{chart_to_halfplane, AnnulusMap};
use super::core_map::CoreMap;
use super::distortion::{measure_distortion, DistortionReport};
use super::profile::TwistProfile;
use crate::collar::{
    collar_chart, double_to_pants, hexagon_regions, ChartPoint, HexRegions, HexagonGeometry, PantsGeometry, PantsPoint,
    Sheet,
};
use crate::error::{Error, Result};
use crate::hyp::{distance, geodesic_point, HyperbolicPoint};
use num_complex::Complex64;

/// Tube around the six cone segments of σ° excluded from distortion sampling.
pub const SINGULAR_TUBE: f64 = 1e-5;

/// Image of a point under a pants map: a point, or the cusp of a pinched boundary curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PantsImage {
    Point(PantsPoint),
    Cusp(usize),
}

/// The standard map σ(Θ): dH → dH̃.
#[derive(Debug, Clone)]
pub struct PantsMap {
    source: PantsGeometry,
    target: PantsGeometry,
    source_regions: HexRegions,
    theta: [f64; 3],
    annuli: [AnnulusMap; 3],
    core: CoreMap,
    core_inverse: CoreMap,
}

/// Distortion of a pants map over its core and its three collars.
#[derive(Debug, Clone)]
pub struct PantsDistortion {
    pub core: DistortionReport,
    /// `None` for collars left out of the sample.
    pub collars: Vec<Option<DistortionReport>>,
}

impl PantsDistortion {
    pub fn sup_eps(&self) -> f64 {
        self.collars.iter().flatten().map(|c| c.sup_eps).fold(self.core.sup_eps, f64::max)
    }

    pub fn sup_eps_inverse(&self) -> f64 {
        self.collars.iter().flatten().map(|c| c.sup_eps_inverse).fold(self.core.sup_eps_inverse, f64::max)
    }

    pub fn sup_k(&self) -> f64 {
        self.collars.iter().flatten().map(|c| c.sup_k).fold(self.core.sup_k, f64::max)
    }
}

/// σ(Θ) with the default twist profile; `theta` in turns.
pub fn pants_map(source: &HexagonGeometry, target: &HexagonGeometry, theta: [f64; 3]) -> Result<PantsMap> {
    pants_map_with(source, target, theta, TwistProfile::default())
}

pub fn pants_map_with(
    source: &HexagonGeometry,
    target: &HexagonGeometry,
    theta: [f64; 3],
    profile: TwistProfile,
) -> Result<PantsMap> {
    let (h, ht) = (source.sides(), target.sides());
    for i in 0..3 {
        if h[i] == 0.0 && ht[i] != 0.0 {
            return Err(Error::domain(format!("side {} is a cusp in the source but not in the target", i + 1)));
        }
    }
    let rs = hexagon_regions(source)?;
    let rt = hexagon_regions(target)?;
    let mut annuli = Vec::with_capacity(3);
    for i in 0..3 {
        let a = collar_chart(2.0 * h[i], rs.t()[i])?;
        let b = collar_chart(2.0 * ht[i], rt.t()[i])?;
        annuli.push(AnnulusMap::new(a, b, theta[i], profile.clone())?);
    }
    let annuli: [AnnulusMap; 3] = annuli.try_into().expect("three collars");
    Ok(PantsMap {
        source: double_to_pants(source),
        target: double_to_pants(target),
        core: CoreMap::new(rs.clone(), rt.clone())?,
        core_inverse: CoreMap::new(rt, rs.clone())?,
        source_regions: rs,
        theta,
        annuli,
    })
}

impl PantsMap {
    pub fn source(&self) -> &PantsGeometry {
        &self.source
    }

    pub fn target(&self) -> &PantsGeometry {
        &self.target
    }

    pub fn theta(&self) -> [f64; 3] {
        self.theta
    }

    pub fn annulus(&self, i: usize) -> &AnnulusMap {
        &self.annuli[i]
    }

    pub fn core(&self) -> &CoreMap {
        &self.core
    }

    pub fn source_regions(&self) -> &HexRegions {
        &self.source_regions
    }

    pub fn target_regions(&self) -> &HexRegions {
        self.core.target()
    }

    fn collar_image(&self, i: usize, p: PantsPoint) -> Result<PantsImage> {
        let c = self.source.collar_coords(i, p);
        match self.annuli[i].eval(c)? {
            ChartPoint::CuspIdeal => Ok(PantsImage::Cusp(i)),
            img => Ok(PantsImage::Point(self.target.from_collar_coords(i, img)?)),
        }
    }

    pub fn eval(&self, p: PantsPoint) -> Result<PantsImage> {
        if !self.source.hexagon().contains(p.point, 1e-9) {
            return Err(Error::domain("point lies outside the hexagon"));
        }
        match self.source_regions.collar_index(p.point, 0.0) {
            Some(i) => self.collar_image(i, p),
            None => Ok(PantsImage::Point(PantsPoint { sheet: p.sheet, point: self.core.eval(p.point)? })),
        }
    }

    /// Inverse map, from dH̃ back to dH; the cusp of a pinched curve has no preimage.
    pub fn eval_inverse(&self, p: PantsPoint) -> Result<PantsPoint> {
        if !self.target.hexagon().contains(p.point, 1e-9) {
            return Err(Error::domain("point lies outside the hexagon"));
        }
        match self.target_regions().collar_index(p.point, 0.0) {
            Some(i) => {
                let c = self.target.collar_coords(i, p);
                self.source.from_collar_coords(i, self.annuli[i].eval_inverse(c)?)
            }
            None => Ok(PantsPoint { sheet: p.sheet, point: self.core_inverse.eval(p.point)? }),
        }
    }

    /// Largest distance between the collar and core formulas on `samples` points
    /// spread over the three collar boundaries of both sheets.
    pub fn interface_gap(&self, samples: usize) -> Result<f64> {
        let per = samples.div_ceil(6).max(1);
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            let arc = self.source_regions.collar(i).outer_arc();
            for sheet in [Sheet::Front, Sheet::Back] {
                for k in 0..per {
                    let q = arc.point_at_fraction((k as f64 + 0.5) / per as f64);
                    let p = PantsPoint { sheet, point: q };
                    let a = match self.collar_image(i, p)? {
                        PantsImage::Point(a) => a,
                        PantsImage::Cusp(_) => return Err(Error::Internal("collar boundary mapped to the cusp".into())),
                    };
                    let b = self.core.eval(q)?;
                    if a.sheet != sheet && !self.target.on_seam(a.point, 1e-9) {
                        return Ok(f64::INFINITY);
                    }
                    worst = worst.max(distance(a.point, b));
                }
            }
        }
        Ok(worst)
    }

    /// Distortion on a grid: the core on `resolution` rays per boundary piece and
    /// `resolution` radii; collar i as in `collar_distortion`, skipped when its cut is `None`.
    pub fn distortion(&self, resolution: usize, cuts: [Option<f64>; 3]) -> Result<PantsDistortion> {
        let core = self.core_distortion(resolution)?;
        let mut collars = Vec::with_capacity(3);
        for (i, cut) in cuts.into_iter().enumerate() {
            collars.push(cut.map(|c| self.collar_distortion(i, resolution, c)).transpose()?);
        }
        Ok(PantsDistortion { core, collars })
    }

    pub fn core_distortion(&self, resolution: usize) -> Result<DistortionReport> {
        if resolution == 0 {
            return Err(Error::domain("resolution must be positive"));
        }
        let n = resolution;
        let rs = &self.source_regions;
        let b = rs.baricenter();
        let mut pts = Vec::with_capacity(6 * n * n);
        for arc in rs.core_boundary() {
            for k in 0..n {
                let q = arc.point_at_fraction((k as f64 + 0.5) / n as f64);
                for m in 0..n {
                    let p = geodesic_point(b, q, (m as f64 + 0.5) / n as f64);
                    pts.push((!self.core.near_singular(p, SINGULAR_TUBE)).then(|| p.to_complex()));
                }
            }
        }
        let f = |z: Complex64| -> Result<Complex64> {
            Ok(self.core.eval(HyperbolicPoint::checked_from_c(z)?)?.to_complex())
        };
        measure_distortion(&f, &pts, n)
    }

    /// Distortion of collar i on a `resolution`² Fermi/cusp grid over the part with
    /// length fraction q ≥ 1/cut, i.e. A_t ∖ A_{t/cut}. An infinite cut samples a whole Fermi collar.
    pub fn collar_distortion(&self, i: usize, resolution: usize, cut: f64) -> Result<DistortionReport> {
        if resolution == 0 {
            return Err(Error::domain("resolution must be positive"));
        }
        let n = resolution;
        let a = &self.annuli[i];
        let c = a.source();
        if !(cut > 1.0) || (c.is_cusp() && !cut.is_finite()) {
            return Err(Error::domain(format!("collar cut {cut} must exceed 1 (and be finite at a cusp)")));
        }
        let mut pts = Vec::with_capacity(n * n);
        for j in 0..n {
            let s = (j as f64 + 0.5) / n as f64;
            for k in 0..n {
                let x = (k as f64 + 0.5) / n as f64;
                let cp = if c.is_cusp() {
                    ChartPoint::Cusp { x, y: c.boundary_height() * cut.powf(s) }
                } else {
                    let lo = 2.0 * ((c.width() / 2.0).sinh() / cut.sqrt()).asinh();
                    ChartPoint::Fermi { rho: lo + (c.width() - lo) * s, x: x * c.length() }
                };
                pts.push(Some(chart_to_halfplane(cp)?));
            }
        }
        let f = |z: Complex64| a.eval_halfplane(z);
        measure_distortion(&f, &pts, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collar::hexagon_from_sides;

    fn unwrap_point(i: PantsImage) -> PantsPoint {
        match i {
            PantsImage::Point(p) => p,
            PantsImage::Cusp(_) => panic!("unexpected cusp"),
        }
    }

    #[test]
    fn identity_data_is_identity() {
        let hex = hexagon_from_sides(0.8, 1.1, 0.0).unwrap();
        let m = pants_map(&hex, &hex, [0.0; 3]).unwrap();
        let r = m.source_regions();
        let b = r.baricenter();
        for (k, arc) in r.core_boundary().iter().enumerate() {
            for f in [0.05, 0.5, 0.95] {
                for s in [0.3, 1.0, 1.4] {
                    let p = geodesic_point(b, arc.point_at_fraction(f), s);
                    if !hex.contains(p, 0.0) {
                        continue;
                    }
                    for sheet in [Sheet::Front, Sheet::Back] {
                        let q = unwrap_point(m.eval(PantsPoint { sheet, point: p }).unwrap());
                        assert!(distance(q.point, p) < 1e-9, "piece {k}");
                        assert!(q.sheet == sheet || m.target().on_seam(p, 1e-9));
                    }
                }
            }
        }
    }

    #[test]
    fn continuity_across_interfaces() {
        let s = hexagon_from_sides(0.5, 1.0, 1.5).unwrap();
        let t = hexagon_from_sides(0.6, 0.9, 2.0).unwrap();
        let m = pants_map(&s, &t, [0.2, -0.3, 0.45]).unwrap();
        assert!(m.interface_gap(256).unwrap() < 1e-7);
        let t = hexagon_from_sides(0.0, 0.9, 2.0).unwrap();
        let m = pants_map(&s, &t, [0.2, -0.3, 0.45]).unwrap();
        assert!(m.interface_gap(256).unwrap() < 1e-7);
    }

    #[test]
    fn pure_twist_on_one_collar() {
        let hex = hexagon_from_sides(1.0, 1.0, 1.0).unwrap();
        let m = pants_map(&hex, &hex, [0.25, 0.0, 0.0]).unwrap();
        let a = m.annulus(0);
        let c = m.source().collar_coords(0, PantsPoint { sheet: Sheet::Front, point: crate::hyp::HyperbolicPoint::i() });
        if let (ChartPoint::Fermi { rho, x }, ChartPoint::Fermi { rho: r2, x: x2 }) = (c, a.eval(c).unwrap()) {
            assert!((rho - r2).abs() < 1e-15);
            let expect = 0.25 * (1.0 - TwistProfile::default().cumulative(rho / a.target().width()));
            assert!(((x2 - x) / 2.0 - expect).abs() < 1e-14);
        } else {
            panic!();
        }
    }

    #[test]
    fn pinched_boundary_goes_to_the_cusp() {
        let s = hexagon_from_sides(0.3, 1.0, 1.0).unwrap();
        let t = hexagon_from_sides(0.0, 1.0, 1.0).unwrap();
        let m = pants_map(&s, &t, [0.0; 3]).unwrap();
        let on_alpha = s.alpha_ends(0).0;
        if let crate::hyp::SegmentEnd::Finite(p) = on_alpha {
            assert_eq!(m.eval(PantsPoint { sheet: Sheet::Front, point: p }).unwrap(), PantsImage::Cusp(0));
        }
        assert!(pants_map(&t, &s, [0.0; 3]).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let s = hexagon_from_sides(0.5, 1.0, 1.5).unwrap();
        let t = hexagon_from_sides(0.0, 0.9, 2.0).unwrap();
        let m = pants_map(&s, &t, [0.0, -0.3, 0.45]).unwrap();
        let r = m.source_regions();
        for arc in r.core_boundary() {
            for f in [0.2, 0.8] {
                for d in [0.5, 1.0, 1.2] {
                    let p = geodesic_point(r.baricenter(), arc.point_at_fraction(f), d);
                    if !s.contains(p, 0.0) {
                        continue;
                    }
                    let p = PantsPoint { sheet: Sheet::Back, point: p };
                    let PantsImage::Point(q) = m.eval(p).unwrap() else { continue };
                    let back = m.eval_inverse(q).unwrap();
                    assert!(m.source().same_point(back, p, 1e-8));
                }
            }
        }
    }

    #[test]
    fn identity_distortion() {
        let hex = hexagon_from_sides(0.7, 1.0, 1.3).unwrap();
        let m = pants_map(&hex, &hex, [0.0; 3]).unwrap();
        let d = m.distortion(8, [Some(f64::INFINITY); 3]).unwrap();
        assert!(d.sup_eps() < 1e-6, "{}", d.sup_eps());
        assert!((d.sup_k() - 1.0).abs() < 1e-6);
    }
}
