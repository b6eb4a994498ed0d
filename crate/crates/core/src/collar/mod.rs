//! Collar charts, right-angled hexagons, their core regions and the doubled pairs of pants.

mod hexagon;
mod pants;
mod regions;


pub use hexagon::{hexagon_from_sides, AlphaSide, HexagonGeometry};
pub use pants::{double_to_pants, PantsGeometry, PantsPoint, Sheet};
pub use regions::{hexagon_regions, hexagon_regions_with, CollarRegion, HexRegions};



use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Hypercycle length ℓ cosh d and collar area ℓ sinh d at distance d from a geodesic of length ℓ.
pub fn collar_quantities(len: f64, d: f64) -> Result<(f64, f64)> {
    if !(len > 0.0 && d > 0.0) || !len.is_finite() || !d.is_finite() {
        return Err(Error::domain(format!("collar quantities need positive ℓ and d, got ({len}, {d})")));
    }
    Ok((len * d.cosh(), len * d.sinh()))
}

/// Area fraction of the collar around the core in the default profile.
///
/// With ξ below, t·cosh h/2 + tan ξ·(sinh²h + t²/4) ≤ 3/16 < 1/4, which keeps
/// the capped collar inside the half-area collar for every h.
pub fn t_profile(h: f64) -> f64 {
    1.0 / (4.0 * h.cosh())
}

/// Admissible incidence angle in the default profile.
pub fn xi_profile(h: f64) -> f64 {
    PI / (4.0 * (1.0 + 16.0 * h.sinh().powi(2)))
}

/// The annulus A_t(ℓ): Fermi coordinates (ρ ∈ [0, D], x ∈ [0, ℓ)) for ℓ > 0, and
/// cusp coordinates (x ∈ [0, 1), y ≥ 1/t) for ℓ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollarChart {
    length: f64,
    t: f64,
    width: f64,
    outer_length: f64,
    area: f64,
}

/// A point in collar chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChartPoint {
    Fermi { rho: f64, x: f64 },
    Cusp { x: f64, y: f64 },
    /// The cusp itself, reached as the image of a pinched geodesic.
    CuspIdeal,
}

pub fn collar_chart(len: f64, t: f64) -> Result<CollarChart> {
    if !(len >= 0.0) || !len.is_finite() {
        return Err(Error::domain(format!("geodesic length {len} must be finite and nonnegative")));
    }
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::domain(format!("area fraction {t} outside (0, 1]")));
    }
    if len == 0.0 {
        return Ok(CollarChart {
            length: 0.0,
            t,
            width: f64::INFINITY,
            outer_length: t,
            area: t,
        });
    }
    let width = (t / (2.0 * (len / 2.0).sinh())).asinh();
    Ok(CollarChart {
        length: len,
        t,
        width,
        outer_length: len * width.cosh(),
        area: len * width.sinh(),
    })
}

impl CollarChart {
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Distance D from the geodesic to the bounding hypercycle (∞ for cusps).
    pub fn width(&self) -> f64 {
        self.width
    }

    /// Length of the bounding hypercycle (horocycle length t for cusps).
    pub fn outer_length(&self) -> f64 {
        self.outer_length
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn is_cusp(&self) -> bool {
        self.length == 0.0
    }

    /// Height of the bounding horocycle in the cusp chart.
    pub fn boundary_height(&self) -> f64 {
        1.0 / self.t
    }

    /// Fraction q ∈ [0, 1] of the way from the core curve (q = 0) to the outer boundary,
    /// measured by hypercycle (or horocycle) length.
    pub fn length_fraction(&self, p: ChartPoint) -> Result<f64> {
        match (p, self.is_cusp()) {
            (ChartPoint::Fermi { rho, .. }, false) => {
                Ok(((rho / 2.0).sinh() / (self.width / 2.0).sinh()).powi(2))
            }
            (ChartPoint::Cusp { y, .. }, true) => Ok(1.0 / (y * self.t)),
            (ChartPoint::CuspIdeal, true) => Ok(0.0),
            _ => Err(Error::domain("chart point does not match the collar type")),
        }
    }

    /// Whether the point lies in the closed collar.
    pub fn contains(&self, p: ChartPoint) -> bool {
        match (p, self.is_cusp()) {
            (ChartPoint::Fermi { rho, .. }, false) => rho.abs() <= self.width,
            (ChartPoint::Cusp { y, .. }, true) => y >= 1.0 / self.t,
            (ChartPoint::CuspIdeal, true) => true,
            _ => false,
        }
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn side() -> impl Strategy<Value = f64> {
        prop_oneof![1 => Just(0.0), 4 => 0.05..4.0f64]
    }

    proptest! {
        #[test]
        fn collar_pythagoras(len in 1e-3..10.0f64, d in 1e-3..5.0f64) {
            let (outer, area) = collar_quantities(len, d).unwrap();
            let rel = (outer * outer - len * len - area * area).abs() / (outer * outer);
            prop_assert!(rel < 1e-12);
        }

        #[test]
        fn chart_width_matches_area_fraction(len in 1e-3..10.0f64, t in 0.01..1.0f64) {
            let c = collar_chart(len, t).unwrap();
            prop_assert!((c.area() - t / (2.0 * (len / 2.0).sinh()) * len).abs() < 1e-12 * (1.0 + c.area()));
        }

        #[test]
        fn profiles_strictly_decreasing(h in 0.0..5.0f64, dh in 1e-3..0.5f64) {
            prop_assert!(t_profile(h + dh) < t_profile(h));
            prop_assert!(xi_profile(h + dh) < xi_profile(h));
        }

        #[test]
        fn hexagon_seams_match_measurement(h1 in side(), h2 in side(), h3 in side()) {
            prop_assume!([h1, h2, h3].iter().filter(|h| **h == 0.0).count() < 3);
            let hex = hexagon_from_sides(h1, h2, h3).unwrap();
            for (a, b) in hex.seams().iter().zip(hex.measured_seams()) {
                if a.is_infinite() {
                    prop_assert!(b == *a);
                    continue;
                }
                prop_assert!((a - b).abs() < 1e-8, "{} vs {}", a, b);
            }
            for (a, b) in [h1, h2, h3].iter().zip(hex.measured_sides()) {
                prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
            }
        }
    }
}
