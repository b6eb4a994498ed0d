use super::hexagon::HexagonGeometry;
use super::{collar_chart, ChartPoint, CollarChart};
use crate::error::{Error, Result};
use crate::hyp::{fermi_coords, fermi_point, HyperbolicPoint};
use num_complex::Complex64;

/// Which copy of the hexagon a point of the double lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sheet {
    Front,
    Back,
}

impl Sheet {
    pub fn other(self) -> Self {
        match self {
            Sheet::Front => Sheet::Back,
            Sheet::Back => Sheet::Front,
        }
    }
}

/// A point of the pair of pants dH: a hexagon point plus the sheet it sits on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PantsPoint {
    pub sheet: Sheet,
    pub point: HyperbolicPoint,
}

/// The double of a hexagon along its seams. The back sheet carries the
/// opposite orientation, so the two copies of each seam are glued pointwise.
#[derive(Debug, Clone)]
pub struct PantsGeometry {
    hexagon: HexagonGeometry,
}

pub fn double_to_pants(hex: &HexagonGeometry) -> PantsGeometry {
    PantsGeometry { hexagon: hex.clone() }
}

impl PantsGeometry {
    pub fn hexagon(&self) -> &HexagonGeometry {
        &self.hexagon
    }

    /// Lengths 2h_i of the boundary curves dα_i (0 for cusps).
    pub fn boundary_lengths(&self) -> [f64; 3] {
        self.hexagon.sides().map(|h| 2.0 * h)
    }

    /// Which seam copies glue: seam k of the front sheet to seam k of the back sheet.
    pub fn gluing(&self) -> [(Sheet, usize, Sheet, usize); 3] {
        std::array::from_fn(|k| (Sheet::Front, k, Sheet::Back, k))
    }

    /// The doubling involution, swapping sheets.
    pub fn involution(&self, p: PantsPoint) -> PantsPoint {
        PantsPoint { sheet: p.sheet.other(), point: p.point }
    }

    /// Whether the point lies on a seam, where the two sheets are identified.
    pub fn on_seam(&self, p: HyperbolicPoint, tol: f64) -> bool {
        (0..3).any(|i| self.hexagon.seam_line_after(i).signed_distance(p).abs() <= tol)
    }

    /// Distance-free identity test on dH: same sheet and point, or a seam point on both sheets.
    pub fn same_point(&self, a: PantsPoint, b: PantsPoint, tol: f64) -> bool {
        let close = crate::hyp::distance(a.point, b.point) <= tol;
        close && (a.sheet == b.sheet || self.on_seam(a.point, tol))
    }

    /// Collar A_t(dα_i) of the doubled boundary curve.
    pub fn collar_chart(&self, i: usize, t: f64) -> Result<CollarChart> {
        collar_chart(2.0 * self.hexagon.sides()[i], t)
    }

    /// Coordinates of `p` in the collar chart of dα_i: Fermi (ρ, X) with X ∈ [0, 2h),
    /// or cusp (X, y) with X ∈ [0, 1) and the horocycle of length 1 at height 1.
    pub fn collar_coords(&self, i: usize, p: PantsPoint) -> ChartPoint {
        match (self.hexagon.frame(i), self.hexagon.cusp_chart(i)) {
            (Some(frame), _) => {
                let h = self.hexagon.sides()[i];
                let (rho, x) = fermi_coords(&frame, p.point);
                let x = match p.sheet {
                    Sheet::Front => x,
                    Sheet::Back => 2.0 * h - x,
                };
                ChartPoint::Fermi { rho, x: x.rem_euclid(2.0 * h) }
            }
            (None, Some(chart)) => {
                let z = chart.inverse().apply_c(p.point.to_complex());
                let u = 1.0 - z.re;
                let x = match p.sheet {
                    Sheet::Front => u / 2.0,
                    Sheet::Back => 1.0 - u / 2.0,
                };
                ChartPoint::Cusp { x: x.rem_euclid(1.0), y: z.im / 2.0 }
            }
            _ => unreachable!("every side is finite or ideal"),
        }
    }

    /// Inverse of `collar_coords`.
    pub fn from_collar_coords(&self, i: usize, c: ChartPoint) -> Result<PantsPoint> {
        match (c, self.hexagon.frame(i), self.hexagon.cusp_chart(i)) {
            (ChartPoint::Fermi { rho, x }, Some(frame), _) => {
                let h = self.hexagon.sides()[i];
                let x = x.rem_euclid(2.0 * h);
                let (sheet, x) = if x <= h { (Sheet::Front, x) } else { (Sheet::Back, 2.0 * h - x) };
                Ok(PantsPoint { sheet, point: fermi_point(&frame, rho, x) })
            }
            (ChartPoint::Cusp { x, y }, None, Some(chart)) => {
                if !(y > 0.0) {
                    return Err(Error::domain(format!("cusp height {y} must be positive")));
                }
                let x = x.rem_euclid(1.0);
                let (sheet, u) = if x <= 0.5 { (Sheet::Front, 2.0 * x) } else { (Sheet::Back, 2.0 * (1.0 - x)) };
                let z = chart.apply_c(Complex64::new(1.0 - u, 2.0 * y));
                Ok(PantsPoint { sheet, point: HyperbolicPoint::checked_from_c(z)? })
            }
            _ => Err(Error::domain("chart point does not match the collar type")),
        }
    }
}
