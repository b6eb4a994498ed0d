use super::distortion::{measure_distortion, DistortionReport};
use super::profile::TwistProfile;
use crate::collar::{ChartPoint, CollarChart};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Half-plane image of a collar chart point: Fermi (ρ, X) ↦ e^X(−tanh ρ + i sech ρ),
/// cusp (X, y) ↦ −X + iy. Both carry the hyperbolic metric |dz|²/y².
pub fn chart_to_halfplane(p: ChartPoint) -> Result<Complex64> {
    match p {
        ChartPoint::Fermi { rho, x } => Ok(Complex64::new(-rho.tanh(), 1.0 / rho.cosh()) * x.exp()),
        ChartPoint::Cusp { x, y } => Ok(Complex64::new(-x, y)),
        ChartPoint::CuspIdeal => Err(Error::domain("the cusp has no half-plane image")),
    }
}

/// Inverse of `chart_to_halfplane` for the given chart type (no wrapping of X).
pub fn halfplane_to_chart(z: Complex64, cusp: bool) -> ChartPoint {
    if cusp {
        ChartPoint::Cusp { x: -z.re, y: z.im }
    } else {
        ChartPoint::Fermi { rho: (-z.re / z.im).asinh(), x: z.norm().ln() }
    }
}

/// The standard map σ_a(ϑ) from A_t(ℓ) to A_t̃(ℓ̃).
#[derive(Debug, Clone)]
pub struct AnnulusMap {
    source: CollarChart,
    target: CollarChart,
    theta: f64,
    profile: TwistProfile,
}

impl AnnulusMap {
    /// `theta` is in turns of the target circumference.
    pub fn new(source: CollarChart, target: CollarChart, theta: f64, profile: TwistProfile) -> Result<Self> {
        if source.is_cusp() && !target.is_cusp() {
            return Err(Error::domain("a cusp can only be mapped to a cusp"));
        }
        if !theta.is_finite() {
            return Err(Error::domain("twist must be finite"));
        }
        Ok(Self { source, target, theta, profile })
    }

    pub fn source(&self) -> &CollarChart {
        &self.source
    }

    pub fn target(&self) -> &CollarChart {
        &self.target
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Ratio sinh(D̃/2)/sinh(D/2) of the odd radial rule sinh(ρ̃/2) = k·sinh(ρ/2),
    /// which matches hypercycle-length fractions (L−ℓ)/(ℓ‴−ℓ).
    fn radial_ratio(&self) -> f64 {
        (self.target.width() / 2.0).sinh() / (self.source.width() / 2.0).sinh()
    }

    fn twist(&self, rho_t: f64) -> f64 {
        self.theta * (1.0 - self.profile.cumulative(rho_t / self.target.width()))
    }

    pub fn eval(&self, p: ChartPoint) -> Result<ChartPoint> {
        match (p, self.source.is_cusp(), self.target.is_cusp()) {
            (ChartPoint::Fermi { rho, x }, false, false) => {
                let rho_t = 2.0 * ((rho / 2.0).sinh() * self.radial_ratio()).asinh();
                let u = x / self.source.length() + self.twist(rho_t);
                Ok(ChartPoint::Fermi { rho: rho_t, x: u * self.target.length() })
            }
            (ChartPoint::Fermi { rho, x }, false, true) => {
                // rounding puts points of the boundary geodesic slightly outside
                if rho < -1e-9 {
                    return Err(Error::domain("pinched collar is one-sided"));
                }
                if rho <= 1e-12 {
                    return Ok(ChartPoint::CuspIdeal);
                }
                let q = self.source.length_fraction(ChartPoint::Fermi { rho, x })?;
                if q == 0.0 {
                    return Ok(ChartPoint::CuspIdeal);
                }
                Ok(ChartPoint::Cusp { x: x / self.source.length(), y: 1.0 / (q * self.target.t()) })
            }
            (ChartPoint::Cusp { x, y }, true, true) => {
                Ok(ChartPoint::Cusp { x, y: y * self.source.t() / self.target.t() })
            }
            (ChartPoint::CuspIdeal, true, true) => Ok(ChartPoint::CuspIdeal),
            _ => Err(Error::domain("chart point does not match the source collar")),
        }
    }

    pub fn eval_inverse(&self, p: ChartPoint) -> Result<ChartPoint> {
        match (p, self.source.is_cusp(), self.target.is_cusp()) {
            (ChartPoint::Fermi { rho, x }, false, false) => {
                let u = x / self.target.length() - self.twist(rho);
                let rho_s = 2.0 * ((rho / 2.0).sinh() / self.radial_ratio()).asinh();
                Ok(ChartPoint::Fermi { rho: rho_s, x: u * self.source.length() })
            }
            (ChartPoint::Cusp { x, y }, false, true) => {
                if !(y > 0.0) {
                    return Err(Error::domain("cusp height must be positive"));
                }
                let q = 1.0 / (y * self.target.t());
                let rho = 2.0 * (q.sqrt() * (self.source.width() / 2.0).sinh()).asinh();
                Ok(ChartPoint::Fermi { rho, x: x * self.source.length() })
            }
            (ChartPoint::CuspIdeal, false, true) => Ok(ChartPoint::Fermi { rho: 0.0, x: 0.0 }),
            (ChartPoint::Cusp { x, y }, true, true) => {
                Ok(ChartPoint::Cusp { x, y: y * self.target.t() / self.source.t() })
            }
            (ChartPoint::CuspIdeal, true, true) => Ok(ChartPoint::CuspIdeal),
            _ => Err(Error::domain("chart point does not match the target collar")),
        }
    }

    /// Distortion on a `resolution`² product grid: ρ across the whole two-sided collar
    /// (the outer side only when the target is a cusp), or log y over [1/t, 8/t] for a cusp.
    pub fn distortion(&self, resolution: usize) -> Result<DistortionReport> {
        if resolution == 0 {
            return Err(Error::domain("resolution must be positive"));
        }
        let n = resolution;
        let c = &self.source;
        let mut pts = Vec::with_capacity(n * n);
        for j in 0..n {
            let s = (j as f64 + 0.5) / n as f64;
            for k in 0..n {
                let x = (k as f64 + 0.5) / n as f64;
                let p = if c.is_cusp() {
                    ChartPoint::Cusp { x, y: c.boundary_height() * 8f64.powf(s) }
                } else if self.target.is_cusp() {
                    ChartPoint::Fermi { rho: c.width() * s, x: x * c.length() }
                } else {
                    ChartPoint::Fermi { rho: c.width() * (2.0 * s - 1.0), x: x * c.length() }
                };
                pts.push(Some(chart_to_halfplane(p)?));
            }
        }
        let f = |z: Complex64| self.eval_halfplane(z);
        measure_distortion(&f, &pts, n)
    }

    /// The map in half-plane coordinates of the two charts.
    pub fn eval_halfplane(&self, z: Complex64) -> Result<Complex64> {
        chart_to_halfplane(self.eval(halfplane_to_chart(z, self.source.is_cusp()))?)
    }

    pub fn eval_inverse_halfplane(&self, z: Complex64) -> Result<Complex64> {
        chart_to_halfplane(self.eval_inverse(halfplane_to_chart(z, self.target.is_cusp()))?)
    }
}
