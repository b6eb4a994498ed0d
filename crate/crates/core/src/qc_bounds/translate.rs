use crate::error::{Error, Result};
use crate::standard_maps::{measure_distortion, DistortionReport};
use num_complex::Complex64;

type DiscMap<'a> = dyn Fn(Complex64) -> Result<Complex64> + Sync + 'a;

/// ĥ = R⁻¹∘S∘R∘h, where R rotates h(0) onto [0, 1) and S = T⁻¹∘(u + iv(1+d)/(1−d))∘T
/// with T(z) = i(1−z)/(1+z). S fixes the unit circle pointwise and sends d to 0.
pub struct FixedOriginMap<F> {
    h: F,
    d: f64,
    phase: Complex64,
    factor: f64,
}

/// Post-compose a disc self-map with the (1+d)/(1−d)-quasiconformal map that moves h(0) to 0
/// and is the identity on the unit circle.
pub fn translate_to_fix_origin<F>(h: F) -> Result<FixedOriginMap<F>>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let h0 = h(Complex64::new(0.0, 0.0))?;
    let d = h0.norm();
    if !(d < 1.0) {
        return Err(Error::domain(format!("|h(0)| = {d} is not inside the disc")));
    }
    let phase = if d > 0.0 { h0 / d } else { Complex64::new(1.0, 0.0) };
    Ok(FixedOriginMap { h, d, phase, factor: (1.0 + d) / (1.0 - d) })
}

impl<F> FixedOriginMap<F>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    pub fn displacement(&self) -> f64 {
        self.d
    }

    /// Dilatation (1+d)/(1−d) of the correcting map.
    pub fn factor(&self) -> f64 {
        self.factor
    }

    fn correct(&self, w: Complex64) -> Complex64 {
        if self.d == 0.0 || w.norm() >= 1.0 {
            return w;
        }
        let i = Complex64::i();
        let t = i * (1.0 - w) / (1.0 + w);
        let s = Complex64::new(t.re, t.im * self.factor);
        (i - s) / (i + s)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let w = (self.h)(z)? / self.phase;
        Ok(self.correct(w) * self.phase)
    }
}

/// Distortion of a disc self-map on a polar grid (radii (k+½)/n·0.98, n angles),
/// measured after conjugating into the half-plane by the Cayley transform.
pub fn disc_distortion(f: &DiscMap<'_>, resolution: usize) -> Result<DistortionReport> {
    if resolution == 0 {
        return Err(Error::domain("resolution must be positive"));
    }
    let i = Complex64::i();
    let to_h = |z: Complex64| i * (1.0 - z) / (1.0 + z);
    let to_d = |w: Complex64| (i - w) / (i + w);
    let g = |w: Complex64| -> Result<Complex64> {
        let v = to_h(f(to_d(w))?);
        if !(v.im > 0.0) {
            return Err(Error::domain(format!("map leaves the disc at {}", to_d(w))));
        }
        Ok(v)
    };
    let n = resolution;
    let pts: Vec<Option<Complex64>> = (0..n)
        .flat_map(|k| {
            let r = (k as f64 + 0.5) / n as f64 * 0.98;
            (0..n).map(move |j| Some(to_h(Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / n as f64))))
        })
        .collect();
    measure_distortion(&g, &pts, n)
}
