use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;

/// Relative step of the central differences, in units of the local chart scale Im z.
pub const JACOBIAN_STEP: f64 = 1e-6;

/// Pointwise distortion of a map between hyperbolic half-plane charts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointDistortion {
    pub point: Complex64,
    /// Largest |λ − 1| over the eigenvalues λ of the pullback metric relative to the source metric.
    pub eps: f64,
    /// Same for the inverse map, at the image point.
    pub eps_inverse: f64,
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionReport {
    pub samples: Vec<PointDistortion>,
    pub sup_eps: f64,
    pub sup_eps_inverse: f64,
    pub sup_k: f64,
    /// Samples skipped as lying on the singular set.
    pub skipped: usize,
    pub resolution: usize,
}

/// Distortion at `z` of `f`, with both charts carrying |dz|²/y².
pub fn point_distortion(f: &(dyn Fn(Complex64) -> Result<Complex64> + Sync), z: Complex64) -> Result<PointDistortion> {
    let h = JACOBIAN_STEP * z.im;
    let fz = f(z)?;
    let dx = (f(z + h)? - f(z - h)?) / (2.0 * h);
    let dy = (f(z + Complex64::i() * h)? - f(z - Complex64::i() * h)?) / (2.0 * h);
    let (a, c, b, d) = (dx.re, dx.im, dy.re, dy.im);
    let f_z = Complex64::new(a + d, c - b) / 2.0;
    let f_zbar = Complex64::new(a - d, c + b) / 2.0;
    let (p, q) = (f_z.norm(), f_zbar.norm());
    if !(p > q) {
        return Err(Error::Orientation(p, q));
    }
    // singular values of J are p ± q; the metric factor is (y/ỹ)²
    let scale = (z.im / fz.im).powi(2);
    let hi = scale * (p + q).powi(2);
    let lo = scale * (p - q).powi(2);
    Ok(PointDistortion {
        point: z,
        eps: (hi - 1.0).abs().max((lo - 1.0).abs()),
        eps_inverse: (1.0 / hi - 1.0).abs().max((1.0 / lo - 1.0).abs()),
        k: (p + q) / (p - q),
    })
}

/// Sample `f` at the given points; `None` entries are singular-set samples and are skipped.
pub fn measure_distortion(
    f: &(dyn Fn(Complex64) -> Result<Complex64> + Sync),
    samples: &[Option<Complex64>],
    resolution: usize,
) -> Result<DistortionReport> {
    let results: Vec<Option<PointDistortion>> = samples
        .par_iter()
        .map(|s| s.map(|z| point_distortion(f, z)).transpose())
        .collect::<Result<_>>()?;
    let skipped = results.iter().filter(|r| r.is_none()).count();
    let samples: Vec<PointDistortion> = results.into_iter().flatten().collect();
    let sup_eps = samples.iter().map(|s| s.eps).fold(0.0, f64::max);
    let sup_eps_inverse = samples.iter().map(|s| s.eps_inverse).fold(0.0, f64::max);
    let sup_k = samples.iter().map(|s| s.k).fold(1.0, f64::max);
    Ok(DistortionReport { samples, sup_eps, sup_eps_inverse, sup_k, skipped, resolution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_and_isometry() {
        let id = |z: Complex64| Ok(z);
        let d = point_distortion(&id, Complex64::new(0.3, 2.0)).unwrap();
        assert!(d.eps < 1e-9 && (d.k - 1.0).abs() < 1e-9);
        let iso = |z: Complex64| Ok((2.0 * z + 1.0) / (z + 3.0));
        let d = point_distortion(&iso, Complex64::new(-0.4, 0.7)).unwrap();
        assert!(d.eps < 1e-8 && (d.k - 1.0).abs() < 1e-8);
    }

    #[test]
    fn affine_stretch() {
        for c in [1.5, 3.0] {
            let f = move |z: Complex64| Ok(Complex64::new(z.re, c * z.im));
            let d = point_distortion(&f, Complex64::new(1.0, 0.5)).unwrap();
            assert_abs_diff_eq!(d.k, c, epsilon = 1e-8);
            assert_abs_diff_eq!(d.eps, 1.0 - 1.0 / (c * c), epsilon = 1e-8);
            assert_abs_diff_eq!(d.eps_inverse, c * c - 1.0, epsilon = 1e-7);
        }
    }

    #[test]
    fn reflection_is_rejected() {
        let f = |z: Complex64| Ok(Complex64::new(-z.re, z.im));
        assert!(matches!(point_distortion(&f, Complex64::new(0.0, 1.0)), Err(Error::Orientation(..))));
    }

    #[test]
    fn report_skips_and_sups() {
        let f = |z: Complex64| Ok(Complex64::new(z.re, 2.0 * z.im));
        let pts = vec![Some(Complex64::new(0.0, 1.0)), None, Some(Complex64::new(1.0, 3.0))];
        let r = measure_distortion(&f, &pts, 2).unwrap();
        assert_eq!(r.skipped, 1);
        assert_eq!(r.samples.len(), 2);
        assert_abs_diff_eq!(r.sup_k, 2.0, epsilon = 1e-8);
    }
}
