use crate::error::{Error, Result};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

/// Arithmetic–geometric mean, iterated until the two means agree to 1e−15 relative.
pub fn agm(a: f64, b: f64) -> f64 {
    let (mut a, mut b) = (a, b);
    for _ in 0..64 {
        if (a - b).abs() <= 1e-15 * a {
            break;
        }
        let m = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = m;
    }
    0.5 * (a + b)
}

/// Complete elliptic integral of the first kind with modulus k.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::domain(format!("elliptic modulus {k} outside [0, 1)")));
    }
    Ok(FRAC_PI_2 / agm(1.0, complement(k)))
}

/// √(1 − r²) without cancellation near r = 1.
fn complement(r: f64) -> f64 {
    ((1.0 - r) * (1.0 + r)).sqrt()
}

/// Modulus μ(r) of the Grötzsch domain (unit disc slit along [0, r]):
/// μ(r) = (π/2)·K(r′)/K(r), so that μ(1/√2) = π/2 and μ(r) ~ log(4/r).
pub fn grotzsch_mu(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::domain(format!("Grötzsch argument {r} outside (0, 1)")));
    }
    if r < 1e-300 {
        return Err(Error::domain(format!("Grötzsch argument {r} underflows")));
    }
    let rc = complement(r);
    if rc < 1e-300 {
        return Err(Error::domain(format!("Grötzsch argument {r} indistinguishable from 1")));
    }
    Ok(FRAC_PI_2 * agm(1.0, rc) / agm(1.0, r))
}

/// The same extremal quantity in ring-modulus units: μ(r)/(2π) ~ log(4/r)/(2π).
pub fn grotzsch_ring_modulus(r: f64) -> Result<f64> {
    Ok(grotzsch_mu(r)? / (2.0 * PI))
}

/// Solve μ(r) = m; returns (r, √(1−r²)) with both components accurate.
pub(crate) fn mu_inverse_pair(m: f64) -> Result<(f64, f64)> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::domain(format!("μ⁻¹ argument {m} must be positive and finite")));
    }
    if m == FRAC_PI_2 {
        return Ok((FRAC_1_SQRT_2, FRAC_1_SQRT_2));
    }
    if m < FRAC_PI_2 {
        let (s, sc) = mu_inverse_pair(PI * PI / (4.0 * m))?;
        return Ok((sc, s));
    }
    // log(1/r) < μ(r) < log(4/r) brackets the root in log r.
    let mut lo = -m;
    let mut hi = (4f64.ln() - m).min(FRAC_1_SQRT_2.ln());
    if lo < -700.0 {
        return Err(Error::domain(format!("μ⁻¹({m}) underflows double precision")));
    }
    let f = |lr: f64| grotzsch_mu(lr.exp()).map(|v| v - m);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = (0.5 * (lo + hi)).exp();
    Ok((r, complement(r)))
}

/// Inverse of the Grötzsch modulus, by bisection on log r.
pub fn mu_inverse(m: f64) -> Result<f64> {
    let (r, _) = mu_inverse_pair(m)?;
    if r >= 1.0 {
        return Err(Error::domain(format!("μ⁻¹({m}) is indistinguishable from 1")));
    }
    Ok(r)
}

/// Inverse of the ring-unit modulus: r with μ(r)/(2π) = m.
pub fn ring_modulus_inverse(m: f64) -> Result<f64> {
    mu_inverse(2.0 * PI * m)
}

/// Distortion function λ(K) = μ⁻¹(πK/2)⁻² − 1, evaluated as r′²/r².
pub fn lambda_of_k(k: f64) -> Result<f64> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("λ argument {k} must be positive")));
    }
    let (r, rc) = mu_inverse_pair(FRAC_PI_2 * k)?;
    let v = (rc / r).powi(2);
    if !v.is_finite() {
        return Err(Error::domain(format!("λ({k}) overflows")));
    }
    Ok(v)
}
