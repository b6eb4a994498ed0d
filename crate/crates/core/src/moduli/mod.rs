//! Conformal moduli of annuli and quadrilaterals, the Grötzsch function and
//! the distortion function λ.

mod grid;
mod special;

pub(crate) use special::mu_inverse_pair;

pub use grid::{grid_quadrilateral_modulus, ModulusMethod, ModulusValue, Quadrilateral, RengelCheck};
pub use special::{
    agm, elliptic_k, grotzsch_mu, grotzsch_ring_modulus, lambda_of_k, mu_inverse, ring_modulus_inverse,
};

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Modulus −log(r)/(2π) of the round annulus r < |z| < 1.
pub fn annulus_modulus(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::domain(format!("inner radius {r} outside (0, 1)")));
    }
    Ok(-r.ln() / (2.0 * PI))
}

/// Modulus a/b of the rectangle with a-sides of length a and b-sides of length b.
pub fn rectangle_modulus(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!("rectangle sides ({a}, {b}) must be positive")));
    }
    Ok(a / b)
}

/// Outcome of the area/modulus inequality Area(D)/Area(R) ≤ 1/(1 + 4π·mod(R∖D)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoperimetricCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// rhs − lhs; negative when violated.
    pub slack: f64,
    pub holds: bool,
}

pub fn isoperimetric_bound(area_inner: f64, area_outer: f64, separating_modulus: f64) -> Result<IsoperimetricCheck> {
    if !(area_inner > 0.0 && area_inner < area_outer) {
        return Err(Error::domain("need 0 < inner area < outer area"));
    }
    if !(separating_modulus >= 0.0) {
        return Err(Error::domain("separating modulus must be nonnegative"));
    }
    let lhs = area_inner / area_outer;
    let rhs = 1.0 / (1.0 + 4.0 * PI * separating_modulus);
    Ok(IsoperimetricCheck {
        lhs,
        rhs,
        slack: rhs - lhs,
        holds: lhs <= rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn annulus_examples() {
        assert_abs_diff_eq!(annulus_modulus((-2.0 * PI).exp()).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(annulus_modulus((-4.0 * PI).exp()).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(annulus_modulus(0.5).unwrap(), 0.11032, epsilon = 1e-5);
        assert!(annulus_modulus(1.0).is_err());
        assert!(annulus_modulus(0.0).is_err());
    }

    #[test]
    fn rectangle_examples() {
        assert_eq!(rectangle_modulus(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(rectangle_modulus(2.0, 1.0).unwrap(), 2.0);
        assert_abs_diff_eq!(rectangle_modulus(1.0, 3.0).unwrap(), 1.0 / 3.0);
        assert!(rectangle_modulus(0.0, 1.0).is_err());
    }

    #[test]
    fn concentric_discs_satisfy_the_bound() {
        for k in 1..10 {
            let rho = k as f64 / 10.0;
            let c = isoperimetric_bound(rho * rho, 1.0, annulus_modulus(rho).unwrap()).unwrap();
            assert!(c.holds);
            assert_abs_diff_eq!(c.rhs, 1.0 / (1.0 - 2.0 * rho.ln()), epsilon = 1e-14);
        }
    }

    #[test]
    fn zero_modulus_and_violation() {
        assert!(isoperimetric_bound(0.99, 1.0, 0.0).unwrap().holds);
        let v = isoperimetric_bound(0.9, 1.0, 10.0).unwrap();
        assert!(!v.holds && v.slack < 0.0);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn complementary_moduli(r in 0.01..0.99f64) {
            let rc = (1.0 - r * r).sqrt();
            let p = grotzsch_mu(r).unwrap() * grotzsch_mu(rc).unwrap();
            prop_assert!((p - PI * PI / 4.0).abs() < 1e-8);
        }

        #[test]
        fn annulus_log_additivity(a in 1e-6..0.999f64, b in 1e-6..0.999f64) {
            let lhs = annulus_modulus(a * b).unwrap();
            let rhs = annulus_modulus(a).unwrap() + annulus_modulus(b).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn mu_decreasing_lambda_increasing(r in 0.01..0.98f64, dr in 1e-3..0.01f64, k in 1.0..9.9f64, dk in 1e-3..0.1f64) {
            prop_assert!(grotzsch_mu(r + dr).unwrap() < grotzsch_mu(r).unwrap());
            prop_assert!(lambda_of_k(k + dk).unwrap() > lambda_of_k(k).unwrap());
        }

        #[test]
        fn lambda_reciprocity(k in 1.0..6.0f64) {
            prop_assert!((lambda_of_k(k).unwrap() * lambda_of_k(1.0 / k).unwrap() - 1.0).abs() < 1e-8);
        }

        #[test]
        fn mu_inverse_round_trip(r in 1e-6..0.999f64) {
            let back = mu_inverse(grotzsch_mu(r).unwrap()).unwrap();
            prop_assert!((back - r).abs() < 1e-9 * (1.0 + r));
        }
    }
}
