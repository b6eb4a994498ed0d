//! Quantitative constants of the quasiconformal criterion: K_ε, K′_ε, K̃, K̂,
//! the extension constant C(r), and the translation that moves h(0) to 0.

mod translate;

pub use translate::{disc_distortion, translate_to_fix_origin, FixedOriginMap};

use crate::error::{Error, Result};
use crate::moduli::{lambda_of_k, mu_inverse_pair};
use std::f64::consts::PI;

/// The constants β₀ > 1, β₁ > 0 of the distortion and extension estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniversalConstants {
    b0: f64,
    b1: f64,
}

impl Default for UniversalConstants {
    fn default() -> Self {
        Self { b0: 2.0, b1: 1.0 }
    }
}

impl UniversalConstants {
    pub fn new(b0: f64, b1: f64) -> Result<Self> {
        if !(b0 > 1.0) || !b0.is_finite() {
            return Err(Error::domain(format!("β₀ = {b0} must exceed 1")));
        }
        if !(b1 > 0.0) || !b1.is_finite() {
            return Err(Error::domain(format!("β₁ = {b1} must be positive")));
        }
        Ok(Self { b0, b1 })
    }

    pub fn b0(&self) -> f64 {
        self.b0
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    KEps,
    KTilde,
    KHat,
}

impl BoundKind {
    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::KEps => "k-eps",
            BoundKind::KTilde => "k-tilde",
            BoundKind::KHat => "k-hat",
        }
    }
}

/// A bound with its inputs and intermediate values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub k: f64,
    pub eps: f64,
    pub constants: UniversalConstants,
    /// K_ε, or K′_ε for K̂
    pub k_eps: f64,
    /// λ(K_ε)² (or λ(K′_ε)²)
    pub lambda_sq: Option<f64>,
    /// bound on |h(0)|
    pub d_bound: Option<f64>,
    /// (1+d)/(1−d)
    pub translation_factor: Option<f64>,
    pub bound: f64,
}

fn check_inputs(k: f64, eps: f64) -> Result<()> {
    if !(k >= 1.0) || !k.is_finite() {
        return Err(Error::domain(format!("K = {k} must be at least 1")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("ε = {eps} must lie in (0, 1)")));
    }
    Ok(())
}

/// K(1 + (β₀ − 1 + β₁(1 − ε^{1/root})⁻²)/(1 + log(1/ε)/divisor)).
fn distortion_factor(k: f64, eps: f64, c: &UniversalConstants, root: f64, divisor: f64) -> f64 {
    let s = eps.powf(1.0 / root);
    let log_inv = -eps.ln();
    k * (1.0 + (c.b0 - 1.0 + c.b1 / (1.0 - s).powi(2)) / (1.0 + log_inv / divisor))
}

/// K_ε = K(1 + (β₀ − 1 + β₁(1 − √ε)⁻²)/(1 + log(1/ε))).
pub fn k_eps(k: f64, eps: f64, c: &UniversalConstants) -> Result<f64> {
    check_inputs(k, eps)?;
    Ok(distortion_factor(k, eps, c, 2.0, 1.0))
}

/// K̃ = λ(K_ε)².
pub fn k_tilde(k: f64, eps: f64, c: &UniversalConstants) -> Result<f64> {
    Ok(lambda_of_k(k_eps(k, eps, c)?)?.powi(2))
}

/// K̂ = λ(K′_ε)²·(1+d)/(1−d), K′_ε with ε^{1/8} and log(1/ε)/8, d ≤ μ⁻¹(log(1/ε)/(8πK)).
pub fn k_hat(k: f64, eps: f64, c: &UniversalConstants) -> Result<BoundReport> {
    check_inputs(k, eps)?;
    let kp = distortion_factor(k, eps, c, 8.0, 8.0);
    // inputs are valid here, so a failure means λ(K′_ε) is beyond double range
    let lambda_sq = lambda_of_k(kp)
        .map_err(|_| Error::BoundVacuous(format!("λ(K′_ε) with K′_ε = {kp:.6e} overflows; ε = {eps} is too large")))?
        .powi(2);
    if !lambda_sq.is_finite() {
        return Err(Error::BoundVacuous(format!("λ(K′_ε)² overflows for K′_ε = {kp:.6e}")));
    }
    let arg = -eps.ln() / (8.0 * PI * k);
    let (d, dc) = mu_inverse_pair(arg).map_err(|_| {
        Error::BoundVacuous(format!(
            "displacement bound μ⁻¹({arg:.6e}) is 1 to double precision; ε = {eps} is too large for K = {k}"
        ))
    })?;
    if !(d < 1.0) || dc == 0.0 {
        return Err(Error::BoundVacuous(format!("displacement bound d = {d} is not below 1")));
    }
    // (1+d)/(1−d) = (1+d)²/(1−d²), accurate when d is near 1
    let factor = (1.0 + d).powi(2) / (dc * dc);
    Ok(BoundReport {
        kind: BoundKind::KHat,
        k,
        eps,
        constants: *c,
        k_eps: kp,
        lambda_sq: Some(lambda_sq),
        d_bound: Some(d),
        translation_factor: Some(factor),
        bound: lambda_sq * factor,
    })
}

/// Report for any of the three bounds.
pub fn bound_report(kind: BoundKind, k: f64, eps: f64, c: &UniversalConstants) -> Result<BoundReport> {
    match kind {
        BoundKind::KHat => k_hat(k, eps, c),
        BoundKind::KEps | BoundKind::KTilde => {
            let ke = k_eps(k, eps, c)?;
            let lambda_sq = (kind == BoundKind::KTilde).then(|| lambda_of_k(ke).map(|l| l * l)).transpose()?;
            Ok(BoundReport {
                kind,
                k,
                eps,
                constants: *c,
                k_eps: ke,
                lambda_sq,
                d_bound: None,
                translation_factor: None,
                bound: lambda_sq.unwrap_or(ke),
            })
        }
    }
}

/// C(r) = β₀ + β₁(1 − r)⁻².
pub fn extension_constant(r: f64, c: &UniversalConstants) -> Result<f64> {
    if !(r >= 0.0 && r < 1.0) {
        return Err(Error::domain(format!("radius {r} must lie in [0, 1)")));
    }
    Ok(c.b0 + c.b1 / (1.0 - r).powi(2))
}
