use super::complex::{FNPoint, PantsComplex};
use crate::error::{Error, Result};

/// Residuals below this count as zero in the coordinate trend.
pub const COORDINATE_FLOOR: f64 = 1e-12;

/// Number of trailing residuals that must decrease strictly.
pub const TAIL: usize = 3;

/// Residual history of one coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub label: String,
    pub residuals: Vec<f64>,
    pub converges: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceVerdict {
    pub converges: bool,
    pub tol: f64,
    pub trajectories: Vec<Trajectory>,
    /// Twists left out because the target curve is a node.
    pub inert: Vec<String>,
}

/// Trend rule: the last value is at most `tol` and each step of the tail
/// decreases strictly, unless it already sits at or below `floor`.
pub fn trend_converges(values: &[f64], tol: f64, floor: f64) -> bool {
    let Some(&last) = values.last() else { return false };
    if !(last <= tol) {
        return false;
    }
    let start = values.len().saturating_sub(TAIL);
    values[start..].windows(2).all(|w| w[1] < w[0] || w[1] <= floor)
}

/// Trend rule for quantities without a common scale: the tail decreases strictly
/// and the last value is at most `tol` times the first. Sequences sitting at or below
/// `floor` throughout count as converged.
pub fn relative_trend_converges(values: &[f64], tol: f64, floor: f64) -> bool {
    let (Some(&first), Some(&last)) = (values.first(), values.last()) else { return false };
    if values.iter().all(|v| *v <= floor) {
        return true;
    }
    if !(last <= tol * first.max(floor)) {
        return false;
    }
    let start = values.len().saturating_sub(TAIL);
    values[start..].windows(2).all(|w| w[1] < w[0] || w[1] <= floor)
}

fn trajectory(label: String, residuals: Vec<f64>, tol: f64) -> Trajectory {
    let converges = trend_converges(&residuals, tol, COORDINATE_FLOOR);
    Trajectory { label, residuals, converges }
}

/// Convergence in augmented Teichmüller space read off Fenchel–Nielsen coordinates:
/// all lengths converge, twists only at curves of positive target length.
pub fn converge_check_coordinates(
    complex: &PantsComplex,
    target: &FNPoint,
    sequence: &[FNPoint],
    tol: f64,
) -> Result<ConvergenceVerdict> {
    if sequence.is_empty() {
        return Err(Error::Structure("the sequence is empty".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance {tol} must be positive")));
    }
    target.validate(complex)?;
    for (n, p) in sequence.iter().enumerate() {
        p.validate(complex).map_err(|e| match e {
            Error::Structure(m) => Error::Structure(format!("sequence term {}: {m}", n + 1)),
            other => other,
        })?;
    }
    let mut trajectories = Vec::new();
    let mut inert = Vec::new();
    for i in 0..complex.n_curves() {
        let r = sequence.iter().map(|p| (p.lengths[i] - target.lengths[i]).abs()).collect();
        trajectories.push(trajectory(format!("l{}", i + 1), r, tol));
    }
    for i in 0..complex.n_curves() {
        if target.twist_inert(i) {
            inert.push(format!("tau{}", i + 1));
            continue;
        }
        let r = sequence.iter().map(|p| (p.twists[i] - target.twists[i]).abs()).collect();
        trajectories.push(trajectory(format!("tau{}", i + 1), r, tol));
    }
    for k in 0..complex.free_slots().len() {
        let r = sequence.iter().map(|p| (p.free[k] - target.free[k]).abs()).collect();
        trajectories.push(trajectory(format!("b{}", k + 1), r, tol));
    }
    Ok(ConvergenceVerdict {
        converges: trajectories.iter().all(|t| t.converges),
        tol,
        trajectories,
        inert,
    })
}
