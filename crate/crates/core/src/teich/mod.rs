//! Pants complexes, Fenchel–Nielsen coordinates, surface assembly and holonomy,
//! convergence in augmented Teichmüller space and the maps realizing it.

mod complex;
mod convergence;
mod representative;
mod surface;

pub use complex::{FNPoint, Gluing, PantsComplex, Slot};
pub use convergence::{converge_check_coordinates, relative_trend_converges, trend_converges, ConvergenceVerdict, Trajectory, COORDINATE_FLOOR};
pub use representative::{
    good_representative, verify_conditions, ConditionRow, CriterionReport, GoodRepresentative, VerifyOptions,
    INTERFACE_SAMPLES, INTERFACE_TOL, METRIC_FLOOR,
};
pub use surface::{build_surface, curve_word, transverse_word, MarkedSurface, Step, Word};

use crate::error::{Error, Result};

/// tanh(−log(ℓ)/2) = (1−ℓ)/(1+ℓ), the contraction factor of the grafted collar
/// around pinching curves of total length ℓ.
pub fn grafting_contraction_bound(total_length: f64) -> Result<f64> {
    if !(total_length > 0.0) {
        return Err(Error::domain(format!("pinched length {total_length} must be positive")));
    }
    if total_length >= 1.0 {
        return Err(Error::BoundVacuous(format!("pinched length {total_length} is not below 1")));
    }
    Ok((1.0 - total_length) / (1.0 + total_length))
}
