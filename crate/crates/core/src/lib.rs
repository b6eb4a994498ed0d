//! Collar and hexagon geometry, standard quasiconformal maps between hyperbolic
//! annuli and pairs of pants, conformal moduli, and Fenchel–Nielsen convergence checks
//! in augmented Teichmüller space.

pub mod error;
pub mod hyp;
pub mod collar;
pub mod moduli;
pub mod standard_maps;
pub mod teich;
pub mod qc_bounds;
pub mod cli;

pub use error::{Error, Result};
