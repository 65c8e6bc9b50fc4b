//! Fluctuation-induced forces and heat transfer between two parallel plates
//! in uniform relative motion at different temperatures.
//!
//! Quantities are dimensionless throughout: ħ = c = k_B = 1 and lengths are
//! measured in units of the gap width.

// `!(x > 0.0)` is used deliberately so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cavity;
pub mod error;
pub mod green;
pub mod kinematics;
pub mod linalg;
pub mod material;
pub mod quadrature;
pub mod reflection;
pub mod spectral;
pub mod validation;

pub use cavity::{CavityConfig, Plate};
pub use error::{Error, Result};
pub use material::{DispersionModel, Material};
pub use quadrature::{integrate_channel, integrate_force, integrate_heat, IntegrationPlan, StressResult};
pub use spectral::Channel;
