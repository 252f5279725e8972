//! Mean photon number and number variance of squeezed coherent photons in
//! thermal states.
//!
//! * [`types`]: validated parameters and the ideal Bose gas occupancy.
//! * [`closed_form`]: the closed-form means and variances for both orderings
//!   and the parameter map relating them.
//! * [`spectral`]: delta-atom spectral functions of the integral
//!   representation, chemical potentials and the equilibrium temperature.
//! * [`fock`]: a truncated Fock-space density-matrix oracle that checks the
//!   closed forms by brute force.

pub mod closed_form;
mod error;
pub mod fock;
pub mod spectral;
pub mod types;

pub use closed_form::{ModeParameters, NumberStatistics, StateKind};
pub use error::{Error, Result};
pub use types::{CoherentAmplitude, ComplexValue, DimensionlessTemperature, SqueezeParameter};
