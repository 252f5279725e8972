//! Closed-form number statistics for the two orderings of squeezing and
//! thermalization:
//!
//! * photons (`a†a`) in a thermal state of squeezed coherent photons
//!   (`ρ_B ∝ exp(-x B†B)`), and
//! * squeezed coherent photons (`B†B`) in a thermal state of photons
//!   (`ρ_a ∝ exp(-x a†a)`),
//!
//! where `B = cosh(r) a + e^{iφ} sinh(r) a† - α`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::types::{thermal_mean, CoherentAmplitude, ComplexValue, DimensionlessTemperature, SqueezeParameter};

/// Beyond this squeeze magnitude `cosh(4r)` exceeds 1e17 and the variance
/// formulas lose all significant digits of their smaller terms.
pub const LARGE_SQUEEZE_R: f64 = 10.0;

/// Which operator is counted in which thermal state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    /// `⟨a†a⟩` and its variance in the thermal state of `B`.
    PhotonsInSqueezedThermal,
    /// `⟨B†B⟩` and its variance in the thermal state of `a`.
    SqueezedInPhotonThermal,
}

impl StateKind {
    pub const ALL: [StateKind; 2] = [StateKind::PhotonsInSqueezedThermal, StateKind::SqueezedInPhotonThermal];

    pub fn name(&self) -> &'static str {
        match self {
            StateKind::PhotonsInSqueezedThermal => "photons-in-squeezed-thermal",
            StateKind::SqueezedInPhotonThermal => "squeezed-in-thermal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeParameters {
    pub squeeze: SqueezeParameter,
    pub coherent: CoherentAmplitude,
    pub x: DimensionlessTemperature,
}

impl ModeParameters {
    pub fn new(squeeze: SqueezeParameter, coherent: CoherentAmplitude, x: DimensionlessTemperature) -> Self {
        Self { squeeze, coherent, x }
    }

    /// Validating constructor from raw `(r, φ, |α|, θ, x)`.
    pub fn from_raw(r: f64, phi: f64, alpha_mag: f64, alpha_phase: f64, x: f64) -> crate::Result<Self> {
        Ok(Self {
            squeeze: SqueezeParameter::new(r, phi)?,
            coherent: CoherentAmplitude::new(alpha_mag, alpha_phase)?,
            x: DimensionlessTemperature::new(x)?,
        })
    }

    fn alpha(&self) -> ComplexValue {
        self.coherent.to_complex()
    }

    fn e_i_phi(&self) -> ComplexValue {
        Complex64::from_polar(1.0, self.squeeze.phi())
    }

    /// Warning text when `r` is large enough that double precision, not the
    /// formulas, limits the accuracy of the results.
    pub fn precision_warning(&self) -> Option<String> {
        let r = self.squeeze.r();
        (r > LARGE_SQUEEZE_R).then(|| {
            format!("r = {r} exceeds {LARGE_SQUEEZE_R}: cosh(4r) > 1e17, results carry few significant digits")
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumberStatistics {
    pub mean: f64,
    pub variance: f64,
}

/// Mixes `α` and `α*` with hyperbolic weights of argument `s`:
/// `α cosh s + sign·α* e^{iφ} sinh s`.
fn mixed_amplitude(p: &ModeParameters, s: f64, sign: f64) -> ComplexValue {
    let alpha = p.alpha();
    alpha * s.cosh() + alpha.conj() * p.e_i_phi() * (sign * s.sinh())
}

/// `α cosh r - α* e^{iφ} sinh r`, the photon-mode displacement of the
/// squeezed coherent vacuum.
pub fn effective_amplitude(p: &ModeParameters) -> ComplexValue {
    mixed_amplitude(p, p.squeeze.r(), -1.0)
}

/// `cosh(2r) n̄ + sinh²r`, the contribution common to both means.
fn squeezed_thermal_occupancy(p: &ModeParameters) -> f64 {
    let r = p.squeeze.r();
    (2.0 * r).cosh() * thermal_mean(p.x) + r.sinh().powi(2)
}

/// Variance shared by both orderings, parametrized by the squared modulus of
/// the coherent cross term.
fn variance_with_cross_term(p: &ModeParameters, cross_sq: f64) -> f64 {
    let r = p.squeeze.r();
    let n = thermal_mean(p.x);
    let c4 = (4.0 * r).cosh();
    c4 * n * n + (c4 + 2.0 * cross_sq) * n + 0.5 * (2.0 * r).sinh().powi(2) + cross_sq
}

/// `⟨a†a⟩_B = cosh(2r) n̄ + sinh²r + |α cosh r - α* e^{iφ} sinh r|²`.
pub fn mean_photons_in_squeezed_thermal(p: &ModeParameters) -> f64 {
    squeezed_thermal_occupancy(p) + effective_amplitude(p).norm_sqr()
}

/// Photon number variance in the thermal state of squeezed coherent photons.
/// The cross term carries `cosh 2r`, `sinh 2r`.
pub fn variance_photons_in_squeezed_thermal(p: &ModeParameters) -> f64 {
    let cross = mixed_amplitude(p, 2.0 * p.squeeze.r(), -1.0);
    variance_with_cross_term(p, cross.norm_sqr())
}

/// `⟨B†B⟩_a = cosh(2r) n̄ + sinh²r + |α|²`.
pub fn mean_squeezed_in_photon_thermal(p: &ModeParameters) -> f64 {
    squeezed_thermal_occupancy(p) + p.coherent.mag().powi(2)
}

/// Number variance of squeezed coherent photons in the photon thermal state.
pub fn variance_squeezed_in_photon_thermal(p: &ModeParameters) -> f64 {
    let cross = mixed_amplitude(p, p.squeeze.r(), 1.0);
    variance_with_cross_term(p, cross.norm_sqr())
}

/// Mean and variance for the requested ordering.
pub fn statistics(p: &ModeParameters, which: StateKind) -> NumberStatistics {
    match which {
        StateKind::PhotonsInSqueezedThermal => NumberStatistics {
            mean: mean_photons_in_squeezed_thermal(p),
            variance: variance_photons_in_squeezed_thermal(p),
        },
        StateKind::SqueezedInPhotonThermal => NumberStatistics {
            mean: mean_squeezed_in_photon_thermal(p),
            variance: variance_squeezed_in_photon_thermal(p),
        },
    }
}

/// `α → α cosh r - α* e^{iφ} sinh r`, `ζ → -ζ`. Maps the photon-thermal
/// statistics onto the squeezed-thermal ones and is its own inverse.
pub fn transform_parameters(p: &ModeParameters) -> ModeParameters {
    let alpha = effective_amplitude(p);
    let coherent = if alpha.norm() == 0.0 {
        CoherentAmplitude::zero()
    } else {
        CoherentAmplitude::new(alpha.norm(), alpha.arg()).expect("finite amplitude from finite parameters")
    };
    ModeParameters {
        squeeze: p.squeeze.negate(),
        coherent,
        x: p.x,
    }
}
