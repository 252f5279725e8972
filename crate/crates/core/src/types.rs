//! Parameter types shared by every evaluator, and the ideal Bose gas
//! occupancy they all reduce to.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant in J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant in J/K (CODATA 2018, exact).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Above this `x` the occupancy `1/(e^x - 1)` is below the smallest normal
/// double and is reported as exactly zero.
pub const VACUUM_X: f64 = 700.0;

/// Complex intermediate values (amplitudes, Bogoliubov coefficients).
pub type ComplexValue = Complex64;

/// Maps any finite angle into `[0, 2π)`.
pub fn normalize_phase(angle: f64) -> f64 {
    let wrapped = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs.
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// Distance between two angles on the circle, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = normalize_phase(a - b);
    d.min(TAU - d)
}

fn check_phase(angle: f64) -> Result<f64> {
    if angle.is_finite() {
        Ok(normalize_phase(angle))
    } else {
        Err(Error::Phase(angle))
    }
}

/// Squeeze parameter `ζ = r·e^{iφ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeParameter {
    r: f64,
    phi: f64,
}

impl SqueezeParameter {
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::SqueezeMagnitude(r));
        }
        Ok(Self {
            r,
            phi: check_phase(phi)?,
        })
    }

    pub fn zero() -> Self {
        Self { r: 0.0, phi: 0.0 }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `ζ` in rectangular form.
    pub fn to_complex(&self) -> ComplexValue {
        Complex64::from_polar(self.r, self.phi)
    }

    /// `ζ → -ζ`, carried entirely by the phase so that `r` stays nonnegative.
    pub fn negate(&self) -> Self {
        Self {
            r: self.r,
            phi: normalize_phase(self.phi + PI),
        }
    }
}

/// Coherent amplitude `α = |α|·e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentAmplitude {
    mag: f64,
    theta: f64,
}

impl CoherentAmplitude {
    pub fn new(mag: f64, theta: f64) -> Result<Self> {
        if !(mag.is_finite() && mag >= 0.0) {
            return Err(Error::AmplitudeMagnitude(mag));
        }
        Ok(Self {
            mag,
            theta: check_phase(theta)?,
        })
    }

    pub fn zero() -> Self {
        Self { mag: 0.0, theta: 0.0 }
    }

    /// Builds the polar pair from a rectangular complex number.
    pub fn from_complex(z: ComplexValue) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::AmplitudeMagnitude(z.norm()));
        }
        Self::new(z.norm(), z.arg())
    }

    pub fn mag(&self) -> f64 {
        self.mag
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn to_complex(&self) -> ComplexValue {
        Complex64::from_polar(self.mag, self.theta)
    }
}

/// Coefficients of the mode mixing `A = β a + γ a†`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovCoefficients {
    pub beta: ComplexValue,
    pub gamma: ComplexValue,
}

impl BogoliubovCoefficients {
    /// `|β|² - |γ|²`, which equals one for a canonical transformation.
    pub fn commutator_defect(&self) -> f64 {
        self.beta.norm_sqr() - self.gamma.norm_sqr() - 1.0
    }
}

/// The unitary choice `β = cosh r`, `γ = e^{iφ} sinh r`.
pub fn coefficients_from_squeeze(z: SqueezeParameter) -> BogoliubovCoefficients {
    BogoliubovCoefficients {
        beta: Complex64::new(z.r.cosh(), 0.0),
        gamma: Complex64::from_polar(z.r.sinh(), z.phi),
    }
}

/// Dimensionless inverse temperature `x = ħω / k_B T`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct DimensionlessTemperature(f64);

impl DimensionlessTemperature {
    pub fn new(x: f64) -> Result<Self> {
        if x.is_finite() && x > 0.0 {
            Ok(Self(x))
        } else {
            Err(Error::Temperature(x))
        }
    }

    /// `x = ħω / (k_B T)` from a temperature in kelvin and an angular
    /// frequency in rad/s.
    pub fn from_physical(temp_kelvin: f64, omega_rad_s: f64) -> Result<Self> {
        if !(temp_kelvin.is_finite() && temp_kelvin > 0.0) {
            return Err(Error::PhysicalUnit {
                name: "temperature",
                value: temp_kelvin,
            });
        }
        if !(omega_rad_s.is_finite() && omega_rad_s > 0.0) {
            return Err(Error::PhysicalUnit {
                name: "angular frequency",
                value: omega_rad_s,
            });
        }
        Self::new(HBAR * omega_rad_s / (BOLTZMANN * temp_kelvin))
    }

    /// Inverse of [`from_physical`](Self::from_physical) at fixed frequency.
    pub fn temperature_kelvin(&self, omega_rad_s: f64) -> f64 {
        HBAR * omega_rad_s / (BOLTZMANN * self.0)
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Bose-Einstein occupancy `n̄ = 1/(e^x - 1)`.
pub fn thermal_mean(x: DimensionlessTemperature) -> f64 {
    let x = x.0;
    if x > VACUUM_X {
        0.0
    } else {
        1.0 / x.exp_m1()
    }
}

/// Thermal number variance `n̄(n̄ + 1)`.
pub fn thermal_variance(x: DimensionlessTemperature) -> f64 {
    let n = thermal_mean(x);
    n * (n + 1.0)
}

/// Checked variant of [`thermal_mean`] for raw inputs.
pub fn thermal_mean_raw(x: f64) -> Result<f64> {
    DimensionlessTemperature::new(x).map(thermal_mean)
}
