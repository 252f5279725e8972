//! Mean occupancies written as mixtures of Bose-Einstein factors over an
//! auxiliary temperature `T'` and chemical potential `μ`:
//!
//! ```text
//! n(ω, T) = ∫ dT' ∫ dμ  σ(T, T', μ) / (e^μ e^{ħω/k_B T'} - 1)
//! ```
//!
//! Every spectral function in scope is a finite sum of delta atoms, so the
//! integral is evaluated exactly as a sum.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::closed_form::{effective_amplitude, ModeParameters};
use crate::error::{Error, Result};
use crate::types::DimensionlessTemperature;

/// Location of an atom on the `T'` axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TempKind {
    /// `T' = ratio · T`.
    Finite(f64),
    /// `T' = ∞`, where `e^{ħω/k_B T'}` is exactly one.
    Infinite,
}

impl Serialize for TempKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TempKind::Finite(v) => s.serialize_f64(*v),
            TempKind::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for TempKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct TempVisitor;

        impl Visitor<'_> for TempVisitor {
            type Value = TempKind;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a positive number or the string \"infinite\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<TempKind, E> {
                Ok(TempKind::Finite(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<TempKind, E> {
                Ok(TempKind::Finite(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<TempKind, E> {
                Ok(TempKind::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<TempKind, E> {
                if v == "infinite" {
                    Ok(TempKind::Infinite)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        d.deserialize_any(TempVisitor)
    }
}

/// One weighted delta atom `weight · δ(T' - T'_atom) δ(μ - μ_atom)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAtom")]
pub struct SpectralAtom {
    weight: f64,
    temp: TempKind,
    mu: f64,
}

#[derive(Deserialize)]
struct RawAtom {
    weight: f64,
    temp: TempKind,
    mu: f64,
}

impl TryFrom<RawAtom> for SpectralAtom {
    type Error = Error;

    fn try_from(raw: RawAtom) -> Result<Self> {
        SpectralAtom::new(raw.weight, raw.temp, raw.mu)
    }
}

impl SpectralAtom {
    pub fn new(weight: f64, temp: TempKind, mu: f64) -> Result<Self> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::InvalidAtom(format!("weight must be positive, got {weight}")));
        }
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(Error::InvalidAtom(format!("mu must be nonnegative, got {mu}")));
        }
        match temp {
            TempKind::Finite(t) if !(t.is_finite() && t > 0.0) => Err(Error::InvalidAtom(format!(
                "finite temperature ratio must be positive, got {t}"
            ))),
            TempKind::Infinite if mu == 0.0 => Err(Error::DivergentAtom),
            _ => Ok(Self { weight, temp, mu }),
        }
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn temp(&self) -> TempKind {
        self.temp
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Bose factor `1 / (e^μ e^{x/ratio} - 1)` of this atom, unweighted.
    fn occupancy(&self, x: DimensionlessTemperature) -> f64 {
        let exponent = match self.temp {
            TempKind::Finite(ratio) => self.mu + x.value() / ratio,
            TempKind::Infinite => self.mu,
        };
        1.0 / exponent.exp_m1()
    }
}

/// Ordered collection of atoms. Atoms sharing `(temp, mu)` are merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpectralFunction {
    atoms: Vec<SpectralAtom>,
}

impl SpectralFunction {
    pub fn new(atoms: impl IntoIterator<Item = SpectralAtom>) -> Self {
        let mut merged: Vec<SpectralAtom> = Vec::new();
        for atom in atoms {
            match merged.iter_mut().find(|a| a.temp == atom.temp && a.mu == atom.mu) {
                Some(existing) => existing.weight += atom.weight,
                None => merged.push(atom),
            }
        }
        Self { atoms: merged }
    }

    pub fn atoms(&self) -> &[SpectralAtom] {
        &self.atoms
    }

    /// The conserved-number atom's `μ`, if present.
    pub fn infinite_temperature_mu(&self) -> Option<f64> {
        self.atoms.iter().find(|a| a.temp == TempKind::Infinite).map(|a| a.mu)
    }
}

/// `ln(1 + 1/occupancy)`, the `μ` whose Bose factor at `T' = ∞` equals
/// `occupancy`. Same as `ln((cosh²r + |c|²)/(sinh²r + |c|²))` with
/// `occupancy = sinh²r + |c|²`, since numerator and denominator differ by one.
pub fn chemical_potential(occupancy: f64) -> f64 {
    (1.0 / occupancy).ln_1p()
}

fn two_atom_spectrum(p: &ModeParameters, coherent_sq: f64) -> SpectralFunction {
    let r = p.squeeze.r();
    let thermal = SpectralAtom {
        weight: (2.0 * r).cosh(),
        temp: TempKind::Finite(1.0),
        mu: 0.0,
    };
    let occupancy = r.sinh().powi(2) + coherent_sq;
    if occupancy > 0.0 {
        let conserved = SpectralAtom {
            weight: 1.0,
            temp: TempKind::Infinite,
            mu: chemical_potential(occupancy),
        };
        SpectralFunction::new([thermal, conserved])
    } else {
        SpectralFunction::new([thermal])
    }
}

/// Spectral function `σ_B` of photons in the thermal state of squeezed
/// coherent photons.
pub fn spectral_for_photons_in_squeezed_thermal(p: &ModeParameters) -> SpectralFunction {
    two_atom_spectrum(p, effective_amplitude(p).norm_sqr())
}

/// Spectral function `σ_a` of squeezed coherent photons in the photon
/// thermal state.
pub fn spectral_for_squeezed_in_photon_thermal(p: &ModeParameters) -> SpectralFunction {
    two_atom_spectrum(p, p.coherent.mag().powi(2))
}

/// Exact value of the integral representation against the atoms.
pub fn evaluate_representation(sf: &SpectralFunction, x: DimensionlessTemperature) -> Result<f64> {
    sf.atoms.iter().try_fold(0.0, |acc, atom| {
        if atom.temp == TempKind::Infinite && atom.mu == 0.0 {
            Err(Error::DivergentAtom)
        } else {
            Ok(acc + atom.weight * atom.occupancy(x))
        }
    })
}

/// Total weight; exceeds one when several sources contribute.
pub fn normalization_integral(sf: &SpectralFunction) -> f64 {
    sf.atoms.iter().map(|a| a.weight).sum()
}

/// First `T'` moment over the finite-temperature atoms. Infinite-temperature
/// atoms are excluded.
pub fn equilibrium_temperature(sf: &SpectralFunction, temp: f64) -> Result<f64> {
    if !(temp.is_finite() && temp > 0.0) {
        return Err(Error::PhysicalUnit {
            name: "temperature",
            value: temp,
        });
    }
    let mut any = false;
    let mut moment = 0.0;
    for atom in &sf.atoms {
        if let TempKind::Finite(ratio) = atom.temp {
            any = true;
            moment += atom.weight * ratio * temp;
        }
    }
    if any {
        Ok(moment)
    } else {
        Err(Error::NoFiniteTemperatureAtom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{mean_photons_in_squeezed_thermal, mean_squeezed_in_photon_thermal};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{LN_2, PI, TAU};

    fn params(r: f64, phi: f64, mag: f64, theta: f64, x: f64) -> ModeParameters {
        ModeParameters::from_raw(r, phi, mag, theta, x).unwrap()
    }

    fn atoms(sf: &SpectralFunction) -> Vec<(f64, TempKind, f64)> {
        sf.atoms().iter().map(|a| (a.weight(), a.temp(), a.mu())).collect()
    }

    // mpmath, 30 digits
    const COSH_1: f64 = 1.543_080_634_815_243_8;
    const COSH_2: f64 = 3.762_195_691_083_631_5;

    #[test]
    fn photons_spectrum_examples() {
        let sf = spectral_for_photons_in_squeezed_thermal(&params(0.0, 0.0, 0.0, 0.0, 1.0));
        assert_eq!(atoms(&sf), vec![(1.0, TempKind::Finite(1.0), 0.0)]);

        let sf = spectral_for_photons_in_squeezed_thermal(&params(0.5, 0.0, 1.0, 0.0, 1.0));
        let a = atoms(&sf);
        assert_eq!(a.len(), 2);
        assert_relative_eq!(a[0].0, COSH_1, max_relative = 1e-15);
        assert_eq!(a[0].1, TempKind::Finite(1.0));
        assert_eq!(a[1].0, 1.0);
        assert_eq!(a[1].1, TempKind::Infinite);
        assert_relative_eq!(a[1].2, 0.941_536_514_571_281_3, max_relative = 1e-14);

        let sf = spectral_for_photons_in_squeezed_thermal(&params(0.5, 0.0, 0.0, 0.0, 1.0));
        assert_relative_eq!(
            sf.infinite_temperature_mu().unwrap(),
            1.543_873_665_810_609_5,
            max_relative = 1e-14
        );
    }

    #[test]
    fn squeezed_spectrum_examples() {
        let sf = spectral_for_squeezed_in_photon_thermal(&params(0.0, 0.0, 1.0, 0.0, 1.0));
        assert_relative_eq!(sf.infinite_temperature_mu().unwrap(), LN_2, max_relative = 1e-15);
        assert_eq!(normalization_integral(&sf), 2.0);

        let sf = spectral_for_squeezed_in_photon_thermal(&params(0.0, 0.0, 0.0, 0.0, 1.0));
        assert_eq!(atoms(&sf), vec![(1.0, TempKind::Finite(1.0), 0.0)]);

        let sf = spectral_for_squeezed_in_photon_thermal(&params(0.5, 0.0, 1.0, 0.0, 1.0));
        assert_relative_eq!(
            sf.infinite_temperature_mu().unwrap(),
            0.580_229_141_387_195_3,
            max_relative = 1e-14
        );
    }

    #[test]
    fn chemical_potential_matches_log_ratio() {
        for (r, c2) in [(0.5, 1.0), (0.5, 0.0), (1.7, 0.2), (0.0, 3.0)] {
            let (s, c) = (f64::sinh(r).powi(2), f64::cosh(r).powi(2));
            let direct = ((c + c2) / (s + c2)).ln();
            assert_relative_eq!(chemical_potential(s + c2), direct, max_relative = 1e-13);
        }
    }

    #[test]
    fn evaluate_examples() {
        let bb = SpectralFunction::new([SpectralAtom::new(1.0, TempKind::Finite(1.0), 0.0).unwrap()]);
        let x = DimensionlessTemperature::new(LN_2).unwrap();
        assert_relative_eq!(evaluate_representation(&bb, x).unwrap(), 1.0, max_relative = 1e-15);

        let p = params(0.5, 0.0, 1.0, 0.0, 1.0);
        let sf = spectral_for_squeezed_in_photon_thermal(&p);
        assert_relative_eq!(
            evaluate_representation(&sf, p.x).unwrap(),
            mean_squeezed_in_photon_thermal(&p),
            max_relative = 1e-12
        );
        let sf = spectral_for_photons_in_squeezed_thermal(&p);
        assert_relative_eq!(
            evaluate_representation(&sf, p.x).unwrap(),
            mean_photons_in_squeezed_thermal(&p),
            max_relative = 1e-12
        );
    }

    #[test]
    fn divergent_atom_rejected() {
        assert_eq!(
            SpectralAtom::new(1.0, TempKind::Infinite, 0.0),
            Err(Error::DivergentAtom)
        );
        // Bypass the constructor to check the evaluator guards independently.
        let sf = SpectralFunction::new([SpectralAtom {
            weight: 1.0,
            temp: TempKind::Infinite,
            mu: 0.0,
        }]);
        let x = DimensionlessTemperature::new(1.0).unwrap();
        assert_eq!(evaluate_representation(&sf, x), Err(Error::DivergentAtom));
    }

    #[test]
    fn atom_validation() {
        assert!(SpectralAtom::new(0.0, TempKind::Finite(1.0), 0.0).is_err());
        assert!(SpectralAtom::new(1.0, TempKind::Finite(0.0), 0.0).is_err());
        assert!(SpectralAtom::new(1.0, TempKind::Finite(1.0), -0.5).is_err());
        assert!(SpectralAtom::new(1.0, TempKind::Infinite, 0.5).is_ok());
    }

    #[test]
    fn merges_identical_atoms() {
        let a = SpectralAtom::new(1.0, TempKind::Finite(1.0), 0.0).unwrap();
        let b = SpectralAtom::new(2.5, TempKind::Infinite, 0.3).unwrap();
        let sf = SpectralFunction::new([a, b, a]);
        assert_eq!(
            atoms(&sf),
            vec![(2.0, TempKind::Finite(1.0), 0.0), (2.5, TempKind::Infinite, 0.3)]
        );
    }

    #[test]
    fn normalization_examples() {
        let n0 = normalization_integral(&spectral_for_squeezed_in_photon_thermal(&params(
            0.0, 0.0, 0.0, 0.0, 1.0,
        )));
        assert_eq!(n0, 1.0);
        let n1 = normalization_integral(&spectral_for_squeezed_in_photon_thermal(&params(
            0.5, 0.0, 0.3, 0.0, 1.0,
        )));
        assert_relative_eq!(n1, COSH_1 + 1.0, max_relative = 1e-15);
        let n2 = normalization_integral(&spectral_for_photons_in_squeezed_thermal(&params(
            1.0, 0.0, 0.3, 0.0, 1.0,
        )));
        assert_relative_eq!(n2, COSH_2 + 1.0, max_relative = 1e-15);
        assert!(n2 > n1);
    }

    #[test]
    fn equilibrium_temperature_examples() {
        let sf = spectral_for_squeezed_in_photon_thermal(&params(0.0, 0.0, 0.0, 0.0, 1.0));
        assert_eq!(equilibrium_temperature(&sf, 300.0).unwrap(), 300.0);
        let sf = spectral_for_photons_in_squeezed_thermal(&params(0.5, 0.0, 1.0, 0.0, 1.0));
        assert_relative_eq!(
            equilibrium_temperature(&sf, 300.0).unwrap(),
            462.924_190_444_573_1,
            max_relative = 1e-14
        );
        let only_infinite = SpectralFunction::new([SpectralAtom::new(1.0, TempKind::Infinite, 1.0).unwrap()]);
        assert_eq!(
            equilibrium_temperature(&only_infinite, 300.0),
            Err(Error::NoFiniteTemperatureAtom)
        );
    }

    #[test]
    fn json_shape() {
        let sf = spectral_for_squeezed_in_photon_thermal(&params(0.0, 0.0, 1.0, 0.0, 1.0));
        let v = serde_json::to_value(&sf).unwrap();
        assert_eq!(v[0]["temp"], serde_json::json!(1.0));
        assert_eq!(v[1]["temp"], serde_json::json!("infinite"));
        assert_eq!(v[1]["weight"], serde_json::json!(1.0));
        let back: SpectralFunction = serde_json::from_value(v).unwrap();
        assert_eq!(back, sf);

        let bad = serde_json::json!([{"weight": 1.0, "temp": "infinite", "mu": 0.0}]);
        assert!(serde_json::from_value::<SpectralFunction>(bad).is_err());
        let bad = serde_json::json!([{"weight": 1.0, "temp": "hot", "mu": 0.0}]);
        assert!(serde_json::from_value::<SpectralFunction>(bad).is_err());
    }

    proptest! {
        #[test]
        fn reconstruction_and_positivity(
            r in 0.0f64..2.0, phi in 0.0f64..TAU, mag in 0.0f64..3.0, theta in 0.0f64..TAU, x in 0.1f64..10.0,
        ) {
            let p = params(r, phi, mag, theta, x);
            for (sf, mean) in [
                (spectral_for_photons_in_squeezed_thermal(&p), mean_photons_in_squeezed_thermal(&p)),
                (spectral_for_squeezed_in_photon_thermal(&p), mean_squeezed_in_photon_thermal(&p)),
            ] {
                let v = evaluate_representation(&sf, p.x).unwrap();
                prop_assert!((v - mean).abs() <= 1e-12 * mean);
                for a in sf.atoms() {
                    prop_assert!(a.weight() > 0.0 && a.mu() >= 0.0);
                }
                if let Some(mu) = sf.infinite_temperature_mu() {
                    prop_assert!(mu > 0.0);
                    let occupancy = mean - (2.0 * r).cosh() * crate::types::thermal_mean(p.x);
                    prop_assert!((mu - (1.0 + 1.0 / occupancy).ln()).abs() <= 1e-9 * mu.max(1.0));
                }
                let teq = equilibrium_temperature(&sf, 2.7).unwrap();
                prop_assert!((teq / 2.7 - (2.0 * r).cosh()).abs() <= 1e-12 * (2.0 * r).cosh());
            }
        }
    }

    #[test]
    fn temperature_ratio_exact_at_zero_squeezing() {
        let sf = spectral_for_photons_in_squeezed_thermal(&params(0.0, PI, 2.0, 0.0, 1.0));
        assert_eq!(equilibrium_temperature(&sf, 10.0).unwrap(), 10.0);
    }
}
