use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{FockSpace, DEFAULT_R_MAX};
use crate::closed_form::{ModeParameters, NumberStatistics, StateKind};
use crate::error::{Error, Result};

/// Thermal weights below this fraction of the ground-state weight are
/// dropped from the traces; their contribution is far below double rounding.
const WEIGHT_CUTOFF: f64 = 1e-25;

/// Truncation policy for [`converge_statistics`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub dim_start: usize,
    pub dim_max: usize,
    pub r_max: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            dim_start: 32,
            dim_max: 512,
            r_max: DEFAULT_R_MAX,
        }
    }
}

/// History of an adaptive truncation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub dims_tried: Vec<usize>,
    /// Mean at each dimension in `dims_tried`.
    pub values: Vec<f64>,
    /// Variance at each dimension in `dims_tried`.
    pub variances: Vec<f64>,
    /// Relative change against the previous dimension, one entry per
    /// dimension after the first.
    pub rel_changes: Vec<f64>,
    pub converged: bool,
    pub final_rel_change: f64,
}

fn significant_columns(weights: &[f64]) -> usize {
    let floor = weights[0] * WEIGHT_CUTOFF;
    weights.iter().take_while(|&&w| w > floor).count().max(1)
}

/// Mean and variance by direct trace against the truncated density matrix.
///
/// `ρ_a` is diagonal in the Fock basis, and `a†a` is diagonal too, so the
/// traces reduce to sums over matrix columns:
///
/// * photons in the squeezed thermal state: `ρ_B = U ρ_a U†`, and
///   `(ρ_B)_{mm} = Σ_k p_k |U_{mk}|²`;
/// * squeezed photons in the photon thermal state:
///   `Tr(ρ_a B†B) = Σ_k p_k ‖B e_k‖²` and
///   `Tr(ρ_a (B†B)²) = Σ_k p_k ‖B†B e_k‖²`.
pub fn oracle_statistics(fs: &FockSpace, p: &ModeParameters, which: StateKind) -> Result<NumberStatistics> {
    let weights = fs.thermal_weights(p.x);
    let keep = significant_columns(&weights);
    match which {
        StateKind::PhotonsInSqueezedThermal => {
            let s = fs.squeeze_operator(p.squeeze)?;
            let d = fs.displacement_operator(p.coherent)?;
            let u = s.matrix() * d.matrix().columns(0, keep);
            let mut mean = 0.0;
            let mut second = 0.0;
            for m in 0..fs.dim() {
                let occupation: f64 = (0..keep).map(|k| weights[k] * u[(m, k)].norm_sqr()).sum();
                let n = m as f64;
                mean += n * occupation;
                second += n * n * occupation;
            }
            Ok(NumberStatistics {
                mean,
                variance: second - mean * mean,
            })
        }
        StateKind::SqueezedInPhotonThermal => {
            let b = fs.b_operator(p);
            let b_cols = b.matrix().columns(0, keep).into_owned();
            let btb_cols = b.matrix().adjoint() * &b_cols;
            let mut mean = 0.0;
            let mut second = 0.0;
            for (k, w) in weights.iter().take(keep).enumerate() {
                mean += w * b_cols.column(k).norm_squared();
                second += w * btb_cols.column(k).norm_squared();
            }
            Ok(NumberStatistics {
                mean,
                variance: second - mean * mean,
            })
        }
    }
}

/// Same traces as [`oracle_statistics`] but with the full density matrix and
/// operator products formed explicitly. `O(N³)`; for cross-checking.
pub fn oracle_statistics_dense(fs: &FockSpace, p: &ModeParameters, which: StateKind) -> Result<NumberStatistics> {
    let (rho, counted): (_, DMatrix<Complex64>) = match which {
        StateKind::PhotonsInSqueezedThermal => (fs.squeezed_thermal_density(p)?, fs.number()),
        StateKind::SqueezedInPhotonThermal => {
            let b = fs.b_operator(p);
            (fs.thermal_density(p.x), b.matrix().adjoint() * b.matrix())
        }
    };
    let mean = rho.expectation(&counted).re;
    let second = rho.expectation(&(&counted * &counted)).re;
    Ok(NumberStatistics {
        mean,
        variance: second - mean * mean,
    })
}

fn rel_change(old: f64, new: f64) -> f64 {
    if old == new {
        0.0
    } else {
        (new - old).abs() / old.abs().max(new.abs())
    }
}

/// Runs [`oracle_statistics`] at `dim_start, 2·dim_start, …` until both the
/// mean and the variance change by less than `rel_tol` between successive
/// dimensions.
///
/// Dimensions too small for the coherent amplitude are skipped. Failure to
/// converge by `dim_max` returns [`Error::NotConverged`] carrying the report.
pub fn converge_statistics(
    p: &ModeParameters,
    which: StateKind,
    rel_tol: f64,
    config: &OracleConfig,
) -> Result<(NumberStatistics, TruncationReport)> {
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(Error::Tolerance(rel_tol));
    }
    if p.squeeze.r() > config.r_max {
        return Err(Error::SqueezeTooLarge {
            r: p.squeeze.r(),
            r_max: config.r_max,
        });
    }
    let mut report = TruncationReport {
        dims_tried: Vec::new(),
        values: Vec::new(),
        variances: Vec::new(),
        rel_changes: Vec::new(),
        converged: false,
        final_rel_change: f64::INFINITY,
    };
    let mut previous: Option<NumberStatistics> = None;
    let mut dim = config.dim_start.max(2);
    while dim <= config.dim_max {
        let fs = FockSpace::with_r_max(dim, config.r_max)?;
        let stats = match oracle_statistics(&fs, p, which) {
            Ok(s) => s,
            Err(Error::AmplitudeTooLarge { .. }) => {
                dim *= 2;
                continue;
            }
            Err(e) => return Err(e),
        };
        report.dims_tried.push(dim);
        report.values.push(stats.mean);
        report.variances.push(stats.variance);
        if let Some(prev) = previous {
            let change = rel_change(prev.mean, stats.mean).max(rel_change(prev.variance, stats.variance));
            report.rel_changes.push(change);
            report.final_rel_change = change;
            if change < rel_tol {
                report.converged = true;
                return Ok((stats, report));
            }
        }
        previous = Some(stats);
        dim *= 2;
    }
    Err(Error::NotConverged(Box::new(report)))
}
