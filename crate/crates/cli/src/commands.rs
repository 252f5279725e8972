use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;
use squeezed_thermal::closed_form::statistics;
use squeezed_thermal::fock::{converge_statistics, OracleConfig, TruncationReport};
use squeezed_thermal::spectral::{
    equilibrium_temperature, evaluate_representation, normalization_integral, spectral_for_photons_in_squeezed_thermal,
    spectral_for_squeezed_in_photon_thermal, SpectralFunction, TempKind,
};
use squeezed_thermal::{Error, ModeParameters, NumberStatistics, StateKind};

use crate::render::{csv_number, round_sig, table_number, write_csv, write_json, write_table, OutputFormat};
use crate::{UsageError, EXIT_OK, EXIT_VERIFY_FAILED};

/// Every combination of r ∈ {0, 0.3, 0.8}, φ ∈ {0, π/2}, |α| ∈ {0, 0.5, 1.5},
/// θ ∈ {0, 1}, x ∈ {0.5, 1, 3}: 108 points.
pub fn verification_grid() -> Vec<ModeParameters> {
    let mut points = Vec::with_capacity(108);
    for r in [0.0, 0.3, 0.8] {
        for phi in [0.0, FRAC_PI_2] {
            for mag in [0.0, 0.5, 1.5] {
                for theta in [0.0, 1.0] {
                    for x in [0.5, 1.0, 3.0] {
                        points.push(ModeParameters::from_raw(r, phi, mag, theta, x).expect("grid points are valid"));
                    }
                }
            }
        }
    }
    points
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    R,
    Phi,
    AlphaMag,
    AlphaPhase,
    X,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::R => "r",
            SweepParameter::Phi => "phi",
            SweepParameter::AlphaMag => "alpha_mag",
            SweepParameter::AlphaPhase => "alpha_phase",
            SweepParameter::X => "x",
        }
    }
}

/// A linear sweep of one parameter with the others held at `fixed`.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub fixed: ModeParameters,
}

impl SweepSpec {
    pub(crate) fn new(
        parameter: SweepParameter,
        start: f64,
        stop: f64,
        steps: usize,
        fixed: ModeParameters,
    ) -> Result<Self, UsageError> {
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(UsageError(format!(
                "sweep needs finite --start < --stop, got {start} and {stop}"
            )));
        }
        if steps < 2 {
            return Err(UsageError(format!("sweep needs --steps >= 2, got {steps}")));
        }
        Ok(Self {
            parameter,
            start,
            stop,
            steps,
            fixed,
        })
    }

    /// Evenly spaced values including both endpoints.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / last)
                }
            })
            .collect()
    }

    pub fn point(&self, value: f64) -> Result<ModeParameters, Error> {
        let f = &self.fixed;
        let (mut r, mut phi) = (f.squeeze.r(), f.squeeze.phi());
        let (mut mag, mut theta) = (f.coherent.mag(), f.coherent.theta());
        let mut x = f.x.value();
        match self.parameter {
            SweepParameter::R => r = value,
            SweepParameter::Phi => phi = value,
            SweepParameter::AlphaMag => mag = value,
            SweepParameter::AlphaPhase => theta = value,
            SweepParameter::X => x = value,
        }
        ModeParameters::from_raw(r, phi, mag, theta, x)
    }
}

#[derive(Serialize)]
struct ParamsOut {
    r: f64,
    phi: f64,
    alpha_mag: f64,
    alpha_phase: f64,
    x: f64,
}

impl From<&ModeParameters> for ParamsOut {
    fn from(p: &ModeParameters) -> Self {
        Self {
            r: round_sig(p.squeeze.r()),
            phi: round_sig(p.squeeze.phi()),
            alpha_mag: round_sig(p.coherent.mag()),
            alpha_phase: round_sig(p.coherent.theta()),
            x: round_sig(p.x.value()),
        }
    }
}

#[derive(Serialize)]
struct StatsOut {
    mean: f64,
    variance: f64,
}

impl From<NumberStatistics> for StatsOut {
    fn from(s: NumberStatistics) -> Self {
        Self {
            mean: round_sig(s.mean),
            variance: round_sig(s.variance),
        }
    }
}

fn warn_precision<E: Write>(p: &ModeParameters, err: &mut E) {
    if let Some(w) = p.precision_warning() {
        let _ = writeln!(err, "warning: {w}");
    }
}

pub(crate) fn stats<O: Write, E: Write>(
    p: &ModeParameters,
    which: StateKind,
    format: OutputFormat,
    out: &mut O,
    err: &mut E,
) -> Result<u8, UsageError> {
    warn_precision(p, err);
    let s = statistics(p, which);
    match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Inputs {
                #[serde(flatten)]
                params: ParamsOut,
                state: &'static str,
            }
            #[derive(Serialize)]
            struct Row {
                state: &'static str,
                #[serde(flatten)]
                stats: StatsOut,
            }
            let inputs = Inputs {
                params: p.into(),
                state: which.name(),
            };
            write_json(
                out,
                &inputs,
                &[Row {
                    state: which.name(),
                    stats: s.into(),
                }],
            )?;
        }
        OutputFormat::Csv => write_csv(
            out,
            &["state", "mean", "variance"],
            &[vec![
                which.name().to_string(),
                csv_number(s.mean),
                csv_number(s.variance),
            ]],
        )?,
        OutputFormat::Table => write_table(
            out,
            &["state", "mean", "variance"],
            &[vec![
                which.name().to_string(),
                table_number(s.mean),
                table_number(s.variance),
            ]],
        )?,
    }
    Ok(EXIT_OK)
}

fn rel_err(value: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        value.abs()
    } else {
        (value - reference).abs() / reference.abs()
    }
}

struct Check {
    params: ModeParameters,
    state: StateKind,
    closed: NumberStatistics,
    oracle: Option<NumberStatistics>,
    report: Option<TruncationReport>,
    error: Option<String>,
    rel_err_mean: Option<f64>,
    rel_err_var: Option<f64>,
    passed: bool,
}

fn check(p: &ModeParameters, which: StateKind, rel_tol: f64, config: &OracleConfig) -> Check {
    let closed = statistics(p, which);
    let (oracle, report, error) = match converge_statistics(p, which, rel_tol, config) {
        Ok((s, report)) => (Some(s), Some(report), None),
        Err(Error::NotConverged(report)) => (None, Some(*report), Some("oracle did not converge".to_string())),
        Err(e) => (None, None, Some(e.to_string())),
    };
    let rel_err_mean = oracle.map(|o| rel_err(o.mean, closed.mean));
    let rel_err_var = oracle.map(|o| rel_err(o.variance, closed.variance));
    let passed = matches!((rel_err_mean, rel_err_var), (Some(m), Some(v)) if m < rel_tol && v < rel_tol);
    Check {
        params: *p,
        state: which,
        closed,
        oracle,
        report,
        error,
        rel_err_mean,
        rel_err_var,
        passed,
    }
}

fn opt_csv(v: Option<f64>) -> String {
    v.map(csv_number).unwrap_or_default()
}

fn opt_table(v: Option<f64>) -> String {
    v.map(table_number).unwrap_or_else(|| "-".to_string())
}

pub(crate) fn verify<O: Write>(
    points: &[ModeParameters],
    grid: bool,
    rel_tol: f64,
    fock_dim_max: usize,
    format: OutputFormat,
    out: &mut O,
) -> Result<u8, UsageError> {
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(UsageError(format!("--rel-tol must be positive, got {rel_tol}")));
    }
    let config = OracleConfig {
        dim_max: fock_dim_max,
        ..OracleConfig::default()
    };
    if fock_dim_max < config.dim_start {
        return Err(UsageError(format!(
            "--fock-dim-max must be at least {}, got {fock_dim_max}",
            config.dim_start
        )));
    }
    if let Some(p) = points.iter().find(|p| p.squeeze.r() > config.r_max) {
        return Err(UsageError(
            Error::SqueezeTooLarge {
                r: p.squeeze.r(),
                r_max: config.r_max,
            }
            .to_string(),
        ));
    }

    let jobs: Vec<(ModeParameters, StateKind)> = points.iter().flat_map(|p| StateKind::ALL.map(|s| (*p, s))).collect();
    let checks: Vec<Check> = jobs.par_iter().map(|(p, s)| check(p, *s, rel_tol, &config)).collect();
    let all_passed = checks.iter().all(|c| c.passed);

    match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Inputs {
                grid: bool,
                points: usize,
                rel_tol: f64,
                fock_dim_max: usize,
            }
            #[derive(Serialize)]
            struct Row<'a> {
                params: ParamsOut,
                state: &'static str,
                closed_form: StatsOut,
                oracle: Option<StatsOut>,
                rel_err_mean: Option<f64>,
                rel_err_var: Option<f64>,
                passed: bool,
                error: Option<&'a str>,
                truncation: Option<&'a TruncationReport>,
            }
            let inputs = Inputs {
                grid,
                points: points.len(),
                rel_tol,
                fock_dim_max,
            };
            let rows: Vec<Row> = checks
                .iter()
                .map(|c| Row {
                    params: (&c.params).into(),
                    state: c.state.name(),
                    closed_form: c.closed.into(),
                    oracle: c.oracle.map(Into::into),
                    rel_err_mean: c.rel_err_mean.map(round_sig),
                    rel_err_var: c.rel_err_var.map(round_sig),
                    passed: c.passed,
                    error: c.error.as_deref(),
                    truncation: c.report.as_ref(),
                })
                .collect();
            write_json(out, &inputs, &rows)?;
        }
        OutputFormat::Csv | OutputFormat::Table => {
            let table = format == OutputFormat::Table;
            let num = |v: f64| if table { table_number(v) } else { csv_number(v) };
            let opt = |v: Option<f64>| if table { opt_table(v) } else { opt_csv(v) };
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|c| {
                    let p = &c.params;
                    vec![
                        num(p.squeeze.r()),
                        num(p.squeeze.phi()),
                        num(p.coherent.mag()),
                        num(p.coherent.theta()),
                        num(p.x.value()),
                        c.state.name().to_string(),
                        num(c.closed.mean),
                        num(c.closed.variance),
                        opt(c.oracle.map(|o| o.mean)),
                        opt(c.oracle.map(|o| o.variance)),
                        opt(c.rel_err_mean),
                        opt(c.rel_err_var),
                        c.report
                            .as_ref()
                            .and_then(|r| r.dims_tried.last())
                            .map(|d| d.to_string())
                            .unwrap_or_default(),
                        c.report.as_ref().map(|r| r.converged).unwrap_or(false).to_string(),
                        c.passed.to_string(),
                    ]
                })
                .collect();
            let header = [
                "r",
                "phi",
                "alpha_mag",
                "alpha_phase",
                "x",
                "state",
                "mean",
                "variance",
                "oracle_mean",
                "oracle_variance",
                "rel_err_mean",
                "rel_err_var",
                "final_dim",
                "converged",
                "passed",
            ];
            if table {
                write_table(out, &header, &rows)?;
                let passed = checks.iter().filter(|c| c.passed).count();
                writeln!(out, "\n{passed}/{} checks passed at rel_tol {rel_tol}", checks.len())?;
                for c in checks.iter().filter(|c| c.error.is_some()) {
                    writeln!(
                        out,
                        "{} at r={} phi={} alpha_mag={} alpha_phase={} x={}: {}",
                        c.state.name(),
                        c.params.squeeze.r(),
                        c.params.squeeze.phi(),
                        c.params.coherent.mag(),
                        c.params.coherent.theta(),
                        c.params.x.value(),
                        c.error.as_deref().unwrap_or_default()
                    )?;
                }
            } else {
                write_csv(out, &header, &rows)?;
            }
        }
    }
    Ok(if all_passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn temp_out(t: TempKind) -> serde_json::Value {
    match t {
        TempKind::Finite(v) => serde_json::json!(round_sig(v)),
        TempKind::Infinite => serde_json::json!("infinite"),
    }
}

fn temp_text(t: TempKind, num: impl Fn(f64) -> String) -> String {
    match t {
        TempKind::Finite(v) => num(v),
        TempKind::Infinite => "infinite".to_string(),
    }
}

pub(crate) fn spectral<O: Write>(
    p: &ModeParameters,
    temp_kelvin: Option<f64>,
    format: OutputFormat,
    out: &mut O,
) -> Result<u8, UsageError> {
    struct Entry {
        state: StateKind,
        sf: SpectralFunction,
        closed_mean: f64,
        represented: f64,
        normalization: f64,
        t_eq: Option<f64>,
    }
    let mut entries = Vec::new();
    for (state, sf) in [
        (
            StateKind::PhotonsInSqueezedThermal,
            spectral_for_photons_in_squeezed_thermal(p),
        ),
        (
            StateKind::SqueezedInPhotonThermal,
            spectral_for_squeezed_in_photon_thermal(p),
        ),
    ] {
        let represented = evaluate_representation(&sf, p.x)?;
        let t_eq = temp_kelvin.map(|t| equilibrium_temperature(&sf, t)).transpose()?;
        entries.push(Entry {
            state,
            closed_mean: statistics(p, state).mean,
            normalization: normalization_integral(&sf),
            represented,
            t_eq,
            sf,
        });
    }

    match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Inputs {
                #[serde(flatten)]
                params: ParamsOut,
                temp_kelvin: Option<f64>,
            }
            #[derive(Serialize)]
            struct Atom {
                weight: f64,
                temp: serde_json::Value,
                mu: f64,
            }
            #[derive(Serialize)]
            struct Row {
                state: &'static str,
                atoms: Vec<Atom>,
                mu: Option<f64>,
                normalization: f64,
                equilibrium_temperature_kelvin: Option<f64>,
                closed_form_mean: f64,
                representation_mean: f64,
                reconstruction_residual: f64,
            }
            let rows: Vec<Row> = entries
                .iter()
                .map(|e| Row {
                    state: e.state.name(),
                    atoms: e
                        .sf
                        .atoms()
                        .iter()
                        .map(|a| Atom {
                            weight: round_sig(a.weight()),
                            temp: temp_out(a.temp()),
                            mu: round_sig(a.mu()),
                        })
                        .collect(),
                    mu: e.sf.infinite_temperature_mu().map(round_sig),
                    normalization: round_sig(e.normalization),
                    equilibrium_temperature_kelvin: e.t_eq.map(round_sig),
                    closed_form_mean: round_sig(e.closed_mean),
                    representation_mean: round_sig(e.represented),
                    reconstruction_residual: round_sig((e.represented - e.closed_mean).abs()),
                })
                .collect();
            let inputs = Inputs {
                params: p.into(),
                temp_kelvin: temp_kelvin.map(round_sig),
            };
            write_json(out, &inputs, &rows)?;
        }
        OutputFormat::Csv | OutputFormat::Table => {
            let table = format == OutputFormat::Table;
            let num = |v: f64| if table { table_number(v) } else { csv_number(v) };
            let mut rows = Vec::new();
            for e in &entries {
                for a in e.sf.atoms() {
                    rows.push(vec![
                        e.state.name().to_string(),
                        num(a.weight()),
                        temp_text(a.temp(), num),
                        num(a.mu()),
                        num(e.normalization),
                        e.t_eq.map(num).unwrap_or_default(),
                        // Residuals are tiny; keep them in scientific form even in tables.
                        csv_number((e.represented - e.closed_mean).abs()),
                    ]);
                }
            }
            let header = [
                "state",
                "weight",
                "temp",
                "mu",
                "normalization",
                "t_eq_kelvin",
                "reconstruction_residual",
            ];
            if table {
                write_table(out, &header, &rows)?;
                writeln!(
                    out,
                    "\ntemp is T'/T; T' = infinity atoms carry the conserved-number part"
                )?;
            } else {
                write_csv(out, &header, &rows)?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn sweep<O: Write, E: Write>(
    spec: &SweepSpec,
    which: StateKind,
    format: OutputFormat,
    oracle: bool,
    rel_tol: f64,
    fock_dim_max: usize,
    out: &mut O,
    err: &mut E,
) -> Result<u8, UsageError> {
    let points: Vec<(f64, ModeParameters)> = spec
        .values()
        .into_iter()
        .map(|v| spec.point(v).map(|p| (v, p)))
        .collect::<Result<_, _>>()?;
    if let Some((_, p)) = points.iter().find(|(_, p)| p.precision_warning().is_some()) {
        warn_precision(p, err);
    }

    let checks: Option<Vec<Check>> = if oracle {
        if !(rel_tol.is_finite() && rel_tol > 0.0) {
            return Err(UsageError(format!("--rel-tol must be positive, got {rel_tol}")));
        }
        let config = OracleConfig {
            dim_max: fock_dim_max,
            ..OracleConfig::default()
        };
        if let Some((_, p)) = points.iter().find(|(_, p)| p.squeeze.r() > config.r_max) {
            return Err(UsageError(
                Error::SqueezeTooLarge {
                    r: p.squeeze.r(),
                    r_max: config.r_max,
                }
                .to_string(),
            ));
        }
        Some(
            points
                .par_iter()
                .map(|(_, p)| check(p, which, rel_tol, &config))
                .collect(),
        )
    } else {
        None
    };
    let failed = checks.as_ref().is_some_and(|cs| cs.iter().any(|c| c.oracle.is_none()));

    let name = spec.parameter.name();
    match format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Inputs {
                parameter: SweepParameter,
                start: f64,
                stop: f64,
                steps: usize,
                fixed: ParamsOut,
                state: &'static str,
                oracle: bool,
            }
            #[derive(Serialize)]
            struct Row {
                value: f64,
                mean: f64,
                variance: f64,
                #[serde(skip_serializing_if = "Option::is_none")]
                oracle: Option<Option<StatsOut>>,
                #[serde(skip_serializing_if = "Option::is_none")]
                rel_err_mean: Option<Option<f64>>,
                #[serde(skip_serializing_if = "Option::is_none")]
                rel_err_var: Option<Option<f64>>,
            }
            let rows: Vec<Row> = points
                .iter()
                .enumerate()
                .map(|(i, (v, p))| {
                    let s = statistics(p, which);
                    let c = checks.as_ref().map(|cs| &cs[i]);
                    Row {
                        value: round_sig(*v),
                        mean: round_sig(s.mean),
                        variance: round_sig(s.variance),
                        oracle: c.map(|c| c.oracle.map(Into::into)),
                        rel_err_mean: c.map(|c| c.rel_err_mean.map(round_sig)),
                        rel_err_var: c.map(|c| c.rel_err_var.map(round_sig)),
                    }
                })
                .collect();
            let inputs = Inputs {
                parameter: spec.parameter,
                start: round_sig(spec.start),
                stop: round_sig(spec.stop),
                steps: spec.steps,
                fixed: (&spec.fixed).into(),
                state: which.name(),
                oracle,
            };
            write_json(out, &inputs, &rows)?;
        }
        OutputFormat::Csv | OutputFormat::Table => {
            let table = format == OutputFormat::Table;
            let num = |v: f64| if table { table_number(v) } else { csv_number(v) };
            let opt = |v: Option<f64>| if table { opt_table(v) } else { opt_csv(v) };
            let mut header = vec!["param", "value", "mean", "variance"];
            if oracle {
                header.extend(["oracle_mean", "oracle_variance", "rel_err_mean", "rel_err_var"]);
            }
            let rows: Vec<Vec<String>> = points
                .iter()
                .enumerate()
                .map(|(i, (v, p))| {
                    let s = statistics(p, which);
                    let mut row = vec![name.to_string(), num(*v), num(s.mean), num(s.variance)];
                    if let Some(cs) = &checks {
                        let c = &cs[i];
                        row.extend([
                            opt(c.oracle.map(|o| o.mean)),
                            opt(c.oracle.map(|o| o.variance)),
                            opt(c.rel_err_mean),
                            opt(c.rel_err_var),
                        ]);
                    }
                    row
                })
                .collect();
            if table {
                write_table(out, &header, &rows)?;
            } else {
                write_csv(out, &header, &rows)?;
            }
        }
    }
    if failed {
        let _ = writeln!(err, "error: oracle failed to converge at one or more sweep points");
        Ok(EXIT_VERIFY_FAILED)
    } else {
        Ok(EXIT_OK)
    }
}
