//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{LN_2, TAU};
use std::process::{Command, ExitCode, Output};
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use squeezed_thermal::closed_form::{statistics, transform_parameters};
use squeezed_thermal::fock::linalg::leading_block_max_diff;
use squeezed_thermal::fock::{converge_statistics, FockSpace, OracleConfig};
use squeezed_thermal::spectral::{
    equilibrium_temperature, evaluate_representation, normalization_integral, spectral_for_photons_in_squeezed_thermal,
    spectral_for_squeezed_in_photon_thermal, SpectralFunction,
};
use squeezed_thermal::types::thermal_mean;
use squeezed_thermal::{ModeParameters, StateKind};
use squeezed_thermal_cli::verification_grid;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn params(r: f64, phi: f64, mag: f64, theta: f64, x: f64) -> ModeParameters {
    ModeParameters::from_raw(r, phi, mag, theta, x).expect("valid parameters")
}

fn rel(value: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        value.abs()
    } else {
        (value - reference).abs() / reference.abs()
    }
}

fn spectral_for(p: &ModeParameters, which: StateKind) -> SpectralFunction {
    match which {
        StateKind::PhotonsInSqueezedThermal => spectral_for_photons_in_squeezed_thermal(p),
        StateKind::SqueezedInPhotonThermal => spectral_for_squeezed_in_photon_thermal(p),
    }
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn oracle_grid() -> Outcome {
    let start = Instant::now();
    let config = OracleConfig::default();
    let jobs: Vec<(ModeParameters, StateKind)> = verification_grid()
        .into_iter()
        .flat_map(|p| StateKind::ALL.map(|s| (p, s)))
        .collect();
    let worst = jobs
        .par_iter()
        .map(|(p, which)| {
            let exact = statistics(p, *which);
            match converge_statistics(p, *which, 1e-6, &config) {
                Ok((s, _)) => Ok(rel(s.mean, exact.mean).max(rel(s.variance, exact.variance))),
                Err(e) => Err(format!("{} at {p:?}: {e}", which.name())),
            }
        })
        .collect::<Result<Vec<f64>, String>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    ensure(
        worst < 1e-6,
        format!("{} checks, worst relative error {worst:.2e}, {secs:.1} s", jobs.len()),
    )
}

fn duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = params(
            rng.gen_range(0.0..=2.0),
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.0..=3.0),
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.1..=10.0),
        );
        let a = statistics(&p, StateKind::PhotonsInSqueezedThermal);
        let b = statistics(&transform_parameters(&p), StateKind::SqueezedInPhotonThermal);
        worst = worst.max(rel(a.mean, b.mean)).max(rel(a.variance, b.variance));
    }
    ensure(
        worst < 1e-12,
        format!("1000 draws, worst relative difference {worst:.2e}"),
    )
}

#[allow(clippy::approx_constant)]
fn ideal_gas() -> Outcome {
    let mut worst = 0.0f64;
    for x in [0.1, 0.6931, 1.0, 5.0] {
        let p = params(0.0, 0.0, 0.0, 0.0, x);
        let n = thermal_mean(p.x);
        for which in StateKind::ALL {
            worst = worst.max(rel(statistics(&p, which).variance, n * (n + 1.0)));
        }
    }
    let p = params(0.0, 0.0, 0.0, 0.0, LN_2);
    let mut ln2 = 0.0f64;
    for which in StateKind::ALL {
        let s = statistics(&p, which);
        ln2 = ln2.max((s.mean - 1.0).abs()).max((s.variance - 2.0).abs());
    }
    ensure(
        worst < 1e-12 && ln2 < 1e-12,
        format!("worst variance error {worst:.2e}, deviation from (1, 2) at ln 2 {ln2:.2e}"),
    )
}

fn spectral_reconstruction() -> Outcome {
    let mut worst = 0.0f64;
    for p in verification_grid() {
        for which in StateKind::ALL {
            let got = evaluate_representation(&spectral_for(&p, which), p.x).map_err(|e| e.to_string())?;
            worst = worst.max(rel(got, statistics(&p, which).mean));
        }
    }
    ensure(
        worst < 1e-12,
        format!("216 reconstructions, worst relative error {worst:.2e}"),
    )
}

fn temperature_enhancement() -> Outcome {
    let t = 300.0;
    let mut worst = 0.0f64;
    for r in [0.0, 0.25, 0.5, 1.0, 2.0] {
        let p = params(r, 0.4, 0.7, 1.2, 1.0);
        for which in StateKind::ALL {
            let ratio = equilibrium_temperature(&spectral_for(&p, which), t).map_err(|e| e.to_string())? / t;
            worst = worst.max(rel(ratio, (2.0 * r).cosh()));
            let enhanced = if r == 0.0 { ratio == 1.0 } else { ratio > 1.0 };
            if !enhanced {
                return Err(format!("r = {r}: T_eq/T = {ratio}"));
            }
        }
    }
    ensure(
        worst < 1e-12,
        format!("worst relative error against cosh 2r {worst:.2e}"),
    )
}

fn normalization() -> Outcome {
    let mut worst = 0.0f64;
    for r in [0.1, 0.5, 1.0, 2.0] {
        for mag in [0.0, 1.0] {
            let p = params(r, 0.3, mag, 0.2, 1.0);
            for which in StateKind::ALL {
                worst = worst.max(rel(
                    normalization_integral(&spectral_for(&p, which)),
                    1.0 + (2.0 * r).cosh(),
                ));
            }
        }
    }
    let vacuum = params(0.0, 0.0, 0.0, 0.0, 1.0);
    let unit = StateKind::ALL
        .iter()
        .all(|w| normalization_integral(&spectral_for(&vacuum, *w)) == 1.0);
    ensure(
        worst < 1e-12 && unit,
        format!("worst relative error against 1 + cosh 2r {worst:.2e}, exactly 1 at r = 0, α = 0: {unit}"),
    )
}

fn identity_defect(m: &DMatrix<Complex64>, block: usize) -> f64 {
    leading_block_max_diff(m, &DMatrix::identity(m.nrows(), m.ncols()), block)
}

fn operator_checks() -> Outcome {
    let start = Instant::now();
    let fs = FockSpace::new(128).map_err(|e| e.to_string())?;
    let block = fs.leading_block();
    let p = params(0.5, 1.0, 1.0, 0.5, 1.0);

    let b = fs.b_operator(&p);
    let commutator = identity_defect(&b.commutator_with_adjoint(), block);
    let s = fs.squeeze_operator(p.squeeze).map_err(|e| e.to_string())?;
    let d = fs.displacement_operator(p.coherent).map_err(|e| e.to_string())?;
    let unitarity = s
        .leading_block_unitarity_defect()
        .max(d.leading_block_unitarity_defect());
    let conj = fs.b_operator_by_conjugation(&p).map_err(|e| e.to_string())?;
    let dual = leading_block_max_diff(b.matrix(), conj.matrix(), block);

    let rho = fs.squeezed_thermal_density(&p).map_err(|e| e.to_string())?;
    let mut expected = fs.thermal_weights(p.x);
    expected.sort_by(f64::total_cmp);
    let spectrum = rho
        .eigenvalues()
        .iter()
        .zip(&expected)
        .map(|(g, e)| (g - e).abs())
        .fold(0.0, f64::max);

    let secs = start.elapsed().as_secs_f64();
    ensure(
        commutator < 1e-8 && unitarity < 1e-8 && dual < 1e-7 && spectrum < 1e-8,
        format!(
            "dim 128: [B, B†] - I {commutator:.1e}, unitarity {unitarity:.1e}, \
             dual construction {dual:.1e}, spectrum {spectrum:.1e}, {secs:.1} s"
        ),
    )
}

fn zero_temperature() -> Outcome {
    let config = OracleConfig::default();
    let mut worst = 0.0f64;
    for mag in [0.0, 1.0] {
        let p = params(0.5, 0.7, mag, 0.3, 700.0);
        let alpha = p.coherent.to_complex();
        let (r, phi) = (p.squeeze.r(), p.squeeze.phi());
        let c = alpha * r.cosh() - alpha.conj() * Complex64::from_polar(r.sinh(), phi);
        let limits = [
            (StateKind::PhotonsInSqueezedThermal, r.sinh().powi(2) + c.norm_sqr()),
            (StateKind::SqueezedInPhotonThermal, r.sinh().powi(2) + mag * mag),
        ];
        for (which, limit) in limits {
            let closed = statistics(&p, which).mean;
            let (oracle, _) = converge_statistics(&p, which, 1e-8, &config).map_err(|e| e.to_string())?;
            worst = worst.max(rel(closed, limit)).max(rel(oracle.mean, limit));
        }
    }
    ensure(worst < 1e-6, format!("x = 700, worst relative error {worst:.2e}"))
}

fn sqzstat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqzstat"))
        .args(args)
        .output()
        .expect("sqzstat runs")
}

fn cli_contract() -> Outcome {
    let grid = sqzstat(&["verify", "--grid", "--format", "csv"]);
    if grid.status.code() != Some(0) {
        return Err(format!("verify --grid exited {:?}", grid.status.code()));
    }
    let malformed: [&[&str]; 8] = [
        &["stats", "--x", "0"],
        &["stats", "--r", "-1", "--x", "1"],
        &["stats", "--x", "abc"],
        &["stats", "--x", "1", "--temp-kelvin", "300", "--omega-rad-s", "1e13"],
        &["stats", "--x", "1", "--state", "bogus"],
        &["verify", "--r", "5", "--x", "1"],
        &[
            "sweep", "--param", "r", "--start", "1", "--stop", "0", "--steps", "3", "--x", "1",
        ],
        &["frobnicate"],
    ];
    for args in malformed {
        let code = sqzstat(args).status.code();
        if code != Some(2) {
            return Err(format!("{args:?} exited {code:?}, expected 2"));
        }
    }
    let repeat: [&[&str]; 3] = [
        &[
            "stats",
            "--r",
            "0.5",
            "--alpha-mag",
            "1",
            "--x",
            "1",
            "--format",
            "json",
        ],
        &[
            "spectral",
            "--r",
            "0.5",
            "--alpha-mag",
            "1",
            "--temp-kelvin",
            "300",
            "--omega-rad-s",
            "3e13",
            "--format",
            "csv",
        ],
        &[
            "sweep", "--param", "x", "--start", "0.5", "--stop", "3", "--steps", "6", "--r", "0.3", "--oracle",
            "--format", "csv",
        ],
    ];
    for args in repeat {
        let (a, b) = (sqzstat(args), sqzstat(args));
        if a.stdout != b.stdout || a.status.code() != Some(0) {
            return Err(format!("{args:?} is not byte-identical across runs"));
        }
    }
    let again = sqzstat(&["verify", "--grid", "--format", "csv"]);
    if again.stdout != grid.stdout {
        return Err("verify --grid output differs across runs".into());
    }
    Ok("verify --grid exits 0, 8 malformed invocations exit 2, 4 commands byte-identical on re-run".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle-equivalence grid", oracle_grid),
        ("duality under the parameter transformation", duality),
        ("ideal-gas collapse", ideal_gas),
        ("spectral reconstruction", spectral_reconstruction),
        ("temperature enhancement", temperature_enhancement),
        ("multiple-source normalization", normalization),
        ("operator-level checks", operator_checks),
        ("zero-temperature limit", zero_temperature),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
