use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use openmap_core::domain::{
    compatible, domain_shrinkage_demo, DomainParameters, DomainQuery, Sampling, Search,
    ShrinkageReport,
};
use openmap_core::json::{AffineMapJson, MatrixJson, OmegaParamsJson, PhiParamsJson};
use openmap_core::twoqubit::{
    disconnection_demo, gamma_sweep, reproduce_fixed_corr, reproduce_fixed_mean, sweep,
    xi3_sweep, Check, TwoQubitScenario,
};
use openmap_core::{
    choi_analysis, dynamics_realizability, invert, invertibility, AffineMap, CpReport, Dynamics,
    InvertibilityReport, MapKind, OmegaParameters, PhiParameters, RealizabilityReport,
};

use crate::{Cli, Command, Demo, Failure, Kind, ScenarioArgs};

type Outcome<T> = Result<T, Failure>;

pub fn run(cli: &Cli) -> Outcome<()> {
    match &cli.command {
        Command::Build { kind, unitary, params } => build(cli, *kind, unitary, params),
        Command::Analyze { map } => analyze(cli, map),
        Command::Invert { map } => {
            let inverse = invert(&read_map(map)?)?;
            emit(cli, &AffineMapJson::from(&inverse))
        }
        Command::Demo { name, scenario, bloch, grid, random, thorough, csv } => {
            let sampling = match random {
                Some(count) => Sampling::Random { count: *count, seed: cli.seed },
                None => Sampling::Grid { points_per_axis: *grid },
            };
            demo(cli, *name, scenario, *bloch, sampling, search(*thorough), csv.as_deref())
        }
        Command::Domain { kind, params, means, unitary, thorough } => {
            domain(cli, *kind, params, means, unitary.as_deref(), search(*thorough))
        }
    }
}

fn search(thorough: bool) -> Search {
    if thorough {
        Search::Thorough
    } else {
        Search::Canonical
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Outcome<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("cannot parse {}: {e}", path.display())))
}

fn read_map(path: &Path) -> Outcome<AffineMap> {
    Ok(read_json::<AffineMapJson>(path)?.to_map()?)
}

fn read_dynamics(path: &Path, n: usize, m: usize) -> Outcome<Dynamics> {
    let u = read_json::<MatrixJson>(path)?.to_matrix()?;
    if u.nrows() != n * m || u.ncols() != n * m {
        return Err(Failure::Input(format!(
            "unitary is {}x{} but the parameters describe dimensions ({n}, {m})",
            u.nrows(),
            u.ncols()
        )));
    }
    Ok(Dynamics::with_dims(u, n, m)?)
}

/// Serialize fully before writing anything, so a failure leaves no output.
fn emit<T: Serialize>(cli: &Cli, value: &T) -> Outcome<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Input(format!("cannot serialize result: {e}")))?;
    text.push('\n');
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Input(format!("cannot write to stdout: {e}"))),
    }
}

fn build(cli: &Cli, kind: Kind, unitary: &Path, params: &Path) -> Outcome<()> {
    let (map, parameters) = match kind {
        Kind::Omega => {
            let p = read_json::<OmegaParamsJson>(params)?.to_params()?;
            let (n, m) = p.dims();
            let dynamics = read_dynamics(unitary, n, m)?;
            let indices = dynamics.omega_parameter_indices();
            (dynamics.omega(&p)?, indices)
        }
        Kind::Phi => {
            let p = read_json::<PhiParamsJson>(params)?.to_params()?;
            let (n, m) = p.dims();
            let dynamics = read_dynamics(unitary, n, m)?;
            let set = dynamics.phi_parameter_indices();
            let mut indices: Vec<_> = set.r_means.iter().map(|&nu| (0, nu)).collect();
            indices.extend(set.correlations);
            (dynamics.phi(&p)?, indices)
        }
    };
    let mut json = AffineMapJson::from(&map);
    json.parameters = Some(parameters.into_iter().map(|(mu, nu)| [mu, nu]).collect());
    emit(cli, &json)
}

#[derive(Serialize)]
struct AnalysisReport {
    kind: MapKind,
    invertibility: InvertibilityReport,
    /// Of the homogeneous part.
    complete_positivity: CpReport,
    /// Of the whole map, offset included.
    realizability: RealizabilityReport,
}

fn analyze(cli: &Cli, path: &Path) -> Outcome<()> {
    let map = read_map(path)?;
    let report = AnalysisReport {
        kind: map.kind(),
        invertibility: invertibility(&map)?,
        complete_positivity: choi_analysis(map.homogeneous()),
        realizability: dynamics_realizability(&map),
    };
    emit(cli, &report)
}

#[derive(Serialize)]
struct Transcript<T: Serialize> {
    demo: &'static str,
    tolerance: f64,
    passed: bool,
    report: T,
}

fn scenario(args: &ScenarioArgs) -> TwoQubitScenario {
    TwoQubitScenario {
        gamma: args.gamma,
        xi3: args.xi3,
        corr13: args.corr13,
        corr23: args.corr23,
        mean_s2x3: args.mean_s2x3,
        mean_s1x3: args.mean_s1x3,
    }
}

fn oracle_failure(checks: &[&Check]) -> Failure {
    let names: Vec<String> = checks
        .iter()
        .map(|c| format!("{} (deviation {:e})", c.name, c.deviation))
        .collect();
    Failure::Oracle(format!("closed form not reproduced: {}", names.join("; ")))
}

fn finish<T: Serialize>(
    cli: &Cli,
    demo: &'static str,
    report: T,
    failed: Vec<&Check>,
    csv: Option<String>,
    csv_path: Option<&Path>,
) -> Outcome<()> {
    if let (Some(table), Some(path)) = (csv, csv_path) {
        fs::write(path, table)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    let passed = failed.is_empty();
    emit(cli, &Transcript { demo, tolerance: cli.tol, passed, report })?;
    if passed {
        Ok(())
    } else {
        Err(oracle_failure(&failed))
    }
}

fn to_csv<T: Serialize>(rows: &[T]) -> Outcome<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Failure::Input(format!("cannot format CSV: {e}")))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Failure::Input(format!("cannot format CSV: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Failure::Input(e.to_string()))
}

fn sweep_csv(s: &TwoQubitScenario, tol: f64) -> Outcome<String> {
    to_csv(&sweep(s, &gamma_sweep(), &xi3_sweep(), tol)?)
}

#[derive(Serialize)]
struct DomainRow {
    mean_1: f64,
    mean_2: f64,
    mean_3: f64,
    omega: bool,
    phi: bool,
}

fn domain_check(report: &ShrinkageReport) -> Check {
    // A joint state whose marginal is not a state cannot be positive.
    let outside = report
        .samples
        .iter()
        .filter(|s| s.means.iter().map(|x| x * x).sum::<f64>() > 1.0 + 1e-9)
        .filter(|s| s.omega || s.phi)
        .count();
    Check {
        name: "no mean vector outside the Bloch ball is compatible".into(),
        deviation: outside as f64,
        passed: outside == 0,
    }
}

fn demo(
    cli: &Cli,
    name: Demo,
    args: &ScenarioArgs,
    bloch: [f64; 3],
    sampling: Sampling,
    search: Search,
    csv_path: Option<&Path>,
) -> Outcome<()> {
    let s = scenario(args);
    let tol = cli.tol;
    match name {
        Demo::FixedMean => {
            let r = reproduce_fixed_mean(&s, tol)?;
            let table = csv_path.map(|_| sweep_csv(&s, tol)).transpose()?;
            let failed = r.failures().into_iter().cloned().collect::<Vec<_>>();
            finish(cli, "fixed-mean", &r, failed.iter().collect(), table, csv_path)
        }
        Demo::FixedCorr => {
            let r = reproduce_fixed_corr(&s, tol)?;
            let table = csv_path.map(|_| sweep_csv(&s, tol)).transpose()?;
            let failed = r.failures().into_iter().cloned().collect::<Vec<_>>();
            finish(cli, "fixed-corr", &r, failed.iter().collect(), table, csv_path)
        }
        Demo::Disconnect => {
            let r = disconnection_demo(s.gamma, bloch, tol)?;
            let failed = r.failures().into_iter().cloned().collect::<Vec<_>>();
            finish(cli, "disconnect", &r, failed.iter().collect(), None, csv_path)
        }
        Demo::Domain => {
            let dynamics = s.dynamics()?;
            let omega = OmegaParameters::from_entries(
                2,
                2,
                &[(2, 3, s.mean_s2x3), (1, 3, s.mean_s1x3)],
            )?;
            let phi: PhiParameters = s.phi_parameters()?;
            let r = domain_shrinkage_demo(&dynamics, &omega, &phi, sampling, search)?;
            let table = match csv_path {
                Some(_) => Some(to_csv(
                    &r.samples
                        .iter()
                        .map(|p| DomainRow {
                            mean_1: p.means[0],
                            mean_2: p.means[1],
                            mean_3: p.means[2],
                            omega: p.omega,
                            phi: p.phi,
                        })
                        .collect::<Vec<_>>(),
                )?),
                None => None,
            };
            let check = domain_check(&r);
            let failed = if check.passed { vec![] } else { vec![&check] };
            finish(cli, "domain", &r, failed, table, csv_path)
        }
    }
}

#[derive(Serialize)]
struct DomainReport {
    #[serde(flatten)]
    compatibility: openmap_core::domain::Compatibility,
    held_fixed: Option<Vec<[usize; 2]>>,
    witness: Option<MatrixJson>,
}

fn domain(
    cli: &Cli,
    kind: Kind,
    params: &Path,
    means: &[f64],
    unitary: Option<&Path>,
    search: Search,
) -> Outcome<()> {
    let parameters = match kind {
        Kind::Omega => DomainParameters::Omega(read_json::<OmegaParamsJson>(params)?.to_params()?),
        Kind::Phi => DomainParameters::Phi(read_json::<PhiParamsJson>(params)?.to_params()?),
    };
    let (n, m) = parameters.dims();
    let means = openmap_core::MeanValueVector::new(n, means.to_vec())?;
    let (basis, fixed) = match unitary {
        Some(path) => {
            let dynamics = read_dynamics(path, n, m)?;
            let fixed = match kind {
                Kind::Omega => dynamics.omega_parameter_indices(),
                Kind::Phi => dynamics.phi_parameter_indices().correlations,
            };
            (dynamics.basis().clone(), Some(fixed))
        }
        None => (openmap_core::JointBasis::with_dims(n, m)?, None),
    };
    let query = DomainQuery { means, parameters, fixed: fixed.clone() };
    let compatibility = compatible(&query, &basis, search)?;
    let witness = compatibility.witness.as_ref().map(MatrixJson::from);
    emit(
        cli,
        &DomainReport {
            compatibility,
            held_fixed: fixed.map(|f| f.into_iter().map(|(a, b)| [a, b]).collect()),
            witness,
        },
    )
}
