use crate::config::RunConfig;
use crate::error::CliError;
use crate::manifest::{num, RunManifest};
use ftlab_core::noise::{covariance_study, make_noise_z, sobolev_regularity_report, synthesize};
use ftlab_core::report::BoundReport;
use ftlab_core::rng::stream;
use ftlab_core::solver::{contraction_estimate, picard_solve_problem, Problem, StartGuess};
use ftlab_core::spectral::build_cutoff;
use ftlab_core::studies::verify_reports;
use ftlab_core::{ftf, NoiseKind, RealField};
use std::path::Path;

/// Seeds per covariance estimate.
pub const COVARIANCE_SAMPLES: usize = 2000;
/// Node pairs `(x, y)` along the first axis.
pub const COVARIANCE_PAIRS: [(f64, f64); 4] = [(0.5, 0.5), (0.5, 1.0), (1.0, 1.0), (1.0, 1.5)];
pub const CONTRACTION_RHOS: [f64; 4] = [1.0, 4.0, 16.0, 64.0];
pub const CONTRACTION_PAIRS: usize = 20;

fn synthesize_z(cfg: &RunConfig) -> Result<(RealField, RealField), CliError> {
    let g = cfg.solver.grid;
    let b = synthesize(&cfg.noise, &g)?;
    let z = make_noise_z(&b, &build_cutoff(&g))?;
    Ok((b, z))
}

/// `Z` from `--noise`, or synthesized from the config after the solver's
/// regularity gate.
fn drift(
    cfg: &RunConfig,
    noise: Option<&Path>,
    m: &mut RunManifest,
) -> Result<RealField, CliError> {
    match noise {
        Some(p) => {
            let z = ftf::read(p)?;
            if *z.grid() != cfg.solver.grid {
                return Err(CliError::Config(format!(
                    "noise file {} is on a d={} N={} grid, config asks for d={} N={}",
                    p.display(),
                    z.grid().d(),
                    z.grid().n(),
                    cfg.solver.grid.d(),
                    cfg.solver.grid.n()
                )));
            }
            m.note("noise_file", p.display());
            Ok(z)
        }
        None => {
            cfg.noise.validate_for_solver(cfg.solver.beta)?;
            m.note("noise", cfg.noise.kind.as_str());
            Ok(synthesize_z(cfg)?.1)
        }
    }
}

fn report_rows(reports: &[BoundReport]) -> Vec<String> {
    reports.iter().map(BoundReport::csv_row).collect()
}

fn failures(reports: &[BoundReport]) -> Vec<String> {
    reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| {
            let p = r.params_string();
            if p.is_empty() {
                r.name.clone()
            } else {
                format!("{}[{p}]", r.name)
            }
        })
        .collect()
}

pub fn noise(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    cfg.noise.validate()?;
    if !(cfg.solver.q >= 2.0) {
        return Err(CliError::Config(format!(
            "q = {} must be >= 2",
            cfg.solver.q
        )));
    }
    let mut m = RunManifest::new("noise", cfg, out)?;
    let g = cfg.solver.grid;
    let (b, z) = synthesize_z(cfg)?;
    m.write_field("B.ftf", &b)?;
    m.write_field("Z.ftf", &z)?;

    if cfg.noise.kind != NoiseKind::SmoothTest {
        let pairs: Vec<(f64, f64)> = COVARIANCE_PAIRS
            .iter()
            .copied()
            .filter(|&(x, y)| x.max(y) < g.side())
            .collect();
        let rows = covariance_study(&cfg.noise, &g, &pairs, COVARIANCE_SAMPLES)?;
        let lines: Vec<String> = rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{}",
                    num(r.x),
                    num(r.y),
                    num(r.empirical),
                    num(r.formula),
                    num(r.stderr),
                    r.within(3.0)
                )
            })
            .collect();
        m.write_csv(
            "covariance.csv",
            "x,y,empirical,formula,stderr,within_3sigma",
            &lines,
        )?;
        m.seeds.push(("covariance_stream".into(), stream::SAMPLE));
        m.note("covariance_samples", COVARIANCE_SAMPLES);
    }

    let order = 1.0 - cfg.solver.beta;
    let reg = sobolev_regularity_report(&z, order, cfg.solver.q)?;
    m.note("regularity_class", format!("{:?}", reg.class));
    m.write_csv(
        "regularity.csv",
        BoundReport::CSV_HEADER,
        &report_rows(&[reg.to_bound_report()]),
    )?;
    m.finish()
}

pub fn solve(cfg: &RunConfig, noise: Option<&Path>, out: &Path) -> Result<(), CliError> {
    cfg.solver.validate()?;
    let mut m = RunManifest::new("solve", cfg, out)?;
    let z = drift(cfg, noise, &mut m)?;
    let problem = Problem::new(&z, &cfg.solver)?;
    let result = picard_solve_problem(&problem, StartGuess::InitialTerm)?;

    let mut index = String::new();
    for (i, (t, state)) in result
        .path
        .times()
        .iter()
        .zip(result.path.states())
        .enumerate()
    {
        let name = format!("path_{i:04}.ftf");
        m.write_field(&name, &problem.lap.sine_synthesis(state))?;
        index.push_str(&format!("{i} {} {name}\n", num(*t)));
    }
    m.write_file("index.txt", index.as_bytes())?;
    let rows: Vec<String> = result.diagnostics.iter().map(|d| d.csv_row()).collect();
    m.write_csv(
        "diagnostics.csv",
        ftlab_core::solver::IterationDiag::CSV_HEADER,
        &rows,
    )?;
    m.note("rho", num(result.rho));
    m.note("iterations", result.diagnostics.len());
    m.note("converged", result.converged);
    if !result.rho_probe.is_empty() {
        m.seeds.push(("auto_rho_stream".into(), stream::AUTO_RHO));
    }
    m.finish()?;
    if result.converged {
        Ok(())
    } else {
        let last = result
            .diagnostics
            .last()
            .map(|d| d.diff_norm)
            .unwrap_or(f64::NAN);
        Err(CliError::NotConverged(format!(
            "{} iterations, last difference {last:.3e} > tol_picard {:.3e}",
            result.diagnostics.len(),
            cfg.solver.tol_picard
        )))
    }
}

pub fn verify(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    cfg.solver.validate()?;
    let mut m = RunManifest::new("verify", cfg, out)?;
    let reports = verify_reports(&cfg.solver)?;
    m.write_csv(
        "reports.csv",
        BoundReport::CSV_HEADER,
        &report_rows(&reports),
    )?;
    let failed = failures(&reports);
    m.note("failed", failed.len());
    m.finish()?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::BoundsFailed(failed))
    }
}

pub fn contraction(cfg: &RunConfig, noise: Option<&Path>, out: &Path) -> Result<(), CliError> {
    cfg.solver.validate()?;
    let mut m = RunManifest::new("contraction", cfg, out)?;
    let z = drift(cfg, noise, &mut m)?;
    let study = contraction_estimate(&z, &cfg.solver, &CONTRACTION_RHOS, CONTRACTION_PAIRS)?;
    m.seeds.push(("pair_stream".into(), stream::PAIR));
    let rows: Vec<String> = study
        .rhos
        .iter()
        .zip(&study.constants)
        .map(|(r, c)| format!("{},{}", num(*r), num(*c)))
        .collect();
    m.write_csv("contraction.csv", "rho,c", &rows)?;
    m.write_csv(
        "slope.csv",
        "slope,reference_slope,tolerance,strictly_decreasing",
        &[format!(
            "{},{},{},{}",
            num(study.slope),
            num(study.reference_slope),
            num(ftlab_core::solver::contraction::SLOPE_TOL),
            study.strictly_decreasing()
        )],
    )?;
    let reports = study.reports();
    m.write_csv(
        "reports.csv",
        BoundReport::CSV_HEADER,
        &report_rows(&reports),
    )?;
    m.note("pairs", CONTRACTION_PAIRS);
    m.note("skipped_pairs", study.skipped_pairs);
    let failed = failures(&reports);
    m.finish()?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::BoundsFailed(failed))
    }
}
