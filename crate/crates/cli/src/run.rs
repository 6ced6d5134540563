//! The `run` verb: one configuration in, report and CSV artifacts out.

use std::fs;
use std::path::Path;
use std::time::Instant;

use reduce_core::geometry::Scenario;
use reduce_core::lie::Representation;
use reduce_core::oracle::oracle_values;
use reduce_core::reduce::{assemble, ReducedOperator};
use reduce_core::spectral::{compare_oracle, eigen_spectrum, SpectrumReport, RESIDUAL_TOL};
use reduce_core::{CheckReport, CheckResult};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::CliError;

/// A computed eigenvalue matches its oracle within this relative error...
pub const ORACLE_TOL_REL: f64 = 1e-4;
/// ...or this absolute error, which decides zero oracle values.
pub const ORACLE_TOL_ABS: f64 = 1e-6;

pub const REPORT_FILE: &str = "report.json";
pub const SPECTRUM_FILE: &str = "spectrum.csv";
pub const PLOT_FILE: &str = "plot.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InertiaSummary {
    pub nodes: usize,
    pub delta_min: f64,
    pub delta_max: f64,
    pub condition_min: f64,
    pub condition_max: f64,
    pub inverse_residual_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub assemble_s: f64,
    pub solve_s: f64,
    pub total_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub inertia: InertiaSummary,
    pub dim_vk: usize,
    pub spectrum: SpectrumReport,
    pub checks: CheckReport,
    pub timings: Timings,
}

/// Output of [`run_pipeline`]: the serializable report plus the eigenvector
/// data needed for plot files.
pub struct RunOutput {
    pub report: RunReport,
    pub operator: ReducedOperator,
    pub eigenvectors: Vec<Vec<f64>>,
}

fn inertia_summary(scenario: &Scenario, op: &ReducedOperator) -> Result<InertiaSummary, CliError> {
    let dual = scenario.algebra.dual_bases()?;
    let mut s = InertiaSummary {
        nodes: op.grid.len(),
        delta_min: f64::INFINITY,
        delta_max: 0.0,
        condition_min: f64::INFINITY,
        condition_max: 0.0,
        inverse_residual_max: 0.0,
    };
    for x in &op.grid.points {
        let sample = scenario.inertia(&dual, x)?;
        s.delta_min = s.delta_min.min(sample.delta);
        s.delta_max = s.delta_max.max(sample.delta);
        s.condition_min = s.condition_min.min(sample.condition());
        s.condition_max = s.condition_max.max(sample.condition());
        s.inverse_residual_max = s.inverse_residual_max.max(sample.inverse_residual());
    }
    Ok(s)
}

pub fn run_pipeline(config: &RunConfig) -> Result<RunOutput, CliError> {
    config.validate()?;
    let start = Instant::now();
    let scenario = Scenario::catalog(config.scenario);
    let rep = Representation::parse(scenario.group, &config.representation)?;
    let oracle = config
        .oracle
        .map(|o| oracle_values(o, &scenario, &rep, &config.grid, config.eigenvalues))
        .transpose()?;

    log::info!("assembling {} / {} with N = {}", config.scenario, rep.label, config.grid.n);
    let op = assemble(&scenario, &rep, &config.grid, config.bc)?;
    let assembled = Instant::now();
    if config.eigenvalues > op.dim() {
        return Err(CliError::Config(format!(
            "{} eigenvalues requested from a {}-dimensional operator",
            config.eigenvalues,
            op.dim()
        )));
    }

    log::info!("solving for {} eigenvalues of a {}x{} band matrix", config.eigenvalues, op.dim(), op.dim());
    let mut spectrum = eigen_spectrum(&op, config.eigenvalues)?;
    let solved = Instant::now();
    if let Some(values) = &oracle {
        spectrum.oracle_comparison = Some(compare_oracle(&spectrum, values, ORACLE_TOL_ABS, ORACLE_TOL_REL)?);
    }
    let eigenvectors = spectrum.eigenvectors.take().unwrap_or_default();

    let inertia = inertia_summary(&scenario, &op)?;
    let mut checks = CheckReport::default();
    let asym = op.asymmetry();
    checks.push(CheckResult::with_pass("hermiticity.max_asymmetry", asym, 0.0, asym == 0.0));
    let worst_residual = spectrum.residuals.iter().fold(0.0f64, |m, r| m.max(*r)) / spectrum.matrix_norm;
    checks.push(CheckResult::below("eigen.relative_residual", worst_residual, RESIDUAL_TOL));
    checks.push(CheckResult::below(
        "eigen.orthonormality",
        spectrum.orthonormality_defect,
        reduce_core::spectral::ORTHONORMALITY_TOL,
    ));
    checks.push(CheckResult::below("inertia.inverse_identity", inertia.inverse_residual_max, 1e-10));
    if let Some(c) = &spectrum.oracle_comparison {
        let worst = c.rows.iter().filter_map(|r| r.rel_err).fold(0.0f64, f64::max);
        checks.push(CheckResult::with_pass("oracle.max_rel_err", worst, ORACLE_TOL_REL, c.pass));
    }

    let end = Instant::now();
    let report = RunReport {
        config: config.clone(),
        inertia,
        dim_vk: op.dim_vk,
        spectrum,
        checks,
        timings: Timings {
            assemble_s: (assembled - start).as_secs_f64(),
            solve_s: (solved - assembled).as_secs_f64(),
            total_s: (end - start).as_secs_f64(),
        },
    };
    Ok(RunOutput {
        report,
        operator: op,
        eigenvectors,
    })
}

/// Shortest decimal form that parses back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x}")
}

pub fn write_spectrum_csv(path: &Path, spectrum: &SpectrumReport) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["index", "eigenvalue", "oracle", "abs_err"])?;
    let rows = spectrum.oracle_comparison.as_ref().map(|c| &c.rows);
    for (i, l) in spectrum.eigenvalues.iter().enumerate() {
        let row = rows.and_then(|r| r.get(i));
        w.write_record([
            i.to_string(),
            num(*l),
            row.map(|r| num(r.oracle)).unwrap_or_default(),
            row.map(|r| num(r.abs_err)).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_plot_csv(path: &Path, op: &ReducedOperator, eigenvectors: &[Vec<f64>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    let dim = op.grid.dim();
    let d = op.dim_vk;
    let mut header: Vec<String> = if dim == 1 {
        vec!["x".into()]
    } else {
        (1..=dim).map(|i| format!("x{i}")).collect()
    };
    header.push("delta".into());
    header.push("v_eff".into());
    for m in 0..eigenvectors.len() {
        if d == 1 {
            header.push(format!("mode_{m}"));
        } else {
            header.extend((0..d).map(|c| format!("mode_{m}_{c}")));
        }
    }
    w.write_record(&header)?;
    for (node, x) in op.grid.points.iter().enumerate() {
        let mut rec: Vec<String> = x.iter().map(|v| num(*v)).collect();
        rec.push(num(op.delta[node]));
        rec.push(num(op.v_eff[node]));
        for v in eigenvectors {
            rec.extend((0..d).map(|c| num(v[node * d + c])));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_artifacts(out: &RunOutput, dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(REPORT_FILE), serde_json::to_string_pretty(&out.report)? + "\n")?;
    write_spectrum_csv(&dir.join(SPECTRUM_FILE), &out.report.spectrum)?;
    write_plot_csv(&dir.join(PLOT_FILE), &out.operator, &out.eigenvectors)?;
    Ok(())
}

/// Reads, validates and runs a config file; artifacts go to the config's
/// `output_dir`, resolved against the config file's directory when relative.
pub fn cmd_run(config_path: &Path) -> Result<RunReport, CliError> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config_path.display())))?;
    let config = RunConfig::parse(&text)?;
    let out = run_pipeline(&config)?;
    let dir = if config.output_dir.is_absolute() {
        config.output_dir.clone()
    } else {
        config_path
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .join(&config.output_dir)
    };
    write_artifacts(&out, &dir)?;
    log::info!("wrote {}", dir.display());
    Ok(out.report)
}
