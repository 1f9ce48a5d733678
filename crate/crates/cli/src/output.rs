//! CSV and manifest writers.

use std::fs;
use std::path::{Path, PathBuf};

use movwell_core::observables::density;
use movwell_core::TimeSeries;
use serde::{Deserialize, Serialize};

use crate::config::{Method, Observable, RunConfig};
use crate::error::{CliError, Result};
use crate::runner::{simulate, CompareRow, RunOutcome, FD_ENERGY_NOTE};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Full double precision: 17 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub observable: Observable,
    /// Relative to the output directory.
    pub path: PathBuf,
    /// Sample time of a density snapshot.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub time: Option<f64>,
}

/// Metadata written next to the data files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: RunConfig,
    pub captured_norm: f64,
    pub final_norm_drift: f64,
    pub max_norm_drift: f64,
    pub wall_time_seconds: f64,
    pub n_complex_odes: usize,
    pub files: Vec<OutputFile>,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
    pub version: String,
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

/// Writes columns `t,<name>` for one series.
pub fn write_series(path: &Path, series: &TimeSeries) -> Result<()> {
    write_table(path, std::slice::from_ref(series))
}

/// Writes `t` followed by one column per series; all series share times.
pub fn write_table(path: &Path, columns: &[TimeSeries]) -> Result<()> {
    let first = columns
        .first()
        .ok_or_else(|| CliError::usage("outputs", "nothing to write"))?;
    if columns.iter().any(|c| c.times != first.times) {
        return Err(CliError::usage("outputs", "columns are sampled at different times"));
    }
    let mut w = csv_writer(path)?;
    let mut header = vec!["t".to_string()];
    header.extend(columns.iter().map(|c| c.name.clone()));
    w.write_record(&header)?;
    for (i, t) in first.times.iter().enumerate() {
        let mut row = vec![format_value(*t)];
        row.extend(columns.iter().map(|c| format_value(c.values[i])));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))?;
    Ok(())
}

fn write_density(path: &Path, xs: &[f64], rho: &[f64]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["x", "density"])?;
    for (x, r) in xs.iter().zip(rho) {
        w.write_record([format_value(*x), format_value(*r)])?;
    }
    w.flush().map_err(|e| CliError::io(path, e))?;
    Ok(())
}

/// Writes the requested observables of a finished run and its manifest.
pub fn write_outcome(outcome: &RunOutcome) -> Result<Manifest> {
    let config = &outcome.config;
    let dir = &config.output_path;
    create_dir(dir)?;
    let mut files = Vec::new();
    for &obs in &config.outputs {
        if obs == Observable::Density {
            let times = if config.density_times.is_empty() {
                vec![config.t_max]
            } else {
                config.density_times.clone()
            };
            for t in times {
                let i = outcome.nearest_sample(t);
                let snap = outcome.snapshot(i);
                let (xs, rho) = density(snap.as_ref(), config.density_points)?;
                let name = PathBuf::from(format!("density_{i:06}.csv"));
                write_density(&dir.join(&name), &xs, &rho)?;
                files.push(OutputFile {
                    observable: obs,
                    path: name,
                    time: Some(snap.time()),
                });
            }
        } else {
            let series = outcome.series(obs)?;
            let name = PathBuf::from(format!("{}.csv", obs.name()));
            write_series(&dir.join(&name), &series)?;
            files.push(OutputFile {
                observable: obs,
                path: name,
                time: None,
            });
        }
    }
    let mut notes = Vec::new();
    let energy = config
        .outputs
        .iter()
        .any(|o| matches!(o, Observable::Energy | Observable::EnergyNormalized));
    if config.method == Method::Fd && energy {
        notes.push(FD_ENERGY_NOTE.to_string());
    }
    let manifest = Manifest {
        config: config.clone(),
        captured_norm: outcome.captured_norm,
        final_norm_drift: outcome.final_norm_drift(),
        max_norm_drift: outcome.max_norm_drift(),
        wall_time_seconds: outcome.wall_time_seconds,
        n_complex_odes: config.n_complex_odes(),
        files,
        notes,
        warnings: outcome.warnings.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let path = dir.join(MANIFEST_FILE);
    let json = serde_json::to_string_pretty(&manifest)?;
    fs::write(&path, json + "\n").map_err(|e| CliError::io(&path, e))?;
    Ok(manifest)
}

/// Simulates `config` and writes its outputs.
pub fn run(config: &RunConfig) -> Result<Manifest> {
    write_outcome(&simulate(config)?)
}

/// Writes a comparison table.
pub fn write_compare(path: &Path, rows: &[CompareRow]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    let mut w = csv_writer(path)?;
    w.write_record(["method", "resolution", "n_complex_odes", "average_error", "final_norm_drift"])?;
    for r in rows {
        w.write_record([
            r.method.to_string(),
            r.resolution.to_string(),
            r.n_complex_odes.to_string(),
            format_value(r.average_error),
            format_value(r.final_norm_drift),
        ])?;
    }
    w.flush().map_err(|e| CliError::io(path, e))?;
    Ok(())
}

/// Simulates a spectral run and writes |b_k|²(t) for the given modes.
pub fn coefficients(config: &RunConfig, modes: &[usize]) -> Result<PathBuf> {
    if config.method != Method::Spectral {
        return Err(CliError::usage("method", "coefficients are only defined for the spectral method"));
    }
    if modes.is_empty() {
        return Err(CliError::usage("modes", "no modes requested"));
    }
    if let Some(&k) = modes.iter().find(|&&k| k == 0 || k > config.resolution) {
        return Err(CliError::usage(
            "modes",
            format!("mode {k} is outside 1..={} (k_max)", config.resolution),
        ));
    }
    let outcome = simulate(config)?;
    let columns = outcome.occupations(modes)?;
    create_dir(&config.output_path)?;
    let path = config.output_path.join("coefficients.csv");
    write_table(&path, &columns)?;
    Ok(path)
}
