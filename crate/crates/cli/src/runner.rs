//! Executes configurations and evaluates observables over the trajectory.

use std::time::Instant;

use movwell_core::basis::{self, decompose_initial};
use movwell_core::fdref::{grid_norm, GridState};
use movwell_core::observables::{average_error, mean_energy, mean_position};
use movwell_core::{
    ExactSnapshot, ExactUniformSolution, ExactUniformSuperposition, FdSolver, GridSnapshot, Schedule, Snapshot,
    SpectralSnapshot, SpectralSolver, SpectralState, SuperpositionSnapshot, TimeSeries,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{InitialKind, Method, Observable, RunConfig};
use crate::error::{CliError, Result};

/// Note recorded with every FD run that reports ⟨H⟩.
pub const FD_ENERGY_NOTE: &str =
    "FD <H> uses the central-difference Laplacian on the grid, normalized by the grid's own (drifting) norm";

#[derive(Debug, Clone)]
pub enum Trajectory {
    Spectral(Vec<SpectralState>),
    Grid(Vec<GridState>),
    ExactMode { solution: ExactUniformSolution, times: Vec<f64> },
    ExactSuperposition { solution: ExactUniformSuperposition, times: Vec<f64> },
}

/// A finished simulation.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub config: RunConfig,
    pub trajectory: Trajectory,
    /// Σ|q_jk|² retained by the truncation (spectral), the sampled norm (FD),
    /// or Σ|c_n|² of the exact expansion.
    pub captured_norm: f64,
    pub warnings: Vec<String>,
    pub wall_time_seconds: f64,
}

impl RunOutcome {
    pub fn len(&self) -> usize {
        match &self.trajectory {
            Trajectory::Spectral(s) => s.len(),
            Trajectory::Grid(s) => s.len(),
            Trajectory::ExactMode { times, .. } | Trajectory::ExactSuperposition { times, .. } => times.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.snapshot(i).time()).collect()
    }

    /// The wavefunction at sample `i`.
    pub fn snapshot(&self, i: usize) -> Box<dyn Snapshot + '_> {
        let motion = &self.config.motion;
        match &self.trajectory {
            Trajectory::Spectral(s) => Box::new(SpectralSnapshot::new(&s[i], motion)),
            Trajectory::Grid(s) => Box::new(GridSnapshot::new(&s[i], motion)),
            Trajectory::ExactMode { solution, times } => Box::new(ExactSnapshot {
                solution: *solution,
                t: times[i],
            }),
            Trajectory::ExactSuperposition { solution, times } => {
                Box::new(SuperpositionSnapshot { solution, t: times[i] })
            }
        }
    }

    pub fn last(&self) -> Box<dyn Snapshot + '_> {
        self.snapshot(self.len() - 1)
    }

    pub fn norms(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.snapshot(i).norm()).collect()
    }

    /// |N(t)/N(0) − 1| at the final sample.
    pub fn final_norm_drift(&self) -> f64 {
        let n = self.norms();
        (n[n.len() - 1] / n[0] - 1.0).abs()
    }

    /// Largest |N(t)/N(0) − 1| over the samples.
    pub fn max_norm_drift(&self) -> f64 {
        let n = self.norms();
        n.iter().map(|v| (v / n[0] - 1.0).abs()).fold(0.0, f64::max)
    }

    /// One observable as a time series.
    pub fn series(&self, obs: Observable) -> Result<TimeSeries> {
        let times = self.times();
        let values = (0..self.len())
            .map(|i| {
                let s = self.snapshot(i);
                Ok(match obs {
                    Observable::Norm => s.norm(),
                    Observable::Energy | Observable::EnergyNormalized => mean_energy(s.as_ref())?,
                    Observable::Position => mean_position(s.as_ref())?,
                    Observable::Density => {
                        return Err(CliError::usage("outputs", "density is a snapshot, not a time series"))
                    }
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(if obs == Observable::EnergyNormalized {
            TimeSeries::new(Observable::Energy.name(), times, values)?.normalized_to_initial()?
        } else {
            TimeSeries::new(obs.name(), times, values)?
        })
    }

    /// Index of the sample closest to `t`.
    pub fn nearest_sample(&self, t: f64) -> usize {
        let times = self.times();
        let mut best = 0;
        for (i, ti) in times.iter().enumerate() {
            if (ti - t).abs() < (times[best] - t).abs() {
                best = i;
            }
        }
        best
    }

    /// Per-mode occupations |b_k|² over time (spectral runs only).
    pub fn occupations(&self, modes: &[usize]) -> Result<Vec<TimeSeries>> {
        let Trajectory::Spectral(states) = &self.trajectory else {
            return Err(CliError::usage("method", "mode occupations need the spectral method"));
        };
        let k_max = self.config.resolution;
        if let Some(&k) = modes.iter().find(|&&k| k == 0 || k > k_max) {
            return Err(CliError::usage("modes", format!("mode {k} is outside 1..={k_max}")));
        }
        let times: Vec<f64> = states.iter().map(|s| s.t).collect();
        modes
            .iter()
            .map(|&k| {
                let values = states.iter().map(|s| s.coefficient(k).norm_sqr()).collect();
                Ok(TimeSeries::new(format!("b{k}"), times.clone(), values)?)
            })
            .collect()
    }
}

fn schedule(config: &RunConfig) -> Result<Schedule> {
    Ok(Schedule::new(config.t_max, config.dt, config.n_samples)?)
}

/// Integrates `config` and keeps every sample in memory.
pub fn simulate(config: &RunConfig) -> Result<RunOutcome> {
    config.validate()?;
    let start = Instant::now();
    let schedule = schedule(config)?;
    let alpha = config.initial_alpha();
    let j = config.initial.j;
    let mut warnings = Vec::new();
    let (trajectory, captured_norm) = match config.method {
        Method::Spectral => {
            let init = decompose_initial(j, alpha, config.resolution)?;
            let captured = init.captured_norm();
            let solver = SpectralSolver::new(config.motion, config.resolution)?;
            let states = solver.evolve(&SpectralState::from_initial(&init), &schedule, &config.spectral)?;
            (Trajectory::Spectral(states), captured)
        }
        Method::Fd => {
            let l0 = config.motion.length(0.0);
            let psi0 = |x: f64| {
                let u = basis::eigenfunction(j, x, l0).unwrap_or(0.0);
                Complex64::from_polar(u, alpha * x * x / (l0 * l0))
            };
            let solver = FdSolver::new(config.motion, config.resolution)?;
            let traj = solver.evolve(psi0, &schedule, &config.fd)?;
            warnings.extend(traj.warnings);
            let captured = grid_norm(&traj.states[0], l0);
            (Trajectory::Grid(traj.states), captured)
        }
        Method::Exact => {
            let times = schedule.sample_times();
            match config.initial.kind {
                InitialKind::Fojon => {
                    let solution = ExactUniformSolution::for_motion(j, &config.motion)?;
                    (Trajectory::ExactMode { solution, times }, 1.0)
                }
                InitialKind::Doescher => {
                    let solution = ExactUniformSuperposition::from_eigenstate(j, &config.motion, config.resolution)?;
                    let captured = solution.coefficients.iter().map(|c| c.norm_sqr()).sum();
                    (Trajectory::ExactSuperposition { solution, times }, captured)
                }
            }
        }
    };
    Ok(RunOutcome {
        config: config.clone(),
        trajectory,
        captured_norm,
        warnings,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

/// One line of a comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub method: Method,
    pub resolution: usize,
    pub n_complex_odes: usize,
    pub average_error: f64,
    pub final_norm_drift: f64,
}

fn same_scenario(a: &RunConfig, b: &RunConfig) -> Result<()> {
    if a.motion != b.motion || a.t_max != b.t_max {
        return Err(movwell_core::Error::Domain(format!(
            "runs do not share a scenario: {:?} to t = {} vs {:?} to t = {}",
            a.motion, a.t_max, b.motion, b.t_max
        ))
        .into());
    }
    Ok(())
}

/// Average error of each run against the reference at t_max. Runs are
/// executed in parallel.
pub fn compare(configs: &[RunConfig], reference: &RunConfig) -> Result<Vec<CompareRow>> {
    for c in configs {
        same_scenario(c, reference)?;
    }
    let mut all: Vec<&RunConfig> = vec![reference];
    all.extend(configs);
    let outcomes = all.par_iter().map(|c| simulate(c)).collect::<Result<Vec<_>>>()?;
    let (reference, runs) = outcomes.split_first().expect("reference is present");
    let r = reference.last();
    runs.iter()
        .map(|run| {
            Ok(CompareRow {
                method: run.config.method,
                resolution: run.config.resolution,
                n_complex_odes: run.config.n_complex_odes(),
                average_error: average_error(run.last().as_ref(), r.as_ref())?,
                final_norm_drift: run.final_norm_drift(),
            })
        })
        .collect()
}
