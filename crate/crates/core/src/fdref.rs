//! Finite-difference reference scheme on the scaled coordinate y = x/ℓ(t).
//!
//! With ψ(x,t) = φ(x/ℓ(t), t) the equation on the fixed interval [0, 1] is
//! i∂ₜφ = −ℓ⁻²∂²ᵧφ + i(ℓ′/ℓ)·y·∂ᵧφ. Space is discretized with second-order
//! central differences on N intervals, leaving N − 1 complex ODEs that are
//! integrated with the same RK4 as the spectral solver. The norm is not
//! restored during the run.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::motion::WallMotion;
use crate::rk4::{OdeSystem, Rk4};
use crate::schedule::Schedule;

/// Relative norm drift above which a run is annotated with a warning.
pub const DRIFT_WARNING: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridState {
    pub t: f64,
    /// Number of intervals N on [0, 1].
    pub n_intervals: usize,
    /// φ at the interior nodes y_n = n/N, n = 1..N−1.
    pub phi: Vec<Complex64>,
}

impl GridState {
    /// φ at node n = 0..=N, including the Dirichlet boundary values.
    pub fn node(&self, n: usize) -> Complex64 {
        if n == 0 || n >= self.n_intervals {
            Complex64::new(0.0, 0.0)
        } else {
            self.phi[n - 1]
        }
    }

    /// Physical node positions x_n = ℓ·n/N for n = 0..=N.
    pub fn positions(&self, l: f64) -> Vec<f64> {
        let n = self.n_intervals as f64;
        (0..=self.n_intervals).map(|i| l * i as f64 / n).collect()
    }

    fn pack(&self, y: &mut [f64]) {
        for (i, z) in self.phi.iter().enumerate() {
            y[2 * i] = z.re;
            y[2 * i + 1] = z.im;
        }
    }

    fn unpack(t: f64, n_intervals: usize, y: &[f64]) -> Self {
        GridState {
            t,
            n_intervals,
            phi: y.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect(),
        }
    }
}

/// Options of [`FdSolver::evolve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdOptions {
    /// When set, each base step is subdivided so that h·λ stays below this
    /// value, where λ bounds the spectrum of the semi-discrete operator.
    /// Explicit RK4 is unstable for h·λ above 2√2 on the imaginary axis.
    pub stability_limit: Option<f64>,
}

impl Default for FdOptions {
    fn default() -> Self {
        FdOptions {
            stability_limit: Some(2.0),
        }
    }
}

/// Trajectory of an FD run plus any quality annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct FdTrajectory {
    pub states: Vec<GridState>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct FdSolver {
    motion: WallMotion,
    n_intervals: usize,
}

impl FdSolver {
    pub fn new(motion: WallMotion, n_intervals: usize) -> Result<Self> {
        if n_intervals < 3 {
            return Err(Error::domain(format!("need at least 3 grid intervals, got {n_intervals}")));
        }
        Ok(FdSolver {
            motion: motion.checked()?,
            n_intervals,
        })
    }

    pub fn motion(&self) -> &WallMotion {
        &self.motion
    }

    pub fn n_intervals(&self) -> usize {
        self.n_intervals
    }

    /// Samples `psi0` at x_n = y_n·ℓ(0).
    pub fn initial_state<F: Fn(f64) -> Complex64>(&self, psi0: F) -> GridState {
        let l0 = self.motion.length(0.0);
        let n = self.n_intervals as f64;
        GridState {
            t: 0.0,
            n_intervals: self.n_intervals,
            phi: (1..self.n_intervals).map(|i| psi0(l0 * i as f64 / n)).collect(),
        }
    }

    fn check_state(&self, s: &GridState) -> Result<()> {
        if s.n_intervals != self.n_intervals || s.phi.len() + 1 != self.n_intervals {
            return Err(Error::domain(format!(
                "grid state has N = {} ({} values) but the solver uses N = {}",
                s.n_intervals,
                s.phi.len(),
                self.n_intervals
            )));
        }
        Ok(())
    }

    /// ∂ₜφ at the interior nodes.
    pub fn rhs(&self, s: &GridState) -> Result<Vec<Complex64>> {
        self.check_state(s)?;
        let mut y = vec![0.0; 2 * s.phi.len()];
        let mut dy = vec![0.0; y.len()];
        s.pack(&mut y);
        OdeSystem::rhs(self, s.t, &y, &mut dy);
        Ok(dy.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect())
    }

    /// Samples `psi0`, integrates over the schedule and returns the state at
    /// every sample time.
    pub fn evolve<F: Fn(f64) -> Complex64>(&self, psi0: F, schedule: &Schedule, opts: &FdOptions) -> Result<FdTrajectory> {
        schedule.validate()?;
        self.motion.validate(schedule.t_max)?;
        let init = self.initial_state(psi0);
        let dim = 2 * init.phi.len();
        let mut y = vec![0.0; dim];
        init.pack(&mut y);
        let norm0 = grid_norm(&init, self.motion.length(0.0));

        let mut rk = Rk4::new(dim);
        let times = schedule.sample_times();
        let steps = schedule.steps_per_sample();
        let mut states = Vec::with_capacity(times.len());
        let mut warnings = Vec::new();
        let mut worst_drift: f64 = 0.0;
        states.push(init);
        for w in times.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            let h = (t1 - t0) / steps as f64;
            for i in 0..steps {
                let ta = t0 + i as f64 * h;
                let tb = if i + 1 == steps { t1 } else { ta + h };
                let sub = self.substeps(ta, tb, opts.stability_limit);
                rk.integrate(self, ta, tb, &mut y, sub);
            }
            let state = GridState::unpack(t1, self.n_intervals, &y);
            let norm = grid_norm(&state, self.motion.length(t1));
            if !norm.is_finite() {
                return Err(Error::Numerical {
                    what: format!("finite-difference solution diverged at t = {t1}"),
                    achieved: norm,
                });
            }
            worst_drift = worst_drift.max((norm / norm0 - 1.0).abs());
            states.push(state);
        }
        if worst_drift > DRIFT_WARNING {
            warnings.push(format!(
                "norm drift reached {:.2}% (N = {}); the grid is too coarse for this motion",
                100.0 * worst_drift,
                self.n_intervals
            ));
        }
        Ok(FdTrajectory { states, warnings })
    }

    fn substeps(&self, ta: f64, tb: f64, limit: Option<f64>) -> usize {
        let Some(limit) = limit else { return 1 };
        let n = self.n_intervals as f64;
        let bound = |t: f64| {
            let l = self.motion.length(t);
            4.0 * n * n / (l * l) + (self.motion.velocity(t) / l).abs() * n
        };
        let lambda = bound(ta).max(bound(tb)).max(bound(0.5 * (ta + tb)));
        ((tb - ta) * lambda / limit).ceil().max(1.0) as usize
    }
}

/// ∫|ψ|²dx = ℓ·∫|φ|²dy by composite Simpson over the nodes.
pub fn grid_norm(s: &GridState, l: f64) -> f64 {
    let samples: Vec<f64> = (0..=s.n_intervals).map(|n| s.node(n).norm_sqr()).collect();
    l * crate::quad::simpson(&samples, 1.0 / s.n_intervals as f64)
}

impl OdeSystem for FdSolver {
    fn dim(&self) -> usize {
        2 * (self.n_intervals - 1)
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let n = self.n_intervals;
        let nf = n as f64;
        let l = self.motion.length(t);
        let diffusion = nf * nf / (l * l);
        let drift = self.motion.velocity(t) / l * 0.5 * nf;
        let at = |i: usize| -> Complex64 {
            // Interior index i = 1..N−1 maps to y[2(i−1)].
            if i == 0 || i >= n {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(y[2 * (i - 1)], y[2 * (i - 1) + 1])
            }
        };
        for i in 1..n {
            let (left, mid, right) = (at(i - 1), at(i), at(i + 1));
            let lap = (right - 2.0 * mid + left) * diffusion;
            let grad = (right - left) * (drift * i as f64 / nf);
            // ∂ₜφ = i·ℓ⁻²∂²ᵧφ + (ℓ′/ℓ)·y·∂ᵧφ
            let d = Complex64::new(-lap.im, lap.re) + grad;
            dy[2 * (i - 1)] = d.re;
            dy[2 * (i - 1) + 1] = d.im;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn ground(x: f64) -> Complex64 {
        Complex64::new(2f64.sqrt() * (PI * x).sin(), 0.0)
    }

    #[test]
    fn static_ground_mode_rotates_at_discrete_eigenvalue() {
        let n = 64;
        let solver = FdSolver::new(WallMotion::fixed(1.0).unwrap(), n).unwrap();
        let s = solver.initial_state(ground);
        let d = solver.rhs(&s).unwrap();
        let discrete = 4.0 * (n * n) as f64 * (PI / (2.0 * n as f64)).sin().powi(2);
        for (phi, dphi) in s.phi.iter().zip(&d) {
            let expected = Complex64::new(0.0, -discrete) * phi;
            assert_abs_diff_eq!((dphi - expected).norm(), 0.0, epsilon = 1e-9);
        }
        assert!((discrete - PI * PI).abs() < PI.powi(4) / (12.0 * (n * n) as f64) * 1.01);
    }

    #[test]
    fn zero_state_has_zero_derivative() {
        let m = WallMotion::oscillatory(1.0, 0.3, 10.0).unwrap();
        let solver = FdSolver::new(m, 10).unwrap();
        let s = solver.initial_state(|_| Complex64::new(0.0, 0.0));
        assert!(solver.rhs(&s).unwrap().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn static_laplacian_conserves_norm_exactly() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let solver = FdSolver::new(WallMotion::fixed(1.3).unwrap(), 40).unwrap();
        let s = GridState {
            t: 0.0,
            n_intervals: 40,
            phi: (0..39).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
        };
        let d = solver.rhs(&s).unwrap();
        let rate: f64 = s.phi.iter().zip(&d).map(|(p, dp)| (p.conj() * dp).re).sum();
        assert!(rate.abs() <= 1e-12, "{rate}");
    }

    #[test]
    fn static_evolution_tracks_stationary_phase() {
        let n = 50;
        let solver = FdSolver::new(WallMotion::fixed(1.0).unwrap(), n).unwrap();
        let schedule = Schedule::new(0.2, 1e-4, 3).unwrap();
        let traj = solver.evolve(ground, &schedule, &FdOptions::default()).unwrap();
        let last = traj.states.last().unwrap();
        let discrete = 4.0 * (n * n) as f64 * (PI / (2.0 * n as f64)).sin().powi(2);
        let rot = Complex64::from_polar(1.0, -discrete * 0.2);
        for (i, phi) in last.phi.iter().enumerate() {
            let expected = ground((i + 1) as f64 / n as f64) * rot;
            assert_abs_diff_eq!((phi - expected).norm(), 0.0, epsilon = 1e-8);
        }
        assert!(traj.warnings.is_empty());
    }

    #[test]
    fn coarse_grid_is_rejected() {
        assert!(FdSolver::new(WallMotion::fixed(1.0).unwrap(), 2).is_err());
    }
}
