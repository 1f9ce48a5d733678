//! Expansion in the instantaneous eigenbasis.
//!
//! The wavefunction is written as
//! ψ(x,t) = Σ_k b_k(t)·u_k(x,t)·exp(−iπ²k²θ(t)) with θ(t) = ∫₀ᵗ dτ/ℓ²,
//! and the coefficients obey ḃ_k = −Σ_n Δ_kn(t)·e^{iη_kn(t)}·b_n. The
//! system is integrated over the real variables c_k = Re b_k, d_k = Im b_k
//! together with θ, so every phase is taken from the state itself.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{self, CouplingMatrix, InitialState};
use crate::error::{Error, Result};
use crate::motion::WallMotion;
use crate::rk4::{OdeSystem, Rk4};
use crate::schedule::Schedule;

const PI2: f64 = PI * PI;

/// Default bound on the relative norm drift of a trajectory.
pub const DEFAULT_DRIFT_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralState {
    pub t: f64,
    pub theta: f64,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
}

/// Time derivative of a [`SpectralState`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDerivative {
    pub dc: Vec<f64>,
    pub dd: Vec<f64>,
    pub dtheta: f64,
}

impl SpectralState {
    pub fn from_coefficients(b: &[Complex64]) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::domain("at least one mode is required"));
        }
        Ok(SpectralState {
            t: 0.0,
            theta: 0.0,
            c: b.iter().map(|z| z.re).collect(),
            d: b.iter().map(|z| z.im).collect(),
        })
    }

    pub fn from_initial(init: &InitialState) -> Self {
        Self::from_coefficients(&init.q).expect("initial state has at least one mode")
    }

    pub fn k_max(&self) -> usize {
        self.c.len()
    }

    /// b_k with a 1-based mode index.
    pub fn coefficient(&self, k: usize) -> Complex64 {
        Complex64::new(self.c[k - 1], self.d[k - 1])
    }

    pub fn coefficients(&self) -> Vec<Complex64> {
        self.c.iter().zip(&self.d).map(|(&c, &d)| Complex64::new(c, d)).collect()
    }

    /// |b_k|² for every retained mode.
    pub fn occupations(&self) -> Vec<f64> {
        self.c.iter().zip(&self.d).map(|(c, d)| c * c + d * d).collect()
    }

    /// P = Σ_k |b_k|².
    pub fn norm(&self) -> f64 {
        self.occupations().iter().sum()
    }

    fn pack(&self, y: &mut [f64]) {
        let k = self.k_max();
        y[..k].copy_from_slice(&self.c);
        y[k..2 * k].copy_from_slice(&self.d);
        y[2 * k] = self.theta;
    }

    fn unpack(t: f64, y: &[f64], k: usize) -> Self {
        SpectralState {
            t,
            theta: y[2 * k],
            c: y[..k].to_vec(),
            d: y[k..2 * k].to_vec(),
        }
    }
}

/// Options of [`SpectralSolver::evolve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralOptions {
    /// When set, each base step is subdivided so that the fastest relative
    /// phase π²(k_max² − 1)·Δθ advances by at most this many radians per
    /// step. The uniform compression drives 1/ℓ² up by orders of
    /// magnitude and needs this; a fixed wall never triggers it.
    pub max_phase_step: Option<f64>,
    /// Relative norm drift that aborts the run.
    pub drift_limit: f64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            max_phase_step: Some(0.5),
            drift_limit: DEFAULT_DRIFT_LIMIT,
        }
    }
}

/// Coupled-mode system for a given wall motion and truncation.
#[derive(Debug, Clone)]
pub struct SpectralSolver {
    motion: WallMotion,
    coupling: CouplingMatrix,
}

impl SpectralSolver {
    pub fn new(motion: WallMotion, k_max: usize) -> Result<Self> {
        Ok(SpectralSolver {
            motion: motion.checked()?,
            coupling: basis::coupling(k_max)?,
        })
    }

    pub fn motion(&self) -> &WallMotion {
        &self.motion
    }

    pub fn k_max(&self) -> usize {
        self.coupling.k_max()
    }

    fn check_state(&self, s: &SpectralState) -> Result<()> {
        if s.k_max() != self.k_max() || s.d.len() != self.k_max() {
            return Err(Error::domain(format!(
                "state has {} modes but the solver uses {}",
                s.k_max(),
                self.k_max()
            )));
        }
        Ok(())
    }

    /// Time derivative of `s`.
    pub fn rhs(&self, s: &SpectralState) -> Result<SpectralDerivative> {
        self.check_state(s)?;
        let k = self.k_max();
        let mut y = vec![0.0; 2 * k + 1];
        let mut dy = vec![0.0; 2 * k + 1];
        s.pack(&mut y);
        OdeSystem::rhs(self, s.t, &y, &mut dy);
        Ok(SpectralDerivative {
            dc: dy[..k].to_vec(),
            dd: dy[k..2 * k].to_vec(),
            dtheta: dy[2 * k],
        })
    }

    /// Integrates `init` over the schedule and returns the state at every
    /// sample time. `init.t` must be zero.
    pub fn evolve(&self, init: &SpectralState, schedule: &Schedule, opts: &SpectralOptions) -> Result<Vec<SpectralState>> {
        self.check_state(init)?;
        schedule.validate()?;
        if init.t != 0.0 {
            return Err(Error::domain("trajectories start at t = 0"));
        }
        self.motion.validate(schedule.t_max)?;

        let k = self.k_max();
        let mut y = vec![0.0; 2 * k + 1];
        init.pack(&mut y);
        let norm0 = init.norm();
        let mut rk = Rk4::new(2 * k + 1);
        let times = schedule.sample_times();
        let steps = schedule.steps_per_sample();

        let mut out = Vec::with_capacity(times.len());
        out.push(init.clone());
        for w in times.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            let h = (t1 - t0) / steps as f64;
            for i in 0..steps {
                let ta = t0 + i as f64 * h;
                let tb = if i + 1 == steps { t1 } else { ta + h };
                let sub = self.substeps(ta, tb, opts.max_phase_step);
                rk.integrate(self, ta, tb, &mut y, sub);
            }
            let state = SpectralState::unpack(t1, &y, k);
            let drift = (state.norm() / norm0 - 1.0).abs();
            if !(drift <= opts.drift_limit) {
                return Err(Error::IntegrationQuality {
                    drift,
                    limit: opts.drift_limit,
                    t: t1,
                });
            }
            out.push(state);
        }
        Ok(out)
    }

    fn substeps(&self, ta: f64, tb: f64, max_phase: Option<f64>) -> usize {
        let Some(max_phase) = max_phase else { return 1 };
        let kf = self.k_max() as f64;
        let l = self.motion.length(ta).min(self.motion.length(tb));
        let rate = PI2 * (kf * kf - 1.0) / (l * l);
        ((tb - ta) * rate / max_phase).ceil().max(1.0) as usize
    }

    /// ψ(x, t) at the given positions, which must lie in [0, ℓ(t)].
    pub fn reconstruct(&self, s: &SpectralState, xs: &[f64]) -> Result<Vec<Complex64>> {
        self.check_state(s)?;
        reconstruct(s, &self.motion, xs)
    }
}

/// ψ(x, t) = Σ_k b_k·u_k(x, t)·exp(−iπ²k²θ) for a state of any size.
pub fn reconstruct(s: &SpectralState, motion: &WallMotion, xs: &[f64]) -> Result<Vec<Complex64>> {
    let l = motion.try_length(s.t)?;
    if let Some(x) = xs.iter().find(|x| !(0.0..=l).contains(*x)) {
        return Err(Error::domain(format!("x = {x} outside [0, {l}] at t = {}", s.t)));
    }
    let weights: Vec<Complex64> = s
        .coefficients()
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            let k = (i + 1) as f64;
            b * Complex64::from_polar((2.0 / l).sqrt(), -PI2 * k * k * s.theta)
        })
        .collect();
    Ok(xs
        .iter()
        .map(|&x| {
            // sin(kz) by the Chebyshev recurrence.
            let z = PI * x / l;
            let two_cos = 2.0 * z.cos();
            let (mut prev, mut cur) = (0.0, z.sin());
            let mut acc = Complex64::new(0.0, 0.0);
            for w in &weights {
                acc += w * cur;
                let next = two_cos * cur - prev;
                prev = cur;
                cur = next;
            }
            acc
        })
        .collect())
}

impl OdeSystem for SpectralSolver {
    fn dim(&self) -> usize {
        2 * self.k_max() + 1
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let k = self.k_max();
        let theta = y[2 * k];
        let l = self.motion.length(t);
        let rate = self.motion.velocity(t) / l;
        dy[2 * k] = 1.0 / (l * l);

        if rate == 0.0 {
            dy[..2 * k].iter_mut().for_each(|v| *v = 0.0);
            return;
        }

        // e^{iη_kn} = p_k·conj(p_n) with p_k = e^{iπ²k²θ}, so
        // ḃ_k = −(ℓ′/ℓ)·p_k·Σ_n g_kn·conj(p_n)·b_n.
        let phases: Vec<Complex64> = (1..=k)
            .map(|m| {
                let m = m as f64;
                Complex64::from_polar(1.0, PI2 * m * m * theta)
            })
            .collect();
        let rotated: Vec<Complex64> = (0..k)
            .map(|n| phases[n].conj() * Complex64::new(y[n], y[k + n]))
            .collect();
        for row in 0..k {
            let g = self.coupling.row(row);
            let mut acc = Complex64::new(0.0, 0.0);
            for (gn, w) in g.iter().zip(&rotated) {
                acc += w * gn;
            }
            let db = -rate * phases[row] * acc;
            dy[row] = db.re;
            dy[k + row] = db.im;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::SQRT_2;

    #[test]
    fn static_wall_has_zero_rhs() {
        let solver = SpectralSolver::new(WallMotion::fixed(1.0).unwrap(), 6).unwrap();
        let b: Vec<Complex64> = (0..6).map(|i| Complex64::new(i as f64, 1.0 - i as f64)).collect();
        let mut s = SpectralState::from_coefficients(&b).unwrap();
        s.theta = 0.3;
        let d = solver.rhs(&s).unwrap();
        assert!(d.dc.iter().chain(&d.dd).all(|v| *v == 0.0));
        assert_eq!(d.dtheta, 1.0);
    }

    #[test]
    fn single_mode_is_frozen() {
        let m = WallMotion::oscillatory(1.0, 0.3, 10.0).unwrap();
        let solver = SpectralSolver::new(m, 1).unwrap();
        let s = SpectralState::from_coefficients(&[Complex64::new(0.6, 0.8)]).unwrap();
        let d = solver.rhs(&s).unwrap();
        assert_eq!((d.dc[0], d.dd[0]), (0.0, 0.0));
    }

    #[test]
    fn two_mode_compression_example() {
        let solver = SpectralSolver::new(WallMotion::uniform(1.0, -16.0).unwrap(), 2).unwrap();
        let s = SpectralState::from_coefficients(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        let d = solver.rhs(&s).unwrap();
        assert_abs_diff_eq!(d.dc[1], -64.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.dd[1], 0.0, epsilon = 1e-12);
        assert_eq!(d.dc[0], 0.0);
    }

    #[test]
    fn ground_state_reconstruction() {
        let s = SpectralState::from_initial(&InitialState::eigenstate(1, 5).unwrap());
        let psi = reconstruct(&s, &WallMotion::fixed(1.0).unwrap(), &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(psi[0], Complex64::new(0.0, 0.0));
        assert_abs_diff_eq!(psi[1].re, SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(psi[2].norm(), 0.0, epsilon = 1e-15);
        assert!(reconstruct(&s, &WallMotion::fixed(1.0).unwrap(), &[1.1]).is_err());
    }

    #[test]
    fn static_wall_keeps_coefficients() {
        let solver = SpectralSolver::new(WallMotion::fixed(1.0).unwrap(), 4).unwrap();
        let init = SpectralState::from_initial(&InitialState::eigenstate(1, 4).unwrap());
        let schedule = Schedule::new(0.5, 1e-3, 11).unwrap();
        let traj = solver.evolve(&init, &schedule, &SpectralOptions::default()).unwrap();
        assert_eq!(traj.len(), 11);
        let last = traj.last().unwrap();
        assert_eq!(last.c, init.c);
        assert_eq!(last.d, init.d);
        assert_abs_diff_eq!(last.theta, 0.5, epsilon = 1e-13);
    }

    #[test]
    fn large_step_trips_drift_check() {
        let m = WallMotion::oscillatory(1.0, 0.3, 4.0 * PI2).unwrap();
        let solver = SpectralSolver::new(m, 20).unwrap();
        let init = SpectralState::from_initial(&basis::decompose_initial(2, m.alpha(), 20).unwrap());
        let schedule = Schedule::new(1.0, 0.02, 11).unwrap();
        let opts = SpectralOptions {
            max_phase_step: None,
            ..Default::default()
        };
        let err = solver.evolve(&init, &schedule, &opts).unwrap_err();
        assert!(matches!(err, Error::IntegrationQuality { .. }), "{err}");
    }

    #[test]
    fn mismatched_state_is_rejected() {
        let solver = SpectralSolver::new(WallMotion::fixed(1.0).unwrap(), 4).unwrap();
        let s = SpectralState::from_initial(&InitialState::eigenstate(1, 3).unwrap());
        assert!(solver.rhs(&s).is_err());
    }
}
