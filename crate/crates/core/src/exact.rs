//! Closed-form solutions for a wall moving at constant velocity.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::basis::{self, check_mode};
use crate::error::{Error, Result};
use crate::motion::WallMotion;

/// Ψ_n(x,t) = √(2/ℓ)·exp[iαξ(x/ℓ)² − i(n²π²/4α)(1 − 1/ξ)]·sin(nπx/ℓ)
/// with ℓ = L0 + a·t, ξ = ℓ/L0 and α = L0·a/4 (ħ = 1, m = 1/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactUniformSolution {
    pub n: usize,
    pub l0: f64,
    pub velocity: f64,
}

impl ExactUniformSolution {
    pub fn new(n: usize, l0: f64, velocity: f64) -> Result<Self> {
        check_mode(n, "n")?;
        WallMotion::uniform(l0, velocity)?;
        Ok(ExactUniformSolution { n, l0, velocity })
    }

    /// Builds the solution for a uniform [`WallMotion`]; other kinds have no
    /// closed form here.
    pub fn for_motion(n: usize, motion: &WallMotion) -> Result<Self> {
        match *motion {
            WallMotion::Uniform { l0, velocity } => Self::new(n, l0, velocity),
            _ => Err(Error::domain("exact solution is only available for uniform wall motion")),
        }
    }

    pub fn motion(&self) -> WallMotion {
        WallMotion::Uniform {
            l0: self.l0,
            velocity: self.velocity,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.l0 * self.velocity / 4.0
    }

    pub fn length(&self, t: f64) -> f64 {
        self.l0 + self.velocity * t
    }

    fn global_phase(&self, t: f64) -> f64 {
        let n = self.n as f64;
        let l = self.length(t);
        if self.velocity == 0.0 {
            // Stationary state: −E_n·t.
            -PI * PI * n * n * t / (self.l0 * self.l0)
        } else {
            // (n²π²/4α)(1 − 1/ξ) = n²π²·t/(L0·ℓ), written without the 1/α.
            -PI * PI * n * n * t / (self.l0 * l)
        }
    }

    /// Coefficient of x² in the spatial phase: αξ/ℓ² = a/(4ℓ).
    fn chirp(&self, t: f64) -> f64 {
        self.velocity / (4.0 * self.length(t))
    }

    /// Ψ_n(x, t); `x` must lie in [0, ℓ(t)].
    pub fn psi(&self, x: f64, t: f64) -> Result<Complex64> {
        let l = self.motion().try_length(t)?;
        if !(0.0..=l).contains(&x) {
            return Err(Error::domain(format!("x = {x} outside [0, {l}] at t = {t}")));
        }
        Ok(self.psi_unchecked(x, t))
    }

    pub(crate) fn psi_unchecked(&self, x: f64, t: f64) -> Complex64 {
        let l = self.length(t);
        let phase = self.chirp(t) * x * x + self.global_phase(t);
        let amp = (2.0 / l).sqrt() * (self.n as f64 * PI * x / l).sin();
        Complex64::from_polar(1.0, phase) * amp
    }

    /// ∂ₓΨ_n(x, t).
    pub(crate) fn gradient(&self, x: f64, t: f64) -> Complex64 {
        let l = self.length(t);
        let k = self.n as f64 * PI / l;
        let dphase = 2.0 * self.chirp(t) * x;
        let (s, c) = (k * x).sin_cos();
        let phase = Complex64::from_polar((2.0 / l).sqrt(), self.chirp(t) * x * x + self.global_phase(t));
        phase * Complex64::new(k * c, dphase * s)
    }

    /// ⟨u_k(t)|Ψ_n(t)⟩, the overlap with an instantaneous eigenfunction.
    pub fn overlap_with_mode(&self, k: usize, t: f64) -> Complex64 {
        // In y = x/ℓ the chirp is (a·ℓ/4)·y².
        let chirp = self.velocity * self.length(t) / 4.0;
        let q = if chirp == 0.0 {
            Complex64::new(if k == self.n { 1.0 } else { 0.0 }, 0.0)
        } else if chirp.abs() < basis::ALPHA_SMALL {
            basis::overlap_small_alpha(self.n, k, chirp)
        } else {
            basis::overlap_fresnel(self.n, k, chirp)
        };
        q * Complex64::from_polar(1.0, self.global_phase(t))
    }
}

/// Finite superposition Σ_n c_n·Ψ_n of uniform-motion solutions sharing one
/// wall trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactUniformSuperposition {
    pub l0: f64,
    pub velocity: f64,
    /// c_n for n = 1..=len.
    pub coefficients: Vec<Complex64>,
}

impl ExactUniformSuperposition {
    /// Expands the instantaneous eigenstate u_j(x, 0) over the first
    /// `n_terms` exact solutions: c_n = ⟨Ψ_n(0)|u_j(0)⟩ = q_nj(−α).
    pub fn from_eigenstate(j: usize, motion: &WallMotion, n_terms: usize) -> Result<Self> {
        let WallMotion::Uniform { l0, velocity } = *motion else {
            return Err(Error::domain("exact solution is only available for uniform wall motion"));
        };
        let init = basis::decompose_initial(j, -motion.alpha(), n_terms)?;
        Ok(ExactUniformSuperposition {
            l0,
            velocity,
            coefficients: init.q,
        })
    }

    fn modes(&self) -> impl Iterator<Item = (Complex64, ExactUniformSolution)> + '_ {
        self.coefficients.iter().enumerate().map(|(i, c)| {
            (
                *c,
                ExactUniformSolution {
                    n: i + 1,
                    l0: self.l0,
                    velocity: self.velocity,
                },
            )
        })
    }

    pub fn length(&self, t: f64) -> f64 {
        self.l0 + self.velocity * t
    }

    pub fn psi(&self, x: f64, t: f64) -> Result<Complex64> {
        let l = WallMotion::Uniform { l0: self.l0, velocity: self.velocity }.try_length(t)?;
        if !(0.0..=l).contains(&x) {
            return Err(Error::domain(format!("x = {x} outside [0, {l}] at t = {t}")));
        }
        Ok(self.modes().map(|(c, m)| c * m.psi_unchecked(x, t)).sum())
    }

    pub(crate) fn gradient(&self, x: f64, t: f64) -> Complex64 {
        self.modes().map(|(c, m)| c * m.gradient(x, t)).sum()
    }

    /// |⟨u_k(t)|ψ(t)⟩|², the occupation of instantaneous mode k.
    pub fn occupation(&self, k: usize, t: f64) -> f64 {
        self.modes()
            .map(|(c, m)| c * m.overlap_with_mode(k, t))
            .sum::<Complex64>()
            .norm_sqr()
    }
}

/// Ψ_n(x, t) for the given solution.
pub fn exact_psi(sol: &ExactUniformSolution, x: f64, t: f64) -> Result<Complex64> {
    sol.psi(x, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn initial_phase_is_moving_wall_chirp() {
        let sol = ExactUniformSolution::new(2, 1.0, -16.0).unwrap();
        for x in [0.1, 0.37, 0.8] {
            let psi = sol.psi(x, 0.0).unwrap();
            let expected = Complex64::from_polar(1.0, x * x * -16.0 / 4.0)
                * (2.0f64).sqrt()
                * (2.0 * PI * x).sin();
            assert_abs_diff_eq!((psi - expected).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn density_is_instantaneous_mode() {
        let sol = ExactUniformSolution::new(3, 1.0, 2.5).unwrap();
        let t = 0.4;
        let l = sol.length(t);
        for x in [0.0, 0.2, 1.1, l] {
            let rho = sol.psi(x, t).unwrap().norm_sqr();
            let expected = 2.0 / l * (3.0 * PI * x / l).sin().powi(2);
            assert_abs_diff_eq!(rho, expected, epsilon = 1e-14);
        }
    }

    #[test]
    fn global_phase_matches_alpha_form() {
        let sol = ExactUniformSolution::new(2, 1.0, -16.0).unwrap();
        let t = 0.03;
        let xi = sol.length(t) / sol.l0;
        let alpha = sol.alpha();
        let written = -4.0 * PI * PI / (4.0 * alpha) * (1.0 - 1.0 / xi);
        assert_abs_diff_eq!(sol.global_phase(t), written, epsilon = 1e-12);
    }

    #[test]
    fn static_wall_branch() {
        let sol = ExactUniformSolution::new(1, 1.0, 0.0).unwrap();
        let psi = sol.psi(0.5, 0.25).unwrap();
        let expected = Complex64::from_polar(2f64.sqrt(), -PI * PI * 0.25);
        assert_abs_diff_eq!((psi - expected).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn single_term_superposition_is_the_mode() {
        let m = WallMotion::uniform(1.0, 1.5).unwrap();
        let sup = ExactUniformSuperposition::from_eigenstate(1, &m, 30).unwrap();
        // At t = 0 the expansion reproduces u_1 up to the truncated tail.
        let psi = sup.psi(0.5, 0.0).unwrap();
        assert_abs_diff_eq!(psi.re, 2f64.sqrt(), epsilon = 1e-5);
        assert_abs_diff_eq!(psi.im, 0.0, epsilon = 1e-5);
        assert_abs_diff_eq!(sup.occupation(1, 0.0), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn mode_overlap_has_unit_total_weight() {
        let sol = ExactUniformSolution::new(2, 1.0, -16.0).unwrap();
        let t = 0.04;
        let total: f64 = (1..=80).map(|k| sol.overlap_with_mode(k, t).norm_sqr()).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-7);
    }

    #[test]
    fn rejects_out_of_range() {
        let sol = ExactUniformSolution::new(1, 1.0, -16.0).unwrap();
        assert!(sol.psi(0.9, 1.0 / 32.0).is_err());
        assert!(sol.psi(0.1, 0.07).is_err());
        let osc = WallMotion::oscillatory(1.0, 0.3, 1.0).unwrap();
        assert!(ExactUniformSolution::for_motion(1, &osc).is_err());
    }
}
