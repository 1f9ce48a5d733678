//! Trajectories of the right wall. The left wall is fixed at the origin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{self, QuadOptions};

/// Number of points used to check that a trajectory keeps the well open.
pub const VALIDATION_SAMPLES: usize = 10_000;

/// Law of motion ℓ(t) of the right wall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WallMotion {
    /// ℓ(t) = L0 + a·t
    Uniform { l0: f64, velocity: f64 },
    /// ℓ(t) = ℓ0 + a·sin(ωt)
    Oscillatory { l0: f64, amplitude: f64, omega: f64 },
    /// ℓ(t) = a − 1/(1 + b²t²)
    SuddenExpansion { asymptote: f64, rate: f64 },
}

impl WallMotion {
    pub fn uniform(l0: f64, velocity: f64) -> Result<Self> {
        Self::Uniform { l0, velocity }.checked()
    }

    pub fn oscillatory(l0: f64, amplitude: f64, omega: f64) -> Result<Self> {
        Self::Oscillatory { l0, amplitude, omega }.checked()
    }

    pub fn sudden_expansion(asymptote: f64, rate: f64) -> Result<Self> {
        Self::SuddenExpansion { asymptote, rate }.checked()
    }

    /// A wall that never moves.
    pub fn fixed(l0: f64) -> Result<Self> {
        Self::uniform(l0, 0.0)
    }

    /// Checks the parameter invariants of each kind.
    pub fn checked(self) -> Result<Self> {
        let finite = |v: f64, name: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(format!("wall parameter {name} must be finite")))
            }
        };
        match self {
            WallMotion::Uniform { l0, velocity } => {
                finite(l0, "l0")?;
                finite(velocity, "velocity")?;
                if l0 <= 0.0 {
                    return Err(Error::domain(format!("initial length must be positive, got {l0}")));
                }
            }
            WallMotion::Oscillatory { l0, amplitude, omega } => {
                finite(l0, "l0")?;
                finite(amplitude, "amplitude")?;
                finite(omega, "omega")?;
                if amplitude.abs() >= l0 {
                    return Err(Error::domain(format!(
                        "oscillation amplitude |{amplitude}| must be smaller than l0 = {l0}"
                    )));
                }
            }
            WallMotion::SuddenExpansion { asymptote, rate } => {
                finite(asymptote, "asymptote")?;
                finite(rate, "rate")?;
                if asymptote <= 1.0 {
                    return Err(Error::domain(format!(
                        "sudden expansion needs asymptote > 1 so that l(0) > 0, got {asymptote}"
                    )));
                }
            }
        }
        Ok(self)
    }

    /// ℓ(t), without validity checks.
    #[inline]
    pub fn length(&self, t: f64) -> f64 {
        match *self {
            WallMotion::Uniform { l0, velocity } => l0 + velocity * t,
            WallMotion::Oscillatory { l0, amplitude, omega } => l0 + amplitude * (omega * t).sin(),
            WallMotion::SuddenExpansion { asymptote, rate } => {
                asymptote - 1.0 / (1.0 + rate * rate * t * t)
            }
        }
    }

    /// ℓ(t), failing if the well is closed at `t`.
    pub fn try_length(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::domain(format!("time must be non-negative, got {t}")));
        }
        let l = self.length(t);
        if l > 0.0 {
            Ok(l)
        } else {
            Err(Error::domain(format!("wall length {l} is not positive at t = {t}")))
        }
    }

    /// dℓ/dt.
    #[inline]
    pub fn velocity(&self, t: f64) -> f64 {
        match *self {
            WallMotion::Uniform { velocity, .. } => velocity,
            WallMotion::Oscillatory { amplitude, omega, .. } => amplitude * omega * (omega * t).cos(),
            WallMotion::SuddenExpansion { rate, .. } => {
                let b2 = rate * rate;
                let den = 1.0 + b2 * t * t;
                2.0 * b2 * t / (den * den)
            }
        }
    }

    /// Checks ℓ > 0 on a dense sample of `[0, t_max]` and reports the first
    /// sample time where it fails.
    pub fn validate(&self, t_max: f64) -> Result<()> {
        if !(t_max >= 0.0 && t_max.is_finite()) {
            return Err(Error::domain(format!("t_max must be finite and non-negative, got {t_max}")));
        }
        for i in 0..=VALIDATION_SAMPLES {
            let t = t_max * i as f64 / VALIDATION_SAMPLES as f64;
            self.try_length(t)?;
        }
        Ok(())
    }

    /// θ(t) = ∫₀ᵗ dτ/ℓ²(τ). Closed form for uniform motion, adaptive
    /// quadrature otherwise. The solvers carry θ as an ODE variable instead.
    pub fn theta(&self, t: f64) -> Result<f64> {
        match *self {
            WallMotion::Uniform { l0, .. } => {
                let l = self.try_length(t)?;
                Ok(t / (l0 * l))
            }
            _ => self.theta_quadrature(t),
        }
    }

    /// θ(t) by adaptive quadrature with relative tolerance 1e−10, for any kind.
    pub fn theta_quadrature(&self, t: f64) -> Result<f64> {
        self.validate(t)?;
        let r = quad::integrate(
            |tau| {
                let l = self.length(tau);
                1.0 / (l * l)
            },
            0.0,
            t,
            QuadOptions {
                abs_tol: 0.0,
                rel_tol: 1e-10,
                max_intervals: 100_000,
            },
        )?;
        Ok(r.value)
    }

    /// ℓ(0)·ℓ′(0)/4, the quadratic phase parameter of the moving-wall initial
    /// state in units ħ = 1, m = 1/2.
    pub fn alpha(&self) -> f64 {
        self.length(0.0) * self.velocity(0.0) / 4.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn doescher() -> WallMotion {
        WallMotion::uniform(1.0, -16.0).unwrap()
    }
    fn fast_oscillation() -> WallMotion {
        WallMotion::oscillatory(1.0, 0.3, 4.0 * PI * PI).unwrap()
    }
    fn sudden() -> WallMotion {
        WallMotion::sudden_expansion(2.0, 10.0).unwrap()
    }

    #[test]
    fn length_examples() {
        assert_abs_diff_eq!(doescher().length(1.0 / 32.0), 0.5, epsilon = 1e-15);
        assert_eq!(fast_oscillation().length(0.0), 1.0);
        assert_eq!(sudden().length(0.0), 1.0);
    }

    #[test]
    fn velocity_examples() {
        assert_eq!(doescher().velocity(0.3), -16.0);
        let slow = WallMotion::oscillatory(1.0, 0.3, 1.0).unwrap();
        assert_abs_diff_eq!(slow.velocity(0.0), 0.3, epsilon = 1e-15);
        assert_eq!(sudden().velocity(0.0), 0.0);
    }

    #[test]
    fn theta_examples() {
        assert_abs_diff_eq!(doescher().theta(1.0 / 32.0).unwrap(), 1.0 / 16.0, epsilon = 1e-15);
        for m in [doescher(), fast_oscillation(), sudden()] {
            assert_eq!(m.theta(0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn theta_quadrature_matches_fine_simpson() {
        let m = WallMotion::oscillatory(1.0, 0.3, 1.0).unwrap();
        let panels = 1_000_000;
        let h = 1.0 / panels as f64;
        let samples: Vec<f64> = (0..=panels)
            .map(|i| {
                let l = m.length(i as f64 * h);
                1.0 / (l * l)
            })
            .collect();
        let oracle = quad::simpson(&samples, h);
        assert_relative_eq!(m.theta(1.0).unwrap(), oracle, max_relative = 1e-10);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(WallMotion::oscillatory(1.0, 1.0, 1.0).is_err());
        assert!(WallMotion::sudden_expansion(1.0, 10.0).is_err());
        assert!(WallMotion::uniform(0.0, 1.0).is_err());
        assert!(WallMotion::uniform(1.0, f64::NAN).is_err());
    }

    #[test]
    fn validate_names_first_bad_time() {
        let err = doescher().validate(0.1).unwrap_err();
        let Error::Domain(msg) = err else { panic!("expected domain error") };
        assert!(msg.contains("t = 0.0625"), "{msg}");
        doescher().validate(1.0 / 16.0 - 1.0 / 1000.0).unwrap();
    }

    #[test]
    fn alpha_of_paper_cases() {
        assert_abs_diff_eq!(doescher().alpha(), -4.0, epsilon = 1e-15);
        let w1 = WallMotion::oscillatory(1.0, 0.3, 1.0).unwrap();
        assert_abs_diff_eq!(w1.alpha(), 3.0 / 40.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fast_oscillation().alpha(), 3.0 * PI * PI / 10.0, epsilon = 1e-14);
        assert_eq!(sudden().alpha(), 0.0);
    }

    fn any_motion() -> impl Strategy<Value = WallMotion> {
        prop_oneof![
            (0.5f64..2.0, -0.4f64..2.0).prop_map(|(l0, v)| WallMotion::Uniform { l0, velocity: v }),
            (0.5f64..2.0, 0.0f64..0.45, 0.1f64..40.0).prop_map(|(l0, a, w)| WallMotion::Oscillatory {
                l0,
                amplitude: a,
                omega: w
            }),
            (1.5f64..3.0, 0.1f64..20.0).prop_map(|(a, b)| WallMotion::SuddenExpansion {
                asymptote: a,
                rate: b
            }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn theta_is_strictly_increasing(m in any_motion(), t1 in 0.0f64..1.0, dt in 1e-3f64..1.0) {
            let a = m.theta_quadrature(t1).unwrap();
            let b = m.theta_quadrature(t1 + dt).unwrap();
            prop_assert!(b > a);
        }

        #[test]
        fn uniform_quadrature_matches_closed_form(l0 in 0.5f64..2.0, v in -0.4f64..2.0, t in 0.01f64..1.0) {
            let m = WallMotion::Uniform { l0, velocity: v };
            let closed = m.theta(t).unwrap();
            let quad = m.theta_quadrature(t).unwrap();
            prop_assert!(((quad - closed) / closed).abs() < 1e-9);
        }

        #[test]
        fn velocity_matches_centered_difference(m in any_motion(), t in 1e-3f64..1.0) {
            let h = 1e-6;
            let fd = (m.length(t + h) - m.length(t - h)) / (2.0 * h);
            prop_assert!((fd - m.velocity(t)).abs() < 1e-6);
        }
    }
}
