use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Output times and base step of a fixed-step integration over `[0, t_max]`.
///
/// Samples are `n_samples` uniformly spaced times including both ends. Each
/// interval between samples is split into equal steps no longer than `dt`,
/// so samples fall exactly on step boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub t_max: f64,
    pub dt: f64,
    pub n_samples: usize,
}

impl Schedule {
    pub fn new(t_max: f64, dt: f64, n_samples: usize) -> Result<Self> {
        let s = Schedule { t_max, dt, n_samples };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::domain(format!("t_max must be positive, got {}", self.t_max)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::domain(format!("dt must be positive, got {}", self.dt)));
        }
        if self.n_samples < 2 {
            return Err(Error::domain("at least two sample times are required"));
        }
        Ok(())
    }

    pub fn sample_times(&self) -> Vec<f64> {
        let last = (self.n_samples - 1) as f64;
        (0..self.n_samples)
            .map(|i| if i + 1 == self.n_samples { self.t_max } else { self.t_max * i as f64 / last })
            .collect()
    }

    /// Number of base steps between consecutive samples.
    pub fn steps_per_sample(&self) -> usize {
        let interval = self.t_max / (self.n_samples - 1) as f64;
        // Tolerate representation error so that an exact ratio is not rounded up.
        ((interval / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
    }

    /// Total number of base steps.
    pub fn total_steps(&self) -> usize {
        self.steps_per_sample() * (self.n_samples - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_cover_interval() {
        let s = Schedule::new(3.0, 1e-4, 1000).unwrap();
        let ts = s.sample_times();
        assert_eq!(ts.len(), 1000);
        assert_eq!(ts[0], 0.0);
        assert_eq!(ts[999], 3.0);
        assert!(ts.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn exact_ratio_is_not_rounded_up() {
        let s = Schedule::new(1.0, 0.001, 11).unwrap();
        assert_eq!(s.steps_per_sample(), 100);
        let s = Schedule::new(1.0, 0.0015, 11).unwrap();
        assert_eq!(s.steps_per_sample(), 67);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Schedule::new(0.0, 1e-3, 10).is_err());
        assert!(Schedule::new(1.0, -1e-3, 10).is_err());
        assert!(Schedule::new(1.0, 1e-3, 1).is_err());
    }
}
