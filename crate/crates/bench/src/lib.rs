//! Shared setup for the benchmarks.

use movwell_core::basis::decompose_initial;
use movwell_core::{SpectralState, WallMotion};

/// The oscillating wall with a = 0.3 and ω = 4π².
pub fn fast_oscillation() -> WallMotion {
    WallMotion::oscillatory(1.0, 0.3, 4.0 * std::f64::consts::PI * std::f64::consts::PI)
        .expect("valid wall parameters")
}

/// First excited state with the moving-wall phase, on `k_max` modes.
pub fn excited_state(motion: &WallMotion, k_max: usize) -> SpectralState {
    SpectralState::from_initial(&decompose_initial(2, motion.alpha(), k_max).expect("k_max >= 2"))
}
