//! Time-dependent Schrödinger equation in a 1D infinite square well whose
//! right wall moves as ℓ(t). Units are ħ = 1, m = 1/2 throughout, so the
//! Hamiltonian inside the well is −∂²ₓ.
//!
//! Three solvers share one interface:
//!
//! * [`spectral`] expands ψ in the instantaneous sine modes and integrates
//!   the exact coupled equations for the expansion coefficients;
//! * [`fdref`] maps the well onto a fixed interval and discretizes space
//!   with finite differences;
//! * [`exact`] evaluates the closed-form solution for a uniformly moving
//!   wall.
//!
//! [`observables`] turns any of them into norms, densities, expectation
//! values and error metrics.

pub mod basis;
pub mod error;
pub mod exact;
pub mod fdref;
pub mod motion;
pub mod observables;
pub mod quad;
pub mod rk4;
pub mod schedule;
pub mod specfun;
pub mod spectral;

pub use basis::{CouplingMatrix, InitialState};
pub use error::{Error, Result};
pub use exact::{ExactUniformSolution, ExactUniformSuperposition};
pub use fdref::{FdOptions, FdSolver, FdTrajectory, GridState};
pub use motion::WallMotion;
pub use observables::{
    ExactSnapshot, GridSnapshot, Snapshot, SpectralSnapshot, SuperpositionSnapshot, TimeSeries,
};
pub use schedule::Schedule;
pub use specfun::FresnelPair;
pub use spectral::{SpectralOptions, SpectralSolver, SpectralState};
