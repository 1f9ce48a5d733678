use std::f64::consts::PI;

use movwell_core::fdref::grid_norm;
use movwell_core::observables::average_error;
use movwell_core::{ExactSnapshot, ExactUniformSolution, FdOptions, FdSolver, GridSnapshot, Schedule, WallMotion};
use num_complex::Complex64;

/// RMS deviation from the exact mode at the final time.
fn final_rms_error(motion: WallMotion, n: usize, j: usize, t_max: f64, dt: f64) -> f64 {
    let exact = ExactUniformSolution::for_motion(j, &motion).unwrap();
    let schedule = Schedule::new(t_max, dt, 5).unwrap();
    let traj = FdSolver::new(motion, n)
        .unwrap()
        .evolve(|x| exact.psi(x, 0.0).unwrap(), &schedule, &FdOptions::default())
        .unwrap();
    assert!(traj.warnings.is_empty(), "{:?}", traj.warnings);
    let last = traj.states.last().unwrap();
    average_error(&GridSnapshot::new(last, &motion), &ExactSnapshot { solution: exact, t: last.t })
        .unwrap()
        .sqrt()
}

#[test]
fn fixed_wall_mode_picks_up_discrete_phase() {
    let motion = WallMotion::fixed(1.0).unwrap();
    let n = 40;
    let t = 0.3;
    let schedule = Schedule::new(t, 1e-5, 2).unwrap();
    let traj = FdSolver::new(motion, n)
        .unwrap()
        .evolve(|x| Complex64::new(2f64.sqrt() * (PI * x).sin(), 0.0), &schedule, &FdOptions::default())
        .unwrap();
    let last = traj.states.last().unwrap();
    // The grid mode is an exact eigenvector of the discrete Laplacian.
    let lambda = 4.0 * (n * n) as f64 * (PI / (2.0 * n as f64)).sin().powi(2);
    for i in 1..n {
        let y = i as f64 / n as f64;
        let want = Complex64::from_polar(2f64.sqrt() * (PI * y).sin(), -lambda * t);
        assert!((last.node(i) - want).norm() < 1e-9);
    }
    assert!((grid_norm(last, 1.0) - 1.0).abs() < 1e-10);
}

#[test]
fn fixed_wall_error_is_second_order() {
    let motion = WallMotion::fixed(1.0).unwrap();
    let coarse = final_rms_error(motion, 40, 2, 0.2, 1e-5);
    let fine = final_rms_error(motion, 80, 2, 0.2, 1e-5);
    let ratio = coarse / fine;
    assert!((ratio - 4.0).abs() < 0.4, "ratio {ratio}");
}

#[test]
fn moving_wall_error_is_second_order() {
    for (velocity, t_max) in [(2.0, 0.5), (-4.0, 0.1)] {
        let motion = WallMotion::uniform(1.0, velocity).unwrap();
        let e1 = final_rms_error(motion, 50, 2, t_max, 1e-5);
        let e2 = final_rms_error(motion, 100, 2, t_max, 1e-5);
        let e3 = final_rms_error(motion, 200, 2, t_max, 1e-5);
        for ratio in [e1 / e2, e2 / e3] {
            assert!((ratio - 4.0).abs() < 0.6, "a = {velocity}: errors {e1} {e2} {e3}");
        }
    }
}

#[test]
fn norm_is_nearly_conserved_on_fine_grid() {
    let motion = WallMotion::oscillatory(1.0, 0.3, 1.0).unwrap();
    let alpha = motion.alpha();
    let schedule = Schedule::new(1.0, 1e-4, 11).unwrap();
    let traj = FdSolver::new(motion, 120)
        .unwrap()
        .evolve(
            |x| Complex64::from_polar(2f64.sqrt() * (PI * x).sin(), alpha * x * x),
            &schedule,
            &FdOptions::default(),
        )
        .unwrap();
    for s in &traj.states {
        let drift = grid_norm(s, motion.length(s.t)) - 1.0;
        assert!(drift.abs() < 1e-3, "t = {}: drift {drift}", s.t);
    }
}

#[test]
fn coarse_grid_under_compression_warns() {
    let motion = WallMotion::uniform(1.0, -16.0).unwrap();
    let exact = ExactUniformSolution::for_motion(2, &motion).unwrap();
    let schedule = Schedule::new(1.0 / 16.0 - 1e-3, 1e-5, 11).unwrap();
    let traj = FdSolver::new(motion, 12)
        .unwrap()
        .evolve(|x| exact.psi(x, 0.0).unwrap(), &schedule, &FdOptions::default());
    match traj {
        Ok(t) => assert!(!t.warnings.is_empty()),
        Err(e) => assert!(e.to_string().contains("diverged")),
    }
}
