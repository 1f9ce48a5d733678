//! Independent oracles used by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use movwell_core::quad::{integrate, QuadOptions};
use movwell_core::{WallMotion, CouplingMatrix};
use num_complex::Complex64;

/// (C(x), S(x)) by adaptive Gauss–Kronrod on the defining integrals.
pub fn fresnel_by_quadrature(x: f64) -> (f64, f64) {
    let opts = QuadOptions { abs_tol: 1e-14, rel_tol: 0.0, max_intervals: 100_000 };
    let c = integrate(|t| (PI * t * t / 2.0).cos(), 0.0, x, opts).unwrap().value;
    let s = integrate(|t| (PI * t * t / 2.0).sin(), 0.0, x, opts).unwrap().value;
    (c, s)
}

/// q_jk = ∫₀¹ e^{iαy²}·√2 sin(jπy)·√2 sin(kπy) dy by quadrature.
pub fn overlap_by_quadrature(j: usize, k: usize, alpha: f64) -> Complex64 {
    let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 0.0, max_intervals: 100_000 };
    let base = |y: f64| 2.0 * (j as f64 * PI * y).sin() * (k as f64 * PI * y).sin();
    let re = integrate(|y| base(y) * (alpha * y * y).cos(), 0.0, 1.0, opts).unwrap().value;
    let im = integrate(|y| base(y) * (alpha * y * y).sin(), 0.0, 1.0, opts).unwrap().value;
    Complex64::new(re, im)
}

/// Right-hand side written term by term from the real-form coupled
/// equations with explicit cos η_kn and sin η_kn.
pub fn direct_rhs(motion: &WallMotion, t: f64, theta: f64, c: &[f64], d: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let k_max = c.len();
    let g = CouplingMatrix::new(k_max).unwrap();
    let ratio = motion.velocity(t) / motion.length(t);
    let mut dc = vec![0.0; k_max];
    let mut dd = vec![0.0; k_max];
    for k in 1..=k_max {
        for n in 1..=k_max {
            if n == k {
                continue;
            }
            let delta = g.get(k, n) * ratio;
            let eta = PI * PI * ((k * k) as f64 - (n * n) as f64) * theta;
            let (s, co) = eta.sin_cos();
            dc[k - 1] -= delta * (c[n - 1] * co - d[n - 1] * s);
            dd[k - 1] -= delta * (c[n - 1] * s + d[n - 1] * co);
        }
    }
    (dc, dd)
}

pub fn simpson_complex_norm(values: &[Complex64], h: f64) -> f64 {
    let rho: Vec<f64> = values.iter().map(|z| z.norm_sqr()).collect();
    movwell_core::quad::simpson(&rho, h)
}
