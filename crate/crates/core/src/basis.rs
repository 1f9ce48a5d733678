//! Instantaneous eigenbasis of the well of width ℓ: sine modes, their
//! energies, the mode coupling induced by the moving wall, and the
//! decomposition of the moving-wall initial state.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::fresnel;

/// Below this |α| the decomposition uses the small-α expansion, where the
/// Fresnel closed form suffers cancellation.
pub const ALPHA_SMALL: f64 = 1e-3;

const PI2: f64 = PI * PI;

pub(crate) fn check_mode(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::domain(format!("{what} must be a positive mode index")))
    } else {
        Ok(())
    }
}

/// u_n(x) = √(2/ℓ)·sin(nπx/ℓ).
pub fn eigenfunction(n: usize, x: f64, l: f64) -> Result<f64> {
    check_mode(n, "n")?;
    if !(l > 0.0) {
        return Err(Error::domain(format!("well width must be positive, got {l}")));
    }
    if !(0.0..=l).contains(&x) {
        return Err(Error::domain(format!("x = {x} outside [0, {l}]")));
    }
    Ok((2.0 / l).sqrt() * (n as f64 * PI * x / l).sin())
}

/// E_n = π²n²/ℓ² (ħ = 1, m = 1/2).
#[inline]
pub fn energy(n: usize, l: f64) -> f64 {
    let n = n as f64;
    PI2 * n * n / (l * l)
}

/// η_kn = π²(k² − n²)·θ.
#[inline]
pub fn phase(k: usize, n: usize, theta: f64) -> f64 {
    let (k, n) = (k as f64, n as f64);
    PI2 * (k * k - n * n) * theta
}

/// Time-independent factor g_kn of the coupling Δ_kn(t) = g_kn·ℓ′(t)/ℓ(t).
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    k_max: usize,
    entries: Vec<f64>,
}

impl CouplingMatrix {
    pub fn new(k_max: usize) -> Result<Self> {
        check_mode(k_max, "k_max")?;
        let mut entries = vec![0.0; k_max * k_max];
        for k in 1..=k_max {
            for n in 1..=k_max {
                if k != n {
                    let (kf, nf) = (k as f64, n as f64);
                    let sign = if (k + n) % 2 == 0 { 1.0 } else { -1.0 };
                    entries[(k - 1) * k_max + (n - 1)] = sign * 2.0 * kf * nf / (kf * kf - nf * nf);
                }
            }
        }
        Ok(CouplingMatrix { k_max, entries })
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// g_kn with 1-based indices.
    #[inline]
    pub fn get(&self, k: usize, n: usize) -> f64 {
        self.entries[(k - 1) * self.k_max + (n - 1)]
    }

    /// Row k (0-based) as a slice.
    #[inline]
    pub fn row(&self, k: usize) -> &[f64] {
        &self.entries[k * self.k_max..(k + 1) * self.k_max]
    }
}

pub fn coupling(k_max: usize) -> Result<CouplingMatrix> {
    CouplingMatrix::new(k_max)
}

/// Coefficients q_jk of u_j(x)·exp(iαx²/ℓ(0)²) in the instantaneous basis
/// at t = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub j: usize,
    pub alpha: f64,
    pub q: Vec<Complex64>,
}

impl InitialState {
    /// The pure mode j (no quadratic phase).
    pub fn eigenstate(j: usize, k_max: usize) -> Result<Self> {
        decompose_initial(j, 0.0, k_max)
    }

    pub fn k_max(&self) -> usize {
        self.q.len()
    }

    /// Σ_k |q_jk|² over the retained modes.
    pub fn captured_norm(&self) -> f64 {
        self.q.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Decomposes the moving-wall initial state of mode `j` with phase
/// parameter `alpha` on modes 1..=`k_max`.
pub fn decompose_initial(j: usize, alpha: f64, k_max: usize) -> Result<InitialState> {
    check_mode(j, "j")?;
    if k_max < j {
        return Err(Error::domain(format!("k_max = {k_max} must be at least j = {j}")));
    }
    if !alpha.is_finite() {
        return Err(Error::domain("alpha must be finite"));
    }
    let q = (1..=k_max)
        .map(|k| {
            if alpha == 0.0 {
                Complex64::new(if k == j { 1.0 } else { 0.0 }, 0.0)
            } else if alpha.abs() < ALPHA_SMALL {
                overlap_small_alpha(j, k, alpha)
            } else {
                overlap_fresnel(j, k, alpha)
            }
        })
        .collect();
    Ok(InitialState { j, alpha, q })
}

/// Closed form of ∫₀¹ 2 sin(jπy) sin(kπy) e^{iαy²} dy via Fresnel integrals.
/// Negative α uses q(−α) = conj(q(α)).
pub fn overlap_fresnel(j: usize, k: usize, alpha: f64) -> Complex64 {
    if alpha < 0.0 {
        return overlap_fresnel(j, k, -alpha).conj();
    }
    let (jf, kf) = (j as f64, k as f64);
    let scale = (2.0 * PI).sqrt() * alpha.sqrt();
    let prefactor = (PI / 2.0).sqrt() / (2.0 * alpha.sqrt());
    let f = |arg: f64| fresnel(arg).expect("finite Fresnel argument");

    let a1 = f((PI * jf + 2.0 * alpha - kf * PI) / scale);
    let a2 = f((PI * jf - 2.0 * alpha - kf * PI) / scale);
    let b1 = f(((jf + kf) * PI - 2.0 * alpha) / scale);
    let b2 = f((PI * (jf + kf) + 2.0 * alpha) / scale);
    let (sin_m, cos_m) = (PI2 * (jf - kf).powi(2) / (4.0 * alpha)).sin_cos();
    let (sin_p, cos_p) = (PI2 * (jf + kf).powi(2) / (4.0 * alpha)).sin_cos();
    let da = a1 - a2;
    let db = b1 - b2;

    let re = da.c * cos_m + db.c * cos_p + da.s * sin_m + db.s * sin_p;
    let im = -da.c * sin_m - db.c * sin_p + da.s * cos_m + db.s * cos_p;
    Complex64::new(prefactor * re, prefactor * im)
}

/// Leading terms of q_jk for |α| ≪ 1: real part to O(α⁴), imaginary part
/// to O(α³).
pub fn overlap_small_alpha(j: usize, k: usize, alpha: f64) -> Complex64 {
    let (jf, kf) = (j as f64, k as f64);
    let a2 = alpha * alpha;
    if j == k {
        let j2 = jf * jf;
        let re = 1.0 + (-0.1 + (-3.0 + 2.0 * j2 * PI2) / (4.0 * j2 * j2 * PI2 * PI2)) * a2;
        let im = (2.0 - 3.0 / (j2 * PI2)) * alpha / 6.0;
        Complex64::new(re, im)
    } else {
        let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
        let diff = jf * jf - kf * kf;
        let re = -sign * 8.0 * jf * kf * (-12.0 * (jf * jf + kf * kf) + diff * diff * PI2) * a2
            / (diff.powi(4) * PI2 * PI2);
        let im = sign * 8.0 * jf * kf * alpha / (diff * diff * PI2);
        Complex64::new(re, im)
    }
}
