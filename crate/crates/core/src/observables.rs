//! Norms, densities, expectation values and cross-method error metrics.
//!
//! Every solver output is viewed through [`Snapshot`]: a wavefunction at one
//! instant on the physical interval [0, ℓ(t)].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis;
use crate::error::{Error, Result};
use crate::exact::{ExactUniformSolution, ExactUniformSuperposition};
use crate::fdref::{grid_norm, GridState};
use crate::motion::WallMotion;
use crate::quad::simpson;
use crate::spectral::{self, SpectralState};

/// Default number of quadrature points on [0, ℓ(t)].
pub const QUADRATURE_POINTS: usize = 2001;

/// A wavefunction at a fixed time.
pub trait Snapshot {
    fn time(&self) -> f64;
    /// ℓ(t).
    fn width(&self) -> f64;
    /// ψ at positions inside [0, ℓ(t)].
    fn psi(&self, xs: &[f64]) -> Result<Vec<Complex64>>;
    /// ∫|ψ|²dx.
    fn norm(&self) -> f64;
    /// ∫ψ*(−∂²ₓ)ψ dx, not normalized.
    fn energy_integral(&self) -> f64;
}

fn uniform_grid(l: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { l } else { l * i as f64 / last }).collect()
}

/// Spectral state paired with its wall motion.
#[derive(Debug, Clone, Copy)]
pub struct SpectralSnapshot<'a> {
    pub state: &'a SpectralState,
    pub motion: &'a WallMotion,
}

impl<'a> SpectralSnapshot<'a> {
    pub fn new(state: &'a SpectralState, motion: &'a WallMotion) -> Self {
        SpectralSnapshot { state, motion }
    }
}

impl Snapshot for SpectralSnapshot<'_> {
    fn time(&self) -> f64 {
        self.state.t
    }
    fn width(&self) -> f64 {
        self.motion.length(self.state.t)
    }
    fn psi(&self, xs: &[f64]) -> Result<Vec<Complex64>> {
        spectral::reconstruct(self.state, self.motion, xs)
    }
    fn norm(&self) -> f64 {
        self.state.norm()
    }
    fn energy_integral(&self) -> f64 {
        let l = self.width();
        self.state
            .occupations()
            .iter()
            .enumerate()
            .map(|(i, p)| p * basis::energy(i + 1, l))
            .sum()
    }
}

/// Finite-difference state paired with its wall motion. Off-node values
/// are interpolated with four-point Lagrange stencils on the odd extension
/// of φ through both walls.
#[derive(Debug, Clone, Copy)]
pub struct GridSnapshot<'a> {
    pub state: &'a GridState,
    pub motion: &'a WallMotion,
}

impl<'a> GridSnapshot<'a> {
    pub fn new(state: &'a GridState, motion: &'a WallMotion) -> Self {
        GridSnapshot { state, motion }
    }

    fn extended(&self, i: isize) -> Complex64 {
        let n = self.state.n_intervals as isize;
        if i < 0 {
            -self.extended(-i)
        } else if i > n {
            -self.extended(2 * n - i)
        } else {
            self.state.node(i as usize)
        }
    }

    fn interpolate(&self, y: f64) -> Complex64 {
        let n = self.state.n_intervals;
        let u = y * n as f64;
        let base = (u.floor() as isize).clamp(0, n as isize - 1);
        let s = u - base as f64;
        // Lagrange weights on nodes base−1 .. base+2.
        let w = [
            -s * (s - 1.0) * (s - 2.0) / 6.0,
            (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
            -(s + 1.0) * s * (s - 2.0) / 2.0,
            (s + 1.0) * s * (s - 1.0) / 6.0,
        ];
        (0..4).map(|j| self.extended(base - 1 + j as isize) * w[j]).sum()
    }
}

impl Snapshot for GridSnapshot<'_> {
    fn time(&self) -> f64 {
        self.state.t
    }
    fn width(&self) -> f64 {
        self.motion.length(self.state.t)
    }
    fn psi(&self, xs: &[f64]) -> Result<Vec<Complex64>> {
        let l = self.width();
        xs.iter()
            .map(|&x| {
                if (0.0..=l).contains(&x) {
                    Ok(self.interpolate(x / l))
                } else {
                    Err(Error::domain(format!("x = {x} outside [0, {l}]")))
                }
            })
            .collect()
    }
    fn norm(&self) -> f64 {
        grid_norm(self.state, self.width())
    }
    fn energy_integral(&self) -> f64 {
        // Σ φ*·(−Δ_h φ)·h in physical units, h = ℓ/N.
        let n = self.state.n_intervals;
        let l = self.width();
        let h = l / n as f64;
        (1..n)
            .map(|i| {
                let lap = (self.state.node(i + 1) - 2.0 * self.state.node(i) + self.state.node(i - 1)) / (h * h);
                -(self.state.node(i).conj() * lap).re * h
            })
            .sum()
    }
}

/// Exact uniform-motion solution at a given time.
#[derive(Debug, Clone, Copy)]
pub struct ExactSnapshot {
    pub solution: ExactUniformSolution,
    pub t: f64,
}

impl Snapshot for ExactSnapshot {
    fn time(&self) -> f64 {
        self.t
    }
    fn width(&self) -> f64 {
        self.solution.length(self.t)
    }
    fn psi(&self, xs: &[f64]) -> Result<Vec<Complex64>> {
        xs.iter().map(|&x| self.solution.psi(x, self.t)).collect()
    }
    fn norm(&self) -> f64 {
        1.0
    }
    fn energy_integral(&self) -> f64 {
        gradient_energy(self.width(), |x| self.solution.gradient(x, self.t))
    }
}

/// Exact superposition at a given time.
#[derive(Debug, Clone, Copy)]
pub struct SuperpositionSnapshot<'a> {
    pub solution: &'a ExactUniformSuperposition,
    pub t: f64,
}

impl Snapshot for SuperpositionSnapshot<'_> {
    fn time(&self) -> f64 {
        self.t
    }
    fn width(&self) -> f64 {
        self.solution.length(self.t)
    }
    fn psi(&self, xs: &[f64]) -> Result<Vec<Complex64>> {
        xs.iter().map(|&x| self.solution.psi(x, self.t)).collect()
    }
    fn norm(&self) -> f64 {
        self.solution.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }
    fn energy_integral(&self) -> f64 {
        gradient_energy(self.width(), |x| self.solution.gradient(x, self.t))
    }
}

/// ∫|∂ₓψ|²dx, which equals ∫ψ*(−∂²ₓ)ψ dx under Dirichlet walls.
fn gradient_energy<F: Fn(f64) -> Complex64>(l: f64, grad: F) -> f64 {
    let xs = uniform_grid(l, QUADRATURE_POINTS);
    let g: Vec<f64> = xs.iter().map(|&x| grad(x).norm_sqr()).collect();
    simpson(&g, l / (QUADRATURE_POINTS - 1) as f64)
}

/// ∫|ψ|²dx: Σ|b_k|² for spectral states, Simpson over the nodes for grids.
pub fn norm(s: &dyn Snapshot) -> f64 {
    s.norm()
}

/// ∫|ψ|²dx by Simpson on `n_points` reconstructed samples.
pub fn quadrature_norm(s: &dyn Snapshot, n_points: usize) -> Result<f64> {
    let (_, rho, h) = sampled_density(s, n_points)?;
    Ok(simpson(&rho, h))
}

fn sampled_density(s: &dyn Snapshot, n_points: usize) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    if n_points < 3 {
        return Err(Error::domain("density needs at least three points"));
    }
    let l = s.width();
    let xs = uniform_grid(l, n_points);
    let rho = s.psi(&xs)?.iter().map(|z| z.norm_sqr()).collect();
    Ok((xs, rho, l / (n_points - 1) as f64))
}

/// |ψ|² on `n_points` uniformly spaced positions over [0, ℓ(t)], returned
/// with the positions.
pub fn density(s: &dyn Snapshot, n_points: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let (xs, rho, _) = sampled_density(s, n_points)?;
    Ok((xs, rho))
}

/// ⟨x⟩ = ∫x|ψ|²dx / ∫|ψ|²dx with Simpson on [`QUADRATURE_POINTS`] samples.
pub fn mean_position(s: &dyn Snapshot) -> Result<f64> {
    let (xs, rho, h) = sampled_density(s, QUADRATURE_POINTS)?;
    let total = simpson(&rho, h);
    if !(total > 0.0) {
        return Err(Error::domain(format!("zero norm at t = {}", s.time())));
    }
    let first: Vec<f64> = xs.iter().zip(&rho).map(|(x, r)| x * r).collect();
    Ok(simpson(&first, h) / total)
}

/// ⟨H⟩ normalized by the state's own norm.
pub fn mean_energy(s: &dyn Snapshot) -> Result<f64> {
    let total = s.norm();
    if !(total > 0.0) {
        return Err(Error::domain(format!("zero norm at t = {}", s.time())));
    }
    Ok(s.energy_integral() / total)
}

/// (1/ℓ)·∫₀^ℓ |ψ_ref − ψ_approx|² dx, Simpson with [`QUADRATURE_POINTS`].
pub fn average_error(approx: &dyn Snapshot, reference: &dyn Snapshot) -> Result<f64> {
    let l = reference.width();
    if ((approx.width() - l) / l).abs() > 1e-12 {
        return Err(Error::domain(format!(
            "snapshots live on different intervals: {} vs {l}",
            approx.width()
        )));
    }
    let xs = uniform_grid(l, QUADRATURE_POINTS);
    let a = approx.psi(&xs)?;
    let r = reference.psi(&xs)?;
    let diff: Vec<f64> = a.iter().zip(&r).map(|(a, r)| (r - a).norm_sqr()).collect();
    Ok(simpson(&diff, l / (QUADRATURE_POINTS - 1) as f64) / l)
}

/// A named observable sampled on strictly increasing times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub name: String,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(name: impl Into<String>, times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if times.len() != values.len() {
            return Err(Error::domain(format!(
                "series {name}: {} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain(format!("series {name}: times are not strictly increasing")));
        }
        Ok(TimeSeries { name, times, values })
    }

    /// Evaluates `f` on each snapshot.
    pub fn from_snapshots<S, F>(name: impl Into<String>, snapshots: &[S], f: F) -> Result<Self>
    where
        S: Snapshot,
        F: Fn(&dyn Snapshot) -> Result<f64>,
    {
        let times = snapshots.iter().map(|s| s.time()).collect();
        let values = snapshots.iter().map(|s| f(s)).collect::<Result<Vec<_>>>()?;
        Self::new(name, times, values)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Divides every value by the first one.
    pub fn normalized_to_initial(&self) -> Result<Self> {
        let first = *self
            .values
            .first()
            .ok_or_else(|| Error::domain(format!("series {} is empty", self.name)))?;
        if first == 0.0 {
            return Err(Error::domain(format!("series {} starts at zero", self.name)));
        }
        Ok(TimeSeries {
            name: format!("{}_normalized", self.name),
            times: self.times.clone(),
            values: self.values.iter().map(|v| v / first).collect(),
        })
    }

    /// Values whose time lies in [t0, t1].
    pub fn window(&self, t0: f64, t1: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times
            .iter()
            .zip(&self.values)
            .filter(move |(t, _)| (t0..=t1).contains(*t))
            .map(|(t, v)| (*t, *v))
    }
}

/// Pointwise |1 − approx/reference|.
pub fn relative_x_error(approx: &TimeSeries, reference: &TimeSeries) -> Result<TimeSeries> {
    if approx.times != reference.times {
        return Err(Error::domain(format!(
            "series {} and {} are sampled on different times",
            approx.name, reference.name
        )));
    }
    let values = approx
        .values
        .iter()
        .zip(&reference.values)
        .map(|(a, r)| (1.0 - a / r).abs())
        .collect();
    TimeSeries::new(
        format!("relative_error_{}_vs_{}", approx.name, reference.name),
        approx.times.clone(),
        values,
    )
}
