//! Free Schrödinger evolution `U(t) = e^{itΔ}` and the retarded Duhamel operator.
//!
//! Convention: `û(t, ξ) = e^{−it|ξ|²} f̂(ξ)`, the solution of `i∂_t u + Δu = 0`,
//! whose kernel is `(4πit)^{−n/2} e^{i|x−y|²/(4t)}`. The spectral backend
//! works on the periodic box; the kernel backend evaluates the free-space
//! integral by a Riemann sum.

mod dispersion;
mod duhamel;
pub mod io;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

pub use dispersion::{dispersive_constant, gaussian_battery, DispersionFit};
pub use duhamel::{
    duhamel_advanced, duhamel_retarded, kernel_sources, retarded_kernel_sum, SeparableSource,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PropagatorError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("the kernel is singular at t = 0")]
    KernelAtZero,
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("time {t} exceeds the torus validity horizon {horizon}")]
    BeyondHorizon { t: f64, horizon: f64 },
    #[error("time grid must have positive step and at least one sample")]
    InvalidTimes,
    #[error("non-finite value in field")]
    NonFinite,
    #[error("malformed field data: {0}")]
    Format(String),
}

/// Which realisation of `U(t)` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Backend {
    /// Periodic box, exact on the discrete frequency lattice.
    Spectral,
    /// Free-space kernel quadrature.
    Kernel,
}

/// A uniform cell-centred grid on `[−L/2, L/2)^n`, `n ∈ {1, 2}`.
///
/// Point `i` along an axis sits at `−L/2 + (i + 1/2)h` with `h = L/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialGrid {
    dim: usize,
    n: usize,
    length: f64,
}

impl SpatialGrid {
    pub fn new(dim: usize, n: usize, length: f64) -> Result<Self, PropagatorError> {
        if !(1..=2).contains(&dim) {
            return Err(PropagatorError::InvalidGrid(format!(
                "dimension {dim} not in {{1, 2}}"
            )));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(PropagatorError::InvalidGrid(format!(
                "{n} samples per axis is not a power of two ≥ 8"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(PropagatorError::InvalidGrid(format!(
                "box length {length} must be positive"
            )));
        }
        Ok(SpatialGrid { dim, n, length })
    }

    /// The grid with `n` points per axis and spacing `h`.
    pub fn with_spacing(dim: usize, n: usize, h: f64) -> Result<Self, PropagatorError> {
        Self::new(dim, n, n as f64 * h)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Measure of one cell, `h^n`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Total number of points, `N^n`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn axis_coord(&self, i: usize) -> f64 {
        -0.5 * self.length + (i as f64 + 0.5) * self.spacing()
    }

    /// Coordinates of the flat index `idx`; unused components are zero.
    pub fn coords(&self, idx: usize) -> [f64; 2] {
        match self.dim {
            1 => [self.axis_coord(idx), 0.0],
            _ => [self.axis_coord(idx / self.n), self.axis_coord(idx % self.n)],
        }
    }

    pub fn points(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        (0..self.len()).map(|i| self.coords(i))
    }

    /// Angular frequency of FFT bin `k` along one axis.
    pub fn frequency(&self, k: usize) -> f64 {
        let signed = if k < self.n / 2 {
            k as f64
        } else {
            k as f64 - self.n as f64
        };
        2.0 * PI * signed / self.length
    }

    /// `|ξ|²` for every FFT bin, in the flat layout of the field.
    pub fn frequency_sq(&self) -> Vec<f64> {
        (0..self.len())
            .map(|idx| match self.dim {
                1 => self.frequency(idx).powi(2),
                _ => self.frequency(idx / self.n).powi(2) + self.frequency(idx % self.n).powi(2),
            })
            .collect()
    }

    /// Time until the fastest resolved wave packet, moving at speed `2π/h`,
    /// crosses half the box: `L·h/(4π)`.
    pub fn horizon(&self) -> f64 {
        self.length * self.spacing() / (4.0 * PI)
    }
}

/// Complex samples on a [`SpatialGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field {
    pub grid: SpatialGrid,
    pub values: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: SpatialGrid, values: Vec<Complex64>) -> Result<Self, PropagatorError> {
        if values.len() != grid.len() {
            return Err(PropagatorError::GridMismatch);
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(PropagatorError::NonFinite);
        }
        Ok(Field { grid, values })
    }

    pub fn zeros(grid: SpatialGrid) -> Self {
        Field {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_fn(grid: SpatialGrid, f: impl FnMut([f64; 2]) -> Complex64) -> Self {
        Field {
            grid,
            values: grid.points().map(f).collect(),
        }
    }

    /// `(h^n Σ |u|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.cell_volume() * self.values.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn l1_norm(&self) -> f64 {
        self.grid.cell_volume() * self.values.iter().map(|z| z.norm()).sum::<f64>()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m: f64, z| m.max(z.norm()))
    }

    /// `⟨u, w⟩ = h^n Σ u · conj(w)`.
    pub fn inner(&self, other: &Field) -> Result<Complex64, PropagatorError> {
        if self.grid != other.grid {
            return Err(PropagatorError::GridMismatch);
        }
        Ok(inner_product(&self.values, &other.values) * self.grid.cell_volume())
    }

    pub fn scale(&mut self, c: Complex64) {
        self.values.iter_mut().for_each(|z| *z *= c);
    }

    /// Relative L² distance `‖u − w‖/‖w‖`.
    pub fn relative_l2_distance(&self, reference: &Field) -> f64 {
        let diff: f64 = self
            .values
            .iter()
            .zip(&reference.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let base: f64 = reference.values.iter().map(|z| z.norm_sqr()).sum();
        (diff / base).sqrt()
    }
}

pub(crate) fn inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// Uniform time samples `start + k·step`, `k = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl TimeGrid {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self, PropagatorError> {
        if !(step > 0.0 && step.is_finite() && start.is_finite()) || len == 0 {
            return Err(PropagatorError::InvalidTimes);
        }
        Ok(TimeGrid { start, step, len })
    }

    pub fn time(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|k| self.time(k))
    }
}

/// Frames of a field on a shared spatial grid at uniform times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeField {
    pub times: TimeGrid,
    pub frames: Vec<Field>,
}

impl SpaceTimeField {
    pub fn new(times: TimeGrid, frames: Vec<Field>) -> Result<Self, PropagatorError> {
        if frames.len() != times.len {
            return Err(PropagatorError::Format(format!(
                "{} frames for {} times",
                frames.len(),
                times.len
            )));
        }
        if frames.windows(2).any(|w| w[0].grid != w[1].grid) {
            return Err(PropagatorError::GridMismatch);
        }
        Ok(SpaceTimeField { times, frames })
    }

    pub fn zeros(grid: SpatialGrid, times: TimeGrid) -> Self {
        SpaceTimeField {
            times,
            frames: vec![Field::zeros(grid); times.len],
        }
    }

    pub fn from_fn(
        grid: SpatialGrid,
        times: TimeGrid,
        mut f: impl FnMut(f64, [f64; 2]) -> Complex64,
    ) -> Self {
        let frames = times
            .times()
            .map(|t| Field::from_fn(grid, |x| f(t, x)))
            .collect();
        SpaceTimeField { times, frames }
    }

    pub fn grid(&self) -> SpatialGrid {
        self.frames[0].grid
    }

    /// The field with time reversed and values conjugated.
    pub fn conj_reversed(&self) -> SpaceTimeField {
        let frames = self
            .frames
            .iter()
            .rev()
            .map(|f| Field {
                grid: f.grid,
                values: f.values.iter().map(|z| z.conj()).collect(),
            })
            .collect();
        SpaceTimeField {
            times: self.times,
            frames,
        }
    }

    /// `Δt Σ_k ⟨u_k, w_k⟩`.
    pub fn pairing(&self, other: &SpaceTimeField) -> Result<Complex64, PropagatorError> {
        if self.times.len != other.times.len || self.grid() != other.grid() {
            return Err(PropagatorError::GridMismatch);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.frames.iter().zip(&other.frames) {
            acc += a.inner(b)?;
        }
        Ok(acc * self.times.step)
    }
}

/// FFT plans and the `|ξ|²` table for one grid.
pub struct SpectralEngine {
    grid: SpatialGrid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    xi_sq: Vec<f64>,
}

impl SpectralEngine {
    pub fn new(grid: SpatialGrid) -> Self {
        let mut planner = FftPlanner::new();
        SpectralEngine {
            grid,
            forward: planner.plan_fft_forward(grid.n),
            inverse: planner.plan_fft_inverse(grid.n),
            xi_sq: grid.frequency_sq(),
        }
    }

    pub fn grid(&self) -> SpatialGrid {
        self.grid
    }

    pub fn xi_sq(&self) -> &[f64] {
        &self.xi_sq
    }

    fn transform(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.grid.n;
        if self.grid.dim == 1 {
            fft.process(data);
            return;
        }
        for row in data.chunks_exact_mut(n) {
            fft.process(row);
        }
        let mut column = vec![Complex64::new(0.0, 0.0); n];
        for c in 0..n {
            for r in 0..n {
                column[r] = data[r * n + c];
            }
            fft.process(&mut column);
            for r in 0..n {
                data[r * n + c] = column[r];
            }
        }
    }

    /// Unnormalised forward DFT in place.
    pub fn to_frequency(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
    }

    /// Inverse DFT in place, including the `1/N^n` normalisation.
    pub fn to_space(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
        let scale = 1.0 / self.grid.len() as f64;
        data.iter_mut().for_each(|z| *z *= scale);
    }

    /// Multiplies Fourier data by `e^{−it|ξ|²}`.
    pub fn phase(&self, hat: &mut [Complex64], t: f64) {
        for (z, xi2) in hat.iter_mut().zip(&self.xi_sq) {
            *z *= Complex64::from_polar(1.0, -t * xi2);
        }
    }

    /// `U(t)` applied to raw grid values.
    pub fn evolve(&self, values: &mut [Complex64], t: f64) {
        if t == 0.0 {
            return;
        }
        self.to_frequency(values);
        self.phase(values, t);
        self.to_space(values);
    }

    pub fn propagate(&self, f: &Field, t: f64) -> Field {
        let mut values = f.values.clone();
        self.evolve(&mut values, t);
        Field {
            grid: f.grid,
            values,
        }
    }
}

/// `(4πiτ)^{−n/2}`, with the branch `i^{−n/2} = e^{−iπn·sgn(τ)/4}`.
pub fn kernel_prefactor(dim: usize, tau: f64) -> Complex64 {
    let magnitude = (4.0 * PI * tau.abs()).powf(-(dim as f64) / 2.0);
    Complex64::from_polar(magnitude, -tau.signum() * PI * dim as f64 / 4.0)
}

/// The free Schrödinger kernel `(4πiτ)^{−n/2} e^{i|d|²/(4τ)}` at squared distance `d2`.
pub fn kernel(dim: usize, tau: f64, d2: f64) -> Complex64 {
    kernel_prefactor(dim, tau) * Complex64::from_polar(1.0, d2 / (4.0 * tau))
}

/// Kernel quadrature of `U(t)f` evaluated on the points of `out`.
pub fn propagate_kernel_to(
    f: &Field,
    t: f64,
    out: &SpatialGrid,
) -> Result<Field, PropagatorError> {
    if t == 0.0 {
        return Err(PropagatorError::KernelAtZero);
    }
    if out.dim != f.grid.dim {
        return Err(PropagatorError::GridMismatch);
    }
    let dim = f.grid.dim;
    let pre = kernel_prefactor(dim, t) * f.grid.cell_volume();
    let src: Vec<([f64; 2], Complex64)> = f
        .grid
        .points()
        .zip(f.values.iter().copied())
        .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
        .collect();
    let inv4t = 1.0 / (4.0 * t);
    let values = out
        .points()
        .map(|x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (y, v) in &src {
                let d2 = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2);
                acc += v * Complex64::from_polar(1.0, d2 * inv4t);
            }
            acc * pre
        })
        .collect();
    Ok(Field { grid: *out, values })
}

/// `U(t)f` with the chosen backend; the kernel backend evaluates on the input grid.
pub fn propagate(f: &Field, t: f64, backend: Backend) -> Result<Field, PropagatorError> {
    match backend {
        Backend::Spectral => Ok(SpectralEngine::new(f.grid).propagate(f, t)),
        Backend::Kernel => propagate_kernel_to(f, t, &f.grid),
    }
}

/// `U*(s)f = U(−s)f`.
pub fn adjoint_propagate(f: &Field, s: f64, backend: Backend) -> Result<Field, PropagatorError> {
    propagate(f, -s, backend)
}
