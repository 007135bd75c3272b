use std::f64::consts::PI;

use num_complex::Complex64;

use super::{propagate_kernel_to, Backend, Field, PropagatorError, SpatialGrid, SpectralEngine};
use crate::fit::{log_spaced, ols};

/// Result of fitting `sup_x |U(t)f|` against `t` over a battery of inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionFit {
    /// Least-squares slope of `log envelope` against `log t`.
    pub slope: f64,
    /// `max_t envelope(t) · t^{n/2}`.
    pub constant: f64,
    pub times: Vec<f64>,
    /// Largest `sup |U(t)f| / ‖f‖_1` over the battery, at each time.
    pub envelope: Vec<f64>,
}

/// Centred and shifted Gaussians `e^{−|x−c|²/(4a)}`, normalised in `L¹`.
///
/// The narrowest width `a₀ = 20h²/π²` makes `e^{−a₀|ξ|²} = e^{−20}` at the
/// Nyquist frequency `π/h`, so every member is resolved by the grid.
pub fn gaussian_battery(grid: SpatialGrid) -> Vec<Field> {
    let h = grid.spacing();
    let a0 = 20.0 * h * h / (PI * PI);
    let shift = grid.length() / 16.0;
    let mut out = Vec::new();
    for (a, c) in [
        (a0, [0.0, 0.0]),
        (2.0 * a0, [0.0, 0.0]),
        (4.0 * a0, [0.0, 0.0]),
        (a0, [shift, -shift]),
    ] {
        let mut f = Field::from_fn(grid, |x| {
            let d2 = (x[0] - c[0]).powi(2) + if grid.dim() == 2 { (x[1] - c[1]).powi(2) } else { 0.0 };
            Complex64::new((-d2 / (4.0 * a)).exp(), 0.0)
        });
        let norm = f.l1_norm();
        f.scale(Complex64::new(1.0 / norm, 0.0));
        out.push(f);
    }
    out
}

/// Fits the decay of `sup |U(t)f|` on `samples` log-spaced times in `[t_lo, t_hi]`.
///
/// The spectral backend refuses times past the torus horizon, after which
/// periodic images spoil the free-space decay.
pub fn dispersive_constant(
    backend: Backend,
    battery: &[Field],
    t_lo: f64,
    t_hi: f64,
    samples: usize,
) -> Result<DispersionFit, PropagatorError> {
    let grid = battery.first().ok_or(PropagatorError::InvalidTimes)?.grid;
    if !(t_lo > 0.0 && t_hi > t_lo) || samples < 2 {
        return Err(PropagatorError::InvalidTimes);
    }
    if backend == Backend::Spectral && t_hi > grid.horizon() {
        return Err(PropagatorError::BeyondHorizon {
            t: t_hi,
            horizon: grid.horizon(),
        });
    }
    let times = log_spaced(t_lo, t_hi, samples);
    let mut envelope = vec![0.0_f64; samples];
    for f in battery {
        if f.grid != grid {
            return Err(PropagatorError::GridMismatch);
        }
        let l1 = f.l1_norm();
        match backend {
            Backend::Spectral => {
                let engine = SpectralEngine::new(grid);
                let mut hat = f.values.clone();
                engine.to_frequency(&mut hat);
                for (e, &t) in envelope.iter_mut().zip(&times) {
                    let mut u = hat.clone();
                    engine.phase(&mut u, t);
                    engine.to_space(&mut u);
                    let sup = u.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
                    *e = e.max(sup / l1);
                }
            }
            Backend::Kernel => {
                for (e, &t) in envelope.iter_mut().zip(&times) {
                    let u = propagate_kernel_to(f, t, &grid)?;
                    *e = e.max(u.sup_norm() / l1);
                }
            }
        }
    }
    let lx: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = envelope.iter().map(|e| e.ln()).collect();
    let fit = ols(&lx, &ly).ok_or(PropagatorError::InvalidTimes)?;
    let half_n = grid.dim() as f64 / 2.0;
    let constant = times
        .iter()
        .zip(&envelope)
        .fold(0.0_f64, |m, (t, e)| m.max(e * t.powf(half_n)));
    Ok(DispersionFit {
        slope: fit.slope,
        constant,
        times,
        envelope,
    })
}
