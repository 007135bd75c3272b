//! Discrete mixed norms, the bilinear form of the retarded operator, and the
//! counterexample sweeps that measure blow-up exponents.

mod bilinear;
mod forcing;
mod probe;
mod sweep;

use num_complex::Complex64;
use serde::Serialize;

use crate::exponents::Recip;
use crate::propagator::{PropagatorError, SpaceTimeField};
use crate::whitney::WhitneyError;

pub use bilinear::{bilinear_form, whitney_sum_check, WhitneySumCheck};
pub use forcing::{make_forcing, CounterexampleSpec, Family};
pub use probe::{local_estimate_probe, probe_forcings, probe_ratio, ProbeConfig, ProbeForcing, ProbeResult};
pub use sweep::{predicted_slope, sweep, SweepConfig, SweepReport};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EstimatorError {
    #[error("under-resolved: {0}")]
    UnderResolved(String),
    #[error("degenerate fit: fewer than 3 usable points")]
    DegenerateFit,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("time-index pair ({j}, {k}) is not covered by the scale range")]
    UncoveredPair { j: usize, k: usize },
    #[error(transparent)]
    Propagator(#[from] PropagatorError),
    #[error(transparent)]
    Whitney(#[from] WhitneyError),
}

/// Order of integration in a mixed norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum NormOrder {
    /// `L^q_t L^r_x`: space norm inside, time norm outside.
    TimeOuter,
    /// `L^r_x L^q_t`: time norm inside, space norm outside.
    SpaceOuter,
}

/// The mixed norm with time exponent `1/q` and space exponent `1/r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MixedNormSpec {
    pub time_exp: Recip,
    pub space_exp: Recip,
    pub order: NormOrder,
}

impl MixedNormSpec {
    pub fn time_outer(time_exp: Recip, space_exp: Recip) -> Self {
        MixedNormSpec {
            time_exp,
            space_exp,
            order: NormOrder::TimeOuter,
        }
    }

    pub fn space_outer(time_exp: Recip, space_exp: Recip) -> Self {
        MixedNormSpec {
            time_exp,
            space_exp,
            order: NormOrder::SpaceOuter,
        }
    }
}

/// `(Σ |v|^p w)^{1/p}`, or `max |v|` over positive weights when the
/// reciprocal exponent is zero.
pub(crate) fn weighted_lp(values: impl Iterator<Item = (f64, f64)>, p: Recip) -> f64 {
    let inv = p.to_f64();
    if inv == 0.0 {
        return values
            .filter(|(_, w)| *w > 0.0)
            .fold(0.0, |m, (v, _)| m.max(v));
    }
    let e = 1.0 / inv;
    values.map(|(v, w)| v.powf(e) * w).sum::<f64>().powf(inv)
}

/// Mixed norm of samples laid out row-major in time (`n_times` rows of
/// `values.len() / n_times` spatial samples), with Riemann weights `dt`, `dx`.
pub fn mixed_norm_samples(
    values: &[Complex64],
    n_times: usize,
    dt: f64,
    dx: f64,
    spec: MixedNormSpec,
) -> f64 {
    if n_times == 0 {
        return 0.0;
    }
    let weights = vec![dx; values.len() / n_times];
    mixed_norm_weighted(values, n_times, dt, &weights, spec)
}

/// As [`mixed_norm_samples`], with one spatial weight per point.
pub fn mixed_norm_weighted(
    values: &[Complex64],
    n_times: usize,
    dt: f64,
    space_weights: &[f64],
    spec: MixedNormSpec,
) -> f64 {
    let n_points = space_weights.len();
    if n_times == 0 || n_points == 0 {
        return 0.0;
    }
    assert_eq!(values.len(), n_times * n_points, "sample layout");
    match spec.order {
        NormOrder::TimeOuter => {
            let inner = (0..n_times).map(|k| {
                let row = &values[k * n_points..(k + 1) * n_points];
                let norm = weighted_lp(
                    row.iter().map(|z| z.norm()).zip(space_weights.iter().copied()),
                    spec.space_exp,
                );
                (norm, dt)
            });
            weighted_lp(inner, spec.time_exp)
        }
        NormOrder::SpaceOuter => {
            let inner = (0..n_points).map(|i| {
                let norm = weighted_lp(
                    (0..n_times).map(|k| (values[k * n_points + i].norm(), dt)),
                    spec.time_exp,
                );
                (norm, space_weights[i])
            });
            weighted_lp(inner, spec.space_exp)
        }
    }
}

/// Mixed norm of a field, restricted to frames with time in `time_window`
/// (inclusive) and to points accepted by `space_mask`.
pub fn mixed_norm(
    u: &SpaceTimeField,
    spec: MixedNormSpec,
    time_window: Option<(f64, f64)>,
    space_mask: Option<&dyn Fn([f64; 2]) -> bool>,
) -> f64 {
    let grid = u.grid();
    let keep: Vec<usize> = (0..grid.len())
        .filter(|&i| space_mask.is_none_or(|m| m(grid.coords(i))))
        .collect();
    let mut samples = Vec::new();
    let mut rows = 0;
    for (k, frame) in u.frames.iter().enumerate() {
        let t = u.times.time(k);
        if let Some((lo, hi)) = time_window {
            if t < lo || t > hi {
                continue;
            }
        }
        rows += 1;
        samples.extend(keep.iter().map(|&i| frame.values[i]));
    }
    if keep.is_empty() {
        return 0.0;
    }
    mixed_norm_samples(&samples, rows, u.times.step, grid.cell_volume(), spec)
}
