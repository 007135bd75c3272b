use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::forcing::{CounterexampleSpec, Family};
use super::{mixed_norm_weighted, weighted_lp, EstimatorError, MixedNormSpec};
use crate::exponents::{format_rational, rat, Quad, Rational};
use crate::fit::loglog_fit;
use crate::propagator::retarded_kernel_sum;

/// Quadrature and tolerance settings for one sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    /// Defaults to [`Family::default_eta`].
    pub eta: Option<f64>,
    /// Midpoint nodes across the time support (non-oscillatory families).
    pub source_time_nodes: usize,
    /// Oscillatory family: `⌈c·R²⌉` time nodes on `(0, 1)`.
    pub chirp_nodes_per_r2: f64,
    /// Nodes across the thinnest spatial feature of the forcing.
    pub source_space_nodes: usize,
    /// Midpoint nodes on the output window `[2, 3]`.
    pub out_time_nodes: usize,
    /// Radial nodes across the measurement region.
    pub out_space_nodes: usize,
    /// Tolerance as a fraction of `max(|predicted|, 1/2)`.
    pub rel_tolerance: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig::for_family(Family::Flash)
    }
}

impl SweepConfig {
    pub fn for_family(family: Family) -> Self {
        let base = SweepConfig {
            eta: None,
            source_time_nodes: 4,
            chirp_nodes_per_r2: 40.0,
            source_space_nodes: 8,
            out_time_nodes: 8,
            out_space_nodes: 64,
            rel_tolerance: 0.10,
        };
        match family {
            Family::Flash | Family::Focusing => base,
            Family::Bump => SweepConfig {
                source_time_nodes: 16,
                source_space_nodes: 32,
                ..base
            },
            Family::Oscillatory => SweepConfig {
                source_space_nodes: 4,
                rel_tolerance: 0.15,
                ..base
            },
        }
    }
}

/// The outcome of one sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub family: Family,
    /// `[1/q, 1/r, 1/q̃, 1/r̃]` as exact strings.
    pub quad: [String; 4],
    pub n: usize,
    pub eta: f64,
    pub params: Vec<f64>,
    /// `‖v‖/‖F‖` per parameter; for the bump, `‖v(t)‖_{L^r}`.
    pub ratios: Vec<f64>,
    pub fitted_slope: f64,
    pub predicted_slope: String,
    pub predicted_slope_value: f64,
    pub dropped_first: bool,
    pub tolerance: f64,
    pub verdict: bool,
}

impl SweepReport {
    /// `param,ratio` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,ratio\n");
        for (p, r) in self.params.iter().zip(&self.ratios) {
            out.push_str(&format!("{p},{r}\n"));
        }
        out
    }

    /// Whether the measured slope shows the estimate failing.
    ///
    /// Flash and focusing ratios blow up as `ε → 0` when the slope is
    /// negative, oscillatory ratios as `R → ∞` when it is positive, and the
    /// bump's `‖v(t)‖_{L^r}` fails to lie in `L^q(dt)` when `t^{slope·q}` is
    /// not integrable at infinity.
    pub fn blow_up_detected(&self, quad: &Quad) -> bool {
        let s = self.fitted_slope;
        let tol = self.tolerance;
        match self.family {
            Family::Flash | Family::Focusing => s < -tol,
            Family::Oscillatory => s > tol,
            Family::Bump => {
                // Not integrable iff slope ≥ −1/q; for q = ∞ only growth fails.
                if quad.q() == Rational::from_integer(0) {
                    s > tol
                } else {
                    s + value(quad.q()) > tol
                }
            }
        }
    }
}

fn value(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// The exponent of the ratio's power law in the family's parameter.
pub fn predicted_slope(family: Family, quad: &Quad, n: usize) -> Rational {
    let n = Rational::from_integer(n as i128);
    let two = Rational::from_integer(2);
    let (r, qt, rt) = (quad.r(), quad.qt(), quad.rt());
    match family {
        Family::Flash => two * qt + n * rt - n * r,
        Family::Bump => -n * (rat(1, 2) - r),
        Family::Focusing => n * r + two * qt - (n - two) * rt,
        Family::Oscillatory => n * (r - rt) - Rational::from_integer(1),
    }
}

/// Radial quadrature of a measurement region `lo < |x| < hi`.
///
/// All four forcings are radial, so `v(t, ·)` is too and its norms reduce to
/// one-dimensional integrals against `|S^{n−1}| ρ^{n−1} dρ`.
fn radial_nodes(n: usize, lo: f64, hi: f64, count: usize) -> (Vec<[f64; 2]>, Vec<f64>) {
    let d = (hi - lo) / count as f64;
    (0..count)
        .map(|i| {
            let rho = lo + (i as f64 + 0.5) * d;
            let w = if n == 1 { 2.0 * d } else { 2.0 * PI * rho * d };
            ([rho, 0.0], w)
        })
        .unzip()
}

fn midpoints(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let d = (hi - lo) / count as f64;
    (0..count).map(|i| lo + (i as f64 + 0.5) * d).collect()
}

fn spec_for(family: Family, n: usize, param: f64, cfg: &SweepConfig) -> Result<CounterexampleSpec, EstimatorError> {
    CounterexampleSpec::new(family, n, param, cfg.eta.unwrap_or(family.default_eta()))
}

fn source_for(
    spec: &CounterexampleSpec,
    cfg: &SweepConfig,
) -> Result<crate::propagator::SeparableSource, EstimatorError> {
    let time_nodes = match spec.family {
        Family::Oscillatory => (cfg.chirp_nodes_per_r2 * spec.param * spec.param).ceil() as usize,
        _ => cfg.source_time_nodes,
    };
    spec.separable_source(time_nodes, cfg.source_space_nodes)
}

/// `‖v‖ / ‖F‖` for one member of the flash, focusing or oscillatory family.
fn local_ratio(spec: &CounterexampleSpec, quad: &Quad, cfg: &SweepConfig) -> Result<f64, EstimatorError> {
    let source = source_for(spec, cfg)?;
    let (eta, p) = (spec.eta, spec.param);
    let (lo, hi) = match spec.family {
        Family::Flash => (0.0, eta / p),
        Family::Focusing => (0.0, p),
        Family::Oscillatory => (p + eta / p, 2.0 * p - eta / p),
        Family::Bump => unreachable!("the bump is measured per time"),
    };
    let (points, weights) = radial_nodes(spec.n, lo, hi, cfg.out_space_nodes);
    let times = midpoints(2.0, 3.0, cfg.out_time_nodes);
    let v = retarded_kernel_sum(spec.n, &source, &times, &points);
    let norm_spec = match spec.family {
        Family::Oscillatory => MixedNormSpec::space_outer(quad.qr.q, quad.qr.r),
        _ => MixedNormSpec::time_outer(quad.qr.q, quad.qr.r),
    };
    let dt = 1.0 / cfg.out_time_nodes as f64;
    let v_norm = mixed_norm_weighted(&v, times.len(), dt, &weights, norm_spec);
    let duration: f64 = source.times.iter().map(|(_, w)| w.norm()).sum();
    let area: f64 = source.nodes.iter().map(|(_, w)| w.norm()).sum();
    Ok(v_norm / CounterexampleSpec::box_norm(quad, duration, area))
}

/// `‖v(t)‖_{L^r(|x| ≤ ηt)}` for the bump at each time.
fn bump_norms(n: usize, quad: &Quad, times: &[f64], cfg: &SweepConfig) -> Result<Vec<f64>, EstimatorError> {
    let spec = spec_for(Family::Bump, n, 0.0, cfg)?;
    let source = source_for(&spec, cfg)?;
    times
        .iter()
        .map(|&t| {
            if t <= 1.0 {
                return Err(EstimatorError::InvalidParams(format!(
                    "bump times must exceed the forcing's support, got {t}"
                )));
            }
            let (points, weights) = radial_nodes(n, 0.0, spec.eta * t, cfg.out_space_nodes);
            let v = retarded_kernel_sum(n, &source, &[t], &points);
            Ok(weighted_lp(
                v.iter().map(|z| z.norm()).zip(weights.iter().copied()),
                quad.qr.r,
            ))
        })
        .collect()
}

/// Runs one family over a parameter ladder and fits the log-log slope.
///
/// `params` are `ε` (flash, focusing), `t` (bump) or `R` (oscillatory); they
/// are reordered from least to most asymptotic. The solution is the
/// free-space retarded Duhamel integral evaluated by direct quadrature.
pub fn sweep(
    family: Family,
    quad: &Quad,
    n: usize,
    params: &[f64],
    cfg: &SweepConfig,
) -> Result<SweepReport, EstimatorError> {
    let mut params = params.to_vec();
    if params.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
        return Err(EstimatorError::InvalidParams("parameters must be positive".into()));
    }
    match family {
        Family::Flash | Family::Focusing => params.sort_by(|a, b| b.total_cmp(a)),
        Family::Bump | Family::Oscillatory => params.sort_by(|a, b| a.total_cmp(b)),
    }
    params.dedup();
    let (min, max) = (
        params.iter().copied().fold(f64::INFINITY, f64::min),
        params.iter().copied().fold(0.0, f64::max),
    );
    if params.len() < 4 || max / min < 4.0 {
        return Err(EstimatorError::InvalidParams(
            "need at least 4 parameter values spanning 2 octaves".into(),
        ));
    }
    let ratios = match family {
        Family::Bump => bump_norms(n, quad, &params, cfg)?,
        _ => params
            .iter()
            .map(|&p| local_ratio(&spec_for(family, n, p, cfg)?, quad, cfg))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let fit = loglog_fit(&params, &ratios).ok_or(EstimatorError::DegenerateFit)?;
    let predicted = predicted_slope(family, quad, n);
    let predicted_value = value(predicted);
    let tolerance = cfg.rel_tolerance * predicted_value.abs().max(0.5);
    let q = |r: Rational| format_rational(&r);
    Ok(SweepReport {
        family,
        quad: [q(quad.q()), q(quad.r()), q(quad.qt()), q(quad.rt())],
        n,
        eta: cfg.eta.unwrap_or(family.default_eta()),
        params,
        ratios,
        fitted_slope: fit.slope,
        predicted_slope: format_rational(&predicted),
        predicted_slope_value: predicted_value,
        dropped_first: fit.dropped_first,
        tolerance,
        verdict: (fit.slope - predicted_value).abs() <= tolerance,
    })
}
