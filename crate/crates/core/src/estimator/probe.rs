use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::forcing::{CounterexampleSpec, Family};
use super::{mixed_norm_weighted, weighted_lp, EstimatorError, MixedNormSpec};
use crate::exponents::Quad;
use crate::propagator::{retarded_kernel_sum, SeparableSource, SpatialGrid};

/// Grid and sampling settings of the boundedness probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProbeConfig {
    /// Random forcings on top of the four family members.
    pub trials: usize,
    /// Points per axis of the spatial grid on `[−L/2, L/2)^n`.
    pub resolution: usize,
    pub box_length: f64,
    /// Midpoint nodes across each forcing's time support.
    pub source_time_nodes: usize,
    /// Midpoint nodes on the output window `[2, 3]`.
    pub out_time_nodes: usize,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            trials: 8,
            resolution: 128,
            box_length: 16.0,
            source_time_nodes: 16,
            out_time_nodes: 8,
            seed: 0,
        }
    }
}

/// A forcing `a(s) b(y)` with `a` supported in `[s_lo, s_hi] ⊂ [0, 1]`.
pub struct ProbeForcing {
    pub label: String,
    pub s_lo: f64,
    pub s_hi: f64,
    pub time: Box<dyn Fn(f64) -> Complex64>,
    pub space: Box<dyn Fn([f64; 2]) -> Complex64>,
}

impl ProbeForcing {
    fn family(spec: CounterexampleSpec) -> Self {
        ProbeForcing {
            label: format!("{}({})", spec.family, spec.param),
            s_lo: 0.0,
            s_hi: spec.duration(),
            time: Box::new(move |s| spec.time_factor(s)),
            space: Box::new(move |y| {
                if spec.in_support(y) {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeResult {
    pub max_ratio: f64,
    /// `(label, ‖v‖/‖F‖)` for every forcing tried.
    pub ratios: Vec<(String, f64)>,
}

/// `‖v‖_{L^q_t L^r_x([2,3] × box)} / ‖F‖_{L^{q̃'}_s L^{r̃'}_y}` for one
/// forcing, or 0 when the sampled forcing vanishes.
pub fn probe_ratio(
    quad: &Quad,
    n: usize,
    forcing: &ProbeForcing,
    cfg: &ProbeConfig,
) -> Result<f64, EstimatorError> {
    let grid = SpatialGrid::new(n, cfg.resolution, cfg.box_length)?;
    if cfg.source_time_nodes == 0 || cfg.out_time_nodes == 0 {
        return Err(EstimatorError::InvalidParams("empty time quadrature".into()));
    }
    let ds = (forcing.s_hi - forcing.s_lo) / cfg.source_time_nodes as f64;
    let times: Vec<(f64, Complex64)> = (0..cfg.source_time_nodes)
        .map(|i| {
            let s = forcing.s_lo + (i as f64 + 0.5) * ds;
            (s, (forcing.time)(s) * ds)
        })
        .collect();
    let cell = grid.cell_volume();
    let nodes: Vec<([f64; 2], Complex64)> = grid
        .points()
        .map(|y| (y, (forcing.space)(y)))
        .filter(|(_, b)| b.norm_sqr() > 0.0)
        .map(|(y, b)| (y, b * cell))
        .collect();
    let a_norm = weighted_lp(
        times.iter().map(|(_, a)| (a.norm() / ds, ds)),
        quad.qtrt.q.dual(),
    );
    let b_norm = weighted_lp(nodes.iter().map(|(_, b)| (b.norm() / cell, cell)), quad.qtrt.r.dual());
    let f_norm = a_norm * b_norm;
    if f_norm == 0.0 {
        return Ok(0.0);
    }
    let source = SeparableSource { times, nodes };
    let out_dt = 1.0 / cfg.out_time_nodes as f64;
    let out_times: Vec<f64> = (0..cfg.out_time_nodes)
        .map(|i| 2.0 + (i as f64 + 0.5) * out_dt)
        .collect();
    let points: Vec<[f64; 2]> = grid.points().collect();
    let v = retarded_kernel_sum(n, &source, &out_times, &points);
    let weights = vec![cell; points.len()];
    let v_norm = mixed_norm_weighted(
        &v,
        out_times.len(),
        out_dt,
        &weights,
        MixedNormSpec::time_outer(quad.qr.q, quad.qr.r),
    );
    Ok(v_norm / f_norm)
}

/// The forcings tried by [`local_estimate_probe`]: one member of each
/// family at moderate parameters, then `trials` random boxes and Gaussians.
pub fn probe_forcings(n: usize, cfg: &ProbeConfig) -> Result<Vec<ProbeForcing>, EstimatorError> {
    let mut out = vec![
        ProbeForcing::family(CounterexampleSpec::new(Family::Flash, n, 0.25, 0.125)?),
        ProbeForcing::family(CounterexampleSpec::new(Family::Bump, n, 0.0, 0.125)?),
        ProbeForcing::family(CounterexampleSpec::new(Family::Focusing, n, 0.25, 0.125)?),
        ProbeForcing::family(CounterexampleSpec::new(Family::Oscillatory, n, 2.0, 0.5)?),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let reach = cfg.box_length / 4.0;
    for trial in 0..cfg.trials {
        let s_lo = rng.gen_range(0.0..0.75);
        let s_hi = rng.gen_range(s_lo + 0.125..=1.0);
        let centre = [rng.gen_range(-reach..reach), rng.gen_range(-reach..reach)];
        let width = rng.gen_range(0.5..2.0);
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        if trial % 2 == 0 {
            out.push(ProbeForcing {
                label: format!("box#{trial}"),
                s_lo,
                s_hi,
                time: Box::new(move |_| Complex64::from_polar(1.0, phase)),
                space: Box::new(move |y| {
                    let inside = (0..n).all(|i| (y[i] - centre[i]).abs() < width / 2.0);
                    Complex64::new(if inside { 1.0 } else { 0.0 }, 0.0)
                }),
            });
        } else {
            let freq = rng.gen_range(-4.0..4.0);
            out.push(ProbeForcing {
                label: format!("gaussian#{trial}"),
                s_lo,
                s_hi,
                time: Box::new(move |s| {
                    // Smooth bump vanishing at both ends of the support.
                    let u = (s - s_lo) / (s_hi - s_lo);
                    Complex64::new((std::f64::consts::PI * u).sin().powi(2), 0.0)
                }),
                space: Box::new(move |y| {
                    let d2: f64 = (0..n).map(|i| (y[i] - centre[i]).powi(2)).sum();
                    Complex64::from_polar((-d2 / (width * width)).exp(), freq * y[0])
                }),
            });
        }
    }
    Ok(out)
}

/// Largest ratio of `‖v‖` on `[2, 3]` to `‖F‖` over forcings supported in
/// `[0, 1]`, a smoke test for the local estimate at `quad`.
///
/// Cost grows like `resolution^{2n}`; two-dimensional runs need small grids.
pub fn local_estimate_probe(quad: &Quad, n: usize, cfg: &ProbeConfig) -> Result<ProbeResult, EstimatorError> {
    let mut ratios = Vec::new();
    for f in probe_forcings(n, cfg)? {
        ratios.push((f.label.clone(), probe_ratio(quad, n, &f, cfg)?));
    }
    let max_ratio = ratios.iter().fold(0.0_f64, |m, (_, r)| m.max(*r));
    Ok(ProbeResult { max_ratio, ratios })
}
