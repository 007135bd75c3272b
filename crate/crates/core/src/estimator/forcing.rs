use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::EstimatorError;
use crate::exponents::Quad;
use crate::propagator::{Field, SeparableSource, SpaceTimeField, SpatialGrid, TimeGrid};

/// The four counterexample forcings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `χ(0<s<ε², |y|<ε)`.
    Flash,
    /// `χ(0<s<1, |y|<1)`.
    Bump,
    /// `χ(0<s<ε², ||y| − η/ε| < ε)`.
    Focusing,
    /// `e^{−2iR²s²} χ(0<s<1, |y| ≤ η/R)`.
    Oscillatory,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Flash, Family::Bump, Family::Focusing, Family::Oscillatory];

    pub fn name(self) -> &'static str {
        match self {
            Family::Flash => "flash",
            Family::Bump => "bump",
            Family::Focusing => "focusing",
            Family::Oscillatory => "oscillatory",
        }
    }

    /// `η = 1/16` for the oscillatory family and `1/8` otherwise.
    pub fn default_eta(self) -> f64 {
        match self {
            Family::Oscillatory => 1.0 / 16.0,
            _ => 1.0 / 8.0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = EstimatorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| EstimatorError::InvalidParams(format!("unknown family `{s}`")))
    }
}

/// One member of a counterexample family.
///
/// `param` is `ε` for the flash and focusing forcings and `R` for the
/// oscillatory one; the bump has no parameter. `η` is the fixed small
/// constant of each construction (for the bump it sets the measurement
/// region `|x| ≤ ηt`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleSpec {
    pub family: Family,
    pub n: usize,
    pub param: f64,
    pub eta: f64,
}

impl CounterexampleSpec {
    pub fn new(family: Family, n: usize, param: f64, eta: f64) -> Result<Self, EstimatorError> {
        let spec = CounterexampleSpec {
            family,
            n,
            param,
            eta,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), EstimatorError> {
        let bad = |m: String| Err(EstimatorError::InvalidParams(m));
        if !(1..=2).contains(&self.n) {
            return bad(format!("dimension {} not in {{1, 2}}", self.n));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return bad(format!("η = {} must lie in (0, 1)", self.eta));
        }
        match self.family {
            Family::Flash | Family::Focusing => {
                let e = self.param;
                if !(e > 0.0 && e * e < self.eta) {
                    return bad(format!("need 0 < ε² < η, got ε = {e}, η = {}", self.eta));
                }
            }
            Family::Oscillatory => {
                if !(self.param > 1.0 && self.param.is_finite()) {
                    return bad(format!("need R > 1, got {}", self.param));
                }
            }
            Family::Bump => {}
        }
        Ok(())
    }

    /// The time support `(0, T)`.
    pub fn duration(&self) -> f64 {
        match self.family {
            Family::Flash | Family::Focusing => self.param * self.param,
            Family::Bump | Family::Oscillatory => 1.0,
        }
    }

    /// Whether `y` lies in the spatial support.
    pub fn in_support(&self, y: [f64; 2]) -> bool {
        let r = (y[0] * y[0] + y[1] * y[1]).sqrt();
        match self.family {
            Family::Flash => r < self.param,
            Family::Bump => r < 1.0,
            Family::Focusing => (r - self.eta / self.param).abs() < self.param,
            Family::Oscillatory => r <= self.eta / self.param,
        }
    }

    /// Radius of a ball containing the spatial support.
    pub fn support_radius(&self) -> f64 {
        match self.family {
            Family::Flash => self.param,
            Family::Bump => 1.0,
            Family::Focusing => self.eta / self.param + self.param,
            Family::Oscillatory => self.eta / self.param,
        }
    }

    /// Width of the thinnest spatial feature.
    pub fn feature_width(&self) -> f64 {
        match self.family {
            Family::Flash | Family::Focusing => 2.0 * self.param,
            Family::Bump => 2.0,
            Family::Oscillatory => 2.0 * self.eta / self.param,
        }
    }

    /// The time factor of the forcing.
    ///
    /// The oscillatory chirp carries the sign that makes its phase stationary
    /// against the kernel `e^{i|x−y|²/(4τ)}`.
    pub fn time_factor(&self, s: f64) -> Complex64 {
        match self.family {
            Family::Oscillatory => Complex64::from_polar(1.0, -2.0 * self.param * self.param * s * s),
            _ => Complex64::new(1.0, 0.0),
        }
    }

    pub fn value(&self, s: f64, y: [f64; 2]) -> Complex64 {
        if s > 0.0 && s < self.duration() && self.in_support(y) {
            self.time_factor(s)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// `‖F‖_{L^{q̃'}_s L^{r̃'}_y}` for a forcing of modulus `χ_{(0,T)×A}`,
    /// given the measures `T` and `|A|`. Both orders of integration agree.
    pub fn box_norm(quad: &Quad, duration: f64, area: f64) -> f64 {
        let qd = 1.0 - quad.qtrt.q.to_f64();
        let rd = 1.0 - quad.qtrt.r.to_f64();
        duration.powf(qd) * area.powf(rd)
    }

    /// Exact measure of the spatial support.
    pub fn exact_area(&self) -> f64 {
        let ball = |r: f64| if self.n == 1 { 2.0 * r } else { PI * r * r };
        match self.family {
            Family::Focusing => {
                let rho = self.eta / self.param;
                ball(rho + self.param) - ball((rho - self.param).max(0.0))
            }
            _ => ball(self.support_radius()),
        }
    }

    /// Quadrature of the forcing as a product of time and space nodes.
    ///
    /// Time nodes are midpoints of `time_nodes` equal cells of `(0, T)`; space
    /// nodes are centres of cubes of side `feature_width / space_nodes`
    /// that fall inside the support. Fewer than four nodes across either
    /// feature, or fewer than four time nodes per chirp period, is refused.
    pub fn separable_source(
        &self,
        time_nodes: usize,
        space_nodes: usize,
    ) -> Result<SeparableSource, EstimatorError> {
        self.validate()?;
        if time_nodes < 4 {
            return Err(EstimatorError::UnderResolved(format!(
                "{time_nodes} time nodes across the forcing"
            )));
        }
        if space_nodes < 4 {
            return Err(EstimatorError::UnderResolved(format!(
                "{space_nodes} space nodes across a feature of width {}",
                self.feature_width()
            )));
        }
        let ds = self.duration() / time_nodes as f64;
        if self.family == Family::Oscillatory {
            // The chirp's angular frequency peaks at 4R²s = 4R² on (0, 1).
            let per_period = 2.0 * PI / (4.0 * self.param * self.param * ds);
            if per_period < 4.0 {
                return Err(EstimatorError::UnderResolved(format!(
                    "{per_period:.2} time nodes per chirp period"
                )));
            }
        }
        let times = (0..time_nodes)
            .map(|i| {
                let s = (i as f64 + 0.5) * ds;
                (s, self.time_factor(s) * ds)
            })
            .collect();

        let h = self.feature_width() / space_nodes as f64;
        let weight = Complex64::new(h.powi(self.n as i32), 0.0);
        let half = (self.support_radius() / h).ceil() as i64;
        let centre = |i: i64| (i as f64 + 0.5) * h;
        let mut nodes = Vec::new();
        if self.n == 1 {
            for i in -half..half {
                let y = [centre(i), 0.0];
                if self.in_support(y) {
                    nodes.push((y, weight));
                }
            }
        } else {
            for i in -half..half {
                for j in -half..half {
                    let y = [centre(i), centre(j)];
                    if self.in_support(y) {
                        nodes.push((y, weight));
                    }
                }
            }
        }
        if nodes.is_empty() {
            return Err(EstimatorError::UnderResolved("no space node in the support".into()));
        }
        Ok(SeparableSource { times, nodes })
    }
}

/// Samples the forcing on a space-time grid.
///
/// The grid must put at least four samples across the thinnest spatial
/// feature and across the time support.
pub fn make_forcing(
    spec: &CounterexampleSpec,
    grid: SpatialGrid,
    times: TimeGrid,
) -> Result<SpaceTimeField, EstimatorError> {
    spec.validate()?;
    if grid.dim() != spec.n {
        return Err(EstimatorError::InvalidParams(format!(
            "grid dimension {} for an n = {} forcing",
            grid.dim(),
            spec.n
        )));
    }
    let across = spec.feature_width() / grid.spacing();
    if across < 4.0 {
        return Err(EstimatorError::UnderResolved(format!(
            "{across:.2} grid points across a feature of width {}",
            spec.feature_width()
        )));
    }
    let in_time = spec.duration() / times.step;
    if in_time < 4.0 {
        return Err(EstimatorError::UnderResolved(format!(
            "{in_time:.2} time steps across the forcing"
        )));
    }
    let frames = times
        .times()
        .map(|s| Field::from_fn(grid, |y| spec.value(s, y)))
        .collect();
    Ok(SpaceTimeField::new(times, frames)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::{mixed_norm, MixedNormSpec};

    #[test]
    fn flash_norm_is_a_box_norm() {
        let eps = 0.25;
        let spec = CounterexampleSpec::new(Family::Flash, 1, eps, 0.125).unwrap();
        let grid = SpatialGrid::with_spacing(1, 256, 1.0 / 64.0).unwrap();
        let times = TimeGrid::new(0.5 / 256.0, 1.0 / 256.0, 32).unwrap();
        let f = make_forcing(&spec, grid, times).unwrap();
        let quad: Quad = "0,1/2;1/3,1/4".parse().unwrap();
        let dual = MixedNormSpec::time_outer(quad.qtrt.q.dual(), quad.qtrt.r.dual());
        let measured = mixed_norm(&f, dual, None, None);
        let expected = eps.powf(2.0 * (1.0 - 1.0 / 3.0)) * (2.0 * eps).powf(1.0 - 0.25);
        assert!((measured / expected - 1.0).abs() < 0.02, "{measured} vs {expected}");
        let boxed = CounterexampleSpec::box_norm(&quad, spec.duration(), spec.exact_area());
        assert!((boxed / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bump_norm_in_one_dimension() {
        let spec = CounterexampleSpec::new(Family::Bump, 1, 0.0, 0.125).unwrap();
        let quad: Quad = "0,0;1/5,2/5".parse().unwrap();
        let expected = 2f64.powf(1.0 - 0.4);
        assert!((CounterexampleSpec::box_norm(&quad, 1.0, spec.exact_area()) - expected).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_forcing_has_unit_modulus_on_its_support() {
        for r in [2.0, 8.0, 64.0] {
            let spec = CounterexampleSpec::new(Family::Oscillatory, 1, r, 1.0 / 16.0).unwrap();
            for s in [0.1, 0.5, 0.99] {
                assert!((spec.value(s, [0.0, 0.0]).norm() - 1.0).abs() < 1e-15);
                assert_eq!(spec.value(s, [1.0 / r, 0.0]).norm(), 0.0);
            }
        }
    }

    #[test]
    fn separable_nodes_cover_the_support() {
        let spec = CounterexampleSpec::new(Family::Focusing, 2, 0.125, 0.125).unwrap();
        let src = spec.separable_source(4, 8).unwrap();
        let area: f64 = src.nodes.iter().map(|(_, w)| w.re).sum();
        assert!((area / spec.exact_area() - 1.0).abs() < 0.03, "{area} vs {}", spec.exact_area());
        let t: f64 = src.times.iter().map(|(_, w)| w.re).sum();
        assert!((t - spec.duration()).abs() < 1e-15);
    }

    #[test]
    fn coarse_grids_are_refused() {
        let spec = CounterexampleSpec::new(Family::Flash, 1, 1.0 / 16.0, 0.125).unwrap();
        let grid = SpatialGrid::with_spacing(1, 64, 1.0 / 16.0).unwrap();
        let times = TimeGrid::new(0.0, 1e-4, 64).unwrap();
        assert!(matches!(
            make_forcing(&spec, grid, times),
            Err(EstimatorError::UnderResolved(_))
        ));
        assert!(matches!(spec.separable_source(3, 8), Err(EstimatorError::UnderResolved(_))));
        let osc = CounterexampleSpec::new(Family::Oscillatory, 1, 64.0, 1.0 / 16.0).unwrap();
        assert!(matches!(osc.separable_source(1000, 4), Err(EstimatorError::UnderResolved(_))));
    }

    #[test]
    fn parameters_are_validated() {
        assert!(CounterexampleSpec::new(Family::Flash, 1, 0.5, 0.125).is_err());
        assert!(CounterexampleSpec::new(Family::Oscillatory, 1, 0.5, 0.125).is_err());
        assert!(CounterexampleSpec::new(Family::Bump, 3, 0.0, 0.125).is_err());
        assert!("focusing".parse::<Family>().is_ok());
        assert!("wave".parse::<Family>().is_err());
    }
}
