use num_complex::Complex64;

use super::EstimatorError;
use crate::propagator::{adjoint_propagate, Backend, Field, PropagatorError, SpaceTimeField};
use crate::whitney::{decompose, locate, Coord, ScaleRange, Window};

fn check_shared(f: &SpaceTimeField, g: &SpaceTimeField) -> Result<(), PropagatorError> {
    if f.times != g.times || f.grid() != g.grid() {
        return Err(PropagatorError::GridMismatch);
    }
    Ok(())
}

/// `U*(t_k) F_k` for every frame.
fn pulled_back(f: &SpaceTimeField, backend: Backend) -> Result<Vec<Field>, PropagatorError> {
    f.frames
        .iter()
        .enumerate()
        .map(|(k, frame)| adjoint_propagate(frame, f.times.time(k), backend))
        .collect()
}

fn add_into(acc: &mut [Complex64], f: &Field) {
    for (a, x) in acc.iter_mut().zip(&f.values) {
        *a += x;
    }
}

fn inner(a: &[Complex64], b: &[Complex64], weight: f64) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum::<Complex64>() * weight
}

/// `B(F, G) = Δt² Σ_{j<k} ⟨U*(s_j) F_j, U*(t_k) G_k⟩`, using prefix sums of
/// the pulled-back forcing.
pub fn bilinear_form(
    f: &SpaceTimeField,
    g: &SpaceTimeField,
    backend: Backend,
) -> Result<Complex64, PropagatorError> {
    check_shared(f, g)?;
    let pf = pulled_back(f, backend)?;
    let pg = pulled_back(g, backend)?;
    let grid = f.grid();
    let mut prefix = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut total = Complex64::new(0.0, 0.0);
    for (wf, wg) in pf.iter().zip(&pg) {
        total += inner(&prefix, &wg.values, grid.cell_volume());
        add_into(&mut prefix, wf);
    }
    let dt = f.times.step;
    Ok(total * dt * dt)
}

/// Both sides of the Whitney partition identity for `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhitneySumCheck {
    pub direct: Complex64,
    /// `Σ_Q B(χ_I F, χ_J G)` over the selected squares.
    pub decomposed: Complex64,
    /// Squares that contain at least one index pair.
    pub squares_used: usize,
}

impl WhitneySumCheck {
    pub fn relative_error(&self) -> f64 {
        let scale = self.direct.norm().max(f64::MIN_POSITIVE);
        (self.direct - self.decomposed).norm() / scale
    }
}

/// Splits `B(F, G)` over the Whitney squares of `[0, K)²` in index units,
/// where `K` is the number of time samples and sample `k` sits at coordinate `k`.
///
/// Every retarded pair `(j, k)` must lie in a square with scale in `scales`;
/// otherwise the first uncovered pair is reported.
pub fn whitney_sum_check(
    f: &SpaceTimeField,
    g: &SpaceTimeField,
    scales: ScaleRange,
    backend: Backend,
) -> Result<WhitneySumCheck, EstimatorError> {
    check_shared(f, g)?;
    let len = f.frames.len();
    for k in 0..len {
        for j in 0..k {
            if locate(Coord::from_integer(j as i64), Coord::from_integer(k as i64), scales).is_none()
            {
                return Err(EstimatorError::UncoveredPair { j, k });
            }
        }
    }
    let direct = bilinear_form(f, g, backend)?;
    let pf = pulled_back(f, backend)?;
    let pg = pulled_back(g, backend)?;
    let grid = f.grid();
    let window = Window::square(Coord::from_integer(0), Coord::from_integer(len as i64))?;
    // Integer indices inside the half-open interval [lo, hi).
    let indices = |(lo, hi): (Coord, Coord)| {
        let first = lo.ceil().to_integer().max(0);
        let last = (hi.ceil().to_integer()).min(len as i64);
        (first..last).map(|i| i as usize)
    };
    let mut decomposed = Complex64::new(0.0, 0.0);
    let mut squares_used = 0;
    for q in decompose(&window, scales) {
        let (is, js): (Vec<usize>, Vec<usize>) =
            (indices(q.s_interval()).collect(), indices(q.t_interval()).collect());
        if is.is_empty() || js.is_empty() {
            continue;
        }
        squares_used += 1;
        let mut a = vec![Complex64::new(0.0, 0.0); grid.len()];
        let mut b = vec![Complex64::new(0.0, 0.0); grid.len()];
        is.iter().for_each(|&j| add_into(&mut a, &pf[j]));
        js.iter().for_each(|&k| add_into(&mut b, &pg[k]));
        decomposed += inner(&a, &b, grid.cell_volume());
    }
    let dt = f.times.step;
    Ok(WhitneySumCheck {
        direct,
        decomposed: decomposed * dt * dt,
        squares_used,
    })
}
