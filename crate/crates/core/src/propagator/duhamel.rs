use num_complex::Complex64;

use super::{
    kernel_prefactor, propagate_kernel_to, Backend, Field, PropagatorError, SpaceTimeField,
    SpectralEngine,
};

fn check_grids(f: &SpaceTimeField) -> Result<(), PropagatorError> {
    if f.frames.windows(2).any(|w| w[0].grid != w[1].grid) {
        return Err(PropagatorError::GridMismatch);
    }
    Ok(())
}

/// `v(t_k) = Δt Σ_{j<k} U(t_k − t_j) F(t_j)`, so `v(t_0) = 0`.
///
/// The diagonal term `j = k` is left out, which keeps the kernel away from
/// its singularity at `t = s`.
pub fn duhamel_retarded(
    forcing: &SpaceTimeField,
    backend: Backend,
) -> Result<SpaceTimeField, PropagatorError> {
    check_grids(forcing)?;
    let dt = forcing.times.step;
    let grid = forcing.grid();
    let mut frames = Vec::with_capacity(forcing.frames.len());
    match backend {
        Backend::Spectral => {
            let engine = SpectralEngine::new(grid);
            // w_{k+1} = e^{−iΔt|ξ|²}(w_k + Δt F̂_k) in Fourier variables.
            let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
            for frame in &forcing.frames {
                let mut out = acc.clone();
                engine.to_space(&mut out);
                frames.push(Field { grid, values: out });
                let mut hat = frame.values.clone();
                engine.to_frequency(&mut hat);
                for (a, h) in acc.iter_mut().zip(&hat) {
                    *a += h * dt;
                }
                engine.phase(&mut acc, dt);
            }
        }
        Backend::Kernel => {
            for k in 0..forcing.frames.len() {
                let mut out = Field::zeros(grid);
                for j in 0..k {
                    let tau = forcing.times.time(k) - forcing.times.time(j);
                    let u = propagate_kernel_to(&forcing.frames[j], tau, &grid)?;
                    for (o, x) in out.values.iter_mut().zip(&u.values) {
                        *o += x * dt;
                    }
                }
                frames.push(out);
            }
        }
    }
    Ok(SpaceTimeField {
        times: forcing.times,
        frames,
    })
}

/// `v(t_k) = Δt Σ_{j>k} U(t_k − t_j) F(t_j)`, the advanced counterpart.
pub fn duhamel_advanced(
    forcing: &SpaceTimeField,
    backend: Backend,
) -> Result<SpaceTimeField, PropagatorError> {
    check_grids(forcing)?;
    let dt = forcing.times.step;
    let grid = forcing.grid();
    let len = forcing.frames.len();
    let mut frames = vec![Field::zeros(grid); len];
    match backend {
        Backend::Spectral => {
            let engine = SpectralEngine::new(grid);
            let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
            for k in (0..len).rev() {
                let mut out = acc.clone();
                engine.to_space(&mut out);
                frames[k].values = out;
                let mut hat = forcing.frames[k].values.clone();
                engine.to_frequency(&mut hat);
                for (a, h) in acc.iter_mut().zip(&hat) {
                    *a += h * dt;
                }
                engine.phase(&mut acc, -dt);
            }
        }
        Backend::Kernel => {
            for (k, frame) in frames.iter_mut().enumerate() {
                for j in k + 1..len {
                    let tau = forcing.times.time(k) - forcing.times.time(j);
                    let u = propagate_kernel_to(&forcing.frames[j], tau, &grid)?;
                    for (o, x) in frame.values.iter_mut().zip(&u.values) {
                        *o += x * dt;
                    }
                }
            }
        }
    }
    Ok(SpaceTimeField {
        times: forcing.times,
        frames,
    })
}

/// A forcing of product form `a(s) b(y)`, sampled at quadrature nodes.
///
/// Each entry of `times` is `(s, a(s)·ds)`, each entry of `nodes` is
/// `(y, b(y)·dy)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeparableSource {
    pub times: Vec<(f64, Complex64)>,
    pub nodes: Vec<([f64; 2], Complex64)>,
}

/// Free-space retarded sum `Σ_{s<t} Σ_y K(t − s, x − y) a(s) b(y)` at every
/// `(t, x)` of `out_times × out_points`, row-major in time.
pub fn retarded_kernel_sum(
    dim: usize,
    source: &SeparableSource,
    out_times: &[f64],
    out_points: &[[f64; 2]],
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); out_times.len() * out_points.len()];
    let mut spatial = vec![Complex64::new(0.0, 0.0); out_points.len()];
    for (ti, &t) in out_times.iter().enumerate() {
        let row = &mut out[ti * out_points.len()..(ti + 1) * out_points.len()];
        for &(s, a) in &source.times {
            if s >= t {
                continue;
            }
            let tau = t - s;
            let inv4t = 1.0 / (4.0 * tau);
            for (acc, x) in spatial.iter_mut().zip(out_points) {
                let mut sum = Complex64::new(0.0, 0.0);
                for (y, b) in &source.nodes {
                    let d2 = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2);
                    sum += b * Complex64::from_polar(1.0, d2 * inv4t);
                }
                *acc = sum;
            }
            let c = a * kernel_prefactor(dim, tau);
            for (r, v) in row.iter_mut().zip(&spatial) {
                *r += c * v;
            }
        }
    }
    out
}

/// The sources of a sampled space-time field, one node per nonzero sample.
pub fn kernel_sources(forcing: &SpaceTimeField) -> Vec<(f64, Vec<([f64; 2], Complex64)>)> {
    let grid = forcing.grid();
    let w = grid.cell_volume() * forcing.times.step;
    forcing
        .frames
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let nodes = grid
                .points()
                .zip(&f.values)
                .filter(|(_, v)| v.norm_sqr() > 0.0)
                .map(|(y, v)| (y, v * w))
                .collect();
            (forcing.times.time(k), nodes)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::{SpatialGrid, TimeGrid};
    use super::*;

    fn random_field(grid: SpatialGrid, times: TimeGrid, seed: u64) -> SpaceTimeField {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let frames = (0..times.len)
            .map(|_| {
                Field::from_fn(grid, |_| {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                })
            })
            .collect();
        SpaceTimeField::new(times, frames).unwrap()
    }

    #[test]
    fn zero_forcing_gives_zero() {
        let g = SpatialGrid::new(1, 32, 8.0).unwrap();
        let t = TimeGrid::new(0.0, 0.1, 5).unwrap();
        let v = duhamel_retarded(&SpaceTimeField::zeros(g, t), Backend::Spectral).unwrap();
        assert!(v.frames.iter().all(|f| f.sup_norm() == 0.0));
    }

    #[test]
    fn first_frame_is_zero_and_second_is_one_step() {
        let g = SpatialGrid::new(1, 32, 8.0).unwrap();
        let t = TimeGrid::new(0.0, 0.25, 3).unwrap();
        let f = random_field(g, t, 1);
        let v = duhamel_retarded(&f, Backend::Spectral).unwrap();
        assert_eq!(v.frames[0].sup_norm(), 0.0);
        let mut expected = SpectralEngine::new(g).propagate(&f.frames[0], 0.25);
        expected.scale(Complex64::new(0.25, 0.0));
        assert!(v.frames[1].relative_l2_distance(&expected) < 1e-12);
    }

    #[test]
    fn advanced_is_the_mirror_of_retarded() {
        // With R the retarded and A the advanced operator,
        // A F = conj-reverse of R applied to conj-reverse of F.
        let g = SpatialGrid::new(1, 16, 6.0).unwrap();
        let t = TimeGrid::new(0.0, 0.2, 6).unwrap();
        let f = random_field(g, t, 2);
        let a = duhamel_advanced(&f, Backend::Spectral).unwrap();
        let r = duhamel_retarded(&f.conj_reversed(), Backend::Spectral)
            .unwrap()
            .conj_reversed();
        for (x, y) in a.frames.iter().zip(&r.frames) {
            for (p, q) in x.values.iter().zip(&y.values) {
                assert!((p - q).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn separable_sum_matches_field_kernel_duhamel() {
        let g = SpatialGrid::new(1, 16, 4.0).unwrap();
        let t = TimeGrid::new(0.0, 0.5, 4).unwrap();
        let f = random_field(g, t, 3);
        let v = duhamel_retarded(&f, Backend::Kernel).unwrap();
        let points: Vec<[f64; 2]> = g.points().collect();
        let times: Vec<f64> = t.times().collect();
        let mut direct = vec![Complex64::new(0.0, 0.0); times.len() * points.len()];
        for (s, nodes) in kernel_sources(&f) {
            let src = SeparableSource {
                times: vec![(s, Complex64::new(1.0, 0.0))],
                nodes,
            };
            for (d, x) in direct
                .iter_mut()
                .zip(retarded_kernel_sum(1, &src, &times, &points))
            {
                *d += x;
            }
        }
        for (k, frame) in v.frames.iter().enumerate() {
            for (i, z) in frame.values.iter().enumerate() {
                assert!((z - direct[k * points.len() + i]).norm() < 1e-10);
            }
        }
    }
}
