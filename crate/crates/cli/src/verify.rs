use clap::{Args, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use strichartz::atoms::{atom_norm_bound, decompose as atomic_decompose, SampledFunction};
use strichartz::estimator::{bilinear_form, whitney_sum_check};
use strichartz::exponents::{rat, Recip};
use strichartz::propagator::{
    dispersive_constant, duhamel_advanced, duhamel_retarded, gaussian_battery, propagate, Backend,
    Field, SpaceTimeField, SpatialGrid, TimeGrid,
};
use strichartz::whitney::{
    coverage_multiplicity, decompose, dyadic, resolvable, Coord, ScaleRange, Window,
};

use crate::config::Settings;
use crate::error::CliError;
use crate::export::parse_window;
use crate::output::{out_dir, pretty, write_atomic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Energy,
    Dispersion,
    Group,
    Whitney,
    Atoms,
    Duality,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Energy => "energy",
            Suite::Dispersion => "dispersion",
            Suite::Group => "group",
            Suite::Whitney => "whitney",
            Suite::Atoms => "atoms",
            Suite::Duality => "duality",
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub suite: Suite,
    /// Spatial dimension (1 or 2).
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Grid points per axis; each suite has its own default.
    #[arg(long = "N")]
    pub points: Option<usize>,
    /// Random instances per invariant.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Whitney window `lo,hi` (a square) or `s_lo,s_hi,t_lo,t_hi`.
    #[arg(long, default_value = "0,8")]
    pub window: String,
    #[arg(long, default_value_t = -4, allow_hyphen_values = true)]
    pub kmin: i32,
    #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
    pub kmax: i32,
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check {
        name: name.to_owned(),
        pass,
        detail,
    }
}

fn random_field(grid: SpatialGrid, rng: &mut ChaCha8Rng) -> Field {
    Field::from_fn(grid, |_| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn random_space_time(grid: SpatialGrid, times: TimeGrid, rng: &mut ChaCha8Rng) -> SpaceTimeField {
    SpaceTimeField::from_fn(grid, times, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn grid(args: &VerifyArgs, default_1d: usize, default_2d: usize, length: f64) -> Result<SpatialGrid, CliError> {
    let points = args
        .points
        .unwrap_or(if args.n == 1 { default_1d } else { default_2d });
    Ok(SpatialGrid::new(args.n, points, length)?)
}

fn energy(args: &VerifyArgs, rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let g = grid(args, 256, 32, 10.0)?;
    let mut worst: f64 = 0.0;
    for _ in 0..args.trials {
        let f = random_field(g, rng);
        let t = rng.gen_range(-100.0..100.0);
        let u = propagate(&f, t, Backend::Spectral)?;
        worst = worst.max((u.l2_norm() / f.l2_norm() - 1.0).abs());
    }
    Ok(vec![check(
        "l2-conservation",
        worst <= 1e-10,
        format!("max relative drift {worst:.2e} over {} fields", args.trials),
    )])
}

fn dispersion(args: &VerifyArgs) -> Result<Vec<Check>, CliError> {
    let points = args
        .points
        .unwrap_or(if args.n == 1 { 4096 } else { 1024 });
    let g = SpatialGrid::with_spacing(args.n, points, 0.25)?;
    let (start, samples, tol) = if args.n == 1 { (32.0, 16, 0.03) } else { (8.0, 8, 0.05) };
    let fit = dispersive_constant(
        Backend::Spectral,
        &gaussian_battery(g),
        g.horizon() / start,
        g.horizon(),
        samples,
    )?;
    let predicted = -(args.n as f64) / 2.0;
    let const_ref = (4.0 * std::f64::consts::PI).powf(predicted);
    Ok(vec![
        check(
            "decay-slope",
            (fit.slope - predicted).abs() <= tol,
            format!("fitted {:.4}, expected {predicted} ± {tol}", fit.slope),
        ),
        check(
            "decay-constant",
            fit.constant <= const_ref * 1.05,
            format!("sup t^(n/2)|U(t)f|/‖f‖₁ = {:.4}, free-space value {const_ref:.4}", fit.constant),
        ),
    ])
}

fn group(args: &VerifyArgs, rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let g = grid(args, 256, 32, 10.0)?;
    let (mut compose, mut inverse): (f64, f64) = (0.0, 0.0);
    for _ in 0..args.trials {
        let f = random_field(g, rng);
        let (t, s) = (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let ts = propagate(&propagate(&f, s, Backend::Spectral)?, t, Backend::Spectral)?;
        compose = compose.max(ts.relative_l2_distance(&propagate(&f, t + s, Backend::Spectral)?));
        let back = propagate(&propagate(&f, t, Backend::Spectral)?, -t, Backend::Spectral)?;
        inverse = inverse.max(back.relative_l2_distance(&f));
    }
    Ok(vec![
        check("composition", compose <= 1e-10, format!("max ‖U(t)U(s)f − U(t+s)f‖/‖f‖ {compose:.2e}")),
        check("inverse", inverse <= 1e-10, format!("max ‖U(−t)U(t)f − f‖/‖f‖ {inverse:.2e}")),
    ])
}

fn whitney(args: &VerifyArgs, rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let window: Window = parse_window(&args.window)?;
    let scales = ScaleRange::new(args.kmin, args.kmax)?;
    let squares = decompose(&window, scales);
    let bad_distance = squares
        .iter()
        .filter(|q| {
            let r = q.distance() / q.side();
            r != Coord::from_integer(1) && r != Coord::from_integer(2)
        })
        .count();
    // Cell centres at half the finest scale.
    let step = dyadic(args.kmin - 1);
    let Window { s_lo, s_hi, t_lo, t_hi } = window;
    let cells = |lo: Coord, hi: Coord| ((hi - lo) / step).ceil().to_integer();
    let (mut points, mut bad) = (0u64, 0u64);
    for a in 0..cells(s_lo, s_hi) {
        let s = s_lo + step * a + step / 2;
        for b in 0..cells(t_lo, t_hi) {
            let t = t_lo + step * b + step / 2;
            if !window.contains(s, t) || !resolvable(s, t, scales) {
                continue;
            }
            points += 1;
            bad += (coverage_multiplicity(&squares, s, t) != 1) as u64;
        }
    }
    let mut worst: f64 = 0.0;
    for _ in 0..args.trials {
        let g = SpatialGrid::new(1, 32, 8.0)?;
        let times = TimeGrid::new(0.0, 0.125, 8)?;
        let f = random_space_time(g, times, rng);
        let h = random_space_time(g, times, rng);
        let c = whitney_sum_check(&f, &h, ScaleRange::new(-1, 3)?, Backend::Spectral)?;
        worst = worst.max(c.relative_error());
    }
    Ok(vec![
        check(
            "coverage",
            bad == 0 && points > 0,
            format!("{} squares; {bad} of {points} resolvable raster points not covered exactly once", squares.len()),
        ),
        check(
            "distance",
            bad_distance == 0,
            format!("{bad_distance} squares with dist(I,J)/λ ∉ {{1,2}}"),
        ),
        check(
            "bilinear-split",
            worst <= 1e-10,
            format!("worst relative error {worst:.2e} over {} instances", args.trials),
        ),
    ])
}

fn atoms(args: &VerifyArgs, rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let ps = [rat(1, 1), rat(3, 4), rat(1, 2), rat(1, 4)].map(|r| Recip::new(r).expect("in range"));
    let (mut rebuild, mut lo, mut hi): (f64, f64, f64) = (0.0, f64::INFINITY, 0.0);
    let mut bad_atoms = 0usize;
    for _ in 0..args.trials {
        let len = rng.gen_range(1..300);
        let values: Vec<Complex64> = (0..len)
            .map(|_| {
                let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale
            })
            .collect();
        let weight = num_rational::Ratio::new(1, rng.gen_range(1..=16));
        let f = SampledFunction::from_scalars(&values, weight)?;
        for p in ps {
            let d = atomic_decompose(&f, p)?;
            for (s, r) in f.samples().iter().zip(d.reconstruct()) {
                for (a, b) in s.payload.iter().zip(&r) {
                    rebuild = rebuild.max((a - b).norm() / a.norm().max(f64::MIN_POSITIVE));
                }
            }
            for (k, atom) in &d.atoms {
                let sup_ok = atom.sup() <= atom.size().powf(-p.to_f64()) * (1.0 + 1e-12);
                let bounds_ok = [Recip::new(rat(1, 1)).expect("in range"), Recip::half(), Recip::infinity()]
                    .into_iter()
                    .all(|q| atom_norm_bound(atom, q).holds());
                bad_atoms += (atom.measure() > dyadic(*k) || !sup_ok || !bounds_ok) as usize;
            }
            let ratio = f.lp_norm(p) / d.coefficient_norm();
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    Ok(vec![
        check("reconstruction", rebuild <= 1e-14, format!("max relative error {rebuild:.1e}")),
        check("atom-bounds", bad_atoms == 0, format!("{bad_atoms} atoms violating support, sup or L^q bounds")),
        check(
            "norm-equivalence",
            lo >= 0.25 && hi <= 4.0,
            format!("‖f‖_p/‖a‖_ℓp ∈ [{lo:.3}, {hi:.3}]"),
        ),
    ])
}

fn duality(args: &VerifyArgs, rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let g = grid(args, 64, 16, 8.0)?;
    let times = TimeGrid::new(0.0, 0.1, 10)?;
    let (mut pairing, mut adjoint): (f64, f64) = (0.0, 0.0);
    for _ in 0..args.trials {
        let f = random_space_time(g, times, rng);
        let h = random_space_time(g, times, rng);
        let b = bilinear_form(&f, &h, Backend::Spectral)?;
        let p = duhamel_retarded(&f, Backend::Spectral)?.pairing(&h)?;
        pairing = pairing.max((b - p).norm() / p.norm());
        let a = f.pairing(&duhamel_advanced(&h, Backend::Spectral)?)?;
        adjoint = adjoint.max((b - a).norm() / b.norm());
    }
    Ok(vec![
        check("retarded-pairing", pairing <= 1e-10, format!("max |B(F,G) − ⟨RF,G⟩|/|⟨RF,G⟩| {pairing:.2e}")),
        check("advanced-adjoint", adjoint <= 1e-10, format!("max |⟨RF,G⟩ − ⟨F,AG⟩|/|B| {adjoint:.2e}")),
    ])
}

pub fn run(args: &VerifyArgs, settings: &Settings) -> Result<bool, CliError> {
    if !(1..=2).contains(&args.n) {
        return Err(CliError::parse("--n must be 1 or 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let checks = match args.suite {
        Suite::Energy => energy(args, &mut rng)?,
        Suite::Dispersion => dispersion(args)?,
        Suite::Group => group(args, &mut rng)?,
        Suite::Whitney => whitney(args, &mut rng)?,
        Suite::Atoms => atoms(args, &mut rng)?,
        Suite::Duality => duality(args, &mut rng)?,
    };
    for c in &checks {
        println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if settings.out.is_some() {
        let report = serde_json::json!({ "suite": args.suite.name(), "checks": checks });
        write_atomic(&out_dir(settings), &format!("verify-{}.json", args.suite.name()), &pretty(&report))?;
    }
    Ok(checks.iter().all(|c| c.pass))
}
