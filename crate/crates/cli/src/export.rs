use std::fmt::Write as _;

use clap::{Args, Subcommand};
use num_complex::Complex64;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use strichartz::atoms::{decompose as atomic_decompose, SampledFunction};
use strichartz::exponents::{
    export_region_boundary, parse_rational, RegionParam, RegionTag, Recip, Sigma,
};
use strichartz::whitney::{decompose, Coord, ScaleRange, Window, CSV_HEADER};

use crate::config::Settings;
use crate::error::CliError;
use crate::output::{out_dir, pretty, write_atomic};

fn coord(text: &str) -> Result<Coord, CliError> {
    let r = parse_rational(text)?;
    let (n, d) = (i64::try_from(*r.numer()), i64::try_from(*r.denom()));
    match (n, d) {
        (Ok(n), Ok(d)) => Ok(Coord::new(n, d)),
        _ => Err(CliError::parse(format!("coordinate `{text}` is too large"))),
    }
}

/// `lo,hi` for the square `[lo, hi)²`, or `s_lo,s_hi,t_lo,t_hi`.
pub fn parse_window(text: &str) -> Result<Window, CliError> {
    let parts: Vec<Coord> = text.split(',').map(coord).collect::<Result<_, _>>()?;
    Ok(match parts[..] {
        [lo, hi] => Window::square(lo, hi)?,
        [s_lo, s_hi, t_lo, t_hi] => Window::new(s_lo, s_hi, t_lo, t_hi)?,
        _ => return Err(CliError::parse(format!("window `{text}` needs 2 or 4 values"))),
    })
}

#[derive(Subcommand, Debug)]
pub enum WhitneyAction {
    /// Write the selected squares as CSV rows `k,i,j,s_lo,s_hi,t_lo,t_hi`.
    Export {
        #[arg(long, default_value = "0,8")]
        window: String,
        #[arg(long, default_value_t = -4, allow_hyphen_values = true)]
        kmin: i32,
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        kmax: i32,
    },
}

pub fn run_whitney(action: &WhitneyAction, settings: &Settings) -> Result<bool, CliError> {
    let WhitneyAction::Export { window, kmin, kmax } = action;
    let w = parse_window(window)?;
    let squares = decompose(&w, ScaleRange::new(*kmin, *kmax)?);
    let mut csv = format!("{CSV_HEADER}\n");
    for q in &squares {
        if settings.exact {
            let (s0, s1) = q.s_interval();
            let (t0, t1) = q.t_interval();
            let _ = writeln!(csv, "{},{},{},{s0},{s1},{t0},{t1}", q.k, q.i, q.j);
        } else {
            let _ = writeln!(csv, "{}", q.csv_row());
        }
    }
    let path = write_atomic(&out_dir(settings), "whitney.csv", &csv)?;
    println!("{} squares written to {}", squares.len(), path.display());
    Ok(true)
}

#[derive(Subcommand, Debug)]
pub enum AtomsAction {
    /// Decompose a seeded random function and report every atom.
    Demo {
        /// Number of samples.
        #[arg(long, default_value_t = 64)]
        len: usize,
        /// Reciprocal exponent `1/p`, in `(0, 1]`.
        #[arg(long, default_value = "1/2")]
        p: Recip,
        /// Measure carried by each sample.
        #[arg(long, default_value = "1")]
        weight: String,
    },
}

pub fn run_atoms(action: &AtomsAction, settings: &Settings) -> Result<bool, CliError> {
    let AtomsAction::Demo { len, p, weight } = action;
    let weight: Ratio<i64> = coord(weight)?;
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let values: Vec<Complex64> = (0..*len)
        .map(|_| {
            let scale = 10f64.powf(rng.gen_range(-2.0..2.0));
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale
        })
        .collect();
    let f = SampledFunction::from_scalars(&values, weight)?;
    let d = atomic_decompose(&f, *p)?;
    let rebuilt = d.reconstruct();
    let error = f
        .samples()
        .iter()
        .zip(&rebuilt)
        .flat_map(|(s, r)| s.payload.iter().zip(r).map(|(a, b)| (a - b).norm()))
        .fold(0.0_f64, f64::max);
    let atoms: Vec<_> = d
        .atoms
        .iter()
        .map(|(k, atom)| {
            json!({
                "k": k,
                "coefficient": d.coeffs[k],
                "support_len": atom.support.len(),
                "measure": atom.measure().to_string(),
                "sup": atom.sup(),
                "sup_bound": atom.size().powf(-p.to_f64()),
            })
        })
        .collect();
    let report = json!({
        "p": p,
        "len": len,
        "weight": weight.to_string(),
        "seed": settings.seed,
        "norm_f": f.lp_norm(*p),
        "coefficient_norm": d.coefficient_norm(),
        "reconstruction_error": error,
        "atoms": atoms,
    });
    let text = pretty(&report);
    write_atomic(&out_dir(settings), "atoms-demo.json", &text)?;
    print!("{text}");
    Ok(true)
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    /// 1: sharp and acceptable pairs; 2: the `(1/r, 1/r̃)` region; 4: Schrödinger conditions and gaps.
    #[arg(value_parser = ["1", "2", "4"])]
    pub figure: String,
    /// `σ` for figures 1 and 2.
    #[arg(long, default_value = "3/2")]
    pub sigma: Sigma,
    /// Dimension for figure 4.
    #[arg(long, default_value_t = 3)]
    pub n: u32,
    /// Grid denominator of the boundary scan.
    #[arg(long, default_value_t = 48)]
    pub resolution: u32,
}

pub fn run_figure(args: &FigureArgs, settings: &Settings) -> Result<bool, CliError> {
    let (regions, param): (&[RegionTag], RegionParam) = match args.figure.as_str() {
        "1" => (&[RegionTag::Sharp, RegionTag::Acceptable], RegionParam::Sigma(args.sigma)),
        "2" => (&[RegionTag::LocalRr], RegionParam::Sigma(args.sigma)),
        _ => (
            &[
                RegionTag::SchrodingerSuffRr,
                RegionTag::SchrodingerNecRr,
                RegionTag::GapR1,
                RegionTag::GapR2,
                RegionTag::GapR3,
                RegionTag::GapR4,
            ],
            RegionParam::Dim(args.n),
        ),
    };
    let dir = out_dir(settings);
    for &region in regions {
        let poly = export_region_boundary(region, param, args.resolution)?;
        let stem = format!("figure{}-{}", args.figure, region.tag());
        let path = write_atomic(&dir, &format!("{stem}.csv"), &poly.to_csv())?;
        println!("{}: {} vertices -> {}", region.tag(), poly.vertices.len(), path.display());
        if settings.exact {
            let (x, y) = region.axes();
            let exact = json!({ "region": region.tag(), "axes": [x, y], "vertices": poly.to_exact_json() });
            write_atomic(&dir, &format!("{stem}.json"), &pretty(&exact))?;
        }
    }
    Ok(true)
}
