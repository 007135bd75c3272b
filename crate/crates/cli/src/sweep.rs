use clap::Args;
use strichartz::estimator::{sweep, Family};
use strichartz::exponents::{parse_rational, Pair, Quad, Recip};

use crate::config::Settings;
use crate::error::CliError;
use crate::output::{out_dir, pretty, write_atomic};

#[derive(Args, Debug)]
pub struct SweepArgs {
    pub family: Family,
    /// Reciprocals `1/q,1/r,1/q̃,1/r̃`; defaults to a quad where the family blows up.
    #[arg(long)]
    pub quad: Option<String>,
    /// Replaces `1/r` of the quad.
    #[arg(long)]
    pub r: Option<Recip>,
    /// Spatial dimension (1 or 2).
    #[arg(long)]
    pub n: Option<usize>,
    /// Flash and focusing ladder of `ε`.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<String>,
    /// Oscillatory ladder of `R`.
    #[arg(long = "R", value_delimiter = ',')]
    pub big_r: Vec<String>,
    /// Bump ladder of output times `t`.
    #[arg(long, value_delimiter = ',')]
    pub t: Vec<String>,
}

fn default_quad(family: Family) -> &'static str {
    match family {
        Family::Flash => "0,1/2,0,0",
        Family::Bump => "0,0,0,0",
        Family::Focusing => "0,1/4,1/4,0",
        Family::Oscillatory => "1/2,0,0,1",
    }
}

fn default_n(family: Family) -> usize {
    match family {
        Family::Focusing => 2,
        _ => 1,
    }
}

fn default_ladder(family: Family) -> Vec<f64> {
    match family {
        Family::Flash | Family::Focusing => (2..=6).map(|k| 0.5f64.powi(k)).collect(),
        Family::Bump => (2..=6).map(|k| 2f64.powi(k)).collect(),
        Family::Oscillatory => (3..=6).map(|k| 2f64.powi(k)).collect(),
    }
}

fn parse_param(text: &str) -> Result<f64, CliError> {
    if let Ok(r) = parse_rational(text) {
        return Ok(*r.numer() as f64 / *r.denom() as f64);
    }
    text.trim()
        .parse::<f64>()
        .map_err(|_| CliError::parse(format!("cannot parse parameter `{text}`")))
}

fn ladder(args: &SweepArgs) -> Result<Vec<f64>, CliError> {
    let (own, flag) = match args.family {
        Family::Flash | Family::Focusing => (&args.eps, "--eps"),
        Family::Bump => (&args.t, "--t"),
        Family::Oscillatory => (&args.big_r, "--R"),
    };
    let given = [(&args.eps, "--eps"), (&args.t, "--t"), (&args.big_r, "--R")];
    if let Some((_, other)) = given.iter().find(|(v, f)| !v.is_empty() && *f != flag) {
        return Err(CliError::parse(format!(
            "{other} does not apply to the {} family; use {flag}",
            args.family
        )));
    }
    if own.is_empty() {
        return Ok(default_ladder(args.family));
    }
    own.iter().map(|s| parse_param(s)).collect()
}

pub fn run(args: &SweepArgs, settings: &Settings) -> Result<bool, CliError> {
    let family = args.family;
    let mut quad: Quad = args
        .quad
        .as_deref()
        .unwrap_or(default_quad(family))
        .parse()?;
    if let Some(r) = args.r {
        quad = Quad::new(Pair::new(quad.qr.q, r), quad.qtrt);
    }
    let n = args.n.unwrap_or(default_n(family));
    let params = ladder(args)?;
    let cfg = settings.sweep_config(family)?;
    let report = sweep(family, &quad, n, &params, &cfg)?;
    let json = pretty(&report);
    let dir = out_dir(settings);
    write_atomic(&dir, &format!("sweep-{family}.json"), &json)?;
    write_atomic(&dir, &format!("sweep-{family}.csv"), &report.to_csv())?;
    print!("{json}");
    Ok(report.verdict)
}
