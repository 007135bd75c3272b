use clap::{Args, ValueEnum};
use serde_json::{json, Value};
use strichartz::exponents::{
    acceptable_verdict, beta, format_rational, gap_region, local_region_oracle, satisfies_global,
    satisfies_local, schrodinger_global_necessary, schrodinger_local_necessary,
    sharp_admissible_verdict, GapRegion, Pair, Quad, Recip, Sigma, Verdict,
};

use crate::config::Settings;
use crate::error::CliError;
use crate::output::{out_dir, pretty, write_atomic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegionKind {
    Sharp,
    Acceptable,
    Local,
    Global,
    NecLocal,
    NecGlobal,
    Gap,
}

impl RegionKind {
    fn name(self) -> &'static str {
        match self {
            RegionKind::Sharp => "sharp",
            RegionKind::Acceptable => "acceptable",
            RegionKind::Local => "local",
            RegionKind::Global => "global",
            RegionKind::NecLocal => "nec-local",
            RegionKind::NecGlobal => "nec-global",
            RegionKind::Gap => "gap",
        }
    }
}

#[derive(Args, Debug)]
pub struct RegionArgs {
    pub kind: RegionKind,
    /// Reciprocals `1/q,1/r,1/q̃,1/r̃`, each `p/q` or `inf`.
    #[arg(long, allow_hyphen_values = true)]
    pub quad: Option<String>,
    /// Reciprocals `1/q,1/r` (sharp and acceptable).
    #[arg(long)]
    pub pair: Option<String>,
    #[arg(long)]
    pub sigma: Option<String>,
    /// Spatial dimension; sets `σ = n/2` when `--sigma` is absent.
    #[arg(long)]
    pub n: Option<u32>,
    /// `1/r` for the gap classification.
    #[arg(long)]
    pub r: Option<String>,
    /// `1/r̃` for the gap classification.
    #[arg(long)]
    pub rt: Option<String>,
}

fn require<'a>(value: &'a Option<String>, flag: &str, kind: RegionKind) -> Result<&'a str, CliError> {
    value
        .as_deref()
        .ok_or_else(|| CliError::parse(format!("region {} needs --{flag}", kind.name())))
}

fn dimension(args: &RegionArgs) -> Result<u32, CliError> {
    match args.n {
        Some(n) if n >= 1 => Ok(n),
        Some(_) => Err(CliError::parse("--n must be at least 1")),
        None => Err(CliError::parse(format!("region {} needs --n", args.kind.name()))),
    }
}

fn sigma(args: &RegionArgs) -> Result<Sigma, CliError> {
    match (&args.sigma, args.n) {
        (Some(s), _) => Ok(s.parse()?),
        (None, Some(_)) => Ok(Sigma::schrodinger(dimension(args)?)),
        (None, None) => Err(CliError::parse(format!(
            "region {} needs --sigma or --n",
            args.kind.name()
        ))),
    }
}

fn quad_json(x: &Quad) -> Value {
    json!([x.qr.q, x.qr.r, x.qtrt.q, x.qtrt.r])
}

fn verdict_json(v: &Verdict) -> Value {
    json!({
        "member": v.member,
        "failed_conditions": v.failed_conditions,
        "branch": v.branch,
    })
}

/// Evaluates the query; returns the report and whether the input is a member.
pub fn evaluate(args: &RegionArgs) -> Result<(Value, bool), CliError> {
    let kind = args.kind;
    let mut report = json!({ "region": kind.name() });
    let obj = report.as_object_mut().expect("object");
    let member = match kind {
        RegionKind::Sharp | RegionKind::Acceptable => {
            let p: Pair = require(&args.pair, "pair", kind)?.parse()?;
            let s = sigma(args)?;
            let v = if kind == RegionKind::Sharp {
                sharp_admissible_verdict(p, s)
            } else {
                acceptable_verdict(p, s)
            };
            obj.insert("pair".into(), json!([p.q, p.r]));
            obj.insert("sigma".into(), json!(s));
            obj.extend(verdict_json(&v).as_object().cloned().unwrap_or_default());
            v.member
        }
        RegionKind::Local | RegionKind::Global => {
            let x: Quad = require(&args.quad, "quad", kind)?.parse()?;
            let s = sigma(args)?;
            let v = if kind == RegionKind::Local {
                satisfies_local(x, s)
            } else {
                satisfies_global(x, s)
            };
            obj.insert("quad".into(), quad_json(&x));
            obj.insert("sigma".into(), json!(s));
            obj.insert("beta".into(), json!(format_rational(&beta(x, s))));
            obj.extend(verdict_json(&v).as_object().cloned().unwrap_or_default());
            if kind == RegionKind::Local {
                obj.insert("oracle".into(), json!(local_region_oracle(x, s)));
            }
            v.member
        }
        RegionKind::NecLocal | RegionKind::NecGlobal => {
            let x: Quad = require(&args.quad, "quad", kind)?.parse()?;
            let n = dimension(args)?;
            let v = if kind == RegionKind::NecLocal {
                schrodinger_local_necessary(x, n)
            } else {
                schrodinger_global_necessary(x, n)
            };
            obj.insert("quad".into(), quad_json(&x));
            obj.insert("n".into(), json!(n));
            obj.extend(verdict_json(&v).as_object().cloned().unwrap_or_default());
            v.member
        }
        RegionKind::Gap => {
            let r: Recip = require(&args.r, "r", kind)?.parse()?;
            let rt: Recip = require(&args.rt, "rt", kind)?.parse()?;
            let n = dimension(args)?;
            let class = gap_region(r, rt, n);
            obj.insert("r".into(), json!(r));
            obj.insert("rt".into(), json!(rt));
            obj.insert("n".into(), json!(n));
            obj.insert("class".into(), json!(class));
            let covered = class == GapRegion::Covered;
            obj.insert("member".into(), json!(covered));
            covered
        }
    };
    Ok((report, member))
}

pub fn run(args: &RegionArgs, settings: &Settings) -> Result<bool, CliError> {
    let (report, member) = evaluate(args)?;
    let text = pretty(&report);
    print!("{text}");
    if settings.out.is_some() {
        write_atomic(&out_dir(settings), &format!("region-{}.json", args.kind.name()), &text)?;
    }
    Ok(member || !settings.assert_member)
}
