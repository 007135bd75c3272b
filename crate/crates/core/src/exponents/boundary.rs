//! Boundary export for the planar regions: grid scan plus exact convex hull.

use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::regions::{
    gap_region, is_acceptable, is_sharp_admissible, satisfies_local, schrodinger_local_necessary,
    GapRegion,
};
use super::{rat, ExponentError, Pair, Quad, Rational, Recip, Sigma};

/// A planar region that can be exported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionTag {
    /// Sharp admissible pairs in the `(1/q, 1/r)` plane.
    Sharp,
    /// Acceptable pairs in the `(1/q, 1/r)` plane.
    Acceptable,
    /// Projection of the local region to the `(1/r, 1/r̃)` plane.
    LocalRr,
    /// The local region at `σ = n/2`, projected to `(1/r, 1/r̃)`.
    SchrodingerSuffRr,
    /// The necessary local Schrödinger conditions, projected to `(1/r, 1/r̃)`.
    SchrodingerNecRr,
    GapR1,
    GapR2,
    GapR3,
    GapR4,
}

impl RegionTag {
    pub const ALL: [RegionTag; 9] = [
        RegionTag::Sharp,
        RegionTag::Acceptable,
        RegionTag::LocalRr,
        RegionTag::SchrodingerSuffRr,
        RegionTag::SchrodingerNecRr,
        RegionTag::GapR1,
        RegionTag::GapR2,
        RegionTag::GapR3,
        RegionTag::GapR4,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            RegionTag::Sharp => "sharp",
            RegionTag::Acceptable => "acceptable",
            RegionTag::LocalRr => "local-rr",
            RegionTag::SchrodingerSuffRr => "schrodinger-suff-rr",
            RegionTag::SchrodingerNecRr => "schrodinger-nec-rr",
            RegionTag::GapR1 => "gap-r1",
            RegionTag::GapR2 => "gap-r2",
            RegionTag::GapR3 => "gap-r3",
            RegionTag::GapR4 => "gap-r4",
        }
    }

    /// Whether the region is parametrised by `σ` (otherwise by the dimension `n`).
    pub fn takes_sigma(self) -> bool {
        matches!(
            self,
            RegionTag::Sharp | RegionTag::Acceptable | RegionTag::LocalRr
        )
    }

    /// Axis labels of the plane the region lives in.
    pub fn axes(self) -> (&'static str, &'static str) {
        match self {
            RegionTag::Sharp | RegionTag::Acceptable => ("1/q", "1/r"),
            _ => ("1/r", "1/rt"),
        }
    }
}

impl FromStr for RegionTag {
    type Err = ExponentError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RegionTag::ALL
            .into_iter()
            .find(|t| t.tag() == s)
            .ok_or_else(|| ExponentError::UnknownRegion(s.to_owned()))
    }
}

/// The parameter a region depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionParam {
    Sigma(Sigma),
    Dim(u32),
}

/// Vertices of the convex hull of the grid points inside a region, in
/// counter-clockwise order starting from the lexicographically smallest.
///
/// A segment has two vertices, a single point one, an empty scan none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyline {
    pub region: RegionTag,
    pub vertices: Vec<(Rational, Rational)>,
}

impl Polyline {
    /// CSV with header `x,y`, values to 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for (x, y) in &self.vertices {
            let _ = writeln!(out, "{},{}", decimal(x), decimal(y));
        }
        out
    }

    /// JSON array of vertices, each `[[xn, xd], [yn, yd]]`.
    pub fn to_exact_json(&self) -> serde_json::Value {
        let frac = |v: &Rational| serde_json::json!([v.numer(), v.denom()]);
        serde_json::Value::Array(
            self.vertices
                .iter()
                .map(|(x, y)| serde_json::json!([frac(x), frac(y)]))
                .collect(),
        )
    }
}

fn decimal(v: &Rational) -> String {
    let f = *v.numer() as f64 / *v.denom() as f64;
    if f == 0.0 {
        return "0".to_owned();
    }
    // `{:.11e}` gives 12 significant digits; reparse to drop trailing zeros.
    let parsed: f64 = format!("{f:.11e}").parse().unwrap_or(f);
    parsed.to_string()
}

/// Scans the grid `{k/resolution}²` for members of `region` and returns the
/// convex hull of the members found.
pub fn export_region_boundary(
    region: RegionTag,
    param: RegionParam,
    resolution: u32,
) -> Result<Polyline, ExponentError> {
    if resolution < 2 {
        return Err(ExponentError::Resolution(resolution));
    }
    let member = membership(region, param)?;
    let d = resolution as i128;
    let mut points = Vec::new();
    for i in 0..=d {
        for j in 0..=d {
            let (x, y) = (rat(i, d), rat(j, d));
            if member(x, y) {
                points.push((x, y));
            }
        }
    }
    Ok(Polyline {
        region,
        vertices: convex_hull(points),
    })
}

type Membership = Box<dyn Fn(Rational, Rational) -> bool>;

fn recip(v: Rational) -> Recip {
    Recip::new(v).expect("grid values lie in [0, 1]")
}

fn membership(region: RegionTag, param: RegionParam) -> Result<Membership, ExponentError> {
    let sigma = match (region.takes_sigma(), param) {
        (true, RegionParam::Sigma(s)) => Some(s),
        (false, RegionParam::Dim(_)) => None,
        (true, _) => return Err(ExponentError::WrongParam(region.tag(), "sigma")),
        (false, _) => return Err(ExponentError::WrongParam(region.tag(), "dimension")),
    };
    let n = match param {
        RegionParam::Dim(n) => n,
        RegionParam::Sigma(_) => 0,
    };
    // The q-conditions of the local regions only bound 1/q from below, so the
    // projection to the (1/r, 1/r̃) plane is the slice at 1/q = 1/q̃ = 1.
    let slice = |r: Rational, rt: Rational| {
        Quad::new(
            Pair::new(recip(Rational::one()), recip(r)),
            Pair::new(recip(Rational::one()), recip(rt)),
        )
    };
    let gap = |target: GapRegion| -> Membership {
        Box::new(move |r, rt| gap_region(recip(r), recip(rt), n) == target)
    };
    Ok(match region {
        RegionTag::Sharp => {
            let s = sigma.unwrap();
            Box::new(move |q, r| is_sharp_admissible(Pair::new(recip(q), recip(r)), s))
        }
        RegionTag::Acceptable => {
            let s = sigma.unwrap();
            Box::new(move |q, r| is_acceptable(Pair::new(recip(q), recip(r)), s))
        }
        RegionTag::LocalRr => {
            let s = sigma.unwrap();
            Box::new(move |r, rt| satisfies_local(slice(r, rt), s).member)
        }
        RegionTag::SchrodingerSuffRr => {
            let s = Sigma::schrodinger(n);
            Box::new(move |r, rt| satisfies_local(slice(r, rt), s).member)
        }
        RegionTag::SchrodingerNecRr => {
            Box::new(move |r, rt| schrodinger_local_necessary(slice(r, rt), n).member)
        }
        RegionTag::GapR1 => gap(GapRegion::R1),
        RegionTag::GapR2 => gap(GapRegion::R2),
        RegionTag::GapR3 => gap(GapRegion::R3),
        RegionTag::GapR4 => gap(GapRegion::R4),
    })
}

fn cross(o: (Rational, Rational), a: (Rational, Rational), b: (Rational, Rational)) -> Rational {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain, dropping collinear points.
fn convex_hull(mut points: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    points.sort();
    points.dedup();
    if points.len() <= 2 {
        return points;
    }
    let mut hull: Vec<(Rational, Rational)> = Vec::with_capacity(2 * points.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(Rational, Rational)>> = if pass == 0 {
            Box::new(points.iter())
        } else {
            Box::new(points.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= Rational::zero()
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i128, d: i128) -> RegionParam {
        RegionParam::Sigma(Sigma::new(rat(n, d)).unwrap())
    }

    #[test]
    fn sharp_line_is_a_segment() {
        let p = export_region_boundary(RegionTag::Sharp, s(3, 2), 6).unwrap();
        assert_eq!(
            p.vertices,
            vec![(rat(0, 1), rat(1, 2)), (rat(1, 2), rat(1, 6))]
        );
    }

    #[test]
    fn local_rr_quadrilateral() {
        let p = export_region_boundary(RegionTag::LocalRr, s(3, 2), 12).unwrap();
        assert_eq!(
            p.vertices,
            vec![
                (rat(0, 1), rat(0, 1)),
                (rat(1, 2), rat(1, 6)),
                (rat(1, 2), rat(1, 2)),
                (rat(1, 6), rat(1, 2)),
            ]
        );
    }

    #[test]
    fn acceptable_triangle_contains_vertex() {
        let p = export_region_boundary(RegionTag::Acceptable, s(1, 1), 12).unwrap();
        assert!(p.vertices.contains(&(rat(0, 1), rat(1, 2))));
        assert!(p.vertices.contains(&(rat(0, 1), rat(0, 1))));
    }

    #[test]
    fn wrong_parameter_kind_is_rejected() {
        assert!(export_region_boundary(RegionTag::GapR1, s(1, 1), 8).is_err());
        assert!(export_region_boundary(RegionTag::Sharp, RegionParam::Dim(3), 8).is_err());
        assert!(export_region_boundary(RegionTag::Sharp, s(1, 1), 1).is_err());
        assert!("figure-9".parse::<RegionTag>().is_err());
    }

    #[test]
    fn csv_and_json_render() {
        let p = export_region_boundary(RegionTag::Sharp, s(3, 2), 6).unwrap();
        let csv = p.to_csv();
        assert_eq!(csv, "x,y\n0,0.5\n0.5,0.166666666667\n");
        let json = p.to_exact_json();
        assert_eq!(json[1][1], serde_json::json!([1, 6]));
    }

    #[test]
    fn hull_of_collinear_points() {
        let pts = (0..5).map(|k| (rat(k, 4), rat(k, 4))).collect();
        assert_eq!(
            convex_hull(pts),
            vec![(rat(0, 1), rat(0, 1)), (rat(1, 1), rat(1, 1))]
        );
    }
}
