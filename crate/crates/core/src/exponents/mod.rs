//! Exact exponent-region engine.
//!
//! Every Lebesgue exponent is stored through its reciprocal, so `q = ∞` is the
//! ordinary rational `0` and every region condition is an affine inequality in
//! the stored values. Nothing in this module touches floating point.

mod boundary;
mod oracle;
mod regions;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

pub use boundary::{export_region_boundary, Polyline, RegionParam, RegionTag};
pub use oracle::local_region_oracle;
pub use regions::{
    acceptable_verdict, beta, gap_region, is_acceptable, is_sharp_admissible, satisfies_global,
    satisfies_local, schrodinger_global_necessary, schrodinger_local_necessary,
    schrodinger_local_sufficient, sharp_admissible_verdict, GapRegion,
};

/// Exact rational used throughout the region engine.
pub type Rational = Ratio<i128>;

/// Largest absolute numerator or denominator accepted when parsing.
///
/// Region formulas multiply at most four stored values, so this bound keeps
/// every intermediate product inside `i128`.
pub const PARSE_LIMIT: i128 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExponentError {
    #[error("reciprocal exponent {0} is outside [0, 1]")]
    OutOfRange(Rational),
    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(Rational),
    #[error("cannot parse rational `{0}`")]
    Parse(String),
    #[error("rational `{0}` exceeds the supported magnitude")]
    TooLarge(String),
    #[error("expected {expected} comma-separated values, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("unknown region tag `{0}`")]
    UnknownRegion(String),
    #[error("resolution must be at least 2, got {0}")]
    Resolution(u32),
    #[error("region `{0}` needs a {1} parameter")]
    WrongParam(&'static str, &'static str),
}

/// Shorthand constructor for exact rationals.
pub fn rat(numer: i128, denom: i128) -> Rational {
    Rational::new(numer, denom)
}

/// Compares `Σ a·b` over `lhs` with the same sum over `rhs`, exactly.
///
/// The difference is accumulated over an unreduced common denominator, which
/// avoids a gcd per operation; an overflowing product falls back to reduced
/// arithmetic.
pub(crate) fn cmp_sums(lhs: &[(Rational, Rational)], rhs: &[(Rational, Rational)]) -> Ordering {
    let terms = lhs.iter().map(|t| (t, 1)).chain(rhs.iter().map(|t| (t, -1)));
    let mut acc: Option<(i128, i128)> = Some((0, 1));
    for ((a, b), sign) in terms {
        acc = acc.and_then(|(n, d)| {
            let tn = a.numer().checked_mul(*b.numer())?.checked_mul(sign)?;
            let td = a.denom().checked_mul(*b.denom())?;
            let n = n.checked_mul(td)?.checked_add(tn.checked_mul(d)?)?;
            Some((n, d.checked_mul(td)?))
        });
        if acc.is_none() {
            break;
        }
    }
    match acc {
        // Reduced denominators are positive, so the sign sits in the numerator.
        Some((n, _)) => n.cmp(&0),
        None => {
            let sum = |ts: &[(Rational, Rational)]| {
                ts.iter().fold(Rational::zero(), |s, (a, b)| s + a * b)
            };
            sum(lhs).cmp(&sum(rhs))
        }
    }
}

/// Parses `p/q`, `p`, or `inf` (which maps to `0`, the reciprocal of infinity).
pub fn parse_rational(text: &str) -> Result<Rational, ExponentError> {
    let text = text.trim();
    if text.eq_ignore_ascii_case("inf") || text == "∞" {
        return Ok(Rational::zero());
    }
    let (numer, denom) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text, "1"),
    };
    let numer: i128 = numer
        .parse()
        .map_err(|_| ExponentError::Parse(text.to_owned()))?;
    let denom: i128 = denom
        .parse()
        .map_err(|_| ExponentError::Parse(text.to_owned()))?;
    if denom == 0 {
        return Err(ExponentError::Parse(text.to_owned()));
    }
    if numer.abs() > PARSE_LIMIT || denom.abs() > PARSE_LIMIT {
        return Err(ExponentError::TooLarge(text.to_owned()));
    }
    Ok(Rational::new(numer, denom))
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// A reciprocal exponent `1/q ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Recip(Rational);

impl Recip {
    pub fn new(value: Rational) -> Result<Self, ExponentError> {
        if value.is_negative() || value > Rational::one() {
            return Err(ExponentError::OutOfRange(value));
        }
        Ok(Recip(value))
    }

    /// `1/q` for an integer exponent `q ≥ 1`.
    pub fn of_exponent(q: i128) -> Result<Self, ExponentError> {
        if q < 1 {
            return Err(ExponentError::OutOfRange(Rational::from_integer(q)));
        }
        Self::new(Rational::new(1, q))
    }

    pub fn infinity() -> Self {
        Recip(Rational::zero())
    }

    pub fn half() -> Self {
        Recip(rat(1, 2))
    }

    pub fn value(self) -> Rational {
        self.0
    }

    /// The Hölder dual `1/q' = 1 − 1/q`.
    pub fn dual(self) -> Self {
        Recip(Rational::one() - self.0)
    }

    pub fn is_infinite_exponent(self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl fmt::Display for Recip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl FromStr for Recip {
    type Err = ExponentError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Recip::new(parse_rational(s)?)
    }
}

impl Serialize for Recip {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// The dispersion exponent `σ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sigma(Rational);

impl Sigma {
    pub fn new(value: Rational) -> Result<Self, ExponentError> {
        if !value.is_positive() {
            return Err(ExponentError::NonPositiveSigma(value));
        }
        Ok(Sigma(value))
    }

    /// `σ = n/2`, the Schrödinger value in dimension `n`.
    pub fn schrodinger(n: u32) -> Self {
        assert!(n >= 1, "spatial dimension must be at least 1");
        Sigma(rat(n as i128, 2))
    }

    pub fn value(self) -> Rational {
        self.0
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl FromStr for Sigma {
    type Err = ExponentError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Sigma::new(parse_rational(s)?)
    }
}

impl Serialize for Sigma {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// An exponent pair `(q, r)` stored as `(1/q, 1/r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Pair {
    pub q: Recip,
    pub r: Recip,
}

impl Pair {
    pub fn new(q: Recip, r: Recip) -> Self {
        Pair { q, r }
    }

    pub fn from_rationals(q: Rational, r: Rational) -> Result<Self, ExponentError> {
        Ok(Pair::new(Recip::new(q)?, Recip::new(r)?))
    }
}

impl FromStr for Pair {
    type Err = ExponentError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = split_list(s, 2)?;
        Ok(Pair::new(parts[0].parse()?, parts[1].parse()?))
    }
}

/// The quadruple `(1/q, 1/r; 1/q̃, 1/r̃)`.
///
/// `qr` is the exponent pair measuring the solution, `qtrt` the pair whose
/// dual measures the forcing term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Quad {
    pub qr: Pair,
    pub qtrt: Pair,
}

impl Quad {
    pub fn new(qr: Pair, qtrt: Pair) -> Self {
        Quad { qr, qtrt }
    }

    pub fn from_rationals(
        q: Rational,
        r: Rational,
        qt: Rational,
        rt: Rational,
    ) -> Result<Self, ExponentError> {
        Ok(Quad::new(
            Pair::from_rationals(q, r)?,
            Pair::from_rationals(qt, rt)?,
        ))
    }

    pub fn q(&self) -> Rational {
        self.qr.q.value()
    }
    pub fn r(&self) -> Rational {
        self.qr.r.value()
    }
    pub fn qt(&self) -> Rational {
        self.qtrt.q.value()
    }
    pub fn rt(&self) -> Rational {
        self.qtrt.r.value()
    }

    /// Exchanges the roles of `(q, r)` and `(q̃, r̃)`.
    pub fn swapped(&self) -> Quad {
        Quad::new(self.qtrt, self.qr)
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{};{},{})",
            self.qr.q, self.qr.r, self.qtrt.q, self.qtrt.r
        )
    }
}

impl FromStr for Quad {
    type Err = ExponentError;
    /// Accepts `a,b,c,d`, `a,b;c,d`, and the displayed form `(a,b;c,d)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s);
        let parts = split_list(s, 4)?;
        Ok(Quad::new(
            Pair::new(parts[0].parse()?, parts[1].parse()?),
            Pair::new(parts[2].parse()?, parts[3].parse()?),
        ))
    }
}

fn split_list(s: &str, expected: usize) -> Result<Vec<&str>, ExponentError> {
    let parts: Vec<&str> = s.split([',', ';']).map(str::trim).collect();
    if parts.len() != expected {
        return Err(ExponentError::Arity {
            expected,
            got: parts.len(),
        });
    }
    Ok(parts)
}

/// A named inequality of one of the regions, reported when it fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    QLeHalf,
    RLeHalf,
    SharpLine,
    ExcludedEndpoint,
    Acceptable,
    AcceptableQr,
    AcceptableQtRt,
    Scaling,
    RtLeHalf,
    RatioRRt,
    RatioRtR,
    QLower,
    QtLower,
    Sigma1RFinite,
    Sigma1RtFinite,
    QSumLeOne,
    RatioRRtStrict,
    RatioRtRStrict,
    SharpQLeR,
    SharpQtLeRt,
    RrSum,
    RrN,
    FocusingR,
    FocusingRt,
}

impl Condition {
    /// Stable identifier used in reports and on the command line.
    pub fn tag(self) -> &'static str {
        use Condition::*;
        match self {
            QLeHalf => "q-le-half",
            RLeHalf => "r-le-half",
            SharpLine => "sharp-line",
            ExcludedEndpoint => "excluded-(2,inf,1)",
            Acceptable => "acceptable",
            AcceptableQr => "acceptable-qr",
            AcceptableQtRt => "acceptable-qtrt",
            Scaling => "scaling",
            RtLeHalf => "rt-le-half",
            RatioRRt => "ratio-r-rt",
            RatioRtR => "ratio-rt-r",
            QLower => "q-lower",
            QtLower => "qt-lower",
            Sigma1RFinite => "sigma1-r-finite",
            Sigma1RtFinite => "sigma1-rt-finite",
            QSumLeOne => "q-sum-le-one",
            RatioRRtStrict => "ratio-r-rt-strict",
            RatioRtRStrict => "ratio-rt-r-strict",
            SharpQLeR => "sharp-q-le-r",
            SharpQtLeRt => "sharp-qt-le-rt",
            RrSum => "rr-sum",
            RrN => "rr-n",
            FocusingR => "focusing-r",
            FocusingRt => "focusing-rt",
        }
    }

    /// The condition obtained by exchanging `(q, r)` with `(q̃, r̃)`.
    pub fn mirrored(self) -> Condition {
        use Condition::*;
        match self {
            AcceptableQr => AcceptableQtRt,
            AcceptableQtRt => AcceptableQr,
            RLeHalf => RtLeHalf,
            RtLeHalf => RLeHalf,
            RatioRRt => RatioRtR,
            RatioRtR => RatioRRt,
            QLower => QtLower,
            QtLower => QLower,
            Sigma1RFinite => Sigma1RtFinite,
            Sigma1RtFinite => Sigma1RFinite,
            RatioRRtStrict => RatioRtRStrict,
            RatioRtRStrict => RatioRRtStrict,
            SharpQLeR => SharpQtLeRt,
            SharpQtLeRt => SharpQLeR,
            FocusingR => FocusingRt,
            FocusingRt => FocusingR,
            other => other,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for Condition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.tag())
    }
}

/// Which case of the global theorem decided membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    NonSharp,
    Sharp,
    NotApplicable,
}

/// Result of a region query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub member: bool,
    pub failed_conditions: Vec<Condition>,
    pub branch: Branch,
}

impl Verdict {
    pub(crate) fn from_failures(failed_conditions: Vec<Condition>, branch: Branch) -> Self {
        Verdict {
            member: failed_conditions.is_empty(),
            failed_conditions,
            branch,
        }
    }

    pub fn failed(&self, condition: Condition) -> bool {
        self.failed_conditions.contains(&condition)
    }

    pub fn tags(&self) -> Vec<&'static str> {
        self.failed_conditions.iter().map(|c| c.tag()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_inf_and_fractions() {
        assert_eq!(parse_rational("inf").unwrap(), Rational::zero());
        assert_eq!(parse_rational(" 3/6 ").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("2").unwrap(), rat(2, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(matches!(
            parse_rational("1/99999999999"),
            Err(ExponentError::TooLarge(_))
        ));
    }

    #[test]
    fn recip_range_is_enforced() {
        assert!(Recip::new(rat(3, 2)).is_err());
        assert!(Recip::new(rat(-1, 2)).is_err());
        assert_eq!("inf".parse::<Recip>().unwrap(), Recip::infinity());
        assert_eq!(Recip::of_exponent(4).unwrap().value(), rat(1, 4));
        assert_eq!(Recip::half().dual(), Recip::half());
    }

    #[test]
    fn quad_parsing_and_display() {
        let quad: Quad = "1/2,1/6,1/2,1/6".parse().unwrap();
        assert_eq!(quad.r(), rat(1, 6));
        assert_eq!(quad.to_string(), "(1/2,1/6;1/2,1/6)");
        assert!(matches!(
            "1/2,1/6".parse::<Quad>(),
            Err(ExponentError::Arity { expected: 4, got: 2 })
        ));
        assert!("0,0,0,inf".parse::<Quad>().is_ok());
    }

    #[test]
    fn sigma_must_be_positive() {
        assert!("0".parse::<Sigma>().is_err());
        assert_eq!(Sigma::schrodinger(3).value(), rat(3, 2));
    }

    #[test]
    fn condition_mirror_is_an_involution() {
        use Condition::*;
        for c in [
            QLeHalf, RLeHalf, SharpLine, ExcludedEndpoint, Acceptable, AcceptableQr,
            AcceptableQtRt, Scaling, RtLeHalf, RatioRRt, RatioRtR, QLower, QtLower,
            Sigma1RFinite, Sigma1RtFinite, QSumLeOne, RatioRRtStrict, RatioRtRStrict,
            SharpQLeR, SharpQtLeRt, RrSum, RrN, FocusingR, FocusingRt,
        ] {
            assert_eq!(c.mirrored().mirrored(), c);
        }
    }
}
