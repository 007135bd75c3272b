//! Dyadic Whitney decomposition of the half-plane `Ω = {(s, t) : s < t}`.
//!
//! A square `Q = I × J` at scale `λ = 2^k` with `I = [iλ, (i+1)λ)` and
//! `J = [jλ, (j+1)λ)` is selected when it is separated from the diagonal by
//! at least its own side (`j − i ≥ 2`) while its dyadic parent is not
//! (`⌊j/2⌋ − ⌊i/2⌋ ≤ 1`). Each point of `Ω` then lies in exactly one selected
//! square, and every selected square has `dist(I, J) ∈ {λ, 2λ}`.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};

use crate::exponents::Recip;

/// Exact coordinate in the `(s, t)` plane.
pub type Coord = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WhitneyError {
    #[error("empty scale range {k_min}..={k_max}")]
    EmptyScaleRange { k_min: i32, k_max: i32 },
    #[error("window bounds must satisfy lo < hi")]
    EmptyWindow,
    #[error("scale exponent {0} is outside the supported range")]
    ScaleOutOfRange(i32),
}

/// Largest |k| accepted for a scale `2^k`, so that `2^|k|` fits comfortably in `i64`.
pub const MAX_SCALE_EXPONENT: i32 = 40;

/// The side length `2^k` as an exact rational.
pub fn dyadic(k: i32) -> Coord {
    assert!(k.abs() <= MAX_SCALE_EXPONENT, "scale 2^{k} out of range");
    if k >= 0 {
        Coord::from_integer(1i64 << k)
    } else {
        Coord::new(1, 1i64 << (-k))
    }
}

/// Inclusive range of scale exponents `k_min ..= k_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleRange {
    k_min: i32,
    k_max: i32,
}

impl ScaleRange {
    pub fn new(k_min: i32, k_max: i32) -> Result<Self, WhitneyError> {
        if k_min > k_max {
            return Err(WhitneyError::EmptyScaleRange { k_min, k_max });
        }
        for k in [k_min, k_max] {
            if k.abs() > MAX_SCALE_EXPONENT {
                return Err(WhitneyError::ScaleOutOfRange(k));
            }
        }
        Ok(ScaleRange { k_min, k_max })
    }

    pub fn k_min(&self) -> i32 {
        self.k_min
    }

    pub fn k_max(&self) -> i32 {
        self.k_max
    }

    pub fn iter(&self) -> impl Iterator<Item = i32> {
        self.k_min..=self.k_max
    }
}

/// The square `[iλ, (i+1)λ) × [jλ, (j+1)λ)` with `λ = 2^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicSquare {
    pub k: i32,
    pub i: i64,
    pub j: i64,
}

impl DyadicSquare {
    pub fn side(&self) -> Coord {
        dyadic(self.k)
    }

    /// `I = [iλ, (i+1)λ)`.
    pub fn s_interval(&self) -> (Coord, Coord) {
        let l = self.side();
        (l * self.i, l * (self.i + 1))
    }

    /// `J = [jλ, (j+1)λ)`.
    pub fn t_interval(&self) -> (Coord, Coord) {
        let l = self.side();
        (l * self.j, l * (self.j + 1))
    }

    /// Gap between `I` and `J`, namely `(j − i − 1)λ`.
    pub fn distance(&self) -> Coord {
        self.side() * (self.j - self.i - 1)
    }

    pub fn contains(&self, s: Coord, t: Coord) -> bool {
        let (s0, s1) = self.s_interval();
        let (t0, t1) = self.t_interval();
        s0 <= s && s < s1 && t0 <= t && t < t1
    }

    /// The row `k,i,j,s_lo,s_hi,t_lo,t_hi` of the CSV export.
    pub fn csv_row(&self) -> String {
        let (s0, s1) = self.s_interval();
        let (t0, t1) = self.t_interval();
        format!(
            "{},{},{},{},{},{},{}",
            self.k,
            self.i,
            self.j,
            to_f64(s0),
            to_f64(s1),
            to_f64(t0),
            to_f64(t1)
        )
    }
}

impl fmt::Display for DyadicSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}·([{}, {}) × [{}, {}))", self.k, self.i, self.i + 1, self.j, self.j + 1)
    }
}

pub const CSV_HEADER: &str = "k,i,j,s_lo,s_hi,t_lo,t_hi";

fn to_f64(v: Coord) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// A finite rectangle `[s_lo, s_hi) × [t_lo, t_hi)` of the `(s, t)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub s_lo: Coord,
    pub s_hi: Coord,
    pub t_lo: Coord,
    pub t_hi: Coord,
}

impl Window {
    pub fn new(s_lo: Coord, s_hi: Coord, t_lo: Coord, t_hi: Coord) -> Result<Self, WhitneyError> {
        if s_lo >= s_hi || t_lo >= t_hi {
            return Err(WhitneyError::EmptyWindow);
        }
        Ok(Window {
            s_lo,
            s_hi,
            t_lo,
            t_hi,
        })
    }

    /// The square window `[lo, hi)²`.
    pub fn square(lo: Coord, hi: Coord) -> Result<Self, WhitneyError> {
        Window::new(lo, hi, lo, hi)
    }

    pub fn contains(&self, s: Coord, t: Coord) -> bool {
        self.s_lo <= s && s < self.s_hi && self.t_lo <= t && t < self.t_hi
    }
}

/// The selection rule: `j − i ≥ 2` and `⌊j/2⌋ − ⌊i/2⌋ ≤ 1`.
///
/// The rule does not depend on the scale.
pub fn select(_k: i32, i: i64, j: i64) -> bool {
    j - i >= 2 && Integer::div_floor(&j, &2) - Integer::div_floor(&i, &2) <= 1
}

/// All `j` with `select(k, i, j)`; always a subset of `{i + 2, i + 3}`.
pub fn partners(k: i32, i: i64) -> Vec<i64> {
    (i + 2..=i + 3).filter(|&j| select(k, i, j)).collect()
}

fn floor_div(x: Coord, l: Coord) -> i64 {
    (x / l).floor().to_integer()
}

fn ceil_div(x: Coord, l: Coord) -> i64 {
    (x / l).ceil().to_integer()
}

/// Selected squares meeting the window, ordered by scale, then `i`, then `j`.
pub fn decompose(w: &Window, scales: ScaleRange) -> Vec<DyadicSquare> {
    let mut out = Vec::new();
    for k in scales.iter() {
        let l = dyadic(k);
        let i_lo = floor_div(w.s_lo, l);
        let i_hi = ceil_div(w.s_hi, l);
        let j_lo = floor_div(w.t_lo, l);
        let j_hi = ceil_div(w.t_hi, l);
        for i in i_lo..i_hi {
            for j in partners(k, i) {
                if j >= j_lo && j < j_hi {
                    out.push(DyadicSquare { k, i, j });
                }
            }
        }
    }
    out
}

/// The selected square containing `(s, t)`, if its scale lies in `scales`.
///
/// Points with `s ≥ t`, and points whose diagonal distance is not resolved by
/// the scale range, return `None`.
pub fn locate(s: Coord, t: Coord, scales: ScaleRange) -> Option<DyadicSquare> {
    if s >= t {
        return None;
    }
    scales.iter().find_map(|k| {
        let l = dyadic(k);
        let (i, j) = (floor_div(s, l), floor_div(t, l));
        select(k, i, j).then_some(DyadicSquare { k, i, j })
    })
}

/// The scale at which `(s, t) ∈ Ω` is covered, searching without bounds.
///
/// Walking up from a scale finer than `t − s`, the index gap first becomes
/// at least 2 and the parent gap then drops to at most 1 at exactly one scale.
pub fn covering_scale(s: Coord, t: Coord) -> Option<i32> {
    if s >= t {
        return None;
    }
    let gap = t - s;
    // Start two octaves below the gap so that the index gap is at least 2.
    let mut k = 0;
    while dyadic(k) > gap / Coord::from_integer(4) {
        k -= 1;
    }
    while dyadic(k) * Coord::from_integer(4) <= gap {
        k += 1;
    }
    k -= 1;
    for _ in 0..8 {
        let l = dyadic(k);
        if select(k, floor_div(s, l), floor_div(t, l)) {
            return Some(k);
        }
        k += 1;
    }
    None
}

/// The two sides of the dyadic summation inequality for one scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumWitness {
    /// `Σ_{I×J selected} f_I g_J`.
    pub lhs: f64,
    /// `‖f‖_{ℓ^p̃} ‖g‖_{ℓ^p}`.
    pub rhs: f64,
    /// Bound on the number of partners of each interval.
    pub multiplicity: f64,
    /// Whether `1/p + 1/p̃ ≥ 1`.
    pub hypothesis: bool,
}

impl SumWitness {
    /// `lhs ≤ multiplicity · rhs`, up to rounding.
    pub fn holds(&self) -> bool {
        self.lhs <= self.multiplicity * self.rhs * (1.0 + 1e-12) + 1e-300
    }
}

/// `ℓ^p` norm with `p` given through its reciprocal (`0` means the sup norm).
pub fn lp_norm(values: &[f64], p: Recip) -> f64 {
    let inv = p.to_f64();
    if inv == 0.0 {
        return values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    }
    let e = 1.0 / inv;
    values.iter().map(|v| v.abs().powf(e)).sum::<f64>().powf(inv)
}

fn hypothesis(p: Recip, pt: Recip) -> bool {
    p.value() + pt.value() >= Ratio::one()
}

/// Evaluates both sides of the summation inequality at scale `2^k`.
///
/// `f_norms[i]` is the norm of `f` on `I_i`, `g_norms[j]` the norm of `g` on
/// `J_j`; indices outside the slices carry zero. Each `I` has at most two
/// partners, so under `1/p + 1/p̃ ≥ 1` the left side is at most twice the
/// right side.
pub fn sum_inequality(f_norms: &[f64], g_norms: &[f64], k: i32, p: Recip, pt: Recip) -> SumWitness {
    let mut lhs = 0.0;
    for (i, f) in f_norms.iter().enumerate() {
        for j in partners(k, i as i64) {
            if let Some(g) = g_norms.get(j as usize) {
                lhs += f * g;
            }
        }
    }
    SumWitness {
        lhs,
        rhs: lp_norm(f_norms, pt) * lp_norm(g_norms, p),
        multiplicity: 2.0,
        hypothesis: hypothesis(p, pt),
    }
}

/// Evaluates `Σ|A_n B_n|` against `‖A‖_{ℓ^p̃} ‖B‖_{ℓ^p}` (constant one).
pub fn holder_sequences(a: &[f64], b: &[f64], p: Recip, pt: Recip) -> SumWitness {
    let lhs = a.iter().zip(b).map(|(x, y)| (x * y).abs()).sum();
    SumWitness {
        lhs,
        rhs: lp_norm(a, pt) * lp_norm(b, p),
        multiplicity: 1.0,
        hypothesis: hypothesis(p, pt),
    }
}

/// Number of selected squares in `decompose` that contain the point.
pub fn coverage_multiplicity(squares: &[DyadicSquare], s: Coord, t: Coord) -> usize {
    squares.iter().filter(|q| q.contains(s, t)).count()
}

/// True when `t − s ≥ 4·2^{k_min}`, the part of `Ω` the scale range resolves
/// from below.
pub fn resolvable(s: Coord, t: Coord, scales: ScaleRange) -> bool {
    t - s >= dyadic(scales.k_min()) * Coord::from_integer(4)
}
