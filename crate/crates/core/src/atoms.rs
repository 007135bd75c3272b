//! Dyadic atomic decomposition of sampled functions and the sequence toolkit
//! used to sum over scales.
//!
//! A function is a finite list of samples of equal measure `w`. Sorting the
//! samples by decreasing magnitude, the sample in sorted position `m` has
//! measure rank `(m + 1)w`; the band of scale `λ = 2^k` collects the samples
//! whose rank lies in `(λ/2, λ]`. Each band becomes one atom, normalised by
//! `a_λ = λ^{1/p} · max`, so its values are bounded by `λ^{−1/p}` and its
//! support has measure at most `λ/2`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive};

use crate::exponents::Recip;
use crate::whitney::dyadic;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AtomError {
    #[error("sample {0} has a non-finite value")]
    NonFinite(usize),
    #[error("sample weight must be positive")]
    NonPositiveWeight,
    #[error("sample {index} has payload length {got}, expected {expected}")]
    PayloadDim {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("the exponent p must be finite")]
    InfiniteExponent,
    #[error("argument must be positive")]
    NonPositive,
}

/// One sample: its norm in the target space and the vector it stands for.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub magnitude: f64,
    pub payload: Vec<Complex64>,
}

/// Samples of a vector-valued function, each carrying measure `weight`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    samples: Vec<Sample>,
    dim: usize,
    weight: Ratio<i64>,
}

impl SampledFunction {
    /// Builds a function whose samples are vectors; the magnitude of a
    /// sample is its Euclidean norm.
    pub fn from_vectors(values: Vec<Vec<Complex64>>, weight: Ratio<i64>) -> Result<Self, AtomError> {
        if !weight.is_positive() {
            return Err(AtomError::NonPositiveWeight);
        }
        let dim = values.first().map_or(1, Vec::len);
        let mut samples = Vec::with_capacity(values.len());
        for (index, payload) in values.into_iter().enumerate() {
            if payload.len() != dim {
                return Err(AtomError::PayloadDim {
                    index,
                    expected: dim,
                    got: payload.len(),
                });
            }
            let magnitude = payload.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !magnitude.is_finite() {
                return Err(AtomError::NonFinite(index));
            }
            samples.push(Sample { magnitude, payload });
        }
        Ok(SampledFunction {
            samples,
            dim,
            weight,
        })
    }

    pub fn from_scalars(values: &[Complex64], weight: Ratio<i64>) -> Result<Self, AtomError> {
        Self::from_vectors(values.iter().map(|&z| vec![z]).collect(), weight)
    }

    pub fn from_reals(values: &[f64], weight: Ratio<i64>) -> Result<Self, AtomError> {
        Self::from_vectors(
            values.iter().map(|&x| vec![Complex64::new(x, 0.0)]).collect(),
            weight,
        )
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn weight(&self) -> Ratio<i64> {
        self.weight
    }

    /// `‖f‖_p`; `p` is given through its reciprocal.
    pub fn lp_norm(&self, p: Recip) -> f64 {
        let w = ratio_f64(self.weight);
        let mags: Vec<f64> = self.samples.iter().map(|s| s.magnitude).collect();
        weighted_norm(&mags, w, p)
    }
}

fn ratio_f64(v: Ratio<i64>) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn weighted_norm(mags: &[f64], w: f64, p: Recip) -> f64 {
    let inv = p.to_f64();
    if inv == 0.0 {
        return mags.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    }
    let e = 1.0 / inv;
    (mags.iter().map(|v| v.abs().powf(e)).sum::<f64>() * w).powf(inv)
}

/// The normalised restriction of a function to one band.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub p: Recip,
    /// Scale exponent: the atom has size `λ = 2^k`.
    pub k: i32,
    /// Sample indices of the support, in decreasing magnitude.
    pub support: Vec<usize>,
    /// Payloads divided by the coefficient `a_λ`, aligned with `support`.
    pub values: Vec<Vec<Complex64>>,
    /// Magnitudes divided by `a_λ`, aligned with `support`.
    pub magnitudes: Vec<f64>,
    pub weight: Ratio<i64>,
}

impl Atom {
    pub fn size(&self) -> f64 {
        2f64.powi(self.k)
    }

    pub fn measure(&self) -> Ratio<i64> {
        self.weight * self.support.len() as i64
    }

    pub fn sup(&self) -> f64 {
        self.magnitudes.iter().fold(0.0, |m: f64, v| m.max(*v))
    }

    pub fn lq_norm(&self, q: Recip) -> f64 {
        weighted_norm(&self.magnitudes, ratio_f64(self.weight), q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundWitness {
    pub value: f64,
    pub bound: f64,
}

impl BoundWitness {
    pub fn holds(&self) -> bool {
        self.value <= self.bound * (1.0 + 1e-12)
    }
}

/// `‖φ‖_q` against `λ^{1/q − 1/p}`.
pub fn atom_norm_bound(atom: &Atom, q: Recip) -> BoundWitness {
    let exponent = q.to_f64() - atom.p.to_f64();
    BoundWitness {
        value: atom.lq_norm(q),
        bound: atom.size().powf(exponent),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomicDecomposition {
    pub p: Recip,
    pub atoms: BTreeMap<i32, Atom>,
    pub coeffs: BTreeMap<i32, f64>,
    len: usize,
    dim: usize,
}

impl AtomicDecomposition {
    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `‖a_λ‖_{ℓ^p}` over the scales present.
    pub fn coefficient_norm(&self) -> f64 {
        let c: Vec<f64> = self.coeffs.values().copied().collect();
        weighted_norm(&c, 1.0, self.p)
    }

    /// `Σ_λ a_λ φ_λ`, sample by sample.
    pub fn reconstruct(&self) -> Vec<Vec<Complex64>> {
        let mut out = vec![vec![Complex64::new(0.0, 0.0); self.dim]; self.len];
        for (k, atom) in &self.atoms {
            let a = self.coeffs[k];
            for (idx, v) in atom.support.iter().zip(&atom.values) {
                for (o, x) in out[*idx].iter_mut().zip(v) {
                    *o += x * a;
                }
            }
        }
        out
    }
}

/// The smallest `k` with `rank ≤ 2^k`.
fn band_of(rank: Ratio<i64>) -> i32 {
    let mut k = 0;
    while dyadic(k) < rank {
        k += 1;
    }
    while dyadic(k - 1) >= rank {
        k -= 1;
    }
    k
}

/// Splits `f` into atoms of disjoint support, one per occupied band.
pub fn decompose(f: &SampledFunction, p: Recip) -> Result<AtomicDecomposition, AtomError> {
    if p.is_infinite_exponent() {
        return Err(AtomError::InfiniteExponent);
    }
    let inv_p = p.to_f64();
    let mut order: Vec<usize> = (0..f.len())
        .filter(|&i| f.samples[i].magnitude > 0.0)
        .collect();
    // Descending magnitude, ties by index.
    order.sort_by(|&a, &b| {
        f.samples[b]
            .magnitude
            .total_cmp(&f.samples[a].magnitude)
            .then(a.cmp(&b))
    });

    let mut bands: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (m, &idx) in order.iter().enumerate() {
        let rank = f.weight * (m as i64 + 1);
        bands.entry(band_of(rank)).or_default().push(idx);
    }

    let mut atoms = BTreeMap::new();
    let mut coeffs = BTreeMap::new();
    for (k, support) in bands {
        let max = f.samples[support[0]].magnitude;
        let a = 2f64.powi(k).powf(inv_p) * max;
        let values = support
            .iter()
            .map(|&i| f.samples[i].payload.iter().map(|z| z / a).collect())
            .collect();
        let magnitudes = support.iter().map(|&i| f.samples[i].magnitude / a).collect();
        atoms.insert(
            k,
            Atom {
                p,
                k,
                support,
                values,
                magnitudes,
                weight: f.weight,
            },
        );
        coeffs.insert(k, a);
    }
    Ok(AtomicDecomposition {
        p,
        atoms,
        coeffs,
        len: f.len(),
        dim: f.dim,
    })
}

/// `[l] = max(l, 1/l)`.
pub fn bracket(l: Ratio<i64>) -> Result<Ratio<i64>, AtomError> {
    if !l.is_positive() {
        return Err(AtomError::NonPositive);
    }
    Ok(if l >= Ratio::one() { l } else { l.recip() })
}

fn eps_f64(eps: Ratio<i64>) -> Result<f64, AtomError> {
    if !eps.is_positive() {
        return Err(AtomError::NonPositive);
    }
    Ok(ratio_f64(eps))
}

/// `Σ_{|k| ≤ k_max} (1 + log[2^k]) [2^k]^{−ε}`, natural logarithm.
pub fn c_lambda_tail(eps: Ratio<i64>, k_max: u32) -> Result<f64, AtomError> {
    let e = eps_f64(eps)?;
    let ln2 = std::f64::consts::LN_2;
    let term = |k: u32| (1.0 + k as f64 * ln2) * 2f64.powf(-e * k as f64);
    Ok(term(0) + 2.0 * (1..=k_max).map(term).sum::<f64>())
}

/// Closed-form value of the part of the series beyond `|k| = k_max`.
///
/// With `ρ = 2^{−ε}`: `Σ_{k>K} ρ^k = ρ^{K+1}/(1−ρ)` and
/// `Σ_{k>K} k ρ^k = ρ^{K+1}((K+1) − Kρ)/(1−ρ)²`.
pub fn c_lambda_remainder(eps: Ratio<i64>, k_max: u32) -> Result<f64, AtomError> {
    let e = eps_f64(eps)?;
    let rho = 2f64.powf(-e);
    let kk = k_max as f64;
    let head = rho.powf(kk + 1.0);
    let geometric = head / (1.0 - rho);
    let weighted = head * ((kk + 1.0) - kk * rho) / (1.0 - rho).powi(2);
    Ok(2.0 * (geometric + std::f64::consts::LN_2 * weighted))
}

/// A finitely supported sequence on `ℤ`, starting at index `start`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexedSeq {
    pub start: i64,
    pub values: Vec<f64>,
}

impl IndexedSeq {
    pub fn new(start: i64, values: Vec<f64>) -> Self {
        IndexedSeq { start, values }
    }

    pub fn get(&self, n: i64) -> f64 {
        let off = n - self.start;
        if off < 0 {
            return 0.0;
        }
        self.values.get(off as usize).copied().unwrap_or(0.0)
    }

    fn indices(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.start + i as i64, *v))
    }

    pub fn norm(&self, p: Recip) -> f64 {
        weighted_norm(&self.values, 1.0, p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YoungWitness {
    pub lhs: f64,
    pub rhs: f64,
    /// Whether `1/p + 1/q + 1/r ≥ 2`.
    pub hypothesis: bool,
}

impl YoungWitness {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + 1e-12)
    }
}

/// `Σ_{n,k} A_n B_k C_{n−k}` against `‖A‖_p ‖B‖_q ‖C‖_r`.
pub fn young_sequences(
    a: &IndexedSeq,
    b: &IndexedSeq,
    c: &IndexedSeq,
    p: Recip,
    q: Recip,
    r: Recip,
) -> YoungWitness {
    let mut lhs = 0.0;
    for (n, an) in a.indices() {
        for (k, bk) in b.indices() {
            lhs += an * bk * c.get(n - k);
        }
    }
    YoungWitness {
        lhs,
        rhs: a.norm(p) * b.norm(q) * c.norm(r),
        hypothesis: p.value() + q.value() + r.value() >= Ratio::from_integer(2),
    }
}
