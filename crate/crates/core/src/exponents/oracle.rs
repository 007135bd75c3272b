//! Constructive description of the local region.
//!
//! A quad belongs to the local region when some `θ ∈ [0, 1]` interpolates it
//! between the sharp line and the corner `(0, 0; 0, 0)`. The admissible `θ`
//! are cut out by lower bounds `a / D` and upper bounds `(1/2) / (1/r)` on
//! `x = 1/θ ∈ [1, ∞]`. Denominators may vanish (an exponent equal to
//! infinity), so every comparison is done by cross multiplication.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::{cmp_sums, Quad, Rational, Sigma};

/// The lower bound `a / D` on `1/θ`, stored with `2a` and `D ≥ 0` given as a
/// sum of products.
struct Lower<'a> {
    twice_num: Rational,
    den: &'a [(Rational, Rational)],
}

impl Lower<'_> {
    /// `a / D ≤ (1/2) / u`, that is `2a·u ≤ D`.
    fn at_most_half_over(&self, u: Rational) -> bool {
        cmp_sums(&[(self.twice_num, u)], self.den) != Ordering::Greater
    }
}

/// Decides local-region membership through the bounds on `1/θ`.
///
/// This is a separate derivation from [`super::satisfies_local`] and is used
/// to cross-check it.
pub fn local_region_oracle(x: Quad, s: Sigma) -> bool {
    let sigma = s.value();
    let one = Rational::one();
    let (q, r, qt, rt) = (x.q(), x.r(), x.qt(), x.rt());
    // Twice (σ − 1)/(2σ).
    let shrink2 = Rational::new(sigma.numer() - sigma.denom(), *sigma.numer());

    let lower = [
        Lower { twice_num: Rational::from_integer(2), den: &[(one, one)] },
        Lower { twice_num: shrink2, den: &[(one, r)] },
        Lower { twice_num: shrink2, den: &[(one, rt)] },
        Lower { twice_num: sigma, den: &[(one, q), (sigma, r)] },
        Lower { twice_num: sigma, den: &[(one, qt), (sigma, rt)] },
    ];
    let feasible = lower
        .iter()
        .all(|lo| lo.at_most_half_over(r) && lo.at_most_half_over(rt));
    if !feasible {
        return false;
    }
    // At σ = 1 the endpoint pair with r = ∞ is not admissible, which removes
    // the quads whose interpolation would need it.
    !(sigma.is_one() && (r.is_zero() || rt.is_zero()))
}
