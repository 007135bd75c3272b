use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::{cmp_sums, rat, Branch, Condition, Pair, Quad, Rational, Recip, Sigma, Verdict};

fn half() -> Rational {
    rat(1, 2)
}

/// Sharp σ-admissibility: `1/q, 1/r ≤ 1/2`, `1/q = σ(1/2 − 1/r)`, `(q, r, σ) ≠ (2, ∞, 1)`.
pub fn is_sharp_admissible(p: Pair, s: Sigma) -> bool {
    sharp_admissible_verdict(p, s).member
}

pub fn sharp_admissible_verdict(p: Pair, s: Sigma) -> Verdict {
    let (q, r, sigma) = (p.q.value(), p.r.value(), s.value());
    let mut failed = Vec::new();
    if q > half() {
        failed.push(Condition::QLeHalf);
    }
    if r > half() {
        failed.push(Condition::RLeHalf);
    }
    if q != sigma * (half() - r) {
        failed.push(Condition::SharpLine);
    }
    if q == half() && r.is_zero() && sigma.is_one() {
        failed.push(Condition::ExcludedEndpoint);
    }
    Verdict::from_failures(failed, Branch::NotApplicable)
}

/// σ-acceptability: `1/q < 2σ(1/2 − 1/r)` or `(q, r) = (∞, 2)`.
pub fn is_acceptable(p: Pair, s: Sigma) -> bool {
    let (q, r) = (p.q.value(), p.r.value());
    q < rat(2, 1) * s.value() * (half() - r) || (q.is_zero() && r == half())
}

pub fn acceptable_verdict(p: Pair, s: Sigma) -> Verdict {
    let failed = if is_acceptable(p, s) {
        Vec::new()
    } else {
        vec![Condition::Acceptable]
    };
    Verdict::from_failures(failed, Branch::NotApplicable)
}

/// Scaling defect `β = 1/q + 1/q̃ − σ(1 − 1/r − 1/r̃)`.
pub fn beta(x: Quad, s: Sigma) -> Rational {
    x.q() + x.qt() - s.value() * (Rational::one() - x.r() - x.rt())
}

/// Membership in the local region of exponents for forcing and solution
/// separated in time by a distance of order one.
pub fn satisfies_local(x: Quad, s: Sigma) -> Verdict {
    let sigma = s.value();
    let one = Rational::one();
    // σ − 1 without the gcd of a general subtraction.
    let sm1 = Rational::new_raw(sigma.numer() - sigma.denom(), *sigma.denom());
    let (q, r, qt, rt) = (x.q(), x.r(), x.qt(), x.rt());
    let mut failed = Vec::new();
    if r > half() {
        failed.push(Condition::RLeHalf);
    }
    if rt > half() {
        failed.push(Condition::RtLeHalf);
    }
    if cmp_sums(&[(sm1, r)], &[(sigma, rt)]) == Ordering::Greater {
        failed.push(Condition::RatioRRt);
    }
    if cmp_sums(&[(sm1, rt)], &[(sigma, r)]) == Ordering::Greater {
        failed.push(Condition::RatioRtR);
    }
    // 1/q < σ(1/r̃ − 1/r), rearranged to stay a sum of products.
    if cmp_sums(&[(one, q), (sigma, r)], &[(sigma, rt)]) == Ordering::Less {
        failed.push(Condition::QLower);
    }
    if cmp_sums(&[(one, qt), (sigma, rt)], &[(sigma, r)]) == Ordering::Less {
        failed.push(Condition::QtLower);
    }
    // σ = 1 deletes the two lines r = ∞ and r̃ = ∞.
    if sigma.is_one() {
        if r.is_zero() {
            failed.push(Condition::Sigma1RFinite);
        }
        if rt.is_zero() {
            failed.push(Condition::Sigma1RtFinite);
        }
    }
    Verdict::from_failures(failed, Branch::NotApplicable)
}

/// Membership in the global region, reporting which case decided it.
pub fn satisfies_global(x: Quad, s: Sigma) -> Verdict {
    let sigma = s.value();
    let one = Rational::one();
    let sm1 = sigma - one;
    let (q, r, qt, rt) = (x.q(), x.r(), x.qt(), x.rt());
    let mut failed = Vec::new();
    if !is_acceptable(x.qr, s) {
        failed.push(Condition::AcceptableQr);
    }
    if !is_acceptable(x.qtrt, s) {
        failed.push(Condition::AcceptableQtRt);
    }
    if !beta(x, s).is_zero() {
        failed.push(Condition::Scaling);
    }
    let mut branch = Branch::NotApplicable;
    if sigma == one {
        if r.is_zero() {
            failed.push(Condition::Sigma1RFinite);
        }
        if rt.is_zero() {
            failed.push(Condition::Sigma1RtFinite);
        }
    } else if sigma > one {
        let sum = q + qt;
        if sum < one {
            branch = Branch::NonSharp;
            if sm1 * r > sigma * rt {
                failed.push(Condition::RatioRRt);
            }
            if sm1 * rt > sigma * r {
                failed.push(Condition::RatioRtR);
            }
        } else if sum == one {
            branch = Branch::Sharp;
            if sm1 * r >= sigma * rt {
                failed.push(Condition::RatioRRtStrict);
            }
            if sm1 * rt >= sigma * r {
                failed.push(Condition::RatioRtRStrict);
            }
            if r > q {
                failed.push(Condition::SharpQLeR);
            }
            if rt > qt {
                failed.push(Condition::SharpQtLeRt);
            }
        } else {
            failed.push(Condition::QSumLeOne);
        }
    }
    Verdict::from_failures(failed, branch)
}

/// Sufficient conditions for the local Schrödinger estimate in dimension `n`,
/// i.e. the local region with `σ = n/2`.
pub fn schrodinger_local_sufficient(x: Quad, n: u32) -> Verdict {
    satisfies_local(x, Sigma::schrodinger(n))
}

fn dim(n: u32) -> Rational {
    assert!(n >= 1, "spatial dimension must be at least 1");
    Rational::from_integer(n as i128)
}

fn push_rr_n(x: &Quad, n: Rational, failed: &mut Vec<Condition>) {
    let diff = x.r() - x.rt();
    if n * diff > Rational::one() || n * diff < -Rational::one() {
        failed.push(Condition::RrN);
    }
}

fn push_focusing(x: &Quad, n: Rational, failed: &mut Vec<Condition>) {
    let two = rat(2, 1);
    let nm2 = n - two;
    if nm2 * x.r() - two * x.q() > n * x.rt() {
        failed.push(Condition::FocusingR);
    }
    if nm2 * x.rt() - two * x.qt() > n * x.r() {
        failed.push(Condition::FocusingRt);
    }
}

/// Conditions that any local Schrödinger estimate in dimension `n` must obey.
pub fn schrodinger_local_necessary(x: Quad, n: u32) -> Verdict {
    let nn = dim(n);
    let sigma = nn / rat(2, 1);
    let mut failed = Vec::new();
    if x.r() + x.rt() > Rational::one() {
        failed.push(Condition::RrSum);
    }
    push_rr_n(&x, nn, &mut failed);
    push_focusing(&x, nn, &mut failed);
    if x.q() < sigma * (x.rt() - x.r()) {
        failed.push(Condition::QLower);
    }
    if x.qt() < sigma * (x.r() - x.rt()) {
        failed.push(Condition::QtLower);
    }
    Verdict::from_failures(failed, Branch::NotApplicable)
}

/// Conditions that any global Schrödinger estimate in dimension `n` must obey.
pub fn schrodinger_global_necessary(x: Quad, n: u32) -> Verdict {
    let nn = dim(n);
    let s = Sigma::schrodinger(n);
    let mut failed = Vec::new();
    if !is_acceptable(x.qr, s) {
        failed.push(Condition::AcceptableQr);
    }
    if !is_acceptable(x.qtrt, s) {
        failed.push(Condition::AcceptableQtRt);
    }
    if !beta(x, s).is_zero() {
        failed.push(Condition::Scaling);
    }
    if x.q() + x.qt() > Rational::one() {
        failed.push(Condition::QSumLeOne);
    }
    push_rr_n(&x, nn, &mut failed);
    push_focusing(&x, nn, &mut failed);
    Verdict::from_failures(failed, Branch::NotApplicable)
}

/// Position of `(1/r, 1/r̃)` relative to the sufficient local Schrödinger region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum GapRegion {
    Covered,
    R1,
    R2,
    R3,
    R4,
    Excluded,
}

/// Classifies `(1/r, 1/r̃)` as covered by the sufficient local conditions,
/// lying in one of the four open regions, or excluded.
///
/// "Covered" looks only at the constraints on `(r, r̃)`; the `n = 2` deletion
/// of `r = ∞` and `r̃ = ∞` is not applied here.
pub fn gap_region(r: Recip, rt: Recip, n: u32) -> GapRegion {
    let nn = dim(n);
    let nm2 = nn - rat(2, 1);
    let one = Rational::one();
    let (r, rt) = (r.value(), rt.value());
    let within_n = |a: Rational, b: Rational| nn * (a - b) <= one;
    if r <= half() && rt <= half() && nm2 * r <= nn * rt && nm2 * rt <= nn * r {
        GapRegion::Covered
    } else if r > half() && r + rt <= one && within_n(r, rt) {
        GapRegion::R1
    } else if rt > half() && r + rt <= one && within_n(rt, r) {
        GapRegion::R2
    } else if nm2 * r > nn * rt && within_n(r, rt) {
        GapRegion::R3
    } else if nm2 * rt > nn * r && within_n(rt, r) {
        GapRegion::R4
    } else {
        GapRegion::Excluded
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(v: [(i128, i128); 4]) -> Quad {
        Quad::from_rationals(
            rat(v[0].0, v[0].1),
            rat(v[1].0, v[1].1),
            rat(v[2].0, v[2].1),
            rat(v[3].0, v[3].1),
        )
        .unwrap()
    }

    fn sigma(n: i128, d: i128) -> Sigma {
        Sigma::new(rat(n, d)).unwrap()
    }

    fn pair(a: (i128, i128), b: (i128, i128)) -> Pair {
        Pair::from_rationals(rat(a.0, a.1), rat(b.0, b.1)).unwrap()
    }

    #[test]
    fn sharp_examples() {
        assert!(is_sharp_admissible(pair((1, 2), (1, 6)), sigma(3, 2)));
        for s in [sigma(1, 2), sigma(1, 1), sigma(7, 3)] {
            assert!(is_sharp_admissible(pair((0, 1), (1, 2)), s));
        }
        let v = sharp_admissible_verdict(pair((1, 2), (0, 1)), sigma(1, 1));
        assert!(!v.member);
        assert_eq!(v.failed_conditions, vec![Condition::ExcludedEndpoint]);
        // The same pair is fine for larger σ only if it lies on the line.
        assert!(!is_sharp_admissible(pair((1, 2), (0, 1)), sigma(2, 1)));
    }

    #[test]
    fn acceptable_examples() {
        assert!(is_acceptable(pair((0, 1), (1, 2)), sigma(1, 3)));
        assert!(is_acceptable(pair((1, 4), (1, 4)), sigma(1, 1)));
        assert!(!is_acceptable(pair((1, 4), (1, 4)), sigma(1, 2)));
        assert_eq!(
            acceptable_verdict(pair((1, 4), (1, 4)), sigma(1, 2)).tags(),
            vec!["acceptable"]
        );
    }

    #[test]
    fn beta_examples() {
        let s = sigma(3, 2);
        assert!(beta(quad([(1, 2), (1, 6), (0, 1), (1, 2)]), s).is_zero());
        assert_eq!(beta(quad([(0, 1); 4]), s), rat(-3, 2));
        assert_eq!(
            beta(quad([(1, 1), (0, 1), (1, 1), (0, 1)]), sigma(1, 1)),
            rat(1, 1)
        );
    }

    #[test]
    fn local_examples() {
        let s = sigma(3, 2);
        assert!(satisfies_local(quad([(0, 1); 4]), s).member);
        assert!(satisfies_local(quad([(1, 2), (1, 6), (1, 2), (1, 6)]), s).member);
        let v = satisfies_local(quad([(1, 2), (1, 4), (1, 2), (0, 1)]), sigma(1, 1));
        assert!(!v.member);
        assert!(v.failed(Condition::Sigma1RtFinite));
        let v = satisfies_local(quad([(1, 2), (1, 2), (1, 2), (0, 1)]), sigma(3, 1));
        assert!(v.failed(Condition::RatioRRt));
    }

    #[test]
    fn global_examples() {
        let v = satisfies_global(quad([(3, 10); 4]), sigma(3, 2));
        assert!(v.member);
        assert_eq!(v.branch, Branch::NonSharp);

        // Endpoint pair (2, 2σ/(σ−1)) at σ = 2.
        let v = satisfies_global(quad([(1, 2), (1, 4), (1, 2), (1, 4)]), sigma(2, 1));
        assert!(v.member, "{:?}", v);
        assert_eq!(v.branch, Branch::Sharp);

        let v = satisfies_global(quad([(1, 2), (1, 6), (1, 2), (1, 6)]), sigma(3, 2));
        assert!(v.member);
        assert_eq!(v.branch, Branch::Sharp);

        let v = satisfies_global(quad([(0, 1); 4]), sigma(3, 2));
        assert!(v.failed(Condition::Scaling));
    }

    #[test]
    fn global_sharp_branch_requires_r_le_q() {
        // β = 0 and 1/q + 1/q̃ = 1 with 1/r > 1/q.
        let s = sigma(3, 1);
        let x = quad([(1, 10), (1, 3), (9, 10), (1, 3)]);
        assert!(beta(x, s).is_zero());
        let v = satisfies_global(x, s);
        assert_eq!(v.branch, Branch::Sharp);
        assert!(v.failed(Condition::SharpQLeR));
    }

    #[test]
    fn schrodinger_necessary_examples() {
        assert!(schrodinger_local_necessary(quad([(0, 1), (1, 2), (0, 1), (1, 2)]), 3).member);
        let v = schrodinger_local_necessary(quad([(1, 2), (1, 2), (1, 2), (0, 1)]), 3);
        assert!(v.failed(Condition::RrN));
        let v = schrodinger_local_necessary(quad([(1, 1), (5, 8), (1, 1), (1, 2)]), 3);
        assert!(v.failed(Condition::RrSum));

        assert!(schrodinger_global_necessary(quad([(3, 10); 4]), 3).member);
        let v = schrodinger_global_necessary(quad([(3, 5), (1, 10), (1, 2), (1, 10)]), 3);
        assert!(v.failed(Condition::QSumLeOne));
        assert!(v.failed(Condition::Scaling));
    }

    #[test]
    fn gap_examples() {
        let r = |n, d| Recip::new(rat(n, d)).unwrap();
        for n in 1..6 {
            assert_eq!(gap_region(r(1, 2), r(1, 2), n), GapRegion::Covered);
        }
        for n in 2..6i128 {
            let a = r(1, 2) ;
            let e = rat(1, 4 * n);
            let v = gap_region(
                Recip::new(a.value() + e).unwrap(),
                Recip::new(a.value() - e).unwrap(),
                n as u32,
            );
            assert_eq!(v, GapRegion::R1);
        }
        assert_eq!(gap_region(r(1, 1), r(0, 1), 3), GapRegion::Excluded);
        // Far below the diagonal in high dimension.
        assert_eq!(gap_region(r(3, 10), r(1, 10), 4), GapRegion::R3);
        assert_eq!(gap_region(r(1, 10), r(3, 10), 4), GapRegion::R4);
    }
}
