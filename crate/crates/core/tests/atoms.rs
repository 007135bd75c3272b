use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;
use strichartz::atoms::{
    atom_norm_bound, bracket, c_lambda_remainder, c_lambda_tail, decompose, young_sequences,
    IndexedSeq, SampledFunction,
};
use strichartz::exponents::{rat, Recip};

fn finite_p() -> impl Strategy<Value = Recip> {
    prop::sample::select(vec![(1, 1), (3, 4), (1, 2), (1, 4), (1, 3), (2, 3)])
        .prop_map(|(n, d)| Recip::new(rat(n, d)).unwrap())
}

fn any_recip() -> impl Strategy<Value = Recip> {
    (1i128..=8).prop_flat_map(|d| (0..=d).prop_map(move |n| Recip::new(rat(n, d)).unwrap()))
}

fn function() -> impl Strategy<Value = SampledFunction> {
    (
        prop::collection::vec(((-5.0f64..5.0), (-5.0f64..5.0), prop::bool::weighted(0.2)), 1..200),
        prop::sample::select(vec![Ratio::new(1, 8), Ratio::new(1, 1), Ratio::new(3, 2)]),
    )
        .prop_map(|(v, w)| {
            let values: Vec<Complex64> = v
                .into_iter()
                .map(|(re, im, zero)| if zero { Complex64::new(0.0, 0.0) } else { Complex64::new(re, im) })
                .collect();
            SampledFunction::from_scalars(&values, w).unwrap()
        })
}

fn seq() -> impl Strategy<Value = IndexedSeq> {
    (-5i64..5, prop::collection::vec(0.0f64..3.0, 1..12)).prop_map(|(s, v)| IndexedSeq::new(s, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn decomposition_invariants(f in function(), p in finite_p()) {
        let d = decompose(&f, p).unwrap();
        let rebuilt = d.reconstruct();
        for (s, r) in f.samples().iter().zip(&rebuilt) {
            for (a, b) in s.payload.iter().zip(r) {
                prop_assert!((a - b).norm() <= 1e-13 * (1.0 + a.norm()));
            }
        }
        for (k, atom) in &d.atoms {
            let lambda = strichartz::whitney::dyadic(*k);
            prop_assert!(atom.measure() <= lambda);
            prop_assert!(atom.sup() <= atom.size().powf(-p.to_f64()) * (1.0 + 1e-12));
            for q in [Recip::new(rat(1, 1)).unwrap(), Recip::half(), Recip::infinity()] {
                prop_assert!(atom_norm_bound(atom, q).holds());
            }
        }
        let norm = f.lp_norm(p);
        if norm > 0.0 {
            let ratio = norm / d.coefficient_norm();
            prop_assert!((0.25..=4.0).contains(&ratio), "ratio {}", ratio);
        }
    }

    #[test]
    fn young_under_its_hypothesis(
        a in seq(), b in seq(), c in seq(),
        p in any_recip(), q in any_recip(), r in any_recip(),
    ) {
        let w = young_sequences(&a, &b, &c, p, q, r);
        if w.hypothesis {
            prop_assert!(w.holds(), "{:?}", w);
        }
    }

    #[test]
    fn bracket_is_at_least_one(n in 1i64..1000, d in 1i64..1000) {
        let b = bracket(Ratio::new(n, d)).unwrap();
        prop_assert!(b >= Ratio::from_integer(1));
        prop_assert_eq!(bracket(Ratio::new(d, n)).unwrap(), b);
    }
}

#[test]
fn young_fails_without_its_hypothesis() {
    // Constant sequences of length N: the left side grows like N², the right
    // like N^{1/p + 1/q + 1/r}.
    let ones = IndexedSeq::new(0, vec![1.0; 40]);
    let sym = IndexedSeq::new(-39, vec![1.0; 79]);
    let half = Recip::half();
    let w = young_sequences(&ones, &ones, &sym, half, half, half);
    assert!(!w.hypothesis);
    assert!(!w.holds());
}

#[test]
fn c_lambda_converges_to_its_closed_form() {
    let eps = Ratio::new(1, 2);
    let long = c_lambda_tail(eps, 400).unwrap();
    for k in [4u32, 16, 64] {
        let total = c_lambda_tail(eps, k).unwrap() + c_lambda_remainder(eps, k).unwrap();
        assert!((total / long - 1.0).abs() < 1e-12, "k = {k}");
    }
}
