use proptest::prelude::*;
use strichartz::exponents::{rat, Recip};
use strichartz::whitney::{
    coverage_multiplicity, covering_scale, decompose, dyadic, holder_sequences, locate, partners,
    select, sum_inequality, Coord, DyadicSquare, ScaleRange, Window,
};

fn coord() -> impl Strategy<Value = Coord> {
    (0i64..=4096, prop::sample::select(vec![1i64, 3, 7, 64, 256])).prop_map(|(n, d)| Coord::new(n, d))
}

fn recip() -> impl Strategy<Value = Recip> {
    (1i128..=12).prop_flat_map(|d| (0..=d).prop_map(move |n| Recip::new(rat(n, d)).unwrap()))
}

fn brute_force_cover(s: Coord, t: Coord) -> Vec<DyadicSquare> {
    // Squares of every scale that contain (s, t), selected or not.
    (-40..=20)
        .map(|k| {
            let l = dyadic(k);
            DyadicSquare {
                k,
                i: (s / l).floor().to_integer(),
                j: (t / l).floor().to_integer(),
            }
        })
        .filter(|q| select(q.k, q.i, q.j))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn every_point_above_the_diagonal_has_exactly_one_square(s in coord(), t in coord()) {
        let found = brute_force_cover(s, t);
        if s < t {
            prop_assert_eq!(found.len(), 1);
            let q = found[0];
            prop_assert!(q.contains(s, t));
            prop_assert_eq!(covering_scale(s, t), Some(q.k));
            let ratio = q.distance() / q.side();
            prop_assert!(ratio == Coord::from_integer(1) || ratio == Coord::from_integer(2));
        } else {
            prop_assert!(found.is_empty());
            prop_assert_eq!(covering_scale(s, t), None);
        }
    }

    #[test]
    fn locate_agrees_with_the_decomposition(s in coord(), t in coord()) {
        let scales = ScaleRange::new(-10, 13).unwrap();
        let w = Window::square(Coord::from_integer(0), Coord::from_integer(4097)).unwrap();
        if let Some(q) = locate(s, t, scales) {
            prop_assert!(q.contains(s, t));
            prop_assert!(partners(q.k, q.i).contains(&q.j));
            let squares = decompose(&w, ScaleRange::new(q.k, q.k).unwrap());
            prop_assert_eq!(coverage_multiplicity(&squares, s, t), 1);
        }
    }

    #[test]
    fn dyadic_sum_inequality_under_its_hypothesis(
        f in prop::collection::vec(0.0f64..10.0, 1..40),
        g in prop::collection::vec(0.0f64..10.0, 1..40),
        p in recip(),
        pt in recip(),
        k in -5i32..5,
    ) {
        let w = sum_inequality(&f, &g, k, p, pt);
        if w.hypothesis {
            prop_assert!(w.holds(), "{:?}", w);
        }
    }

    #[test]
    fn holder_under_its_hypothesis(
        ab in prop::collection::vec((0.0f64..10.0, 0.0f64..10.0), 1..40),
        p in recip(),
        pt in recip(),
    ) {
        let (a, b): (Vec<f64>, Vec<f64>) = ab.into_iter().unzip();
        let w = holder_sequences(&a, &b, p, pt);
        if w.hypothesis {
            prop_assert!(w.holds(), "{:?}", w);
        }
    }
}

#[test]
fn sum_inequality_fails_without_its_hypothesis() {
    // Many equal entries: Σ f_I g_J grows like N while ‖f‖_{ℓ^p̃}‖g‖_{ℓ^p}
    // grows like N^{1/p + 1/p̃} < N.
    let f = vec![1.0; 64];
    let p = Recip::new(rat(1, 4)).unwrap();
    let w = sum_inequality(&f, &f, 0, p, p);
    assert!(!w.hypothesis);
    assert!(!w.holds());
}

#[test]
fn every_square_of_a_window_is_at_distance_one_or_two_sides() {
    let w = Window::square(Coord::from_integer(0), Coord::from_integer(8)).unwrap();
    let squares = decompose(&w, ScaleRange::new(-4, 3).unwrap());
    assert!(!squares.is_empty());
    for q in &squares {
        let ratio = q.distance() / q.side();
        assert!(ratio == Coord::from_integer(1) || ratio == Coord::from_integer(2), "{q:?}");
    }
}
