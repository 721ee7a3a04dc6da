mod common;

use proptest::prelude::*;
use shiftlab::biseq::{first_difference_left, first_difference_right};
use shiftlab::{cantor_distance, seq_equal, BiSeq, Distance, FinMap, Tail};

fn seq() -> impl Strategy<Value = BiSeq> {
    any::<u64>().prop_map(|s| common::random_seq(&mut common::rng(s), 3, true))
}

/// Smallest `|n|` up to `reach` where the two differ, by direct reading.
fn brute_distance(x: &BiSeq, y: &BiSeq, reach: i64) -> Option<u64> {
    (0..=reach)
        .find(|&k| x.symbol_at(k) != y.symbol_at(k) || x.symbol_at(-k) != y.symbol_at(-k))
        .map(|k| k as u64)
}

proptest! {
    #[test]
    fn display_round_trips(x in seq()) {
        let back: BiSeq = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn distance_matches_direct_reading(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let x = common::random_seq(&mut rng, 2, true);
        let y = common::perturb(&mut rng, &x, 2);
        let d = cantor_distance(&x, &y);
        match brute_distance(&x, &y, 64) {
            Some(k) => prop_assert_eq!(d, Distance::Pow2Neg(k)),
            None => prop_assert_eq!(d, Distance::Zero),
        }
    }

    #[test]
    fn equality_is_pointwise(x in seq(), y in seq()) {
        let reach = 40;
        let pointwise = (-reach..=reach).all(|n| x.symbol_at(n) == y.symbol_at(n));
        if seq_equal(&x, &y) {
            prop_assert!(pointwise);
        }
        if !pointwise {
            prop_assert!(!seq_equal(&x, &y));
        }
    }

    #[test]
    fn shift_composes(x in seq(), a in -15i64..15, b in -15i64..15) {
        prop_assert!(seq_equal(&x.shift(a).shift(b), &x.shift(a + b)));
        for n in -10..=10 {
            prop_assert_eq!(x.shift(a).symbol_at(n), x.symbol_at(n + a));
        }
    }

    #[test]
    fn shift_moves_first_difference_by_one(x in seq(), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let y = common::perturb(&mut rng, &x, 3);
        // σ moves the first difference by one position
        let d = cantor_distance(&x, &y);
        let d1 = cantor_distance(&x.shift(1), &y.shift(1));
        if let (Some(a), Some(b)) = (d.exponent(), d1.exponent()) {
            prop_assert!(a.abs_diff(b) <= 1);
        }
    }

    #[test]
    fn first_differences_agree_with_scan(x in seq(), seed in any::<u64>()) {
        let y = common::perturb(&mut common::rng(seed), &x, 3);
        let right = (0..=60).find(|&n| x.symbol_at(n) != y.symbol_at(n));
        let left = (0..=60).map(|n| -1 - n).find(|&n| x.symbol_at(n) != y.symbol_at(n));
        prop_assert_eq!(first_difference_right(&x, &y, 0), right);
        prop_assert_eq!(first_difference_left(&x, &y, -1), left);
    }

    #[test]
    fn restrict_reads_symbols(x in seq(), a in -12i64..12, len in 0i64..10) {
        let w = x.restrict(a, a + len).unwrap();
        prop_assert_eq!(w.len() as i64, len + 1);
        for (i, s) in w.iter().enumerate() {
            prop_assert_eq!(*s, x.symbol_at(a + i as i64));
        }
    }

    #[test]
    fn cylinder_display_round_trips(x in seq(), ps in prop::collection::vec(-9i64..9, 0..6)) {
        let h = FinMap::observe(&x, ps);
        let back: FinMap = h.to_string().parse().unwrap();
        prop_assert!(back.contains(&x));
        prop_assert_eq!(back, h);
    }

    #[test]
    fn cylinder_translate_adjunction(x in seq(), ps in prop::collection::vec(-9i64..9, 0..6), n in -12i64..12) {
        let h = FinMap::observe(&x, ps);
        let y = common::random_seq(&mut common::rng(n as u64), 3, true);
        prop_assert_eq!(h.translate(n).contains(&y), h.contains(&y.shift(n)));
        prop_assert!(h.translate(n).contains(&x.shift(-n)));
    }

    #[test]
    fn incompatible_join_fails(x in seq(), p in -6i64..6) {
        let h = FinMap::observe(&x, [p]);
        let other = FinMap::from_pairs([(p, x.symbol_at(p) + 1)]).unwrap();
        prop_assert!(h.join_with(&other).is_err());
        prop_assert!(h.disjoint_from(&other));
    }
}

#[test]
fn canonical_form_absorbs_margins() {
    let x = BiSeq::new(Tail::Constant(0), -2, vec![0, 0, 5, 0], Tail::Constant(0));
    assert_eq!(x, BiSeq::finite_support(0, vec![5]));
    let p = BiSeq::new(
        Tail::periodic(vec![1, 2]).unwrap(),
        0,
        vec![2, 1, 7],
        Tail::Constant(3),
    );
    assert_eq!(p.center_lo(), 2);
    assert_eq!(p.symbol_at(-1), 1);
}

#[test]
fn arithmetic_tails_never_collapse_to_constant() {
    let x = BiSeq::new(Tail::arithmetic(4, 2), 0, vec![2], Tail::arithmetic(5, 3));
    assert_eq!(x.symbol_at(-1), 4);
    assert_eq!(x.symbol_at(-3), 8);
    assert_eq!(x.symbol_at(3), 11);
    assert_ne!(cantor_distance(&x, &x.shift(1)), Distance::Zero);
}
