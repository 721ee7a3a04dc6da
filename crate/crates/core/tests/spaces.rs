mod common;

use std::collections::BTreeSet;

use itertools::Itertools;
use proptest::prelude::*;
use rand::Rng;
use shiftlab::shiftspace::{FinitenessVerdict, Side};
use shiftlab::{AlphabetSpec, BiSeq, FinMap, Membership, ShiftSpaceSpec, Symbol, Word};

const ALPHA: [Symbol; 3] = [0, 1, 2];

fn random_sft(seed: u64) -> ShiftSpaceSpec {
    let mut rng = common::rng(seed);
    let count = rng.gen_range(1..=3);
    let words: Vec<Word> = (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=3);
            (0..len).map(|_| rng.gen_range(0..=2)).collect()
        })
        .collect();
    ShiftSpaceSpec::forbidden(AlphabetSpec::finite(ALPHA.to_vec()).unwrap(), words).unwrap()
}

fn forbidden_words(x: &ShiftSpaceSpec) -> Vec<Word> {
    match &x.kind {
        shiftlab::shiftspace::SpaceKind::ForbiddenBlocks(w) => w.clone(),
        _ => unreachable!(),
    }
}

fn has_factor(w: &[Symbol], fs: &[Word]) -> bool {
    fs.iter()
        .any(|f| f.len() <= w.len() && w.windows(f.len()).any(|v| v == f.as_slice()))
}

/// Whether `w` (assumed forbidden-free) continues for `steps` more symbols
/// in one direction. Forbidden words have length <= 3, so the last two
/// symbols are enough state.
fn extends(w: &[Symbol], fs: &[Word], steps: usize, forward: bool) -> bool {
    let edge = |v: &[Symbol]| -> Word {
        let k = v.len().min(2);
        if forward {
            v[v.len() - k..].to_vec()
        } else {
            v[..k].to_vec()
        }
    };
    let mut frontier: BTreeSet<Word> = [edge(w)].into();
    for _ in 0..steps {
        frontier = frontier
            .iter()
            .flat_map(|e| {
                ALPHA.iter().map(move |&a| {
                    if forward {
                        [e.as_slice(), &[a]].concat()
                    } else {
                        [&[a], e.as_slice()].concat()
                    }
                })
            })
            .filter(|v| !has_factor(v, fs))
            .map(|v| edge(&v))
            .collect();
    }
    !frontier.is_empty()
}

/// `w` is in the language iff some two-symbol left context keeps it
/// forbidden-free and the result extends far in both directions; twelve
/// steps exceed the nine states of the 2-block graph.
fn brute_allows(w: &[Symbol], fs: &[Word]) -> bool {
    (0..2)
        .map(|_| ALPHA.iter().copied())
        .multi_cartesian_product()
        .any(|c| {
            let cw = [c.as_slice(), w].concat();
            !has_factor(&cw, fs) && extends(&cw, fs, 12, true) && extends(&cw, fs, 12, false)
        })
}

fn random_periodic_point(seed: u64) -> BiSeq {
    let mut rng = common::rng(seed);
    loop {
        let x = common::random_seq(&mut rng, 2, false);
        if x.finite_symbol_set().is_some() {
            return x;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn membership_is_shift_invariant(s in any::<u64>(), p in any::<u64>(), k in -9i64..9) {
        let space = random_sft(s);
        let x = random_periodic_point(p);
        prop_assert_eq!(space.member(&x).unwrap(), space.member(&x.shift(k)).unwrap());
    }

    #[test]
    fn membership_matches_window_scan(s in any::<u64>(), p in any::<u64>()) {
        let space = random_sft(s);
        let x = random_periodic_point(p);
        let w = x.restrict(x.center_lo() - 24, x.center_hi() + 24).unwrap();
        let want = if has_factor(&w, &forbidden_words(&space)) { Membership::NotMember } else { Membership::Member };
        prop_assert_eq!(space.member(&x).unwrap(), want);
    }

    #[test]
    fn language_is_factorial_and_extendable(s in any::<u64>(), n in 1usize..4) {
        let space = random_sft(s);
        let blocks = space.allowed_blocks(n, 2).unwrap();
        let longer = space.allowed_blocks(n + 1, 2).unwrap();
        for w in &blocks {
            for i in 0..n {
                for j in i + 1..=n {
                    prop_assert!(space.allows(&w[i..j]).unwrap());
                }
            }
            prop_assert!(ALPHA.iter().any(|&a| longer.contains(&[w.as_slice(), &[a]].concat())));
            prop_assert!(ALPHA.iter().any(|&a| longer.contains(&[&[a], w.as_slice()].concat())));
        }
        for w in &longer {
            prop_assert!(blocks.contains(&w[1..]) && blocks.contains(&w[..n]));
        }
    }

    #[test]
    fn blocks_match_padding_oracle(s in any::<u64>()) {
        let space = random_sft(s);
        let fs = forbidden_words(&space);
        for n in 1..=3 {
            let got = space.allowed_blocks(n, 2).unwrap();
            let want: BTreeSet<Word> = (0..n)
                .map(|_| ALPHA.iter().copied())
                .multi_cartesian_product()
                .filter(|w| brute_allows(w, &fs))
                .collect();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn sampled_points_lie_in_cylinder(s in any::<u64>(), p in any::<u64>()) {
        let space = random_sft(s);
        let x = random_periodic_point(p);
        if space.member(&x).unwrap() == Membership::Member {
            let h = FinMap::window(&x, -2, 2);
            prop_assert!(!space.cylinder_is_empty(&h));
            let mut rng = common::rng(p);
            if let Some(z) = space.sample_in_cylinder(&h, &mut rng, 2) {
                prop_assert!(h.contains(&z));
                prop_assert_eq!(space.member(&z).unwrap(), Membership::Member);
            }
        }
    }

    #[test]
    fn spec_text_round_trips(s in any::<u64>()) {
        let space = random_sft(s);
        let back: ShiftSpaceSpec = space.to_string().parse().unwrap();
        prop_assert_eq!(back, space);
    }
}

#[test]
fn injective_with_zero_language() {
    let x = ShiftSpaceSpec::injective_with_zero();
    let mut rng = common::rng(11);
    for _ in 0..50 {
        let p = common::injective_with_zero(&mut rng);
        assert_eq!(x.member(&p).unwrap(), Membership::Member);
        assert_eq!(
            x.member(&p.shift(rng.gen_range(-5..5))).unwrap(),
            Membership::Member
        );
    }
    assert_eq!(
        x.member(&BiSeq::finite_support(0, vec![1])).unwrap(),
        Membership::NotMember
    );
    assert!(x.allows(&[3, 0, 5]).unwrap());
    assert!(!x.allows(&[3, 0, 3]).unwrap());
    assert!(!x.allows(&[0, 4, 0]).unwrap());
    let followers = x.follower_set(2, 6).unwrap();
    assert_eq!(followers.symbols, [0, 1, 3, 4, 5, 6].into_iter().collect());
    assert!(!followers.exhaustive);
}

#[test]
fn finiteness_verdicts() {
    let sft =
        ShiftSpaceSpec::forbidden(AlphabetSpec::finite(vec![0, 1]).unwrap(), vec![vec![1, 1]])
            .unwrap();
    assert_eq!(
        sft.finiteness_probe(Side::Bilateral, 1).unwrap().verdict,
        FinitenessVerdict::Finite
    );
    let full = ShiftSpaceSpec::full_naturals();
    assert_eq!(
        full.finiteness_probe(Side::Right, 4).unwrap().verdict,
        FinitenessVerdict::Infinite
    );
    let golden = sft.allowed_blocks(4, 1).unwrap();
    // Fibonacci count of binary words with no 11
    assert_eq!(golden.len(), 8);
}

#[test]
fn full_shift_counts_all_words() {
    let full = ShiftSpaceSpec::full_naturals();
    for n in 1..=3 {
        assert_eq!(
            full.allowed_blocks(n, 3).unwrap().len(),
            4usize.pow(n as u32)
        );
    }
}
