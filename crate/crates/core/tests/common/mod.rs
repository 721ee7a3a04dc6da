#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shiftlab::{BiSeq, Symbol, Tail};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_tail<R: Rng>(rng: &mut R, bound: Symbol, arithmetic: bool) -> Tail {
    match rng.gen_range(0..if arithmetic { 3 } else { 2 }) {
        0 => Tail::Constant(rng.gen_range(0..=bound)),
        1 => {
            let len = rng.gen_range(1..=3);
            Tail::periodic((0..len).map(|_| rng.gen_range(0..=bound)).collect()).unwrap()
        }
        _ => Tail::arithmetic(rng.gen_range(0..=bound), rng.gen_range(1..=3)),
    }
}

/// A representable sequence with small symbols so that random pairs often
/// agree on long stretches.
pub fn random_seq<R: Rng>(rng: &mut R, bound: Symbol, arithmetic: bool) -> BiSeq {
    let len = rng.gen_range(0..=8);
    let lo = rng.gen_range(-6..=2);
    let center = (0..len).map(|_| rng.gen_range(0..=bound)).collect();
    BiSeq::new(
        random_tail(rng, bound, arithmetic),
        lo,
        center,
        random_tail(rng, bound, arithmetic),
    )
}

/// Copies `x` and overwrites one coordinate, so the pair shares a long block.
pub fn perturb<R: Rng>(rng: &mut R, x: &BiSeq, bound: Symbol) -> BiSeq {
    let n = rng.gen_range(-12..=12);
    let (a, b) = (n.min(x.center_lo()), n.max(x.center_hi() - 1));
    let mut center = x.restrict(a, b).unwrap();
    center[(n - a) as usize] = rng.gen_range(0..=bound);
    BiSeq::new(
        x.left().advance((x.center_lo() - a) as u64),
        a,
        center,
        x.right().advance((b + 1 - x.center_hi()) as u64),
    )
}

pub fn finite_support<R: Rng>(rng: &mut R, bound: Symbol, max_radius: i64) -> BiSeq {
    let radius = rng.gen_range(0..=max_radius);
    BiSeq::finite_support(
        -radius,
        (0..=2 * radius).map(|_| rng.gen_range(0..=bound)).collect(),
    )
}

/// Injective with exactly one zero, built from strictly increasing tails.
pub fn injective_with_zero<R: Rng>(rng: &mut R) -> BiSeq {
    let zero = rng.gen_range(-6..=6);
    let left_start = rng.gen_range(1..=5);
    let right_start = left_start + rng.gen_range(1..=5);
    let left_step = 2;
    let right_step = 2;
    // Left tail odd, right tail even: disjoint.
    let l = 2 * left_start + 1;
    let r = 2 * right_start;
    BiSeq::new(
        Tail::arithmetic(l, left_step),
        zero,
        vec![0],
        Tail::arithmetic(r, right_step),
    )
}
