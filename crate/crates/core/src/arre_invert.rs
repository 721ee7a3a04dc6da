//! The morphism `Ψ(x)_n = x_n + 2 x_{n+1}` on `N^Z`, its image `Y`, and the
//! inverse `Φ: Y -> N^Z` reconstructed from chain solutions.

use std::fmt;

use thiserror::Error;

use crate::biseq::{seq_equal, BiSeq, Symbol, Tail, Word};
use crate::cylinder::FinMap;
use crate::morphism::{CellLocator, FullImage, Morphism, MorphismError};
use crate::shiftspace::Membership;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArreError {
    #[error("negative symbol {symbol} at position {position}")]
    NegativeSymbol { position: i64, symbol: Symbol },
    #[error("chain window must have odd length at least 3, got {0}")]
    WindowLength(usize),
    #[error("only constant and periodic tails can be inverted")]
    UnsupportedTail,
    #[error("no stabilization index up to N = {0}")]
    NoStabilization(usize),
    #[error("sequence is not in the image: {0}")]
    NotInImage(String),
    #[error("reconstructed preimage does not map back onto the input")]
    RoundTrip,
}

/// `S_N(y)`: the words `w_{-N} … w_{N+1}` with `w_i + 2 w_{i+1} = y_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub n: usize,
    pub words: Vec<Word>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Index of position 0 inside each word.
    pub fn center_index(&self) -> usize {
        self.n
    }
}

impl fmt::Display for SolutionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", crate::biseq::format_word(w))?;
        }
        Ok(())
    }
}

/// Every `w` of length `y.len() + 1` over N with `w_i + 2 w_{i+1} = y_i`.
pub fn chain_solutions(y: &[Symbol]) -> Vec<Word> {
    let Some(&first) = y.first() else {
        return Vec::new();
    };
    if y.iter().any(|&v| v < 0) {
        return Vec::new();
    }
    (0..=first).filter_map(|w0| propagate(y, w0)).collect()
}

pub fn chain_solvable(y: &[Symbol]) -> bool {
    match y.first() {
        None => true,
        Some(&first) => {
            y.iter().all(|&v| v >= 0) && (0..=first).any(|w0| propagate(y, w0).is_some())
        }
    }
}

fn propagate(y: &[Symbol], w0: Symbol) -> Option<Word> {
    let mut w = Vec::with_capacity(y.len() + 1);
    w.push(w0);
    let mut cur = w0;
    for &v in y {
        let rest = v - cur;
        if rest < 0 || rest % 2 != 0 {
            return None;
        }
        cur = rest / 2;
        w.push(cur);
    }
    Some(w)
}

/// Solves the chain on a window `y_{-N} … y_N`.
pub fn solve_chain(window: &[Symbol]) -> Result<SolutionSet, ArreError> {
    if window.len() < 3 || window.len().is_multiple_of(2) {
        return Err(ArreError::WindowLength(window.len()));
    }
    let n = window.len() / 2;
    if let Some((i, &v)) = window.iter().enumerate().find(|(_, &v)| v < 0) {
        return Err(ArreError::NegativeSymbol {
            position: i as i64 - n as i64,
            symbol: v,
        });
    }
    Ok(SolutionSet {
        n,
        words: chain_solutions(window),
    })
}

pub fn solution_set(y: &BiSeq, n: usize) -> Result<SolutionSet, ArreError> {
    let n = n.max(1) as i64;
    solve_chain(&y.restrict(-n, n).expect("nonempty window"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ROutcome {
    Found(usize),
    /// `S_N(y)` is empty, so `y` is not in the image.
    Empty {
        at: usize,
    },
    Exhausted {
        n_max: usize,
    },
}

/// The stabilization index `r(y)`: first `N` with `#S_N(y) = 1`, confirmed at `N + 1`.
pub fn compute_r(y: &BiSeq, n_max: usize) -> Result<ROutcome, ArreError> {
    for n in 1..=n_max.max(1) {
        match solution_set(y, n)?.len() {
            0 => return Ok(ROutcome::Empty { at: n }),
            1 => {
                return Ok(match solution_set(y, n + 1)?.len() {
                    0 => ROutcome::Empty { at: n + 1 },
                    _ => ROutcome::Found(n),
                })
            }
            _ => {}
        }
    }
    Ok(ROutcome::Exhausted { n_max })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inversion {
    Preimage(BiSeq),
    NotInImage(String),
    Inconclusive { n_max: usize },
}

fn check_input(y: &BiSeq) -> Result<(Word, Word), ArreError> {
    let (Some(right), Some(left)) = (y.right().period_word(), y.left().period_word()) else {
        return Err(ArreError::UnsupportedTail);
    };
    let lo = y.center_lo();
    let bad = y
        .center()
        .iter()
        .enumerate()
        .map(|(i, &s)| (lo + i as i64, s))
        .chain(left.iter().map(|&s| (lo - 1, s)))
        .chain(right.iter().map(|&s| (y.center_hi(), s)))
        .find(|&(_, s)| s < 0);
    if let Some((position, symbol)) = bad {
        return Err(ArreError::NegativeSymbol { position, symbol });
    }
    Ok((left, right))
}

/// The unique periodic pattern `x_hi, x_{hi+1}, …` solving the chain inside a
/// right tail with period word `word`.
fn right_tail_pattern(word: &[Symbol]) -> Option<Word> {
    (0..=word[0]).find_map(|t| {
        let mut xs = vec![t];
        let mut cur = t;
        for &v in word {
            let rest = v - cur;
            if rest < 0 || rest % 2 != 0 {
                return None;
            }
            cur = rest / 2;
            xs.push(cur);
        }
        (cur == t).then(|| {
            xs.pop();
            xs
        })
    })
}

/// Pattern `x_{lo-1}, x_{lo-2}, …` inside a left tail read outward.
fn left_tail_pattern(word: &[Symbol]) -> Option<Word> {
    let p = word.len();
    (0..=word[0]).find_map(|t| {
        let mut xs = vec![t];
        let mut cur = t;
        for d in 0..p {
            cur = word[(d + 1) % p] - 2 * cur;
            if cur < 0 {
                return None;
            }
            xs.push(cur);
        }
        (cur == t).then(|| {
            xs.pop();
            xs
        })
    })
}

/// Reconstructs `x` with `Ψ(x) = y`. Tail patterns are forced: any other
/// solution of the tail chain drifts away geometrically and leaves N.
fn invert_exact(y: &BiSeq) -> Result<Result<BiSeq, String>, ArreError> {
    let (left, right) = check_input(y)?;
    let Some(xr) = right_tail_pattern(&right) else {
        return Ok(Err("right tail admits no preimage".into()));
    };
    let Some(xl) = left_tail_pattern(&left) else {
        return Ok(Err("left tail admits no preimage".into()));
    };
    let lo = y.center_lo();
    let hi = y.center_hi();
    let mut center = vec![0; (hi - lo) as usize];
    let mut next = xr[0];
    for n in (lo - 1..hi).rev() {
        let v = y.symbol_at(n) - 2 * next;
        if v < 0 {
            return Ok(Err(format!("negative preimage symbol forced at {n}")));
        }
        if n >= lo {
            center[(n - lo) as usize] = v;
        } else if v != xl[0] {
            return Ok(Err(format!("left tail and center disagree at {n}")));
        }
        next = v;
    }
    let left_tail = Tail::periodic(xl).expect("nonempty pattern");
    let right_tail = Tail::periodic(xr).expect("nonempty pattern");
    Ok(Ok(BiSeq::new(left_tail, lo, center, right_tail)))
}

pub fn invert(y: &BiSeq, n_max: usize) -> Result<Inversion, ArreError> {
    let x = match invert_exact(y)? {
        Ok(x) => x,
        Err(reason) => return Ok(Inversion::NotInImage(reason)),
    };
    if !seq_equal(&image(&x), y) {
        return Err(ArreError::RoundTrip);
    }
    match compute_r(y, n_max)? {
        ROutcome::Found(r) => {
            let s = solution_set(y, r)?;
            let r = r as i64;
            if s.words[0] != x.restrict(-r, r + 1).expect("nonempty window") {
                return Err(ArreError::RoundTrip);
            }
            Ok(Inversion::Preimage(x))
        }
        ROutcome::Empty { .. } => Err(ArreError::RoundTrip),
        ROutcome::Exhausted { n_max } => Ok(Inversion::Inconclusive { n_max }),
    }
}

/// Membership in `Y`. Exact for constant and periodic tails; for arithmetic
/// tails only an empty chain window decides.
pub fn membership(y: &BiSeq, n_max: usize) -> Result<Membership, ArreError> {
    match invert_exact(y) {
        Ok(Ok(_)) => Ok(Membership::Member),
        Ok(Err(_)) => Ok(Membership::NotMember),
        Err(ArreError::UnsupportedTail) => Ok(match compute_r(y, n_max)? {
            ROutcome::Empty { .. } => Membership::NotMember,
            _ => Membership::Unknown,
        }),
        Err(e) => Err(e),
    }
}

/// `Ψ(x)`.
pub fn image(x: &BiSeq) -> BiSeq {
    match Morphism::arre().eval_full(x) {
        Ok(FullImage::Full(y)) => y,
        other => panic!("arre image of {x} unavailable: {other:?}"),
    }
}

/// `Φ_0(y) = x^y_0`, read from the singleton `S_{r(y)}(y)`.
pub fn phi0(y: &BiSeq, n_max: usize) -> Result<Symbol, ArreError> {
    match compute_r(y, n_max)? {
        ROutcome::Found(r) => {
            let s = solution_set(y, r)?;
            Ok(s.words[0][s.center_index()])
        }
        ROutcome::Empty { at } => Err(ArreError::NotInImage(format!("S_{at} is empty"))),
        ROutcome::Exhausted { n_max } => Err(ArreError::NoStabilization(n_max)),
    }
}

/// `h^y` on `{-r(y), …, r(y)}`.
pub fn barrier_h_y(y: &BiSeq, n_max: usize) -> Result<FinMap, ArreError> {
    match compute_r(y, n_max)? {
        ROutcome::Found(r) => Ok(FinMap::window(y, -(r as i64), r as i64)),
        ROutcome::Empty { at } => Err(ArreError::NotInImage(format!("S_{at} is empty"))),
        ROutcome::Exhausted { n_max } => Err(ArreError::NoStabilization(n_max)),
    }
}

/// The barrier `{C_Y(h^y)}` with `φ(C_Y(h^y)) = x^y_0`, as a cell locator for `Φ`.
#[derive(Debug, Clone, Copy)]
pub struct InverseCells {
    pub n_max: usize,
}

impl CellLocator for InverseCells {
    fn cell(&self, z: &BiSeq) -> Result<(FinMap, Symbol), MorphismError> {
        let wrap = |e: ArreError| MorphismError::Unsupported(e.to_string());
        let h = barrier_h_y(z, self.n_max).map_err(wrap)?;
        let v = phi0(z, self.n_max).map_err(wrap)?;
        Ok((h, v))
    }

    fn finite_degree(&self) -> bool {
        false
    }

    fn common_point(&self) -> Option<i64> {
        Some(0)
    }

    fn describe(&self) -> String {
        "arre-inverse".into()
    }
}

/// Two preimages whose images share the central block on `[-L, L]` but
/// differ at coordinate 0.
pub fn ambiguity_pair(l: u32) -> (BiSeq, BiSeq) {
    let l = l.max(1) as i64;
    // x_k = 2^{L+1-k} on [-L, L+1]
    let x = BiSeq::finite_support(-l, (-l..=l + 1).map(|k| 1 << (l + 1 - k)).collect());
    // x'_k = 2^{2j+1} at k = L+1-2j, 0 <= j <= L
    let lo = 1 - l;
    let mut center = vec![0; (2 * l + 1) as usize];
    for j in 0..=l {
        let k = l + 1 - 2 * j;
        center[(k - lo) as usize] = 1 << (2 * j + 1);
    }
    (x, BiSeq::finite_support(lo, center))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessRow {
    pub bound: i64,
    /// Points `y(ℓ)` with `|ℓ| <= bound`, `ℓ ∉ {0,1}`, each in `Y`, with
    /// `Φ_0 = 0`, and outside the largest zero cell that avoids `{0,1}`.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    /// `(j, Φ_0(y^j))` for the family `y^j_0 = 2j, y^j_1 = j`.
    pub family: Vec<(i64, Symbol)>,
    pub rows: Vec<WitnessRow>,
    pub ok: bool,
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, v) in &self.family {
            writeln!(f, "family j={j} phi0={v}")?;
        }
        for r in &self.rows {
            writeln!(f, "bound={} witnesses={}", r.bound, r.count)?;
        }
        write!(
            f,
            "verdict={}",
            if self.ok {
                "not-finite-degree"
            } else {
                "failed"
            }
        )
    }
}

/// Evidence that `Φ` has no finite-degree barrier: the `y^j` family forces
/// every zero-valued cell to avoid `{0,1}` and to be identically 0, and each
/// such cell misses some `y(ℓ)` with `y_{ℓ-1} = 2, y_ℓ = 1`.
pub fn phi_not_finite_degree_witness(bound: i64, n_max: usize) -> Result<WitnessReport, ArreError> {
    let bound = bound.max(1);
    let mut ok = true;
    let mut family = Vec::new();
    for j in 1..=bound {
        let xj = BiSeq::finite_support(1, vec![j]);
        let yj = image(&xj);
        ok &= yj.symbol_at(0) == 2 * j && yj.symbol_at(1) == j;
        ok &= matches!(invert(&yj, n_max)?, Inversion::Preimage(ref x) if seq_equal(x, &xj));
        let v = phi0(&yj, n_max)?;
        ok &= v == 0;
        family.push((j, v));
    }
    let mut rows = Vec::new();
    for b in 1..=bound {
        let zero_cell =
            FinMap::from_pairs((-b..=b).filter(|i| !(0..=1).contains(i)).map(|i| (i, 0)))
                .expect("distinct positions");
        let mut count = 0;
        for l in (-b..=b).filter(|l| !(0..=1).contains(l)) {
            let x = BiSeq::finite_support(l, vec![1]);
            let y = image(&x);
            let member = matches!(invert(&y, n_max)?, Inversion::Preimage(_));
            if member && phi0(&y, n_max)? == 0 && !zero_cell.contains(&y) {
                count += 1;
            }
        }
        ok &= count == (2 * b - 1) as usize;
        rows.push(WitnessRow { bound: b, count });
    }
    ok &= rows.windows(2).all(|w| w[1].count > w[0].count);
    Ok(WitnessReport { family, rows, ok })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_window_has_single_zero_solution() {
        let s = solve_chain(&[0, 0, 0]).unwrap();
        assert_eq!(s.words, vec![vec![0, 0, 0, 0]]);
    }

    #[test]
    fn small_chain_by_hand() {
        // y = [0, 6, 3]: w_{-1} = w_0 = 0, w_1 = 3, then 3 - 3 = 0
        let s = solve_chain(&[0, 6, 3]).unwrap();
        assert_eq!(s.words, vec![vec![0, 0, 3, 0]]);
        assert!(solve_chain(&[1, 0]).is_err());
        assert!(solve_chain(&[0, -1, 0]).is_err());
    }

    #[test]
    fn r_of_zero_sequence() {
        let z = BiSeq::constant(0);
        assert_eq!(compute_r(&z, 8).unwrap(), ROutcome::Found(1));
        assert_eq!(barrier_h_y(&z, 8).unwrap().to_string(), "{-1:0,0:0,1:0}");
        assert_eq!(
            invert(&z, 8).unwrap(),
            Inversion::Preimage(BiSeq::constant(0))
        );
    }

    #[test]
    fn ones_are_not_in_the_image() {
        assert!(matches!(
            invert(&BiSeq::constant(1), 16).unwrap(),
            Inversion::NotInImage(_)
        ));
        assert_eq!(
            membership(&BiSeq::constant(1), 16).unwrap(),
            Membership::NotMember
        );
        assert_eq!(
            membership(&BiSeq::constant(3), 16).unwrap(),
            Membership::Member
        );
    }

    #[test]
    fn unit_impulse_round_trip() {
        let x = BiSeq::finite_support(0, vec![1]);
        let y = image(&x);
        assert_eq!(y.restrict(-1, 0).unwrap(), vec![2, 1]);
        assert_eq!(invert(&y, 16).unwrap(), Inversion::Preimage(x));
    }

    #[test]
    fn periodic_tail_inversion() {
        let x = BiSeq::new(
            Tail::periodic(vec![1, 4]).unwrap(),
            -2,
            vec![7, 0, 3],
            Tail::periodic(vec![2, 0, 5]).unwrap(),
        );
        let y = image(&x);
        assert!(matches!(invert(&y, 32).unwrap(), Inversion::Preimage(ref z) if seq_equal(z, &x)));
    }

    #[test]
    fn ambiguity_pair_at_one() {
        let (x, xp) = ambiguity_pair(1);
        let (y, yp) = (image(&x), image(&xp));
        assert_eq!(y.restrict(-1, 1).unwrap(), vec![16, 8, 4]);
        assert_eq!(yp.restrict(-1, 1).unwrap(), vec![16, 8, 4]);
        assert_eq!((x.symbol_at(0), xp.symbol_at(0)), (4, 8));
        let s = solve_chain(&[16, 8, 4]).unwrap();
        let zeros: Vec<_> = s.words.iter().map(|w| w[1]).collect();
        assert!(zeros.contains(&4) && zeros.contains(&8));
    }

    #[test]
    fn ambiguity_pairs_share_central_block() {
        for l in 1..=6 {
            let (x, xp) = ambiguity_pair(l);
            let l = l as i64;
            assert_eq!(image(&x).restrict(-l, l), image(&xp).restrict(-l, l));
            assert_ne!(x.symbol_at(0), xp.symbol_at(0));
        }
    }

    #[test]
    fn witness_counts_grow() {
        let rep = phi_not_finite_degree_witness(4, 32).unwrap();
        assert!(rep.ok, "{rep}");
        let counts: Vec<_> = rep.rows.iter().map(|r| r.count).collect();
        assert_eq!(counts, vec![1, 3, 5, 7]);
    }
}
